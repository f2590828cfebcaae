"""Combinatorial van Kampen diagrams over a free group.

A diagram is a planar 2-complex kept without coordinates: vertices, labelled
directed edges, faces given as closed edge cycles, and the boundary cycle
read from the base point.  A cycle entry ``(edge_id, +1)`` crosses an edge
along its arrow and reads its letter; ``(edge_id, -1)`` crosses it backwards
and reads the inverse letter.

Diagrams are built as bouquets of lollipops from products of conjugates and
reduced by folding pairs of adjacent boundary edges whose labels cancel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .identities import ConjugateProduct
from .word_core import EMPTY, Letter, Word, as_word, format_word, inverse, is_cyclically_reduced, reduce

Entry = tuple[int, int]


class InvalidCancellationSequence(ValueError):
    pass


class HasSpines(ValueError):
    pass


class NotCyclicallyReducedBoundary(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int
    letter: Letter


@dataclass(frozen=True)
class Face:
    id: int
    cycle: tuple[Entry, ...]


@dataclass(frozen=True)
class Diagram:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]
    base_point: int
    boundary: tuple[Entry, ...]

    def edge(self, eid: int) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def _read(self, cycle: Iterable[Entry]) -> Word:
        emap = {e.id: e for e in self.edges}
        out = []
        for eid, s in cycle:
            ltr = emap[eid].letter
            out.append(ltr if s > 0 else ltr.inverse())
        return Word(out)

    def boundary_label(self) -> Word:
        return self._read(self.boundary)

    def face_labels(self) -> list[Word]:
        return [self._read(f.cycle) for f in self.faces]

    def boundary_path(self) -> list[int]:
        """Vertices visited by the boundary walk, base point first and last."""
        emap = {e.id: e for e in self.edges}
        path = [self.base_point]
        for eid, s in self.boundary:
            e = emap[eid]
            path.append(e.dst if s > 0 else e.src)
        return path

    def face_edges(self) -> set[int]:
        return {eid for f in self.faces for eid, _ in f.cycle}

    def spines(self) -> list[Edge]:
        on_face = self.face_edges()
        return [e for e in self.edges if e.id not in on_face]

    def internal_edges(self) -> list[Edge]:
        """Edges off the boundary cycle."""
        on_boundary = {eid for eid, _ in self.boundary}
        return [e for e in self.edges if e.id not in on_boundary]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "label": str(e.letter),
                       "spine": e.id not in self.face_edges()} for e in self.edges],
            "faces": [{"id": f.id, "cycle": [list(x) for x in f.cycle],
                       "label": format_word(lbl)} for f, lbl in zip(self.faces, self.face_labels())],
            "base_point": self.base_point,
            "boundary": [list(x) for x in self.boundary],
            "boundary_label": format_word(self.boundary_label()),
        }


@dataclass(frozen=True)
class FoldStep:
    position: int
    edge_pair: tuple[int, int]
    discarded_faces: tuple[int, ...] = ()
    closed_loop: bool = False


# -- construction ----------------------------------------------------------------

class _Builder:
    def __init__(self):
        self.next_vertex = 1
        self.next_edge = 0
        self.edges: list[Edge] = []

    def vertex(self) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        return v

    def path(self, start: int, word: Word, end: Optional[int] = None) -> tuple[list[Entry], int]:
        entries, cur = [], start
        for i, ltr in enumerate(word):
            nxt = end if (end is not None and i == len(word) - 1) else self.vertex()
            # store the edge with a positive letter so labels read naturally
            if ltr.sign > 0:
                e = Edge(self.next_edge, cur, nxt, ltr)
                entries.append((e.id, 1))
            else:
                e = Edge(self.next_edge, nxt, cur, ltr.inverse())
                entries.append((e.id, -1))
            self.edges.append(e)
            self.next_edge += 1
            cur = nxt
        return entries, cur


def bouquet(product) -> Diagram:
    """One lollipop per term: a spine reading the conjugator, then a face
    reading the relator, glued at a common base point."""
    terms = ConjugateProduct(product)
    b = _Builder()
    base = 0
    faces, boundary = [], []
    for fid, term in enumerate(terms):
        spine, tip = b.path(base, term.conjugator)
        rel = term.relator
        loop: list[Entry] = []
        if rel:
            loop, _ = b.path(tip, rel, end=tip)
            faces.append(Face(fid, tuple(loop)))
        boundary += spine + loop + [(eid, -s) for eid, s in reversed(spine)]
    vertices = sorted({base} | {e.src for e in b.edges} | {e.dst for e in b.edges})
    return Diagram(tuple(vertices), tuple(b.edges), tuple(faces), base, tuple(boundary))


def face_diagram(relator) -> Diagram:
    return bouquet([(EMPTY, as_word(relator))])


# -- folding ---------------------------------------------------------------------

class _Work:
    """Mutable copy of a diagram used while folding."""

    def __init__(self, d: Diagram):
        self.edges = {e.id: e for e in d.edges}
        self.faces = {f.id: list(f.cycle) for f in d.faces}
        self.base = d.base_point
        self.boundary = list(d.boundary)
        self.vertices = set(d.vertices)

    def ends(self, entry: Entry) -> tuple[int, int]:
        e = self.edges[entry[0]]
        return (e.src, e.dst) if entry[1] > 0 else (e.dst, e.src)

    def label(self, entry: Entry) -> Letter:
        ltr = self.edges[entry[0]].letter
        return ltr if entry[1] > 0 else ltr.inverse()

    def merge_vertex(self, keep: int, gone: int) -> None:
        if keep == gone:
            return
        for eid, e in list(self.edges.items()):
            if gone in (e.src, e.dst):
                self.edges[eid] = Edge(eid, keep if e.src == gone else e.src,
                                       keep if e.dst == gone else e.dst, e.letter)
        if self.base == gone:
            self.base = keep
        self.vertices.discard(gone)

    def merge_edge(self, keep: int, gone: int, flip: int) -> None:
        def swap(cycle):
            return [(keep, s * flip) if eid == gone else (eid, s) for eid, s in cycle]
        for fid in self.faces:
            self.faces[fid] = swap(self.faces[fid])
        self.boundary = swap(self.boundary)
        del self.edges[gone]

    def fold(self, i: int, j: int) -> FoldStep:
        """Identify boundary entries i and j (j follows i, possibly across
        the base point) and drop them from the boundary."""
        a, b = self.boundary[i], self.boundary[j]
        if self.label(a) != self.label(b).inverse():
            raise InvalidCancellationSequence(f"entries {i} and {j} do not cancel")
        start, _ = self.ends(a)
        _, end = self.ends(b)
        closed = start == end
        e1, s1 = a
        e2, s2 = b
        if e1 != e2:
            self.merge_vertex(start, end)
            self.merge_edge(e1, e2, -s2 * s1)
        for k in sorted((i, j), reverse=True):
            del self.boundary[k]
        if j < i:
            # the pair straddled the base point, which moves to where the
            # remaining walk now starts
            self.base = start
        discarded = self.discard_spheres()
        self.collect()
        return FoldStep(i, (e1, e2), discarded, closed and e1 != e2)

    def discard_spheres(self) -> tuple[int, ...]:
        """Remove edge-connected face sets that close up into a sphere: every
        edge they use is off the boundary and crossed exactly twice, once in
        each direction.  A single face qualifies when its own label folds
        shut, which needs an unreduced relator."""
        on_boundary = {eid for eid, _ in self.boundary}
        owners: dict[int, list[tuple[int, int]]] = {}
        for fid, cycle in self.faces.items():
            for eid, s in cycle:
                owners.setdefault(eid, []).append((fid, s))
        seen: set[int] = set()
        gone: list[int] = []
        for fid in sorted(self.faces):
            if fid in seen:
                continue
            comp, stack = set(), [fid]
            while stack:
                f = stack.pop()
                if f in comp:
                    continue
                comp.add(f)
                for eid, _ in self.faces[f]:
                    stack += [g for g, _ in owners[eid] if g not in comp]
            seen |= comp
            edges = {eid for f in comp for eid, _ in self.faces[f]}
            closed = all(
                eid not in on_boundary and len(owners[eid]) == 2
                and owners[eid][0][1] == -owners[eid][1][1]
                for eid in edges)
            if closed:
                gone += sorted(comp)
        for f in gone:
            del self.faces[f]
        return tuple(gone)

    def collect(self) -> None:
        used = {eid for eid, _ in self.boundary}
        used |= {eid for cycle in self.faces.values() for eid, _ in cycle}
        for eid in list(self.edges):
            if eid not in used:
                del self.edges[eid]
        live = {self.base} | {e.src for e in self.edges.values()} | {e.dst for e in self.edges.values()}
        self.vertices &= live
        self.vertices.add(self.base)

    def freeze(self) -> Diagram:
        return Diagram(
            tuple(sorted(self.vertices)),
            tuple(self.edges[k] for k in sorted(self.edges)),
            tuple(Face(k, tuple(self.faces[k])) for k in sorted(self.faces)),
            self.base,
            tuple(self.boundary),
        )


def canonical_order(word) -> list[int]:
    """Fold positions, each relative to the boundary at that moment, that
    replay the left-to-right stack reduction of ``word``."""
    word = as_word(word)
    alive = list(range(len(word)))
    stack: list[int] = []
    order = []
    for i, ltr in enumerate(word):
        if stack and word[stack[-1]] == ltr.inverse():
            j = stack.pop()
            pos = alive.index(j)
            order.append(pos)
            del alive[pos:pos + 2]
        else:
            stack.append(i)
    return order


def fold_all(d: Diagram, order: Optional[Sequence[int]] = None) -> tuple[Diagram, list[FoldStep]]:
    """Fold until the boundary is freely reduced.

    ``order`` lists, step by step, the position i in the current boundary
    whose entries i and i+1 are folded; it must reduce the boundary fully.
    The default replays the stack reduction.
    """
    if order is None:
        order = canonical_order(d.boundary_label())
    work = _Work(d)
    steps = []
    for pos in order:
        if not 0 <= pos < len(work.boundary) - 1:
            raise InvalidCancellationSequence(f"no adjacent pair at position {pos}")
        steps.append(work.fold(pos, pos + 1))
    out = work.freeze()
    label = out.boundary_label()
    if reduce(label) != label:
        raise InvalidCancellationSequence(
            f"sequence stops at {format_word(label)}, which is not reduced")
    return out, steps


def cancellation_orders(word, limit: Optional[int] = None) -> Iterator[list[int]]:
    """Every complete fold sequence of ``word``, depth first."""
    word = as_word(word)

    def rec(w: Word, prefix: list[int]):
        spots = [i for i in range(len(w) - 1) if w[i] == w[i + 1].inverse()]
        if not spots:
            yield list(prefix)
            return
        for i in spots:
            yield from rec(w[:i] + w[i + 2:], prefix + [i])

    gen = rec(word, [])
    return itertools.islice(gen, limit) if limit is not None else gen


def edge_partition(d: Diagram, steps: Sequence[FoldStep]) -> frozenset:
    """Classes of bouquet edges identified by the given fold steps."""
    parent = {e.id: e.id for e in d.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for st in steps:
        a, b = (find(x) for x in st.edge_pair)
        if a != b:
            parent[b] = a
    classes: dict[int, set] = {}
    for eid in parent:
        classes.setdefault(find(eid), set()).add(eid)
    return frozenset(frozenset(c) for c in classes.values())


def fold_cyclic(d: Diagram) -> tuple[Diagram, list[FoldStep]]:
    """Fold the last boundary edge onto the first while their labels cancel,
    moving the base point inward; this realizes the cyclic reduction."""
    work = _Work(d)
    steps = []
    while len(work.boundary) >= 2 and work.label(work.boundary[-1]) == work.label(work.boundary[0]).inverse():
        steps.append(work.fold(len(work.boundary) - 1, 0))
    return work.freeze(), steps


# -- composition -----------------------------------------------------------------

def _renumbered(d: Diagram, voff: int, eoff: int, foff: int, base: int) -> Diagram:
    def v(x):
        return base if x == d.base_point else x + voff
    edges = tuple(Edge(e.id + eoff, v(e.src), v(e.dst), e.letter) for e in d.edges)
    faces = tuple(Face(f.id + foff, tuple((eid + eoff, s) for eid, s in f.cycle)) for f in d.faces)
    return Diagram(tuple(sorted({v(x) for x in d.vertices})), edges, faces, base,
                   tuple((eid + eoff, s) for eid, s in d.boundary))


def glue(d1: Diagram, d2: Diagram) -> Diagram:
    """Wedge two diagrams at their base points; boundary reads d1 then d2."""
    voff = max(d1.vertices, default=0) + 1
    eoff = max((e.id for e in d1.edges), default=-1) + 1
    foff = max((f.id for f in d1.faces), default=-1) + 1
    d2 = _renumbered(d2, voff, eoff, foff, d1.base_point)
    return Diagram(tuple(sorted(set(d1.vertices) | set(d2.vertices))), d1.edges + d2.edges,
                   d1.faces + d2.faces, d1.base_point, d1.boundary + d2.boundary)


def cyc_product_diagram(d1: Diagram, d2: Diagram) -> Diagram:
    """Diagram of the cyclically reduced product of the two boundary labels."""
    folded, _ = fold_all(glue(d1, d2))
    out, _ = fold_cyclic(folded)
    return out


def shift_base(d: Diagram, k: int) -> Diagram:
    if d.spines():
        raise HasSpines("the diagram has edges outside every face")
    if not is_cyclically_reduced(d.boundary_label()):
        raise NotCyclicallyReducedBoundary(format_word(d.boundary_label()))
    n = len(d.boundary)
    if n == 0:
        return d
    k %= n
    boundary = d.boundary[k:] + d.boundary[:k]
    e = d.edge(boundary[0][0])
    base = e.src if boundary[0][1] > 0 else e.dst
    return Diagram(d.vertices, d.edges, d.faces, base, boundary)


def shared_internal_labels(d1: Diagram, d2: Diagram) -> list[str]:
    """Letters labelling an internal edge in both diagrams."""
    a = {str(e.letter) for e in d1.internal_edges()}
    b = {str(e.letter) for e in d2.internal_edges()}
    return sorted(a & b)


# -- export ----------------------------------------------------------------------

def to_dot(d: Diagram) -> str:
    """Graphviz text with vertices renamed v0, v1, ... in id order."""
    names = {v: f"v{i}" for i, v in enumerate(sorted(d.vertices))}
    membership: dict[int, list[int]] = {}
    for f in d.faces:
        for eid, _ in f.cycle:
            if f.id not in membership.setdefault(eid, []):
                membership[eid].append(f.id)
    lines = ["digraph vankampen {"]
    for v in sorted(d.vertices):
        extra = ' [base="true"]' if v == d.base_point else ""
        lines.append(f"  {names[v]}{extra};")
    for e in sorted(d.edges, key=lambda e: e.id):
        faces = ",".join(str(f) for f in sorted(membership.get(e.id, [])))
        spine = "false" if membership.get(e.id) else "true"
        lines.append(f'  {names[e.src]} -> {names[e.dst]} '
                     f'[label="{e.letter}", face="{faces}", spine="{spine}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
