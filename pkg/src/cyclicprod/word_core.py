"""Words over X and X^-1: free and cyclic reduction, cyclically reduced
products, rotations and Levi-style word equations.

A word is an immutable tuple of letters; a letter is a ``(symbol, sign)``
pair with sign +1 or -1.  Everything here is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence


class WordParseError(ValueError):
    pass


class EquationUnbalanced(ValueError):
    """Both sides of a word equation do not spell the same word."""


class Letter(NamedTuple):
    symbol: str
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.symbol, -self.sign)

    def __str__(self):
        return self.symbol if self.sign > 0 else f"{self.symbol}^-1"


class Word(tuple):
    """Finite sequence of letters; equality is letter-by-letter."""

    __slots__ = ()

    def __new__(cls, letters: Iterable = ()):
        return super().__new__(cls, letters)

    def __getitem__(self, key):
        item = tuple.__getitem__(self, key)
        if isinstance(key, slice):
            return Word(item)
        return item

    def __add__(self, other):
        return Word(tuple.__add__(self, tuple(other)))

    def __radd__(self, other):
        return Word(tuple(other) + tuple(self))

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __str__(self):
        return format_word(self)

    @property
    def inv(self) -> "Word":
        return inverse(self)

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)


EMPTY = Word()

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?[1-9][0-9]*))?$")


def parse_word(text: str) -> Word:
    """Parse ``"x y^-2 z"``; ``"1"`` is the empty word."""
    if not isinstance(text, str):
        raise WordParseError(f"expected a string, got {type(text).__name__}")
    stripped = text.strip()
    if stripped == "1":
        return EMPTY
    if not stripped:
        raise WordParseError("empty input; write 1 for the empty word")
    letters = []
    for token in stripped.split():
        m = _TOKEN.match(token)
        if m is None:
            raise WordParseError(f"bad token {token!r} in {text!r}")
        name, exp = m.group(1), m.group(2)
        n = int(exp) if exp is not None else 1
        sign = 1 if n > 0 else -1
        letters.extend([Letter(name, sign)] * abs(n))
    return Word(letters)


def format_word(w: Sequence[Letter]) -> str:
    """Inverse of :func:`parse_word`; runs of one letter use exponents."""
    if len(w) == 0:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = (j - i) * w[i].sign
        parts.append(w[i].symbol if n == 1 else f"{w[i].symbol}^{n}")
        i = j
    return " ".join(parts)


def as_word(w) -> Word:
    """Accept a Word, a string in the word grammar, or a letter sequence."""
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return parse_word(w)
    return Word(Letter(*ltr) for ltr in w)


# -- monoid operations -------------------------------------------------------

def concat(*words: Sequence[Letter]) -> Word:
    out = []
    for w in words:
        out.extend(w)
    return Word(out)


def inverse(w: Sequence[Letter]) -> Word:
    return Word(Letter(s, -e) for s, e in reversed(w))


def reverse(w: Sequence[Letter]) -> Word:
    return Word(reversed(w))


def _cancels(a: Letter, b: Letter) -> bool:
    return a[0] == b[0] and a[1] == -b[1]


def reduce(w: Sequence[Letter]) -> Word:
    """Free reduction, single left-to-right stack pass."""
    stack = []
    for ltr in w:
        if stack and _cancels(stack[-1], ltr):
            stack.pop()
        else:
            stack.append(ltr)
    return Word(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(not _cancels(w[i], w[i + 1]) for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[Letter]) -> bool:
    return is_reduced(w) and (len(w) < 2 or not _cancels(w[-1], w[0]))


def cyclically_reduce(w: Sequence[Letter]) -> tuple[Word, Word]:
    """Return ``(t, c)`` with ``reduce(w) == t c t^-1`` and c cyclically reduced."""
    r = reduce(w)
    i, j = 0, len(r) - 1
    while i < j and _cancels(r[i], r[j]):
        i += 1
        j -= 1
    return r[:i], r[i:j + 1]


def cyclic_reduction(w: Sequence[Letter]) -> Word:
    return cyclically_reduce(w)[1]


def cyc_product(u: Sequence[Letter], v: Sequence[Letter]) -> Word:
    """The cyclically reduced product u*v."""
    return cyclically_reduce(concat(u, v))[1]


def reduced_product(u: Sequence[Letter], v: Sequence[Letter]) -> Word:
    return reduce(concat(u, v))


def conjugate(a: Sequence[Letter], w: Sequence[Letter]) -> Word:
    """Reduced form of ``a w a^-1``."""
    return reduce(concat(a, w, inverse(a)))


# -- rotations -----------------------------------------------------------------

@dataclass(frozen=True)
class CyclicSplit:
    left: Word
    right: Word

    @property
    def word(self) -> Word:
        return concat(self.left, self.right)

    @property
    def rotated(self) -> Word:
        return concat(self.right, self.left)


def rotate(w: Sequence[Letter], k: int) -> Word:
    w = Word(w)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def cyclic_permutations(w: Sequence[Letter]) -> list[tuple[CyclicSplit, Word]]:
    """All rotations by split index 0..|w|-1; the empty word has one."""
    w = Word(w)
    if not w:
        return [(CyclicSplit(EMPTY, EMPTY), EMPTY)]
    out = []
    for k in range(len(w)):
        split = CyclicSplit(w[:k], w[k:])
        out.append((split, split.rotated))
    return out


def rotations(w: Sequence[Letter]) -> list[Word]:
    return [r for _, r in cyclic_permutations(w)]


def rotation_indices(u: Sequence[Letter], v: Sequence[Letter]) -> list[int]:
    """Every k with rotate(u, k) == v."""
    u, v = Word(u), Word(v)
    if len(u) != len(v):
        return []
    if not u:
        return [0]
    return [k for k in range(len(u)) if u[k:] + u[:k] == v]


def is_cyclic_permutation(u: Sequence[Letter], v: Sequence[Letter]) -> Optional[CyclicSplit]:
    """A split u = w1 w2 with v = w2 w1, or None."""
    ks = rotation_indices(u, v)
    if not ks:
        return None
    u = Word(u)
    return CyclicSplit(u[:ks[0]], u[ks[0]:])


def is_rotation(u, v) -> bool:
    return bool(rotation_indices(u, v))


# -- Levi's lemma ----------------------------------------------------------------

class LeviCase(str, Enum):
    LEFT = "LEFT"        # u1 = v1 p and v2 = p u2
    RIGHT = "RIGHT"      # v1 = u1 p and u2 = p v2
    ALIGNED = "ALIGNED"  # u1 = v1, u2 = v2, p = 1


@dataclass(frozen=True)
class LeviSolution:
    case: LeviCase
    p: Word

    def rebuild(self, u1, u2, v1, v2) -> bool:
        """Check the reconstruction identities of this case letter-exactly."""
        p = self.p
        if self.case is LeviCase.ALIGNED:
            return not p and Word(u1) == Word(v1) and Word(u2) == Word(v2)
        if self.case is LeviCase.LEFT:
            return Word(u1) == concat(v1, p) and Word(v2) == concat(p, u2)
        return Word(v1) == concat(u1, p) and Word(u2) == concat(p, v2)


def levi_solve(u1, u2, v1, v2) -> LeviSolution:
    u1, u2, v1, v2 = (as_word(x) for x in (u1, u2, v1, v2))
    if concat(u1, u2) != concat(v1, v2):
        raise EquationUnbalanced(f"{u1}|{u2} != {v1}|{v2}")
    if len(u1) == len(v1):
        return LeviSolution(LeviCase.ALIGNED, EMPTY)
    if len(u1) > len(v1):
        return LeviSolution(LeviCase.LEFT, u1[len(v1):])
    return LeviSolution(LeviCase.RIGHT, v1[len(u1):])


@dataclass(frozen=True)
class BarPlacement:
    """Cut offsets of both sides of u_1...u_m = v_1...v_n.

    ``u_composition[i]`` counts the v-bars falling inside block u_i, and
    symmetrically for ``v_composition``.  A bar sitting exactly on a block
    boundary is charged to the block on its left.
    """

    u_cuts: tuple[int, ...]
    v_cuts: tuple[int, ...]
    u_composition: tuple[int, ...]
    v_composition: tuple[int, ...]


def _cuts(blocks: Sequence[Word]) -> list[int]:
    out, pos = [], 0
    for b in blocks[:-1]:
        pos += len(b)
        out.append(pos)
    return out


def _composition(blocks: Sequence[Word], bars: Sequence[int]) -> tuple[int, ...]:
    spans, pos = [], 0
    for b in blocks:
        spans.append((pos, pos + len(b)))
        pos += len(b)
    counts = [0] * len(blocks)
    for bar in bars:
        for i, (lo, hi) in enumerate(spans):
            if lo < bar <= hi or (bar == 0 and lo == 0 and hi > 0):
                counts[i] += 1
                break
        else:
            # only reachable when every block is empty
            counts[0] += 1
    return tuple(counts)


def equation_bars(us: Sequence, vs: Sequence) -> BarPlacement:
    us = [as_word(x) for x in us]
    vs = [as_word(x) for x in vs]
    if concat(*us) != concat(*vs):
        raise EquationUnbalanced("sides spell different words")
    u_cuts, v_cuts = _cuts(us), _cuts(vs)
    return BarPlacement(
        tuple(u_cuts),
        tuple(v_cuts),
        _composition(us, v_cuts),
        _composition(vs, u_cuts),
    )


def split_reduction(u: Sequence[Letter], k: int) -> tuple[Word, Word]:
    """Split u = u1 u2 with reduce(u1), reduce(u2) the length-k prefix and the
    remaining suffix of reduce(u).
    """
    u = Word(u)
    target = reduce(u)
    if not 0 <= k <= len(target):
        raise ValueError("split offset out of range")
    v1 = target[:k]
    for i in range(len(u) + 1):
        if reduce(u[:i]) == v1 and reduce(u[i:]) == target[k:]:
            return u[:i], u[i:]
    raise AssertionError("no split found")  # impossible for free reduction


def rotation_conjugators(src: Sequence[Letter], dst: Sequence[Letter], *, reduced: bool = False) -> list[Word]:
    """Reduced words a with ``dst = a src a^-1`` in the free group, one pair per
    rotation index carrying src onto dst.

    With ``reduced=True`` the match is ``reduce(rotation) == reduce(dst)``,
    which is how reduced forms of rotations of unreduced words are handled.
    """
    src, dst = Word(src), Word(dst)
    out: list[Word] = []
    if not src:
        if reduce(dst) == EMPTY if reduced else not dst:
            out.append(EMPTY)
        return out
    target = reduce(dst) if reduced else dst
    for k in range(len(src)):
        rot = src[k:] + src[:k]
        if (reduce(rot) if reduced else rot) != target:
            continue
        for a in (reduce(src[k:]), reduce(inverse(src[:k]))):
            if a not in out:
                out.append(a)
    return out
