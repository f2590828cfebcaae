"""Batch checks of the solvers over grids or random samples of word triples."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .twisted_assoc import (
    exhaustive_solutions,
    main_lemma,
    theorem_solve,
    verify_main_lemma,
    verify_theorem,
)
from .word_core import Letter, Word, cyc_product, format_word, is_reduced, rotations


def reduced_words(alphabet: str, max_len: int, min_len: int = 1) -> list[Word]:
    """All freely reduced words over the given symbols, shortest first."""
    letters = [Letter(s, e) for s in alphabet for e in (1, -1)]
    layer: list[tuple] = [()]
    out: list[Word] = []
    for n in range(1, max_len + 1):
        layer = [w + (ltr,) for w in layer for ltr in letters if not w or w[-1] != ltr.inverse()]
        if n >= min_len:
            out += [Word(w) for w in layer]
    return out


def instances(triples: Iterable[tuple[Word, Word, Word]]) -> Iterator[tuple[Word, Word, Word, Word]]:
    """Expand each (u, v, w) into one instance per distinct rotation d of u*v."""
    for u, v, w in triples:
        seen = set()
        for d in rotations(cyc_product(u, v)):
            if d not in seen:
                seen.add(d)
                yield u, v, w, d


def grid_triples(words: list[Word]) -> Iterator[tuple[Word, Word, Word]]:
    return itertools.product(words, repeat=3)


def random_triples(words: list[Word], count: int, seed: int) -> list[tuple[Word, Word, Word]]:
    rng = random.Random(seed)
    return [(rng.choice(words), rng.choice(words), rng.choice(words)) for _ in range(count)]


@dataclass
class InstanceResult:
    u: Word
    v: Word
    w: Word
    d: Word
    theorem_ok: bool = True
    lemma_ok: Optional[bool] = None
    specialization_ok: Optional[bool] = None
    cross_ok: Optional[bool] = None
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.theorem_ok and all(x is not False for x in
                                       (self.lemma_ok, self.specialization_ok, self.cross_ok))

    def to_json(self) -> dict:
        return {"u": format_word(self.u), "v": format_word(self.v), "w": format_word(self.w),
                "d": format_word(self.d), "theorem_ok": self.theorem_ok, "lemma_ok": self.lemma_ok,
                "specialization_ok": self.specialization_ok, "cross_ok": self.cross_ok,
                "errors": self.errors}


def check_instance(u, v, w, d, *, lemma: bool = True, cross_check: bool = False) -> InstanceResult:
    res = InstanceResult(u, v, w, d)
    cert = None
    try:
        cert = theorem_solve(u, v, w, d)
        rep = verify_theorem(u, v, w, d, cert)
        if not rep.passed:
            res.theorem_ok = False
            res.errors += [f"theorem: {i.name}" for i in rep.failures()]
    except Exception as exc:
        res.theorem_ok = False
        res.errors.append(f"theorem: {type(exc).__name__}: {exc}")
    # the lemma needs nonempty reduced u, v, w and d != 1
    if lemma and d and all(x and is_reduced(x) for x in (u, v, w)):
        try:
            lc = main_lemma(u, v, w, d)
            rep = verify_main_lemma(u, v, w, d, lc)
            res.lemma_ok = rep.passed
            res.errors += [f"lemma: {i.name}" for i in rep.failures()]
            uv, vu = cyc_product(u, v), cyc_product(v, u)
            ok = True
            if d in (uv, vu):
                ok = lc.w_prime == w
            if d in (u + v, v + u):
                ok = ok and lc.w_prime == w and lc.q in (u, v)
            res.specialization_ok = ok
            if not ok:
                res.errors.append("lemma: specialization clause")
        except Exception as exc:
            res.lemma_ok = False
            res.errors.append(f"lemma: {type(exc).__name__}: {exc}")
    if cross_check and cert is not None:
        try:
            own = verify_theorem(u, v, w, d, cert).outcome()
            pool = exhaustive_solutions(u, v, w, d)
            res.cross_ok = any(c.key == cert.key and verify_theorem(u, v, w, d, c).outcome() == own
                               for c in pool)
            if not res.cross_ok:
                res.errors.append("cross-check: certificate missing from exhaustive pool")
        except Exception as exc:
            res.cross_ok = False
            res.errors.append(f"cross-check: {type(exc).__name__}: {exc}")
    return res


@dataclass
class SweepSummary:
    total: int = 0
    checked: int = 0
    failures: list[InstanceResult] = field(default_factory=list)
    elapsed: float = 0.0
    completed: bool = True

    @property
    def passed(self) -> bool:
        return self.completed and not self.failures

    def projected_seconds(self) -> Optional[float]:
        if not self.checked:
            return None
        return self.elapsed * self.total / self.checked

    def to_json(self, timing: bool = True) -> dict:
        out = {"total": self.total, "checked": self.checked, "completed": self.completed,
               "failures": [f.to_json() for f in self.failures]}
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
            proj = self.projected_seconds()
            out["projected_seconds"] = None if proj is None else round(proj, 1)
        return out


def run_sweep(items: Iterable[tuple], *, total: Optional[int] = None,
              budget: Optional[float] = None, lemma: bool = True,
              cross_check: bool = False) -> SweepSummary:
    """Check instances until exhausted or until ``budget`` seconds pass."""
    items = list(items) if total is None else items
    summary = SweepSummary(total=len(items) if total is None else total)
    start = time.perf_counter()
    for u, v, w, d in items:
        if budget is not None and time.perf_counter() - start > budget:
            summary.completed = False
            break
        res = check_instance(u, v, w, d, lemma=lemma, cross_check=cross_check)
        summary.checked += 1
        if not res.ok:
            summary.failures.append(res)
    summary.elapsed = time.perf_counter() - start
    if summary.checked < summary.total:
        summary.completed = False
    return summary


def grid_instance_count(words: list[Word]) -> int:
    """Number of (u, v, w, d) instances on the full grid over ``words``."""
    n_rot = [len(set(rotations(cyc_product(u, v)))) for u in words for v in words]
    return sum(n_rot) * len(words)
