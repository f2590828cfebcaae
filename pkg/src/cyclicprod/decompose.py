"""Cancellation structure of a product of two reduced words.

``shirv_decompose`` classifies how ``uv`` collapses to ``u*v``;
``shirv4_decompose`` realises a rotation ``d`` of ``u*v`` through a pair of
rotations of the factors; ``solve_special`` handles ``u*(u^-1 ... w)``
style products where a conjugating word ``h`` may be needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .word_core import (
    EMPTY,
    Word,
    as_word,
    concat,
    cyc_product,
    cyclically_reduce,
    inverse,
    is_reduced,
    is_rotation,
    reduce,
    rotation_conjugators,
    rotations,
)


class NotReduced(ValueError):
    pass


class InverseInputs(ValueError):
    pass


class NotACyclicPermutation(ValueError):
    pass


class SearchExhausted(RuntimeError):
    """A search whose success is guaranteed came back empty."""


def _require_reduced(**words: Word) -> None:
    for name, w in words.items():
        if not is_reduced(w):
            raise NotReduced(f"{name} = {w} is not reduced")


def cancelling_overlap(u: Word, v: Word) -> Word:
    """Longest suffix a of u such that a^-1 is a prefix of v."""
    n = 0
    while n < len(u) and n < len(v) and u[len(u) - 1 - n] == v[n].inverse():
        n += 1
    return u[len(u) - n:]


# -- two-factor decomposition ---------------------------------------------------

class ShirvTag(str, Enum):
    CASE1 = "CASE1"
    CASE2 = "CASE2"
    CASE3 = "CASE3"


@dataclass(frozen=True)
class ShirvCase:
    tag: ShirvTag
    witnesses: dict
    a: Word
    product: Word  # u*v

    def __getattr__(self, name):
        try:
            return self.__dict__["witnesses"][name]
        except KeyError:
            raise AttributeError(name) from None

    def check(self, u, v) -> list[tuple[str, bool]]:
        """Tag equations, each as a named boolean."""
        u, v = as_word(u), as_word(v)
        w = self.witnesses
        c = self.product
        red = reduce(concat(u, v))
        items = [("product", c == cyc_product(u, v))]
        if self.tag is ShirvTag.CASE1:
            u1, a, s = w["u1"], w["a"], w["s"]
            items += [
                ("u = u1 a", u == concat(u1, a)),
                ("v = a^-1 s c s^-1 u1^-1", v == concat(inverse(a), s, c, inverse(s), inverse(u1))),
                ("rho(uv) = u1 s c s^-1 u1^-1", red == concat(u1, s, c, inverse(s), inverse(u1))),
            ]
        elif self.tag is ShirvTag.CASE2:
            c1, c2, t, a = w["c1"], w["c2"], w["t"], w["a"]
            items += [
                ("c1, c2 nonempty", bool(c1) and bool(c2)),
                ("u*v = c1 c2", c == concat(c1, c2)),
                ("u = t c1 a", u == concat(t, c1, a)),
                ("v = a^-1 c2 t^-1", v == concat(inverse(a), c2, inverse(t))),
                ("rho(uv) = t c1 c2 t^-1", red == concat(t, c1, c2, inverse(t))),
                ("rho(vu) = a^-1 c2 c1 a", reduce(concat(v, u)) == concat(inverse(a), c2, c1, a)),
                ("v*u = c2 c1", cyc_product(v, u) == concat(c2, c1)),
            ]
        else:
            v1, s, a = w["v1"], w["s"], w["a"]
            items += [
                ("u = v1^-1 s c s^-1 a", u == concat(inverse(v1), s, c, inverse(s), a)),
                ("v = a^-1 v1", v == concat(inverse(a), v1)),
                ("rho(uv) = v1^-1 s c s^-1 v1", red == concat(inverse(v1), s, c, inverse(s), v1)),
            ]
        return items


def shirv_decompose(u, v) -> ShirvCase:
    u, v = as_word(u), as_word(v)
    _require_reduced(u=u, v=v)
    a = cancelling_overlap(u, v)
    u_rest, v_rest = u[: len(u) - len(a)], v[len(a):]
    t, c = cyclically_reduce(concat(u_rest, v_rest))
    if not c and not t:
        raise InverseInputs(f"u = v^-1 for u = {u}")
    n = len(t)
    if n < len(u_rest) and n < len(v_rest):
        tag = ShirvTag.CASE2
        wit = {"c1": u_rest[n:], "c2": v_rest[: len(v_rest) - n], "t": t, "a": a}
    elif len(u_rest) <= n:
        tag = ShirvTag.CASE1
        wit = {"u1": u_rest, "a": a, "s": t[len(u_rest):]}
    else:
        tag = ShirvTag.CASE3
        # t = v1^-1 s, so s is what is left of t once v1^-1 is stripped
        wit = {"v1": v_rest, "s": t[len(v_rest):], "a": a}
    out = ShirvCase(tag, wit, a, c)
    bad = [name for name, ok in out.check(u, v) if not ok]
    if bad:
        raise AssertionError(f"decomposition failed its own equations: {bad}")
    return out


# -- rotation of u*v through rotations of u and v -------------------------------

class Shirv4Tag(str, Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class Shirv4Case:
    tag: Shirv4Tag
    p: Word
    q0: Word
    p_is_u: bool
    witnesses: dict
    exact_product: bool = True

    def check(self, u, v, d) -> list[tuple[str, bool]]:
        u, v, d = as_word(u), as_word(v), as_word(d)
        p, q0, w = self.p, self.q0, self.witnesses
        uv = cyc_product(u, v)

        def product_ok(x):
            return x == uv if self.exact_product else is_rotation(x, uv)

        pairing = (is_rotation(u, p) and is_rotation(v, q0)) or (
            is_rotation(v, p) and is_rotation(u, q0))
        items = [("pairing", pairing)]
        if self.tag is Shirv4Tag.A:
            r, c1, c2 = w["r"], w["c1"], w["c2"]
            pq = cyc_product(p, q0)
            items += [
                ("q0 = p^-1 r c1 c2 r^-1", q0 == concat(inverse(p), r, c1, c2, inverse(r))),
                ("p*q0 = c1 c2", pq == concat(c1, c2)),
                ("d = c2 c1", d == concat(c2, c1)),
                ("p*q0 = u*v", product_ok(pq)),
                ("d = u*v implies c2 = 1", d != uv or not c2),
            ]
        else:
            b, e1, e2, e3 = w["b"], w["e1"], w["e2"], w["e3"]
            items += [
                ("p = e2 b", p == concat(e2, b)),
                ("q0 = b^-1 e3 e1", q0 == concat(inverse(b), e3, e1)),
                ("d = e1 e2 e3", d == concat(e1, e2, e3)),
                ("e2 != 1", bool(e2)),
                ("e3 e1 != 1", bool(e3) or bool(e1)),
                ("p*q0 or q0*p = u*v", product_ok(cyc_product(p, q0)) or product_ok(cyc_product(q0, p))),
                ("d = u*v implies e1 = 1", d != uv or not e1),
            ]
        return items


def _product_matches(x: Word, uv: Word, exact: bool) -> bool:
    return x == uv if exact else is_rotation(x, uv)


def _shirv4_case_a(p: Word, q0: Word, d: Word, uv: Word, exact: bool = True) -> Optional[dict]:
    c = cyc_product(p, q0)
    if not _product_matches(c, uv, exact):
        return None
    extra = len(q0) - len(p) - len(c)
    if extra < 0 or extra % 2:
        return None
    rlen = extra // 2
    r = q0[len(p): len(p) + rlen]
    if q0 != concat(inverse(p), r, c, inverse(r)):
        return None
    # c2 shortest first so that d = u*v yields c2 = 1
    for k in range(len(c), -1, -1):
        c1, c2 = c[:k], c[k:]
        if concat(c2, c1) == d:
            return {"r": r, "c1": c1, "c2": c2}
    return None


def _shirv4_case_b(p: Word, q0: Word, d: Word, uv: Word, exact: bool = True) -> Optional[dict]:
    if not (_product_matches(cyc_product(p, q0), uv, exact)
            or _product_matches(cyc_product(q0, p), uv, exact)):
        return None
    is_product = d == uv
    for i in range(1, len(p) + 1):
        e2, b = p[:i], p[i:]
        if q0[: len(b)] != inverse(b):
            continue
        rest = q0[len(b):]
        for j in range(len(rest) + 1):
            e3, e1 = rest[:j], rest[j:]
            if not e3 and not e1:
                continue
            if is_product and e1:
                continue
            if concat(e1, e2, e3) == d:
                return {"b": b, "e1": e1, "e2": e2, "e3": e3}
    return None


def shirv4_decompose(u, v, d) -> Shirv4Case:
    u, v, d = as_word(u), as_word(v), as_word(d)
    _require_reduced(u=u, v=v)
    uv = cyc_product(u, v)
    if not uv:
        raise InverseInputs(f"u = v^-1 for u = {u}")
    if not is_rotation(uv, d):
        raise NotACyclicPermutation(f"{d} is not a rotation of {uv}")
    # the exact pass wants p*q0 (or q0*p) to be u*v itself; when u or v is
    # not cyclically reduced that can be impossible, and a rotation of u*v is
    # accepted instead
    for exact in (True, False):
        for p_is_u, first, second in ((True, u, v), (False, v, u)):
            for p in rotations(first):
                for q0 in rotations(second):
                    wit = _shirv4_case_a(p, q0, d, uv, exact)
                    tag = Shirv4Tag.A
                    if wit is None:
                        wit = _shirv4_case_b(p, q0, d, uv, exact)
                        tag = Shirv4Tag.B
                    if wit is not None:
                        return Shirv4Case(tag, p, q0, p_is_u, wit, exact)
    raise SearchExhausted(f"no decomposition for u={u}, v={v}, d={d}")


# -- u' * (h f h^-1) with f = u^-1 * w ------------------------------------------

@dataclass(frozen=True)
class SpecialCaseSolution:
    u_prime: Word
    u_second: Word
    h: Word
    f: Word
    g: Word
    strictly_basic: Optional[bool] = field(default=None, compare=False)

    def check(self, u, w) -> list[tuple[str, bool]]:
        u, w = as_word(u), as_word(w)
        target = cyclically_reduce(w)[1]
        h, f, g = self.h, self.f, self.g
        reduced_rots = {reduce(r) for r in rotations(u)}
        hf = concat(h, f, inverse(h))
        hg = concat(h, g, inverse(h))
        items = [
            ("f = u^-1 * w", f == cyc_product(inverse(u), w)),
            ("g = w * u^-1", g == cyc_product(w, inverse(u))),
            ("u' reduced rotation of u", self.u_prime in reduced_rots),
            ("u'' reduced rotation of u", self.u_second in reduced_rots),
            ("rho^(w) ~ u' * (h f h^-1)", is_rotation(target, cyc_product(self.u_prime, hf))),
            ("rho^(w) ~ (h g h^-1) * u''", is_rotation(target, cyc_product(hg, self.u_second))),
        ]
        if h:
            items += [
                ("h != 1 implies f = g", f == g),
                ("h != 1 implies u' = u''", self.u_prime == self.u_second),
                ("h != 1 implies literal u' h f h^-1",
                 cyc_product(self.u_prime, hf) == concat(self.u_prime, hf)),
            ]
        return items


def _special_is_strictly_basic(u: Word, w: Word, u_prime: Word, h: Word, f: Word) -> bool:
    """Whether u' h f h^-1 can be written with one conjugator for both u-terms.

    f = rho(m u^-1 w m^-1) with m from the cyclic reduction of u^-1 w; the
    u-term of u' * (h f h^-1) carries a rotation conjugator delta, and the
    u^-1 term carries h m.  Strictly basic means delta can be taken as h m.
    """
    if not reduce(u):
        return True  # every word conjugates 1 to itself
    t, _ = cyclically_reduce(concat(inverse(u), w))
    m = inverse(t)
    target = reduce(concat(h, m))
    return target in rotation_conjugators(u, u_prime, reduced=True)


def solve_special(u, w) -> SpecialCaseSolution:
    u, w = as_word(u), as_word(w)
    f = cyc_product(inverse(u), w)
    g = cyc_product(w, inverse(u))
    target = cyclically_reduce(w)[1]
    primes = []
    for r in rotations(u):
        rr = reduce(r)
        if rr not in primes:
            primes.append(rr)

    u1 = next((p for p in primes if is_rotation(target, cyc_product(p, f))), None)
    u2 = next((p for p in primes if is_rotation(target, cyc_product(g, p))), None)
    if u1 is not None and u2 is not None:
        sol = SpecialCaseSolution(u1, u2, EMPTY, f, g,
                                  _special_is_strictly_basic(u, w, u1, EMPTY, f))
        return _checked(sol, u, w)

    if f == g:
        for c in rotations(target):
            for p in primes:
                if c[: len(p)] != p:
                    continue
                extra = len(c) - len(p) - len(f)
                if extra <= 0 or extra % 2:
                    continue
                h = c[len(p): len(p) + extra // 2]
                if c != concat(p, h, f, inverse(h)):
                    continue
                sol = SpecialCaseSolution(p, p, h, f, g,
                                          _special_is_strictly_basic(u, w, p, h, f))
                if all(ok for _, ok in sol.check(u, w)):
                    return sol
    raise SearchExhausted(f"no special-case solution for u={u}, w={w}")


def _checked(sol: SpecialCaseSolution, u: Word, w: Word) -> SpecialCaseSolution:
    bad = [name for name, ok in sol.check(u, w) if not ok]
    if bad:
        raise SearchExhausted(f"special-case solution fails {bad} for u={u}, w={w}")
    return sol
