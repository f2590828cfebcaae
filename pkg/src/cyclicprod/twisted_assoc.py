"""Certificate-producing solvers for the twisted associativity of ``*``.

For words u, v, w and a rotation d of u*v the solvers return words
(p, q, w', f, h) with ``d*w ~ p*(h f h^-1)`` together with the identity
among relations that this equivalence induces on u, v, w.  A second solver
returns the intermediate (p, q, w', alpha, beta, gamma) equalities.  Every
certificate can be re-checked by an independent verifier built only from
word and identity primitives.

Basicness is handled constructively.  Writing every rotation as a
conjugation ``x' = c x c^-1`` with an explicit conjugator, both sides of an
equivalence become three-term products of conjugates of u, v, w, and the
identity is basic exactly when the conjugators match term by term.  That
pins the conjugator of q to ``mu * eps * m'`` (mu: w -> w', eps: P*Q -> d,
m': the peeled prefix of P*Q), which is what the searches test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional

from .decompose import (
    InverseInputs,
    NotACyclicPermutation,
    SearchExhausted,
    shirv4_decompose,
    shirv_decompose,
    solve_special,
)
from .identities import (
    ConjugateProduct,
    ConjugateTerm,
    EquivalenceFails,
    Identity,
    drop_trivial,
    eval_product,
    identity_from_equivalence,
    is_basic,
)
from .word_core import (
    EMPTY,
    Word,
    as_word,
    concat,
    cyc_product,
    cyclic_reduction,
    cyclically_reduce,
    format_word,
    inverse,
    is_reduced,
    is_rotation,
    reduce,
    rotation_conjugators,
    rotations,
    split_reduction,
)


class PreconditionViolated(ValueError):
    pass


class CaseDispatchFailed(RuntimeError):
    pass


# -- cancellation traces -----------------------------------------------------------

@dataclass(frozen=True)
class CancellationTrace:
    """Which letters of ``word`` disappear on the way to its cyclic reduction.

    ``pairs`` lists cancelled position pairs in the order the canonical
    stack reduction (then end peeling) removes them.
    """

    word: Word
    pairs: tuple[tuple[int, int], ...]

    @property
    def removed(self) -> frozenset:
        return frozenset(i for pr in self.pairs for i in pr)

    def replay(self) -> Word:
        gone = self.removed
        return Word(ltr for i, ltr in enumerate(self.word) if i not in gone)

    def __bool__(self):
        return bool(self.pairs)

    def _partner(self) -> dict[int, int]:
        out = {}
        for i, j in self.pairs:
            out[i], out[j] = j, i
        return out

    @property
    def cancelled_segments(self) -> list[tuple[int, Word]]:
        """Maximal runs of removed positions, read cyclically when a peeled
        pair joins the tail of the word to its head."""
        n = len(self.word)
        gone = self.removed
        if not gone:
            return []
        if len(gone) == n:
            return [(0, self.word)]
        runs = []
        i = 0
        while i < n:
            if i in gone:
                j = i
                while j + 1 < n and j + 1 in gone:
                    j += 1
                runs.append([i, j])
                i = j + 1
            else:
                i += 1
        partner = self._partner()
        if len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == n - 1:
            head, tail = runs[0], runs[-1]
            if any(head[0] <= partner[k] <= head[1] for k in range(tail[0], tail[1] + 1)):
                runs = runs[1:-1] + [[tail[0], head[1] + n]]
        out = []
        for s, e in sorted(runs):
            out.append((s, Word(self.word[k % n] for k in range(s, e + 1))))
        return out

    def cancelled_words(self) -> list[Word]:
        """Every cyclic interval of removed positions closed under the
        cancellation pairing, read as a word; deduplicated, in order of
        starting position then length."""
        n = len(self.word)
        gone = self.removed
        partner = self._partner()
        seen: list[Word] = []
        for s in range(n):
            if s not in gone:
                continue
            members: set[int] = set()
            for length in range(1, n + 1):
                k = (s + length - 1) % n
                if k not in gone:
                    break
                members.add(k)
                if length % 2 == 0 and all(partner[m] in members for m in members):
                    wd = Word(self.word[(s + i) % n] for i in range(length))
                    if wd not in seen:
                        seen.append(wd)

        return seen


def trace_cyclic_reduction(word) -> CancellationTrace:
    word = as_word(word)
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    for i, ltr in enumerate(word):
        if stack and word[stack[-1]] == ltr.inverse():
            pairs.append((stack.pop(), i))
        else:
            stack.append(i)
    lo, hi = 0, len(stack) - 1
    while lo < hi and word[stack[lo]] == word[stack[hi]].inverse():
        pairs.append((stack[lo], stack[hi]))
        lo += 1
        hi -= 1
    return CancellationTrace(word, tuple(pairs))


def cyc_product_traced(u, v) -> tuple[Word, CancellationTrace]:
    u, v = as_word(u), as_word(v)
    trace = trace_cyclic_reduction(concat(u, v))
    return trace.replay(), trace


def _rotation_key(w: Word) -> tuple:
    if not w:
        return ()
    return min(tuple(w[k:] + w[:k]) for k in range(len(w)))


def shares_cancelled_word(t1: CancellationTrace, t2: CancellationTrace) -> bool:
    """Some nonempty cancelled word of t1 is a rotation of one of t2."""
    keys = {_rotation_key(x) for x in t2.cancelled_words() if x}
    return any(_rotation_key(x) in keys for x in t1.cancelled_words() if x)


def cyclic_cancelled_keys(a, b) -> set:
    """Rotation classes of the words cancelled in a*b, read from either seam.

    a*b and b*a are the same cyclic word; which letters the canonical
    reduction pairs up depends on where the circle is cut, so both cuts
    are collected.
    """
    a, b = as_word(a), as_word(b)
    keys = set()
    for word in (concat(a, b), concat(b, a)):
        keys |= {_rotation_key(x) for x in trace_cyclic_reduction(word).cancelled_words() if x}
    return keys


def shares_cyclic_cancelled_word(a1, b1, a2, b2) -> bool:
    """Some nonempty word cancelled in a1*b1 is a rotation of one cancelled
    in a2*b2, either seam allowed on both sides."""
    return bool(cyclic_cancelled_keys(a1, b1) & cyclic_cancelled_keys(a2, b2))


# -- verification reports --------------------------------------------------------

@dataclass(frozen=True)
class CheckItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    items: list[CheckItem] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.items.append(CheckItem(name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(i.ok for i in self.items)

    def failures(self) -> list[CheckItem]:
        return [i for i in self.items if not i.ok]

    def outcome(self) -> list[tuple[str, bool]]:
        return [(i.name, i.ok) for i in self.items]

    def to_json(self) -> list[dict]:
        return [{"name": i.name, "ok": i.ok, "detail": i.detail} for i in self.items]


def _guarded(report: VerificationReport, name: str, fn: Callable[[], bool], detail: str = ""):
    try:
        report.add(name, fn(), detail)
    except Exception as exc:  # a malformed certificate must not crash the verifier
        report.add(name, False, f"{type(exc).__name__}: {exc}")


def _is_reduced_rotation(src: Word, word: Word) -> bool:
    return any(reduce(r) == word for r in rotations(src))


def _pairing_ok(u, v, p, q, *, p_reduced: bool) -> bool:
    def p_match(x):
        return _is_reduced_rotation(x, p) if p_reduced else is_rotation(x, p)
    return (p_match(u) and is_rotation(v, q)) or (p_match(v) and is_rotation(u, q))


def _relators_ok(ident: Identity, allowed: list[Word]) -> bool:
    red = {reduce(a) for a in allowed if reduce(a)}
    red |= {reduce(inverse(a)) for a in list(red)}
    return all(reduce(t.relator) in red for t in (*ident.lhs, *ident.rhs) if reduce(t.relator))


# -- main lemma ------------------------------------------------------------------

class Side(str, Enum):
    MIAR = "MIAR"
    MIAR_PRIME = "MIAR_PRIME"


@dataclass(frozen=True)
class MainLemmaCertificate:
    p: Word
    q: Word
    w_prime: Word
    alpha: Word
    beta: Word
    gamma: Word
    zeta: Word
    eta: Word
    side: Side
    case_label: str
    identity: Identity

    def to_json(self) -> dict:
        return {
            "p": format_word(self.p), "q": format_word(self.q),
            "w_prime": format_word(self.w_prime),
            "alpha": format_word(self.alpha), "beta": format_word(self.beta),
            "gamma": format_word(self.gamma), "zeta": format_word(self.zeta),
            "eta": format_word(self.eta), "side": self.side.value,
            "case_label": self.case_label, "identity": self.identity.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "MainLemmaCertificate":
        return cls(*(as_word(data[k]) for k in
                     ("p", "q", "w_prime", "alpha", "beta", "gamma", "zeta", "eta")),
                   Side(data["side"]), data.get("case_label", ""),
                   Identity.from_json(data["identity"], check=False))


def _rotation_form(u: Word, v: Word, d: Word) -> str:
    """Where d sits among the rotations of the literal product uv."""
    uv = concat(u, v)
    ks = [k for k in range(max(len(uv), 1)) if uv[k:] + uv[:k] == d]
    if not ks:
        return "?"
    k = ks[0]
    if k == 0:
        return "A"
    if k < len(u):
        return "B"
    if k == len(u):
        return "C"
    return "D"


def lemma_case_label(u, v, w, d) -> str:
    """Top-level case: which of the two products cancels, then the
    decomposition tags that split it further."""
    u, v, w, d = (as_word(x) for x in (u, v, w, d))
    uv_cancels = cyc_product(u, v) != concat(u, v)
    dw_cancels = cyc_product(d, w) != concat(d, w)
    try:
        tag = shirv_decompose(d, w).tag.value[-1] if dw_cancels else ""
    except InverseInputs:
        tag = "0"
    if not uv_cancels:
        form = _rotation_form(u, v, d)
        return f"3:{tag}{form}" if dw_cancels else f"1:{form}"
    s4 = shirv4_decompose(u, v, d).tag.value
    return f"4:{tag}{s4}" if dw_cancels else f"2:{s4}"


def _zeta_eta(t_big: CancellationTrace, t_small: CancellationTrace) -> Optional[tuple[Word, Word]]:
    """Reduced zeta, eta (not both empty) with zeta zeta^-1 and eta eta^-1
    cancelled in t_big and zeta eta^-1 eta zeta^-1 cancelled in t_small."""
    halves = []
    for x in t_big.cancelled_words():
        n = len(x) // 2
        half = x[:n]
        if n and x[n:] == inverse(half) and is_reduced(half) and half not in halves:
            halves.append(half)
    small = set(t_small.cancelled_words())
    options = [(z, EMPTY) for z in halves] + [(EMPTY, e) for e in halves] + [
        (z, e) for z in halves for e in halves]
    for z, e in options:
        if concat(z, inverse(e), e, inverse(z)) in small:
            return z, e
    return None


def _lemma_identity(side: Side, P: Word, Q: Word, w: Word, q: Word, w_prime: Word,
                    alpha: Word, beta: Word, kp: Word, eps_m: Word,
                    lam: Word, mu: Word) -> Identity:
    if side is Side.MIAR:
        lhs = [(concat(alpha, lam), Q), (concat(alpha, mu), w)]
        rhs = [(beta, inverse(P)), (concat(kp, eps_m), P), (concat(kp, eps_m), Q), (kp, w)]
    else:
        lhs = [(concat(alpha, mu), w), (concat(alpha, lam), Q)]
        rhs = [(kp, w), (concat(kp, eps_m), Q), (concat(kp, eps_m), P), (beta, inverse(P))]
    return Identity(lhs, rhs)


def _lemma_candidates(u: Word, v: Word, w: Word, d: Word, span: int = 0
                      ) -> Iterator[MainLemmaCertificate]:
    uv = cyc_product(u, v)
    vu = cyc_product(v, u)
    fix_w = d in (uv, vu)
    fix_q = d in (concat(u, v), concat(v, u))
    cancels = bool(trace_cyclic_reduction(concat(d, w)))
    label = lemma_case_label(u, v, w, d)
    w_rots = rotations(w)
    for side in (Side.MIAR, Side.MIAR_PRIME):
        if side is Side.MIAR:
            kt, _ = cyclically_reduce(concat(d, w))
            big = trace_cyclic_reduction(concat(d, w))
        else:
            kt, _ = cyclically_reduce(concat(w, d))
            big = trace_cyclic_reduction(concat(w, d))
        kp = inverse(kt)
        for P, Q in ((u, v), (v, u)):
            first, second = (P, Q) if side is Side.MIAR else (Q, P)
            t0, prod = cyclically_reduce(concat(first, second))
            m1 = inverse(t0)
            q_rots = rotations(Q)
            q_red = [reduce(x) for x in q_rots]
            for w_prime in w_rots:
                if fix_w and w_prime != w:
                    continue
                for mu in _widen(rotation_conjugators(w, w_prime), w, span):
                    for eps in _widen(rotation_conjugators(prod, d), prod, span):
                        eps_m = reduce(concat(eps, m1))
                        lam = reduce(concat(mu, eps_m))
                        target = reduce(concat(lam, Q, inverse(lam)))
                        for q, qr in zip(q_rots, q_red):
                            if qr != target:
                                continue
                            if fix_q and q not in (u, v):
                                continue
                            ze = (EMPTY, EMPTY)
                            if cancels:
                                small = trace_cyclic_reduction(
                                    concat(q, w_prime) if side is Side.MIAR else concat(w_prime, q))
                                ze = _zeta_eta(big, small)
                                if ze is None:
                                    continue
                            alpha = reduce(concat(kp, inverse(mu)))
                            beta = reduce(concat(kp, eps_m))
                            ident = _lemma_identity(side, P, Q, w, q, w_prime, alpha, beta,
                                                    kp, eps_m, lam, mu)
                            yield MainLemmaCertificate(P, q, w_prime, alpha, beta, EMPTY,
                                                       ze[0], ze[1], side, label, ident)


def main_lemma(u, v, w, d) -> MainLemmaCertificate:
    u, v, w, d = (as_word(x) for x in (u, v, w, d))
    for name, x in (("u", u), ("v", v), ("w", w)):
        if not x or not is_reduced(x):
            raise PreconditionViolated(f"{name} must be reduced and nonempty")
    if not d:
        raise PreconditionViolated("d must not be 1")
    if not is_rotation(cyc_product(u, v), d):
        raise PreconditionViolated(f"{d} is not a rotation of u*v")
    for span in _CENTRALIZER_SPANS:
        for cert in _lemma_candidates(u, v, w, d, span):
            if is_basic(cert.identity):
                return cert
    raise CaseDispatchFailed(f"no certificate for u={u}, v={v}, w={w}, d={d}")


def verify_main_lemma(u, v, w, d, cert: MainLemmaCertificate) -> VerificationReport:
    u, v, w, d = (as_word(x) for x in (u, v, w, d))
    rep = VerificationReport()
    p, q, wp = cert.p, cert.q, cert.w_prime
    a, b, g = cert.alpha, cert.beta, cert.gamma
    _guarded(rep, "d ~ u*v", lambda: is_rotation(cyc_product(u, v), d))
    _guarded(rep, "p, q rotations of u, v in some order",
             lambda: _pairing_ok(u, v, p, q, p_reduced=False))
    _guarded(rep, "w' ~ w", lambda: is_rotation(w, wp))
    if cert.side is Side.MIAR:
        left = reduce(concat(a, q, wp, inverse(a)))
        right = reduce(concat(b, inverse(p), inverse(b), g, cyc_product(d, w), inverse(g)))
    else:
        left = reduce(concat(a, wp, q, inverse(a)))
        right = reduce(concat(g, cyc_product(w, d), inverse(g), b, inverse(p), inverse(b)))
    _guarded(rep, "side equation", lambda: left == right,
             f"{format_word(left)} vs {format_word(right)}")
    ident = cert.identity
    _guarded(rep, "identity holds", ident.holds)
    _guarded(rep, "identity matches side equation",
             lambda: eval_product(ident.lhs) == left and eval_product(ident.rhs) == right)
    _guarded(rep, "identity relators are u, v, w", lambda: _relators_ok(ident, [u, v, w]))
    _guarded(rep, "identity basic", lambda: is_basic(ident))
    _guarded(rep, "d = u*v or v*u implies w' = w",
             lambda: d not in (cyc_product(u, v), cyc_product(v, u)) or wp == w)
    _guarded(rep, "d = uv or vu implies w' = w and q in {u, v}",
             lambda: d not in (concat(u, v), concat(v, u)) or (wp == w and q in (u, v)))

    def zeta_eta_ok():
        if not trace_cyclic_reduction(concat(d, w)):
            return True
        z, e = cert.zeta, cert.eta
        if not (z or e) or not is_reduced(z) or not is_reduced(e):
            return False
        if cert.side is Side.MIAR:
            big, small = concat(d, w), concat(q, wp)
        else:
            big, small = concat(w, d), concat(wp, q)
        big_words = set(trace_cyclic_reduction(big).cancelled_words())
        small_words = set(trace_cyclic_reduction(small).cancelled_words())
        return ((not z or concat(z, inverse(z)) in big_words)
                and (not e or concat(e, inverse(e)) in big_words)
                and concat(z, inverse(e), e, inverse(z)) in small_words)
    _guarded(rep, "cancelled words zeta, eta", zeta_eta_ok)
    return rep


# -- theorem ---------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremCertificate:
    p: Word
    q: Word
    w_prime: Word
    f: Word
    h: Word
    identity: Optional[Identity]
    case_label: str = ""
    p_from_u: bool = True

    @property
    def key(self) -> tuple:
        return (self.p, self.q, self.w_prime, self.f, self.h)

    def to_json(self) -> dict:
        out = {
            "p": format_word(self.p), "q": format_word(self.q),
            "w_prime": format_word(self.w_prime), "f": format_word(self.f),
            "h": format_word(self.h),
            "identity": self.identity.to_json() if self.identity is not None else None,
        }
        if self.case_label:
            out["case_label"] = self.case_label
        return out

    @classmethod
    def from_json(cls, data) -> "TheoremCertificate":
        ident = data.get("identity")
        return cls(*(as_word(data[k]) for k in ("p", "q", "w_prime", "f", "h")),
                   Identity.from_json(ident, check=False) if ident else None,
                   data.get("case_label", ""))


@dataclass(frozen=True)
class _Role:
    p_from_u: bool
    P: Word        # reduced word whose rotation gives p
    Q: Word        # reduced word whose rotation gives q
    P_orig: Word
    Q_orig: Word


@dataclass(frozen=True)
class _Candidate:
    role: _Role
    p: Word
    q: Word        # rotation of the reduced Q
    w_prime: Word  # rotation of the reduced w
    f: Word
    h: Word


class _Problem:
    """Shared data for one (u, v, w, d)."""

    def __init__(self, u, v, w, d):
        self.u, self.v, self.w, self.d = (as_word(x) for x in (u, v, w, d))
        self.ur, self.vr, self.wr = reduce(self.u), reduce(self.v), reduce(self.w)
        self.uv = cyc_product(self.u, self.v)
        if not is_rotation(self.uv, self.d):
            raise NotACyclicPermutation(f"{self.d} is not a rotation of {self.uv}")
        kt, self.dw = cyclically_reduce(concat(self.d, self.w))
        self.kp = inverse(kt)
        self.dw_rots = rotations(self.dw)
        self.dw_trace = trace_cyclic_reduction(concat(self.d, self.w))
        self.inputs_reduced = all(is_reduced(x) for x in (self.u, self.v, self.w))
        self.need_shared = self.inputs_reduced and bool(self.d) and bool(self.dw_trace)
        self.fix_w = self.d in (self.uv, cyc_product(self.v, self.u))
        self.fix_q = self.d in (concat(self.u, self.v), concat(self.v, self.u))
        self.roles = (
            _Role(True, self.ur, self.vr, self.u, self.v),
            _Role(False, self.vr, self.ur, self.v, self.u),
        )
        self._dw_keys = None
        self._shared_cache: dict = {}
        self._pq_cache: dict = {}
        self.related = self._relators_related()

    def _relators_related(self) -> bool:
        rel = [x for x in (self.ur, self.vr, self.wr) if x]
        for a, b in itertools.combinations(rel, 2):
            if a == b or a == inverse(b):
                return True
        return any(x == inverse(x) for x in rel)

    # original-word images of reduced rotations
    def orig_rotation(self, orig: Word, red: Word, rot: Word) -> Word:
        if orig == red:
            return rot
        for k in range(max(len(red), 1)):
            if red[k:] + red[:k] == rot:
                a1, a2 = split_reduction(orig, k)
                return concat(a2, a1)
        raise AssertionError("rotation not found")

    def shared_ok(self, q: Word, w_prime: Word) -> bool:
        if not self.need_shared:
            return True
        key = (q, w_prime)
        if key not in self._shared_cache:
            if self._dw_keys is None:
                self._dw_keys = cyclic_cancelled_keys(self.d, self.w)
            self._shared_cache[key] = bool(cyclic_cancelled_keys(q, w_prime) & self._dw_keys)
        return self._shared_cache[key]

    def pq_data(self, role: _Role):
        if role not in self._pq_cache:
            t0, prod = cyclically_reduce(concat(role.P, role.Q))
            self._pq_cache[role] = (inverse(t0), rotation_conjugators(prod, self.d))
        return self._pq_cache[role]


def _unique(seq):
    out = []
    for x in seq:
        if x not in out:
            out.append(x)
    return out


def _positional_hs(prob: _Problem, p: Word, f: Word) -> list[Word]:
    extra = len(prob.dw) - len(p) - len(f)
    if extra <= 0 or extra % 2:
        return []
    n = extra // 2
    out = []
    for c in prob.dw_rots:
        if c[: len(p)] != p:
            continue
        h = c[len(p): len(p) + n]
        if h not in out and c == concat(p, h, f, inverse(h)):
            out.append(h)
    return out


def _iter_candidates(prob: _Problem, *, nontrivial_h: bool,
                     accept: Optional[Callable[[_Role, Word, Word], bool]] = None
                     ) -> Iterator[_Candidate]:
    """Candidates whose words satisfy the equivalence, in index order of
    (role, p, q, w', f, rotation of d*w)."""
    for role in prob.roles:
        ps = _unique(reduce(r) for r in rotations(role.P))
        qs = _unique(rotations(role.Q))
        ws = _unique(rotations(prob.wr))
        for p in ps:
            for q in qs:
                for wp in ws:
                    if accept is not None and not accept(role, q, wp):
                        continue
                    for f in _unique(rotations(cyc_product(q, wp))):
                        if nontrivial_h:
                            for h in _positional_hs(prob, p, f):
                                yield _Candidate(role, p, q, wp, f, h)
                        elif is_rotation(prob.dw, cyc_product(p, f)):
                            yield _Candidate(role, p, q, wp, f, EMPTY)


def _primitive_root(c: Word) -> Word:
    n = len(c)
    for k in range(1, n + 1):
        if n % k == 0 and c[:k] * (n // k) == tuple(c):
            return c[:k]
    return c


def _widen(conjugators: list[Word], src: Word, span: int) -> list[Word]:
    """Multiply each conjugator on the right by powers -span..span of the
    generator of the centralizer of src."""
    if span == 0 or not reduce(src):
        return conjugators
    t, c = cyclically_reduce(src)
    z = reduce(concat(t, _primitive_root(c), inverse(t)))
    out = list(conjugators)
    for j in range(1, span + 1):
        zj = concat(*([z] * j))
        for a in conjugators:
            out += [reduce(concat(a, zj)), reduce(concat(a, inverse(zj)))]
    return _unique(out)


# a conjugator is only defined up to the centralizer of the word it moves;
# the first pass uses rotation conjugators, later passes widen by powers
_CENTRALIZER_SPANS = (0, 1, 2, 3, 4)


def _theorem_identity(prob: _Problem, cand: _Candidate) -> Optional[Identity]:
    """Basic identity for the candidate, or None.

    Conjugators: p = delta P delta^-1, q = lam Q lam^-1, w' = mu w mu^-1,
    f = e (q*w') e^-1, d = eps m' P Q m'^-1 eps^-1 and the peeled prefixes
    m (for q*w'), k (for p*(h f h^-1)), k' (for d*w).
    """
    for span in _CENTRALIZER_SPANS:
        ident = _theorem_identity_span(prob, cand, span)
        if ident is not None:
            return ident
    return None


def _theorem_identity_span(prob: _Problem, cand: _Candidate, span: int) -> Optional[Identity]:
    role = cand.role
    P, Q, W = role.P, role.Q, prob.wr
    p, q, wp, f, h = cand.p, cand.q, cand.w_prime, cand.f, cand.h
    m1, eps_set = prob.pq_data(role)
    t2, qw = cyclically_reduce(concat(q, wp))
    m = inverse(t2)
    hf = concat(h, f, inverse(h))
    t3, right = cyclically_reduce(concat(p, hf))
    k = inverse(t3)
    kp = prob.kp
    mu_set = _widen(rotation_conjugators(W, wp), W, span)
    e_set = _widen(rotation_conjugators(qw, f), qw, span)
    eps_set = _widen(eps_set, cyc_product(P, Q), span)
    c_set = rotation_conjugators(right, prob.dw)
    q_red = reduce(q)

    def build(c, delta, lam, mu, eps, e):
        A = reduce(concat(kp, eps, m1))
        hem = concat(h, e, m)
        lhs = drop_trivial([(A, role.P_orig), (A, role.Q_orig), (kp, prob.w)])
        rhs = drop_trivial([(concat(k, delta), role.P_orig),
                            (concat(k, hem, lam), role.Q_orig),
                            (concat(k, hem, mu), prob.w)])
        try:
            ident = identity_from_equivalence(lhs, rhs, c)
        except EquivalenceFails:
            return None
        return ident if is_basic(ident) else None

    def p_ok(delta):
        return not P or reduce(concat(delta, P, inverse(delta))) == p

    def q_ok(lam):
        return not Q or reduce(concat(lam, Q, inverse(lam))) == q_red

    lam_set = rotation_conjugators(Q, q) or [EMPTY]
    delta_set = rotation_conjugators(P, p, reduced=True) or [EMPTY]
    for mu in mu_set:
        # a trivial product commutes with everything, so its conjugator is
        # solved for instead of enumerated
        if prob.d:
            eps_choices = eps_set
        else:
            eps_choices = _unique(reduce(concat(inverse(mu), lam, inverse(m1))) for lam in lam_set)
        for eps in eps_choices:
            eps_m = reduce(concat(eps, m1))
            if qw:
                e_choices = e_set
            else:
                lam0 = reduce(concat(mu, eps_m))
                e_choices = _unique(
                    reduce(concat(inverse(h), delta, inverse(lam0), inverse(m))) for delta in delta_set)
            for e in e_choices:
                hem = reduce(concat(h, e, m))
                if W:
                    lam = reduce(concat(mu, eps_m))
                    delta = reduce(concat(hem, lam))
                    cs = [reduce(concat(kp, inverse(mu), inverse(hem), inverse(k)))]
                    pairs = [(c, delta, lam) for c in cs]
                else:
                    pairs = []
                    if not right:
                        c_set = _unique(
                            [reduce(concat(kp, eps_m, inverse(lam), inverse(hem), inverse(k)))
                             for lam in lam_set]
                            + [reduce(concat(kp, eps_m, inverse(delta), inverse(k)))
                               for delta in delta_set])
                    for c in c_set:
                        ck = reduce(concat(c, k))
                        lam = reduce(concat(inverse(concat(ck, hem)), kp, eps_m))
                        delta = reduce(concat(inverse(ck), kp, eps_m))
                        pairs.append((c, delta, lam))
                for c, delta, lam in pairs:
                    if p_ok(delta) and q_ok(lam):
                        ident = build(c, delta, lam, mu, eps, e)
                        if ident is not None:
                            return ident
    if not prob.related or span:
        return None
    # coinciding relators allow cancellations across different terms
    for mu, eps, e, c, lam, delta in itertools.product(
            mu_set, eps_set, e_set, c_set, lam_set, delta_set):
        ident = build(c, delta, lam, mu, eps, e)
        if ident is not None:
            return ident
    return None


def _clauses_ok(prob: _Problem, cand: _Candidate, q_orig: Word, wp_orig: Word) -> bool:
    if prob.fix_w and wp_orig != prob.w:
        return False
    if prob.fix_q and (wp_orig != prob.w or q_orig not in (prob.u, prob.v)):
        return False
    return prob.shared_ok(q_orig, wp_orig)


def _finish(prob: _Problem, cand: _Candidate, *, require_identity: bool = True,
            enforce_clauses: bool = True, label: str = "") -> Optional[TheoremCertificate]:
    role = cand.role
    q_orig = prob.orig_rotation(role.Q_orig, role.Q, cand.q)
    wp_orig = prob.orig_rotation(prob.w, prob.wr, cand.w_prime)
    if enforce_clauses and not _clauses_ok(prob, cand, q_orig, wp_orig):
        return None
    ident = _theorem_identity(prob, cand)
    if require_identity and ident is None:
        return None
    return TheoremCertificate(cand.p, q_orig, wp_orig, cand.f, cand.h, ident, label,
                              role.p_from_u)


@dataclass(frozen=True)
class ExhaustiveOptions:
    require_identity: bool = True
    enforce_clauses: bool = True
    include_trivial_h: bool = True
    include_nontrivial_h: bool = True


def exhaustive_solutions(u, v, w, d, options: ExhaustiveOptions = ExhaustiveOptions()
                         ) -> list[TheoremCertificate]:
    prob = _Problem(u, v, w, d)
    phases = []
    if options.include_trivial_h:
        phases.append(False)
    if options.include_nontrivial_h:
        phases.append(True)
    found: dict[tuple, tuple] = {}
    for nontrivial in phases:
        for cand in _iter_candidates(prob, nontrivial_h=nontrivial):
            cert = _finish(prob, cand, require_identity=options.require_identity,
                           enforce_clauses=options.enforce_clauses)
            if cert is not None and cert.key not in found:
                found[cert.key] = (_order_key(prob, cand), cert)
    return [c for _, c in sorted(found.values(), key=lambda kc: kc[0])]


def _order_key(prob: _Problem, cand: _Candidate) -> tuple:
    role_ix = 0 if cand.role.p_from_u else 1
    role = cand.role
    ps = _unique(reduce(r) for r in rotations(role.P))
    qs = _unique(rotations(role.Q))
    ws = _unique(rotations(prob.wr))
    fs = _unique(rotations(cyc_product(cand.q, cand.w_prime)))
    hk = 0
    if cand.h:
        hk = 1 + next(i for i, c in enumerate(prob.dw_rots)
                      if c == concat(cand.p, cand.h, cand.f, inverse(cand.h)))
    return (role_ix, ps.index(cand.p), qs.index(cand.q), ws.index(cand.w_prime),
            fs.index(cand.f), hk)


def _preferred(prob: _Problem) -> list[_Candidate]:
    """The choices made by the degenerate branches of the existence proof."""
    out = []
    u, v, w, d = prob.ur, prob.vr, prob.wr, prob.d
    ru, rv = prob.roles
    if not u or not v:
        role = ru if not u else rv
        qs = [r for r in rotations(role.Q) if r == d] or [role.Q]
        for q in qs:
            out.append(_Candidate(role, EMPTY, q, w, cyc_product(q, w), EMPTY))
    if not w:
        out.append(_Candidate(ru, u, v, w, cyc_product(v, w), EMPTY))
    if not d and u and v:
        try:
            sol = solve_special(u, w)
        except SearchExhausted:
            sol = None
        if sol is not None:
            out.append(_Candidate(ru, sol.u_prime, v, w, sol.f, sol.h))
    return out


def theorem_solve(u, v, w, d) -> TheoremCertificate:
    prob = _Problem(u, v, w, d)

    def valid(cand: _Candidate) -> Optional[TheoremCertificate]:
        if cand.h:
            lit = concat(cand.p, cand.h, cand.f, inverse(cand.h))
            if not is_rotation(prob.dw, lit) or cyc_product(cand.p, concat(
                    cand.h, cand.f, inverse(cand.h))) != lit:
                return None
        elif not is_rotation(prob.dw, cyc_product(cand.p, cand.f)):
            return None
        if not is_rotation(cyc_product(cand.q, cand.w_prime), cand.f):
            return None
        return _finish(prob, cand)

    for cand in _preferred(prob):
        cert = valid(cand)
        if cert is not None:
            return cert

    label = ""
    lemma_pair = None
    if all((prob.ur, prob.vr, prob.wr, prob.d)):
        lemma = main_lemma(prob.ur, prob.vr, prob.wr, prob.d)
        label = lemma.case_label
        lemma_pair = (lemma.q, lemma.w_prime)

    ur, vr, wr = prob.ur, prob.vr, prob.wr
    filters: list[Callable[[_Role, Word, Word], bool]] = []
    if lemma_pair is not None:
        filters.append(lambda role, q, wp: (q, wp) == lemma_pair)
    filters += [
        lambda role, q, wp: wp == wr and q in (ur, vr),
        lambda role, q, wp: wp == wr and q not in (ur, vr),
        lambda role, q, wp: wp != wr and q in (ur, vr),
        lambda role, q, wp: wp != wr and q not in (ur, vr),
    ]
    for nontrivial in (False, True):
        for accept in filters:
            for cand in _iter_candidates(prob, nontrivial_h=nontrivial, accept=accept):
                cert = _finish(prob, cand, label=label)
                if cert is not None:
                    return cert
    raise SearchExhausted(f"no certificate for u={prob.u}, v={prob.v}, w={prob.w}, d={prob.d}")


def verify_theorem(u, v, w, d, cert: TheoremCertificate) -> VerificationReport:
    u, v, w, d = (as_word(x) for x in (u, v, w, d))
    rep = VerificationReport()
    p, q, wp, f, h = cert.p, cert.q, cert.w_prime, cert.f, cert.h
    uv = cyc_product(u, v)
    _guarded(rep, "d ~ u*v", lambda: is_rotation(uv, d))
    _guarded(rep, "p reduced rotation of u or v, q rotation of the other",
             lambda: _pairing_ok(u, v, p, q, p_reduced=True))
    _guarded(rep, "w' ~ w", lambda: is_rotation(w, wp))
    _guarded(rep, "f ~ q*w'", lambda: is_rotation(cyc_product(q, wp), f))
    hfh = concat(h, f, inverse(h))
    dw = cyc_product(d, w)
    right = cyc_product(p, hfh)
    _guarded(rep, "d*w ~ p*(h f h^-1)", lambda: is_rotation(dw, right),
             f"{format_word(dw)} vs {format_word(right)}")
    _guarded(rep, "h != 1 implies literal p h f h^-1",
             lambda: not h or (right == concat(p, hfh)
                               and len(dw) == len(p) + 2 * len(h) + len(f)),
             f"|d*w|={len(dw)}, |p|+2|h|+|f|={len(p) + 2 * len(h) + len(f)}")
    _guarded(rep, "d = u*v or v*u implies w' = w",
             lambda: d not in (uv, cyc_product(v, u)) or wp == w)
    _guarded(rep, "d = uv or vu implies w' = w and q in {u, v}",
             lambda: d not in (concat(u, v), concat(v, u)) or (wp == w and q in (u, v)))
    ident = cert.identity
    if ident is None:
        rep.add("identity present", False, "no identity attached")
    else:
        _guarded(rep, "identity holds", ident.holds)
        _guarded(rep, "identity left side evaluates to d*w",
                 lambda: eval_product(ident.lhs) == dw)
        _guarded(rep, "identity right side conjugate to p*(h f h^-1)",
                 lambda: is_rotation(cyclic_reduction(eval_product(ident.rhs)), right))
        _guarded(rep, "identity relators are u, v, w", lambda: _relators_ok(ident, [u, v, w]))
        _guarded(rep, "identity basic", lambda: is_basic(ident))
        _guarded(rep, "both sides share conjugators", lambda: len(ident.lhs) == len(ident.rhs)
                 and all(a.conjugator == b.conjugator and reduce(a.relator) == reduce(b.relator)
                         for a, b in zip(ident.lhs, ident.rhs)))

    def shared():
        if not (all(is_reduced(x) for x in (u, v, w)) and d):
            return True
        t_dw = trace_cyclic_reduction(concat(d, w))
        if not t_dw:
            return True
        return shares_cyclic_cancelled_word(q, wp, d, w)
    _guarded(rep, "cancelled word shared by d*w and q*w'", shared)
    return rep
