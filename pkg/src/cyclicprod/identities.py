"""Products of conjugates of relators and identities among them.

A term ``(a, r)`` stands for ``a r a^-1``; a product is a sequence of terms
and evaluates to the reduced form of their concatenation.  An identity is a
pair of products with the same value.  Basicness is decided by free
reduction of the term sequence over the alphabet of (conjugator, relator)
pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .word_core import Word, as_word, concat, format_word, inverse, reduce, reverse


class NotDeletable(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NotAnIdentity(ValueError):
    pass


class EquivalenceFails(ValueError):
    pass


class ExpansionMismatch(ValueError):
    pass


class ConjugateTerm:
    __slots__ = ("conjugator", "relator")

    def __init__(self, conjugator, relator):
        self.conjugator: Word = reduce(as_word(conjugator))
        self.relator: Word = as_word(relator)

    def value(self) -> Word:
        return reduce(concat(self.conjugator, self.relator, inverse(self.conjugator)))

    def inverse(self) -> "ConjugateTerm":
        return ConjugateTerm(self.conjugator, inverse(self.relator))

    def cancels(self, other: "ConjugateTerm") -> bool:
        """Adjacent terms that are mutually inverse letters of Y."""
        return (self.conjugator == other.conjugator
                and reduce(self.relator) == reduce(inverse(other.relator)))

    def __eq__(self, other):
        return (isinstance(other, ConjugateTerm)
                and self.conjugator == other.conjugator and self.relator == other.relator)

    def __hash__(self):
        return hash((self.conjugator, self.relator))

    def __repr__(self):
        return f"({format_word(self.conjugator)!r}, {format_word(self.relator)!r})"

    def to_json(self) -> dict:
        return {"a": format_word(self.conjugator), "r": format_word(self.relator)}


class ConjugateProduct(tuple):
    """Immutable sequence of ConjugateTerm."""

    def __new__(cls, terms: Iterable = ()):
        return super().__new__(cls, (t if isinstance(t, ConjugateTerm) else ConjugateTerm(*t)
                                     for t in terms))

    def __getitem__(self, key):
        item = tuple.__getitem__(self, key)
        return ConjugateProduct(item) if isinstance(key, slice) else item

    def __add__(self, other):
        return ConjugateProduct(tuple(self) + tuple(other))

    def to_json(self) -> list:
        return [t.to_json() for t in self]

    @classmethod
    def from_json(cls, data) -> "ConjugateProduct":
        return cls((d["a"], d["r"]) for d in data)


def product(*pairs) -> ConjugateProduct:
    return ConjugateProduct(pairs)


def eval_product(p: Sequence[ConjugateTerm]) -> Word:
    parts = []
    for t in p:
        parts += [t.conjugator, t.relator, inverse(t.conjugator)]
    return reduce(concat(*parts))


# -- Peiffer moves -----------------------------------------------------------------

class ExchangeKind(str, Enum):
    A = "A"
    B = "B"


def peiffer_delete(p: Sequence[ConjugateTerm], i: int) -> ConjugateProduct:
    p = ConjugateProduct(p)
    if not 0 <= i < len(p) - 1:
        raise NotDeletable(f"no pair at index {i}")
    if not p[i].cancels(p[i + 1]):
        raise NotDeletable(f"terms {p[i]!r} and {p[i + 1]!r} do not cancel")
    return p[:i] + p[i + 2:]


def exchange(p: Sequence[ConjugateTerm], i: int, kind) -> ConjugateProduct:
    p = ConjugateProduct(p)
    if not 0 <= i < len(p) - 1:
        raise IndexOutOfRange(f"no pair at index {i}")
    kind = ExchangeKind(kind)
    (a, r), (b, s) = (p[i].conjugator, p[i].relator), (p[i + 1].conjugator, p[i + 1].relator)
    if kind is ExchangeKind.A:
        new = (ConjugateTerm(b, s),
               ConjugateTerm(concat(b, inverse(s), inverse(b), a), r))
    else:
        new = (ConjugateTerm(concat(a, r, inverse(a), b), s),
               ConjugateTerm(a, r))
    return p[:i] + ConjugateProduct(new) + p[i + 2:]


# -- identities --------------------------------------------------------------------

class Identity:
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs=(), *, check: bool = True):
        self.lhs = ConjugateProduct(lhs)
        self.rhs = ConjugateProduct(rhs)
        if check and eval_product(self.lhs) != eval_product(self.rhs):
            raise NotAnIdentity(
                f"{format_word(eval_product(self.lhs))} != {format_word(eval_product(self.rhs))}")

    def holds(self) -> bool:
        return eval_product(self.lhs) == eval_product(self.rhs)

    def __eq__(self, other):
        return isinstance(other, Identity) and self.lhs == other.lhs and self.rhs == other.rhs

    def __hash__(self):
        return hash((self.lhs, self.rhs))

    def __repr__(self):
        return f"Identity({list(self.lhs)!r} == {list(self.rhs)!r})"

    def to_json(self) -> dict:
        return {"lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}

    @classmethod
    def from_json(cls, data, *, check: bool = True) -> "Identity":
        return cls(ConjugateProduct.from_json(data["lhs"]),
                   ConjugateProduct.from_json(data.get("rhs", [])), check=check)


def _require_identity(ident: Identity) -> None:
    if not ident.holds():
        raise NotAnIdentity("the two sides evaluate differently")


def normal_form(ident: Identity) -> ConjugateProduct:
    """Move the right side across: lhs followed by rhs inverted, last term first."""
    return ident.lhs + ConjugateProduct(t.inverse() for t in reversed(ident.rhs))


def reduce_over_terms(p: Sequence[ConjugateTerm]) -> ConjugateProduct:
    stack: list[ConjugateTerm] = []
    for t in p:
        if stack and stack[-1].cancels(t):
            stack.pop()
        else:
            stack.append(t)
    return ConjugateProduct(stack)


def is_basic(ident: Identity) -> bool:
    _require_identity(ident)
    return not reduce_over_terms(normal_form(ident))


def is_strictly_basic(ident: Identity) -> bool:
    if not is_basic(ident):
        return False
    conj = {t.conjugator for t in normal_form(ident)}
    return len(conj) <= 1


def normal_forms(ident: Identity) -> list[ConjugateProduct]:
    """Every rotation of the normal form; the empty identity has one."""
    _require_identity(ident)
    nf = normal_form(ident)
    if not nf:
        return [nf]
    return [nf[k:] + nf[:k] for k in range(len(nf))]


def identity_from_equivalence(lhs, rhs, c) -> Identity:
    """From ``eval(lhs) = c eval(rhs) c^-1`` build lhs == rhs with every rhs
    conjugator premultiplied by c."""
    lhs, rhs, c = ConjugateProduct(lhs), ConjugateProduct(rhs), as_word(c)
    if eval_product(lhs) != reduce(concat(c, eval_product(rhs), inverse(c))):
        raise EquivalenceFails("left side is not the c-conjugate of the right side")
    moved = ConjugateProduct(ConjugateTerm(concat(c, t.conjugator), t.relator) for t in rhs)
    return Identity(lhs, moved)


def premultiply(ident: Identity, a) -> Identity:
    a = as_word(a)
    def shift(p):
        return ConjugateProduct(ConjugateTerm(concat(a, t.conjugator), t.relator) for t in p)
    return Identity(shift(ident.lhs), shift(ident.rhs))


def substitute_relator(ident: Identity, i: int, expansion) -> Identity:
    """Replace term i (counted over lhs then rhs) by ``expansion``, whose
    conjugators get premultiplied by the replaced term's conjugator."""
    expansion = ConjugateProduct(expansion)
    n = len(ident.lhs)
    if not 0 <= i < n + len(ident.rhs):
        raise IndexOutOfRange(f"no term at index {i}")
    side, j = (ident.lhs, i) if i < n else (ident.rhs, i - n)
    term = side[j]
    if reduce(term.relator) != eval_product(expansion):
        raise ExpansionMismatch(f"{format_word(term.relator)} does not evaluate like the expansion")
    moved = ConjugateProduct(ConjugateTerm(concat(term.conjugator, e.conjugator), e.relator)
                             for e in expansion)
    new_side = side[:j] + moved + side[j + 1:]
    if i < n:
        return Identity(new_side, ident.rhs)
    return Identity(ident.lhs, new_side)


def reverse_product(p: Sequence[ConjugateTerm]) -> ConjugateProduct:
    """Term-wise letter reversal; evaluates to the reverse of eval(p)."""
    return ConjugateProduct(ConjugateTerm(inverse(reverse(t.conjugator)), reverse(t.relator))
                            for t in reversed(p))


def reverse_identity(ident: Identity) -> Identity:
    return Identity(reverse_product(ident.lhs), reverse_product(ident.rhs))


def drop_trivial(p: Sequence[ConjugateTerm]) -> ConjugateProduct:
    """Remove terms whose relator is freely trivial."""
    return ConjugateProduct(t for t in ConjugateProduct(p) if reduce(t.relator))
