"""Cyclically reduced products of words, certificate-producing solvers for
their twisted associativity, identities among relations and van Kampen
diagrams."""

from .word_core import (
    EMPTY,
    Letter,
    Word,
    WordParseError,
    cyc_product,
    cyclic_reduction,
    cyclically_reduce,
    format_word,
    inverse,
    is_rotation,
    parse_word,
    reduce,
    rotations,
)
from .twisted_assoc import (
    MainLemmaCertificate,
    TheoremCertificate,
    VerificationReport,
    exhaustive_solutions,
    main_lemma,
    theorem_solve,
    verify_main_lemma,
    verify_theorem,
)

__all__ = [
    "EMPTY", "Letter", "Word", "WordParseError", "cyc_product", "cyclic_reduction",
    "cyclically_reduce", "format_word", "inverse", "is_rotation", "parse_word", "reduce",
    "rotations", "MainLemmaCertificate", "TheoremCertificate", "VerificationReport",
    "exhaustive_solutions", "main_lemma", "theorem_solve", "verify_main_lemma", "verify_theorem",
]
