"""Enumerate every certificate for the two instances where a nontrivial h shows up."""

import json

from cyclicprod.twisted_assoc import ExhaustiveOptions, exhaustive_solutions
from cyclicprod.word_core import concat, cyc_product, format_word, inverse, parse_word

W = parse_word

CASES = {
    "first": ("x^2 y^-1 x^3 y^-2 x", "y^-3 x^-1 y^-2", "x^-2 y^-1 x y^2", None),
    "second": ("x^2 y^-1 x^3 y^-2 x", "y^-3 x^-1 y^2", "x^-2 y x^-1 y",
               "x^-1 y^2 x^2 y^-1 x^3 y^-2 x y^-3"),
}


def describe(u, v, w, d):
    sols = exhaustive_solutions(u, v, w, d)
    trivial_h = exhaustive_solutions(u, v, w, d, ExhaustiveOptions(
        require_identity=False, enforce_clauses=False, include_nontrivial_h=False))
    dw = cyc_product(d, w)
    rows = []
    for c in sols:
        rows.append({
            "p": format_word(c.p), "q": format_word(c.q), "w_prime": format_word(c.w_prime),
            "f": format_word(c.f), "h": format_word(c.h),
            "p_is_u": c.p == u,
            "q_is_rotated": c.q not in (u, v),
            "w_prime_is_w": c.w_prime == w,
            "f_is_q*w'": c.f == cyc_product(c.q, c.w_prime),
            "literal": concat(c.p, c.h, c.f, inverse(c.h)) == dw,
        })
    return {"u": format_word(u), "v": format_word(v), "w": format_word(w), "d": format_word(d),
            "d*w": format_word(dw), "trivial_h_candidates": len(trivial_h), "certificates": rows}


def main():
    report = {}
    for name, (u, v, w, d) in CASES.items():
        u, v, w = W(u), W(v), W(w)
        d = cyc_product(u, v) if d is None else W(d)
        report[name] = describe(u, v, w, d)
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()
