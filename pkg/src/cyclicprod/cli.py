"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from . import decompose, identities, sweep, twisted_assoc, vankampen
from .word_core import (
    EquationUnbalanced,
    WordParseError,
    cyc_product,
    cyclic_reduction,
    format_word,
    levi_solve,
    parse_word,
    reduce,
    reduced_product,
    rotations,
)


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: Any = None
    checks: list = field(default_factory=list)
    elapsed: Optional[float] = None
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return all(c.get("ok", True) for c in self.checks)

    def to_json(self) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "outputs": self.outputs,
               "checks": self.checks, "ok": self.ok}
        if self.elapsed is not None:
            out["elapsed"] = round(self.elapsed, 4)
        if self.seed is not None:
            out["seed"] = self.seed
        return out


_BAD_INPUT = (
    twisted_assoc.PreconditionViolated,
    decompose.NotACyclicPermutation,
    decompose.NotReduced,
    decompose.InverseInputs,
    vankampen.InvalidCancellationSequence,
)


def _word(text: str):
    try:
        return parse_word(text)
    except WordParseError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(w) -> str:
    return format_word(w)


def _uvwd(args):
    u, v, w = _word(args.u), _word(args.v), _word(args.w)
    d = cyc_product(u, v) if args.d == "auto" else _word(args.d)
    return u, v, w, d


def _load_json(text: str):
    """Inline JSON, or ``@path`` to read it from a file."""
    try:
        if text.startswith("@"):
            with open(text[1:]) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON: {exc}") from exc


def _product(terms: list[str]) -> identities.ConjugateProduct:
    pairs = []
    for t in terms or []:
        if ":" not in t:
            raise UsageError(f"term {t!r} must look like CONJUGATOR:RELATOR")
        a, r = t.split(":", 1)
        pairs.append((_word(a), _word(r)))
    return identities.ConjugateProduct(pairs)


def _order(text: Optional[str]):
    if text is None or text == "canonical":
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad order {text!r}") from exc


# -- handlers --------------------------------------------------------------------

def cmd_reduce(a):
    return RunReport("reduce", {"word": a.word}, _fmt(reduce(_word(a.word))))


def cmd_cycreduce(a):
    return RunReport("cycreduce", {"word": a.word}, _fmt(cyclic_reduction(_word(a.word))))


def cmd_prod(a):
    return RunReport("prod", {"u": a.u, "v": a.v}, _fmt(reduced_product(_word(a.u), _word(a.v))))


def cmd_cycprod(a):
    return RunReport("cycprod", {"u": a.u, "v": a.v}, _fmt(cyc_product(_word(a.u), _word(a.v))))


def cmd_perms(a):
    return RunReport("perms", {"word": a.word}, [_fmt(r) for r in rotations(_word(a.word))])


def cmd_levi(a):
    try:
        sol = levi_solve(*(_word(x) for x in (a.u1, a.u2, a.v1, a.v2)))
    except EquationUnbalanced as exc:
        raise UsageError(str(exc)) from exc
    return RunReport("levi", vars_of(a, "u1", "u2", "v1", "v2"),
                     {"case": sol.case.value, "p": _fmt(sol.p)})


def _jsonable(witnesses: dict) -> dict:
    return {k: (_fmt(x) if isinstance(x, tuple) else x) for k, x in witnesses.items()}


def cmd_shirv(a):
    u, v = _word(a.u), _word(a.v)
    case = decompose.shirv_decompose(u, v)
    checks = [{"name": n, "ok": ok} for n, ok in case.check(u, v)]
    return RunReport("shirv", vars_of(a, "u", "v"),
                     {"tag": case.tag.value, "witnesses": _jsonable(case.witnesses)}, checks)


def cmd_shirv4(a):
    u, v, d = _word(a.u), _word(a.v), _word(a.d)
    case = decompose.shirv4_decompose(u, v, d)
    checks = [{"name": n, "ok": ok} for n, ok in case.check(u, v, d)]
    return RunReport("shirv4", vars_of(a, "u", "v", "d"),
                     {"tag": case.tag.value, "p": _fmt(case.p), "q0": _fmt(case.q0),
                      "p_is_u": case.p_is_u, "exact_product": case.exact_product,
                      "witnesses": _jsonable(case.witnesses)}, checks)


def cmd_solve_theorem(a):
    u, v, w, d = _uvwd(a)
    cert = twisted_assoc.theorem_solve(u, v, w, d)
    rep = twisted_assoc.verify_theorem(u, v, w, d, cert)
    return RunReport("solve-theorem", _inputs(u, v, w, d), cert.to_json(), rep.to_json())


def cmd_solve_lemma(a):
    u, v, w, d = _uvwd(a)
    cert = twisted_assoc.main_lemma(u, v, w, d)
    rep = twisted_assoc.verify_main_lemma(u, v, w, d, cert)
    return RunReport("solve-lemma", _inputs(u, v, w, d), cert.to_json(), rep.to_json())


def cmd_exhaustive(a):
    u, v, w, d = _uvwd(a)
    opts = twisted_assoc.ExhaustiveOptions(
        require_identity=not a.no_identity, enforce_clauses=not a.no_clauses,
        include_trivial_h=not a.only_nontrivial_h, include_nontrivial_h=not a.only_trivial_h)
    certs = twisted_assoc.exhaustive_solutions(u, v, w, d, opts)
    return RunReport("exhaustive", _inputs(u, v, w, d), [c.to_json() for c in certs])


def cmd_verify(a):
    u, v, w, d = _uvwd(a)
    data = _load_json(a.cert)
    try:
        if a.kind == "lemma":
            cert = twisted_assoc.MainLemmaCertificate.from_json(data)
            rep = twisted_assoc.verify_main_lemma(u, v, w, d, cert)
        else:
            cert = twisted_assoc.TheoremCertificate.from_json(data)
            rep = twisted_assoc.verify_theorem(u, v, w, d, cert)
    except (KeyError, TypeError, WordParseError) as exc:
        raise UsageError(f"malformed certificate: {exc}") from exc
    return RunReport("verify", _inputs(u, v, w, d), {"passed": rep.passed}, rep.to_json())


def cmd_identity_check(a):
    data = _load_json(a.identity)
    try:
        ident = identities.Identity.from_json(data, check=False)
    except (KeyError, TypeError, WordParseError) as exc:
        raise UsageError(f"malformed identity: {exc}") from exc
    holds = ident.holds()
    out = {"holds": holds}
    checks = [{"name": "sides evaluate equally", "ok": holds}]
    if holds:
        out["basic"] = identities.is_basic(ident)
        out["strictly_basic"] = identities.is_strictly_basic(ident)
        out["normal_form"] = identities.normal_form(ident).to_json()
    return RunReport("identity-check", {"identity": data}, out, checks)


def _diagram_out(dg: vankampen.Diagram) -> dict:
    out = dg.to_json()
    out["face_count"] = len(dg.faces)
    out["euler_characteristic"] = dg.euler_characteristic()
    return out


def cmd_vk_bouquet(a):
    prod = _product(a.term)
    return RunReport("vk-bouquet", {"terms": a.term}, _diagram_out(vankampen.bouquet(prod)))


def cmd_vk_fold(a):
    prod = _product(a.term)
    dg, steps = vankampen.fold_all(vankampen.bouquet(prod), _order(a.order))
    out = _diagram_out(dg)
    out["steps"] = [{"position": s.position, "edge_pair": list(s.edge_pair),
                     "discarded_faces": list(s.discarded_faces)} for s in steps]
    return RunReport("vk-fold", {"terms": a.term, "order": a.order}, out)


def cmd_vk_dot(a):
    dg = vankampen.bouquet(_product(a.term))
    if not a.unfolded:
        dg, _ = vankampen.fold_all(dg, _order(a.order))
    return RunReport("vk-dot", {"terms": a.term, "order": a.order}, vankampen.to_dot(dg))


def cmd_sweep(a):
    if a.max_len < 1 or a.count < 0:
        raise UsageError("--max-len must be positive and --count nonnegative")
    words = sweep.reduced_words(a.alphabet, a.max_len)
    triples = sweep.random_triples(words, a.count, a.seed)
    items = list(sweep.instances(triples))
    summary = sweep.run_sweep(items, cross_check=a.cross_check)
    checks = [{"name": "instance", "ok": False, "detail": f.to_json()} for f in summary.failures]
    rep = RunReport("sweep", {"alphabet": a.alphabet, "max_len": a.max_len, "count": a.count,
                              "cross_check": a.cross_check},
                    summary.to_json(timing=False), checks, seed=a.seed)
    if a.timing:
        rep.elapsed = summary.elapsed
    return rep


def vars_of(a, *names) -> dict:
    return {n: getattr(a, n) for n in names}


def _inputs(u, v, w, d) -> dict:
    return {"u": _fmt(u), "v": _fmt(v), "w": _fmt(w), "d": _fmt(d)}


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclicprod", description="Cyclically reduced products of words and their certificates.")
    parser.add_argument("--json", action="store_true", help="print a JSON run report")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                       help="print a JSON run report")
        p.set_defaults(func=fn)
        return p

    for name, fn, h in (("reduce", cmd_reduce, "free reduction"),
                        ("cycreduce", cmd_cycreduce, "cyclically reduced form"),
                        ("perms", cmd_perms, "all rotations")):
        add(name, fn, h).add_argument("word")
    for name, fn, h in (("prod", cmd_prod, "reduced product"),
                        ("cycprod", cmd_cycprod, "cyclically reduced product")):
        p = add(name, fn, h)
        p.add_argument("u")
        p.add_argument("v")
    p = add("levi", cmd_levi, "solve u1 u2 = v1 v2")
    for n in ("u1", "u2", "v1", "v2"):
        p.add_argument(n)
    p = add("shirv", cmd_shirv, "cancellation decomposition of u*v")
    p.add_argument("u")
    p.add_argument("v")
    p = add("shirv4", cmd_shirv4, "decomposition of a rotation d of u*v")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("d")

    def uvwd(p):
        p.add_argument("--u", required=True)
        p.add_argument("--v", required=True)
        p.add_argument("--w", required=True)
        p.add_argument("--d", default="auto", help="a rotation of u*v, or auto for u*v itself")
        return p

    uvwd(add("solve-theorem", cmd_solve_theorem, "certificate for d*w ~ p*(h f h^-1)"))
    uvwd(add("solve-lemma", cmd_solve_lemma, "intermediate certificate"))
    p = uvwd(add("exhaustive", cmd_exhaustive, "every certificate in the search space"))
    p.add_argument("--no-identity", action="store_true", help="do not require a basic identity")
    p.add_argument("--no-clauses", action="store_true", help="ignore the side clauses")
    p.add_argument("--only-trivial-h", action="store_true")
    p.add_argument("--only-nontrivial-h", action="store_true")
    p = uvwd(add("verify", cmd_verify, "re-check a certificate"))
    p.add_argument("--cert", required=True, help="certificate JSON, or @file")
    p.add_argument("--kind", choices=("theorem", "lemma"), default="theorem")
    p = add("identity-check", cmd_identity_check, "basicness of an identity")
    p.add_argument("identity", help='{"lhs": [{"a": ..., "r": ...}], "rhs": [...]}, or @file')
    for name, fn, h in (("vk-bouquet", cmd_vk_bouquet, "bouquet of lollipops"),
                        ("vk-fold", cmd_vk_fold, "folded diagram"),
                        ("vk-dot", cmd_vk_dot, "Graphviz export")):
        p = add(name, fn, h)
        p.add_argument("--term", action="append", default=[], help="CONJUGATOR:RELATOR, repeatable")
        if name != "vk-bouquet":
            p.add_argument("--order", default=None, help="canonical, or comma separated fold positions")
        if name == "vk-dot":
            p.add_argument("--unfolded", action="store_true")
    p = add("sweep", cmd_sweep, "random property sweep")
    p.add_argument("--alphabet", default="xy")
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cross-check", action="store_true", help="also compare with the exhaustive search")
    p.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    return parser


def _print_text(rep: RunReport, out) -> None:
    o = rep.outputs
    if isinstance(o, str):
        out.write(o if o.endswith("\n") else o + "\n")
    elif isinstance(o, list) and all(isinstance(x, str) for x in o):
        for x in o:
            out.write(x + "\n")
    else:
        out.write(json.dumps(o, indent=2) + "\n")
    for c in rep.checks:
        if not c.get("ok", True):
            out.write(f"FAILED: {c.get('name')} {c.get('detail', '')}\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    start = time.perf_counter()
    try:
        rep = args.func(args)
    except (UsageError, *_BAD_INPUT) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, RuntimeError) as exc:
        # a well-formed request the solvers could not satisfy
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    if rep.elapsed is None and args.command != "sweep":
        rep.elapsed = time.perf_counter() - start
    if args.json:
        out.write(json.dumps(rep.to_json(), indent=2) + "\n")
    else:
        _print_text(rep, out)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
