"""Command-line front end.

Every command builds one JSON-compatible report and renders it either as
JSON (default) or as ``key: value`` text lines carrying the same numbers.
Exit codes: 0 success, 2 invalid input or flags, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Callable

from . import corpus
from .algebra import (
    affine_os,
    base_point_independent,
    is_quadratic,
    kadic_dims,
    nbb_sets,
    nbc_sets,
    os_dims,
    phi3_formula,
    phi3_nullity,
    tensor_dims,
)
from .errors import BudgetExceeded, FlagConflict, OSAlgebraError, UnknownCommand, ValidationError
from .fields import QQ, ScalarField, field_from_flags, primes_up_to
from .inputs import parse_matroid
from .matroid import Matroid, PointedMatroid, cone, direct_sum, parallel_connection, truncate, tutte_witness
from .report import battery, field_descriptor, invariant_report, kadic_table, to_json_text, to_text
from .resonance import (
    DEFAULT_FP_BUDGET,
    DEFAULT_PARTITION_BUDGET,
    compare_mod_p,
    poly1,
    poly1_to_json,
    resonance_fp,
    resonance_q,
)

COMMANDS = (
    "info", "whitney", "os-dims", "nbc", "nbb", "phi3", "kadic", "quadratic", "line-closed",
    "affine", "resonance", "nu", "exceptional-primes", "poly1", "ops", "iso-demo",
)


def _plain(x) -> Matroid:
    return x.matroid if isinstance(x, PointedMatroid) else x


def _pointed(x, basepoint: int | None) -> PointedMatroid:
    if isinstance(x, PointedMatroid):
        return x if basepoint is None else x.with_basepoint(basepoint)
    return PointedMatroid(x, 0 if basepoint is None else basepoint)


def _order(args, m: Matroid) -> list[int]:
    if args.order is None:
        return list(range(m.n))
    try:
        order = [int(x) for x in args.order.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise ValidationError(f"--order must be a comma-separated permutation, got {args.order!r}") from None
    if sorted(order) != list(range(m.n)):
        raise ValidationError(f"--order {args.order} is not a permutation of 0..{m.n - 1}")
    return order


def _sets_json(sets) -> list[list[list[int]]]:
    return [[sorted(s) for s in sorted(level, key=sorted)] for level in sets]


def _fp_budget(args) -> int:
    return args.budget if args.budget is not None else DEFAULT_FP_BUDGET


def _partition_budget(args) -> int:
    return args.budget if args.budget is not None else DEFAULT_PARTITION_BUDGET


def _need_prime(args, field: ScalarField) -> int:
    if field.p:
        return field.p
    raise FlagConflict("this command needs --field fp --p <prime>")


# -- command implementations -----------------------------------------------------------


def cmd_info(args, field):
    m = _plain(args.matroids[0])
    return invariant_report(m, field, _order(args, m), budget=_partition_budget(args))


def cmd_whitney(args, field):
    m = _plain(args.matroids[0])
    return {"whitney": m.whitney_vector(), "characteristic_polynomial": m.characteristic_polynomial()}


def cmd_os_dims(args, field):
    return {"betti": os_dims(_plain(args.matroids[0]), field), "field": field_descriptor(field)}


def cmd_nbc(args, field):
    m = _plain(args.matroids[0])
    sets = nbc_sets(m, _order(args, m))
    return {"order": _order(args, m), "counts": [len(x) for x in sets], "sets": _sets_json(sets)}


def cmd_nbb(args, field):
    m = _plain(args.matroids[0])
    sets = nbb_sets(m, _order(args, m))
    return {"order": _order(args, m), "counts": [len(x) for x in sets], "sets": _sets_json(sets)}


def cmd_phi3(args, field):
    m = _plain(args.matroids[0])
    direct, formula = phi3_nullity(m, field), phi3_formula(m, field)
    return {"phi3": direct, "phi3_formula": formula, "agree": direct == formula, "field": field_descriptor(field)}


def cmd_kadic(args, field):
    m = _plain(args.matroids[0])
    if args.k is not None:
        return {"kadic": {str(args.k): kadic_dims(m, args.k, field)}}
    return {"kadic": kadic_table(m, field)}


def cmd_quadratic(args, field):
    return {"quadratic": is_quadratic(_plain(args.matroids[0]), field)}


def cmd_line_closed(args, field):
    return {"line_closed": _plain(args.matroids[0]).is_line_closed()}


def cmd_affine(args, field):
    dm = _pointed(args.matroids[0], args.basepoint)
    aff = affine_os(dm, field)
    out = {
        "basepoint": dm.basepoint,
        "affine_dims": aff.dims,
        "betti": os_dims(dm.matroid, field),
        "poincare_factorization": True,  # affine_os raises otherwise
        "basepoint_independent": base_point_independent(dm.matroid, field),
    }
    if len(args.matroids) > 1:
        other = _pointed(args.matroids[1], None)
        par = parallel_connection(dm, other)
        out["parallel_connection"] = {
            "affine_dims": affine_os(par, field).dims,
            "tensor_dims": tensor_dims(aff, affine_os(other, field)),
        }
        out["parallel_connection"]["agree"] = (
            out["parallel_connection"]["affine_dims"] == out["parallel_connection"]["tensor_dims"]
        )
    return out


def cmd_resonance(args, field):
    m = _plain(args.matroids[0])
    comps = resonance_q(m, _partition_budget(args))
    out = {
        "components": [c.to_json() for c in comps],
        "poly1": poly1_to_json(poly1(m, comps)),
    }
    if field.p:
        prof = resonance_fp(m, field.p, args.q, _fp_budget(args))
        out["fp"] = {"p": field.p, "q": args.q, "nu": {str(d): c for d, c in prof.projective_counts().items()}}
        if args.q == 1:
            out["fp"]["matches_components"] = compare_mod_p(m, field.p, comps, _fp_budget(args))["match"]
    return out


def cmd_nu(args, field):
    m = _plain(args.matroids[0])
    p = _need_prime(args, field)
    prof = resonance_fp(m, p, args.q, _fp_budget(args))
    counts = prof.projective_counts()
    return {"p": p, "q": args.q, "nu": {str(d): c for d, c in counts.items()}, "max_dim": prof.max_dim}


def cmd_exceptional_primes(args, field):
    m = _plain(args.matroids[0])
    details: list = []
    comps = resonance_q(m, _partition_budget(args))
    found = []
    for p in primes_up_to(args.max_p):
        res = compare_mod_p(m, p, comps, _fp_budget(args))
        details.append(res)
        if res["denominator_clash"] is False and not res["match"]:
            found.append(p)
    return {"max_p": args.max_p, "exceptional_primes": found, "checked": details}


def cmd_poly1(args, field):
    m = _plain(args.matroids[0])
    comps = resonance_q(m, _partition_budget(args))
    return {"components": [c.to_json() for c in comps], "poly1": poly1_to_json(poly1(m, comps))}


def _summary(m: Matroid, field: ScalarField) -> dict:
    return {"n": m.n, "rank": m.rank(), "betti": os_dims(m, field), "lines": m.line_sizes()}


def cmd_ops(args, field):
    a = _pointed(args.matroids[0], args.basepoint)
    out: dict = {"input": _summary(a.matroid, field), "cone": _summary(cone(a.matroid).matroid, field)}
    if a.matroid.rank() >= 3:
        out["truncation"] = _summary(truncate(a.matroid), field)
    b = _pointed(args.matroids[1], None) if len(args.matroids) > 1 else a
    out["direct_sum"] = _summary(direct_sum(a.matroid, b.matroid), field)
    out["parallel_connection"] = _summary(parallel_connection(a, b).matroid, field)
    return out


def iso_demo(g0: Matroid, g1: Matroid, field: ScalarField = QQ, b0: int = 0, b1: int = 0) -> dict:
    """Compare G0 + G1 with {0} + P(G0, G1) on the full invariant battery."""
    g, gp = corpus.iso_pair(g0, g1, b0, b1)
    left, right = battery(g, field), battery(gp, field)
    keys = sorted(set(left) | set(right))
    agree = {k: left.get(k) == right.get(k) for k in keys}
    if "poly1" in keys:
        from .resonance import polymatroids_isomorphic

        def as_table(js):
            return {frozenset(int(x) for x in s.split(",") if x): r for s, r in js.items()}

        agree["poly1"] = polymatroids_isomorphic(as_table(left["poly1"]), as_table(right["poly1"]))
    witness = tutte_witness(g, gp)
    return {
        "field": field_descriptor(field),
        "trivial": g0.n <= 1 or g1.n <= 1,
        "sum": {"n": g.n, "rank": g.rank(), "invariants": left},
        "parallel": {"n": gp.n, "rank": gp.rank(), "invariants": right},
        "agree": agree,
        "all_agree": all(agree.values()),
        "non_isomorphism_witness": witness,
    }


def cmd_iso_demo(args, field):
    if len(args.matroids) != 2:
        raise ValidationError("iso-demo takes exactly two matroids")
    g0, g1 = (_plain(x) for x in args.matroids)
    return iso_demo(g0, g1, field, args.b0, args.b1)


HANDLERS: dict[str, Callable] = {
    "info": cmd_info,
    "whitney": cmd_whitney,
    "os-dims": cmd_os_dims,
    "nbc": cmd_nbc,
    "nbb": cmd_nbb,
    "phi3": cmd_phi3,
    "kadic": cmd_kadic,
    "quadratic": cmd_quadratic,
    "line-closed": cmd_line_closed,
    "affine": cmd_affine,
    "resonance": cmd_resonance,
    "nu": cmd_nu,
    "exceptional-primes": cmd_exceptional_primes,
    "poly1": cmd_poly1,
    "ops": cmd_ops,
    "iso-demo": cmd_iso_demo,
}


# -- argument handling -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="osalgebra", description="Orlik-Solomon algebras, k-adic closures and resonance of matroids.")
    parser.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    parser.add_argument("matroids", nargs="+", help="corpus:<name> or a JSON file")
    parser.add_argument("--field", choices=("q", "fp"), default=None)
    parser.add_argument("--p", type=int, default=None, help="characteristic for --field fp")
    parser.add_argument("--k", type=int, default=None, help="k-adic level")
    parser.add_argument("--order", default=None, help="element order, comma separated, smallest first")
    parser.add_argument("--q", type=int, default=1, help="cohomological degree for resonance over GF(p)")
    parser.add_argument("--max-p", type=int, default=7, dest="max_p")
    parser.add_argument("--basepoint", type=int, default=None)
    parser.add_argument("--b0", type=int, default=0, help="base point of the first iso-demo factor")
    parser.add_argument("--b1", type=int, default=0, help="base point of the second iso-demo factor")
    parser.add_argument("--budget", type=int, default=None, help="cap on enumerated points or partition steps")
    parser.add_argument("--timing", action="store_true", help="add wall-clock seconds (breaks byte determinism)")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    parser.set_defaults(fmt="json")
    return parser


def _field(args) -> ScalarField:
    if args.p is not None and args.field != "fp":
        raise FlagConflict("--p is only meaningful with --field fp")
    if args.field == "fp":
        if args.p is None:
            raise FlagConflict("--field fp needs --p <prime>")
        return field_from_flags("fp", args.p)
    return QQ


def run(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    err = sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command not in HANDLERS:
            raise UnknownCommand(f"unknown command {args.command!r}; expected one of: {', '.join(COMMANDS)}")
        field = _field(args)
        if args.budget is not None and args.budget < 1:
            raise ValidationError("--budget must be positive")
        if args.command != "iso-demo" and args.command not in ("affine", "ops") and len(args.matroids) != 1:
            raise ValidationError(f"{args.command} takes one matroid")
        args.matroids = [parse_matroid(x) for x in args.matroids]
        start = time.perf_counter()
        report = HANDLERS[args.command](args, field)
        if args.timing:
            report["timing_seconds"] = round(time.perf_counter() - start, 6)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=err)
        return 3
    except OSAlgebraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2
    out.write(to_json_text(report) if args.fmt == "json" else to_text(report))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
