"""Command-line interface: ``tropeig <command> PROBLEM.json``.

Exit codes: 0 success, 2 parse error, 3 degenerate input, 4 singular matrix
polynomial, 5 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import harness
from .errors import (
    CountMismatch,
    DegenerateInput,
    LengthMismatch,
    NotMonicLike,
    ParseError,
    SingularMatrixPolynomial,
    SizeMismatch,
    ZeroPolynomial,
)
from .problems import load_problem, problem_document
from .puiseux_asymptotics import AsymptoticMatrixPoly, AsymptoticPoly, matrix_eigen_asymptotics, scalar_root_asymptotics
from .serialization import dumps
from .tropical_core import newton_polygon, trop_roots
from .tropical_spectra import char_function

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_SINGULAR, EXIT_VERIFY = 0, 2, 3, 4, 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _expect(kind: str, allowed: tuple[str, ...]) -> None:
    if kind not in allowed:
        raise ParseError(f"this command needs a problem of kind {' or '.join(allowed)}, got {kind!r}")


def cmd_trop_roots(args) -> tuple[dict, int]:
    kind, P = load_problem(args.problem)
    _expect(kind, ("trop_poly",))
    hull = newton_polygon(P)
    roots = trop_roots(P)
    out = {
        "roots": list(roots.roots),
        "multiplicities": [list(x) for x in roots.multiplicities()],
        "hull": list(hull.hull_coeffs),
        "vertices": [list(v) for v in hull.breakpoints],
    }
    return out, EXIT_OK


def cmd_trop_eig(args) -> tuple[dict, int]:
    kind, A = load_problem(args.problem)
    _expect(kind, ("trop_matrix_poly",))
    cf = char_function(A)
    out = {
        "finite": [list(x) for x in cf.multiplicities()],
        "m_plus_inf": cf.val,
        "m_minus_inf": A.n * A.d - cf.deg,
        "breakpoints": [list(b) for b in cf.breakpoints],
        "segments": [list(s) for s in cf.segments],
    }
    return out, EXIT_OK


def _scalar_json(res) -> dict:
    return {
        "branches": [{"coeff": y, "exponent": c} for y, c in res.branches],
        "roots": list(res.roots),
        "generic": res.generic,
        "levels": [
            {
                "c": lv.c,
                "m": lv.m,
                "p_c": list(lv.p_c),
                "branches": list(lv.branches),
                "m_zero_coeff": lv.m_zero_coeff,
                "m_escape": lv.m_escape,
                "degenerate": lv.degenerate,
            }
            for lv in res.levels
        ],
    }


def _matrix_json(res) -> dict:
    return {
        "n": res.n,
        "d": res.d,
        "branches": [{"coeff": lam, "exponent": g} for lam, g in res.branches()],
        "generic": res.generic,
        "mult_plus_inf": res.mult_plus_inf,
        "mult_minus_inf": res.mult_minus_inf,
        "degenerate_gammas": list(res.degenerate_gammas),
        "per_gamma": [
            {
                "gamma": r.gamma,
                "m_trop": r.m_trop,
                "m_trop_zero": r.m_trop_zero,
                "m_trop_escape": r.m_trop_escape,
                "branches": list(r.branches),
                "m": r.m,
                "m_zero_coeff": r.m_zero_coeff,
                "m_escape": r.m_escape,
                "degenerate": r.degenerate,
                "generic": r.generic,
            }
            for r in res.per_gamma
        ],
    }


def cmd_asymptotics(args) -> tuple[dict, int]:
    kind, inst = load_problem(args.problem)
    _expect(kind, ("asymptotic_poly", "asymptotic_matrix_poly"))
    if isinstance(inst, AsymptoticPoly):
        if args.graph != "sat":
            return _matrix_json(matrix_eigen_asymptotics(inst.as_matrix_poly(), args.graph)), EXIT_OK
        return _scalar_json(scalar_root_asymptotics(inst)), EXIT_OK
    return _matrix_json(matrix_eigen_asymptotics(inst, args.graph)), EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def cmd_verify(args) -> tuple[dict, int]:
    kind, inst = load_problem(args.problem)
    _expect(kind, ("asymptotic_poly", "asymptotic_matrix_poly"))
    if isinstance(inst, AsymptoticPoly):
        inst = inst.as_matrix_poly()
    pred = matrix_eigen_asymptotics(inst, args.graph)
    rep = harness.verify(inst, pred, args.eps, args.tol_exp, args.tol_coeff, args.maj_tol)
    if args.csv:
        Path(args.csv).write_text(rep.spectra_csv())
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_random(args) -> tuple[dict, int]:
    seed = args.seed if args.seed is not None else int(os.environ.get("TROPEIG_SEED", "0"))
    rng = np.random.default_rng(seed)
    inst: AsymptoticMatrixPoly = harness.random_instance(rng, args.n, args.d, p_inf=args.p_inf, monic=not args.non_monic, ties=args.ties)
    return problem_document(inst), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropeig", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("trop-roots", help="tropical roots and Newton polygon of a min-plus polynomial")
    s.add_argument("problem")
    s.set_defaults(func=cmd_trop_roots)

    s = sub.add_parser("trop-eig", help="tropical eigenvalues of a min-plus matrix polynomial")
    s.add_argument("problem")
    s.set_defaults(func=cmd_trop_eig)

    for name, func, hlp in (
        ("asymptotics", cmd_asymptotics, "predicted first-order eigenvalue asymptotics"),
        ("verify", cmd_verify, "compare predictions with spectra sampled at small epsilon"),
    ):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("problem")
        s.add_argument("--graph", choices=("sat", "opt"), default="sat")
        if name == "verify":
            s.add_argument("--eps", type=_float_list, default=list(harness.DEFAULT_EPSILONS))
            s.add_argument("--tol-exp", type=float, default=harness.TOL_EXP)
            s.add_argument("--tol-coeff", type=float, default=harness.TOL_COEFF)
            s.add_argument("--maj-tol", type=float, default=harness.MAJ_TOL)
            s.add_argument("--csv", help="write the sampled spectra (epsilon, re, im) to this path")
        s.set_defaults(func=func)

    s = sub.add_parser("random", help="emit a random asymptotic matrix polynomial (seed from TROPEIG_SEED)")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--p-inf", type=float, default=0.3)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--ties", action="store_true", help="draw exponents from {0, 1}")
    s.add_argument("--non-monic", action="store_true")
    s.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out, code = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ZeroPolynomial, DegenerateInput, NotMonicLike, SizeMismatch, LengthMismatch, CountMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SingularMatrixPolynomial as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    sys.stdout.write(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
