"""``cosk`` command line: spectra, model tensors, Kaehler checks, 4D normal forms, verification."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, ctj
from .four_dim import cgt_blocks, is_einstein, rigidity_certificate
from .kahler_geom import KahlerStructure, min_orth_bisectional
from .model_spaces import flat, fubini_study, product_surfaces, s2xs2, space_form
from .operators import POSITIVITY_TOL, alpha_sum, cosk_spectrum, is_alpha_nonneg, r_hat_matrix
from .spectral import sym_eigvals
from .tensor_core import DimensionError, ValidationError
from .verify import VerifyConfig, as_dicts, default_fixture_dir, run_suite

SCHEMA = "report-1"
EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_VALIDATION, EXIT_NO_J, EXIT_DIM = range(6)
ALPHAS = (2.0, 3.0, 4.5, 6.0)


class MissingComplexStructure(Exception):
    pass


class _ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _ParseError(f"{self.prog}: error: {message}")


def _default_seed() -> int:
    raw = os.environ.get("COSK_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise _ParseError(f"COSK_SEED must be an integer, got {raw!r}") from None


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _floats(x) -> list[float]:
    return [float(v) for v in np.asarray(x).ravel()]


def _matrix(x) -> list[list[float]]:
    return [[float(v) for v in row] for row in np.asarray(x)]


# -- report assembly ---------------------------------------------------------------

def _report(command: str, args: dict, digest: str | None, results: dict, tolerances: dict,
            seed: int | None, wall: float | None) -> dict:
    rep = {
        "schema": SCHEMA,
        "command": {"name": command, "args": args},
        "input_digest": digest,
        "results": results,
        "tolerances": tolerances,
        "seed": seed,
        "version": __version__,
    }
    if wall is not None:
        rep["wall_time_s"] = wall
    return rep


def _wall(args) -> float | None:
    return None if args.start is None else time.perf_counter() - args.start


def _emit(report: dict, table: str, json_dest: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if json_dest == "-":
        sys.stdout.write(text)
        return
    sys.stdout.write(table)
    if json_dest:
        Path(json_dest).write_text(text)


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, list):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def _table(title: str, rows: list[tuple[str, object]]) -> str:
    width = max((len(k) for k, _ in rows), default=0)
    lines = [title, "-" * len(title)]
    lines += [f"{k.ljust(width)}  {_fmt(v)}" for k, v in rows]
    return "\n".join(lines) + "\n"


# -- subcommands -------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    doc, digest = ctj.read(args.file)
    R = doc.R
    rep = cosk_spectrum(R)
    hat = sym_eigvals(r_hat_matrix(R))
    sums = {f"{a:g}": (alpha_sum(rep.eigs, a) if a <= rep.N else None) for a in ALPHAS}
    results = {
        "n": R.n,
        "N": rep.N,
        "eigs": _floats(rep.eigs),
        "r_hat_eigs": _floats(hat),
        "scalar": rep.scalar,
        "alpha_sum": sums,
        "max_alpha": rep.alpha_max,
    }
    rows = [("n", R.n), ("N", rep.N), ("R-ring eigenvalues", results["eigs"]),
            ("R-hat eigenvalues", results["r_hat_eigs"]), ("scalar curvature", rep.scalar)]
    rows += [(f"alpha_sum({k})", v) for k, v in sums.items()]
    rows.append(("max_alpha", rep.alpha_max))
    report = _report("spectrum", {"file": str(args.file)}, digest, results, {"eigen_tol": 1e-14},
                     None, _wall(args))
    _emit(report, _table(f"spectrum of {args.file}", rows), args.json)
    return EXIT_OK


_MODELS = {
    "space-form": lambda a: (space_form(a.n, a.kappa), None, {"n": a.n, "kappa": a.kappa}),
    "flat": lambda a: (flat(a.n), None, {"n": a.n}),
    "product-surfaces": lambda a: (product_surfaces(a.k1, a.k2), None, {"k1": a.k1, "k2": a.k2}),
    "s2xs2": lambda a: (*s2xs2(), {}),
    "fubini-study": lambda a: (*fubini_study(a.m, a.c), {"m": a.m, "c": a.c}),
}


def cmd_model(args) -> int:
    R, J, params = _MODELS[args.name](args)
    digest = ctj.write(args.output, R, J, {"model": args.name, "params": params})
    print(digest)
    return EXIT_OK


def _kahler(doc) -> KahlerStructure:
    if doc.J is None:
        raise MissingComplexStructure("input has no complex structure 'J'")
    try:
        return KahlerStructure.build(doc.R, doc.J)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def cmd_kahler_check(args) -> int:
    doc, digest = ctj.read(args.file)
    K = _kahler(doc)
    bis = min_orth_bisectional(K, samples=args.samples, seed=args.seed)
    nonneg = is_alpha_nonneg(K.R, 6) if K.R.n >= 4 else None
    floor = -1e-8 * K.R.sup_norm
    if not nonneg:
        verdict = "not applicable (not six-nonnegative)"
    elif bis >= floor:
        verdict = "consistent (nonnegative orthogonal bisectional curvature)"
    else:
        verdict = "violated"
    results = {
        "j_defect": K.j_defect,
        "min_orth_bisectional": bis,
        "six_nonneg": nonneg,
        "verdict": verdict,
    }
    rows = [("J-invariance defect", K.j_defect), ("min orthogonal bisectional", bis),
            ("six-nonnegative", nonneg), ("verdict", verdict)]
    report = _report("kahler-check", {"file": str(args.file), "samples": args.samples}, digest, results,
                     {"positivity": POSITIVITY_TOL, "bisectional_floor": 1e-8, "j_tol": 1e-9},
                     args.seed, _wall(args))
    _emit(report, _table(f"Kaehler check of {args.file}", rows), args.json)
    return EXIT_CHECK if verdict == "violated" else EXIT_OK


def cmd_decompose4(args) -> int:
    doc, digest = ctj.read(args.file)
    R = doc.R
    if R.n != 4:
        raise DimensionError(f"decompose4 needs n = 4, got n = {R.n}")
    blk = cgt_blocks(R, args.orientation)
    results = {
        "orientation": args.orientation,
        "lambda": _floats(blk.lam),
        "mu": _floats(blk.mu),
        "scalar": blk.scalar,
        "D": [_floats(np.diag(d)) for d in blk.D],
        "O": [_matrix(o) for o in blk.O],
        "d_defect": blk.d_defect,
        "o_skew_defect": blk.o_skew_defect,
        "o_norm": blk.o_norm,
        "einstein": is_einstein(R),
        "certificate": None,
    }
    rows = [("orientation", args.orientation), ("lambda (W+)", results["lambda"]), ("mu (W-)", results["mu"]),
            ("scalar curvature", blk.scalar)]
    rows += [(f"D{a + 1} diagonal", results["D"][a]) for a in range(3)]
    rows += [(f"O{a + 1}", _floats(blk.O[a])) for a in range(3)]
    rows += [("D defect", blk.d_defect), ("O skew defect", blk.o_skew_defect), ("O norm", blk.o_norm),
             ("Einstein", results["einstein"])]
    if doc.J is not None:
        cert = rigidity_certificate(_kahler(doc))
        results["certificate"] = {
            "einstein_defect": cert.einstein_defect,
            "w_minus_norm": cert.w_minus_norm,
            "scalar": cert.scalar,
            "orientation": cert.orientation,
            "einstein_and_half_flat": cert.einstein_and_half_flat,
            "verdict": cert.verdict,
        }
        rows.append(("certificate", cert.verdict))
    if blk.d_defect > 1e-9 * max(R.sup_norm, 1e-300):
        rows.append(("WARNING", "diagonal blocks deviate from the predicted normal form"))
    report = _report("decompose4", {"file": str(args.file), "orientation": args.orientation}, digest, results,
                     {"d_defect": 1e-9, "einstein": 1e-10, "certificate": 1e-9}, None, _wall(args))
    _emit(report, _table(f"four-dimensional decomposition of {args.file}", rows), args.json)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    fixtures = Path(args.fixtures) if args.fixtures else default_fixture_dir()
    cfg = VerifyConfig(seed=args.seed, trials=args.trials, fixtures=fixtures)
    checks = run_suite(cfg)
    failed = [c.id for c in checks if not c.passed]
    results = {"checks": as_dicts(checks), "total": len(checks), "failed": failed}
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.id:<38} value={_fmt(c.value)}  tol={c.tolerance:g}  {c.anchor}"
             + (f"  [{c.detail}]" if c.detail else "") for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    cmd_args = {"trials": args.trials, "fixtures": args.fixtures}
    report = _report("verify-paper", cmd_args, None, results, {"positivity": POSITIVITY_TOL}, args.seed, _wall(args))
    _emit(report, "\n".join(lines) + "\n", args.json)
    return EXIT_CHECK if failed else EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser(default_seed: int) -> argparse.ArgumentParser:
    p = _Parser(prog="cosk", description="Curvature operators of the second kind on algebraic curvature tensors.")
    p.add_argument("--version", action="version", version=f"cosk {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def reporting(sp):
        sp.add_argument("--json", metavar="PATH", help="write the report-1 JSON to PATH ('-' for stdout)")
        sp.add_argument("--timing", action="store_true",
                        help="include wall time in the JSON report (breaks byte-identical output)")

    sp = sub.add_parser("spectrum", help="R-ring and R-hat spectra, alpha sums, max alpha")
    sp.add_argument("file")
    reporting(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("model", help="write a model tensor as CTJ")
    sp.add_argument("name", choices=sorted(_MODELS))
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--k1", type=float, default=1.0)
    sp.add_argument("--k2", type=float, default=1.0)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--c", type=float, default=4.0)
    sp.set_defaults(func=cmd_model)

    sp = sub.add_parser("kahler-check", help="orthogonal bisectional curvature versus six-nonnegativity")
    sp.add_argument("file")
    sp.add_argument("--samples", type=_pos_int, default=256)
    sp.add_argument("--seed", type=_nonneg_int, default=default_seed)
    reporting(sp)
    sp.set_defaults(func=cmd_kahler_check)

    sp = sub.add_parser("decompose4", help="Weyl spectra and the 9x9 block normal form (n = 4)")
    sp.add_argument("file")
    sp.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    reporting(sp)
    sp.set_defaults(func=cmd_decompose4)

    sp = sub.add_parser("verify-paper", help="run the full reproduction suite")
    sp.add_argument("--seed", type=_nonneg_int, default=default_seed)
    sp.add_argument("--trials", type=_pos_int, default=None, help="cap every fuzz budget at this many samples")
    sp.add_argument("--fixtures", metavar="DIR", default=None, help="directory holding the CTJ fixtures")
    reporting(sp)
    sp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser(_default_seed()).parse_args(argv)
    except _ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    args.start = time.perf_counter() if getattr(args, "timing", False) else None
    try:
        return args.func(args)
    except (ctj.CtjFormatError, OSError) as exc:
        print(f"cosk: malformed input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"cosk: validation failed: {exc} (defect {exc.defect:.3e})", file=sys.stderr)
        return EXIT_VALIDATION
    except MissingComplexStructure as exc:
        print(f"cosk: {exc}", file=sys.stderr)
        return EXIT_NO_J
    except DimensionError as exc:
        print(f"cosk: {exc}", file=sys.stderr)
        return EXIT_DIM
