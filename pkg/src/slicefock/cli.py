"""Command-line front end: ``slicefock tabulate | verify | transform``.

Exit status is 0 on success, 1 when a verification check fails and 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError
from .fock import FockElement
from .quadrature import DEFAULT_SPEC, LineMeasure, QuadratureSpec, moment_E
from .quaternion import I_UNIT, ImaginaryUnit, Quaternion
from .series import SliceSeries, coeffs_from_list
from .special import ALPHA_MIN, beta_n, rising
from .transforms import (
    HermiteExpansion,
    T_alpha_coeff,
    T_alpha_inverse_coeff,
    T_alpha_quad,
    T_inverse_quad,
    dunkl,
    dunkl_coeff,
    hermite_H,
)
from .verify import ALPHA_GRID, TOLERANCES, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEGREE_CAP = 40
HERMITE_SAMPLES = (0.5, 1.0, 1.5)


class InputError(Exception):
    """Bad input file or argument value (exit status 2)."""


# -- argument types ---------------------------------------------------------------

def _alpha(text: str) -> float:
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not a >= ALPHA_MIN:
        raise argparse.ArgumentTypeError(f"alpha must be >= {ALPHA_MIN}, got {a}")
    return a


def _degree(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= d <= DEGREE_CAP:
        raise argparse.ArgumentTypeError(f"degree must be in [0, {DEGREE_CAP}], got {d}")
    return d


def _positive(text: str) -> float:
    try:
        t = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (t > 0 and math.isfinite(t)):
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return t


def _point(text: str) -> Quaternion:
    """A real number or four comma-separated components."""
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse point {text!r}")
    if len(parts) == 1:
        return Quaternion(parts[0])
    if len(parts) == 4:
        return Quaternion(*parts)
    raise argparse.ArgumentTypeError("point must be a real number or x0,x1,x2,x3")


_NAMED_UNITS = {"i": (1.0, 0.0, 0.0), "j": (0.0, 1.0, 0.0), "k": (0.0, 0.0, 1.0)}


def _unit(text: str) -> ImaginaryUnit:
    if text.lower() in _NAMED_UNITS:
        return ImaginaryUnit(*_NAMED_UNITS[text.lower()])
    try:
        v = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse unit {text!r}")
    if len(v) != 3:
        raise argparse.ArgumentTypeError("unit must be i, j, k or u1,u2,u3")
    try:
        return ImaginaryUnit.from_vector(v)
    except (DomainError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


# -- output helpers ---------------------------------------------------------------

def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _load_spec(path: str | None) -> QuadratureSpec:
    if path is None:
        return DEFAULT_SPEC
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    data = _parse_json(text, path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: quadrature config must be a JSON object")
    try:
        return QuadratureSpec.from_dict(data)
    except (TypeError, ValueError, DomainError) as exc:
        raise InputError(f"{path}: {exc}")


def _parse_json(text: str, path: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}")


# -- tabulate -------------------------------------------------------------------

def tabulate_rows(alpha: float, degree: int, spec: QuadratureSpec = DEFAULT_SPEC):
    header = ["n", "beta_n", "E_nn_closed", "E_nn_quad"] + [f"H_n({x})" for x in HERMITE_SAMPLES]
    rows = []
    for n in range(degree + 1):
        closed = 4.0 ** n * math.factorial(n) * rising(alpha + 1.0, n)
        quad = moment_E(n, n, alpha, I_UNIT, spec).real
        rows.append([n, beta_n(n, alpha), closed, quad] + [hermite_H(n, x, alpha) for x in HERMITE_SAMPLES])
    return header, rows


def cmd_tabulate(args) -> int:
    spec = _load_spec(args.quad_config)
    header, rows = tabulate_rows(args.alpha, args.degree, spec)
    if args.format == "csv":
        text = _csv_text(header, rows)
    else:
        table = {"alpha": args.alpha, "degree": args.degree, "columns": header, "rows": rows}
        text = json.dumps(_jsonable(table), indent=2) + "\n"
    _write(text, args.output)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    spec = _load_spec(args.quad_config)
    cfg = RunConfig(alpha=args.alpha, degree=args.degree, tol=args.tol, seed=args.seed, spec=spec)
    results = run_suite(cfg, only=set(args.only) if args.only else None)
    failed = [r.name for r in results if not r.passed]
    if args.format == "csv":
        rows = [[r.name, "pass" if r.passed else "fail", float(r.residual), float(r.tol)] for r in results]
        text = _csv_text(["check", "status", "residual", "tol"], rows)
    else:
        report = {
            "config": {
                "alpha": cfg.alpha,
                "alpha_grid": list(ALPHA_GRID),
                "degree": cfg.degree,
                "tol_override": cfg.tol,
                "seed": cfg.seed,
                "quadrature": spec.to_dict(),
            },
            "passed": not failed,
            "failed": failed,
            "checks": [r.to_dict() for r in results],
        }
        text = json.dumps(_jsonable(report), indent=2) + "\n"
    _write(text, args.output)
    for name in failed:
        print(f"verify: check failed: {name}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- transform --------------------------------------------------------------------

def load_input(path: str, alpha: float):
    """Read a HermiteExpansion (JSON object) or a SliceSeries (JSON array)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    data = _parse_json(text, path)
    try:
        if isinstance(data, dict):
            return HermiteExpansion.from_obj(data)
        return FockElement(SliceSeries(coeffs_from_list(data, "series")), alpha)
    except (ValueError, DomainError) as exc:
        raise InputError(f"{path}: {exc}")


def _real_point(q: Quaternion, op: str) -> float:
    if q.imag.norm2() != 0.0:
        raise InputError(f"--op {op} needs a real --point")
    return q.real


def cmd_transform(args) -> int:
    spec = _load_spec(args.quad_config)
    obj = load_input(args.input, args.alpha)
    q = args.point
    if args.op in ("T", "dunkl") and not isinstance(obj, HermiteExpansion):
        raise InputError(f"--op {args.op} expects a Hermite expansion object {{\"alpha\", \"coeffs\"}}")
    if args.op == "Tinv" and isinstance(obj, HermiteExpansion):
        obj = T_alpha_coeff(obj)

    if args.op == "T":
        if args.method == "coeff":
            value = T_alpha_coeff(obj)(q)
        else:
            value = T_alpha_quad(obj, q, LineMeasure(obj.alpha), spec)
    elif args.op == "Tinv":
        x = _real_point(q, "Tinv")
        if args.method == "coeff":
            value = Quaternion.from_array(T_alpha_inverse_coeff(obj)(np.array([x]))[0])
        else:
            value = T_inverse_quad(obj, x, args.unit, spec)
    else:
        x = _real_point(q, "dunkl")
        if args.method == "coeff":
            value = Quaternion.from_array(dunkl_coeff(obj, x, args.unit))
        else:
            value = dunkl(obj, x, args.unit, LineMeasure(obj.alpha), spec)

    comps = [float(v) for v in value.array]
    if args.format == "csv":
        text = _csv_text(["x0", "x1", "x2", "x3"], [comps])
    else:
        text = json.dumps({"op": args.op, "method": args.method, "point": [float(v) for v in q.array],
                           "value": comps}) + "\n"
    _write(text, args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_alpha, default=0.5, help="weight parameter, >= -0.5 (default 0.5)")
    common.add_argument("--degree", type=_degree, default=8, help=f"degree cap, <= {DEGREE_CAP} (default 8)")
    common.add_argument("--tol", type=_positive, default=None,
                        help="override every check threshold (default: per-check thresholds)")
    common.add_argument("--seed", type=int, default=0, help="seed for random test data (default 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--quad-config", default=None, metavar="PATH", help="JSON file with quadrature settings")
    common.add_argument("-o", "--output", default=None, metavar="PATH", help="write to PATH instead of stdout")

    p = argparse.ArgumentParser(prog="slicefock", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tabulate", parents=[common], help="beta_n, E_{n,n} and H_n samples for n <= degree")
    t.set_defaults(func=cmd_tabulate)

    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("--only", nargs="+", metavar="CHECK", choices=sorted(TOLERANCES), help="run only the named checks")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("transform", parents=[common], help="apply T, T^-1 or the Dunkl transform at a point")
    x.add_argument("input", help="JSON file: Hermite expansion object or series array")
    x.add_argument("--op", choices=("T", "Tinv", "dunkl"), default="T")
    x.add_argument("--point", type=_point, default=Quaternion(0.5), help="real x or x0,x1,x2,x3")
    x.add_argument("--unit", type=_unit, default=I_UNIT, help="imaginary unit: i, j, k or u1,u2,u3")
    x.add_argument("--method", choices=("coeff", "quad"), default="coeff")
    x.set_defaults(func=cmd_transform)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"slicefock: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"slicefock: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
