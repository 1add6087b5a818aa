"""Command-line interface: ``python -m hypercone <command> ...``.

Exit codes: 0 success, 1 verification failure (disagreement, failed suite,
solver status other than Optimal where one is required), 2 usage error.
"""

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import conelib
from .config import DEFAULT_SOLVER, DEFAULT_TOLERANCES
from .conelib import ConeSpec, Strategy, build, size_report
from .errors import HyperconeError, ParseError
from .lmi import (AffineMap, AffineScalar, SdpRepresentation, embed, problem_from_representation,
                  smat, svec, to_json)
from .membership import member, output_rows
from .oracle import orthant_margin, psd_deriv_margin, spectrahedral_margin
from .sdpa import read_sdpa, to_sdpa
from .sdpsolve import MAXITER, OPTIMAL, TROUBLE, solve
from .suites import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _floats(text):
    try:
        return np.array([float(t) for t in text.replace(";", ",").split(",") if t.strip()])
    except ValueError:
        raise UsageError(f"could not parse numbers from {text!r}") from None


def load_spec(text, strategy=None):
    """Cone spec from a JSON file path, inline JSON, or shorthand like
    ``orthant:4:1``, ``psd:3:2``, ``dual:psd:3:1``, ``three_ellipse:2``."""
    if text is None:
        raise UsageError("--spec is required")
    try:
        if os.path.exists(text):
            with open(text) as fh:
                spec = ConeSpec.from_json(fh.read())
        elif text.lstrip().startswith("{"):
            spec = ConeSpec.from_json(text)
        else:
            spec = _shorthand(text)
    except HyperconeError as exc:
        raise UsageError(str(exc)) from None
    if strategy is not None:
        spec = spec.with_strategy(strategy)
    return spec


def _shorthand(text):
    parts = text.lower().split(":")
    try:
        if parts[0] == "dual":
            return ConeSpec("dual", inner=_shorthand(":".join(parts[1:])))
        if parts[0] in ("three_ellipse", "3ellipse"):
            k = int(parts[1]) if len(parts) > 1 else 0
            return conelib.SpectrahedralDeriv(conelib.three_ellipse_pencil(), k)
        if parts[0] in ("orthant", "psd", "psd_deriv") and len(parts) == 3:
            kind = "psd" if parts[0].startswith("psd") else "orthant"
            return ConeSpec(kind, int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise UsageError(f"unrecognized cone spec {text!r}")


def _matrix_n(spec):
    base = spec.inner if spec.kind == "dual" else spec
    return base.n if base.kind == "psd" else None


def parse_point(text, spec):
    """Interface coordinates; matrix cones also accept a full row-major matrix."""
    values = _floats(text)
    n = _matrix_n(spec)
    if n is not None and values.size == n * n and n > 1:
        X = values.reshape(n, n)
        if not np.allclose(X, X.T, atol=1e-12):
            raise UsageError("matrix point is not symmetric")
        return svec(X)
    if values.size != spec.interface_dim:
        raise UsageError(f"point has {values.size} entries, expected {spec.interface_dim}"
                         + (f" (or {n * n} for a full matrix)" if n else ""))
    return values


def parse_functional(text, spec):
    """Coefficients of a linear functional in interface coordinates.  For
    matrix cones a full matrix ``C`` means ``<C, X>``."""
    values = _floats(text)
    n = _matrix_n(spec)
    if n is not None and values.size == n * n and n > 1:
        C = values.reshape(n, n)
        C = 0.5 * (C + C.T)
        return np.array([C[i, j] * (1.0 if i == j else 2.0) for i in range(n) for j in range(i, n)])
    if values.size != spec.interface_dim:
        raise UsageError(f"functional has {values.size} entries, expected {spec.interface_dim}")
    return values


def _tolerances(args):
    return DEFAULT_TOLERANCES if args.tol is None else DEFAULT_TOLERANCES.with_overrides(boundary=args.tol)


def _emit(args, text, default_name):
    if args.out:
        path = args.out
        if os.path.isdir(path):
            path = os.path.join(path, default_name)
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _oracle_verdict(spec, point, tol):
    if spec.kind == "orthant":
        return orthant_margin(point, spec.k, tol)
    if spec.kind == "psd":
        return psd_deriv_margin(smat(point, spec.n), spec.k, tol)
    if spec.kind == "spectrahedral":
        return spectrahedral_margin(spec.pencil, spec.k, point, tol)
    return None


# ---------------------------------------------------------------------------
# commands


def cmd_represent(args):
    spec = load_spec(args.spec, args.strategy)
    rep = build(spec)
    report = size_report(rep)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        stem = spec.label().replace("(", "_").replace(")", "").replace(",", "_").replace("[", "_").replace("]", "")
        with open(os.path.join(args.out, stem + ".json"), "w") as fh:
            fh.write(to_json(rep, indent=1))
        with open(os.path.join(args.out, stem + ".dat-s"), "w") as fh:
            fh.write(to_sdpa(problem_from_representation(rep)))
        with open(os.path.join(args.out, stem + ".size.txt"), "w") as fh:
            fh.write(report.table() + "\n")
    if args.format == "json":
        print(json.dumps({"spec": spec.to_dict(), "size_report": report.to_dict()}, indent=1))
    elif args.format == "sdpa":
        sys.stdout.write(to_sdpa(problem_from_representation(rep)))
    else:
        print(f"{spec.label()}  strategy={spec.strategy.value}  form="
              f"{'slice' if rep.is_slice_form else 'projection'}")
        print(report.table())
    return EXIT_OK


def cmd_member(args):
    spec = load_spec(args.spec, args.strategy)
    if args.point is None:
        raise UsageError("--point is required")
    point = parse_point(args.point, spec)
    tol = _tolerances(args)
    rep = build(spec)
    oracle = _oracle_verdict(spec, point, tol)
    verdict = member(rep, point, tol=tol)
    out = {"spec": spec.label(), "point": point.tolist(),
           "representation": {"margin": verdict.margin, "decision": verdict.decision}}
    agree = True
    if oracle is not None:
        out["oracle"] = {"margin": oracle.margin, "binding_index": oracle.binding_index,
                         "decision": oracle.decision}
        if "Boundary" not in (oracle.decision, verdict.decision):
            agree = oracle.decision == verdict.decision
        out["agree"] = agree
    if args.format == "json":
        print(json.dumps(out, indent=1, default=float))
    else:
        r = out["representation"]
        print(f"cone            {out['spec']}")
        print(f"representation  margin={r['margin']:+.3e}  {r['decision']}")
        if oracle is not None:
            print(f"oracle          margin={oracle.margin:+.3e}  {oracle.decision}"
                  f"  (binding e_{oracle.binding_index})")
            print(f"agree           {'yes' if agree else 'NO'}")
    return EXIT_OK if agree else EXIT_FAIL


def cmd_solve(args):
    config = DEFAULT_SOLVER
    if args.sdpa:
        try:
            problem = read_sdpa(args.sdpa)
        except (OSError, ParseError) as exc:
            raise UsageError(str(exc)) from None
        report = solve(problem, config)
        out = report.to_dict()
    else:
        spec = load_spec(args.spec, args.strategy)
        if args.objective is None:
            raise UsageError("--objective is required with --spec")
        rep = build(spec)
        rows = output_rows(rep)
        c = parse_functional(args.objective, spec)
        objective = sum((r * float(ci) for r, ci in zip(rows, c)), AffineScalar())
        eqs = []
        for text in args.eq or []:
            if "=" not in text:
                raise UsageError(f"equality {text!r} must look like 'a1,a2,...=b'")
            lhs, rhs = text.split("=", 1)
            a = parse_functional(lhs, spec)
            eqs.append(sum((r * float(ai) for r, ai in zip(rows, a)), AffineScalar()) - float(rhs))
        problem = problem_from_representation(rep, objective, args.sense, eqs)
        report = solve(problem, config)
        out = report.to_dict()
        out["spec"] = spec.label()
        out["interface_point"] = [float(r.evaluate(report.primal_point)) for r in rows]
        del out["primal_point"]
    text = json.dumps(out, indent=1) + "\n"
    _emit(args, text, "report.json")
    return EXIT_OK


def boundary_rows(spec, count, fixed_index=None, fixed_value=1.0, config=DEFAULT_SOLVER):
    """Maximize ``count`` evenly spaced directions over a 2-d slice of a 3-d cone.

    The slice fixes one interface coordinate (the last nonzero entry of the
    pencil direction for spectrahedral cones, the last coordinate otherwise).
    Yields dicts with keys theta, dir_x, dir_y, x, y, objective, status.  x and y
    are NaN for Infeasible and Unbounded directions.
    """
    if spec.interface_dim != 3:
        raise UsageError("boundary needs a cone in R^3")
    if fixed_index is None:
        base = spec.inner if spec.kind == "dual" else spec
        fixed_index = int(np.nonzero(base.pencil.e)[0][-1]) if base.kind == "spectrahedral" else 2
    free = [i for i in range(3) if i != fixed_index]
    rep = build(spec)
    host = SdpRepresentation(2, "slice")
    image = [None] * 3
    image[free[0]] = AffineScalar.var(0)
    image[free[1]] = AffineScalar.var(1)
    image[fixed_index] = AffineScalar(float(fixed_value), {})
    embed(host, rep, AffineMap(image))
    for j in range(count):
        theta = 2.0 * np.pi * j / count
        d = np.array([np.cos(theta), np.sin(theta)])
        report = solve(problem_from_representation(host, AffineScalar.linear([0, 1], d), "max"), config)
        # MaxIter / NumericalTrouble still carry the best iterate; the status
        # column tells the reader it is of reduced accuracy
        x, y = (report.primal_point[:2] if report.status in (OPTIMAL, MAXITER, TROUBLE)
                else (np.nan, np.nan))
        yield {"theta": theta, "dir_x": d[0], "dir_y": d[1], "x": x, "y": y,
               "objective": report.objective_value, "status": report.status}


def cmd_boundary(args):
    spec = load_spec(args.spec, args.strategy)
    rows = list(boundary_rows(spec, args.count, args.fix_index, args.fix_value))
    fields = ["theta", "dir_x", "dir_y", "x", "y", "objective", "status"]
    if args.format == "json":
        text = json.dumps(rows, indent=1, default=float) + "\n"
    else:
        import io
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in r.items()})
        text = buf.getvalue()
    _emit(args, text, "boundary.csv")
    bad = sum(r["status"] != OPTIMAL for r in rows)
    if bad:
        print(f"{bad} of {len(rows)} directions did not solve to optimality", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    names = args.suite if args.suite else list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    results = run_suites(args.seed, names, n_max=args.n_max)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("all suites passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="cone spec: JSON file, inline JSON, or shorthand "
                                       "(orthant:N:K, psd:N:K, dual:..., three_ellipse:K)")
    common.add_argument("--strategy", choices=[s.value for s in Strategy],
                        help="construction strategy (overrides the spec)")
    common.add_argument("--tol", type=float, help="boundary tolerance on margins (default 1e-6)")
    common.add_argument("--seed", type=int, default=42, help="seed for randomized commands")
    common.add_argument("--out", help="output file or directory")
    common.add_argument("-v", "--verbose", action="store_true", help="solver debug logging")

    parser = argparse.ArgumentParser(prog="hypercone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("represent", parents=[common], help="build a representation and report its size")
    p.add_argument("--format", choices=["text", "json", "sdpa"], default="text")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("member", parents=[common], help="membership: oracle and representation")
    p.add_argument("--point", help="comma-separated coordinates (full matrix allowed for psd)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("solve", parents=[common], help="solve a linear program over a cone or an SDPA file")
    p.add_argument("--sdpa", help="SDPA sparse file to solve instead of a cone program")
    p.add_argument("--objective", help="objective coefficients (full matrix allowed for psd)")
    p.add_argument("--eq", action="append", help="linear equality 'a1,a2,...=b' (repeatable)")
    p.add_argument("--sense", choices=["min", "max"], default="min")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("boundary", parents=[common], help="boundary points of a 2-d slice of a 3-d cone")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--fix-index", type=int, default=None, help="coordinate held fixed (default: slice z=1)")
    p.add_argument("--fix-value", type=float, default=1.0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--suite", action="append", help=f"suite name, repeatable: {', '.join(SUITES)}")
    p.add_argument("--n-max", type=int, default=8, help="largest dimension in the suites")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HyperconeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
