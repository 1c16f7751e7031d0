"""Command line interface: matrix functions and the benchmark harness.

Exit codes: 0 success, 2 precondition violation, 3 no convergence,
64 usage or input-format error.
"""

import argparse
import csv
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .config import DEFAULT_CONFIG
from .contour import ContourSpec, funm_contour
from .cqt import CqtMatrix, finite_section
from .errors import (
    MalformedFileError,
    NoConvergenceError,
    PreconditionError,
)
from .fileio import read_file, write_file
from .finite import FiniteQtMatrix, fqt_mul, fqt_to_dense
from .oracles import laplacian_symbol_coeffs, sine_transform_oracle
from .series import SeriesSpec, funm_laurent, funm_taylor
from .symbol import LaurentSymbol

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class BenchRow:
    case: str
    time_s: float
    band: int
    rows: int
    cols: int
    rank: int
    error: Optional[float] = None


_HEADER = ("case", "time", "band", "rows", "columns", "rank", "error")


def format_report(rows):
    table = [_HEADER]
    for r in rows:
        err = "-" if r.error is None else f"{r.error:.3e}"
        table.append((r.case, f"{r.time_s:.3f}", str(r.band), str(r.rows),
                      str(r.cols), str(r.rank), err))
    widths = [max(len(row[i]) for row in table) for i in range(len(_HEADER))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in table]
    return "\n".join(lines)


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADER)
        for r in rows:
            writer.writerow([r.case, f"{r.time_s:.6f}", r.band, r.rows,
                             r.cols, r.rank,
                             "" if r.error is None else f"{r.error:.6e}"])


def _result_row(case, result, elapsed, error=None):
    corr = result.corr if isinstance(result, CqtMatrix) else result.corr_tl
    return BenchRow(case=case, time_s=elapsed,
                    band=result.symbol.support_len,
                    rows=corr.p, cols=corr.q, rank=corr.rank, error=error)


def _build_config(args):
    cfg = DEFAULT_CONFIG
    updates = {}
    if getattr(args, "tol", None) is not None:
        updates["tol_stop"] = args.tol
    if getattr(args, "max_terms", None) is not None:
        updates["max_terms"] = args.max_terms
    if getattr(args, "max_levels", None) is not None:
        updates["max_levels"] = args.max_levels
    env_cap = os.environ.get("CQT_MAX_SECTION")
    if env_cap:
        try:
            updates["max_finite_section"] = int(env_cap)
        except ValueError as exc:
            raise UsageError(f"CQT_MAX_SECTION must be an integer: "
                             f"{env_cap!r}") from exc
    return cfg.updated(**updates) if updates else cfg


def _load_coeff_file(path):
    """Laurent polynomial coefficients, one `index re im` triple per line.

    Optional first line `radius <rho>` or `annulus <r> <R>` overrides the
    analyticity region; without it the series is treated as an exact
    (Laurent) polynomial.
    """
    cmap = {}
    radius = None
    annulus = None
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] == "radius" and len(fields) == 2:
                radius = float(fields[1])
                continue
            if fields[0] == "annulus" and len(fields) == 3:
                annulus = (float(fields[1]), float(fields[2]))
                continue
            if len(fields) != 3:
                raise UsageError(
                    f"{path}:{ln}: expected 'index re im'")
            cmap[int(fields[0])] = complex(float(fields[1]),
                                           float(fields[2]))
    if not cmap:
        raise UsageError(f"{path}: no coefficients found")
    spec = SeriesSpec.laurent_polynomial(cmap)
    if annulus is not None:
        spec = SeriesSpec.laurent(spec.coeff, annulus[0], annulus[1],
                                  scalar=spec.scalar, name="coeff-file")
    elif radius is not None:
        if any(k < 0 for k in cmap):
            raise UsageError(f"{path}: radius given but negative "
                             f"indices present; use annulus")
        spec = SeriesSpec(coeff=spec.coeff, radius=radius,
                          scalar=spec.scalar, name="coeff-file")
    return spec


def _series_spec(func):
    if func == "exp":
        return SeriesSpec.exp()
    if func == "log1p":
        return SeriesSpec.log1p()
    if func == "sqrt1p":
        return SeriesSpec.sqrt1p()
    if func.startswith("coeff-file:"):
        return _load_coeff_file(func.split(":", 1)[1])
    raise UsageError(f"unknown function {func!r}")


def _scalar_callback(func):
    if func == "exp":
        return np.exp
    if func == "log1p":
        return lambda z: np.log(1.0 + z)
    if func == "sqrt1p":
        return lambda z: np.sqrt(1.0 + z)
    if func.startswith("coeff-file:"):
        return _series_spec(func).scalar
    raise UsageError(f"unknown function {func!r}")


def _dense_oracle(matrix, func, result):
    """Residual of the result against a dense matrix-function oracle."""
    if isinstance(matrix, CqtMatrix):
        n_ref, n_cmp = 600, 80
        dense = finite_section(matrix, n_ref)
        got = finite_section(result, n_cmp)
    else:
        n_ref = n_cmp = matrix.m
        dense = fqt_to_dense(matrix)
        got = fqt_to_dense(result)
    if func == "exp":
        ref = scipy.linalg.expm(dense)
    elif func == "log1p":
        ref = scipy.linalg.logm(np.eye(n_ref) + dense)
    elif func == "sqrt1p":
        ref = scipy.linalg.sqrtm(np.eye(n_ref) + dense)
    else:
        spec = _series_spec(func)
        vals, vecs = np.linalg.eig(dense)
        ref = vecs @ np.diag(spec.scalar(vals)) @ np.linalg.inv(vecs)
    return float(np.abs(got - ref[:n_cmp, :n_cmp]).max())


def cmd_funm(args):
    cfg = _build_config(args)
    matrix = read_file(args.input)
    center = complex(*(float(p) for p in args.contour_center.split(",")))
    contour = ContourSpec.circle(center, args.contour_radius)
    start = time.perf_counter()
    if args.method == "series":
        result = funm_taylor(matrix, _series_spec(args.func), cfg)
    elif args.method == "laurent":
        spec = _series_spec(args.func)
        if spec.annulus is None:
            raise UsageError(
                "method laurent requires a Laurent coefficient file")
        result = funm_laurent(matrix, spec, cfg)
    else:
        result = funm_contour(matrix, _scalar_callback(args.func), contour,
                              cfg)
    elapsed = time.perf_counter() - start
    write_file(args.output, result)
    error = None
    if args.oracle == "dense":
        error = _dense_oracle(matrix, args.func, result)
    row = _result_row(os.path.basename(args.output), result, elapsed, error)
    print(format_report([row]))
    if args.csv:
        write_csv(args.csv, [row])
    return EXIT_OK


def _hessenberg_symbol(k):
    # Hessenberg band: one subdiagonal, k superdiagonals, all ones.
    return LaurentSymbol(np.ones(k + 2), -1)


def _laplacian_power(m, power=10, cfg=DEFAULT_CONFIG):
    h = FiniteQtMatrix(m, LaurentSymbol(laplacian_symbol_coeffs(m), -1))
    result = h.identity_like()
    base = h
    exponent = power
    while exponent:
        if exponent & 1:
            result = fqt_mul(result, base, cfg)
        exponent >>= 1
        if exponent:
            base = fqt_mul(base, base, cfg)
    return result


def _parse_sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad sizes list {text!r}") from exc
    if not sizes or any(s < 1 for s in sizes):
        raise UsageError("sizes list must contain positive integers")
    return sizes


def _bench_case(rows, case, fn):
    try:
        rows.append(fn())
    except Exception as exc:  # keep sweeping; mark the failed case
        print(f"{case}: FAILED ({exc})", file=sys.stderr)
        rows.append(BenchRow(case=case, time_s=0.0, band=0, rows=0, cols=0,
                             rank=0, error=None))


def cmd_bench(args):
    cfg = _build_config(args)
    rows = []
    if args.bench_case == "hessenberg-exp":
        if args.kmax < 1:
            raise UsageError("--kmax must be at least 1")
        for k in range(1, args.kmax + 1):
            def run(k=k):
                matrix = CqtMatrix(_hessenberg_symbol(k))
                start = time.perf_counter()
                result = funm_taylor(matrix, SeriesSpec.exp(), cfg)
                elapsed = time.perf_counter() - start
                err = _dense_oracle(matrix, "exp", result)
                return _result_row(f"hessenberg-exp k={k}", result, elapsed,
                                   err)
            _bench_case(rows, f"hessenberg-exp k={k}", run)
    elif args.bench_case == "finite-exp":
        for m in _parse_sizes(args.sizes):
            def run(m=m):
                matrix = _laplacian_power(m, cfg=cfg)
                start = time.perf_counter()
                result = funm_taylor(matrix, SeriesSpec.exp(), cfg)
                elapsed = time.perf_counter() - start
                oracle = sine_transform_oracle(
                    m, lambda lam: np.exp(lam ** 10), 1)
                err = float(np.linalg.norm(result.column(0) - oracle))
                return _result_row(f"finite-exp m={m}", result, elapsed, err)
            _bench_case(rows, f"finite-exp m={m}", run)
    else:  # contour
        if args.func not in ("sqrt", "log"):
            raise UsageError("--func must be sqrt or log")
        scalar = np.sqrt if args.func == "sqrt" else np.log
        for m in _parse_sizes(args.sizes):
            def run(m=m):
                matrix = _laplacian_power(m, cfg=cfg).add(
                    FiniteQtMatrix.identity(m), cfg)
                contour = ContourSpec.circle(1.5, 1.0)
                start = time.perf_counter()
                result = funm_contour(matrix, scalar, contour, cfg)
                elapsed = time.perf_counter() - start
                oracle = sine_transform_oracle(
                    m, lambda lam: scalar(1.0 + lam ** 10), 1)
                err = float(np.linalg.norm(result.column(0) - oracle))
                return _result_row(f"contour-{args.func} m={m}", result,
                                   elapsed, err)
            _bench_case(rows, f"contour-{args.func} m={m}", run)
    print(format_report(rows))
    if args.csv:
        write_csv(args.csv, rows)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="qtmat",
                     description="Quasi-Toeplitz matrix functions")
    sub = parser.add_subparsers(dest="command", required=True)

    funm = sub.add_parser("funm", help="compute f(A) for a matrix file")
    funm.add_argument("--func", required=True,
                      help="exp | log1p | sqrt1p | coeff-file:<path>")
    funm.add_argument("--method", required=True,
                      choices=("series", "laurent", "contour"))
    funm.add_argument("--input", required=True)
    funm.add_argument("--output", required=True)
    funm.add_argument("--tol", type=float, default=None)
    funm.add_argument("--contour-center", default="1.5,0")
    funm.add_argument("--contour-radius", type=float, default=1.0)
    funm.add_argument("--max-terms", type=int, default=None)
    funm.add_argument("--max-levels", type=int, default=None)
    funm.add_argument("--oracle", choices=("none", "dense"), default="none")
    funm.add_argument("--csv", default=None)

    bench = sub.add_parser("bench", help="run the benchmark harness")
    bench_sub = bench.add_subparsers(dest="bench_case", required=True)
    hess = bench_sub.add_parser("hessenberg-exp")
    hess.add_argument("--kmax", type=int, required=True)
    fin = bench_sub.add_parser("finite-exp")
    fin.add_argument("--sizes", required=True)
    cont = bench_sub.add_parser("contour")
    cont.add_argument("--func", required=True)
    cont.add_argument("--sizes", required=True)
    for sp in (hess, fin, cont):
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--max-terms", type=int, default=None)
        sp.add_argument("--max-levels", type=int, default=None)
        sp.add_argument("--csv", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "funm":
            return cmd_funm(args)
        return cmd_bench(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NoConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
