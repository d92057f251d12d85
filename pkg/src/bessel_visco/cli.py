"""Command-line front end; every subcommand writes one CSV table.

Exit codes: 0 success, 1 validation error, 2 numerical failure. The
effective configuration (seed included) is echoed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .entire import BesselOperatorPair, estimate_order_type
from .errors import NumericalError
from .fraccalc import PowerJet
from .hereditary import SampledHistory, strain_from_stress
from .identities import lemma3_sides, lemma4_sides, pair_balance_residual
from .material import (
    BesselBody,
    _default_zero_cap,
    creep_compliance,
    fm_half_creep,
    laplace_sJ,
)
from .specfun import bessel_J_zeros

LEMMA3_ALPHAS = (
    Fraction(1, 3),
    Fraction(1, 2),
    Fraction(1),
    Fraction(3, 2),
    Fraction(2),
    Fraction(5, 2),
    Fraction(7, 3),
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _grid(lo: float, hi: float, n: int, log: bool) -> np.ndarray:
    if n == 1:
        return np.array([lo])
    if log:
        return np.logspace(math.log10(lo), math.log10(hi), n)
    return np.linspace(lo, hi, n)


def _nu(value: str) -> float:
    v = float(value)
    if not v > -1:
        raise argparse.ArgumentTypeError(f"--nu must be > -1, got {value}")
    return v


def _positive_int(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return v


def _fit_range(value: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in value.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--fit must look like LO:HI, got {value!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bessel-visco", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, nu=True):
        if nu:
            sp.add_argument("--nu", type=_nu, default=0.0)
        sp.add_argument("--output", "-o", default="-", help="CSV path, '-' for stdout")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("creep", help="creep compliance table t,J")
    common(sp)
    sp.add_argument("--t-min", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, default=10.0)
    sp.add_argument("--n-points", type=_positive_int, default=50)
    sp.add_argument("--log-grid", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--t-star", type=float, default=1e-4)

    sp = sub.add_parser("symbol", help="Laplace symbol s*J~(s) on a real s grid")
    common(sp)
    sp.add_argument("--s-min", type=float, default=0.01)
    sp.add_argument("--s-max", type=float, default=100.0)
    sp.add_argument("--n-points", type=_positive_int, default=50)
    sp.add_argument("--imag", type=float, default=0.0, help="constant imaginary part of s")
    sp.add_argument("--log-grid", action="store_true")

    sp = sub.add_parser("zeros", help="zeros j_{nu+2,n}")
    common(sp)
    sp.add_argument("--n-zeros", type=_positive_int, default=20)

    sp = sub.add_parser("ordertype", help="order/type estimate of the regularized operators")
    common(sp)
    sp.add_argument("--which", choices=("P", "Q"), default="P")
    sp.add_argument("--fit", type=_fit_range, default=(100, 1000))

    sp = sub.add_parser("lemmas", help="randomized exact checks of the summation identities")
    common(sp, nu=False)
    sp.add_argument("--trials", type=_positive_int, default=100)

    sp = sub.add_parser("balance", help="initial-data balance residuals for jets read from CSV")
    common(sp)
    sp.add_argument("--sigma-jet", required=True, type=Path)
    sp.add_argument("--eps-jet", required=True, type=Path)
    sp.add_argument("--trunc-N", type=int, default=6)
    sp.add_argument("--k-max", type=int, default=None)

    sp = sub.add_parser("hereditary", help="strain from a uniformly sampled stress history")
    common(sp)
    sp.add_argument("--input", required=True, type=Path, help="CSV with columns t,sigma")

    sp = sub.add_parser("compare-fm", help="short-time gap to the order-1/2 fractional Maxwell law")
    common(sp)
    sp.add_argument("--k-min", type=int, default=4)
    sp.add_argument("--k-max", type=int, default=12)
    return p


# ---------------------------------------------------------------------------
# subcommands: each returns (header, rows)
# ---------------------------------------------------------------------------


def _body(args) -> BesselBody:
    return BesselBody(args.nu, series_tol=getattr(args, "tol", 1e-12), t_star=getattr(args, "t_star", 1e-4))


def cmd_creep(args):
    if args.t_min < 0 or args.t_max < args.t_min:
        raise UsageError("--t-min must be >= 0 and <= --t-max")
    if args.log_grid and args.t_min <= 0:
        raise UsageError("--log-grid needs --t-min > 0")
    t = _grid(args.t_min, args.t_max, args.n_points, args.log_grid)
    J = creep_compliance(_body(args), t)
    return ["t", "J"], zip(t, J)


def cmd_symbol(args):
    if args.log_grid and args.s_min <= 0:
        raise UsageError("--log-grid needs --s-min > 0")
    body = _body(args)
    rows = []
    for re in _grid(args.s_min, args.s_max, args.n_points, args.log_grid):
        s = complex(re, args.imag)
        v = laplace_sJ(body, s)
        rows.append((s.real, s.imag, v.real, v.imag))
    return ["re_s", "im_s", "re_sJ", "im_sJ"], rows


def cmd_zeros(args):
    cap = _default_zero_cap()
    if args.n_zeros > cap:
        raise UsageError(f"--n-zeros {args.n_zeros} exceeds the zero-table cap {cap}")
    table = bessel_J_zeros(args.nu + 2.0, args.n_zeros)
    return ["n", "j"], ((n + 1, j) for n, j in enumerate(table.zeros))


def cmd_ordertype(args):
    lo, hi = args.fit
    pair = BesselOperatorPair(args.nu)
    est = estimate_order_type(pair.reg(args.which, hi + 1), (lo, hi))
    return ["rho", "sigma", "residual"], [(est.rho, est.sigma, est.residual)]


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-50, 50), rng.randint(1, 20))


def cmd_lemmas(args):
    rng = random.Random(args.seed)
    rows = []
    for trial in range(1, args.trials + 1):
        alpha = rng.choice(LEMMA3_ALPHAS)
        jet = [_rand_fraction(rng) for _ in range(8)]
        lhs, rhs = lemma3_sides(jet, alpha)
        rows.append((trial, f"lemma3 alpha={alpha}", "pass" if lhs == rhs else "fail"))
        N, M = rng.randint(1, 12), rng.randint(1, 8)
        q = [_rand_fraction(rng) for _ in range(N + 1)]
        b = [_rand_fraction(rng) for _ in range(M + N)]
        lhs, rhs = lemma4_sides(q, b, M, N)
        rows.append((trial, f"lemma4 N={N} M={M}", "pass" if lhs == rhs else "fail"))
    return ["trial", "case", "status"], rows


def read_jet(path: Path) -> PowerJet:
    """Two-column CSV ``k,value`` with dense k = 0..K."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"k", "value"}:
            raise UsageError(f"{path}: expected header 'k,value'")
        entries = sorted((int(r["k"]), float(r["value"])) for r in reader)
    if [k for k, _ in entries] != list(range(len(entries))):
        raise UsageError(f"{path}: k must run densely from 0")
    return PowerJet(v for _, v in entries)


def cmd_balance(args):
    pair = BesselOperatorPair(args.nu)
    sj, ej = read_jet(args.sigma_jet), read_jet(args.eps_jet)
    N = args.trunc_N
    if N < 0:
        raise UsageError("--trunc-N must be >= 0")
    k_max = args.k_max if args.k_max is not None else pair.half_nu_ceil + N + 1
    rows = [(k, pair_balance_residual(pair, sj, ej, k, N)) for k in range(1, k_max + 1)]
    return ["k", "residual"], rows


def read_history(path: Path) -> SampledHistory:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"t", "sigma"} <= set(reader.fieldnames):
            raise UsageError(f"{path}: expected columns 't,sigma'")
        rows = [(float(r["t"]), float(r["sigma"])) for r in reader]
    if len(rows) < 2:
        raise UsageError(f"{path}: need at least two samples")
    t = np.array([r[0] for r in rows])
    dt = t[1] - t[0]
    if dt <= 0 or not np.allclose(np.diff(t), dt, rtol=1e-9, atol=1e-12):
        raise UsageError(f"{path}: t must be uniformly increasing")
    return SampledHistory(float(t[0]), float(dt), np.array([r[1] for r in rows]), "stress")


def cmd_hereditary(args):
    sigma = read_history(args.input)
    eps = strain_from_stress(functools.partial(creep_compliance, _body(args)), sigma)
    return ["t", "sigma", "epsilon"], zip(sigma.times, sigma.values, eps.values)


def cmd_compare_fm(args):
    if args.k_min > args.k_max or args.k_min < 0:
        raise UsageError("need 0 <= --k-min <= --k-max")
    body = _body(args)
    t = 2.0 ** -np.arange(args.k_min, args.k_max + 1, dtype=float)
    Jb = creep_compliance(body, t)
    Jf = fm_half_creep(args.nu, t)
    gap = Jb - Jf
    return ["t", "J_bessel", "J_fm", "gap", "gap_over_sqrt_t"], zip(t, Jb, Jf, gap, np.abs(gap) / np.sqrt(t))


COMMANDS = {
    "creep": cmd_creep,
    "symbol": cmd_symbol,
    "zeros": cmd_zeros,
    "ordertype": cmd_ordertype,
    "lemmas": cmd_lemmas,
    "balance": cmd_balance,
    "hereditary": cmd_hereditary,
    "compare-fm": cmd_compare_fm,
}


def _config(args) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        cfg[k] = str(v) if isinstance(v, Path) else v
    return cfg


def write_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"bessel-visco: error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(_config(args), default=str), file=sys.stderr)
    try:
        header, rows = COMMANDS[args.subcommand](args)
        buf = io.StringIO()
        write_csv(header, rows, buf)
    except (UsageError, ValueError, OSError) as exc:
        print(f"bessel-visco: error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ArithmeticError) as exc:
        print(f"bessel-visco: numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.output == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return 0


def main() -> None:
    sys.exit(run())
