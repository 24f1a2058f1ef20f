"""
Command-line front end: ``pcl {mi,coeffs,capacity,unitcost}``.

Sweeps are written as CSV (17 significant digits, header row) or JSON lines,
always in ascending grid order. Settings come from flags, then an optional
``key = value`` config file (``--config``), then defaults; flags win.

Exit status: 0 on success, 2 on usage or config errors, 3 on numerical failure.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .asymptotics import ExpansionCoefficients, coefficients, expansion_eval, extract_coeffs_empirical
from .capacity import (
    BestOverGrid,
    PEqualsEps,
    PEqualsMinusEpsLogEps,
    capacity_upper_bound,
    flash_lower_bound,
)
from .constellations import binary_flash, uniform_pem
from .errors import PoissonChannelError
from .mi import flash_crossing, flash_ratio_logdomain, mutual_information
from .types import ChannelPoint, GeometricNoise, Noiseless, PoissonNoise, read_constellation
from .unitcost import capacity_per_unit_cost, energy_per_bit, geometric_divergence_rate_limit

EXIT_USAGE = 2
EXIT_NUMERIC = 3
LOG2 = math.log(2.0)
OUTPUT_GROUPS = ("mi", "ebit", "coeffs", "bounds", "unitcost")


class UsageError(Exception):
    pass


def default_tol():
    raw = os.environ.get("PCL_DEFAULT_TOL")
    if raw is None:
        return 1e-12
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"PCL_DEFAULT_TOL: cannot parse {raw!r} as a number") from None


def parse_constellation(spec):
    kind, _, arg = spec.partition(":")
    try:
        if kind == "pem":
            return uniform_pem(int(arg))
        if kind == "flash":
            return binary_flash(float(arg))
        if kind == "file":
            return read_constellation(arg)
    except (ValueError, OSError) as exc:
        raise UsageError(f"--constellation {spec!r}: {exc}") from None
    raise UsageError(f"--constellation {spec!r}: expected pem:<m>, flash:<p> or file:<path>")


def parse_noise(spec):
    kind, _, arg = spec.partition(":")
    try:
        if kind == "none" and not arg:
            return Noiseless()
        if kind == "poisson":
            return PoissonNoise(float(arg))
        if kind == "geometric":
            return GeometricNoise(float(arg))
    except ValueError as exc:
        raise UsageError(f"--noise {spec!r}: {exc}") from None
    raise UsageError(f"--noise {spec!r}: expected none, poisson:<eps_n> or geometric:<eps_n>")


def read_config(path):
    """Parse ``key = value`` lines; ``#`` comments; quotes around values optional."""
    out = {}
    try:
        text = open(path).read()
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip().replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip().strip("\"'")
    return out


CONFIG_KEYS = {
    "constellation": str,
    "noise": str,
    "eps_start": float,
    "eps_stop": float,
    "eps_points": int,
    "eps_scale": str,
    "tol": float,
    "format": str,
    "jobs": int,
    "outputs": str,
    "grid": str,
}


def resolve(args, defaults):
    """Merge flags over config-file values over ``defaults``."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    merged = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in cfg:
            try:
                merged[key] = CONFIG_KEYS[key](cfg[key])
            except ValueError:
                raise UsageError(f"{args.config}: field {key!r}: cannot parse {cfg[key]!r}") from None
        else:
            merged[key] = default
    return merged


def build_grid(start, stop, points, scale):
    if points is None or points < 2:
        raise UsageError("--eps-points must be at least 2")
    if not (0 <= start < stop):
        raise UsageError(f"need 0 <= eps-start < eps-stop, got {start} and {stop}")
    if scale == "log":
        if start <= 0:
            raise UsageError("log grid needs eps-start > 0")
        return np.geomspace(start, stop, points)
    if scale == "linear":
        return np.linspace(start, stop, points)
    raise UsageError(f"--eps-scale must be log or linear, got {scale!r}")


def check_tol_arg(tol):
    if not (0 < tol < 1):
        raise UsageError(f"--tol must lie in (0, 1), got {tol}")
    return tol


# Output ---------------------------------------------------------------------


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.16e}"


def write_rows(rows, columns, fmt_name, out):
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([row[c] if isinstance(row[c], str) else fmt(row[c]) for c in columns])
        out.write(buf.getvalue())
    elif fmt_name == "jsonl":
        for row in rows:
            clean = {}
            for c in columns:
                v = row[c]
                if isinstance(v, float) and not math.isfinite(v):
                    v = fmt(v)
                clean[c] = v
            out.write(json.dumps(clean) + "\n")
    else:
        raise UsageError(f"--format must be csv or jsonl, got {fmt_name!r}")


def parallel_map(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# Subcommands ------------------------------------------------------------------


def sweep_record(constellation, noise, eps_s, tol, coeffs, eb_min):
    """One row of an energy sweep (a dict of the SweepRecord fields)."""
    res = mutual_information(ChannelPoint(constellation, noise, float(eps_s)), tol)
    eb = energy_per_bit(eps_s, res.nats) if res.nats > 0 else math.inf
    upper = flash = None
    if isinstance(noise, Noiseless) and eps_s > 0:
        upper = capacity_upper_bound(eps_s)
        flash = flash_lower_bound(eps_s, BestOverGrid())[0]
    return {
        "eps_s": float(eps_s),
        "mi_nats": res.nats,
        "mi_bits": res.nats / LOG2,
        "eb": eb,
        "expansion_nats": expansion_eval(coeffs, eps_s),
        "cap_upper_nats": upper,
        "flash_lower_nats": flash,
        "error_budget": res.error_budget,
        "eb_min": eb_min,
    }


COLUMNS = {
    "mi": ["mi_nats", "mi_bits", "error_budget"],
    "ebit": ["eb"],
    "coeffs": ["expansion_nats"],
    "bounds": ["cap_upper_nats", "flash_lower_nats"],
    "unitcost": ["eb_min"],
}


def cmd_mi(args, out):
    o = resolve(
        args,
        {
            "constellation": "pem:1",
            "noise": "none",
            "eps_start": 1e-4,
            "eps_stop": 10.0,
            "eps_points": 50,
            "eps_scale": "log",
            "tol": default_tol(),
            "format": "csv",
            "jobs": 1,
            "outputs": "mi,ebit,coeffs,bounds",
        },
    )
    constellation = parse_constellation(o["constellation"])
    noise = parse_noise(o["noise"])
    grid = build_grid(o["eps_start"], o["eps_stop"], o["eps_points"], o["eps_scale"])
    tol = check_tol_arg(o["tol"])
    groups = [g.strip() for g in o["outputs"].split(",") if g.strip()]
    bad = [g for g in groups if g not in OUTPUT_GROUPS]
    if bad or not groups:
        raise UsageError(f"--outputs: unknown group(s) {bad}; choose from {OUTPUT_GROUPS}")
    columns = ["eps_s"] + [c for g in OUTPUT_GROUPS if g in groups for c in COLUMNS[g]]
    if o["format"] not in ("csv", "jsonl"):
        raise UsageError(f"--format must be csv or jsonl, got {o['format']!r}")

    try:
        coeffs = coefficients(constellation, noise)
    except PoissonChannelError:
        coeffs = ExpansionCoefficients(math.nan, math.nan)
    eb_min = capacity_per_unit_cost(noise, numeric=False).eb_min

    rows = parallel_map(
        lambda e: sweep_record(constellation, noise, e, tol, coeffs, eb_min), grid, o["jobs"]
    )
    write_rows(rows, columns, o["format"], out)


def cmd_coeffs(args, out):
    o = resolve(
        args,
        {
            "constellation": "pem:1",
            "noise": "none",
            "grid": "1e-3,1e-4,1e-5",
            "tol": 1e-20,
            "format": "csv",
        },
    )
    constellation = parse_constellation(o["constellation"])
    noise = parse_noise(o["noise"])
    try:
        grid = [float(v) for v in o["grid"].split(",")]
    except ValueError:
        raise UsageError(f"--grid: cannot parse {o['grid']!r}") from None
    tol = check_tol_arg(o["tol"])
    closed = coefficients(constellation, noise)
    fit = extract_coeffs_empirical(constellation, noise, grid, tol)
    rows = [
        {"quantity": "c1", "eps_s": None, "closed_form": closed.c1,
         "empirical": fit.c1 if fit.c1_fitted else fit.c1_probe,
         "difference": (fit.c1 if fit.c1_fitted else fit.c1_probe) - closed.c1},
        {"quantity": "c2", "eps_s": None, "closed_form": closed.c2, "empirical": fit.c2,
         "difference": fit.c2 - closed.c2},
    ]
    for e, i in zip(fit.eps, fit.mi):
        model = expansion_eval(closed, e)
        rows.append({"quantity": "mi", "eps_s": e, "closed_form": model, "empirical": i,
                     "difference": i - model})
    write_rows(rows, ["quantity", "eps_s", "closed_form", "empirical", "difference"], o["format"], out)


def _eb_or_none(eps, nats):
    return energy_per_bit(eps, nats) if nats is not None and nats > 0 else None


def capacity_record(eps):
    upper = capacity_upper_bound(eps)
    scale = -eps * math.log(eps) if eps < 1 else None
    f_eps = flash_lower_bound(eps, PEqualsEps())[0] if eps <= 1 else None
    f_log = flash_lower_bound(eps, PEqualsMinusEpsLogEps())[0] if eps < 1 else None
    f_best, p_best = flash_lower_bound(eps, BestOverGrid())
    return {
        "eps_s": eps,
        "upper_nats": upper,
        "flash_p_eps_nats": f_eps,
        "flash_p_epslog_nats": f_log,
        "flash_best_nats": f_best,
        "flash_best_p": p_best,
        "eb_upper": _eb_or_none(eps, upper),
        "eb_flash_p_eps": _eb_or_none(eps, f_eps),
        "eb_flash_p_epslog": _eb_or_none(eps, f_log),
        "eb_flash_best": _eb_or_none(eps, f_best),
        "ratio_upper": upper / scale if scale else None,
        "ratio_flash_best": f_best / scale if scale else None,
    }


def cmd_capacity(args, out):
    o = resolve(
        args,
        {
            "eps_start": 1e-12,
            "eps_stop": 1e-2,
            "eps_points": 40,
            "eps_scale": "log",
            "format": "csv",
            "jobs": 1,
        },
    )
    if args.logdomain:
        level = args.level
        t_grid = build_grid(args.t_start, args.t_stop, o["eps_points"], "log")
        t_star = flash_crossing(level)
        rows = []
        for t in sorted(list(t_grid) + [t_star]):
            ratio, rem = flash_ratio_logdomain(t, with_bound=True)
            rows.append({"t": float(t), "log10_eps_s": -t / math.log(10.0), "flash_ratio": ratio,
                         "remainder_bound": rem, "is_crossing": int(t == t_star)})
        write_rows(rows, ["t", "log10_eps_s", "flash_ratio", "remainder_bound", "is_crossing"],
                   o["format"], out)
        return
    grid = build_grid(o["eps_start"], o["eps_stop"], o["eps_points"], o["eps_scale"])
    if grid[0] <= 0:
        raise UsageError("capacity bounds need eps-start > 0")
    rows = parallel_map(capacity_record, [float(e) for e in grid], o["jobs"])
    for r in rows:
        if r["flash_best_nats"] > r["upper_nats"]:
            raise ArithmeticError(f"lower bound exceeds upper bound at eps_s={r['eps_s']}")
    write_rows(rows, list(rows[0]), o["format"], out)


def cmd_unitcost(args, out):
    o = resolve(args, {"noise": "geometric:1", "format": "csv"})
    noise = parse_noise(o["noise"])
    res = capacity_per_unit_cost(noise)
    rows = [
        {"quantity": "c1_per_unit_energy", "lam": None, "value": res.c1_per_unit_energy},
        {"quantity": "eb_min", "lam": None, "value": res.eb_min},
    ]
    if res.numeric is not None:
        rows.append({"quantity": "numeric_sup", "lam": res.numeric.argmax, "value": res.numeric.value})
        rows.append({"quantity": "rate_limit", "lam": math.inf,
                     "value": geometric_divergence_rate_limit(noise.eps_n)})
        for pt in res.numeric.trace:
            rows.append({"quantity": "d_per_energy", "lam": pt.lam, "value": pt.d_per_energy})
    write_rows(rows, ["quantity", "lam", "value"], o["format"], out)


# Argument parsing ---------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--format", choices=["csv", "jsonl"], default=None)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--eps-start", dest="eps_start", type=float)
    grid.add_argument("--eps-stop", dest="eps_stop", type=float)
    grid.add_argument("--eps-points", dest="eps_points", type=int)
    grid.add_argument("--eps-scale", dest="eps_scale", choices=["log", "linear"])
    grid.add_argument("--jobs", type=int, help="evaluate grid points concurrently")

    channel = argparse.ArgumentParser(add_help=False)
    channel.add_argument("--constellation", help="pem:<m> | flash:<p> | file:<path>")
    channel.add_argument("--noise", help="none | poisson:<eps_n> | geometric:<eps_n>")
    channel.add_argument("--tol", type=float, help="truncation tolerance in (0, 1)")

    parser = argparse.ArgumentParser(prog="pcl", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi", parents=[common, grid, channel], help="mutual information sweep")
    p.add_argument("--outputs", help=f"comma list of {','.join(OUTPUT_GROUPS)}")
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("coeffs", parents=[common, channel], help="low-energy expansion coefficients")
    p.add_argument("--grid", help="comma list of small energies, e.g. 1e-3,1e-4,1e-5")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("capacity", parents=[common, grid], help="capacity bracket sweep (noiseless)")
    p.add_argument("--logdomain", action="store_true",
                   help="tabulate the flash ratio in t = -log eps_s and locate its crossing")
    p.add_argument("--level", type=float, default=0.99)
    p.add_argument("--t-start", dest="t_start", type=float, default=10.0)
    p.add_argument("--t-stop", dest="t_stop", type=float, default=2000.0)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("unitcost", parents=[common], help="capacity per unit energy")
    p.add_argument("--noise", help="none | poisson:<eps_n> | geometric:<eps_n>")
    p.set_defaults(func=cmd_unitcost)
    return parser


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    try:
        args.func(args, buf)
    except UsageError as exc:
        print(f"pcl {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PoissonChannelError, ArithmeticError, FloatingPointError) as exc:
        print(f"pcl {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
