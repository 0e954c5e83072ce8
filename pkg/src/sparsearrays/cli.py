"""Command-line front end.

Exit status: 0 on success, 2 for usage or parameter errors, 3 when a
request is refused because it exceeds a resource limit (e.g. the MRA
search size).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .asymptotics import RATIO_COLUMNS, SCALING_ROWS, asymptotic_table
from .coarray import SensorArray, metrics
from .constructions import CONSTRUCTIONS, KloveParams, NestedParams, build, cna
from .mra import DEFAULT_LIMIT, SearchTooLarge
from .optimize import SearchOutcome, cna_opt, ka_r_grid, kma_opt, mra_search, na_opt

SCHEMA_VERSION = "1"
THREADS_ENV = "SPARSEARRAYS_THREADS"
EXIT_USAGE = 2
EXIT_LIMIT = 3

log = logging.getLogger("sparsearrays")


class UsageError(ValueError):
    pass


# --- records -----------------------------------------------------------------

def _params_dict(p) -> Optional[dict]:
    if isinstance(p, (NestedParams, KloveParams)):
        return dict(vars(p))
    return None


def make_record(command: list[str], array: SensorArray, params=None, trace=None,
                reference_aperture: Optional[int] = None) -> dict:
    rec = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "positions": list(array.positions),
        "metrics": metrics(array, reference_aperture).as_dict(),
    }
    if params is not None:
        rec["params"] = params
    if trace is not None:
        rec["trace"] = trace
    return rec


def record_from_json(text: str) -> tuple[SensorArray, dict]:
    """Parse a JSON record back into its array and metrics block."""
    rec = json.loads(text)
    if rec.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {rec.get('schema_version')!r}")
    return SensorArray(tuple(rec["positions"])), rec["metrics"]


CSV_FIELDS = ("positions", "n_sensors", "aperture", "contiguous_dof", "offset", "first_hole",
              "redundancy", "total_dof", "unit_spacings", "varsigma", "symmetric")


def _csv_row(rec: dict) -> dict:
    m = rec["metrics"]
    row = {k: m[k] for k in CSV_FIELDS if k in m}
    row["positions"] = " ".join(map(str, rec["positions"]))
    row["unit_spacings"] = m["weights"][0] if m["weights"] else 0
    return row


def render(rec: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rec, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        w.writeheader()
        w.writerow(_csv_row(rec))
        return buf.getvalue().rstrip("\n")
    m = rec["metrics"]
    lines = [f"positions: {{{','.join(map(str, rec['positions']))}}}"]
    if "params" in rec:
        lines.append("params: " + ", ".join(f"{k}={v}" for k, v in rec["params"].items()))
    lines += [
        f"N = {m['n_sensors']}, L = {m['aperture']}, H = {m['contiguous_dof']} (offset {m['offset']})",
        f"R = {m['redundancy']}, total DoFs = {m['total_dof']}, first hole = {m['first_hole']}",
        f"S(1..3) = {tuple(m['weights'][:3])}, varsigma = {m['varsigma']}, symmetric = {m['symmetric']}",
    ]
    return "\n".join(lines)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")


# --- commands ------------------------------------------------------------------

def cmd_generate(args) -> int:
    params = {
        "ula": {"n": args.n},
        "nested": {"n1": args.n1, "n2": args.n2},
        "cna": {"n1": args.n1, "n2": args.n2},
        "kma": {"n1": args.n1, "n2": args.n2, "n3": args.n3},
        "ka": {"n1": args.n1, "n2": args.n2, "n3": args.n3},
        "symmetric": {"generator": args.generator, "shift": args.shift},
        "rra": {"prefix": args.prefix, "suffix": args.suffix, "mid_spacing": args.mid_spacing, "n": args.n},
    }[args.kind]
    given = {k for k in ("n", "n1", "n2", "n3", "generator", "shift", "prefix", "suffix", "mid_spacing")
             if getattr(args, k) is not None}
    extra = given - set(params)
    if extra:
        raise UsageError(f"{args.kind} does not take --{', --'.join(sorted(extra)).replace('_', '-')}")
    arr = build(args.kind, **params)
    rec = make_record(sys.argv[1:] if args.argv is None else args.argv, arr,
                      params={k: v for k, v in params.items() if v is not None})
    _emit(render(rec, args.format), args.out)
    return 0


def _optimize(family: str, n: int, limit: int) -> tuple[SearchOutcome, Optional[dict]]:
    if family == "cna":
        p, t = cna_opt(n)
        arr = cna(p)
        return SearchOutcome(p, arr, arr.aperture(), 2 * arr.aperture() + 1, metrics(arr).varsigma), \
            {"alpha": t.alpha, "beta": str(t.beta), "k": t.k_residue, "m": t.m}
    if family == "ka":
        out = ka_r_grid(n, trace=True)
        return out, {"grid_points": [list(x) for x in out.objective_trace]}
    if family == "na":
        return na_opt(n), None
    if family == "kma":
        return kma_opt(n), None
    if family in ("mra", "mra-restricted"):
        out = mra_search(n, restricted=family == "mra-restricted", limit=limit)
        return out, {"ties": [list(a.positions) for a in out.objective_trace]}
    raise UsageError(f"unknown family {family!r}")


def cmd_optimize(args) -> int:
    out, trace = _optimize(args.family, args.n, args.limit)
    rec = make_record(sys.argv[1:] if args.argv is None else args.argv, out.array,
                      params=_params_dict(out.params), trace=trace if args.trace else None)
    _emit(render(rec, args.format), args.out)
    return 0


# --- tables --------------------------------------------------------------------

def _csv(rows: list[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _fmt_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


SYMBOLS = (
    ("total_dof", "number of distinct sum co-array elements", "N..2L+1"),
    ("contiguous_dof", "length H of the longest run in the sum co-array", "1..total_dof"),
    ("redundancy", "N(N+1)/2 divided by H", "[1, inf)"),
    ("weights", "S(d): sensor pairs at displacement d", "0..min(N-1, L-d+1)"),
    ("R_inf", "asymptotic redundancy", "[1, inf)"),
    ("F_inf", "asymptotic co-array filling ratio H/(2L+1)", "[0, 1]"),
)

N8_MRAS = ((0, 1, 2, 5, 8, 11, 12, 13), (0, 1, 3, 4, 9, 10, 12, 13), (0, 1, 3, 5, 7, 8, 17, 18))


def eight_sensor_mras() -> list[dict]:
    arrays = [SensorArray(p) for p in N8_MRAS]
    ref = max(a.aperture() for a in arrays)
    rows = []
    for a in arrays:
        m = metrics(a, ref)
        rows.append({
            "positions": " ".join(map(str, a.positions)), "restricted": m.sum_contiguous,
            "H": m.contiguous_dof, "S1": m.weight(1), "S2": m.weight(2), "S3": m.weight(3),
            "varsigma": str(m.varsigma),
        })
    return rows


def family_row(family: str, n: int, mra_limit: int) -> Optional[dict]:
    """Optimal member of a family with ``n`` sensors, or ``None`` if the
    family is not defined there."""
    try:
        if family == "CNA":
            out = _optimize("cna", n, mra_limit)[0]
        elif family == "KA_R":
            out = ka_r_grid(n)
        elif family == "NA":
            out = na_opt(n)
        elif family == "KMA":
            out = kma_opt(n)
        elif family == "R-MRA":
            if n > mra_limit:
                return None
            out = mra_search(n, restricted=True, limit=mra_limit)
        else:
            raise UsageError(f"unknown family {family}")
    except (ValueError, SearchTooLarge):
        return None
    m = metrics(out.array)
    return {
        "family": family, "N": n, "L": m.aperture, "H": m.contiguous_dof,
        "R": f"{float(m.redundancy):.6f}", "R_exact": _fmt_fraction(m.redundancy),
        "S1": m.weight(1), "positions": " ".join(map(str, out.array.positions)),
    }


FIG_FAMILIES = ("NA", "KMA", "R-MRA", "CNA", "KA_R")
FIG_COLUMNS = {"fig5": ("family", "N", "L"), "fig6": ("family", "N", "H", "R", "R_exact"),
               "fig7": ("family", "N", "S1")}


def cmd_tables(args) -> int:
    which = args.which
    if which == "I":
        text = _csv([dict(zip(("symbol", "meaning", "range"), s)) for s in SYMBOLS], ("symbol", "meaning", "range"))
    elif which == "II":
        text = _csv(eight_sensor_mras(), ("positions", "restricted", "H", "S1", "S2", "S3", "varsigma"))
    elif which == "III":
        fields = ("array", "symmetric", "contiguous_sum", "H", "total_dof", "L", "N", "S1")
        rows = [{"array": r.name, "symmetric": r.symmetric, "contiguous_sum": r.contiguous_sum,
                 "H": r.h_text, "total_dof": r.total_text, "L": r.aperture_text, "N": r.sensors_text,
                 "S1": r.unit_spacings_text} for r in SCALING_ROWS]
        text = _csv(rows, fields)
    elif which == "IV":
        rows = []
        for r in asymptotic_table():
            row = {"array": r["array"], "R_inf": r["R_inf"], "F_inf": r["F_inf"]}
            row.update({c: r[c].format(2) for c in RATIO_COLUMNS})
            rows.append(row)
        text = _csv(rows, ("array", "R_inf", "F_inf") + RATIO_COLUMNS)
    else:
        if args.n_min < 2 or args.n_max < args.n_min:
            raise UsageError("need 2 <= --n-min <= --n-max")
        rows = []
        for fam in FIG_FAMILIES:
            for n in range(args.n_min, args.n_max + 1):
                row = family_row(fam, n, args.mra_limit)
                if row is not None:
                    rows.append(row)
        text = _csv(rows, FIG_COLUMNS[which])
    _emit(text, args.out)
    return 0


# --- OMP experiment ---------------------------------------------------------------

def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if val < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return val


def cmd_omp(args) -> int:
    from .sensing import config_from_dict, run_experiment, snr_label

    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    data = dict(data, seed=args.seed)
    if args.trials is not None:
        data["trials"] = args.trials
    threads = args.threads if args.threads is not None else default_threads()
    cfg = config_from_dict(data, threads=threads)
    res = run_experiment(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    res.write_csv(out_dir / "rmse.csv")
    res.write_spectra(out_dir / "spectra.json")
    summary = [{"array": a, "snr_db": snr_label(s), "mean_rmse_deg": f"{v:.4f}", "trials": cfg.trials}
               for (a, s), v in res.mean_rmse().items()]
    print(_csv(summary, ("array", "snr_db", "mean_rmse_deg", "trials")))
    return 0


# --- parser ----------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsearrays",
                                description="Sparse linear arrays with contiguous sum co-arrays.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv", "text"), default="text")
    fmt.add_argument("--out", help="write to this file instead of stdout")

    g = sub.add_parser("generate", parents=[fmt], help="construct an array and print its metrics")
    g.add_argument("kind", choices=CONSTRUCTIONS)
    g.add_argument("--n", type=int, help="sensor count (ula, rra)")
    g.add_argument("--n1", type=int)
    g.add_argument("--n2", type=int)
    g.add_argument("--n3", type=int)
    g.add_argument("--generator", type=_int_list, help="generator positions, e.g. '0 1 3'")
    g.add_argument("--lambda", dest="shift", type=int, help="shift of the mirrored generator")
    g.add_argument("--prefix", type=_int_list, help="rra prefix positions")
    g.add_argument("--suffix", type=_int_list, help="rra suffix positions")
    g.add_argument("--mid-spacing", type=int, help="rra mid-section spacing")
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("optimize", parents=[fmt], help="minimum-redundancy parameters for N sensors")
    o.add_argument("family", choices=("cna", "ka", "na", "kma", "mra", "mra-restricted"))
    o.add_argument("--n", type=_positive, required=True)
    o.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="largest N for exhaustive MRA search")
    o.add_argument("--trace", action="store_true", help="include the search trace in JSON output")
    o.set_defaults(func=cmd_optimize)

    t = sub.add_parser("tables", help="table and figure data as CSV")
    t.add_argument("--which", choices=("I", "II", "III", "IV", "fig5", "fig6", "fig7"), required=True)
    t.add_argument("--n-min", type=int, default=2)
    t.add_argument("--n-max", type=int, default=40)
    t.add_argument("--mra-limit", type=int, default=8, help="include R-MRAs up to this N")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tables)

    e = sub.add_parser("omp", help="Monte Carlo OMP experiment from a JSON config")
    e.add_argument("--config", required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--trials", type=int, help="override the trial count")
    e.add_argument("--threads", type=_positive, help=f"worker threads (default ${THREADS_ENV} or 1)")
    e.add_argument("--out-dir", default=".", help="directory for rmse.csv and spectra.json")
    e.set_defaults(func=cmd_omp)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(argv) if argv is not None else None
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SearchTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
