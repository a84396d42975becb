"""Command-line interface: ``localkl <command> [options]``.

Exit codes: 0 success, 2 parse or validation error, 3 numerical failure.
"""

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import simulate as sim
from .classify import LabeledSamples, select_c_cv
from .exceptions import (
    InvalidDataError,
    NumericalConsistencyError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
    TooManyFailuresError,
    WindowIndexError,
)
from .grid import Grid
from .inference import (
    bootstrap_centers,
    ci_center,
    confidence_set,
    fit_params,
    identity_resampler,
    resample_with_replacement,
)
from .io import (
    read_grid,
    read_labeled_csv,
    read_sample_csv,
    write_grid,
    write_labeled_csv,
    write_sample_csv,
)
from .selection import kl_profile

SCHEMA_VERSION = "1"
DEFAULT_SEED = 20240101
PROFILE_HEADER = ("center_time", "kl")
CLASSIFY_HEADER = ("c", "split", "err")
CENTERS_HEADER = ("c", "replicate", "center")

RESAMPLERS = {"replacement": resample_with_replacement, "identity": identity_resampler}

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("localkl")


def _float_list(text):
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _jitter(text):
    return "auto" if text == "auto" else float(text)


def _add_input(p, labeled_only=False):
    g = p.add_argument_group("input")
    g.add_argument("--data", help="labelled CSV: label column followed by p values")
    if not labeled_only:
        g.add_argument("--x", help="paired CSV for group X (time header row, then curves)")
        g.add_argument("--y", help="paired CSV for group Y")
    g.add_argument("--grid", help="file of time points for a labelled CSV")
    g.add_argument("--domain-length", type=float, help="override the domain length (default: grid extent)")
    g.add_argument("--x-label", help="label of group X in a labelled CSV (default: smallest label)")


def _add_model(p):
    g = p.add_argument_group("model")
    g.add_argument("--eta", type=float, default=1.0, help="covariance shrinkage in [0, 1] (default 1: none)")
    g.add_argument("--jitter", type=_jitter, nargs="?", const="auto", default=None,
                   help="add delta*I to covariances; bare flag uses 1e-8*trace/p")
    g.add_argument("--all-sizes", action="store_true", help="search every window size, not only the maximal one")
    g.add_argument("--symmetrized", action="store_true", help="use (KL(X||Y)+KL(Y||X))/2")


def _add_out(p, help_text="write the result here instead of stdout"):
    p.add_argument("--out", help=help_text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="localkl",
        description="Find the interval where two groups of curves differ most in local KL divergence.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="interval of maximal local KL divergence")
    _add_input(p)
    _add_model(p)
    p.add_argument("--c", type=float, required=True, help="length fraction in (0, 1]")
    _add_out(p)

    p = sub.add_parser("profile", help="local KL of every maximal window (CSV)")
    _add_input(p)
    _add_model(p)
    p.add_argument("--c", type=float, required=True)
    _add_out(p)

    p = sub.add_parser("bootstrap", help="bootstrap distribution of the interval center")
    _add_input(p)
    _add_model(p)
    cg = p.add_mutually_exclusive_group(required=True)
    cg.add_argument("--c", type=float)
    cg.add_argument("--c-list", type=_float_list)
    p.add_argument("--B", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--resample", choices=sorted(RESAMPLERS), default="replacement",
                   help="'identity' reuses the original sample (a plumbing check)")
    p.add_argument("--centers-out", help="CSV of bootstrap centers (c,replicate,center)")
    _add_out(p)

    p = sub.add_parser("classify", help="discriminant analysis on selected windows, c by cross-validation")
    _add_input(p, labeled_only=True)
    _add_model(p)
    p.add_argument("--c-list", type=_float_list, required=True)
    p.add_argument("--split", type=float, default=0.5, help="training fraction")
    p.add_argument("--B", type=int, default=1000, help="number of random splits")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--priors", type=float, help="fixed prior of group X (default: training proportion)")
    p.add_argument("--errors-out", help="CSV of per-split errors (c,split,err)")
    _add_out(p, "write the JSON summary here instead of stdout")

    p = sub.add_parser("simulate", help="write synthetic scenario data")
    p.add_argument("--scenario", choices=sim.SCENARIOS, required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--m", type=int, default=None, help="size of group Y (default: n)")
    p.add_argument("--p", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("bench", help="Monte Carlo AIJD study and timing benchmark")
    p.add_argument("--scenarios", default="ABC")
    p.add_argument("--n-list", type=_int_list, default=[50, 100, 250, 500, 1000])
    p.add_argument("--p-list", type=_int_list, default=[50, 100, 200, 500])
    p.add_argument("--c-list", type=_float_list, default=[0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0],
                   help="c values for the timing table")
    p.add_argument("--c-grid", type=_float_list, default=list(sim.DEFAULT_C_GRID),
                   help="uniform c grid for the AIJD integral")
    p.add_argument("--M", type=int, default=50)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--eta", type=float, default=sim.DEFAULT_ETA)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--skip-timing", action="store_true")
    p.add_argument("--skip-aijd", action="store_true")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _load_groups(args):
    """Return ``(dx, dy, meta)`` from either input layout."""
    if args.data:
        if getattr(args, "x", None) or getattr(args, "y", None):
            raise ParameterError("use either --data or --x/--y, not both")
        grid = read_grid(args.grid, args.domain_length) if args.grid else None
        data = read_labeled_csv(args.data, grid, args.x_label)
        if grid is None and args.domain_length is not None:
            data = LabeledSamples(Grid(data.grid.points, args.domain_length), data.rows, data.labels,
                                  data.x_label, data.y_label)
        dx, dy = data.groups()
        return dx, dy, {"x_label": data.x_label, "y_label": data.y_label}
    if not (getattr(args, "x", None) and getattr(args, "y", None)):
        raise ParameterError("give --data, or both --x and --y")
    dx = read_sample_csv(args.x, args.domain_length)
    dy = read_sample_csv(args.y, args.domain_length)
    if dx.grid != dy.grid:
        raise ShapeError("the two input files have different time grids")
    return dx, dy, {"x_label": os.path.basename(args.x), "y_label": os.path.basename(args.y)}


def _params_json(args, **extra):
    out = {
        "eta": args.eta,
        "jitter": args.jitter,
        "maximal_only": not args.all_sizes,
        "symmetrized": args.symmetrized,
    }
    out.update(extra)
    return out


def _emit_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_select(args):
    dx, dy, meta = _load_groups(args)
    x, y = fit_params(dx, dy, args.eta, args.jitter)
    prof = kl_profile(x, y, args.c, not args.all_sizes, args.symmetrized)
    w = prof.best_window
    _emit_json(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "select",
            "window": w.to_dict(),
            "kl": float(prof.values[prof.argmax_index]),
            "candidates": len(prof),
            "n": dx.n,
            "m": dy.n,
            "p": dx.grid.p,
            "domain_length": dx.grid.domain_length,
            "parameters": _params_json(args, c=args.c, **meta),
        },
        args.out,
    )


def cmd_profile(args):
    dx, dy, _ = _load_groups(args)
    x, y = fit_params(dx, dy, args.eta, args.jitter)
    prof = kl_profile(x, y, args.c, not args.all_sizes, args.symmetrized)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PROFILE_HEADER)
        for win, v in zip(prof.windows, prof.values):
            w.writerow([repr(win.center), repr(float(v))])
    finally:
        if args.out:
            fh.close()


def cmd_bootstrap(args):
    dx, dy, meta = _load_groups(args)
    cs = [args.c] if args.c is not None else args.c_list
    results, rows = [], []
    for c in cs:
        res = bootstrap_centers(dx, dy, c, args.B, args.seed, args.eta, args.jitter,
                                not args.all_sizes, args.symmetrized, RESAMPLERS[args.resample])
        ci = ci_center(res, args.alpha)
        cs_lo, cs_hi = confidence_set(res, args.alpha)
        results.append(
            {
                "c": c,
                "point_estimate": res.point_estimate.to_dict(),
                "radius": res.radius,
                "ci": [ci[0], ci[1]],
                "confidence_set": [cs_lo, cs_hi],
                "median_center": float(np.median(res.centers)),
                "replicates": res.B,
                "failed": res.n_failed,
            }
        )
        rows.extend((c, i, v) for i, v in enumerate(res.centers))
    if args.centers_out:
        with open(args.centers_out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CENTERS_HEADER)
            for c, i, v in rows:
                w.writerow([c, i, repr(float(v))])
    _emit_json(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "bootstrap",
            "alpha": args.alpha,
            "seed": args.seed,
            "centers_csv": args.centers_out,
            "results": results,
            "parameters": _params_json(args, **meta),
        },
        args.out,
    )


def cmd_classify(args):
    if not args.data:
        raise ParameterError("classify needs a labelled CSV (--data)")
    grid = read_grid(args.grid, args.domain_length) if args.grid else None
    data = read_labeled_csv(args.data, grid, args.x_label)
    res = select_c_cv(data, args.c_list, args.split, args.B, args.seed, args.eta, args.priors,
                      not args.all_sizes, args.symmetrized)
    if args.errors_out:
        with open(args.errors_out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CLASSIFY_HEADER)
            for i, c in enumerate(res.c_candidates):
                for b in range(res.errors.shape[1]):
                    w.writerow([repr(float(c)), b, repr(float(res.errors[i, b]))])
    _emit_json(
        {
            "schema_version": SCHEMA_VERSION,
            "command": "classify",
            "best_c": res.best_c,
            "c": [float(c) for c in res.c_candidates],
            "mean_error": [float(e) for e in res.mean_errors],
            "splits": int(res.errors.shape[1]),
            "errors_csv": args.errors_out,
            "parameters": _params_json(args, split=args.split, seed=args.seed, priors=args.priors,
                                       x_label=data.x_label, y_label=data.y_label),
        },
        args.out,
    )


def cmd_simulate(args):
    m = args.n if args.m is None else args.m
    spec = sim.make_scenario(args.scenario, p=args.p, seed=args.seed)
    dx, dy = sim.sample_scenario(spec, args.n, m)
    os.makedirs(args.out, exist_ok=True)
    write_sample_csv(os.path.join(args.out, "dx.csv"), dx)
    write_sample_csv(os.path.join(args.out, "dy.csv"), dy)
    write_labeled_csv(os.path.join(args.out, "labeled.csv"), LabeledSamples.from_groups(dx, dy))
    write_grid(os.path.join(args.out, "grid.txt"), dx.grid)


def cmd_bench(args):
    os.makedirs(args.out, exist_ok=True)
    scenarios = [s.upper() for s in args.scenarios]
    if not args.skip_aijd:
        rep = sim.monte_carlo_run(scenarios, args.n_list, args.p_list, args.M, args.c_grid, args.seed, args.eta)
        rep.to_csv(os.path.join(args.out, "aijd.csv"))
        with open(os.path.join(args.out, "aijd_summary.json"), "w") as fh:
            json.dump({"schema_version": SCHEMA_VERSION, "summary": rep.summary()}, fh, indent=2)
    if not args.skip_timing:
        rows = []
        for s in scenarios:
            spec = sim.make_scenario(s, seed=args.seed)
            for p in args.p_list:
                for n in args.n_list:
                    rows.extend(sim.timing_benchmark(spec, n, p, args.c_list, args.repeats, args.eta))
        sim.write_timing_csv(rows, os.path.join(args.out, "timing.csv"))


COMMANDS = {
    "select": cmd_select,
    "profile": cmd_profile,
    "bootstrap": cmd_bootstrap,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (InvalidDataError, ParameterError, ShapeError, WindowIndexError, OSError) as err:
        print(f"localkl: error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except SingularMatrixError as err:
        print(f"localkl: numerical error: {err}", file=sys.stderr)
        print("hint: rerun with --eta below 1 (e.g. --eta 0.9) or with --jitter", file=sys.stderr)
        return EXIT_NUMERIC
    except (NumericalConsistencyError, TooManyFailuresError) as err:
        print(f"localkl: numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
