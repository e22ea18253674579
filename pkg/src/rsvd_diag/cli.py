"""Command line entry point: ``rsvd-diag {generate,run,check,constants}``."""
import argparse
import json
import logging
import sys
from pathlib import Path

from . import bounds as B
from .harness import EXPERIMENTS, ExperimentConfig, read_csv, run, with_overrides
from .mmio import write_matrix_market
from .report import MASTER_SLACK, check_rows


def _config(args):
    config = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    experiments = None
    if getattr(args, "experiments", None) is not None:
        experiments = [e for e in args.experiments.split(",") if e]
    return with_overrides(config, out=args.out, seed=args.seed, experiments=experiments)


def cmd_generate(args):
    config = _config(args)
    out = Path(config.output_dir) / "matrices"
    for spec in config.matrices:
        path = write_matrix_market(out / f"{spec.label}.mtx", spec.generate(), comment=json.dumps(spec.to_dict()))
        print(path)
    return 0


def cmd_run(args):
    config = _config(args)
    if args.dump_matrices:
        config.dump_matrices = True
    out = run(config, jobs=args.jobs)
    manifest = json.loads((out / "manifest.json").read_text())
    ok = sum(r["status"] == "ok" for r in manifest["runs"])
    bad = sum(r.get("violations", 0) for r in manifest["runs"])
    print(f"{out}: {ok}/{len(manifest['runs'])} runs ok, {bad} structural violations")
    return 1 if bad else 0


def cmd_check(args):
    rows = read_csv(args.csv)
    failures = check_rows(rows, slack=args.slack)
    for r in failures:
        print(
            f"VIOLATION {r['matrix']} k={r['k']} q={r['q']} seed={r['seed']} "
            f"{r['quantity']} j={r['j']} {r['norm_spec']}: measured={r['measured']} bound={r['bound']}"
        )
    print(f"{len(rows)} rows checked, {len(failures)} violations")
    return 1 if failures else 0


def cmd_constants(args):
    c = B.gaussian_constants(args.n, args.k, args.rho, args.delta)
    print(f"C_e = {c.expectation!r}")
    print(f"C_d = {c.tail!r}")
    if args.epsilon is not None:
        if args.gamma is None:
            print("--gamma is required with --epsilon", file=sys.stderr)
            return 2
        print(f"q = {B.required_iterations(args.epsilon, c.expectation, args.gamma)}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="rsvd-diag", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    def sweep_flags(sp):
        sp.add_argument("--config", type=Path, help="JSON experiment config")
        sp.add_argument("--out", type=Path, help="output directory (overrides config)")
        sp.add_argument("--seed", type=int, help="single sketch seed (replaces the seed grid)")

    g = sub.add_parser("generate", help="write the configured test matrices as Matrix Market")
    sweep_flags(g)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run the full sweep")
    sweep_flags(r)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--experiments", help=f"comma-separated subset of {','.join(EXPERIMENTS)}")
    r.add_argument("--dump-matrices", action="store_true")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check", help="re-verify structural bounds from a results.csv")
    c.add_argument("csv", type=Path)
    c.add_argument("--slack", type=float, default=MASTER_SLACK)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("constants", help="Gaussian constants and required iteration count")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--k", type=int, required=True)
    k.add_argument("--rho", type=int, required=True)
    k.add_argument("--delta", type=float, default=0.1)
    k.add_argument("--epsilon", type=float)
    k.add_argument("--gamma", type=float, help="singular value ratio gamma_k")
    k.set_defaults(func=cmd_constants)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
