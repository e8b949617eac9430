"""Command line entry point: ``stylefacts run | presets | analyze``."""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ANALYSES, PRESET_NOTES, PRESETS, ConfigError, parse_config
from .experiment import analyze_returns, run_experiment, summary_text
from .io import read_csv_column, write_json

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3


def _seed_list(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None
    if not seeds or min(seeds) < 0:
        raise argparse.ArgumentTypeError("seeds must be non-negative integers")
    return seeds


def _run_one(cfg, out_dir):
    art = run_experiment(cfg, out_dir)
    return cfg.params.seed, str(out_dir), summary_text(art.report, art.errors), art.ok


def cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = parse_config(text)
        if args.T is not None:
            cfg = dataclasses.replace(cfg, params=cfg.params.replace(T=args.T))
    except (ConfigError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out) if args.out else Path(cfg.resolved_output_dir())
    if args.seeds:
        jobs = [(cfg.with_seed(s), out / f"seed_{s}") for s in args.seeds]
    else:
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
        jobs = [(cfg, out)]

    try:
        if len(jobs) > 1 and args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_one, *zip(*jobs)))
        else:
            results = [_run_one(c, o) for c, o in jobs]
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO

    ok = True
    for seed, out_dir, summary, good in results:
        print(f"== seed {seed} -> {out_dir}")
        print(summary)
        ok &= good
    return EXIT_OK if ok else EXIT_RUNTIME


def cmd_presets(args) -> int:
    for name in PRESETS:
        print(f"{name:<20} {PRESET_NOTES[name]}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        z = read_csv_column(args.returns_csv, args.column)
    except (OSError, ValueError, StopIteration) as e:
        print(f"error: cannot read returns: {e}", file=sys.stderr)
        return EXIT_IO
    analyses = set(a.strip() for a in args.analyses.split(",") if a.strip())
    unknown = sorted(analyses - set(ANALYSES))
    if unknown:
        print(f"config error: unknown analyses {unknown}", file=sys.stderr)
        return EXIT_CONFIG
    errors: dict[str, str] = {}
    rep = analyze_returns(z, analyses, args.acf_max_lag, seed=args.seed, errors=errors)
    print(summary_text(rep, errors))
    if args.report:
        data = rep.as_dict()
        data["errors"] = errors
        try:
            write_json(data, args.report)
        except OSError as e:
            print(f"I/O error: {e}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if not errors else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stylefacts",
                                 description="Three-trader market simulator and stylised-facts checks")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a configured experiment and write artifacts")
    run.add_argument("config")
    run.add_argument("--seed", type=int)
    run.add_argument("--seeds", type=_seed_list, help="comma list; one subdirectory per seed")
    run.add_argument("--jobs", type=int, default=1, help="parallel processes for --seeds")
    run.add_argument("--out")
    run.add_argument("--T", type=int, help="override run length")
    run.set_defaults(func=cmd_run)

    pr = sub.add_parser("presets", help="list parameter presets")
    pr.set_defaults(func=cmd_presets)

    an = sub.add_parser("analyze", help="stylised-facts statistics of a returns CSV")
    an.add_argument("returns_csv")
    an.add_argument("--column", help="column holding returns (default: last)")
    an.add_argument("--analyses", default="kurtosis,sf_test,acf,powerlaw")
    an.add_argument("--acf-max-lag", type=int, default=100)
    an.add_argument("--seed", type=int, default=0, help="seed for the SF subsample phase")
    an.add_argument("--report", help="write report JSON here")
    an.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
