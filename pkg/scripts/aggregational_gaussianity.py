"""Excess kurtosis of lag-delta log returns, varying vs constant fundamental value.

    python scripts/aggregational_gaussianity.py --T 10000000 --deltas 1,100,1000,10000,100000
"""
import argparse
import time

from stylefacts import stats
from stylefacts.config import DEFAULT_WARMUP
from stylefacts.market import run_simulation
from stylefacts.params import trader_set


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=int, default=10_000_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--set", default="B")
    ap.add_argument("--deltas", default="1,100,1000,10000")
    args = ap.parse_args()
    deltas = [int(x) for x in args.deltas.split(",")]

    for mode in ("varying", "constant"):
        t0 = time.perf_counter()
        sim = run_simulation(trader_set(args.set, T=args.T + DEFAULT_WARMUP, seed=args.seed,
                                        f_mode=mode))
        table = stats.kurtosis_by_delta(sim.prices[DEFAULT_WARMUP:], deltas)
        cells = "  ".join(f"{d}:{k:.3f}" for d, k in table.items())
        print(f"f {mode:<8} {cells}   ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
