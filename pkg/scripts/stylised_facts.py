"""Leptokurtosis and volatility-clustering table for Trader Sets A and B.

    python scripts/stylised_facts.py --T 1000000 --seeds 1-10
"""
import argparse

import numpy as np

from stylefacts import stats
from stylefacts.config import DEFAULT_WARMUP
from stylefacts.market import run_simulation
from stylefacts.params import trader_set


def seed_range(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=int, default=1_000_000)
    ap.add_argument("--seeds", type=seed_range, default=seed_range("1-10"))
    ap.add_argument("--sets", default="AB")
    ap.add_argument("--d", type=float, default=0.05)
    args = ap.parse_args()

    print(f"{'set':>3} {'seed':>4} {'kurt':>9} {'sf_p':>10} {'exp':>7} {'r2':>6} {'zero%':>6}")
    for name in args.sets:
        for seed in args.seeds:
            sim = run_simulation(trader_set(name, T=args.T + DEFAULT_WARMUP, seed=seed, d=args.d))
            z = stats.log_returns(sim.prices[DEFAULT_WARMUP:], 1).values
            if not np.ptp(z) > 0:
                print(f"{name:>3} {seed:>4}  frozen market, no statistics")
                continue
            k = stats.excess_kurtosis(z)
            _, p = stats.shapiro_francia(stats.subsample(z, seed=seed))
            fit = stats.power_law_fit(stats.acf(np.abs(z), 100), 1, 100)
            print(f"{name:>3} {seed:>4} {k:9.3f} {p:10.2e} {fit.exponent:7.3f} {fit.r2:6.3f} "
                  f"{100 * np.mean(z == 0):6.1f}")


if __name__ == "__main__":
    main()
