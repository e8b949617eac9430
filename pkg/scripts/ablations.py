"""Which ingredients produce volatility clustering: remove chartists, memory or Omega.

Prints, per configuration, on how many seeds |returns| keep an ACF above the
2/sqrt(T) band for every lag up to 50.
"""
import argparse
import math

import numpy as np

from stylefacts import stats
from stylefacts.config import DEFAULT_WARMUP
from stylefacts.market import run_simulation
from stylefacts.params import ModelParams, trader_set

CONFIGS = {
    "set A": lambda T, s: trader_set("A", T=T, seed=s),
    "set B": lambda T, s: trader_set("B", T=T, seed=s),
    "set A, no chartists": lambda T, s: trader_set("A", T=T, seed=s, N_T=0),
    "set B, no chartists": lambda T, s: trader_set("B", T=T, seed=s, N_T=0),
    "memoryless noise": lambda T, s: ModelParams(N1=16, N5=0, N21=0, T=T, seed=s),
    "noise only (B pool)": lambda T, s: trader_set("B", T=T, seed=s, N_T=0, N_F=0),
    "set B, d=1": lambda T, s: trader_set("B", T=T, seed=s, d=1.0),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=int, default=1_000_000)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    for label, make in CONFIGS.items():
        hits, in_band = 0, []
        for seed in range(1, args.seeds + 1):
            sim = run_simulation(make(args.T + DEFAULT_WARMUP, seed))
            z = stats.log_returns(sim.prices[DEFAULT_WARMUP:], 1).values
            if not np.ptp(z) > 0:
                continue
            band = 2 / math.sqrt(len(z))
            ab = stats.acf(np.abs(z), 100)
            hits += bool(np.all(ab[1:51] > band))
            in_band.append(np.mean(np.abs(ab[1:]) < band))
        band_txt = f"{np.mean(in_band):.2f}" if in_band else "n/a"
        print(f"{label:<22} clustered on {hits}/{args.seeds} seeds; mean in-band fraction {band_txt}")


if __name__ == "__main__":
    main()
