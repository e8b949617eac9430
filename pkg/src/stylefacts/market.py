"""Price formation and the tick loop.

Per tick ``t`` every trader decides on information through ``t-1``: the
fundamental value advances first, noise groups read their EMA of returns,
chartists read the MACD state, fundamentalists compare ``f_t`` against
``S_{t-1}``.  The summed excess demand sets ``S_t`` and only then do the
EMAs and MACD absorb the new price.

Random numbers come from a PCG64 generator in fixed blocks of
``RNG_BLOCK`` ticks: ``standard_normal(k)`` for the fundamental shocks, then
``random((k, n_noise))`` for the buy/sell uniforms, one column per noise
trader slot (groups N1, N5, N21 in order).  Active traders of a group use
the first columns of their slot range.  The block layout is part of the
reproducibility contract.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .params import ModelParams
from .traders import (
    MEMORY_LENGTHS,
    FundamentalState,
    MacdState,
    NoiseGroupState,
    active_noise_count,
    buy_probability,
    fundamental_demand,
    noise_demand_from_uniforms,
    omega,
    sgn,
)

log = logging.getLogger(__name__)

RNG_BLOCK = 65_536
F_FLOOR_MULTIPLIER = 1e-6


def price_update(s_prev: float, demand: int, n: int, m: float) -> float:
    if not s_prev > 0:
        raise ValueError(f"previous price must be positive, got {s_prev}")
    if abs(demand) > n:
        raise ValueError(f"|D|={abs(demand)} exceeds N={n}")
    return (1.0 + m * demand / n) * s_prev


def proportional_return(s: float, s_prev: float) -> float:
    if not s_prev > 0:
        raise ValueError(f"previous price must be positive, got {s_prev}")
    return (s - s_prev) / s_prev


@dataclass(frozen=True)
class DemandBreakdown:
    noise: int
    technical: int
    fundamental: int
    active_noise: int

    @property
    def total(self) -> int:
        return self.noise + self.technical + self.fundamental


@dataclass
class MarketState:
    t: int
    S: float
    S_prev: float
    R: float
    f: float
    noise_groups: list[NoiseGroupState]
    macd: MacdState

    @classmethod
    def initial(cls, p: ModelParams) -> "MarketState":
        groups = [NoiseGroupState(n, size) for n, size in zip(MEMORY_LENGTHS, p.noise_sizes)]
        return cls(0, p.S0, p.S0, 0.0, p.f0, groups, MacdState.start(p.S0, p.l_A, p.l_B, p.l))


@dataclass(frozen=True)
class SimulationOutput:
    params: ModelParams
    prices: np.ndarray
    fundamentals: np.ndarray
    demand_noise: np.ndarray
    demand_tech: np.ndarray
    demand_fund: np.ndarray
    active_noise: np.ndarray
    f_clamps: int = 0
    final_state: MarketState | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name in ("prices", "fundamentals", "demand_noise", "demand_tech",
                     "demand_fund", "active_noise"):
            getattr(self, name).setflags(write=False)

    @property
    def T(self) -> int:
        return len(self.prices) - 1

    @property
    def demand_total(self) -> np.ndarray:
        return self.demand_noise + self.demand_tech + self.demand_fund

    def demand(self, t: int) -> DemandBreakdown:
        """Demand breakdown of tick ``t`` (1-based, matching ``prices[t]``)."""
        if not 1 <= t <= self.T:
            raise IndexError(t)
        i = t - 1
        return DemandBreakdown(int(self.demand_noise[i]), int(self.demand_tech[i]),
                               int(self.demand_fund[i]), int(self.active_noise[i]))


def rng_blocks(seed: int, T: int, n_noise: int):
    """Yield ``(start, eps, uniforms)`` blocks covering ticks ``1..T``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    start = 0
    while start < T:
        k = min(RNG_BLOCK, T - start)
        eps = rng.standard_normal(k)
        unif = rng.random((k, n_noise))
        yield start, eps, unif
        start += k


@njit(cache=True)
def _run_block(state, r_n, lengths, sizes, eps, unif,
               m, u, a, b, d, l_a, l_b, l, mu_f, sigma_f, n_t, n_f, n_total, varying,
               prices, funds, dem_noise, dem_tech, dem_fund, active):
    # state = [S, f, fast, slow, signal]; arrays are written in place
    S = state[0]
    f = state[1]
    fast = state[2]
    slow = state[3]
    signal = state[4]
    w_a = 2.0 / (l_a + 1.0)
    w_b = 2.0 / (l_b + 1.0)
    w_l = 2.0 / (l + 1.0)
    clamps = 0
    n_groups = lengths.shape[0]
    for i in range(eps.shape[0]):
        if varying:
            mult = 1.0 + mu_f + sigma_f * eps[i]
            if mult <= 0.0:
                mult = F_FLOOR_MULTIPLIER
                clamps += 1
            f = f * mult

        noise = 0
        n_active = 0
        col = 0
        for g in range(n_groups):
            k = active_noise_count(sizes[g], omega(r_n[g], a, b, d))
            if k > 0:
                p = buy_probability(r_n[g], u)
                noise += noise_demand_from_uniforms(k, p, unif[i, col:col + k])
            n_active += k
            col += sizes[g]
        tech = n_t * sgn(fast - slow - signal)
        fund = fundamental_demand(f, S, n_f)

        total = noise + tech + fund
        S_new = (1.0 + m * total / n_total) * S
        R = (S_new - S) / S
        S = S_new

        for g in range(n_groups):
            w = 2.0 / (lengths[g] + 1.0)
            r_n[g] = w * R + (1.0 - w) * r_n[g]
        fast = w_a * S + (1.0 - w_a) * fast
        slow = w_b * S + (1.0 - w_b) * slow
        signal = w_l * (fast - slow) + (1.0 - w_l) * signal

        prices[i] = S
        funds[i] = f
        dem_noise[i] = noise
        dem_tech[i] = tech
        dem_fund[i] = fund
        active[i] = n_active
    state[0] = S
    state[1] = f
    state[2] = fast
    state[3] = slow
    state[4] = signal
    return clamps


def run_simulation(params: ModelParams) -> SimulationOutput:
    """Simulate ``params.T`` ticks; equal params (incl. seed) give identical output.

    Raises ``FloatingPointError`` if the price overflows or underflows to
    zero, which runaway chartist bubbles can cause for large ``m``.
    """
    p = params
    bad = p.violations()
    if bad:
        raise ValueError("; ".join(f"{k}: {msg}" for k, msg in bad))
    T = p.T
    prices = np.empty(T + 1)
    funds = np.empty(T + 1)
    dem_noise = np.empty(T, dtype=np.int64)
    dem_tech = np.empty(T, dtype=np.int64)
    dem_fund = np.empty(T, dtype=np.int64)
    active = np.empty(T, dtype=np.int64)
    prices[0] = p.S0
    funds[0] = p.f0

    state = np.array([p.S0, p.f0, p.S0, p.S0, 0.0])
    r_n = np.zeros(len(MEMORY_LENGTHS))
    lengths = np.array(MEMORY_LENGTHS, dtype=np.int64)
    sizes = np.array(p.noise_sizes, dtype=np.int64)
    varying = p.f_mode == "varying"

    clamps = 0
    for start, eps, unif in rng_blocks(p.seed, T, int(sizes.sum())):
        sl = slice(start, start + len(eps))
        sl1 = slice(start + 1, start + 1 + len(eps))
        clamps += _run_block(
            state, r_n, lengths, sizes, eps, unif,
            p.m, p.u, p.a, p.b, p.d, p.l_A, p.l_B, p.l, p.mu_f, p.sigma_f,
            p.N_T, p.N_F, p.N, varying,
            prices[sl1], funds[sl1], dem_noise[sl], dem_tech[sl], dem_fund[sl], active[sl])
        block = prices[sl1]
        bad = np.flatnonzero(~(np.isfinite(block) & (block > 0)))
        if bad.size:
            raise FloatingPointError(
                f"price left the floating-point range at tick {start + 1 + int(bad[0])}")
    if clamps:
        log.warning("fundamental multiplier clamped to %g on %d ticks", F_FLOOR_MULTIPLIER, clamps)

    final = MarketState.initial(p)
    final.t = T
    final.S, final.S_prev = prices[T], prices[T - 1]
    final.R = (final.S - final.S_prev) / final.S_prev
    final.f = funds[T]
    for g, r in zip(final.noise_groups, r_n):
        g.r_n = float(r)
    final.macd.fast, final.macd.slow, final.macd.signal = state[2], state[3], state[4]
    final.macd.macd = state[2] - state[3]
    return SimulationOutput(p, prices, funds, dem_noise, dem_tech, dem_fund, active,
                            clamps, final)


def step(state: MarketState, p: ModelParams, eps: float, uniforms: np.ndarray) -> DemandBreakdown:
    """Advance ``state`` by one tick in plain Python.

    Mirrors the compiled loop one operation at a time; ``uniforms`` is the
    tick's row of buy/sell draws (one per noise trader slot).
    """
    fund_state = FundamentalState(state.f, p.f_mode)
    f = fund_state.step(p.mu_f, p.sigma_f, eps)
    if f <= 0:
        f = state.f * F_FLOOR_MULTIPLIER
    noise = active_total = 0
    col = 0
    for g in state.noise_groups:
        k = active_noise_count(g.size, omega(g.r_n, p.a, p.b, p.d))
        if k:
            noise += noise_demand_from_uniforms(k, buy_probability(g.r_n, p.u),
                                                uniforms[col:col + k])
        active_total += k
        col += g.size
    tech = state.macd.demand(p.N_T)
    fund = int(fundamental_demand(f, state.S, p.N_F))
    br = DemandBreakdown(int(noise), tech, fund, active_total)

    s_new = price_update(state.S, br.total, p.N, p.m)
    state.R = proportional_return(s_new, state.S)
    state.S_prev, state.S = state.S, s_new
    state.f = f
    state.t += 1
    for g in state.noise_groups:
        g.absorb(state.R)
    state.macd.absorb(s_new)
    return br


def run_reference(params: ModelParams) -> SimulationOutput:
    """Slow pure-Python twin of :func:`run_simulation` for cross-checking."""
    p = params
    state = MarketState.initial(p)
    prices, funds = [p.S0], [p.f0]
    rows = []
    for _, eps, unif in rng_blocks(p.seed, p.T, sum(p.noise_sizes)):
        for e, row in zip(eps, unif):
            br = step(state, p, float(e), row)
            prices.append(state.S)
            funds.append(state.f)
            rows.append((br.noise, br.technical, br.fundamental, br.active_noise))
    arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
    return SimulationOutput(p, np.array(prices), np.array(funds),
                            arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(),
                            arr[:, 3].copy(), 0, state)
