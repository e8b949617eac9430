"""Decision rules for the three trader types.

Scalar rules are numba-compiled so the tick loop in :mod:`stylefacts.market`
can call them directly; they remain ordinary callables from Python.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

MEMORY_LENGTHS = (1, 5, 21)


@njit(cache=True)
def _ema(prev, x, length):
    w = 2.0 / (length + 1.0)
    return w * x + (1.0 - w) * prev


def ema_update(prev: float, x: float, length: int) -> float:
    """One step of an exponential moving average with weight ``2/(length+1)``."""
    if length < 1:
        raise ValueError(f"EMA length must be >= 1, got {length}")
    return _ema(prev, x, length)


@njit(cache=True)
def sgn(x):
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


@njit(cache=True)
def omega(r_n, a, b, d):
    """Fraction of a noise group that trades after remembering return ``r_n``.

    Evaluated as ``(1 + d e^-x) / (1 + e^-x)`` with ``x = a(|r_n| - b)``,
    rewritten as ``(e^x + d) / (e^x + 1)`` when ``x < 0`` so neither branch
    ever exponentiates a positive argument.
    """
    x = a * (abs(r_n) - b)
    if x >= 0.0:
        e = math.exp(-x)
        return (1.0 + d * e) / (1.0 + e)
    e = math.exp(x)
    return (e + d) / (e + 1.0)


@njit(cache=True)
def nearest_int(x):
    # half away from zero
    if x >= 0.0:
        return int(math.floor(x + 0.5))
    return -int(math.floor(-x + 0.5))


@njit(cache=True)
def active_noise_count(n_n, frac):
    k = nearest_int(n_n * frac)
    if k < 0:
        return 0
    if k > n_n:
        return n_n
    return k


@njit(cache=True)
def buy_probability(r_n, u):
    x = u * r_n
    # negative side as 1 - P(-x): no overflow, and P(x) + P(-x) == 1 exactly
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    return 1.0 - 1.0 / (1.0 + math.exp(x))


@njit(cache=True)
def noise_demand_from_uniforms(n_active, p_buy, uniforms):
    """Net demand of ``n_active`` traders, trader ``j`` buying iff ``uniforms[j] < p_buy``."""
    demand = 0
    for j in range(n_active):
        if uniforms[j] < p_buy:
            demand += 1
        else:
            demand -= 1
    return demand


@njit(cache=True)
def technical_demand(macd, signal, n_t):
    return n_t * sgn(macd - signal)


@njit(cache=True)
def fundamental_demand(f, s, n_f):
    return n_f * sgn(f - s)


@njit(cache=True)
def fundamental_value_step(f_prev, mu_f, sigma_f, eps):
    return f_prev * (1.0 + mu_f + sigma_f * eps)


@dataclass
class NoiseGroupState:
    n: int
    size: int
    r_n: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"memory length must be >= 1, got {self.n}")
        if self.size < 0:
            raise ValueError(f"group size must be >= 0, got {self.size}")

    @property
    def weight(self) -> float:
        return 2.0 / (self.n + 1)

    def absorb(self, r: float) -> None:
        self.r_n = ema_update(self.r_n, r, self.n)


def noise_group_demand(state: NoiseGroupState, u: float, a: float, b: float,
                       d: float, rng: np.random.Generator) -> tuple[int, int]:
    """Draw one tick of demand for a noise group; returns ``(demand, active)``."""
    active = active_noise_count(state.size, omega(state.r_n, a, b, d))
    if active == 0:
        return 0, 0
    p = buy_probability(state.r_n, u)
    draws = rng.random(active)
    return int(noise_demand_from_uniforms(active, p, draws)), active


@dataclass
class MacdState:
    """Fast/slow price EMAs, their difference and its signal line."""

    l_a: int
    l_b: int
    l: int
    fast: float
    slow: float
    signal: float = 0.0
    macd: float = field(init=False)

    def __post_init__(self):
        self.macd = self.fast - self.slow

    @classmethod
    def start(cls, s0: float, l_a: int, l_b: int, l: int) -> "MacdState":
        return cls(l_a, l_b, l, fast=s0, slow=s0)

    def absorb(self, price: float) -> None:
        self.fast = ema_update(self.fast, price, self.l_a)
        self.slow = ema_update(self.slow, price, self.l_b)
        self.macd = self.fast - self.slow
        self.signal = ema_update(self.signal, self.macd, self.l)

    def demand(self, n_t: int) -> int:
        return int(technical_demand(self.macd, self.signal, n_t))


@dataclass
class FundamentalState:
    f: float
    mode: str = "varying"

    def step(self, mu_f: float, sigma_f: float, eps: float) -> float:
        if self.mode == "varying":
            self.f = fundamental_value_step(self.f, mu_f, sigma_f, eps)
        return self.f
