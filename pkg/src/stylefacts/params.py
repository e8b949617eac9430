from __future__ import annotations

import dataclasses
from dataclasses import dataclass

F_MODES = ("varying", "constant")


@dataclass(frozen=True)
class ModelParams:
    """Scalar parameters of one model run.

    Defaults are Trader Set A with the standard parameter table.
    """

    m: float = 0.4
    u: float = 5.0
    a: float = 4000.0
    b: float = 0.02
    d: float = 0.05
    l_A: int = 12
    l_B: int = 26
    l: int = 9
    mu_f: float = 3e-4
    sigma_f: float = 0.025
    N1: int = 4
    N5: int = 4
    N21: int = 8
    N_T: int = 2
    N_F: int = 2
    T: int = 1_000_000
    S0: float = 100.0
    f0: float = 100.0
    f_mode: str = "varying"
    seed: int = 0

    def __post_init__(self):
        for key, msg in self.violations():
            raise ValueError(f"{key}: {msg}")

    def violations(self) -> list[tuple[str, str]]:
        out = []
        if not 0 < self.m < 1:
            out.append(("m", f"must satisfy 0 < m < 1, got {self.m}"))
        if not 0 < self.d <= 1:
            out.append(("d", f"must satisfy 0 < d <= 1, got {self.d}"))
        if not self.a > 0:
            out.append(("a", f"must be > 0, got {self.a}"))
        if not self.b >= 0:
            out.append(("b", f"must be >= 0, got {self.b}"))
        if not self.u >= 0:
            out.append(("u", f"must be >= 0, got {self.u}"))
        if not self.sigma_f >= 0:
            out.append(("sigma_f", f"must be >= 0, got {self.sigma_f}"))
        for key in ("N1", "N5", "N21", "N_T", "N_F"):
            if getattr(self, key) < 0:
                out.append((key, f"must be >= 0, got {getattr(self, key)}"))
        for key in ("l_A", "l_B", "l", "T"):
            if getattr(self, key) < 1:
                out.append((key, f"must be >= 1, got {getattr(self, key)}"))
        if not self.S0 > 0:
            out.append(("S0", f"must be > 0, got {self.S0}"))
        if not self.f0 > 0:
            out.append(("f0", f"must be > 0, got {self.f0}"))
        if self.f_mode not in F_MODES:
            out.append(("f_mode", f"must be one of {F_MODES}, got {self.f_mode!r}"))
        if self.seed < 0:
            out.append(("seed", f"must be >= 0, got {self.seed}"))
        if self.N < 1:
            out.append(("N", "N1+N5+N21+N_T+N_F must be >= 1"))
        return out

    @property
    def N(self) -> int:
        return self.N1 + self.N5 + self.N21 + self.N_T + self.N_F

    @property
    def noise_sizes(self) -> tuple[int, int, int]:
        return (self.N1, self.N5, self.N21)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)


TRADER_SETS = {
    "A": dict(N1=4, N5=4, N21=8, N_T=2, N_F=2),
    "B": dict(N1=0, N5=0, N21=16, N_T=2, N_F=2),
}


def trader_set(name: str, **overrides) -> ModelParams:
    return ModelParams(**{**TRADER_SETS[name], **overrides})
