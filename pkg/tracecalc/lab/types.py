"""Monte Carlo experiment description and estimator output."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Literal

import numpy as np

Group = Literal["u", "gl"]
GROUPS: tuple[str, ...] = ("u", "gl")


@dataclass(frozen=True)
class BrownianConfig:
    """Brownian motion on U(N) (group "u") or GL(N; C) (group "gl") from the identity.

    ``t`` names the target measure: rho_t^N on U(N), mu_t^N on GL(N; C).
    mu_t^N is the heat kernel of a quarter of the GL Laplacian, so the gl
    process runs to time t/2 (the horizon).
    """

    group: Group
    N: int
    t: float
    step: float = 5e-3
    paths: int = 2000
    seed: int = 0
    workers: int = 1
    chunk_size: int = 250
    reorthonormalize_every: int = 100

    def __post_init__(self) -> None:
        if self.group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {self.group!r}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if self.step <= 0:
            raise ValueError(f"step must be > 0, got {self.step}")
        if self.paths < 1:
            raise ValueError(f"paths must be >= 1, got {self.paths}")
        if self.workers < 1 or self.chunk_size < 1 or self.reorthonormalize_every < 1:
            raise ValueError("workers, chunk_size and reorthonormalize_every must be >= 1")

    @property
    def horizon(self) -> float:
        """Process time of the endpoint."""
        return self.t / 2 if self.group == "gl" else self.t

    @property
    def steps(self) -> int:
        return math.ceil(self.horizon / self.step) if self.t > 0 else 0

    @property
    def dt(self) -> float:
        """Actual step horizon/steps (at most ``step``)."""
        return self.horizon / self.steps if self.steps else 0.0

    @property
    def chunks(self) -> int:
        return math.ceil(self.paths / self.chunk_size)

    def chunk_bounds(self, index: int) -> tuple[int, int]:
        start = index * self.chunk_size
        return start, min(start + self.chunk_size, self.paths)

    def with_(self, **changes: Any) -> BrownianConfig:
        return BrownianConfig(**{**asdict(self), **changes})


@dataclass(frozen=True)
class SampleStats:
    """Sample mean and variance of a complex-valued estimator."""

    name: str
    n: int
    mean: complex
    variance: float
    stderr: float

    @classmethod
    def from_samples(cls, name: str, samples: np.ndarray) -> SampleStats:
        x = np.asarray(samples, dtype=complex).ravel()
        n = int(x.size)
        if n == 0:
            raise ValueError("no samples")
        mean = complex(np.mean(x))
        variance = float(np.sum(np.abs(x - mean) ** 2) / (n - 1)) if n > 1 else 0.0
        return cls(name, n, mean, variance, math.sqrt(variance / n))

    def within(self, target: complex, sigmas: float = 3.0) -> bool:
        """|mean - target| <= sigmas * stderr (exact match when the variance is 0)."""
        return abs(self.mean - target) <= sigmas * self.stderr + 1e-12
