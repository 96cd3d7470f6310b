"""Core phase-space types: amplitudes, quadrature conventions, grids, mixtures.

Two quadrature conventions coexist in this package.  The continuous
measurement model works with operator quadratures q = alpha + alpha*,
p = (alpha - alpha*)/i, while the spin measurement model works with the
real/imaginary parts x = Re(alpha), p = Im(alpha).  Values convert by a
factor of 2, variances by a factor of 4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class QuadratureConvention(enum.Enum):
    # x = Re(alpha); vacuum Q-variance of x is 1/2
    AMPLITUDE_PARTS = "amplitude_parts"
    # q = alpha + alpha*; eigenstate noise floor Var_Q(q) = 1
    OPERATOR_QUADRATURES = "operator_quadratures"


def convert_quadrature(value: float, src: QuadratureConvention,
                       dst: QuadratureConvention) -> float:
    """Convert a quadrature value between conventions (q = 2x)."""
    if src == dst:
        return value
    if (src == QuadratureConvention.AMPLITUDE_PARTS
            and dst == QuadratureConvention.OPERATOR_QUADRATURES):
        return 2.0 * value
    return value / 2.0


def convert_variance(value: float, src: QuadratureConvention,
                     dst: QuadratureConvention) -> float:
    """Convert a quadrature variance between conventions (factor 4)."""
    if src == dst:
        return value
    if (src == QuadratureConvention.AMPLITUDE_PARTS
            and dst == QuadratureConvention.OPERATOR_QUADRATURES):
        return 4.0 * value
    return value / 4.0


@dataclass(frozen=True)
class ComplexAmplitude:
    """Phase-space point alpha = x + i*p (real/imaginary parts)."""

    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError(f"non-finite amplitude ({self.x}, {self.p})")

    @property
    def value(self) -> complex:
        return complex(self.x, self.p)

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexAmplitude":
        z = complex(z)
        return cls(z.real, z.imag)

    def abs2(self) -> float:
        return self.x * self.x + self.p * self.p


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [tau_0, tau_f] with n_steps intervals.

    All times are dimensionless tau = g*t; the coupling never appears
    as a separate parameter.
    """

    tau_0: float
    tau_f: float
    n_steps: int

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be positive")
        if not self.tau_f > self.tau_0:
            raise ValueError("tau_f must exceed tau_0")

    @property
    def dtau(self) -> float:
        return (self.tau_f - self.tau_0) / self.n_steps

    def times(self) -> np.ndarray:
        return self.tau_0 + self.dtau * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class GaussianMixture1D:
    """Weighted mixture of 1-D Gaussians; weights must sum to 1."""

    components: tuple[tuple[float, float, float], ...]  # (weight, mean, var)

    def __post_init__(self):
        total = sum(w for w, _, _ in self.components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1")
        for w, _, var in self.components:
            if w < 0:
                raise ValueError("negative weight")
            if var <= 0:
                raise ValueError("variance must be positive")

    def pdf(self, value):
        value = np.asarray(value, dtype=float)
        out = np.zeros_like(value, dtype=float)
        for w, mu, var in self.components:
            out = out + w * np.exp(-0.5 * (value - mu) ** 2 / var) \
                / math.sqrt(2.0 * math.pi * var)
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return sum(w * mu for w, mu, _ in self.components)

    def variance(self) -> float:
        m = self.mean()
        return sum(w * (var + (mu - m) ** 2) for w, mu, var in self.components)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        weights = np.array([w for w, _, _ in self.components])
        means = np.array([mu for _, mu, _ in self.components])
        stds = np.sqrt([var for _, _, var in self.components])
        idx = rng.choice(len(weights), size=n, p=weights / weights.sum())
        return means[idx] + stds[idx] * rng.standard_normal(n)

    def normalization_defect(self, n_sigma: float = 10.0,
                             n_points: int = 20001) -> float:
        """|trapezoid integral - 1| over the mean +- n_sigma envelope."""
        los = [mu - n_sigma * math.sqrt(v) for _, mu, v in self.components]
        his = [mu + n_sigma * math.sqrt(v) for _, mu, v in self.components]
        grid = np.linspace(min(los), max(his), n_points)
        return abs(float(np.trapezoid(self.pdf(grid), grid)) - 1.0)


def mixture_pdf(m: GaussianMixture1D, value: float) -> float:
    return float(m.pdf(value))
