"""CHSH Bell experiment on the singlet with two amplifying meters.

Analytic correlations E(theta, phi) = -eta(G)^2 cos(theta - phi) give
B = 2 sqrt(2) eta^2 at the optimal angles; the Monte Carlo route samples
projective branches, adds meter noise of variance 1/(2 G^2), and bins signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measurement import binning_efficiency

TSIRELSON = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class ChshSettings:
    theta: tuple[float, float]  # site A angles
    phi: tuple[float, float]    # site B angles
    gain: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError("gain must be positive")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        for ang in (*self.theta, *self.phi):
            if not math.isfinite(ang):
                raise ValueError("angles must be finite")


@dataclass(frozen=True)
class ChshResult:
    correlations: np.ndarray  # 2x2, E(theta_i, phi_j)
    b_value: float
    b_analytic: float
    stderr: float


def singlet_branch_probability(a: int, b: int, theta: float,
                               phi: float) -> float:
    """P(a, b) for the singlet measured along theta (A) and phi (B)."""
    if a not in (1, -1) or b not in (1, -1):
        raise ValueError("outcomes must be +-1")
    return 0.25 * (1.0 - a * b * math.cos(theta - phi))


def optimal_angles() -> tuple[tuple[float, float], tuple[float, float]]:
    """Angle choice whose CHSH combination of -cos(theta-phi) equals +2*sqrt(2)."""
    return (0.0, math.pi / 2.0), (-3.0 * math.pi / 4.0, -math.pi / 4.0)


def chsh_combination(e: np.ndarray) -> float:
    """B = E11 - E12 + E22 + E21."""
    return float(e[0, 0] - e[0, 1] + e[1, 1] + e[1, 0])


def chsh_analytic(gain: float,
                  angles: tuple[tuple[float, float], tuple[float, float]]
                  | None = None) -> ChshResult:
    if angles is None:
        angles = optimal_angles()
    theta, phi = angles
    eta2 = binning_efficiency(gain) ** 2
    e = np.array([[-eta2 * math.cos(t - f) for f in phi] for t in theta])
    b = chsh_combination(e)
    return ChshResult(correlations=e, b_value=b, b_analytic=b, stderr=0.0)


def _setting_rng(seed: int, i: int, j: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, 2 * i + j], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def chsh_monte_carlo(settings: ChshSettings) -> ChshResult:
    """Sample the four correlations and assemble B with its standard error."""
    n = settings.n_samples
    sigma = 1.0 / (math.sqrt(2.0) * settings.gain)
    e = np.zeros((2, 2))
    var_sum = 0.0
    for i, theta in enumerate(settings.theta):
        for j, phi in enumerate(settings.phi):
            rng = _setting_rng(settings.seed, i, j)
            a = np.where(rng.random(n) < 0.5, 1.0, -1.0)
            p_b_up = 0.5 * (1.0 - a * math.cos(theta - phi))
            b = np.where(rng.random(n) < p_b_up, 1.0, -1.0)
            sig_a = a + sigma * rng.standard_normal(n)
            sig_b = b + sigma * rng.standard_normal(n)
            prod = np.where(sig_a < 0, -1.0, 1.0) * np.where(sig_b < 0, -1.0, 1.0)
            eij = float(prod.mean())
            e[i, j] = eij
            var_sum += (1.0 - eij ** 2) / n  # binomial variance of the mean
    analytic = chsh_analytic(settings.gain, (settings.theta, settings.phi))
    return ChshResult(correlations=e, b_value=chsh_combination(e),
                      b_analytic=analytic.b_analytic,
                      stderr=math.sqrt(var_sum))


def violation_threshold_gain(tol: float = 1e-6) -> float:
    """Gain where the analytic B crosses 2: erf(G*) = 2**(-1/4), by bisection."""
    target = 2.0 ** -0.25
    lo, hi = 0.0, 4.0
    while hi - lo > tol / 4.0:
        mid = 0.5 * (lo + hi)
        if binning_efficiency(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bell_curve(gains, n_samples: int, seed: int,
               angles=None) -> list[dict]:
    """Sweep G: rows of (G, B_analytic, B_mc, stderr); MC skipped if n=0."""
    rows = []
    if angles is None:
        angles = optimal_angles()
    for k, g in enumerate(gains):
        row = {"G": float(g),
               "B_analytic": chsh_analytic(g, angles).b_analytic}
        if n_samples > 0:
            mc = chsh_monte_carlo(ChshSettings(
                theta=angles[0], phi=angles[1], gain=float(g),
                n_samples=n_samples, seed=seed + k))
            row["B_mc"] = mc.b_value
            row["stderr"] = mc.stderr
        else:
            row["B_mc"] = None
            row["stderr"] = None
        rows.append(row)
    return rows
