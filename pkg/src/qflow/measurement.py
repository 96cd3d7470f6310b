"""Measurement models: amplified continuous quadrature and qubit-meter spin.

The continuous model works in operator quadratures (q = alpha + alpha*), the
spin model in amplitude parts (sigma_m inferred from x = Re alpha); each
reproduces its printed distribution exactly in its own convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfc

from .fock_oracle import SpinState
from .phase_space import GaussianMixture1D, QuadratureConvention


@dataclass(frozen=True)
class ContinuousMeasurementResult:
    tau: float
    gain: float  # e^tau
    q_distribution: GaussianMixture1D
    q_m_distribution: GaussianMixture1D
    convention: QuadratureConvention = QuadratureConvention.OPERATOR_QUADRATURES


@dataclass(frozen=True)
class SpinMeasurementResult:
    gain: float
    sigma_m_distribution: GaussianMixture1D
    convention: QuadratureConvention = QuadratureConvention.AMPLITUDE_PARTS


def continuous_measurement(q0: float, initial_operator_variance: float,
                           tau: float) -> ContinuousMeasurementResult:
    """Amplified q-quadrature statistics after dimensionless time tau.

    Var(q) = 1 + G^2 * Var(q_hat(0)); the inferred value q_m = q/G has that
    variance divided by G^2, collapsing to 1/G^2 for an eigenstate input.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if initial_operator_variance < 0:
        raise ValueError("initial operator variance must be nonnegative")
    gain = math.exp(tau)
    var_q = 1.0 + gain ** 2 * initial_operator_variance
    q_dist = GaussianMixture1D(((1.0, gain * q0, var_q),))
    q_m_dist = GaussianMixture1D(((1.0, q0, var_q / gain ** 2),))
    return ContinuousMeasurementResult(tau=tau, gain=gain,
                                       q_distribution=q_dist,
                                       q_m_distribution=q_m_dist)


def qubit_measurement(spin: SpinState, gain: float) -> SpinMeasurementResult:
    """Distribution of sigma_m = x/G for a qubit measured through the meter.

    Branch weights are the spin populations; each branch is Gaussian with
    mean +-1 and variance 1/(2 G^2) (coherent-state x-noise scaled by 1/G).
    """
    if gain <= 0:
        raise ValueError("gain must be positive")
    w_up = abs(spin.c_up) ** 2
    w_down = abs(spin.c_down) ** 2
    var = 1.0 / (2.0 * gain ** 2)
    components = []
    if w_up > 0:
        components.append((w_up, +1.0, var))
    if w_down > 0:
        components.append((w_down, -1.0, var))
    return SpinMeasurementResult(
        gain=gain, sigma_m_distribution=GaussianMixture1D(tuple(components)))


def sample_sigma_m(result: SpinMeasurementResult, n: int,
                   seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    return result.sigma_m_distribution.sample(rng, n)


def bin_spin(sigma_m: float) -> int:
    """Sign binning; the measure-zero tie at exactly 0 resolves to +1."""
    if not math.isfinite(sigma_m):
        raise ValueError("sigma_m must be finite")
    return -1 if sigma_m < 0 else 1


def bin_spin_array(sigma_m: np.ndarray) -> np.ndarray:
    return np.where(np.asarray(sigma_m) < 0, -1, 1)


def binning_efficiency(gain: float) -> float:
    """eta(G) = (erf(G) + 1 - erfc(G)) / 2, identically erf(G)."""
    if gain < 0:
        raise ValueError("gain must be nonnegative")
    return 0.5 * (erf(gain) + 1.0 - erfc(gain))
