"""Exact ground truth in a truncated Fock space (optionally tensored with a qubit).

Everything here is dense linear algebra at double precision; the oracle is
used to validate the symbolic compiler, the trajectory statistics, and the
measurement distributions, so it deliberately avoids any of the machinery
it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_DIM = 64

# coherent-state tail norm allowed before the truncation is deemed inadequate
COHERENT_TAIL_TOL = 1e-8
EVOLVE_TAIL_TOL = 1e-6
UNITARITY_TOL = 1e-9


class TruncationError(Exception):
    """Fock cutoff too small for the requested state or evolution."""


def annihilation(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def quadrature_q(dim: int) -> np.ndarray:
    a = annihilation(dim)
    return a + a.conj().T


def quadrature_p(dim: int) -> np.ndarray:
    a = annihilation(dim)
    return (a - a.conj().T) / 1j


@dataclass(frozen=True)
class SpinState:
    """Normalized qubit amplitudes (c_up, c_down)."""

    c_up: complex
    c_down: complex

    def __post_init__(self):
        norm = abs(self.c_up) ** 2 + abs(self.c_down) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"spin state norm {norm} != 1")


SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Fock coefficients of |alpha>, renormalized after truncation."""
    alpha = complex(alpha)
    n = np.arange(dim)
    # log-space to stay finite for large |alpha| and dim
    if alpha == 0:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    logmod = (-abs(alpha) ** 2 / 2.0 + n * math.log(abs(alpha))
              - 0.5 * np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, dim))))))
    phase = np.exp(1j * n * np.angle(alpha))
    vec = np.exp(logmod) * phase
    tail = 1.0 - float(np.sum(np.abs(vec) ** 2))
    if tail > COHERENT_TAIL_TOL:
        raise TruncationError(
            f"coherent state |alpha|^2={abs(alpha)**2:.3g} loses norm "
            f"{tail:.3g} at dim={dim}")
    return vec / np.linalg.norm(vec)


def density_from_state(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def validate_density(rho: np.ndarray) -> None:
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError("density matrix trace != 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-10:
        raise ValueError(f"negative eigenvalue {evals.min()}")


def husimi_q(rho: np.ndarray, alpha: complex) -> float:
    """Q(alpha) = <alpha|rho|alpha>/pi."""
    dim = rho.shape[0]
    vec = coherent_state(alpha, dim)
    val = (vec.conj() @ rho @ vec).real / math.pi
    if val < -1e-12:
        raise ValueError(f"Husimi function negative: {val}")
    return float(val)


def husimi_q_grid(rho: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Q evaluated on the outer grid xs x ps (alpha = x + i p)."""
    dim = rho.shape[0]
    out = np.empty((len(xs), len(ps)))
    vecs = np.empty((len(ps), dim), dtype=complex)
    for i, x in enumerate(xs):
        for j, p in enumerate(ps):
            vecs[j] = coherent_state(complex(x, p), dim)
        out[i] = np.einsum("ij,jk,ik->i", vecs.conj(), rho, vecs).real / math.pi
    return out


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    return float(np.trace(rho @ op).real)


def op_variance(rho: np.ndarray, op: np.ndarray) -> float:
    mean = expectation(rho, op)
    return expectation(rho, op @ op) - mean ** 2


def husimi_quadrature_variance(rho: np.ndarray, which: str = "q") -> float:
    """Variance of q = alpha + alpha* (or p) under the Q distribution.

    Uses the antinormal-ordering moment identity, so it is exact in the
    truncated space: Var_Q(q) = Var_rho(q_hat) + 1.
    """
    op = quadrature_q(rho.shape[0]) if which == "q" else quadrature_p(rho.shape[0])
    return op_variance(rho, op) + 1.0


def _expm_antihermitian(k: np.ndarray) -> np.ndarray:
    """exp(K) for anti-Hermitian K via eigendecomposition of iK."""
    h = 1j * k
    evals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * evals)) @ vecs.conj().T


def parametric_propagator(tau: float, dim: int) -> np.ndarray:
    """U = exp(tau (a_dag^2 - a^2)/2); amplifies q_hat by e^tau."""
    a = annihilation(dim)
    k = 0.5 * (a.conj().T @ a.conj().T - a @ a)
    u = _expm_antihermitian(tau * k)
    defect = np.max(np.abs(u @ u.conj().T - np.eye(dim)))
    if defect > UNITARITY_TOL:
        raise TruncationError(f"propagator unitarity defect {defect:.3g}")
    return u


def evolve_parametric(state: np.ndarray, tau: float) -> np.ndarray:
    """Evolve a state vector under the parametric amplifier for time tau."""
    state = np.asarray(state, dtype=complex)
    dim = state.shape[0]
    out = parametric_propagator(tau, dim) @ state
    # adequacy: population must not pile up at the cutoff
    n_top = max(1, dim // 16)
    tail = float(np.sum(np.abs(out[-n_top:]) ** 2))
    if tail > EVOLVE_TAIL_TOL:
        raise TruncationError(
            f"evolved state holds {tail:.3g} norm in top {n_top} levels")
    return out


def evolve_parametric_density(rho: np.ndarray, tau: float) -> np.ndarray:
    u = parametric_propagator(tau, rho.shape[0])
    return u @ rho @ u.conj().T


def evolve_qubit_meter(spin: SpinState, meter: np.ndarray,
                       tau: float) -> np.ndarray:
    """Joint evolution under the number-spin coupling, exp(+i tau n sigma_z / 2).

    Returns an array of shape (2, dim): row 0 is the |up> branch, row 1 the
    |down> branch.  The drive sign is fixed so that the meter prepared in
    |G/i> ends in |+G> on the up branch after tau = pi.
    """
    meter = np.asarray(meter, dtype=complex)
    n = np.arange(meter.shape[0])
    out = np.empty((2, meter.shape[0]), dtype=complex)
    out[0] = spin.c_up * np.exp(+1j * tau * n / 2.0) * meter
    out[1] = spin.c_down * np.exp(-1j * tau * n / 2.0) * meter
    return out


def reduced_meter_density(joint: np.ndarray) -> np.ndarray:
    """Trace the spin out of a (2, dim) joint pure state."""
    return (np.outer(joint[0], joint[0].conj())
            + np.outer(joint[1], joint[1].conj()))


# ---------------------------------------------------------------------------
# differential identity checks (finite differences, z*/alpha* held fixed)
# ---------------------------------------------------------------------------

def _unnorm_ket(alpha: complex, dim: int) -> np.ndarray:
    """Sum_n alpha^n / sqrt(n!) |n> (no exponential prefactor)."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, dim)))))
    return alpha ** n / np.exp(0.5 * log_fact)


def _projector(alpha: complex, astar: complex, dim: int) -> np.ndarray:
    """|alpha><alpha| analytically continued: alpha* an independent variable."""
    ket = _unnorm_ket(alpha, dim)
    bra = _unnorm_ket(astar, dim)
    return np.exp(-alpha * astar) * np.outer(ket, bra)


def _richardson_derivative(f, x0: complex, h: float) -> np.ndarray:
    def central(step):
        return (f(x0 + step) - f(x0 - step)) / (2.0 * step)
    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def verify_bosonic_identity(identity_id: str, alpha: complex, dim: int,
                            h: float = 1e-4) -> float:
    """Max elementwise error of the coherent-projector identity.

    identity "a":        a |a><a| = alpha |a><a|
    identity "a_dagger": a_dag |a><a| = [d/d_alpha + alpha*] |a><a|
    """
    alpha = complex(alpha)
    astar = alpha.conjugate()
    proj = _projector(alpha, astar, dim)
    if identity_id == "a":
        lhs = annihilation(dim) @ proj
        rhs = alpha * proj
    elif identity_id == "a_dagger":
        lhs = creation(dim) @ proj
        deriv = _richardson_derivative(
            lambda z: _projector(z, astar, dim), alpha, h)
        rhs = deriv + astar * proj
    else:
        raise ValueError(f"unknown identity {identity_id!r}")
    return float(np.max(np.abs(lhs - rhs)))


def _spin_projector(z: complex, zstar: complex) -> np.ndarray:
    """SU(2) coherent projector |z><z| with z* independent; basis (up, down)."""
    ket = np.array([z, 1.0], dtype=complex)
    bra = np.array([zstar, 1.0], dtype=complex)
    return np.outer(ket, bra) / (1.0 + z * zstar)


def verify_spin_identity(z: complex, h: float = 1e-4) -> float:
    """Max error of sigma_z |z><z| = [2z d/dz + (zz*-1)/(1+zz*)] |z><z|."""
    z = complex(z)
    zstar = z.conjugate()
    proj = _spin_projector(z, zstar)
    lhs = SIGMA_Z @ proj
    deriv = _richardson_derivative(lambda w: _spin_projector(w, zstar), z, h)
    rhs = 2.0 * z * deriv + ((z * zstar - 1.0) / (1.0 + z * zstar)) * proj
    return float(np.max(np.abs(lhs - rhs)))
