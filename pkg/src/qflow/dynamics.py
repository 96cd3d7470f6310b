"""Forward-backward stochastic trajectories of a generalized FPE.

Positive-diffusion coordinates carry past boundary conditions and integrate
forward; negative-diffusion coordinates carry future boundary conditions and
integrate in reversed time tau_minus = tau_f - tau with the time-reversed
drift, then are stored re-reversed on the shared grid.  Noise streams are
counter-based (Philox) keyed per (seed, coordinate), so ensembles are
reproducible bit-exactly regardless of thread count.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .fpe import PhaseSpacePDE
from .phase_space import GaussianMixture1D, TimeGrid

STEP_LIMIT = 0.1  # max allowed dtau * |drift slope|


class SignSplitError(Exception):
    """Boundary ends disagree with the diffusion sign split."""


class StepError(Exception):
    """Time step too coarse for the drift."""


class Scheme(enum.Enum):
    EULER_MARUYAMA = "euler_maruyama"
    EXACT_OU = "exact_ou"


@dataclass(frozen=True)
class BoundaryCondition:
    end: str  # "past" | "future"
    sampler: GaussianMixture1D

    def __post_init__(self):
        if self.end not in ("past", "future"):
            raise ValueError(f"boundary end must be past/future, got {self.end}")


BoundarySpec = dict[str, BoundaryCondition]


@dataclass(frozen=True)
class TrajectoryEnsemble:
    grid: TimeGrid
    coordinates: tuple[str, ...]
    paths: np.ndarray  # (n_traj, n_steps + 1, n_coords)
    seed: int
    scheme: Scheme

    def coordinate_paths(self, name: str) -> np.ndarray:
        return self.paths[:, :, self.coordinates.index(name)]

    def metadata(self) -> dict:
        return {
            "coordinates": list(self.coordinates),
            "grid": {"tau_0": self.grid.tau_0, "tau_f": self.grid.tau_f,
                     "n_steps": self.grid.n_steps},
            "n_traj": int(self.paths.shape[0]),
            "scheme": self.scheme.value,
            "seed": int(self.seed),
        }

    def to_csv(self, path: str, metadata_path: str | None = None) -> None:
        """CSV rows (tau, traj_id, coords...); JSON metadata alongside."""
        times = self.grid.times()
        n_traj = self.paths.shape[0]
        with open(path, "w", newline="") as fh:
            fh.write("tau,traj_id," + ",".join(self.coordinates) + "\r\n")
            for t in range(n_traj):
                for s, tau in enumerate(times):
                    vals = ",".join(format(v, ".17g")
                                    for v in self.paths[t, s])
                    fh.write(f"{tau:.17g},{t},{vals}\r\n")
        if metadata_path:
            with open(metadata_path, "w") as fh:
                json.dump(self.metadata(), fh, indent=2, sort_keys=True)
                fh.write("\n")


def _noise_rng(seed: int, coord_index: int, boundary: bool) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF,
                    2 * coord_index + (1 if boundary else 0)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _linear_drift(pde: PhaseSpacePDE, mu: int) -> tuple[float, float]:
    """Decompose A^mu = c0 + c1 * phi^mu; reject anything else."""
    c0 = 0.0
    c1 = 0.0
    for mono, coef in pde.drift[mu].coeffs:
        order = sum(mono)
        if order == 0:
            c0 = float(coef)
        elif order == 1 and mono[mu] == 1:
            c1 = float(coef)
        else:
            raise ValueError(
                f"drift for {pde.variables[mu]} is not linear-diagonal; "
                "only factorized linear drift is supported")
    return c0, c1


def exact_ou_step(x: float, dtau: float, damping: float,
                  diffusion_abs: float, gaussian: float) -> float:
    """Exact Ornstein-Uhlenbeck update dx = -damping*x*dtau + noise."""
    if damping <= 0:
        raise ValueError("damping must be positive")
    decay = math.exp(-damping * dtau)
    kick = math.sqrt(diffusion_abs / (2.0 * damping) * (1.0 - decay * decay))
    return x * decay + gaussian * kick


def simulate(pde: PhaseSpacePDE, bc: BoundarySpec, grid: TimeGrid,
             n_traj: int, seed: int,
             scheme: Scheme = Scheme.EXACT_OU) -> TrajectoryEnsemble:
    """Integrate a forward-backward trajectory ensemble.

    Noise per coordinate is independent with per-step variance |D^mu| dtau.
    """
    diffusion = [float(d) for d in pde.diffusion]  # validates constant diagonal
    names = pde.variables
    for name in bc:
        if name not in names:
            raise ValueError(f"unknown coordinate {name!r}")
    for name in names:
        if name not in bc:
            raise ValueError(f"missing boundary condition for {name!r}")

    dtau = grid.dtau
    n_steps = grid.n_steps
    paths = np.empty((n_traj, n_steps + 1, len(names)))

    for mu, name in enumerate(names):
        d = diffusion[mu]
        end = bc[name].end
        if d > 0 and end != "past":
            raise SignSplitError(
                f"{name}: positive diffusion must be bound at the past")
        if d < 0 and end != "future":
            raise SignSplitError(
                f"{name}: negative diffusion must be bound at the future")

        c0, c1 = _linear_drift(pde, mu)
        backward = end == "future"
        # backward integration runs in tau_minus with the time-reversed drift
        eff_c0, eff_c1 = (-c0, -c1) if backward else (c0, c1)
        if dtau * abs(eff_c1) > STEP_LIMIT:
            raise StepError(
                f"{name}: dtau*|drift slope| = {dtau * abs(eff_c1):.3g} > "
                f"{STEP_LIMIT}")

        x0 = np.empty(n_traj) if n_traj else np.empty(0)
        if n_traj:
            x0 = bc[name].sampler.sample(_noise_rng(seed, mu, True), n_traj)
        noise = _noise_rng(seed, mu, False).standard_normal((n_traj, n_steps))

        d_abs = abs(d)
        if scheme == Scheme.EXACT_OU:
            if eff_c1 > 0:
                raise ValueError(
                    f"{name}: ExactOU needs damping (drift slope "
                    f"{eff_c1} > 0); use EulerMaruyama")
            if eff_c1 == 0.0:
                # pure drift + Brownian kick is exact as well
                coord = _kernels.euler_paths(
                    x0, noise, eff_c0, 0.0, dtau, math.sqrt(d_abs * dtau))
            else:
                damping = -eff_c1
                fixed_point = eff_c0 / damping
                decay = math.exp(-damping * dtau)
                kick = math.sqrt(
                    d_abs / (2.0 * damping) * (1.0 - decay * decay))
                coord = _kernels.ou_paths(x0, noise, decay, kick, fixed_point)
        elif scheme == Scheme.EULER_MARUYAMA:
            coord = _kernels.euler_paths(
                x0, noise, eff_c0, eff_c1, dtau, math.sqrt(d_abs * dtau))
        else:
            raise ValueError(f"unknown scheme {scheme}")

        paths[:, :, mu] = coord[:, ::-1] if backward else coord

    paths.setflags(write=False)
    return TrajectoryEnsemble(grid=grid, coordinates=tuple(names),
                              paths=paths, seed=seed, scheme=scheme)


def measured_value_paths(ensemble: TrajectoryEnsemble, coordinate: str,
                         gain_of_tau=None) -> np.ndarray:
    """Divide a coordinate's paths by the gain G(tau) (default e^tau)."""
    values = ensemble.coordinate_paths(coordinate)
    taus = ensemble.grid.times()
    if gain_of_tau is None:
        gains = np.exp(taus)
    else:
        gains = np.array([gain_of_tau(t) for t in taus])
    return values / gains[np.newaxis, :]
