"""Hot integration loops: numba-compiled with a pure-numpy fallback.

Set QFLOW_DISABLE_NUMBA=1 to force the numpy path.  Both paths perform the
same elementwise arithmetic in the same order, so results are bit-identical.
QFLOW_THREADS caps the numba thread pool (0 or unset = auto).
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("QFLOW_DISABLE_NUMBA", "0") not in ("1", "true")

if NUMBA_ENABLED:
    try:
        import numba
        from numba import njit, prange
        _threads = int(os.environ.get("QFLOW_THREADS", "0") or "0")
        if _threads > 0:
            numba.set_num_threads(min(_threads, numba.config.NUMBA_NUM_THREADS))
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False


def _ou_paths_np(x0, noise, decay, kick, fixed_point):
    n_traj, n_steps = noise.shape
    paths = np.empty((n_traj, n_steps + 1))
    paths[:, 0] = x0
    for s in range(n_steps):
        paths[:, s + 1] = (fixed_point
                           + (paths[:, s] - fixed_point) * decay
                           + kick * noise[:, s])
    return paths


def _euler_paths_np(x0, noise, c0, c1, dtau, kick):
    n_traj, n_steps = noise.shape
    paths = np.empty((n_traj, n_steps + 1))
    paths[:, 0] = x0
    for s in range(n_steps):
        x = paths[:, s]
        paths[:, s + 1] = x + (c0 + c1 * x) * dtau + kick * noise[:, s]
    return paths


if NUMBA_ENABLED:

    @njit(parallel=True, cache=True)
    def _ou_paths_nb(x0, noise, decay, kick, fixed_point):  # pragma: no cover
        n_traj, n_steps = noise.shape
        paths = np.empty((n_traj, n_steps + 1))
        for t in prange(n_traj):
            paths[t, 0] = x0[t]
            for s in range(n_steps):
                paths[t, s + 1] = (fixed_point
                                   + (paths[t, s] - fixed_point) * decay
                                   + kick * noise[t, s])
        return paths

    @njit(parallel=True, cache=True)
    def _euler_paths_nb(x0, noise, c0, c1, dtau, kick):  # pragma: no cover
        n_traj, n_steps = noise.shape
        paths = np.empty((n_traj, n_steps + 1))
        for t in prange(n_traj):
            paths[t, 0] = x0[t]
            for s in range(n_steps):
                x = paths[t, s]
                paths[t, s + 1] = x + (c0 + c1 * x) * dtau + kick * noise[t, s]
        return paths

    ou_paths = _ou_paths_nb
    euler_paths = _euler_paths_nb
else:
    ou_paths = _ou_paths_np
    euler_paths = _euler_paths_np
