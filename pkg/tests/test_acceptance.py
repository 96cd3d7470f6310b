"""End-to-end acceptance gate.

Each test covers one primary deliverable at its stated tolerance and prints
a single PASS/FAIL line (visible with pytest -s or in failure reports).
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import erf

from qflow import fock_oracle as fo
from qflow.bell import (TSIRELSON, ChshSettings, chsh_monte_carlo,
                        chsh_analytic, optimal_angles,
                        violation_threshold_gain)
from qflow.cli import main
from qflow.dynamics import BoundaryCondition, Scheme, measured_value_paths, simulate
from qflow.fpe import OrderError, compile_hamiltonian
from qflow.measurement import (binning_efficiency, continuous_measurement,
                               qubit_measurement)
from qflow.operators import parse_hamiltonian
from qflow.phase_space import (GaussianMixture1D, QuadratureConvention,
                               TimeGrid)
from conftest import random_compiling_hermitian

OQ = QuadratureConvention.OPERATOR_QUADRATURES
AMPLIFIER = compile_hamiltonian(parse_hamiltonian("0.5i*adag^2 - 0.5i*a^2"), OQ)


def report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_bell_curve():
    t0 = time.monotonic()
    grid = np.linspace(0.0, 5.0, 100)
    eta_defect = max(abs(binning_efficiency(float(g)) - erf(g)) for g in grid)
    ok = eta_defect < 1e-15

    theta, phi = optimal_angles()
    mc_ok = True
    detail = []
    for gain in (0.5, 1.0, 2.0, 4.0):
        r = chsh_monte_carlo(ChshSettings(theta=theta, phi=phi, gain=gain,
                                          n_samples=10 ** 6, seed=2024))
        dev = abs(r.b_value - r.b_analytic)
        mc_ok = mc_ok and dev < 3.0 * r.stderr
        detail.append(f"G={gain}: |dB|={dev:.2e} (3se={3 * r.stderr:.2e})")

    b1 = chsh_analytic(1.0).b_analytic
    b1_ok = b1 > 2.0 and abs(b1 - 2.0087) < 1e-3
    g_star = violation_threshold_gain(tol=1e-6)
    g_ok = (abs(binning_efficiency(g_star) - 2.0 ** -0.25) < 1e-6
            and 0.99 < g_star < 1.0)
    elapsed = time.monotonic() - t0
    report("Bell curve",
           ok and mc_ok and b1_ok and g_ok and elapsed < 60.0,
           f"eta==erf defect {eta_defect:.1e}; {'; '.join(detail)}; "
           f"B(1)={b1:.6f}; G*={g_star:.6f}; {elapsed:.1f}s")


def test_continuous_measurement():
    t0 = time.monotonic()
    closed_ok = all(
        abs(continuous_measurement(1.0, 0.0, tau).q_m_distribution.variance()
            - math.exp(-2 * tau)) <= 1e-15 * math.exp(-2 * tau) * 10
        for tau in (0.5, 1.0, 2.0, 3.0))

    n = 10 ** 4
    tau_f = 3.0
    grid = TimeGrid(0.0, tau_f, 300)  # exact-OU steps carry no dtau bias
    bc = {"q": BoundaryCondition("future", GaussianMixture1D(
              ((1.0, math.exp(tau_f) * 1.0, 1.0),))),
          "p": BoundaryCondition("past", GaussianMixture1D(((1.0, 0.0, 2.0),)))}
    ens = simulate(AMPLIFIER, bc, grid, n, seed=2024)
    qm = measured_value_paths(ens, "q")
    times = grid.times()
    tol = 5.0 / math.sqrt(n)
    emp_ok = True
    detail = []
    for tau in (1.0, 2.0, 3.0):
        step = int(round(tau / grid.dtau))
        assert abs(times[step] - tau) < 1e-12
        var = float(np.var(qm[:, step]))
        rel = abs(var / math.exp(-2 * tau) - 1.0)
        emp_ok = emp_ok and rel < tol
        detail.append(f"tau={tau}: rel err {rel:.3f}")
    elapsed = time.monotonic() - t0
    report("Continuous measurement",
           closed_ok and emp_ok and elapsed < 30.0,
           f"Var(q_m)=e^-2tau closed-form exact; {'; '.join(detail)}; "
           f"tol {tol:.3f}; {elapsed:.1f}s")


def test_trajectory_boundary_statistics():
    t0 = time.monotonic()
    n = 10 ** 5
    grid = TimeGrid(0.0, 2.0, 100)  # exact-OU steps carry no dtau bias
    bc = {"q": BoundaryCondition("future", GaussianMixture1D(((1.0, 0.0, 1.0),))),
          "p": BoundaryCondition("past", GaussianMixture1D(((1.0, 0.0, 2.0),)))}
    ens = simulate(AMPLIFIER, bc, grid, n, seed=2024)
    q = ens.coordinate_paths("q")
    tol = 5.0 / math.sqrt(n)
    v0 = float(np.var(q[:, 0]))
    vf = float(np.var(q[:, -1]))
    elapsed = time.monotonic() - t0
    report("Trajectory boundary statistics",
           abs(v0 - 1) < tol and abs(vf - 1) < tol and elapsed < 30.0,
           f"Var(q,0)={v0:.4f}, Var(q,tau_f)={vf:.4f}, tol {tol:.4f}; "
           f"{elapsed:.1f}s")


def test_variance_law():
    dim = 128
    worst = 0.0
    for var0 in (0.04, 1.0):
        squeeze = 0.5 * math.log(var0)
        for tau in (0.3, 0.7, 1.0):
            state = fo.evolve_parametric(fo.coherent_state(0.0, dim),
                                         squeeze + tau)
            oracle = fo.husimi_quadrature_variance(
                fo.density_from_state(state), "q")
            predicted = continuous_measurement(
                0.0, var0, tau).q_distribution.variance()
            worst = max(worst, abs(predicted - oracle))
    # eigenstate limit is beyond the truncated basis; closed form only
    near = continuous_measurement(1.0, 1e-4, 1.0).q_distribution.variance()
    closed_ok = abs(near - (1.0 + math.e ** 2 * 1e-4)) < 1e-12
    report("Variance law", worst < 1e-3 and closed_ok,
           f"max |sim - oracle| = {worst:.2e} (tol 1e-3)")


def test_fpe_compilation():
    golden = (AMPLIFIER.drift[0].as_dict() == {(1, 0): Fraction(1)}
              and AMPLIFIER.drift[1].as_dict() == {(0, 1): Fraction(-1)}
              and AMPLIFIER.diffusion == (Fraction(-2), Fraction(2)))

    rng = np.random.Generator(np.random.Philox(key=np.uint64(2024)))
    checked = 0
    trace_ok = True
    while checked < 200:
        n_modes = 1 + int(rng.integers(2))
        _, pde = random_compiling_hermitian(rng, OQ, n_modes=n_modes)
        trace_ok = trace_ok and pde.diffusion_trace().is_zero()
        checked += 1

    try:
        compile_hamiltonian(parse_hamiltonian("adag^3 + a^3"), OQ)
        cubic_ok = False
    except OrderError:
        cubic_ok = True
    report("FPE compilation", golden and trace_ok and cubic_ok,
           f"golden amplifier form; trace-zero on {checked} random "
           f"Hermitian polynomials (exact); cubic raises OrderError")


def test_identity_suite():
    rng = np.random.Generator(np.random.Philox(key=np.uint64(2024)))
    worst = 0.0
    for _ in range(20):
        alpha = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        worst = max(worst, fo.verify_bosonic_identity("a", alpha, 30))
        worst = max(worst, fo.verify_bosonic_identity("a_dagger", alpha, 30))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        worst = max(worst, fo.verify_spin_identity(z))
    report("Identity suite", worst < 1e-6,
           f"max error {worst:.2e} over 20 random points (tol 1e-6)")


def test_qubit_measurement():
    s = 1.0 / math.sqrt(2.0)
    spin = fo.SpinState(s, s)
    worst = 0.0
    for gain in (1.0, 2.0, 4.0):
        joint = fo.evolve_qubit_meter(spin, fo.coherent_state(-1j * gain, 256),
                                      math.pi)
        rho = fo.reduced_meter_density(joint)
        grid = np.linspace(-2.5, 2.5, 101)
        ps = np.arange(-5.0, 5.0, 0.2)
        q = fo.husimi_q_grid(rho, grid * gain, ps)
        oracle = np.trapezoid(q, ps, axis=1) * gain
        printed = qubit_measurement(spin, gain).sigma_m_distribution.pdf(grid)
        worst = max(worst, float(np.max(np.abs(printed - oracle))))
    pdf = qubit_measurement(spin, 2.0).sigma_m_distribution.pdf
    peaks_ok = pdf(1.0) > pdf(0.0) and pdf(-1.0) > pdf(0.0)
    report("Qubit measurement", worst < 1e-6 and peaks_ok,
           f"sup-norm vs oracle {worst:.2e} (tol 1e-6); two peaks at +-1")


def test_determinism(tmp_path):
    commands = [
        ["eigen-dist", "--tau-steps", "6"],
        ["trajectories", "--n-traj", "5", "--n-steps", "500"],
        ["spin-dist"],
        ["bell", "--n-g", "4", "--n-samples", "20000"],
    ]
    ok = True
    for k, cmd in enumerate(commands):
        p1 = tmp_path / f"{k}_a.csv"
        p2 = tmp_path / f"{k}_b.csv"
        assert main(cmd + ["-o", str(p1)]) == 0
        assert main(cmd + ["-o", str(p2)]) == 0
        same = (p1.read_bytes() == p2.read_bytes()
                and (tmp_path / f"{k}_a.csv.meta.json").read_bytes()
                == (tmp_path / f"{k}_b.csv.meta.json").read_bytes())
        ok = ok and same
    report("Determinism", ok,
           "every seeded command run twice is byte-identical")
