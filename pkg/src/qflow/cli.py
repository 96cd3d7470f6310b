"""Command-line front end: experiment subcommands and figure-data emission.

Exit codes: 0 ok, 2 I/O error, 3 parse error, 4 order/compile error,
5 tolerance failure.  Every subcommand is deterministic given its flags;
the default seed is the fixed constant DEFAULT_SEED.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, bell, dynamics, fock_oracle, fpe, measurement
from .operators import ParseError, parse_hamiltonian
from .phase_space import GaussianMixture1D, QuadratureConvention, TimeGrid

DEFAULT_SEED = 20230117

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_ORDER = 4
EXIT_TOLERANCE = 5


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _write_csv(path: str, header: list[str], rows) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(header) + "\r\n")
            for row in rows:
                fh.write(",".join(
                    "" if v is None else v if isinstance(v, str) else _fmt(v)
                    for v in row) + "\r\n")
    except OSError as exc:
        raise _IOFailure(path, exc) from exc


def _write_metadata(path: str, meta: dict) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise _IOFailure(path, exc) from exc


def _write_json(path: str, meta: dict, header: list[str], rows) -> None:
    payload = dict(meta)
    payload["columns"] = header
    payload["rows"] = [
        [None if v is None else v if isinstance(v, str) else float(v)
         for v in row] for row in rows]
    try:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise _IOFailure(path, exc) from exc


class _IOFailure(Exception):
    def __init__(self, path: str, cause: Exception):
        super().__init__(f"cannot write {path}: {cause}")


def _emit(args, header, rows, meta) -> None:
    meta = dict(meta)
    meta["seed"] = args.seed
    meta["version"] = __version__
    if args.format == "json":
        _write_json(args.output, meta, header, rows)
    else:
        _write_csv(args.output, header, rows)
        _write_metadata(args.output + ".meta.json", meta)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eigen_dist(args) -> int:
    """(tau, q_m, density) triples for the amplified-eigenstate marginal."""
    taus = np.linspace(0.0, args.tau_max, args.tau_steps + 1)
    grid = np.linspace(args.grid_min, args.grid_max, args.grid_points)
    rows = []
    for tau in taus:
        res = measurement.continuous_measurement(args.q0, args.var0, tau)
        dens = res.q_m_distribution.pdf(grid)
        rows.extend((tau, qm, d) for qm, d in zip(grid, dens))
    _emit(args, ["tau", "q_m", "density"], rows, {
        "figure": "eigen_dist",
        "convention": QuadratureConvention.OPERATOR_QUADRATURES.value,
        "q0": args.q0, "var0": args.var0, "scheme": None,
    })
    return EXIT_OK


def cmd_trajectories(args) -> int:
    """q(tau) and q_m(tau) = q/G per trajectory for the amplifier model."""
    pde = fpe.compile_hamiltonian(
        parse_hamiltonian("0.5i*adag^2 - 0.5i*a^2"),
        QuadratureConvention.OPERATOR_QUADRATURES)
    grid = TimeGrid(0.0, args.tau_f, args.n_steps)
    gain_f = math.exp(args.tau_f)
    bc = {
        "q": dynamics.BoundaryCondition(
            "future", GaussianMixture1D(((1.0, gain_f * args.q0, 1.0),))),
        "p": dynamics.BoundaryCondition(
            "past", GaussianMixture1D(((1.0, 0.0, 2.0),))),
    }
    scheme = dynamics.Scheme(args.scheme)
    rows = []
    if args.n_traj > 0:
        ens = dynamics.simulate(pde, bc, grid, args.n_traj, args.seed, scheme)
        q = ens.coordinate_paths("q")
        qm = dynamics.measured_value_paths(ens, "q")
        times = grid.times()
        for t in range(args.n_traj):
            for s, tau in enumerate(times):
                rows.append((tau, t, q[t, s], qm[t, s]))
    _emit(args, ["tau", "traj_id", "q", "q_m"], rows, {
        "figure": "trajectories",
        "convention": QuadratureConvention.OPERATOR_QUADRATURES.value,
        "q0": args.q0, "scheme": scheme.value,
        "grid": {"tau_0": 0.0, "tau_f": args.tau_f, "n_steps": args.n_steps},
    })
    return EXIT_OK


def cmd_spin_dist(args) -> int:
    """(G, sigma_m, density) rows for the two-peak spin marginal."""
    spin = fock_oracle.SpinState(1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    grid = np.linspace(args.grid_min, args.grid_max, args.grid_points)
    rows = []
    for gain in args.gains:
        res = measurement.qubit_measurement(spin, gain)
        dens = res.sigma_m_distribution.pdf(grid)
        rows.extend((gain, s, d) for s, d in zip(grid, dens))
    _emit(args, ["G", "sigma_m", "density"], rows, {
        "figure": "spin_dist",
        "convention": QuadratureConvention.AMPLITUDE_PARTS.value,
        "convention_note": "sigma_m = x/G; values in operator quadratures "
                           "are twice as large",
        "scheme": None,
    })
    return EXIT_OK


def cmd_bell(args) -> int:
    """(G, B_analytic, B_mc, stderr) rows across a gain sweep."""
    gains = np.linspace(args.g_min, args.g_max, args.n_g)
    rows_raw = bell.bell_curve(gains, args.n_samples, args.seed)
    rows = [(r["G"], r["B_analytic"], r["B_mc"], r["stderr"])
            for r in rows_raw]
    _emit(args, ["G", "B_analytic", "B_mc", "stderr"], rows, {
        "figure": "bell",
        "convention": QuadratureConvention.AMPLITUDE_PARTS.value,
        "n_samples": args.n_samples, "scheme": None,
    })
    return EXIT_OK


def cmd_derive_fpe(args) -> int:
    """Compile a Hamiltonian text to its phase-space PDE; print both forms."""
    h = parse_hamiltonian(args.hamiltonian)
    convention = QuadratureConvention(args.convention)
    pde = fpe.compile_hamiltonian(h, convention)
    text = fpe.pretty_print(pde)
    machine = pde.to_dict()
    out = {"pretty": text, "pde": machine}
    if args.output:
        try:
            with open(args.output, "w") as fh:
                json.dump(out, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise _IOFailure(args.output, exc) from exc
    print(text)
    print(json.dumps(machine, sort_keys=True))
    return EXIT_OK


def cmd_verify(args) -> int:
    """Run the oracle identity suite; exit 0 iff all errors < tolerance."""
    rng = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    worst = 0.0
    failed = []
    for k in range(args.n_points):
        alpha = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        for ident in ("a", "a_dagger"):
            err = fock_oracle.verify_bosonic_identity(ident, alpha, args.dim)
            worst = max(worst, err)
            if err >= args.tolerance:
                failed.append((ident, alpha, err))
        z = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        err = fock_oracle.verify_spin_identity(z)
        worst = max(worst, err)
        if err >= args.tolerance:
            failed.append(("spin_z", z, err))
    print(f"identity suite: {3 * args.n_points} checks, "
          f"max error {worst:.3g}, tolerance {args.tolerance:g}")
    for ident, point, err in failed:
        print(f"  FAIL {ident} at {point}: {err:.3g}")
    return EXIT_OK if not failed else EXIT_TOLERANCE


# ---------------------------------------------------------------------------

def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _apply_config(parser, args, argv):
    """Flat key=value config file; explicit flags win on conflict."""
    entries = {}
    with open(args.config) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            entries[key.strip().replace("-", "_")] = value.strip()
    given = {a.lstrip("-").split("=")[0].replace("-", "_")
             for a in argv if a.startswith("--")}
    for key, value in entries.items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        elif isinstance(current, list):
            setattr(args, key, _float_list(value))
        else:
            setattr(args, key, value)
    return args


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qflow",
        description="Phase-space Q-function measurement simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--config", default=None,
                       help="flat key=value file mirroring flags")
        if output:
            p.add_argument("--output", "-o", required=True)
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("eigen-dist",
                       help="P(q_m, tau) surface for an eigenstate input")
    p.add_argument("--q0", type=float, default=1.0)
    p.add_argument("--var0", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=3.0)
    p.add_argument("--tau-steps", type=int, default=30)
    p.add_argument("--grid-min", type=float, default=-1.0)
    p.add_argument("--grid-max", type=float, default=3.0)
    p.add_argument("--grid-points", type=int, default=201)
    common(p)
    p.set_defaults(func=cmd_eigen_dist)

    p = sub.add_parser("trajectories",
                       help="forward-backward amplifier trajectories")
    p.add_argument("--q0", type=float, default=1.0)
    p.add_argument("--tau-f", type=float, default=3.0)
    p.add_argument("--n-steps", type=int, default=3000)
    p.add_argument("--n-traj", type=int, default=10)
    p.add_argument("--scheme", choices=[s.value for s in dynamics.Scheme],
                   default=dynamics.Scheme.EXACT_OU.value)
    common(p)
    p.set_defaults(func=cmd_trajectories)

    p = sub.add_parser("spin-dist", help="P(sigma_m) spin marginal per gain")
    p.add_argument("--gains", type=_float_list, default=[1.0, 2.0, 5.0])
    p.add_argument("--grid-min", type=float, default=-2.0)
    p.add_argument("--grid-max", type=float, default=2.0)
    p.add_argument("--grid-points", type=int, default=401)
    common(p)
    p.set_defaults(func=cmd_spin_dist)

    p = sub.add_parser("bell", help="B(G) curve, analytic and Monte Carlo")
    p.add_argument("--g-min", type=float, default=0.2)
    p.add_argument("--g-max", type=float, default=3.0)
    p.add_argument("--n-g", type=int, default=29)
    p.add_argument("--n-samples", type=int, default=100000)
    common(p)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("derive-fpe",
                       help="compile a Hamiltonian to its phase-space PDE")
    p.add_argument("hamiltonian")
    p.add_argument("--convention",
                   choices=[c.value for c in QuadratureConvention],
                   default=QuadratureConvention.OPERATOR_QUADRATURES.value)
    p.add_argument("--output", "-o", default=None)
    common(p, output=False)
    p.set_defaults(func=cmd_derive_fpe)

    p = sub.add_parser("verify", help="run the oracle identity suite")
    p.add_argument("--dim", type=int, default=30)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--n-points", type=int, default=20)
    common(p, output=False)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            args = _apply_config(parser, args, argv)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_IO
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except fpe.OrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORDER
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
