"""qflow: phase-space Q-function measurement simulator.

Compiles bosonic Hamiltonians to generalized Fokker-Planck equations,
integrates forward-backward stochastic trajectories, models continuous and
discrete measurements with gain, and evaluates CHSH Bell correlations, all
cross-checked against an exact truncated-Fock oracle.
"""

__version__ = "0.1.0"

from . import bell, dynamics, fock_oracle, fpe, measurement, operators, phase_space

__all__ = ["bell", "dynamics", "fock_oracle", "fpe", "measurement",
           "operators", "phase_space", "__version__"]
