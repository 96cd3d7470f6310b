"""Shared helpers for the test suite."""

from fractions import Fraction

import numpy as np

from qflow.fpe import OrderError, compile_hamiltonian
from qflow.operators import OperatorExpr, RationalComplex


def rational(rng, lo=-9, hi=9, den=6) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))


def random_hermitian(rng, n_modes=1, n_terms=3, max_ladder=2) -> OperatorExpr:
    """Random Hermitian polynomial with <= max_ladder creations and
    annihilations per word, so degree <= 2*max_ladder."""
    expr = OperatorExpr.zero()
    for _ in range(n_terms):
        mode = int(rng.integers(n_modes))
        n_dag = int(rng.integers(max_ladder + 1))
        n_ann = int(rng.integers(max_ladder + 1))
        word = ((mode, True),) * n_dag + ((mode, False),) * n_ann
        coef = RationalComplex(rational(rng), rational(rng))
        expr = expr + OperatorExpr.monomial(word, coef)
    return expr + expr.dagger()


def random_compiling_hermitian(rng, convention, n_modes=1, n_terms=3,
                               max_tries=50):
    """Resample until the Hamiltonian compiles (some words exceed order 2)."""
    for _ in range(max_tries):
        h = random_hermitian(rng, n_modes=n_modes, n_terms=n_terms)
        try:
            return h, compile_hamiltonian(h, convention)
        except OrderError:
            continue
    raise AssertionError("no compiling Hamiltonian found")


def ensemble_variance(paths: np.ndarray, step: int) -> float:
    return float(np.var(paths[:, step], ddof=1))
