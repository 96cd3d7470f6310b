from fractions import Fraction

import numpy as np
import pytest

from qflow import fock_oracle as fo
from qflow.operators import (OperatorExpr, ParseError, RC_I, RC_ONE,
                             RationalComplex, normal_order, parse_hamiltonian)
from conftest import random_hermitian

A = ((0, False),)
AD = ((0, True),)


def word(*syms):
    return tuple(syms)


def test_rational_complex_arithmetic():
    x = RationalComplex(Fraction(1, 2), Fraction(-1, 3))
    y = RationalComplex(Fraction(2), Fraction(1, 3))
    assert complex(x + y) == complex(x) + complex(y)
    assert complex(x * y) == pytest.approx(complex(x) * complex(y))
    assert complex(x.conj()) == complex(x).conjugate()
    assert (x - x).is_zero()
    assert complex(RC_I * RC_I) == -1


def test_normal_order_examples():
    # a adag -> adag a + 1
    e = normal_order(OperatorExpr.monomial(word((0, False), (0, True))))
    assert e == (OperatorExpr.monomial(word((0, True), (0, False)))
                 + OperatorExpr.monomial((), RC_ONE))
    # already normal-ordered input unchanged
    n_op = OperatorExpr.monomial(word((0, True), (0, False)))
    assert normal_order(n_op) == n_op
    # a a adag adag -> adag^2 a^2 + 4 adag a + 2
    e = normal_order(OperatorExpr.monomial(
        word((0, False), (0, False), (0, True), (0, True))))
    expect = (OperatorExpr.monomial(word((0, True), (0, True), (0, False), (0, False)))
              + OperatorExpr.monomial(word((0, True), (0, False)),
                                      RationalComplex(Fraction(4)))
              + OperatorExpr.monomial((), RationalComplex(Fraction(2))))
    assert e == expect


def test_normal_order_idempotent_and_matrix_faithful():
    rng = np.random.Generator(np.random.Philox(key=np.uint64(7)))
    dim = 12
    for _ in range(20):
        h = random_hermitian(rng, n_terms=3)
        no = normal_order(h)
        assert normal_order(no) == no
        # operator equality on the safe subspace of the truncated matrices
        m1 = h.to_matrix(dim)
        m2 = no.to_matrix(dim)
        k = dim - 4
        assert np.max(np.abs(m1[:k, :k] - m2[:k, :k])) < 1e-10


def test_dagger_and_hermiticity():
    e = OperatorExpr.monomial(word((0, True), (0, True)), RC_I)
    h = e + e.dagger()
    assert h.is_hermitian()
    assert not e.is_hermitian()


def test_to_matrix_against_oracle():
    dim = 10
    n_expr = OperatorExpr.monomial(word((0, True), (0, False)))
    assert np.allclose(n_expr.to_matrix(dim), fo.number_op(dim))
    q_expr = (OperatorExpr.monomial(A) + OperatorExpr.monomial(AD))
    assert np.allclose(q_expr.to_matrix(dim), fo.quadrature_q(dim))


def test_parse_amplifier():
    h = parse_hamiltonian("0.5i*adag^2 - 0.5i*a^2")
    half_i = RationalComplex(Fraction(0), Fraction(1, 2))
    expect = (OperatorExpr.monomial(word((0, True), (0, True)), half_i)
              + OperatorExpr.monomial(word((0, False), (0, False)), -half_i))
    assert h == expect
    assert h.is_hermitian()


def test_parse_whitespace_and_modes():
    assert parse_hamiltonian("adag * a") == parse_hamiltonian("adag*a")
    h = parse_hamiltonian("bdag*b + 2*adag*a")
    assert h.n_modes() == 2
    assert parse_hamiltonian("3*adag*a") == parse_hamiltonian("adag*a").scale(
        RationalComplex(Fraction(3)))


def test_parse_coefficient_forms():
    assert parse_hamiltonian(".5*adag*a") == parse_hamiltonian("0.5*adag*a")
    assert parse_hamiltonian("i*a + -i*adag").is_hermitian()
    assert not parse_hamiltonian("i*a + i*adag").is_hermitian()


def test_parse_errors_report_byte_offset():
    with pytest.raises(ParseError) as exc:
        parse_hamiltonian("adag^x")
    assert exc.value.offset == 5
    with pytest.raises(ParseError):
        parse_hamiltonian("")
    with pytest.raises(ParseError) as exc:
        parse_hamiltonian("a + @")
    assert exc.value.offset == 4
    with pytest.raises(ParseError):
        parse_hamiltonian("a *")
