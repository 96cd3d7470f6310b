"""Compile bosonic Hamiltonians into generalized Fokker-Planck equations.

The pipeline: apply the coherent-state differential identities to the left
and right products H*Lambda and Lambda*H, normal-order the resulting
differential operator (derivatives innermost), change to real quadrature
variables, and read off drift and diffusion in the divergence form

    dQ/dtau = d_mu [ -A^mu + (1/2) d_nu D^{mu nu} ] Q.

Coefficients stay exact rationals end to end, so the traceless-diffusion
structure of unitary evolution is asserted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .operators import (OperatorExpr, RationalComplex, RC_ZERO, RC_ONE, RC_I,
                        normal_order)
from .phase_space import QuadratureConvention

Mono = tuple[int, ...]   # exponents per variable
Deriv = tuple[int, ...]  # derivative orders per variable


class OrderError(Exception):
    """A compiled term carries derivatives above second order."""


def _fmt_word(word) -> str:
    from .operators import MODE_NAMES
    if not word:
        return "1"
    return "*".join(MODE_NAMES[m] + ("dag" if d else "") for m, d in word)


# ---------------------------------------------------------------------------
# differential operators, normal form: sum of coef * poly(vars) * d^deriv
# ---------------------------------------------------------------------------

class DiffOperator:
    """Linear differential operator over n complex pairs (alpha_k, alpha_k*)."""

    def __init__(self, n_vars: int,
                 terms: dict[tuple[Mono, Deriv], RationalComplex] | None = None):
        self.n_vars = n_vars
        self.terms: dict[tuple[Mono, Deriv], RationalComplex] = {}
        if terms:
            for key, coef in terms.items():
                if not coef.is_zero():
                    self.terms[key] = coef

    @classmethod
    def identity(cls, n_vars: int) -> "DiffOperator":
        zero = (0,) * n_vars
        return cls(n_vars, {(zero, zero): RC_ONE})

    def _add_term(self, out, mono: Mono, deriv: Deriv, coef: RationalComplex):
        key = (mono, deriv)
        acc = out.get(key, RC_ZERO) + coef
        if acc.is_zero():
            out.pop(key, None)
        else:
            out[key] = acc

    def compose_multiply(self, var: int) -> "DiffOperator":
        """self o (multiplication by variable `var`), normal form restored."""
        out: dict[tuple[Mono, Deriv], RationalComplex] = {}
        for (mono, deriv), coef in self.terms.items():
            lifted = list(mono)
            lifted[var] += 1
            self._add_term(out, tuple(lifted), deriv, coef)
            if deriv[var] > 0:
                lowered = list(deriv)
                lowered[var] -= 1
                self._add_term(out, mono, tuple(lowered),
                               coef * Fraction(deriv[var]))
        return DiffOperator(self.n_vars, out)

    def compose_derivative(self, var: int) -> "DiffOperator":
        """self o d/d(var)."""
        out: dict[tuple[Mono, Deriv], RationalComplex] = {}
        for (mono, deriv), coef in self.terms.items():
            raised = list(deriv)
            raised[var] += 1
            self._add_term(out, mono, tuple(raised), coef)
        return DiffOperator(self.n_vars, out)

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        out = dict(self.terms)
        for key, coef in other.terms.items():
            acc = out.get(key, RC_ZERO) + coef
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        return DiffOperator(self.n_vars, out)

    def scale(self, coef: RationalComplex) -> "DiffOperator":
        return DiffOperator(self.n_vars,
                            {k: c * coef for k, c in self.terms.items()})

    def max_derivative_order(self) -> int:
        return max((sum(d) for _, d in self.terms), default=0)


def _apply_word(word, n_modes: int, side: str) -> DiffOperator:
    """Differential representation of word*Lambda (left) or Lambda*word (right).

    Variables are ordered (alpha_0, alpha_0*, alpha_1, alpha_1*, ...).
    Later Hilbert-space factors commute with the phase-space structure already
    accumulated, so each factor composes innermost (on the right).
    """
    n_vars = 2 * n_modes
    op = DiffOperator.identity(n_vars)
    symbols = tuple(reversed(word)) if side == "left" else tuple(word)
    for mode, dag in symbols:
        va, vastar = 2 * mode, 2 * mode + 1
        if side == "left":
            if dag:  # a_dag Lambda = [d/d_alpha + alpha*] Lambda
                op = op.compose_derivative(va) + op.compose_multiply(vastar)
            else:    # a Lambda = alpha Lambda
                op = op.compose_multiply(va)
        else:
            if dag:  # Lambda a_dag = alpha* Lambda
                op = op.compose_multiply(vastar)
            else:    # Lambda a = [d/d_alpha* + alpha] Lambda
                op = op.compose_derivative(vastar) + op.compose_multiply(va)
    return op


def commutator_action(h: OperatorExpr) -> DiffOperator:
    """Generator L with dQ/dtau = L Q, from i [H, Lambda] inside the trace.

    Terms whose derivative order exceeds two are rejected per-word so the
    error can name the offending Hamiltonian term.
    """
    h = normal_order(h)
    n_modes = h.n_modes()
    total = DiffOperator(2 * n_modes)
    for word, coef in h.terms.items():
        left = _apply_word(word, n_modes, "left")
        right = _apply_word(word, n_modes, "right")
        contrib = (left + right.scale(-RC_ONE)).scale(RC_I * coef)
        if contrib.max_derivative_order() > 2:
            raise OrderError(
                f"term {_fmt_word(word)} produces derivative order "
                f"{contrib.max_derivative_order()} > 2")
        total = total + contrib
    return total


# ---------------------------------------------------------------------------
# polynomials over the real coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Real-coefficient polynomial: monomial exponents -> Fraction."""

    n_vars: int
    coeffs: tuple[tuple[Mono, Fraction], ...]

    @classmethod
    def from_dict(cls, n_vars: int, d: dict[Mono, Fraction]) -> "Poly":
        items = tuple(sorted((m, c) for m, c in d.items() if c != 0))
        return cls(n_vars, items)

    @classmethod
    def zero(cls, n_vars: int) -> "Poly":
        return cls(n_vars, ())

    @classmethod
    def constant(cls, n_vars: int, value: Fraction) -> "Poly":
        if value == 0:
            return cls.zero(n_vars)
        return cls(n_vars, (((0,) * n_vars, Fraction(value)),))

    def as_dict(self) -> dict[Mono, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        d = self.as_dict()
        for m, c in other.coeffs:
            d[m] = d.get(m, Fraction(0)) + c
        return Poly.from_dict(self.n_vars, d)

    def __sub__(self, other: "Poly") -> "Poly":
        d = self.as_dict()
        for m, c in other.coeffs:
            d[m] = d.get(m, Fraction(0)) - c
        return Poly.from_dict(self.n_vars, d)

    def derivative(self, var: int) -> "Poly":
        d: dict[Mono, Fraction] = {}
        for m, c in self.coeffs:
            if m[var] > 0:
                lowered = list(m)
                lowered[var] -= 1
                key = tuple(lowered)
                d[key] = d.get(key, Fraction(0)) + c * m[var]
        return Poly.from_dict(self.n_vars, d)

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_value(self) -> Fraction | None:
        """The constant if the polynomial has no variable dependence."""
        if not self.coeffs:
            return Fraction(0)
        if len(self.coeffs) == 1 and sum(self.coeffs[0][0]) == 0:
            return self.coeffs[0][1]
        return None

    def evaluate(self, point) -> float:
        total = 0.0
        for m, c in self.coeffs:
            term = float(c)
            for var, exp in enumerate(m):
                term *= point[var] ** exp
            total += term
        return total

    def format(self, names) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in self.coeffs:
            factors = []
            if abs(c) != 1 or sum(m) == 0:
                factors.append(str(abs(c)))
            for var, exp in enumerate(m):
                if exp == 1:
                    factors.append(names[var])
                elif exp > 1:
                    factors.append(f"{names[var]}^{exp}")
            text = "*".join(factors) if factors else "1"
            parts.append(("-" if c < 0 else "+") + text)
        joined = " ".join(parts)
        return joined[1:] if joined.startswith("+") else "-" + joined[2:] \
            if joined.startswith("- ") else joined


@dataclass(frozen=True)
class PhaseSpacePDE:
    """Drift vector and diffusion matrix of a generalized FPE."""

    variables: tuple[str, ...]
    drift: tuple[Poly, ...]
    diffusion_matrix: tuple[tuple[Poly, ...], ...]
    convention: QuadratureConvention

    @property
    def diffusion(self) -> tuple[Fraction, ...]:
        """Diagonal constant diffusion; raises if not of that shape."""
        n = len(self.variables)
        for i in range(n):
            for j in range(n):
                if i != j and not self.diffusion_matrix[i][j].is_zero():
                    raise ValueError("diffusion matrix not diagonal")
        diag = []
        for i in range(n):
            c = self.diffusion_matrix[i][i].constant_value()
            if c is None:
                raise ValueError("diffusion not constant")
            diag.append(c)
        return tuple(diag)

    def diffusion_trace(self) -> Poly:
        total = Poly.zero(len(self.variables))
        for i in range(len(self.variables)):
            total = total + self.diffusion_matrix[i][i]
        return total

    def sign_split(self) -> dict[str, str]:
        """Map coordinate name -> 'forward' | 'backward' | 'drift_only'."""
        out = {}
        for name, d in zip(self.variables, self.diffusion):
            out[name] = ("forward" if d > 0
                         else "backward" if d < 0 else "drift_only")
        return out

    def to_dict(self) -> dict:
        def poly_dict(p: Poly):
            return [[list(m), str(c)] for m, c in p.coeffs]
        return {
            "variables": list(self.variables),
            "convention": self.convention.value,
            "drift": [poly_dict(p) for p in self.drift],
            "diffusion": [[poly_dict(p) for p in row]
                          for row in self.diffusion_matrix],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseSpacePDE":
        n = len(d["variables"])

        def poly(items):
            return Poly.from_dict(
                n, {tuple(m): Fraction(c) for m, c in items})
        return cls(
            variables=tuple(d["variables"]),
            drift=tuple(poly(p) for p in d["drift"]),
            diffusion_matrix=tuple(
                tuple(poly(p) for p in row) for row in d["diffusion"]),
            convention=QuadratureConvention(d["convention"]),
        )


def _real_variable_substitutions(n_modes: int,
                                 convention: QuadratureConvention):
    """Per complex variable: polynomial image and derivative image.

    Real variables are ordered (q_0, p_0, q_1, p_1, ...) (x in place of q for
    the amplitude-parts convention).  Returns (mono_subs, deriv_subs) where
    each entry is a list of (real_mono_or_real_var, RationalComplex weight).
    """
    n_real = 2 * n_modes
    half = Fraction(1, 2)
    mono_subs = []
    deriv_subs = []
    for mode in range(n_modes):
        vq, vp = 2 * mode, 2 * mode + 1
        eq = tuple(1 if k == vq else 0 for k in range(n_real))
        ep = tuple(1 if k == vp else 0 for k in range(n_real))
        if convention == QuadratureConvention.OPERATOR_QUADRATURES:
            # alpha = (q + i p)/2, d/d_alpha = d/dq - i d/dp
            alpha = [(eq, RationalComplex(half, Fraction(0))),
                     (ep, RationalComplex(Fraction(0), half))]
            astar = [(eq, RationalComplex(half, Fraction(0))),
                     (ep, RationalComplex(Fraction(0), -half))]
            d_alpha = [(vq, RC_ONE), (vp, -RC_I)]
            d_astar = [(vq, RC_ONE), (vp, RC_I)]
        else:
            # alpha = x + i p, d/d_alpha = (d/dx - i d/dp)/2
            alpha = [(eq, RC_ONE), (ep, RC_I)]
            astar = [(eq, RC_ONE), (ep, -RC_I)]
            d_alpha = [(vq, RationalComplex(half, Fraction(0))),
                       (vp, RationalComplex(Fraction(0), -half))]
            d_astar = [(vq, RationalComplex(half, Fraction(0))),
                       (vp, RationalComplex(Fraction(0), half))]
        mono_subs.extend([alpha, astar])
        deriv_subs.extend([d_alpha, d_astar])
    return mono_subs, deriv_subs


def _mono_add(m1: Mono, m2: Mono) -> Mono:
    return tuple(a + b for a, b in zip(m1, m2))


def to_phase_space_pde(d: DiffOperator,
                       convention: QuadratureConvention
                       = QuadratureConvention.OPERATOR_QUADRATURES
                       ) -> PhaseSpacePDE:
    """Change to real coordinates and collect drift/diffusion in adjoint form."""
    if d.max_derivative_order() > 2:
        raise OrderError(
            f"derivative order {d.max_derivative_order()} > 2")
    n_modes = d.n_vars // 2
    n_real = 2 * n_modes
    mono_subs, deriv_subs = _real_variable_substitutions(n_modes, convention)

    # expand into real-variable terms: (real_mono, real_deriv) -> coefficient
    real_terms: dict[tuple[Mono, Deriv], RationalComplex] = {}

    def accumulate(mono: Mono, deriv: Deriv, coef: RationalComplex):
        key = (mono, deriv)
        acc = real_terms.get(key, RC_ZERO) + coef
        if acc.is_zero():
            real_terms.pop(key, None)
        else:
            real_terms[key] = acc

    zero_mono = (0,) * n_real
    for (mono, deriv), coef in d.terms.items():
        expanded = [(zero_mono, (0,) * n_real, coef)]
        for var, exp in enumerate(mono):
            for _ in range(exp):
                expanded = [
                    (_mono_add(m, dm), dv, c * w)
                    for m, dv, c in expanded
                    for dm, w in mono_subs[var]]
        for var, exp in enumerate(deriv):
            for _ in range(exp):
                expanded = [
                    (m, tuple(v + (1 if k == rv else 0)
                              for k, v in enumerate(dv)), c * w)
                    for m, dv, c in expanded
                    for rv, w in deriv_subs[var]]
        for m, dv, c in expanded:
            accumulate(m, dv, c)

    # collect: constant a(phi), first-order b^mu(phi), second-order c^{mu nu}
    a_poly: dict[Mono, Fraction] = {}
    b_polys = [dict() for _ in range(n_real)]
    c_polys = [[dict() for _ in range(n_real)] for _ in range(n_real)]
    for (mono, deriv), coef in real_terms.items():
        if coef.im != 0:
            raise ValueError(
                f"non-real coefficient {coef} after reduction; "
                "Hamiltonian is not Hermitian")
        order = sum(deriv)
        if order == 0:
            a_poly[mono] = a_poly.get(mono, Fraction(0)) + coef.re
        elif order == 1:
            mu = deriv.index(1)
            b_polys[mu][mono] = b_polys[mu].get(mono, Fraction(0)) + coef.re
        else:
            idx = [k for k, v in enumerate(deriv) for _ in range(v)]
            mu, nu = idx[0], idx[1]
            # symmetrize: derivative operators commute
            if mu == nu:
                c_polys[mu][nu][mono] = \
                    c_polys[mu][nu].get(mono, Fraction(0)) + coef.re
            else:
                for (u, v) in ((mu, nu), (nu, mu)):
                    c_polys[u][v][mono] = \
                        c_polys[u][v].get(mono, Fraction(0)) + coef.re / 2

    a = Poly.from_dict(n_real, a_poly)
    b = [Poly.from_dict(n_real, p) for p in b_polys]
    c = [[Poly.from_dict(n_real, c_polys[i][j]) for j in range(n_real)]
         for i in range(n_real)]

    # divergence form: D = 2c, A^mu = d_nu D^{nu mu} - b^mu
    two = Fraction(2)
    diffusion = tuple(
        tuple(Poly.from_dict(n_real,
                             {m: cc * two for m, cc in c[i][j].coeffs})
              for j in range(n_real))
        for i in range(n_real))
    drift = []
    for mu in range(n_real):
        total = Poly.zero(n_real) - b[mu]
        for nu in range(n_real):
            total = total + diffusion[nu][mu].derivative(nu)
        drift.append(total)

    # probability conservation fixes the zeroth-order term exactly
    check = Poly.zero(n_real)
    for mu in range(n_real):
        check = check - drift[mu].derivative(mu)
        for nu in range(n_real):
            dd = diffusion[mu][nu].derivative(mu).derivative(nu)
            check = check + Poly.from_dict(
                n_real, {m: cc / 2 for m, cc in dd.coeffs})
    if check != a:
        raise ValueError("generator is not in divergence form; "
                         "input Hamiltonian not Hermitian?")

    if convention == QuadratureConvention.OPERATOR_QUADRATURES:
        base = ("q", "p")
    else:
        base = ("x", "p")
    if n_modes == 1:
        names = base
    else:
        names = tuple(f"{b_}{k + 1}" for k in range(n_modes) for b_ in base)
    return PhaseSpacePDE(variables=tuple(names), drift=tuple(drift),
                         diffusion_matrix=diffusion, convention=convention)


def compile_hamiltonian(h: OperatorExpr,
                        convention: QuadratureConvention
                        = QuadratureConvention.OPERATOR_QUADRATURES
                        ) -> PhaseSpacePDE:
    """normal order -> differential generator -> real-coordinate PDE."""
    return to_phase_space_pde(commutator_action(h), convention)


def pretty_print(pde: PhaseSpacePDE) -> str:
    """Deterministic rendering, e.g. `dQ/dtau = [dp.p + dp^2 - dq.q - dq^2] Q`.

    Positive terms print before negative ones; within a sign group terms
    follow canonical coordinate order, drift before diffusion.
    """
    names = pde.variables
    n = len(names)
    entries = []  # (sign, group rank, text)
    for mu in range(n):
        drift = Poly.zero(n) - pde.drift[mu]  # printed as d_mu (-A^mu) Q
        for m, c in drift.coeffs:
            body = Poly.from_dict(n, {m: abs(c)}).format(names)
            entries.append((1 if c > 0 else -1, (mu, 0),
                            f"d{names[mu]}.{body}"))
    for mu in range(n):
        for nu in range(mu, n):
            p = pde.diffusion_matrix[mu][nu]
            if p.is_zero():
                continue
            for m, c in p.coeffs:
                scale = c / 2 if mu == nu else c  # both orderings of mu, nu
                dsym = f"d{names[mu]}^2" if mu == nu \
                    else f"d{names[mu]}.d{names[nu]}"
                mag = abs(scale)
                prefix = "" if (mag == 1 and sum(m) == 0) else \
                    (str(mag) + "*" if sum(m) == 0
                     else Poly.from_dict(n, {m: mag}).format(names) + "*")
                entries.append((1 if scale > 0 else -1, (mu, 1),
                                f"{prefix}{dsym}"))
    if not entries:
        return "dQ/dtau = 0"
    ordered = sorted(entries, key=lambda e: (0 if e[0] > 0 else 1, e[1]))
    text = ""
    for k, (sign, _, body) in enumerate(ordered):
        if k == 0:
            text = ("-" if sign < 0 else "") + body
        else:
            text += (" + " if sign > 0 else " - ") + body
    return f"dQ/dtau = [{text}] Q"
