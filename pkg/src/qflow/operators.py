"""Normal-ordered bosonic operator polynomials with exact rational coefficients.

Words are tuples of (mode, is_creation) symbols.  Canonical order puts every
creation operator left of the annihilation operators of the same mode, with
modes grouped in ascending order; operators of different modes commute.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Symbol = tuple[int, bool]  # (mode index, is_creation)
Word = tuple[Symbol, ...]

MODE_NAMES = ("a", "b")


class ParseError(Exception):
    """Hamiltonian text could not be parsed; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class RationalComplex:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other):
        return RationalComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return RationalComplex(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalComplex(self.re * other, self.im * other)
        return RationalComplex(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def conj(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    @classmethod
    def real(cls, value) -> "RationalComplex":
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def imag_unit(cls) -> "RationalComplex":
        return cls(Fraction(0), Fraction(1))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


RC_ZERO = RationalComplex()
RC_ONE = RationalComplex.real(1)
RC_I = RationalComplex.imag_unit()


def _sort_key(sym: Symbol):
    mode, dag = sym
    return (mode, 0 if dag else 1)


class OperatorExpr:
    """Finite sum of words with RationalComplex coefficients."""

    def __init__(self, terms: dict[Word, RationalComplex] | None = None):
        self.terms: dict[Word, RationalComplex] = {}
        if terms:
            for word, coef in terms.items():
                if not coef.is_zero():
                    self.terms[word] = coef

    # -- construction helpers -------------------------------------------
    @classmethod
    def monomial(cls, word: Word, coef: RationalComplex = RC_ONE):
        return cls({tuple(word): coef})

    @classmethod
    def zero(cls):
        return cls()

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        out = dict(self.terms)
        for word, coef in other.terms.items():
            out[word] = out.get(word, RC_ZERO) + coef
        return OperatorExpr(out)

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + other.scale(-RC_ONE)

    def scale(self, coef: RationalComplex) -> "OperatorExpr":
        return OperatorExpr({w: c * coef for w, c in self.terms.items()})

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        out: dict[Word, RationalComplex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                out[word] = out.get(word, RC_ZERO) + c1 * c2
        return OperatorExpr(out)

    def dagger(self) -> "OperatorExpr":
        out: dict[Word, RationalComplex] = {}
        for word, coef in self.terms.items():
            new = tuple((m, not d) for m, d in reversed(word))
            out[new] = out.get(new, RC_ZERO) + coef.conj()
        return OperatorExpr(out)

    def n_modes(self) -> int:
        modes = [m for word in self.terms for m, _ in word]
        return (max(modes) + 1) if modes else 1

    def max_degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_hermitian(self) -> bool:
        lhs = normal_order(self)
        rhs = normal_order(self.dagger())
        return lhs.terms == rhs.terms

    def __eq__(self, other):
        return isinstance(other, OperatorExpr) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "OperatorExpr(0)"
        parts = []
        for word in sorted(self.terms, key=lambda w: (len(w), w)):
            syms = "*".join(
                MODE_NAMES[m] + ("dag" if d else "") for m, d in word) or "1"
            parts.append(f"({self.terms[word]})*{syms}")
        return "OperatorExpr(" + " + ".join(parts) + ")"

    def to_matrix(self, dim: int):
        """Dense truncated-Fock matrix (single mode only); oracle cross-checks."""
        import numpy as np
        from . import fock_oracle
        if self.n_modes() != 1:
            raise ValueError("to_matrix supports single-mode expressions")
        a = fock_oracle.annihilation(dim)
        adag = a.conj().T
        out = np.zeros((dim, dim), dtype=complex)
        for word, coef in self.terms.items():
            m = np.eye(dim, dtype=complex)
            for _, dag in word:
                m = m @ (adag if dag else a)
            out += complex(coef) * m
        return out


def normal_order(expr: OperatorExpr) -> OperatorExpr:
    """Rewrite so creations sit left of annihilations per mode ([a, a_dag] = 1)."""
    out: dict[Word, RationalComplex] = {}
    stack = list(expr.terms.items())
    while stack:
        word, coef = stack.pop()
        for i in range(len(word) - 1):
            s1, s2 = word[i], word[i + 1]
            if _sort_key(s1) > _sort_key(s2):
                swapped = word[:i] + (s2, s1) + word[i + 2:]
                stack.append((swapped, coef))
                if s1[0] == s2[0]:  # a a_dag = a_dag a + 1
                    stack.append((word[:i] + word[i + 2:], coef))
                break
        else:
            acc = out.get(word, RC_ZERO) + coef
            if acc.is_zero():
                out.pop(word, None)
            else:
                out[word] = acc
    return OperatorExpr(out)


# ---------------------------------------------------------------------------
# Hamiltonian text grammar: terms like `0.5i*adag^2 - 0.5i*a^2`, modes a, b
# ---------------------------------------------------------------------------

def _parse_coefficient(text: str, offset: int) -> RationalComplex:
    imag = text.endswith("i")
    body = text[:-1] if imag else text
    if body in ("", "+"):
        frac = Fraction(1)
    elif body == "-":
        frac = Fraction(-1)
    else:
        try:
            frac = Fraction(body)
        except ValueError:
            raise ParseError(f"bad number {body!r}", offset) from None
    return RationalComplex(Fraction(0), frac) if imag \
        else RationalComplex(frac, Fraction(0))


def parse_hamiltonian(text: str) -> OperatorExpr:
    """Parse the textual Hamiltonian grammar into an OperatorExpr."""
    import re
    token_re = re.compile(r"\s*(adag|bdag|a|b|\d+\.?\d*i?|\.\d+i?|i|\^|\*|\+|-)")
    pos = 0
    tokens: list[tuple[str, int]] = []
    while pos < len(text):
        m = token_re.match(text, pos)
        if not m or not m.group(1):
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(text) - len(stripped))
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()

    if not tokens:
        raise ParseError("empty Hamiltonian", 0)

    expr = OperatorExpr.zero()
    i = 0
    n = len(tokens)
    while i < n:
        sign = RC_ONE
        while i < n and tokens[i][0] in "+-":
            if tokens[i][0] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise ParseError("dangling sign", tokens[-1][1])
        coef = sign
        word: list[Symbol] = []
        expect_factor = True
        while i < n and tokens[i][0] not in "+-":
            tok, off = tokens[i]
            if tok == "*":
                if expect_factor:
                    raise ParseError("unexpected '*'", off)
                expect_factor = True
                i += 1
                continue
            if not expect_factor:
                raise ParseError(f"missing operator before {tok!r}", off)
            if tok in ("a", "b", "adag", "bdag"):
                mode = 0 if tok[0] == "a" else 1
                dag = tok.endswith("dag")
                power = 1
                if i + 1 < n and tokens[i + 1][0] == "^":
                    if i + 2 >= n or not tokens[i + 2][0].isdigit():
                        raise ParseError("expected integer power",
                                         tokens[i + 1][1])
                    power = int(tokens[i + 2][0])
                    i += 2
                word.extend([(mode, dag)] * power)
            elif tok == "^":
                raise ParseError("unexpected '^'", off)
            else:
                coef = coef * _parse_coefficient(tok, off)
            expect_factor = False
            i += 1
        if expect_factor:
            raise ParseError("dangling '*'", tokens[i - 1][1])
        expr = expr + OperatorExpr.monomial(tuple(word), coef)
    return expr
