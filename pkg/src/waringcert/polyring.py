"""Monomial bookkeeping for degree-d forms in n+1 variables.

A form of degree d in x_0..x_n is stored as its vector of plain
polynomial coefficients (no multinomial normalization), one entry per
degree-d exponent vector.  The global monomial order is graded colex:
alpha precedes beta when alpha is smaller at the last index where they
differ.  Every matrix in the pipeline shares this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Sequence

from .exactlinalg import Field, Scalar, require_same_field

__all__ = [
    "LinearForm",
    "SymTensor",
    "evaluate",
    "expand_power",
    "monomial_basis",
    "monomial_rank",
    "monomial_unrank",
    "multinomial",
    "partial_derivative",
]


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of total degree d in n+1 variables, graded colex."""
    if n < 0 or d < 0:
        raise ValueError("need n >= 0 and d >= 0")
    mons = []
    for combo in combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for i in combo:
            e[i] += 1
        mons.append(tuple(e))
    mons.sort(key=lambda a: tuple(reversed(a)))
    return tuple(mons)


@lru_cache(maxsize=None)
def _rank_table(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomial_basis(n, d))}


def monomial_rank(alpha: Sequence[int], n: int, d: int) -> int:
    key = tuple(alpha)
    if len(key) != n + 1 or any(a < 0 for a in key) or sum(key) != d:
        raise ValueError(f"{key} is not a degree-{d} exponent vector in {n + 1} variables")
    return _rank_table(n, d)[key]


def monomial_unrank(index: int, n: int, d: int) -> tuple[int, ...]:
    basis = monomial_basis(n, d)
    if not 0 <= index < len(basis):
        raise IndexError(f"monomial index {index} out of range 0..{len(basis) - 1}")
    return basis[index]


def multinomial(d: int, alpha: Sequence[int]) -> int:
    """d! / prod(alpha_i!), the coefficient of x^alpha in (x_0+...+x_n)^d."""
    out = factorial(d)
    for a in alpha:
        out //= factorial(a)
    return out


@dataclass(frozen=True)
class LinearForm:
    """A nonzero linear form a_0 x_0 + ... + a_n x_n over an exact field."""

    field: Field
    coeffs: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        norm = tuple(self.field.normalize(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", norm)
        if all(self.field.is_zero(c) for c in norm):
            raise ValueError("linear form must not be identically zero")

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class SymTensor:
    """Degree-d form in n+1 variables: plain coefficients in graded colex order."""

    field: Field
    n: int
    d: int
    coeffs: tuple[Scalar, ...]

    def __post_init__(self) -> None:
        expected = comb(self.n + self.d, self.d)
        if len(self.coeffs) != expected:
            raise ValueError(f"expected {expected} coefficients, got {len(self.coeffs)}")
        norm = tuple(self.field.normalize(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", norm)

    @classmethod
    def zero(cls, field: Field, n: int, d: int) -> "SymTensor":
        return cls(field, n, d, tuple([field.zero()] * comb(n + d, d)))

    def coefficient(self, alpha: Sequence[int]) -> Scalar:
        return self.coeffs[monomial_rank(alpha, self.n, self.d)]

    def add(self, other: "SymTensor") -> "SymTensor":
        require_same_field(self.field, other.field)
        if (self.n, self.d) != (other.n, other.d):
            raise ValueError("degree or variable count mismatch")
        f = self.field
        return SymTensor(f, self.n, self.d, tuple(f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: Scalar) -> "SymTensor":
        f = self.field
        c = f.normalize(c)
        return SymTensor(f, self.n, self.d, tuple(f.mul(c, a) for a in self.coeffs))


def expand_power(form: LinearForm, d: int) -> SymTensor:
    """Coefficient vector of (a_0 x_0 + ... + a_n x_n)^d.

    The coefficient of x^alpha is multinomial(d; alpha) * prod a_i^alpha_i.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    f = form.field
    n = form.n
    basis = monomial_basis(n, d)
    out = []
    for alpha in basis:
        v = f.normalize(multinomial(d, alpha))
        for a, e in zip(form.coeffs, alpha):
            if e:
                v = f.mul(v, f.pow(a, e))
        out.append(v)
    return SymTensor(f, n, d, tuple(out))


def partial_derivative(p: SymTensor, j: int) -> SymTensor:
    """Formal partial derivative with respect to x_j; degree drops by one."""
    if p.d < 1:
        raise ValueError("cannot differentiate a degree-0 form")
    if not 0 <= j <= p.n:
        raise IndexError(f"variable index {j} out of range")
    f = p.field
    basis_lo = monomial_basis(p.n, p.d - 1)
    table_hi = _rank_table(p.n, p.d)
    out = []
    for beta in basis_lo:
        alpha = list(beta)
        alpha[j] += 1
        c = p.coeffs[table_hi[tuple(alpha)]]
        out.append(f.mul(f.normalize(alpha[j]), c))
    return SymTensor(f, p.n, p.d - 1, tuple(out))


def evaluate(p: SymTensor, x: Sequence[Scalar]) -> Scalar:
    """Value of p at a point with n+1 coordinates."""
    if len(x) != p.n + 1:
        raise ValueError(f"point must have {p.n + 1} coordinates")
    f = p.field
    xs = [f.normalize(c) for c in x]
    # per-variable power tables up to degree d
    pows = [[f.one()] for _ in xs]
    for t, xv in enumerate(xs):
        for _ in range(p.d):
            pows[t].append(f.mul(pows[t][-1], xv))
    total = f.zero()
    for alpha, c in zip(monomial_basis(p.n, p.d), p.coeffs):
        if f.is_zero(c):
            continue
        v = c
        for t, e in enumerate(alpha):
            if e:
                v = f.mul(v, pows[t][e])
        total = f.add(total, v)
    return total
