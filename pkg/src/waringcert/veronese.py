"""Tangent geometry of the degree-d power map at a claimed decomposition.

The tangent space to the variety of d-th powers at l^d is spanned by
x_0 l^(d-1), ..., x_n l^(d-1).  Stacking those coefficient vectors for
all r points gives the span matrix T; the right kernel of T consists of
the linear functionals cutting out the span M of the tangent spaces.

Convention: T holds plain polynomial coefficients, so a kernel vector k
pairs with plain coefficient vectors.  Read as a polynomial in the
point coordinates, the functional q(y) = sum_alpha k_alpha *
multinomial(d; alpha) * y^alpha vanishes exactly on the powers lying in
M, and its gradient vanishes at each decomposition point.
contact_equations therefore returns the multinomially reweighted kernel
vectors; their stacked second-derivative matrices at a point a then
satisfy H^k a = 0, so rank H <= n always, with equality exactly when
the tangential contact locus is zero-dimensional at that point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .exactlinalg import (
    ExactMatrix,
    Field,
    Scalar,
    integerize,
    require_same_field,
)
from .polyring import (
    LinearForm,
    SymTensor,
    expand_power,
    monomial_basis,
    monomial_rank,
    multinomial,
)

__all__ = [
    "ContactEquations",
    "SpanBudgetError",
    "StackedHessian",
    "TangentSpan",
    "WaringInput",
    "build_span",
    "contact_equations",
    "contact_zero_dimensional",
    "stacked_hessian",
    "tangent_matrix",
]


class SpanBudgetError(ValueError):
    """Raised when r(n+1) exceeds the ambient dimension: rank budget exceeded."""


@dataclass(frozen=True)
class WaringInput:
    """A claimed decomposition sum_i w_i * (a_i . x)^d with r weighted forms."""

    n: int
    d: int
    terms: tuple[tuple[Scalar, LinearForm], ...]

    def __post_init__(self) -> None:
        if self.d < 3:
            raise ValueError("degree must be at least 3")
        if not self.terms:
            raise ValueError("need at least one term")
        field = self.terms[0][1].field
        norm = []
        for w, form in self.terms:
            require_same_field(field, form.field)
            if form.n != self.n:
                raise ValueError("form has wrong number of variables")
            w = field.normalize(w)
            if field.is_zero(w):
                raise ValueError("weights must be nonzero")
            norm.append((w, form))
        object.__setattr__(self, "terms", tuple(norm))

    @property
    def field(self) -> Field:
        return self.terms[0][1].field

    @property
    def r(self) -> int:
        return len(self.terms)

    def forms(self) -> tuple[LinearForm, ...]:
        return tuple(form for _, form in self.terms)

    def tensor(self) -> SymTensor:
        """The represented form sum_i w_i * expand_power(l_i, d)."""
        total = SymTensor.zero(self.field, self.n, self.d)
        for w, form in self.terms:
            total = total.add(expand_power(form, self.d).scale(w))
        return total


@dataclass(frozen=True)
class TangentSpan:
    """Stacked tangent matrix: one row per tangent basis vector, r(n+1) rows."""

    n: int
    d: int
    r: int
    matrix: ExactMatrix

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def transposed_shape(self) -> tuple[int, int]:
        m, n = self.matrix.shape
        return (n, m)

    def rank(self) -> int:
        return self.matrix.rank()

    @property
    def expected_rank(self) -> int:
        return self.r * (self.n + 1)


@dataclass(frozen=True)
class ContactEquations:
    """Equations of the tangent span as plain-coefficient degree-d forms."""

    n: int
    d: int
    equations: tuple[tuple[Scalar, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.equations)


@dataclass(frozen=True)
class StackedHessian:
    """Horizontal stack of the Hessians of all contact equations at one point."""

    n: int
    ell: int
    point: tuple[Scalar, ...]
    matrix: ExactMatrix

    def rank(self) -> int:
        return self.matrix.rank()


def tangent_matrix(form: LinearForm, d: int) -> ExactMatrix:
    """binom(n+d,d) x (n+1) matrix whose column j holds coeffs of x_j * l^(d-1)."""
    n = form.n
    f = form.field
    low = expand_power(form, d - 1)
    basis_lo = monomial_basis(n, d - 1)
    nrows = comb(n + d, d)
    cols: list[list[Scalar]] = [[f.zero()] * (n + 1) for _ in range(nrows)]
    for beta, c in zip(basis_lo, low.coeffs):
        for j in range(n + 1):
            alpha = list(beta)
            alpha[j] += 1
            cols[monomial_rank(alpha, n, d)][j] = c
    return ExactMatrix.from_rows(f, cols)


def _tangent_rows(form: LinearForm, d: int) -> list[list[Scalar]]:
    n = form.n
    f = form.field
    low = expand_power(form, d - 1)
    basis_lo = monomial_basis(n, d - 1)
    ncols = comb(n + d, d)
    rows = [[f.zero()] * ncols for _ in range(n + 1)]
    for beta, c in zip(basis_lo, low.coeffs):
        for j in range(n + 1):
            alpha = list(beta)
            alpha[j] += 1
            rows[j][monomial_rank(alpha, n, d)] = c
    return rows


def build_span(w: WaringInput) -> TangentSpan:
    """Stack the per-point tangent matrices (transposed) into the span matrix."""
    ncols = comb(w.n + w.d, w.d)
    if w.r * (w.n + 1) > ncols:
        raise SpanBudgetError(
            f"rank budget exceeded: r(n+1) = {w.r * (w.n + 1)} > {ncols} = dim S^d"
        )
    rows: list[list[Scalar]] = []
    for _, form in w.terms:
        rows.extend(_tangent_rows(form, w.d))
    return TangentSpan(w.n, w.d, w.r, ExactMatrix.from_rows(w.field, rows))


def contact_equations(span: TangentSpan) -> ContactEquations:
    """Kernel of the span matrix, reweighted into plain-coefficient dual forms."""
    n, d = span.n, span.d
    field = span.matrix.field
    basis = monomial_basis(n, d)
    kernel = span.matrix.kernel_basis()
    eqs = []
    for k in kernel:
        if field.is_prime_field:
            p = field.p
            q = tuple(int(v) * multinomial(d, alpha) % p for v, alpha in zip(k, basis))
        else:
            q = integerize(v * multinomial(d, alpha) for v, alpha in zip(k, basis))
        eqs.append(q)
    return ContactEquations(n, d, tuple(eqs))


def _hessian_block(
    field: Field,
    coeffs: Sequence[Scalar],
    point_pows: list[list[Scalar]],
    n: int,
    d: int,
) -> list[list[Scalar]]:
    block = [[field.zero()] * (n + 1) for _ in range(n + 1)]
    for alpha, c in zip(monomial_basis(n, d), coeffs):
        if field.is_zero(c):
            continue
        support = [t for t, e in enumerate(alpha) if e]
        for i in support:
            for j in support:
                f = alpha[i] * (alpha[j] - (1 if i == j else 0))
                if f == 0:
                    continue
                e = list(alpha)
                e[i] -= 1
                e[j] -= 1
                v = field.mul(c, field.normalize(f))
                for t in support:
                    if e[t]:
                        v = field.mul(v, point_pows[t][e[t]])
                block[i][j] = field.add(block[i][j], v)
    return block


def stacked_hessian(eqs: ContactEquations, form: LinearForm) -> StackedHessian:
    """Second derivatives of every contact equation, evaluated at the form's
    coefficient vector and stacked horizontally into an (n+1) x ell(n+1) matrix."""
    if not eqs.equations:
        raise ValueError("no contact equations to differentiate")
    n, d = eqs.n, eqs.d
    f = form.field
    point = form.coeffs
    pows = [[f.one()] for _ in point]
    for t, xv in enumerate(point):
        for _ in range(max(d - 2, 0)):
            pows[t].append(f.mul(pows[t][-1], xv))
    blocks = [
        ExactMatrix.from_rows(f, _hessian_block(f, q, pows, n, d)) for q in eqs.equations
    ]
    return StackedHessian(n, eqs.ell, point, ExactMatrix.hstack(blocks))


def contact_zero_dimensional(h: StackedHessian, n: int) -> bool:
    """True iff rank H = n, i.e. the contact locus is zero-dimensional there."""
    return h.rank() == n
