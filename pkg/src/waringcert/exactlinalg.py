"""Exact scalar arithmetic and dense exact linear algebra.

Two scalar domains are supported and never mixed inside one matrix:

* a prime field F_p (p an odd prime; residues stored as Python ints in
  [0, p), matrices as numpy int64 arrays), and
* the rationals (stdlib ``fractions.Fraction``).

All eliminations use fixed first-nonzero pivoting, so identical inputs
give bit-identical outputs.  Prime-field row updates only ever form a
single product of two residues below 2^31 per entry, which fits in
int64; matrix products are accumulated in pairs for the same reason.
Rational ranks go through fraction-free Bareiss elimination on
denominator-cleared rows; rational kernels use Fraction Gauss-Jordan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "DEFAULT_PRIME",
    "QQ",
    "ExactMatrix",
    "FieldMismatchError",
    "PrimeField",
    "RationalField",
    "complement_of_column_space",
    "kernel_basis",
    "rank",
]

# Largest prime below 2^31 (the Mersenne prime 2^31 - 1).  Default
# modulus for all randomized runs; overridable everywhere a field or
# prime parameter is accepted.
DEFAULT_PRIME = 2_147_483_647

Scalar = Union[int, Fraction]


class FieldMismatchError(ValueError):
    """Raised when scalars or matrices over different fields are combined."""


def _is_probable_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3e24 with the standard base set.
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for an odd prime p."""

    p: int

    def __post_init__(self) -> None:
        if self.p <= 2 or not _is_probable_prime(self.p):
            raise ValueError(f"modulus must be an odd prime, got {self.p}")

    @property
    def name(self) -> str:
        return f"prime:{self.p}"

    @property
    def is_prime_field(self) -> bool:
        return True

    def normalize(self, x: Scalar) -> int:
        if isinstance(x, Fraction):
            num, den = x.numerator, x.denominator
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        return pow(a % self.p, e, self.p)

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0


class RationalField:
    """The rationals, with exact Fraction arithmetic.  Use the QQ singleton."""

    name = "rational"
    is_prime_field = False

    def normalize(self, x: Scalar) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return Fraction(a) / b

    def pow(self, a, e: int):
        return Fraction(a) ** e

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def is_zero(self, a) -> bool:
        return a == 0

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()

Field = Union[PrimeField, RationalField]


def same_field(a: Field, b: Field) -> bool:
    if a.is_prime_field != b.is_prime_field:
        return False
    if a.is_prime_field:
        return a.p == b.p  # type: ignore[union-attr]
    return True


def require_same_field(a: Field, b: Field) -> None:
    if not same_field(a, b):
        raise FieldMismatchError(f"cannot mix scalars of {a.name} and {b.name}")


# ---------------------------------------------------------------------------
# prime-field eliminations (numpy int64)
# ---------------------------------------------------------------------------


def _rref_gf(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy() % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        rows = np.nonzero(a[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rank_gf(a: np.ndarray, p: int) -> int:
    # Forward elimination only; cheaper than full RREF for rank queries.
    a = a.copy() % p
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        below = a[r + 1 :, c]
        nzb = np.nonzero(below)[0]
        if nzb.size:
            rows = nzb + r + 1
            mult = a[rows, c] * inv % p
            a[rows, c:] = (a[rows, c:] - mult[:, None] * (a[r, c:] % p)) % p
        r += 1
    return r


def matmul_gf(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p without int64 overflow: partial sums of two products."""
    m, k = a.shape
    out = np.zeros((m, b.shape[1]), dtype=np.int64)
    for s in range(0, k, 2):
        out = (out + a[:, s : s + 2] @ b[s : s + 2, :]) % p
    return out


# ---------------------------------------------------------------------------
# rational eliminations
# ---------------------------------------------------------------------------


def _rref_qq(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(row) for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        pr = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def bareiss_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank of an integer matrix by one-step fraction-free elimination."""
    m_rows = [list(map(int, row)) for row in rows]
    m = len(m_rows)
    if m == 0:
        return 0
    n = len(m_rows[0])
    rank_ = 0
    prev = 1
    for c in range(n):
        pr = next((i for i in range(rank_, m) if m_rows[i][c] != 0), None)
        if pr is None:
            continue
        if pr != rank_:
            m_rows[rank_], m_rows[pr] = m_rows[pr], m_rows[rank_]
        piv = m_rows[rank_][c]
        prow = m_rows[rank_]
        for i in range(rank_ + 1, m):
            row_i = m_rows[i]
            f = row_i[c]
            for j in range(c + 1, n):
                row_i[j] = (piv * row_i[j] - f * prow[j]) // prev
            row_i[c] = 0
        prev = piv
        rank_ += 1
        if rank_ == m:
            break
    return rank_


def _clear_denominators(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


# ---------------------------------------------------------------------------
# the matrix type
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Dense matrix over one exact field, with rank/kernel/annihilator ops.

    Prime-field data lives in a numpy int64 array of residues; rational
    data in nested lists of Fractions.  Instances are treated as
    immutable.
    """

    __slots__ = ("field", "_gf", "_qq", "_shape")

    def __init__(self, field: Field, data, _internal: bool = False):
        self.field = field
        if field.is_prime_field:
            arr = np.asarray(data, dtype=np.int64)
            if arr.ndim != 2:
                raise ValueError("matrix data must be two-dimensional")
            self._gf = arr % field.p if not _internal else arr
            self._qq = None
            self._shape = arr.shape
        else:
            rows = [[field.normalize(x) for x in row] for row in data]
            if rows and any(len(r) != len(rows[0]) for r in rows):
                raise ValueError("ragged rows")
            self._gf = None
            self._qq = rows
            self._shape = (len(rows), len(rows[0]) if rows else 0)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows) -> "ExactMatrix":
        if field.is_prime_field:
            norm = [[field.normalize(x) for x in row] for row in rows]
            arr = np.array(norm, dtype=np.int64) if norm else np.zeros((0, 0), dtype=np.int64)
            if arr.ndim == 1:
                arr = arr.reshape(len(norm), 0)
            return cls(field, arr, _internal=True)
        return cls(field, rows)

    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> "ExactMatrix":
        if field.is_prime_field:
            return cls(field, np.zeros((m, n), dtype=np.int64), _internal=True)
        return cls(field, [[0] * n for _ in range(m)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "ExactMatrix":
        if field.is_prime_field:
            return cls(field, np.eye(n, dtype=np.int64), _internal=True)
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def vstack(cls, mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        if not mats:
            raise ValueError("nothing to stack")
        field = mats[0].field
        for m in mats[1:]:
            require_same_field(field, m.field)
        if field.is_prime_field:
            return cls(field, np.vstack([m._gf for m in mats]), _internal=True)
        rows: list[list[Fraction]] = []
        for m in mats:
            rows.extend(m._qq)  # type: ignore[arg-type]
        return cls(field, rows)

    @classmethod
    def hstack(cls, mats: Sequence["ExactMatrix"]) -> "ExactMatrix":
        if not mats:
            raise ValueError("nothing to stack")
        field = mats[0].field
        for m in mats[1:]:
            require_same_field(field, m.field)
        if field.is_prime_field:
            return cls(field, np.hstack([m._gf for m in mats]), _internal=True)
        rows = []
        for i in range(mats[0].nrows):
            row: list[Fraction] = []
            for m in mats:
                row.extend(m._qq[i])  # type: ignore[index]
            rows.append(row)
        return cls(field, rows)

    # -- basic accessors ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return tuple(self._shape)  # type: ignore[return-value]

    @property
    def nrows(self) -> int:
        return self._shape[0]

    @property
    def ncols(self) -> int:
        return self._shape[1]

    def entry(self, i: int, j: int) -> Scalar:
        if self.field.is_prime_field:
            return int(self._gf[i, j])
        return self._qq[i][j]

    def row(self, i: int):
        if self.field.is_prime_field:
            return self._gf[i].copy()
        return tuple(self._qq[i])

    def to_lists(self) -> list[list[Scalar]]:
        if self.field.is_prime_field:
            return [[int(x) for x in row] for row in self._gf]
        return [list(row) for row in self._qq]

    def gf_array(self) -> np.ndarray:
        if not self.field.is_prime_field:
            raise FieldMismatchError("not a prime-field matrix")
        return self._gf

    def transpose(self) -> "ExactMatrix":
        if self.field.is_prime_field:
            return ExactMatrix(self.field, self._gf.T.copy(), _internal=True)
        m, n = self.shape
        return ExactMatrix(self.field, [[self._qq[i][j] for i in range(m)] for j in range(n)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix) or not same_field(self.field, other.field):
            return False
        if self.shape != other.shape:
            return False
        if self.field.is_prime_field:
            return bool(np.array_equal(self._gf, other._gf))
        return self._qq == other._qq

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field.name}, {self.nrows}x{self.ncols})"

    # -- linear algebra -----------------------------------------------------

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        if self.field.is_prime_field:
            return _rank_gf(self._gf, self.field.p)
        ints = [_clear_denominators(row) for row in self._qq]
        return bareiss_rank(ints)

    def rref(self) -> tuple["ExactMatrix", tuple[int, ...]]:
        if self.field.is_prime_field:
            r, piv = _rref_gf(self._gf, self.field.p)
            return ExactMatrix(self.field, r, _internal=True), tuple(piv)
        r, piv = _rref_qq(self._qq)
        return ExactMatrix(self.field, r), tuple(piv)

    def kernel_basis(self):
        """Right-kernel basis vectors, in the canonical RREF-derived form.

        Returns cols - rank vectors v with A v = 0: one per free column f,
        with v[f] = 1 and v[pivot col] = -R[pivot row, f].
        """
        m, n = self.shape
        if n == 0:
            return []
        if m == 0:
            if self.field.is_prime_field:
                return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
            return [tuple(Fraction(1) if j == i else Fraction(0) for j in range(n)) for i in range(n)]
        if self.field.is_prime_field:
            p = self.field.p
            red, piv = _rref_gf(self._gf, p)
            free = [c for c in range(n) if c not in piv]
            out = []
            for f in free:
                v = np.zeros(n, dtype=np.int64)
                v[f] = 1
                for i, c in enumerate(piv):
                    v[c] = (-red[i, f]) % p
                out.append(v)
            return out
        red, piv = _rref_qq(self._qq)
        pivset = set(piv)
        free = [c for c in range(n) if c not in pivset]
        out = []
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for i, c in enumerate(piv):
                v[c] = -red[i][f]
            out.append(tuple(v))
        return out

    def left_kernel_basis(self):
        """Vectors l with l^T A = 0; they span the annihilator of the column space."""
        return self.transpose().kernel_basis()

    def mul_vector(self, v):
        if self.field.is_prime_field:
            p = self.field.p
            vv = np.asarray(v, dtype=np.int64) % p
            return matmul_gf(self._gf, vv.reshape(-1, 1), p).reshape(-1)
        out = []
        for row in self._qq:
            out.append(sum((a * Fraction(b) for a, b in zip(row, v)), Fraction(0)))
        return tuple(out)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        require_same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        if self.field.is_prime_field:
            return ExactMatrix(self.field, matmul_gf(self._gf, other._gf, self.field.p), _internal=True)
        m, k = self.shape
        n = other.ncols
        rows = []
        for i in range(m):
            row = []
            for j in range(n):
                row.append(sum((self._qq[i][t] * other._qq[t][j] for t in range(k)), Fraction(0)))
            rows.append(row)
        return ExactMatrix(self.field, rows)


# -- spec-level operation aliases -------------------------------------------


def rank(a: ExactMatrix) -> int:
    return a.rank()


def kernel_basis(a: ExactMatrix):
    return a.kernel_basis()


def complement_of_column_space(a: ExactMatrix):
    """Annihilator of image(A): the left kernel (basis-independent complement)."""
    return a.left_kernel_basis()


def integerize(vec) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers (sign of first nonzero kept)."""
    fracs = [Fraction(x) for x in vec]
    den = 1
    for x in fracs:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)
