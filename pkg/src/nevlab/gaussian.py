"""Exact Gaussian-rational scalars and small exact linear algebra.

Certification paths (vanishing orders, linear independence, stratum ranks)
must not depend on floating point, so divisor coefficients and section
bases are kept over Q(i): numbers a + b*i with a, b rational. The class
is deliberately small; it only has to support field arithmetic, hashing
and conversion to complex.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """A number a + b*i with exact rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    # -- field arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) + other
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) - other
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) * other
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) / other
        o = GaussianRational.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|x|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # -- predicates / conversions ---------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            o = GaussianRational.coerce(other)
            return self.re == o.re and self.im == o.im
        if isinstance(other, (float, complex)):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)


def qi(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


# -- exact linear algebra over Q(i) -------------------------------------------


def _as_matrix(rows: Iterable[Sequence]) -> list:
    return [[GaussianRational.coerce(x) for x in row] for row in rows]


def exact_rank(rows: Iterable[Sequence]) -> int:
    """Rank of a matrix over Q(i) by fraction-free-ish Gaussian elimination."""
    m = _as_matrix(rows)
    if not m:
        return 0
    nrow, ncol = len(m), len(m[0])
    rank = 0
    col = 0
    for col in range(ncol):
        piv = None
        for r in range(rank, nrow):
            if not m[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col]
        for r in range(rank + 1, nrow):
            if m[r][col].is_zero():
                continue
            factor = m[r][col] / inv
            for c in range(col, ncol):
                m[r][c] = m[r][c] - factor * m[rank][c]
        rank += 1
        if rank == nrow:
            break
    return rank


def exact_det(rows: Sequence[Sequence]) -> GaussianRational:
    """Determinant of a square matrix over Q(i)."""
    m = _as_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    det = QI_ONE
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not m[r][col].is_zero():
                piv = r
                break
        if piv is None:
            return QI_ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            factor = m[r][col] / inv
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


def exact_nullspace_vector(rows: Sequence[Sequence], ncols: int):
    """One nonzero kernel vector of the matrix over Q(i), or None if injective.

    Used to produce witness points of linear strata. Reduced row echelon
    over the exact field, then back-substitution with a free variable set
    to 1.
    """
    m = _as_matrix(rows)
    nrow = len(m)
    pivots = {}
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrow):
            if not m[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col]
        m[rank] = [x / inv for x in m[rank]]
        for r in range(nrow):
            if r != rank and not m[r][col].is_zero():
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        pivots[col] = rank
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    vec = [QI_ZERO] * ncols
    f = free[0]
    vec[f] = QI_ONE
    for col, r in pivots.items():
        vec[col] = -m[r][f]
    return vec
