"""Exact scalars and dense exact linear algebra over Q and GF(p).

Scalars are `fractions.Fraction` over the rationals and plain ints reduced
to [0, p) over a prime field. A :class:`FieldSpec` owns the arithmetic;
matrices carry their field and refuse to mix fields. Vectors are plain
tuples and are always column vectors: maps act on the left, so composing
"f then g" is the matrix product ``g @ f``.

Everything here is immutable and pure. There is no floating point anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Scalar = Union[Fraction, int]
Vector = "tuple[Scalar, ...]"


class FieldMismatchError(ValueError):
    """Operands live over different fields."""


class DimensionError(ValueError):
    """Shapes do not line up."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (the fixed base set covers n < 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (``p is None``) or the prime field GF(p) with p < 2**61."""

    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if not 2 <= self.p < 2**61:
                raise ValueError(f"modulus out of range: {self.p}")
            if not is_prime(self.p):
                raise ValueError(f"modulus {self.p} is not prime")

    def __repr__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def coerce(self, x) -> Scalar:
        """Normalize an int, string or Fraction into this field."""
        if isinstance(x, str):
            x = Fraction(x)
        elif isinstance(x, int):
            x = Fraction(x)
        if not isinstance(x, Fraction):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        if self.p is None:
            return x
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"{x} has no image in {self}")
        return x.numerator * pow(den, self.p - 2, self.p) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.p is None else a * b % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p is None else -a % self.p

    def inv(self, a: Scalar) -> Scalar:
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / a
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def format(self, a: Scalar) -> str:
        if self.p is None:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def zero_vector(field: FieldSpec, n: int) -> tuple:
    return (field.zero,) * n


def unit_vector(field: FieldSpec, n: int, i: int) -> tuple:
    return tuple(field.one if j == i else field.zero for j in range(n))


def vec_add(field: FieldSpec, u: Sequence, v: Sequence) -> tuple:
    return tuple(field.add(a, b) for a, b in zip(u, v, strict=True))


def vec_sub(field: FieldSpec, u: Sequence, v: Sequence) -> tuple:
    return tuple(field.sub(a, b) for a, b in zip(u, v, strict=True))


def vec_neg(field: FieldSpec, u: Sequence) -> tuple:
    return tuple(field.neg(a) for a in u)


def vec_scale(field: FieldSpec, c: Scalar, u: Sequence) -> tuple:
    return tuple(field.mul(c, a) for a in u)


def vec_is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


@dataclass(frozen=True)
class Matrix:
    """Dense exact matrix; ``entries`` is a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple
    field: FieldSpec

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entry grid does not match declared shape")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], field: FieldSpec) -> "Matrix":
        ent = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        ncols = len(ent[0]) if ent else 0
        return cls(len(ent), ncols, ent, field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: FieldSpec, nrows: Optional[int] = None) -> "Matrix":
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        ent = tuple(tuple(field.coerce(col[i]) for col in columns) for i in range(nrows))
        return cls(nrows, len(columns), ent, field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "Matrix":
        return cls(n, n, tuple(unit_vector(field, n, i) for i in range(n)), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "Matrix":
        return cls(rows, cols, tuple(zero_vector(field, cols) for _ in range(rows)), field)

    # -- views ---------------------------------------------------------

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> "list[tuple]":
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)), self.field)

    # -- arithmetic ----------------------------------------------------

    def _same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("matrix addition shape mismatch")
        f = self.field
        ent = tuple(tuple(f.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        return Matrix(self.rows, self.cols, ent, f)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(self.rows, self.cols, tuple(tuple(f.neg(a) for a in r) for r in self.entries), f)

    def scale(self, c: Scalar) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(self.rows, self.cols, tuple(tuple(f.mul(c, a) for a in r) for r in self.entries), f)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        ocols = list(zip(*other.entries)) if other.entries else [()] * 0
        ent = []
        for r in self.entries:
            out_row = []
            for c in range(other.cols):
                acc = f.zero
                col = ocols[c] if ocols else ()
                for a, b in zip(r, col):
                    acc = f.add(acc, f.mul(a, b))
                out_row.append(acc)
            ent.append(tuple(out_row))
        return Matrix(self.rows, other.cols, tuple(ent), f)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} against {self.rows}x{self.cols}")
        f = self.field
        return tuple(
            sum_scalars(f, (f.mul(a, b) for a, b in zip(r, v))) for r in self.entries
        )

    # -- elimination ---------------------------------------------------

    def rref(self) -> "tuple[Matrix, tuple[int, ...]]":
        """Reduced row echelon form with first-nonzero pivoting.

        Deterministic: no pivot heuristics are needed in exact arithmetic.
        """
        f = self.field
        m = [list(r) for r in self.entries]
        pivots = []
        pr = 0
        for pc in range(self.cols):
            found = None
            for i in range(pr, self.rows):
                if m[i][pc] != 0:
                    found = i
                    break
            if found is None:
                continue
            m[pr], m[found] = m[found], m[pr]
            inv = f.inv(m[pr][pc])
            m[pr] = [f.mul(inv, x) for x in m[pr]]
            for i in range(self.rows):
                if i != pr and m[i][pc] != 0:
                    c = m[i][pc]
                    m[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(m[i], m[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.rows:
                break
        return Matrix(self.rows, self.cols, tuple(tuple(r) for r in m), f), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "list[tuple]":
        """Basis of the null space; one vector per free column, in column order."""
        red, pivots = self.rref()
        f = self.field
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            v = [f.zero] * self.cols
            v[free] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.entries[r][free])
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Sequence) -> Optional[tuple]:
        """Some x with self @ x = rhs (free variables 0), or None if inconsistent."""
        sols = self.solve_matrix(Matrix.from_columns([tuple(rhs)], self.field, nrows=self.rows))
        return sols.column(0) if sols is not None else None

    def solve_matrix(self, rhs: "Matrix") -> "Optional[Matrix]":
        """Columnwise solve with a single elimination; None if any column is inconsistent."""
        self._same_field(rhs)
        if rhs.rows != self.rows:
            raise DimensionError("right-hand side row count mismatch")
        aug = hstack(self, rhs)
        red, pivots = aug.rref()
        f = self.field
        main_pivots = [pc for pc in pivots if pc < self.cols]
        if len(main_pivots) < len(pivots):
            return None
        sol = [[f.zero] * rhs.cols for _ in range(self.cols)]
        for r, pc in enumerate(main_pivots):
            for j in range(rhs.cols):
                sol[pc][j] = red.entries[r][self.cols + j]
        return Matrix(self.cols, rhs.cols, tuple(tuple(r) for r in sol), f)

    def invert(self) -> "Optional[Matrix]":
        if not self.is_square:
            raise DimensionError("inverse of a non-square matrix")
        red, pivots = hstack(self, Matrix.identity(self.rows, self.field)).rref()
        if len(pivots) < self.rows or any(pc >= self.cols for pc in pivots):
            return None
        ent = tuple(r[self.cols:] for r in red.entries)
        return Matrix(self.rows, self.rows, ent, self.field)

    def left_inverse(self) -> "Optional[Matrix]":
        """L with L @ self = identity; exists iff the columns are independent."""
        red, pivots = hstack(self, Matrix.identity(self.rows, self.field)).rref()
        if len([pc for pc in pivots if pc < self.cols]) < self.cols:
            return None
        ent = tuple(red.entries[i][self.cols:] for i in range(self.cols))
        return Matrix(self.cols, self.rows, ent, self.field)

    def det(self) -> Scalar:
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        f = self.field
        m = [list(r) for r in self.entries]
        n = self.rows
        sign_flip = False
        acc = f.one
        for pc in range(n):
            found = None
            for i in range(pc, n):
                if m[i][pc] != 0:
                    found = i
                    break
            if found is None:
                return f.zero
            if found != pc:
                m[pc], m[found] = m[found], m[pc]
                sign_flip = not sign_flip
            acc = f.mul(acc, m[pc][pc])
            inv = f.inv(m[pc][pc])
            for i in range(pc + 1, n):
                if m[i][pc] != 0:
                    c = f.mul(m[i][pc], inv)
                    m[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(m[i], m[pc])]
        return f.neg(acc) if sign_flip else acc


def sum_scalars(field: FieldSpec, items: Iterable[Scalar]) -> Scalar:
    acc = field.zero
    for x in items:
        acc = field.add(acc, x)
    return acc


def hstack(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.rows != b.rows:
        raise DimensionError("hstack row mismatch")
    return Matrix(a.rows, a.cols + b.cols, tuple(ra + rb for ra, rb in zip(a.entries, b.entries)), a.field)


def vstack(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.cols != b.cols:
        raise DimensionError("vstack column mismatch")
    return Matrix(a.rows + b.rows, a.cols, a.entries + b.entries, a.field)
