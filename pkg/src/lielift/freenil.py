"""Free 2-step nilpotent Lie algebras and their closed-form lifting test.

The algebra on generators x_1..x_n with all triple brackets zero has basis
x_1..x_n followed by z_{i,j} = [x_i, x_j] for j < i, the z's ordered

    z_{2,1} < z_{3,1} < z_{3,2} < ... < z_{n,n-1}

i.e. sorted by i then j. With that ordering the matrix acting on the
derived subalgebra induced by a matrix on the abelianization is literally
the exterior square (the matrix of 2x2 minors), with no hidden permutation,
and a pair (theta, phi) lifts exactly when theta = exterior_square(phi).

That criterion is implemented here from pure minor arithmetic, independent
of the cohomological engine, and the two are cross-checked in the tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactlin import QQ, DimensionError, FieldSpec, Matrix
from .liealg import AlgebraMap, LieAlgebra, abelian
from .extension import ExtensionData
from .lifting import AutPair


class NotInducibleError(ValueError):
    """The pair fails the exterior-square criterion."""


@lru_cache(maxsize=None)
def z_pairs(n: int) -> tuple:
    """1-based (i, j) with j < i, sorted by i then j."""
    return tuple((i, j) for i in range(2, n + 1) for j in range(1, i))


@dataclass(frozen=True)
class FreeNil2:
    """A free rank-n step-2 nilpotent algebra with its central extension."""

    n: int
    algebra: LieAlgebra
    extension: ExtensionData

    @property
    def derived_dim(self) -> int:
        return self.n * (self.n - 1) // 2


def build(n: int, field: FieldSpec = QQ) -> FreeNil2:
    """Structure constants, basis labels and the derived-subalgebra extension."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    pairs = z_pairs(n)
    nz = len(pairs)
    dim = n + nz
    labels = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"z_{i}_{j}" for i, j in pairs)
    z_index = {p: n + k for k, p in enumerate(pairs)}
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            # [x_{a+1}, x_{b+1}] = -z_{b+1, a+1}
            brackets[(a, b)] = {z_index[(b + 1, a + 1)]: -1}
    L = LieAlgebra.from_brackets(dim, field, brackets, labels=labels)
    A = abelian(nz, field, labels=labels[n:])
    B = abelian(n, field, labels=tuple(f"x{i}~" for i in range(1, n + 1)))
    f = field
    inj = AlgebraMap(A, L, Matrix.from_columns([_unit(f, dim, n + k) for k in range(nz)], f, nrows=dim))
    proj = AlgebraMap(L, B, Matrix.from_rows([_unit(f, dim, i) for i in range(n)], f))
    sect = AlgebraMap(B, L, Matrix.from_columns([_unit(f, dim, i) for i in range(n)], f, nrows=dim))
    return FreeNil2(n, L, ExtensionData(A, L, B, inj, proj, sect))


def _unit(field: FieldSpec, n: int, i: int) -> tuple:
    return tuple(field.one if k == i else field.zero for k in range(n))


def exterior_square(m: Matrix) -> Matrix:
    """The matrix of 2x2 minors, rows and columns in the z-pair ordering.

    Functorial (exterior_square(M @ N) = exterior_square(M) @ exterior_square(N))
    and for n = 2 it is the 1x1 determinant.
    """
    if not m.is_square:
        raise DimensionError("exterior square of a non-square matrix")
    n = m.rows
    pairs = z_pairs(n)
    f = m.field
    e = m.entries
    ent = []
    for (k, l) in pairs:
        row = []
        for (i, j) in pairs:
            minor = f.sub(
                f.mul(e[k - 1][i - 1], e[l - 1][j - 1]),
                f.mul(e[l - 1][i - 1], e[k - 1][j - 1]),
            )
            row.append(minor)
        ent.append(tuple(row))
    return Matrix(len(pairs), len(pairs), tuple(ent), f)


def inducible_nil2(theta_matrix: Matrix, phi_matrix: Matrix, n: int) -> bool:
    """Closed-form lifting test on the rank-n step-2 free nilpotent algebra.

    Pure minor arithmetic; no cohomology. Both matrices must be invertible
    and sized for the derived subalgebra and the abelianization.
    """
    nz = n * (n - 1) // 2
    if phi_matrix.rows != n or phi_matrix.cols != n:
        raise DimensionError(f"phi must be {n}x{n}")
    if theta_matrix.rows != nz or theta_matrix.cols != nz:
        raise DimensionError(f"theta must be {nz}x{nz}")
    if theta_matrix.field != phi_matrix.field:
        raise DimensionError("theta and phi must share one field")
    if theta_matrix.invert() is None:
        raise ValueError("theta is not invertible")
    if phi_matrix.invert() is None:
        raise ValueError("phi is not invertible")
    return theta_matrix == exterior_square(phi_matrix)


def splitting_section_n2(pair: AutPair) -> AlgebraMap:
    """The multiplicative section on the rank-2 algebra: x_i -> s(phi(x_i)), z -> theta(z).

    Only defined for pairs passing the closed-form test; the assignment is
    a group homomorphism into the kernel-preserving automorphisms.
    """
    field = pair.phi.matrix.field
    fn2 = build(2, field)
    if pair.phi.source.dim != 2 or pair.theta.source.dim != 1:
        raise DimensionError("expected a pair on the rank-2 algebra")
    if not inducible_nil2(pair.theta.matrix, pair.phi.matrix, 2):
        raise NotInducibleError("pair fails the exterior-square criterion")
    ext = fn2.extension
    x_cols = (ext.sect.matrix @ pair.phi.matrix).columns()
    z_cols = (ext.inj.matrix @ pair.theta.matrix).columns()
    gamma = Matrix.from_columns(x_cols + z_cols, field, nrows=3)
    return AlgebraMap(fn2.algebra, fn2.algebra, gamma)
