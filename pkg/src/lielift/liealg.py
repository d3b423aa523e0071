"""Finite-dimensional Lie algebras via structure constants.

The bracket table is stored densely for index pairs i < j only; the i > j
half is derived by antisymmetry and the diagonal is zero by construction,
so antisymmetry cannot be violated. Jacobi is checked, not assumed.

A small built-in catalog (abelian, Heisenberg, aff(1), sl2) is the
canonical test corpus: random structure tensors almost never satisfy
Jacobi, so fixed known algebras are the useful ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dfield
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .exactlin import (
    QQ,
    DimensionError,
    FieldMismatchError,
    FieldSpec,
    Matrix,
    vec_add,
    vec_is_zero,
    vec_neg,
    vec_scale,
    vec_sub,
    zero_vector,
)


@lru_cache(maxsize=None)
def index_pairs(n: int) -> tuple:
    """All (i, j) with i < j < n, lexicographic."""
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict:
    return {p: k for k, p in enumerate(index_pairs(n))}


@dataclass(frozen=True)
class LieAlgebra:
    """Structure-constant presentation on an ordered basis.

    ``table[k]`` is the coefficient vector of [e_i, e_j] for the k-th pair
    (i, j), i < j, in lexicographic order.
    """

    dim: int
    field: FieldSpec
    table: tuple
    labels: tuple = dfield(compare=False, default=())

    def __post_init__(self) -> None:
        if len(self.table) != len(index_pairs(self.dim)):
            raise DimensionError("bracket table size mismatch")
        if any(len(v) != self.dim for v in self.table):
            raise DimensionError("bracket coefficient vector length mismatch")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.dim)))
        elif len(self.labels) != self.dim:
            raise DimensionError("label count mismatch")

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        field: FieldSpec,
        brackets: Mapping,
        labels: Optional[Sequence[str]] = None,
    ) -> "LieAlgebra":
        """Build from a map (i, j) -> coefficient vector or {k: scalar}, i < j."""
        table = [zero_vector(field, dim) for _ in index_pairs(dim)]
        idx = _pair_index(dim)
        for (i, j), coeffs in brackets.items():
            if not 0 <= i < j < dim:
                raise ValueError(f"bracket pair ({i}, {j}) must satisfy 0 <= i < j < dim")
            if isinstance(coeffs, Mapping):
                v = list(zero_vector(field, dim))
                for k, c in coeffs.items():
                    v[int(k)] = field.coerce(c)
                table[idx[(i, j)]] = tuple(v)
            else:
                table[idx[(i, j)]] = tuple(field.coerce(c) for c in coeffs)
        return cls(dim, field, tuple(table), tuple(labels) if labels else ())

    def structure(self, i: int, j: int) -> tuple:
        """Coefficient vector of [e_i, e_j]."""
        if i == j:
            return zero_vector(self.field, self.dim)
        if i < j:
            return self.table[_pair_index(self.dim)[(i, j)]]
        return vec_neg(self.field, self.table[_pair_index(self.dim)[(j, i)]])

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionError("bracket argument length mismatch")
        f = self.field
        acc = zero_vector(f, self.dim)
        for k, (i, j) in enumerate(index_pairs(self.dim)):
            c = f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]))
            if c != 0:
                acc = vec_add(f, acc, vec_scale(f, c, self.table[k]))
        return acc

    @property
    def is_abelian(self) -> bool:
        return all(vec_is_zero(v) for v in self.table)


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    defect: tuple

    def __str__(self) -> str:
        return f"{self.kind} at {self.indices}: defect {self.defect}"


def check_algebra(alg: LieAlgebra) -> list:
    """Jacobi defects on all basis triples; empty iff the tensor is a Lie algebra.

    Antisymmetry holds by construction of the table. By trilinearity it is
    enough to check strictly increasing triples: triples with a repeated
    index reduce to antisymmetry.
    """
    out = []
    f = alg.field
    for i, j, k in itertools.combinations(range(alg.dim), 3):
        d = alg.bracket(alg.structure(i, j), _unit(alg, k))
        d = vec_add(f, d, alg.bracket(alg.structure(j, k), _unit(alg, i)))
        d = vec_add(f, d, alg.bracket(alg.structure(k, i), _unit(alg, j)))
        if not vec_is_zero(d):
            out.append(Violation("jacobi", (i, j, k), d))
    return out


def _unit(alg: LieAlgebra, i: int) -> tuple:
    v = [alg.field.zero] * alg.dim
    v[i] = alg.field.one
    return tuple(v)


def basis_vectors(alg: LieAlgebra) -> list:
    return [_unit(alg, i) for i in range(alg.dim)]


def derived_subalgebra(alg: LieAlgebra) -> list:
    """Canonical basis (rref rows) of the span of all basis brackets."""
    if not alg.table:
        return []
    m = Matrix(len(alg.table), alg.dim, alg.table, alg.field)
    red, pivots = m.rref()
    return [red.entries[r] for r in range(len(pivots))]


@dataclass(frozen=True)
class AlgebraMap:
    """Linear map between algebras; column j is the image of e_j of the source."""

    source: LieAlgebra
    target: LieAlgebra
    matrix: Matrix

    def __post_init__(self) -> None:
        if self.matrix.rows != self.target.dim or self.matrix.cols != self.source.dim:
            raise DimensionError(
                f"map matrix {self.matrix.rows}x{self.matrix.cols} does not fit "
                f"{self.source.dim}-dim source and {self.target.dim}-dim target"
            )
        if not (self.matrix.field == self.source.field == self.target.field):
            raise FieldMismatchError("map and algebras must share one field")

    def apply(self, v: Sequence) -> tuple:
        return self.matrix.apply(v)

    def __matmul__(self, other: "AlgebraMap") -> "AlgebraMap":
        if other.target != self.source:
            raise DimensionError("composition domain mismatch")
        return AlgebraMap(other.source, self.target, self.matrix @ other.matrix)


def identity_map(alg: LieAlgebra) -> AlgebraMap:
    return AlgebraMap(alg, alg, Matrix.identity(alg.dim, alg.field))


def is_homomorphism(f: AlgebraMap) -> bool:
    """f[x, y] = [f x, f y]; by bilinearity basis pairs suffice."""
    for i, j in index_pairs(f.source.dim):
        lhs = f.apply(f.source.structure(i, j))
        rhs = f.target.bracket(f.matrix.column(i), f.matrix.column(j))
        if lhs != rhs:
            return False
    return True


def is_automorphism(f: AlgebraMap) -> bool:
    if f.source != f.target:
        raise ValueError("automorphism requires source = target")
    return f.matrix.invert() is not None and is_homomorphism(f)


# -- catalog ---------------------------------------------------------------


def abelian(n: int, field: FieldSpec = QQ, labels: Optional[Sequence[str]] = None) -> LieAlgebra:
    return LieAlgebra.from_brackets(n, field, {}, labels=labels)


def heisenberg(field: FieldSpec = QQ) -> LieAlgebra:
    """Basis x1, x2, z with [x1, x2] = z."""
    return LieAlgebra.from_brackets(3, field, {(0, 1): {2: 1}}, labels=("x1", "x2", "z"))


def aff1(field: FieldSpec = QQ) -> LieAlgebra:
    """The 2-dim nonabelian algebra, [e1, e2] = e1."""
    return LieAlgebra.from_brackets(2, field, {(0, 1): {0: 1}}, labels=("e1", "e2"))


def sl2(field: FieldSpec = QQ) -> LieAlgebra:
    """Basis e, h, f with [h, e] = 2e, [h, f] = -2f, [e, f] = h."""
    return LieAlgebra.from_brackets(
        3,
        field,
        {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}},
        labels=("e", "h", "f"),
    )
