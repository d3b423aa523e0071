"""Module structures of a Lie algebra B on an abelian Lie algebra A.

An action is a tuple of matrices, one per basis element of B, so that
compatibility with the bracket and serialization stay finite and exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .exactlin import DimensionError, FieldMismatchError, Matrix
from .liealg import LieAlgebra, AlgebraMap, abelian, index_pairs, is_automorphism

if TYPE_CHECKING:
    from .extension import ExtensionData


class MalformedExtensionError(ValueError):
    """Extension data violates exactness or ideal invariants."""


@dataclass(frozen=True)
class ModuleAction:
    """rho[i] is the matrix of the action of the i-th basis element of B on A."""

    B: LieAlgebra
    A: LieAlgebra
    rho: tuple

    def __post_init__(self) -> None:
        if not self.A.is_abelian:
            raise ValueError("the acted-on algebra must be abelian")
        if len(self.rho) != self.B.dim:
            raise DimensionError("one action matrix per basis element of B required")
        for m in self.rho:
            if m.rows != self.A.dim or m.cols != self.A.dim:
                raise DimensionError("action matrices must be square of size dim A")
            if m.field != self.A.field:
                raise FieldMismatchError("action matrices must share the algebras' field")
        if self.B.field != self.A.field:
            raise FieldMismatchError("B and A must share one field")

    @property
    def field(self):
        return self.A.field

    def of(self, b: "tuple") -> Matrix:
        """Action matrix of an arbitrary element of B (linear in b)."""
        acc = Matrix.zeros(self.A.dim, self.A.dim, self.field)
        for i, c in enumerate(b):
            if c != 0:
                acc = acc + self.rho[i].scale(c)
        return acc


@dataclass(frozen=True)
class ActionViolation:
    pair: tuple
    defect: Matrix

    def __str__(self) -> str:
        return f"action incompatibility at basis pair {self.pair}"


def check_action(act: ModuleAction) -> list:
    """Defects of rho([b_i, b_j]) = rho(b_i) rho(b_j) - rho(b_j) rho(b_i)."""
    out = []
    for i, j in index_pairs(act.B.dim):
        lhs = act.of(act.B.structure(i, j))
        rhs = act.rho[i] @ act.rho[j] - act.rho[j] @ act.rho[i]
        defect = lhs - rhs
        if not defect.is_zero:
            out.append(ActionViolation((i, j), defect))
    return out


def trivial_action(B: LieAlgebra, A: LieAlgebra) -> ModuleAction:
    z = Matrix.zeros(A.dim, A.dim, A.field)
    return ModuleAction(B, A, (z,) * B.dim)


def adjoint_action(alg: LieAlgebra) -> ModuleAction:
    """ad on the underlying vector space of alg, viewed as an abelian module."""
    a = abelian(alg.dim, alg.field, labels=alg.labels)
    rho = tuple(
        Matrix.from_columns([alg.structure(i, j) for j in range(alg.dim)], alg.field)
        for i in range(alg.dim)
    )
    return ModuleAction(alg, a, rho)


def induced_action(ext: "ExtensionData") -> ModuleAction:
    """The action b . a = [s(b), a] of B on A carried by an abelian extension.

    The result does not depend on the chosen section; this is re-verified on
    every call by recomputing with a second section when A and B are both
    nonzero, rather than assumed.
    """
    rho = _action_with_section(ext, ext.sect.matrix)
    if ext.A.dim > 0 and ext.B.dim > 0:
        ones = Matrix.from_rows(
            [[1] * ext.B.dim for _ in range(ext.A.dim)], ext.L.field
        )
        alt = ext.sect.matrix + ext.inj.matrix @ ones
        if _action_with_section(ext, alt) != rho:
            raise MalformedExtensionError("induced action depends on the section")
    act = ModuleAction(ext.B, ext.A, rho)
    if check_action(act):
        raise MalformedExtensionError("induced action violates module compatibility")
    return act


def _action_with_section(ext: "ExtensionData", sect: Matrix) -> tuple:
    retract = ext.inj.matrix.left_inverse()
    if retract is None:
        raise MalformedExtensionError("kernel inclusion is not injective")
    rho = []
    for i in range(ext.B.dim):
        sb = sect.column(i)
        cols = []
        for j in range(ext.A.dim):
            w = ext.L.bracket(sb, ext.inj.matrix.column(j))
            a = retract.apply(w)
            if ext.inj.matrix.apply(a) != w:
                raise MalformedExtensionError(
                    f"[s(b_{i}), a_{j}] falls outside the embedded kernel"
                )
            cols.append(a)
        rho.append(Matrix.from_columns(cols, ext.L.field, nrows=ext.A.dim))
    return tuple(rho)


def twist_action(act: ModuleAction, phi: AlgebraMap) -> ModuleAction:
    """The action b -> act(phi(b)) for an automorphism phi of B."""
    if phi.source != act.B or phi.target != act.B or not is_automorphism(phi):
        raise ValueError("twist requires an automorphism of B")
    rho = tuple(act.of(phi.matrix.column(i)) for i in range(act.B.dim))
    return ModuleAction(act.B, act.A, rho)
