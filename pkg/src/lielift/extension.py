"""Abelian extensions 0 -> A -> L -> B -> 0 and their 2-cocycles.

An :class:`ExtensionData` always carries a concrete linear section. The
canonical basis of any algebra built here lists A first, then B, which
fixes the coordinates used to read a cocycle back off an extension.

Equivalence of extensions is decided at the cocycle-class level, which is
linear, rather than by searching for an isomorphism of L.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .exactlin import FieldSpec, Matrix, hstack, vstack, QQ
from .liealg import (
    AlgebraMap,
    LieAlgebra,
    abelian,
    aff1,
    check_algebra,
    heisenberg,
    index_pairs,
    is_homomorphism,
    sl2,
)
from .modact import (
    MalformedExtensionError,
    ModuleAction,
    adjoint_action,
    check_action,
    induced_action,
    trivial_action,
)
from .cohom import Cochain, NotACocycleError, cochain_from_values, is_coboundary, is_cocycle, classes_equal, zero_cochain


class IncomparableExtensionsError(ValueError):
    """Extensions with different kernels, quotients or induced actions."""


@dataclass(frozen=True)
class ExtensionData:
    A: LieAlgebra
    L: LieAlgebra
    B: LieAlgebra
    inj: AlgebraMap
    proj: AlgebraMap
    sect: AlgebraMap


def check_extension(ext: ExtensionData) -> list:
    """All exactness and ideal invariants, as human-readable findings."""
    out = []
    if not ext.A.is_abelian:
        out.append("kernel algebra is not abelian")
    if ext.A.dim + ext.B.dim != ext.L.dim:
        out.append("dim L != dim A + dim B")
    if ext.inj.source != ext.A or ext.inj.target != ext.L:
        out.append("inj is not a map A -> L")
    if ext.proj.source != ext.L or ext.proj.target != ext.B:
        out.append("proj is not a map L -> B")
    if ext.sect.source != ext.B or ext.sect.target != ext.L:
        out.append("sect is not a map B -> L")
    if out:
        return out
    if not is_homomorphism(ext.inj):
        out.append("inj is not a homomorphism")
    if ext.inj.matrix.rank() != ext.A.dim:
        out.append("inj is not injective")
    if not is_homomorphism(ext.proj):
        out.append("proj is not a homomorphism")
    if ext.proj.matrix.rank() != ext.B.dim:
        out.append("proj is not surjective")
    if not (ext.proj.matrix @ ext.inj.matrix).is_zero:
        out.append("proj . inj != 0")
    if ext.proj.matrix @ ext.sect.matrix != Matrix.identity(ext.B.dim, ext.B.field):
        out.append("proj . sect != identity")
    # ker(proj) = im(inj) follows from proj.inj = 0 and rank counting
    if ext.inj.matrix.rank() + ext.proj.matrix.rank() != ext.L.dim:
        out.append("rank(inj) + rank(proj) != dim L")
    retract = ext.inj.matrix.left_inverse()
    if retract is not None:
        for i in range(ext.L.dim):
            for j in range(ext.A.dim):
                w = ext.L.bracket(_unit(ext.L, i), ext.inj.matrix.column(j))
                if ext.inj.matrix.apply(retract.apply(w)) != w:
                    out.append(f"embedded kernel is not an ideal: [e_{i}, inj(a_{j})] escapes")
                    return out
    return out


def _unit(alg: LieAlgebra, i: int) -> tuple:
    v = [alg.field.zero] * alg.dim
    v[i] = alg.field.one
    return tuple(v)


def make_section(inj: AlgebraMap, proj: AlgebraMap) -> AlgebraMap:
    """Deterministic linear section of proj (free variables set to zero)."""
    ident = Matrix.identity(proj.target.dim, proj.target.field)
    s = proj.matrix.solve_matrix(ident)
    if s is None:
        raise MalformedExtensionError("projection is not surjective")
    return AlgebraMap(proj.target, proj.source, s)


def make_extension(
    A: LieAlgebra,
    L: LieAlgebra,
    B: LieAlgebra,
    inj: AlgebraMap,
    proj: AlgebraMap,
    sect: Optional[AlgebraMap] = None,
) -> ExtensionData:
    """Validating constructor; derives a section when none is supplied."""
    if sect is None:
        sect = make_section(inj, proj)
    ext = ExtensionData(A, L, B, inj, proj, sect)
    problems = check_extension(ext)
    if problems:
        raise MalformedExtensionError("; ".join(problems))
    return ext


@lru_cache(maxsize=None)
def extract_cocycle(ext: ExtensionData) -> Cochain:
    """The section defect mu(b_i, b_j) = [s(b_i), s(b_j)] - s([b_i, b_j]).

    Values are returned in A-coordinates; the result is checked to be a
    2-cocycle for the induced action.
    """
    act = induced_action(ext)
    retract = ext.inj.matrix.left_inverse()
    f = ext.L.field
    cols = {}
    s = ext.sect.matrix
    for i, j in index_pairs(ext.B.dim):
        w = ext.L.bracket(s.column(i), s.column(j))
        w = tuple(f.sub(a, b) for a, b in zip(w, s.apply(ext.B.structure(i, j))))
        a = retract.apply(w)
        if ext.inj.matrix.apply(a) != w:
            raise MalformedExtensionError(f"section defect at ({i}, {j}) escapes the kernel")
        cols[(i, j)] = a
    mu = cochain_from_values(act, 2, cols)
    if not is_cocycle(mu):
        raise MalformedExtensionError("section defect is not a 2-cocycle")
    return mu


def extension_from_cocycle(act: ModuleAction, mu: Cochain) -> ExtensionData:
    """Build A + B with bracket [(a1,b1),(a2,b2)] = (b1 a2 - b2 a1 + mu(b1,b2), [b1,b2]).

    Refused unless mu is a 2-cocycle for act: the Jacobi identity of the
    result is exactly the cocycle condition.
    """
    if mu.action != act or mu.degree != 2:
        raise NotACocycleError("cochain does not match the action or has wrong degree")
    if not is_cocycle(mu):
        raise NotACocycleError("not a 2-cocycle; construction refused")
    f = act.field
    na, nb = act.A.dim, act.B.dim
    dim = na + nb
    brackets = {}
    for i in range(na):
        for j in range(nb):
            # [a_i, b_j] = -(b_j . a_i)
            col = act.rho[j].column(i)
            brackets[(i, na + j)] = tuple(f.neg(c) for c in col) + (f.zero,) * nb
    for i, j in index_pairs(nb):
        a_part = mu.value_on((i, j))
        b_part = act.B.structure(i, j)
        brackets[(na + i, na + j)] = tuple(a_part) + tuple(b_part)
    labels = tuple(act.A.labels) + tuple(act.B.labels)
    L = LieAlgebra.from_brackets(dim, f, brackets, labels=labels)
    inj = AlgebraMap(act.A, L, vstack(Matrix.identity(na, f), Matrix.zeros(nb, na, f)))
    proj = AlgebraMap(L, act.B, hstack(Matrix.zeros(nb, na, f), Matrix.identity(nb, f)))
    sect = AlgebraMap(act.B, L, vstack(Matrix.zeros(na, nb, f), Matrix.identity(nb, f)))
    return ExtensionData(act.A, L, act.B, inj, proj, sect)


def semidirect(act: ModuleAction) -> ExtensionData:
    return extension_from_cocycle(act, zero_cochain(act, 2))


def is_split(ext: ExtensionData) -> bool:
    """True iff the extension cocycle is a coboundary.

    Equivalently, a bracket-preserving section exists: shifting the stored
    section by the coboundary witness produces one.
    """
    return is_coboundary(extract_cocycle(ext)) is not None


def equivalent(e1: ExtensionData, e2: ExtensionData) -> bool:
    """Same A, B and induced action, and cohomologous cocycles."""
    if e1.A != e2.A or e1.B != e2.B:
        raise IncomparableExtensionsError("extensions have different kernel or quotient")
    if induced_action(e1) != induced_action(e2):
        raise IncomparableExtensionsError("extensions induce different module actions")
    return classes_equal(extract_cocycle(e1), extract_cocycle(e2))


# -- catalog extensions ------------------------------------------------------


def heisenberg_extension(field: FieldSpec = QQ) -> ExtensionData:
    """The Heisenberg algebra as a central extension of a 2-dim abelian algebra."""
    L = heisenberg(field)
    A = abelian(1, field, labels=("z",))
    B = abelian(2, field, labels=("x1~", "x2~"))
    inj = AlgebraMap(A, L, Matrix.from_rows([[0], [0], [1]], field))
    proj = AlgebraMap(L, B, Matrix.from_rows([[1, 0, 0], [0, 1, 0]], field))
    sect = AlgebraMap(B, L, Matrix.from_rows([[1, 0], [0, 1], [0, 0]], field))
    return ExtensionData(A, L, B, inj, proj, sect)


def scalar_action(field: FieldSpec, value) -> ModuleAction:
    """1-dim B acting on 1-dim A by one scalar."""
    B = abelian(1, field, labels=("b",))
    A = abelian(1, field, labels=("a",))
    return ModuleAction(B, A, (Matrix.from_rows([[value]], field),))


def aff1_natural_action(field: FieldSpec = QQ) -> ModuleAction:
    """The natural 2-dim module of aff(1): e1 acts nilpotently, e2 diagonally."""
    B = aff1(field)
    A = abelian(2, field)
    rho = (
        Matrix.from_rows([[0, 1], [0, 0]], field),
        Matrix.from_rows([[0, 0], [0, 1]], field),
    )
    act = ModuleAction(B, A, rho)
    assert not check_action(act)
    return act


def sl2_adjoint_split(field: FieldSpec = QQ) -> ExtensionData:
    """Semidirect product of sl2 acting on its own underlying space."""
    return semidirect(adjoint_action(sl2(field)))


def sl2_trivial_split(field: FieldSpec = QQ) -> ExtensionData:
    """Semidirect product of sl2 acting trivially on a line."""
    return semidirect(trivial_action(sl2(field), abelian(1, field)))


def catalog_extensions(field: FieldSpec = QQ) -> dict:
    """Small named corpus of extensions used across the test suite.

    All have dim L <= 4 so the finite-field enumeration oracles stay cheap.
    """
    two_dim_trivial = trivial_action(abelian(1, field), abelian(1, field))
    split_faithful = ModuleAction(
        abelian(2, field),
        abelian(1, field),
        (Matrix.from_rows([[1]], field), Matrix.from_rows([[0]], field)),
    )
    heis_plus_center_act = trivial_action(abelian(2, field), abelian(2, field))
    mu4 = cochain_from_values(heis_plus_center_act, 2, {(0, 1): (1, 0)})
    out = {
        "abelian_split_1_1": semidirect(two_dim_trivial),
        "aff1_split": semidirect(scalar_action(field, 1)),
        "heisenberg_central": heisenberg_extension(field),
        "split_faithful_1_2": semidirect(split_faithful),
        "heisenberg_plus_center": extension_from_cocycle(heis_plus_center_act, mu4),
        "aff1_natural_split": semidirect(aff1_natural_action(field)),
    }
    return out
