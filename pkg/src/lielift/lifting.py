"""Deciding when a pair of kernel/quotient automorphisms lifts.

Given an abelian extension 0 -> A -> L -> B -> 0 and a compatible pair
(theta, phi), the obstruction cochain

    mu_{theta,phi}(b1, b2) = theta(mu(phi^-1 b1, phi^-1 b2)) - mu(b1, b2)

is a 2-cocycle whose class in H^2(B; A) vanishes exactly when the pair is
induced by an automorphism of L; the witness construction is

    gamma(a + s(b)) = theta(a) + lambda(b) + s(phi(b)),  lambda = lambda' . phi,

where lambda' solves d(lambda') = mu_{theta,phi}. The solver's witness is
canonical (free variables zero), so outputs are reproducible; the yes/no
answer does not depend on the stored section, the witness matrix does.

Finite-field enumeration oracles live here too, so the exactness of the
sequence Z^1 -> Aut_A(L) -> C_alpha -> H^2 can be audited by brute force
on small instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .exactlin import DimensionError, FieldSpec, Matrix, hstack
from .liealg import AlgebraMap, LieAlgebra, index_pairs, is_automorphism
from .modact import ModuleAction, induced_action
from .cohom import (
    Cochain,
    CohomologyClass,
    ActionMismatchError,
    NotACocycleError,
    class_of,
    coboundary_matrix,
    cochain_from_values,
    is_coboundary,
    is_cocycle,
    unflatten,
)
from .extension import ExtensionData


class IncompatiblePairError(ValueError):
    """The pair fails the conjugation-compatibility condition."""


class NotAPreservingError(ValueError):
    """The automorphism does not keep the embedded kernel invariant."""


class FiniteFieldRequiredError(ValueError):
    """Enumeration oracles only run over prime fields."""


class EnumerationGuardError(ValueError):
    """Requested enumeration would blow up; dimensions exceed the guard."""


@dataclass(frozen=True)
class AutPair:
    """A pair (theta, phi) in Aut(A) x Aut(B)."""

    theta: AlgebraMap
    phi: AlgebraMap

    def __post_init__(self) -> None:
        if not is_automorphism(self.theta):
            raise ValueError("theta is not an automorphism")
        if not is_automorphism(self.phi):
            raise ValueError("phi is not an automorphism")

    def __mul__(self, other: "AutPair") -> "AutPair":
        # apply the right factor first, matching map composition
        return AutPair(self.theta @ other.theta, self.phi @ other.phi)


@dataclass(frozen=True)
class LiftWitness:
    """gamma in Aut(L) inducing the pair, with its Hom(B, A) correction."""

    gamma: AlgebraMap
    lam: AlgebraMap


@dataclass(frozen=True)
class LiftOutcome:
    """Result of a lift attempt; `reason` distinguishes the two failure modes."""

    inducible: bool
    witness: Optional[LiftWitness]
    reason: Optional[str]  # "incompatible" | "obstructed" | None
    failing_index: Optional[int]
    obstruction: Optional[CohomologyClass]

    def __bool__(self) -> bool:
        return self.inducible


def _check_pair_shape(pair: AutPair, ext: ExtensionData) -> None:
    if pair.theta.source != ext.A or pair.phi.source != ext.B:
        raise DimensionError("pair does not act on this extension's A and B")


def tau(gamma: AlgebraMap, ext: ExtensionData) -> AutPair:
    """Restrict an A-preserving automorphism of L to the pair it induces.

    theta is gamma in A-coordinates; phi = proj . gamma . sect. phi does
    not depend on the section because gamma(A) = A is killed by proj.
    """
    if gamma.source != ext.L or gamma.target != ext.L:
        raise DimensionError("tau expects an endomorphism of L")
    if not is_automorphism(gamma):
        raise ValueError("tau expects an automorphism of L")
    gi = gamma.matrix @ ext.inj.matrix
    theta = ext.inj.matrix.solve_matrix(gi)
    if theta is None:
        raise NotAPreservingError("gamma does not keep the embedded kernel invariant")
    phi = ext.proj.matrix @ gamma.matrix @ ext.sect.matrix
    return AutPair(
        AlgebraMap(ext.A, ext.A, theta),
        AlgebraMap(ext.B, ext.B, phi),
    )


def first_incompatible_index(pair: AutPair, act: ModuleAction) -> Optional[int]:
    """Least basis index of B violating act(phi(b)) = theta act(b) theta^-1."""
    theta = pair.theta.matrix
    theta_inv = theta.invert()
    for i in range(act.B.dim):
        lhs = act.of(pair.phi.matrix.column(i))
        if lhs != theta @ act.rho[i] @ theta_inv:
            return i
    return None


def is_compatible(pair: AutPair, act: ModuleAction) -> bool:
    return first_incompatible_index(pair, act) is None


def obstruction_cocycle(pair: AutPair, ext: ExtensionData) -> Cochain:
    """theta-twisted cocycle difference; requires a compatible pair."""
    from .extension import extract_cocycle

    act = induced_action(ext)
    _check_pair_shape(pair, ext)
    if not is_compatible(pair, act):
        raise IncompatiblePairError("obstruction cochain needs a compatible pair")
    mu = extract_cocycle(ext)
    phi_inv = pair.phi.matrix.invert()
    f = act.field
    vals = {}
    for i, j in index_pairs(ext.B.dim):
        twisted = pair.theta.apply(mu.evaluate([phi_inv.column(i), phi_inv.column(j)]))
        base = mu.value_on((i, j))
        vals[(i, j)] = tuple(f.sub(a, b) for a, b in zip(twisted, base))
    nu = cochain_from_values(act, 2, vals)
    if not is_cocycle(nu):
        raise IncompatiblePairError("obstruction cochain is not a cocycle; data inconsistent")
    return nu


def wells(pair: AutPair, ext: ExtensionData) -> CohomologyClass:
    """The obstruction class in H^2(B; A); zero iff the pair lifts."""
    return class_of(obstruction_cocycle(pair, ext))


def act_on_class(pair: AutPair, cls: CohomologyClass, act: ModuleAction) -> CohomologyClass:
    """Left action of a compatible pair on H^2: nu -> theta . nu . (phi^-1, phi^-1)."""
    if cls.space.action != act:
        raise ActionMismatchError("class does not live over the given action")
    if not is_compatible(pair, act):
        raise IncompatiblePairError("only compatible pairs act on cohomology")
    nu = cls.representative
    phi_inv = pair.phi.matrix.invert()
    vals = {}
    for i, j in index_pairs(act.B.dim):
        vals[(i, j)] = pair.theta.apply(nu.evaluate([phi_inv.column(i), phi_inv.column(j)]))
    return class_of(cochain_from_values(act, 2, vals))


def try_lift(pair: AutPair, ext: ExtensionData) -> LiftOutcome:
    """Decide inducibility and build an explicit witness when it holds.

    Failure reasons are structured: "incompatible" carries the first
    failing basis index of B, "obstructed" carries the obstruction class.
    The returned witness is replayed through tau before being handed back.
    """
    act = induced_action(ext)
    _check_pair_shape(pair, ext)
    bad = first_incompatible_index(pair, act)
    if bad is not None:
        return LiftOutcome(False, None, "incompatible", bad, None)
    obs = obstruction_cocycle(pair, ext)
    lam_prime = is_coboundary(obs)
    cls = class_of(obs)
    # the solver and the class decomposition must agree
    assert cls.is_zero == (lam_prime is not None)
    if lam_prime is None:
        return LiftOutcome(False, None, "obstructed", None, cls)
    f = ext.L.field
    lam_matrix = lam_prime.values @ pair.phi.matrix
    ident = Matrix.identity(ext.L.dim, f)
    away_from_section = ident - ext.sect.matrix @ ext.proj.matrix
    retract = ext.inj.matrix.left_inverse()
    a_coords = retract @ away_from_section
    gamma_matrix = (
        ext.inj.matrix @ (pair.theta.matrix @ a_coords + lam_matrix @ ext.proj.matrix)
        + ext.sect.matrix @ pair.phi.matrix @ ext.proj.matrix
    )
    gamma = AlgebraMap(ext.L, ext.L, gamma_matrix)
    replay = tau(gamma, ext)
    assert replay.theta.matrix == pair.theta.matrix and replay.phi.matrix == pair.phi.matrix
    return LiftOutcome(True, LiftWitness(gamma, AlgebraMap(ext.B, ext.A, lam_matrix)), None, None, cls)


def derivation_to_aut(lam: AlgebraMap, ext: ExtensionData) -> AlgebraMap:
    """gamma_lam(a + s(b)) = a + lam(b) + s(b) for a derivation lam in Z^1(B; A).

    The assignment is additive: gamma_{l1+l2} = gamma_{l2} . gamma_{l1}.
    """
    if lam.source != ext.B or lam.target != ext.A:
        raise DimensionError("expected a linear map B -> A")
    act = induced_action(ext)
    if not is_cocycle(Cochain(act, 1, lam.matrix)):
        raise NotACocycleError("the map is not a 1-cocycle (derivation)")
    ident = Matrix.identity(ext.L.dim, ext.L.field)
    gamma = ident + ext.inj.matrix @ lam.matrix @ ext.proj.matrix
    return AlgebraMap(ext.L, ext.L, gamma)


@dataclass(frozen=True)
class AutFixingBoth:
    """Z^1(B; A) with the automorphisms of L fixing A and B pointwise."""

    extension: ExtensionData
    z1_basis: tuple
    automorphisms: tuple

    def order(self) -> int:
        p = self.extension.L.field.p
        if p is None:
            raise FiniteFieldRequiredError("group order is only finite over GF(p)")
        return p ** len(self.z1_basis)


def aut_fixing_both(ext: ExtensionData) -> AutFixingBoth:
    """Basis of Z^1(B; A) together with its image under derivation_to_aut."""
    act = induced_action(ext)
    d1 = coboundary_matrix(act, 1)
    maps = []
    for flat in d1.kernel_basis():
        c = unflatten(act, 1, flat)
        maps.append(AlgebraMap(ext.B, ext.A, c.values))
    gammas = tuple(derivation_to_aut(m, ext) for m in maps)
    return AutFixingBoth(ext, tuple(maps), gammas)


# -- finite-field enumeration oracles ---------------------------------------

_GUARD = 2**24


def _require_finite(field: FieldSpec) -> int:
    if field.p is None:
        raise FiniteFieldRequiredError("enumeration requires a prime field")
    return field.p


def all_vectors(field: FieldSpec, length: int) -> Iterator[tuple]:
    p = _require_finite(field)
    if p**length > _GUARD:
        raise EnumerationGuardError(f"{p}^{length} vectors is past the guard")
    return itertools.product(range(p), repeat=length)


def all_matrices(field: FieldSpec, rows: int, cols: int) -> Iterator[Matrix]:
    p = _require_finite(field)
    if p ** (rows * cols) > _GUARD:
        raise EnumerationGuardError(f"{p}^{rows * cols} matrices is past the guard")
    for flat in itertools.product(range(p), repeat=rows * cols):
        ent = tuple(flat[r * cols : (r + 1) * cols] for r in range(rows))
        yield Matrix(rows, cols, ent, field)


@lru_cache(maxsize=None)
def general_linear(n: int, field: FieldSpec) -> tuple:
    """All invertible n x n matrices over GF(p), in lexicographic entry order."""
    return tuple(m for m in all_matrices(field, n, n) if m.det() != 0)


@lru_cache(maxsize=None)
def automorphism_group(alg: LieAlgebra) -> tuple:
    """All automorphisms of a small algebra over GF(p), by exhaustive filter."""
    out = []
    for m in general_linear(alg.dim, alg.field):
        f = AlgebraMap(alg, alg, m)
        if is_automorphism(f):
            out.append(f)
    return tuple(out)


def compatible_thetas(phi: AlgebraMap, act: ModuleAction) -> list:
    """All theta in Aut(A) making (theta, phi) compatible, over GF(p).

    Solves the linear intertwiner condition theta rho(b) = rho(phi b) theta
    exactly, then enumerates the (finite) solution space and keeps the
    invertible points.
    """
    p = _require_finite(act.field)
    na = act.A.dim
    f = act.field
    rows = []
    # unknowns: X[r][c] flattened row-major; equations per basis b and matrix slot
    for i in range(act.B.dim):
        r_b = act.rho[i]
        r_phi = act.of(phi.matrix.column(i))
        for u in range(na):
            for v in range(na):
                # (X rho - rho' X)[u][v] = sum_w X[u][w] rho[w][v] - rho'[u][w] X[w][v]
                coeffs = [f.zero] * (na * na)
                for w in range(na):
                    coeffs[u * na + w] = f.add(coeffs[u * na + w], r_b.entries[w][v])
                    coeffs[w * na + v] = f.sub(coeffs[w * na + v], r_phi.entries[u][w])
                rows.append(tuple(coeffs))
    system = Matrix(len(rows), na * na, tuple(rows), f)
    basis = system.kernel_basis()
    if p ** len(basis) > 2**14:
        raise EnumerationGuardError("compatible-theta solution space is past the guard")
    out = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        flat = [f.zero] * (na * na)
        for c, vec in zip(coeffs, basis):
            if c:
                flat = [f.add(x, f.mul(c, y)) for x, y in zip(flat, vec)]
        m = Matrix(na, na, tuple(tuple(flat[r * na : (r + 1) * na]) for r in range(na)), f)
        if m.det() != 0:
            out.append(m)
    return out


def enumerate_compatible_pairs(ext: ExtensionData) -> list:
    """All of C_alpha for a small extension over GF(p), deterministically ordered."""
    act = induced_action(ext)
    pairs = []
    for phi in automorphism_group(ext.B):
        for theta in compatible_thetas(phi, act):
            pairs.append(AutPair(AlgebraMap(ext.A, ext.A, theta), phi))
    return pairs


def enumerate_aut_A(ext: ExtensionData, dim_guard: int = 5) -> list:
    """All automorphisms of L over GF(p) preserving the embedded kernel.

    Works in the adapted basis (kernel columns, then section columns),
    where an A-preserving invertible map is exactly a block upper
    triangular matrix with invertible diagonal blocks; each candidate is
    then checked to preserve brackets. The result order is stable.
    """
    p = _require_finite(ext.L.field)
    if ext.L.dim > dim_guard:
        raise EnumerationGuardError(f"dim L = {ext.L.dim} exceeds the enumeration guard")
    na, nb = ext.A.dim, ext.B.dim
    f = ext.L.field
    T = hstack(ext.inj.matrix, ext.sect.matrix)
    T_inv = T.invert()
    if T_inv is None:
        raise NotAPreservingError("kernel and section columns do not span L")
    dim = ext.L.dim
    sc = {}
    for i, j in index_pairs(dim):
        sc[(i, j)] = tuple(T_inv.apply(ext.L.bracket(T.column(i), T.column(j))))
    nonzero_sc = {k: v for k, v in sc.items() if any(x != 0 for x in v)}
    gl_a = [tuple(tuple(r) for r in m.entries) for m in general_linear(na, f)]
    gl_b = [tuple(tuple(r) for r in m.entries) for m in general_linear(nb, f)]
    if len(gl_a) * len(gl_b) * p ** (na * nb) > _GUARD:
        raise EnumerationGuardError("candidate count is past the guard")
    out = []
    lam_grid = list(itertools.product(range(p), repeat=na * nb))
    pair_list = list(index_pairs(dim))
    for th in gl_a:
        for ph in gl_b:
            bottom = [(0,) * na + ph[r] for r in range(nb)]
            for lam in lam_grid:
                g = [th[r] + lam[r * nb : (r + 1) * nb] for r in range(na)] + bottom
                if _is_hom_modp(g, pair_list, sc, nonzero_sc, p, dim):
                    gm = Matrix(dim, dim, tuple(tuple(r) for r in g), f)
                    out.append(AlgebraMap(ext.L, ext.L, T @ gm @ T_inv))
    return out


def _is_hom_modp(g, pair_list, sc, nonzero_sc, p, dim) -> bool:
    for (i, j) in pair_list:
        c = sc[(i, j)]
        lhs = [sum(g[r][k] * c[k] for k in range(dim)) % p for r in range(dim)]
        rhs = [0] * dim
        for (a, b), cab in nonzero_sc.items():
            coeff = (g[a][i] * g[b][j] - g[a][j] * g[b][i]) % p
            if coeff:
                for r in range(dim):
                    if cab[r]:
                        rhs[r] = (rhs[r] + coeff * cab[r]) % p
        if lhs != rhs:
            return False
    return True
