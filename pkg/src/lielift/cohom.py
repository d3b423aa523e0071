"""The Chevalley-Eilenberg complex C^k(B; A) = Hom(Lambda^k B, A).

Cochains are stored against the lexicographically ordered basis of strictly
increasing k-tuples of basis indices of B. Evaluation extends the stored
values multilinearly and alternately.

Flattening convention, fixed once for the whole package: a cochain becomes
a single column vector with the A-coordinate fastest-varying, then the
tuple index, i.e. flat[t * dim A + a]. This turns every differential into
one exact matrix and reduces all cohomology to kernels and images.

Sign convention of the differential, also fixed (textbooks differ):

    d(nu)(b_0, ..., b_k) = sum_i (-1)^i  b_i . nu(..., ^b_i, ...)
        + sum_{i<j} (-1)^(i+j) nu([b_i, b_j], ..., ^b_i, ..., ^b_j, ...)

where the inner sum places the bracket in the first argument slot.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dfield
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

from .exactlin import DimensionError, Matrix, sum_scalars
from .modact import ModuleAction


class NotACocycleError(ValueError):
    """A cochain that was required to be a cocycle is not one."""


class ActionMismatchError(ValueError):
    """Cochains over different module actions cannot be combined."""


@dataclass(frozen=True)
class KSubsetBasis:
    """Strictly increasing k-tuples from range(n), lexicographic."""

    n: int
    k: int
    tuples: tuple

    def index(self, t: tuple) -> int:
        return _tuple_index(self.n, self.k)[t]


@lru_cache(maxsize=None)
def ksubset_basis(n: int, k: int) -> KSubsetBasis:
    return KSubsetBasis(n, k, tuple(itertools.combinations(range(n), k)))


@lru_cache(maxsize=None)
def _tuple_index(n: int, k: int) -> dict:
    return {t: i for i, t in enumerate(itertools.combinations(range(n), k))}


def insert_sorted(m: int, rest: tuple) -> Optional[tuple]:
    """(sign, tuple) for sorting m into the increasing tuple rest; None if m repeats."""
    if m in rest:
        return None
    pos = sum(1 for x in rest if x < m)
    sign = -1 if pos % 2 else 1
    return sign, rest[:pos] + (m,) + rest[pos:]


@dataclass(frozen=True)
class Cochain:
    """Element of C^k(B; A); values has one column per basis k-tuple."""

    action: ModuleAction
    degree: int
    values: Matrix

    def __post_init__(self) -> None:
        expected = comb(self.action.B.dim, self.degree)
        if self.values.rows != self.action.A.dim or self.values.cols != expected:
            raise DimensionError(
                f"degree-{self.degree} cochain needs a {self.action.A.dim}x{expected} value matrix"
            )

    @property
    def basis(self) -> KSubsetBasis:
        return ksubset_basis(self.action.B.dim, self.degree)

    def value_on(self, t: tuple) -> tuple:
        return self.values.column(self.basis.index(t))

    def evaluate(self, args: Sequence) -> tuple:
        """Multilinear alternating extension of the stored basis values."""
        if len(args) != self.degree:
            raise DimensionError(f"degree-{self.degree} cochain takes {self.degree} arguments")
        f = self.action.field
        dim_a = self.action.A.dim
        acc = [f.zero] * dim_a
        for idx, t in enumerate(self.basis.tuples):
            sub = Matrix(
                self.degree,
                self.degree,
                tuple(tuple(args[c][r] for c in range(self.degree)) for r in t),
                f,
            )
            coeff = sub.det()
            if coeff != 0:
                col = self.values.column(idx)
                acc = [f.add(x, f.mul(coeff, y)) for x, y in zip(acc, col)]
        return tuple(acc)

    def flatten(self) -> tuple:
        out = []
        for t in range(self.values.cols):
            out.extend(self.values.column(t))
        return tuple(out)

    def __add__(self, other: "Cochain") -> "Cochain":
        self._align(other)
        return Cochain(self.action, self.degree, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._align(other)
        return Cochain(self.action, self.degree, self.values - other.values)

    def __neg__(self) -> "Cochain":
        return Cochain(self.action, self.degree, -self.values)

    @property
    def is_zero(self) -> bool:
        return self.values.is_zero

    def _align(self, other: "Cochain") -> None:
        if self.action != other.action:
            raise ActionMismatchError("cochains live over different actions")
        if self.degree != other.degree:
            raise DimensionError("cochain degree mismatch")


def zero_cochain(act: ModuleAction, degree: int) -> Cochain:
    return Cochain(act, degree, Matrix.zeros(act.A.dim, comb(act.B.dim, degree), act.field))


def cochain_from_values(act: ModuleAction, degree: int, assignments: dict) -> Cochain:
    """Build from a map (increasing tuple) -> A-vector; omitted tuples are zero."""
    basis = ksubset_basis(act.B.dim, degree)
    cols = [[act.field.zero] * act.A.dim for _ in basis.tuples]
    for t, v in assignments.items():
        if tuple(sorted(t)) != tuple(t):
            raise ValueError(f"basis tuple {t} must be strictly increasing")
        cols[basis.index(tuple(t))] = [act.field.coerce(x) for x in v]
    return Cochain(act, degree, Matrix.from_columns(cols, act.field, nrows=act.A.dim))


def unflatten(act: ModuleAction, degree: int, flat: Sequence) -> Cochain:
    dim_a = act.A.dim
    ntuples = comb(act.B.dim, degree)
    cols = [flat[t * dim_a : (t + 1) * dim_a] for t in range(ntuples)]
    return Cochain(act, degree, Matrix.from_columns(cols, act.field, nrows=dim_a))


@lru_cache(maxsize=None)
def coboundary_matrix(act: ModuleAction, k: int) -> Matrix:
    """The matrix of the degree-k differential on flattened cochains."""
    n = act.B.dim
    dim_a = act.A.dim
    f = act.field
    rows = dim_a * comb(n, k + 1)
    cols = dim_a * comb(n, k)
    ent = [[f.zero] * cols for _ in range(rows)]
    sub_basis = ksubset_basis(n, k)
    for u, big in enumerate(ksubset_basis(n, k + 1).tuples):
        for i in range(k + 1):
            rest = big[:i] + big[i + 1 :]
            v = sub_basis.index(rest)
            rho = act.rho[big[i]]
            sgn = -1 if i % 2 else 1
            for a_r in range(dim_a):
                row = u * dim_a + a_r
                for a_c in range(dim_a):
                    x = rho.entries[a_r][a_c]
                    if x != 0:
                        col = v * dim_a + a_c
                        term = x if sgn == 1 else f.neg(x)
                        ent[row][col] = f.add(ent[row][col], term)
        for i, j in itertools.combinations(range(k + 1), 2):
            w = act.B.structure(big[i], big[j])
            rest = tuple(big[r] for r in range(k + 1) if r not in (i, j))
            outer = -1 if (i + j) % 2 else 1
            for m, c in enumerate(w):
                if c == 0:
                    continue
                placed = insert_sorted(m, rest)
                if placed is None:
                    continue
                sgn, t = placed
                v = sub_basis.index(t)
                coeff = f.mul(f.coerce(outer * sgn), c)
                for a in range(dim_a):
                    row = u * dim_a + a
                    col = v * dim_a + a
                    ent[row][col] = f.add(ent[row][col], coeff)
    return Matrix(rows, cols, tuple(tuple(r) for r in ent), f)


def coboundary(nu: Cochain) -> Cochain:
    d = coboundary_matrix(nu.action, nu.degree)
    return unflatten(nu.action, nu.degree + 1, d.apply(nu.flatten()))


def is_cocycle(nu: Cochain) -> bool:
    return coboundary(nu).is_zero


@dataclass(frozen=True)
class CohomologySpace:
    """Z^k, B^k and chosen class representatives for one (action, degree)."""

    action: ModuleAction
    degree: int
    cocycle_basis: tuple
    coboundary_basis: tuple
    class_representatives: tuple
    dim_H: int


@lru_cache(maxsize=None)
def cohomology(act: ModuleAction, k: int) -> CohomologySpace:
    """Exact cocycle/coboundary bases and representatives in degree k.

    Representatives extend the coboundary basis to a basis of the cocycle
    space by one rref pivot pass, so they are deterministic. Degrees above
    dim B are allowed and give the zero space, since Lambda^k B = 0 there.
    """
    if k < 0:
        raise ValueError(f"negative degree {k}")
    f = act.field
    z_flat = coboundary_matrix(act, k).kernel_basis()
    if k == 0:
        b_flat = []
    else:
        prev = coboundary_matrix(act, k - 1)
        _, pivots = prev.rref()
        b_flat = [prev.column(c) for c in pivots]
    ncoords = act.A.dim * comb(act.B.dim, k)
    stacked = Matrix.from_columns(list(b_flat) + list(z_flat), f, nrows=ncoords)
    _, pivots = stacked.rref()
    reps = [z_flat[c - len(b_flat)] for c in pivots if c >= len(b_flat)]
    assert len(reps) == len(z_flat) - len(b_flat)
    mk = lambda flat: unflatten(act, k, flat)
    return CohomologySpace(
        action=act,
        degree=k,
        cocycle_basis=tuple(mk(v) for v in z_flat),
        coboundary_basis=tuple(mk(v) for v in b_flat),
        class_representatives=tuple(mk(v) for v in reps),
        dim_H=len(reps),
    )


def is_coboundary(nu: Cochain) -> Optional[Cochain]:
    """A witness lam with d(lam) = nu, or None; nu must be a cocycle."""
    if nu.degree < 1:
        raise DimensionError("coboundary membership needs degree >= 1")
    if not is_cocycle(nu):
        raise NotACocycleError("coboundary test applied to a non-cocycle")
    prev = coboundary_matrix(nu.action, nu.degree - 1)
    x = prev.solve(nu.flatten())
    if x is None:
        return None
    return unflatten(nu.action, nu.degree - 1, x)


def classes_equal(nu1: Cochain, nu2: Cochain) -> bool:
    """Whether two cocycles differ by a coboundary."""
    nu1._align(nu2)
    for nu in (nu1, nu2):
        if not is_cocycle(nu):
            raise NotACocycleError("class comparison applied to a non-cocycle")
    prev = coboundary_matrix(nu1.action, nu1.degree - 1)
    return prev.solve((nu1 - nu2).flatten()) is not None


@dataclass(frozen=True)
class CohomologyClass:
    """A cohomology class: coordinates over the space's representatives.

    Equality is by coordinates; the carried representative is one concrete
    cocycle in the class and does not participate in comparison.
    """

    space: CohomologySpace
    coords: tuple
    representative: Cochain = dfield(compare=False)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        if self.space != other.space:
            raise ActionMismatchError("classes live in different cohomology spaces")
        f = self.space.action.field
        coords = tuple(f.sub(a, b) for a, b in zip(self.coords, other.coords))
        return CohomologyClass(self.space, coords, self.representative - other.representative)


def class_of(nu: Cochain) -> CohomologyClass:
    """Decompose a cocycle over the representative basis, modulo coboundaries.

    The coordinates are independent of the solver's free-variable choices
    because the representatives are linearly independent modulo B^k.
    """
    if not is_cocycle(nu):
        raise NotACocycleError("only cocycles define cohomology classes")
    space = cohomology(nu.action, nu.degree)
    f = nu.action.field
    rep_cols = [r.flatten() for r in space.class_representatives]
    prev_cols = []
    if nu.degree >= 1:
        prev = coboundary_matrix(nu.action, nu.degree - 1)
        prev_cols = [prev.column(c) for c in range(prev.cols)]
    ncoords = len(nu.flatten())
    system = Matrix.from_columns(rep_cols + prev_cols, f, nrows=ncoords)
    x = system.solve(nu.flatten())
    if x is None:
        raise NotACocycleError("cocycle failed to decompose; internal inconsistency")
    return CohomologyClass(space, tuple(x[: space.dim_H]), nu)
