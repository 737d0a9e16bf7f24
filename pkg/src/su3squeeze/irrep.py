"""Symmetric irrep (lambda, 0) of su(3): weight basis, generators, states.

The representation space is spanned by three-mode occupation kets
|n1 n2 n3> with n1+n2+n3 = lambda, on which the nine gl(3) generators act
as C_ij = a_i^dag a_j.  Everything downstream (rotations, coherent states,
squeezing observables, the phase-space kernel) is built from these
matrices, so this module is deliberately small and heavily validated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-12
VARIANCE_FLOOR = -1e-10


@dataclass(frozen=True, order=True)
class BasisState:
    """Occupation triple |n1 n2 n3>."""

    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        if min(self.n1, self.n2, self.n3) < 0:
            raise ValueError(f"occupations must be non-negative, got {self}")

    @property
    def total(self) -> int:
        return self.n1 + self.n2 + self.n3

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)


@dataclass(frozen=True, eq=False)
class IrrepSpace:
    """The (lambda, 0) weight basis in canonical order.

    Canonical order is descending n1, then descending n2.  This keeps all
    states of equal n1 (the h1 eigenspaces) contiguous and makes every
    derived artifact byte-reproducible.
    """

    lam: int
    dimension: int
    basis: tuple[BasisState, ...]
    index: dict
    occupations: np.ndarray  # (dimension, 3) int array, same order as basis

    def state_index(self, n1: int, n2: int, n3: int) -> int:
        return self.index[(n1, n2, n3)]

    def same_space(self, other: "IrrepSpace") -> bool:
        return self.lam == other.lam


def enumerate_basis(lam: int) -> IrrepSpace:
    """Enumerate |n1 n2 n3> with n1+n2+n3 = lam in canonical order."""
    if not isinstance(lam, (int, np.integer)) or lam < 1:
        raise ValueError(f"lambda must be a positive integer, got {lam!r}")
    lam = int(lam)
    states = []
    for n1 in range(lam, -1, -1):
        for n2 in range(lam - n1, -1, -1):
            states.append(BasisState(n1, n2, lam - n1 - n2))
    dim = (lam + 1) * (lam + 2) // 2
    assert len(states) == dim
    index = {s.as_tuple(): k for k, s in enumerate(states)}
    occ = np.array([s.as_tuple() for s in states], dtype=np.int64)
    occ.setflags(write=False)
    return IrrepSpace(lam=lam, dimension=dim, basis=tuple(states), index=index,
                      occupations=occ)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Dense operator on an IrrepSpace, optionally flagged hermitian."""

    space: IrrepSpace
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        d = self.space.dimension
        if m.shape != (d, d):
            raise ValueError(f"matrix shape {m.shape} does not match dimension {d}")
        if not np.all(np.isfinite(m.view(np.float64))):
            raise ValueError("matrix entries must be finite")
        if self.hermitian:
            dev = np.max(np.abs(m - m.conj().T))
            if dev > HERMITICITY_TOL:
                raise ValueError(f"hermitian flag set but max|M - M^dag| = {dev:.3e}")
        object.__setattr__(self, "matrix", m)

    def dagger(self) -> "LinearOperator":
        return LinearOperator(self.space, self.matrix.conj().T, self.hermitian)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        _require_same_space(self, other)
        return LinearOperator(self.space, self.matrix + other.matrix,
                              self.hermitian and other.hermitian)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        _require_same_space(self, other)
        return LinearOperator(self.space, self.matrix - other.matrix,
                              self.hermitian and other.hermitian)

    def __neg__(self) -> "LinearOperator":
        return LinearOperator(self.space, -self.matrix, self.hermitian)

    def __mul__(self, scalar) -> "LinearOperator":
        herm = self.hermitian and float(np.imag(scalar)) == 0.0
        return LinearOperator(self.space, self.matrix * scalar, herm)

    __rmul__ = __mul__

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        _require_same_space(self, other)
        return LinearOperator(self.space, self.matrix @ other.matrix, hermitian=False)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude vector over the canonical basis."""

    space: IrrepSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if a.shape != (self.space.dimension,):
            raise ValueError(f"amplitude shape {a.shape} does not match dimension "
                             f"{self.space.dimension}")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: ||psi|| - 1 = {norm - 1.0:.3e}")
        object.__setattr__(self, "amplitudes", a)


def _require_same_space(a, b) -> None:
    if not a.space.same_space(b.space):
        raise ValueError(f"operands live on different spaces "
                         f"(lambda={a.space.lam} vs lambda={b.space.lam})")


def highest_weight_state(space: IrrepSpace) -> StateVector:
    """|lambda 0 0>, the fiducial state for every coherent-state orbit."""
    amp = np.zeros(space.dimension, dtype=np.complex128)
    amp[space.state_index(space.lam, 0, 0)] = 1.0
    return StateVector(space, amp)


def generator_triplets(space: IrrepSpace, i: int, j: int):
    """Sparse triplet view (rows, cols, values) of C_ij = a_i^dag a_j.

    The dense matrix is the default representation; the triplets exist so
    large-lambda sweeps (lambda > 60) never materialize d x d generators.
    """
    _check_mode_index(i)
    _check_mode_index(j)
    occ = space.occupations
    if i == j:
        vals = occ[:, i - 1].astype(np.float64)
        rows = np.arange(space.dimension)
        return rows, rows.copy(), vals
    src = np.nonzero(occ[:, j - 1] > 0)[0]
    ni = occ[src, i - 1]
    nj = occ[src, j - 1]
    vals = np.sqrt((ni + 1.0) * nj)
    target = occ[src].copy()
    target[:, i - 1] += 1
    target[:, j - 1] -= 1
    rows = np.array([space.index[tuple(t)] for t in target], dtype=np.int64)
    return rows, src, vals


def generator(space: IrrepSpace, i: int, j: int) -> LinearOperator:
    """Matrix of C_ij in the canonical basis (number operator when i = j)."""
    rows, cols, vals = generator_triplets(space, i, j)
    m = np.zeros((space.dimension, space.dimension), dtype=np.complex128)
    m[rows, cols] = vals
    return LinearOperator(space, m, hermitian=(i == j))


def cartan(space: IrrepSpace, which: str) -> LinearOperator:
    """Cartan elements h1 = 2C11 - C22 - C33 and h2 = C22 - C33 (diagonal)."""
    occ = space.occupations
    if which == "h1":
        diag = 2 * occ[:, 0] - occ[:, 1] - occ[:, 2]
    elif which == "h2":
        diag = occ[:, 1] - occ[:, 2]
    else:
        raise ValueError(f"which must be 'h1' or 'h2', got {which!r}")
    return LinearOperator(space, np.diag(diag.astype(np.complex128)), hermitian=True)


def _check_mode_index(i: int) -> None:
    if i not in (1, 2, 3):
        raise ValueError(f"mode index must be 1, 2 or 3, got {i!r}")


def commutator(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    """[A, B] = AB - BA."""
    _require_same_space(a, b)
    m = a.matrix @ b.matrix - b.matrix @ a.matrix
    return LinearOperator(a.space, m, hermitian=False)


def expectation(state: StateVector, op: LinearOperator) -> complex:
    """<psi|A|psi>."""
    _require_same_space(state, op)
    return complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))


def variance(state: StateVector, op: LinearOperator) -> float:
    """<A^2> - <A>^2 for hermitian A, applying A to the vector twice.

    A small negative result (> -1e-10) is numerical noise and is clamped
    to zero; anything below that floor indicates a real bug and raises.
    """
    _require_same_space(state, op)
    if not op.hermitian:
        raise ValueError("variance requires an operator flagged hermitian")
    w = op.matrix @ state.amplitudes
    second = float(np.vdot(w, w).real)
    first = float(np.vdot(state.amplitudes, w).real)
    var = second - first * first
    if var < VARIANCE_FLOOR:
        raise ValueError(f"variance {var:.3e} below the numerical-noise floor")
    return max(var, 0.0)


@lru_cache(maxsize=None)
def _cached_space(lam: int) -> IrrepSpace:
    return enumerate_basis(lam)


def space_for(lam: int) -> IrrepSpace:
    """Shared, cached IrrepSpace (all values are immutable)."""
    return _cached_space(int(lam))
