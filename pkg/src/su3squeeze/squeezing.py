"""The isotropic observable family K(alpha3, beta3, chi) and its variance.

Every member of the family is a fixed linear combination of four hermitian
basis operators

    A1 = C13 + C31          A2 = -i (C13 - C31)
    A3 = C12 + C21          A4 = -i (C12 - C21)

with direction-dependent real coefficients q(d) on the unit 3-sphere:

    q = ( cos(b3/2) cos(chi/2),
          cos(b3/2) sin(chi/2),
         -sin(b3/2) cos(a3 - chi/2),
          sin(b3/2) sin(a3 - chi/2) )

Variances therefore reduce to a quadratic form q^T S q - (q . m)^2 built
from a handful of matrix-vector products, which is what the direction
search evaluates; K^2 is never formed densely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.optimize
import scipy.sparse

from .groupops import CosetPoint, apply_displacement, displacement
from .irrep import IrrepSpace, LinearOperator, StateVector, generator, generator_triplets

FOUR_PI = 4.0 * math.pi
SPARSE_LAMBDA_THRESHOLD = 60  # above this, sweeps use triplet-backed operators

DEFAULT_GRID = (24, 12, 24)
DEFAULT_REFINE_TOL = 1e-8
DEFAULT_MAX_ITER = 500


@dataclass(frozen=True)
class Direction:
    """Observable-family direction (alpha3, beta3, chi), chi mod 4 pi."""

    alpha3: float
    beta3: float
    chi: float

    def __post_init__(self):
        for name in ("alpha3", "beta3", "chi"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "chi", self.chi % FOUR_PI)


@dataclass(frozen=True)
class SqueezingResult:
    time: float
    best_direction: Direction
    min_variance: float
    threshold: float
    degraded: bool = False

    def __post_init__(self):
        if self.min_variance < 0.0:
            object.__setattr__(self, "min_variance", 0.0)


def direction_coefficients(alpha3, beta3, chi) -> np.ndarray:
    """Unit 4-vector q(d); accepts scalars or broadcastable arrays."""
    a3, b3, ch = np.broadcast_arrays(np.asarray(alpha3, dtype=float),
                                     np.asarray(beta3, dtype=float),
                                     np.asarray(chi, dtype=float))
    cb, sb = np.cos(b3 / 2.0), np.sin(b3 / 2.0)
    return np.stack([cb * np.cos(ch / 2.0),
                     cb * np.sin(ch / 2.0),
                     -sb * np.cos(a3 - ch / 2.0),
                     sb * np.sin(a3 - ch / 2.0)], axis=-1)


def direction_from_coefficients(q: np.ndarray) -> Direction:
    """Canonical (alpha3 in [0,2pi), beta3 in [0,pi], chi in [0,4pi)) from q."""
    q = np.asarray(q, dtype=float)
    q = q / np.linalg.norm(q)
    r12 = math.hypot(q[0], q[1])
    r34 = math.hypot(q[2], q[3])
    beta3 = 2.0 * math.atan2(r34, r12)
    half_chi = math.atan2(q[1], q[0]) if r12 > 1e-15 else 0.0
    psi = math.atan2(q[3], -q[2]) if r34 > 1e-15 else 0.0
    return Direction((psi + half_chi) % (2.0 * math.pi), beta3, (2.0 * half_chi) % FOUR_PI)


@lru_cache(maxsize=None)
def _basis_operators(space: IrrepSpace, sparse: bool):
    """The four hermitian building blocks (dense ndarray or CSR)."""
    def build(i, j, anti):
        if sparse:
            r1, c1, v1 = generator_triplets(space, i, j)
            r2, c2, v2 = generator_triplets(space, j, i)
            rows = np.concatenate([r1, r2])
            cols = np.concatenate([c1, c2])
            if anti:
                vals = np.concatenate([-1j * v1, 1j * v2])
            else:
                vals = np.concatenate([v1 + 0j, v2 + 0j])
            return scipy.sparse.csr_matrix((vals, (rows, cols)),
                                           shape=(space.dimension, space.dimension))
        a = generator(space, i, j).matrix
        b = generator(space, j, i).matrix
        return (-1j * (a - b)) if anti else (a + b)

    return (build(1, 3, False), build(1, 3, True), build(1, 2, False), build(1, 2, True))


def _appliers(space: IrrepSpace):
    return _basis_operators(space, space.lam > SPARSE_LAMBDA_THRESHOLD)


def k_operator(space: IrrepSpace, d: Direction) -> LinearOperator:
    """K(alpha3, beta3, chi) as a dense hermitian operator."""
    q = direction_coefficients(d.alpha3, d.beta3, d.chi)
    ops = _basis_operators(space, False)
    m = sum(qk * op for qk, op in zip(q, ops))
    m = (m + m.conj().T) / 2.0  # scrub roundoff so the hermitian flag holds
    return LinearOperator(space, m, hermitian=True)


def k_perp(space: IrrepSpace, omega: CosetPoint, d: Direction) -> LinearOperator:
    """K_perp = D(omega) K(d) D(omega)^{-1}."""
    k = k_operator(space, d).matrix
    dm = displacement(space, omega).matrix
    m = dm @ k @ dm.conj().T
    m = (m + m.conj().T) / 2.0
    return LinearOperator(space, m, hermitian=True)


@dataclass(frozen=True)
class DirectionMoments:
    """Second and first moments of (A1..A4) in a fixed state (or phase-space
    density); variance of any family member is a quadratic form in q."""

    second: np.ndarray  # (4, 4) real symmetric, sym part of <A_k A_l>
    first: np.ndarray   # (4,) real <A_k>

    @classmethod
    def from_state(cls, state: StateVector, omega: CosetPoint | None = None):
        """Moments of K_perp(omega; .) in `state` via phi = D(omega)^dag psi."""
        space = state.space
        phi = state.amplitudes
        if omega is not None:
            phi = apply_displacement(space, omega, phi, adjoint=True)
        w = [op @ phi for op in _appliers(space)]
        second = np.empty((4, 4))
        first = np.empty(4)
        for k in range(4):
            first[k] = np.vdot(phi, w[k]).real
            for l in range(k, 4):
                second[k, l] = second[l, k] = np.vdot(w[k], w[l]).real
        return cls(second=second, first=first)

    def variance(self, q: np.ndarray):
        """q^T S q - (q . m)^2, vectorized over leading axes of q."""
        q = np.asarray(q, dtype=float)
        quad = np.einsum("...i,ij,...j->...", q, self.second, q)
        lin = q @ self.first
        return quad - lin * lin

    def variance_of_direction(self, d: Direction) -> float:
        return float(self.variance(direction_coefficients(d.alpha3, d.beta3, d.chi)))


def variance_of_direction(state: StateVector, omega: CosetPoint | None,
                          d: Direction) -> float:
    """Var of K_perp(omega; d) in `state` (omega None means K itself)."""
    return DirectionMoments.from_state(state, omega).variance_of_direction(d)


def _grid_angles(grid_shape):
    na, nb, nc = grid_shape
    alpha3 = np.arange(na) * (2.0 * math.pi / na)
    beta3 = np.linspace(0.0, math.pi, nb)
    chi = np.arange(nc) * (FOUR_PI / nc)
    return alpha3, beta3, chi


def minimize_direction_variance(moments: DirectionMoments,
                                grid_shape=DEFAULT_GRID,
                                refine_tol: float = DEFAULT_REFINE_TOL,
                                max_iter: int = DEFAULT_MAX_ITER,
                                start: Direction | None = None):
    """Coarse grid + Nelder-Mead refinement; never exceeds the grid value.

    Returns (direction, variance, degraded).
    """
    a3, b3, ch = _grid_angles(grid_shape)
    aa, bb, cc = np.meshgrid(a3, b3, ch, indexing="ij")
    q = direction_coefficients(aa.ravel(), bb.ravel(), cc.ravel())
    values = moments.variance(q)
    best = int(np.argmin(values))
    x0 = np.array([aa.ravel()[best], bb.ravel()[best], cc.ravel()[best]])
    best_val = float(values[best])
    if start is not None:
        warm = moments.variance_of_direction(start)
        if warm < best_val:
            x0 = np.array([start.alpha3, start.beta3, start.chi])
            best_val = warm

    def objective(x):
        return float(moments.variance(direction_coefficients(x[0], x[1], x[2])))

    res = scipy.optimize.minimize(objective, x0, method="Nelder-Mead",
                                  options={"fatol": refine_tol, "xatol": 1e-6,
                                           "maxiter": max_iter, "maxfev": 4 * max_iter})
    degraded = not bool(res.success)
    if res.fun <= best_val:
        x, val = res.x, float(res.fun)
    else:
        x, val = x0, best_val
    d = direction_from_coefficients(direction_coefficients(x[0], x[1], x[2]))
    return d, max(val, 0.0), degraded


def minimize_variance(state: StateVector, omega: CosetPoint,
                      grid_shape=DEFAULT_GRID, refine_tol: float = DEFAULT_REFINE_TOL,
                      max_iter: int = DEFAULT_MAX_ITER, time: float = float("nan"),
                      start: Direction | None = None) -> SqueezingResult:
    """Smallest Var(K_perp(omega; d)) over directions d for a given state."""
    moments = DirectionMoments.from_state(state, omega)
    d, val, degraded = minimize_direction_variance(moments, grid_shape, refine_tol,
                                                   max_iter, start=start)
    return SqueezingResult(time=time, best_direction=d, min_variance=val,
                           threshold=float(state.space.lam), degraded=degraded)


def random_direction(rng) -> Direction:
    return Direction(rng.uniform(0.0, 2.0 * math.pi),
                     rng.uniform(0.0, math.pi),
                     rng.uniform(0.0, FOUR_PI))


def isotropy_samples(space: IrrepSpace, omega: CosetPoint, n_samples: int,
                     seed: int | None = 0):
    """Per-direction variances of K_perp on |omega>, explicit operator route.

    Deliberately avoids the moment shortcut: builds the dense conjugated
    operator and applies it to the coherent-state vector, so isotropy is a
    nontrivial numerical outcome rather than an identity of the evaluator.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    from .groupops import coherent_state_closed_form
    from .irrep import variance as op_variance

    rng = np.random.default_rng(seed)
    state = coherent_state_closed_form(space, omega)
    dm = displacement(space, omega).matrix
    out = []
    for _ in range(n_samples):
        d = random_direction(rng)
        k = k_operator(space, d).matrix
        kp = dm @ k @ dm.conj().T
        kp = (kp + kp.conj().T) / 2.0
        v = op_variance(state, LinearOperator(space, kp, hermitian=True))
        out.append((d, v))
    return out


def isotropy_check(space: IrrepSpace, omega: CosetPoint, n_samples: int,
                   seed: int | None = 0):
    """Max over sampled directions of |Var_{|omega>}(K_perp) - lambda|."""
    samples = isotropy_samples(space, omega, n_samples, seed)
    return max(abs(v - space.lam) for _, v in samples)
