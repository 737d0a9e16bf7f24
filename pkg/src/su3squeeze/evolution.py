"""Exact evolution under H = h1^2 - ((2 lam + 3)/5) h1 and squeezing curves.

H is diagonal in the weight basis, so evolution is a phase multiplication;
the cost of a squeezing curve is dominated by the per-sample direction
search, which runs on the four-operator moment reduction.  The linear
coefficient (2 lam + 3)/5 removes the generator-level component of H, so
the evolved distribution shears without any rigid displacement; time is
dimensionless with hbar = 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .groupops import CosetPoint, apply_displacement, coherent_state_closed_form
from .irrep import IrrepSpace, StateVector, space_for
from .squeezing import (
    DEFAULT_GRID,
    DEFAULT_MAX_ITER,
    DEFAULT_REFINE_TOL,
    Direction,
    DirectionMoments,
    SqueezingResult,
    minimize_direction_variance,
)

B2_INITIAL = math.acos(-1.0 / 5.0)
SCALING_LAMBDAS = (10, 14, 20, 28, 40, 57, 80)


class NoMinimumError(RuntimeError):
    """Raised when a squeezing curve has no interior minimum."""


@dataclass(frozen=True, eq=False)
class DiagonalHamiltonian:
    space: IrrepSpace
    eigenvalues: np.ndarray  # real, E(n1) = h^2 - ((2 lam + 3)/5) h, h = 2n1-n2-n3


def hamiltonian(space: IrrepSpace) -> DiagonalHamiltonian:
    occ = space.occupations
    h = (2 * occ[:, 0] - occ[:, 1] - occ[:, 2]).astype(np.float64)
    coeff = (2.0 * space.lam + 3.0) / 5.0
    return DiagonalHamiltonian(space=space, eigenvalues=h * h - coeff * h)


def evolve(state: StateVector, ham: DiagonalHamiltonian, t: float) -> StateVector:
    """e^{-i H t}|psi>: amplitude-wise phases, norm preserved exactly."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    if not state.space.same_space(ham.space):
        raise ValueError("state and Hamiltonian live on different spaces")
    amp = state.amplitudes * np.exp(-1j * ham.eigenvalues * t)
    return StateVector(state.space, amp)


@dataclass(frozen=True, eq=False)
class SqueezingCurve:
    times: np.ndarray
    min_variances: np.ndarray
    best_directions: tuple[Direction, ...]
    lam: int
    degraded: np.ndarray  # bool per sample

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.min_variances) == len(self.best_directions)
                == len(self.degraded) == n):
            raise ValueError("curve arrays must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.min_variances < 0):
            raise ValueError("variances must be non-negative")


def default_time_window(lam: int) -> float:
    """Scaling-aware window keeping the dip centered: 0.05 (20/lam)^{9/11}."""
    return 0.05 * (20.0 / lam) ** (9.0 / 11.0)


def initial_coset_point() -> CosetPoint:
    """omega = (0, 0, 0, arccos(-1/5)), sitting above the minimum of W_H."""
    return CosetPoint(0.0, 0.0, 0.0, B2_INITIAL)


def squeezing_curve(lam: int, t_max: float | None = None, n_steps: int = 150,
                    grid_shape=DEFAULT_GRID, refine_tol: float = DEFAULT_REFINE_TOL,
                    max_iter: int = DEFAULT_MAX_ITER, warm_start: bool = False,
                    threads: int = 1) -> SqueezingCurve:
    """Minimal-variance curve from the reference initial coherent state."""
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    space = space_for(lam)
    omega = initial_coset_point()
    ham = hamiltonian(space)
    psi0 = coherent_state_closed_form(space, omega).amplitudes
    times = np.linspace(0.0, t_max if t_max is not None else default_time_window(lam),
                        n_steps + 1)

    def sample(k: int, start: Direction | None):
        amp = psi0 * np.exp(-1j * ham.eigenvalues * times[k])
        phi = apply_displacement(space, omega, amp, adjoint=True)
        moments = DirectionMoments.from_state(StateVector(space, phi), None)
        d, val, degraded = minimize_direction_variance(
            moments, grid_shape, refine_tol, max_iter, start=start)
        return d, val, degraded

    directions: list[Direction] = [None] * len(times)
    variances = np.empty(len(times))
    degraded = np.zeros(len(times), dtype=bool)

    if warm_start:
        prev = None
        for k in range(len(times)):
            d, val, bad = sample(k, prev)
            directions[k], variances[k], degraded[k] = d, val, bad
            prev = d
    elif threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for k, (d, val, bad) in enumerate(pool.map(lambda k: sample(k, None),
                                                       range(len(times)))):
                directions[k], variances[k], degraded[k] = d, val, bad
    else:
        for k in range(len(times)):
            d, val, bad = sample(k, None)
            directions[k], variances[k], degraded[k] = d, val, bad

    return SqueezingCurve(times=times, min_variances=variances,
                          best_directions=tuple(directions), lam=lam,
                          degraded=degraded)


def find_minimum(curve_or_lam) -> tuple[float, float]:
    """(t_min, v_min) by parabolic refinement around the discrete argmin."""
    curve = curve_or_lam
    if isinstance(curve_or_lam, (int, np.integer)):
        curve = squeezing_curve(int(curve_or_lam))
    t, v = np.asarray(curve.times), np.asarray(curve.min_variances)
    k = int(np.argmin(v))
    if float(np.ptp(v)) <= 1e-7 * max(1.0, float(np.max(v))):
        raise NoMinimumError("curve is flat to optimizer precision")
    if k == 0 or k == len(v) - 1:
        raise NoMinimumError(
            "curve has no interior minimum; extend or refine the time window")
    t0, t1, t2 = t[k - 1], t[k], t[k + 1]
    v0, v1, v2 = v[k - 1], v[k], v[k + 1]
    denom = (t1 - t0) * (v1 - v2) - (t1 - t2) * (v1 - v0)
    if denom == 0.0:
        return float(t1), float(v1)
    t_min = t1 - 0.5 * ((t1 - t0) ** 2 * (v1 - v2) - (t1 - t2) ** 2 * (v1 - v0)) / denom
    t_min = float(np.clip(t_min, t0, t2))
    # value of the interpolating parabola at its vertex
    coeffs = np.polyfit([t0, t1, t2], [v0, v1, v2], 2)
    v_min = float(np.polyval(coeffs, t_min))
    return t_min, v_min


@dataclass(frozen=True)
class ScalingRow:
    lam: int
    t_min: float
    v_min: float
    degraded_samples: int


@dataclass(frozen=True)
class ScalingStudy:
    exponent_t: float
    exponent_v: float
    rows: tuple[ScalingRow, ...]


class ScalingError(RuntimeError):
    def __init__(self, message: str, partial: tuple[ScalingRow, ...]):
        super().__init__(message)
        self.partial = partial


def scaling_study(lambdas=SCALING_LAMBDAS, n_steps: int = 150,
                  grid_shape=DEFAULT_GRID, threads: int = 1) -> ScalingStudy:
    """Least-squares slopes of log t_min and log(v_min/lam) against log lam."""
    lambdas = tuple(int(l) for l in lambdas)
    if len(lambdas) < 2:
        raise ValueError("need at least two lambda values to fit a slope")

    def one(lam: int) -> ScalingRow:
        curve = squeezing_curve(lam, n_steps=n_steps, grid_shape=grid_shape)
        t_min, v_min = find_minimum(curve)
        return ScalingRow(lam=lam, t_min=t_min, v_min=v_min,
                          degraded_samples=int(np.sum(curve.degraded)))

    rows: list[ScalingRow] = []
    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for row in pool.map(one, lambdas):
                    rows.append(row)
        else:
            for lam in lambdas:
                rows.append(one(lam))
    except NoMinimumError as exc:
        raise ScalingError(f"per-lambda minimum search failed: {exc}",
                           tuple(rows)) from exc

    logl = np.log([r.lam for r in rows])
    slope_t = float(np.polyfit(logl, np.log([r.t_min for r in rows]), 1)[0])
    slope_v = float(np.polyfit(logl, np.log([r.v_min / r.lam for r in rows]), 1)[0])
    return ScalingStudy(exponent_t=slope_t, exponent_v=slope_v, rows=tuple(rows))
