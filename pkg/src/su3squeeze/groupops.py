"""SU(2)-subgroup rotations, displacements, coherent states, mean vector.

Conventions fixed here (and certified by the dual-construction test
against the multinomial product form):

    R_ij(eta, theta, phi) = exp(-i eta Jz) exp(-i theta Jy) exp(-i phi Jz)
    Jz = (C_ii - C_jj) / 2,   Jy = (C_ij - C_ji) / (2i)

    D(omega) = R_23(a1, b1, -a1) R_12(a2, b2, -a2)

Rotations are computed by unitary diagonalization of Jy.  Jy is block
diagonal over the spectator-mode occupation, so the diagonalization is
done per block; applying a rotation to a vector costs O(lambda^3) total,
which keeps lambda = 80 sweeps cheap without any dense d x d unitaries.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .irrep import IrrepSpace, LinearOperator, StateVector, highest_weight_state

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CosetPoint:
    """Coordinates omega = (alpha1, beta1, alpha2, beta2) on S^4 = SU(3)/U(2)."""

    alpha1: float
    beta1: float
    alpha2: float
    beta2: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            object.__setattr__(self, name, float(getattr(self, name)) % TWO_PI)
        for name in ("beta1", "beta2"):
            b = float(getattr(self, name))
            if not -1e-12 <= b <= math.pi + 1e-12:
                raise ValueError(f"{name} must lie in [0, pi], got {b}")
            object.__setattr__(self, name, min(max(b, 0.0), math.pi))


@dataclass(frozen=True)
class StabilizerElement:
    """U(2) stabilizer element R_23(a3, b3, -a3) e^{-i g1 h1} e^{-i g2 h2}."""

    alpha3: float
    beta3: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        b = float(self.beta3)
        if not -1e-12 <= b <= math.pi + 1e-12:
            raise ValueError(f"beta3 must lie in [0, pi], got {b}")
        object.__setattr__(self, "beta3", min(max(b, 0.0), math.pi))

    @property
    def chi(self) -> float:
        return 6.0 * self.gamma1 + self.gamma2


class _SU2Blocks:
    """Per-block eigen-data of (Jz, Jy) for one SU(2) subgroup pair."""

    def __init__(self, space: IrrepSpace, i: int, j: int):
        occ = space.occupations
        spectator = ({1, 2, 3} - {i, j}).pop()
        self.blocks = []
        for s in range(space.lam + 1):
            idx = np.nonzero(occ[:, spectator - 1] == s)[0]
            if idx.size == 0:
                continue
            # order by descending n_i: Jz eigenvalues m = j, j-1, ..., -j
            order = np.argsort(-occ[idx, i - 1], kind="stable")
            idx = idx[order]
            ni = occ[idx, i - 1].astype(np.float64)
            nj = occ[idx, j - 1].astype(np.float64)
            m = (ni - nj) / 2.0
            n = idx.size
            jy = np.zeros((n, n), dtype=np.complex128)
            for p in range(1, n):
                # C_ij raises n_i: source p -> target p-1, element sqrt((n_i+1) n_j)
                amp = math.sqrt((ni[p] + 1.0) * nj[p])
                jy[p - 1, p] += amp / 2j
                jy[p, p - 1] -= amp / 2j
            evals, evecs = np.linalg.eigh(jy)
            self.blocks.append((idx, m, evals, evecs))

    def rotation_blocks(self, eta: float, theta: float, phi: float):
        for idx, m, evals, evecs in self.blocks:
            core = (evecs * np.exp(-1j * theta * evals)) @ evecs.conj().T
            block = np.exp(-1j * eta * m)[:, None] * core * np.exp(-1j * phi * m)[None, :]
            yield idx, block

    def apply(self, eta: float, theta: float, phi: float, vec: np.ndarray) -> np.ndarray:
        out = np.empty_like(vec, dtype=np.complex128)
        for idx, block in self.rotation_blocks(eta, theta, phi):
            out[idx] = block @ vec[idx]
        return out

    def dense(self, space: IrrepSpace, eta: float, theta: float, phi: float) -> np.ndarray:
        out = np.zeros((space.dimension, space.dimension), dtype=np.complex128)
        for idx, block in self.rotation_blocks(eta, theta, phi):
            out[np.ix_(idx, idx)] = block
        return out


@lru_cache(maxsize=None)
def _su2_blocks(space: IrrepSpace, i: int, j: int) -> _SU2Blocks:
    return _SU2Blocks(space, i, j)


def _canonical_pair(i: int, j: int):
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError(f"mode indices must be in 1..3, got ({i}, {j})")
    if i == j:
        raise ValueError("su2 rotation requires two distinct modes")
    return ((i, j), 1.0) if i < j else ((j, i), -1.0)


def su2_rotation(space: IrrepSpace, i: int, j: int, eta: float, theta: float,
                 phi: float) -> LinearOperator:
    """Unitary R_ij(eta, theta, phi) as a dense operator."""
    (a, b), sign = _canonical_pair(i, j)
    blocks = _su2_blocks(space, a, b)
    m = blocks.dense(space, sign * eta, sign * theta, sign * phi)
    return LinearOperator(space, m, hermitian=False)


def apply_su2_rotation(space: IrrepSpace, i: int, j: int, eta: float, theta: float,
                       phi: float, vec: np.ndarray) -> np.ndarray:
    """R_ij applied to an amplitude vector without forming the dense matrix."""
    (a, b), sign = _canonical_pair(i, j)
    return _su2_blocks(space, a, b).apply(sign * eta, sign * theta, sign * phi, vec)


def displacement(space: IrrepSpace, omega: CosetPoint) -> LinearOperator:
    """D(omega) = R_23(a1, b1, -a1) R_12(a2, b2, -a2)."""
    r23 = su2_rotation(space, 2, 3, omega.alpha1, omega.beta1, -omega.alpha1)
    r12 = su2_rotation(space, 1, 2, omega.alpha2, omega.beta2, -omega.alpha2)
    return LinearOperator(space, r23.matrix @ r12.matrix, hermitian=False)


def apply_displacement(space: IrrepSpace, omega: CosetPoint, vec: np.ndarray,
                       adjoint: bool = False) -> np.ndarray:
    """D(omega) (or its adjoint) applied to a vector via the block path."""
    if adjoint:
        # D^dag = R_12(a2, b2, -a2)^dag R_23(a1, b1, -a1)^dag; R(e,t,p)^-1 = R(-p,-t,-e)
        out = apply_su2_rotation(space, 2, 3, omega.alpha1, -omega.beta1,
                                 -omega.alpha1, vec)
        return apply_su2_rotation(space, 1, 2, omega.alpha2, -omega.beta2,
                                  -omega.alpha2, out)
    out = apply_su2_rotation(space, 1, 2, omega.alpha2, omega.beta2,
                             -omega.alpha2, vec)
    return apply_su2_rotation(space, 2, 3, omega.alpha1, omega.beta1,
                              -omega.alpha1, out)


def coherent_state(space: IrrepSpace, omega: CosetPoint) -> StateVector:
    """|omega> = D(omega)|lambda 0 0> through the displacement route."""
    amp = apply_displacement(space, omega, highest_weight_state(space).amplitudes)
    return StateVector(space, amp)


def single_qutrit_amplitudes(omega: CosetPoint) -> np.ndarray:
    """(c1, c2, c3) of the one-qutrit factor of |omega>."""
    c1 = math.cos(omega.beta2 / 2.0)
    c2 = cmath.exp(1j * omega.alpha2) * math.cos(omega.beta1 / 2.0) * math.sin(omega.beta2 / 2.0)
    c3 = cmath.exp(1j * (omega.alpha1 + omega.alpha2)) * math.sin(omega.beta1 / 2.0) \
        * math.sin(omega.beta2 / 2.0)
    return np.array([c1, c2, c3], dtype=np.complex128)


def coherent_state_closed_form(space: IrrepSpace, omega: CosetPoint) -> StateVector:
    """|omega> as the symmetric product of lambda identical qutrit states.

    Amplitude on |n1 n2 n3> is sqrt(lam!/(n1! n2! n3!)) c1^n1 c2^n2 c3^n3.
    """
    c = single_qutrit_amplitudes(omega)
    occ = space.occupations
    lam = space.lam
    log_multinom = math.lgamma(lam + 1)
    half_log = 0.5 * (log_multinom
                      - np.array([math.lgamma(n + 1) for n in occ[:, 0]])
                      - np.array([math.lgamma(n + 1) for n in occ[:, 1]])
                      - np.array([math.lgamma(n + 1) for n in occ[:, 2]]))
    amp = np.exp(half_log).astype(np.complex128)
    for mode in range(3):
        amp *= np.power(c[mode], occ[:, mode])
    amp /= np.linalg.norm(amp)
    return StateVector(space, amp)


def mean_vector(state: StateVector):
    """(<C23>, <C32>, <C12>, <C21>, <C13>, <C31>, <h1>, <h2>)."""
    from .irrep import cartan, expectation, generator  # local to avoid cycle noise

    space = state.space
    pairs = [(2, 3), (3, 2), (1, 2), (2, 1), (1, 3), (3, 1)]
    values = [expectation(state, generator(space, i, j)) for i, j in pairs]
    values.append(expectation(state, cartan(space, "h1")))
    values.append(expectation(state, cartan(space, "h2")))
    return tuple(values)


def stabilizer_operator(space: IrrepSpace, t: StabilizerElement) -> LinearOperator:
    """T = R_23(a3, b3, -a3) e^{-i g1 h1} e^{-i g2 h2} (leaves |lam00> invariant)."""
    occ = space.occupations
    h1 = 2 * occ[:, 0] - occ[:, 1] - occ[:, 2]
    h2 = occ[:, 1] - occ[:, 2]
    phases = np.exp(-1j * (t.gamma1 * h1 + t.gamma2 * h2))
    r23 = su2_rotation(space, 2, 3, t.alpha3, t.beta3, -t.alpha3)
    return LinearOperator(space, r23.matrix * phases[None, :], hermitian=False)


# ---------------------------------------------------------------------------
# Fundamental (lambda = 1) representation: cheap 3x3 coset bookkeeping.
# Used to push coset points through group elements (kernel covariance) and as
# an independent oracle for the coset-representative geometry.
# ---------------------------------------------------------------------------

def _rot3(i: int, j: int, eta: float, theta: float, phi: float) -> np.ndarray:
    jz = np.zeros(3)
    jz[i - 1], jz[j - 1] = 0.5, -0.5
    jy = np.zeros((3, 3), dtype=np.complex128)
    jy[i - 1, j - 1] = 1 / 2j
    jy[j - 1, i - 1] = -1 / 2j
    evals, evecs = np.linalg.eigh(jy)
    core = (evecs * np.exp(-1j * theta * evals)) @ evecs.conj().T
    return np.exp(-1j * eta * jz)[:, None] * core * np.exp(-1j * phi * jz)[None, :]


def fundamental_displacement(omega: CosetPoint) -> np.ndarray:
    """D(omega) in the 3-dimensional defining representation."""
    return _rot3(2, 3, omega.alpha1, omega.beta1, -omega.alpha1) @ \
        _rot3(1, 2, omega.alpha2, omega.beta2, -omega.alpha2)


def coset_coordinates(vec3: np.ndarray, tol: float = 1e-12) -> CosetPoint:
    """Coset coordinates of the ray spanned by a fundamental-rep coherent state.

    Inverts c1 = cos(b2/2), c2 = e^{i a2} cos(b1/2) sin(b2/2),
    c3 = e^{i(a1+a2)} sin(b1/2) sin(b2/2) after stripping the global phase.
    Gauge-degenerate angles (at b2 in {0, pi} or b1 in {0, pi}) are set to 0.
    """
    v = np.asarray(vec3, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    if abs(v[0]) > tol:
        v = v * (v[0].conjugate() / abs(v[0]))
    c1 = min(max(float(v[0].real), 0.0), 1.0)
    beta2 = 2.0 * math.acos(c1)
    r = math.hypot(abs(v[1]), abs(v[2]))
    if r < tol:
        return CosetPoint(0.0, 0.0, 0.0, beta2)
    beta1 = 2.0 * math.atan2(abs(v[2]), abs(v[1]))
    alpha2 = float(np.angle(v[1])) if abs(v[1]) > tol else 0.0
    alpha1 = float(np.angle(v[2])) - alpha2 if abs(v[2]) > tol else 0.0
    return CosetPoint(alpha1, beta1, alpha2, beta2)


def coset_action(g3: np.ndarray, omega: CosetPoint) -> CosetPoint:
    """Coordinates of g . omega, i.e. of the ray g D(omega) |100>."""
    v = g3 @ fundamental_displacement(omega)[:, 0]
    return coset_coordinates(v)


def align_phase(amplitudes: np.ndarray, reference_index: int | None = None) -> np.ndarray:
    """Rotate the global phase so the largest-modulus amplitude is real positive."""
    a = np.asarray(amplitudes, dtype=np.complex128)
    k = int(np.argmax(np.abs(a))) if reference_index is None else reference_index
    z = a[k]
    if abs(z) == 0.0:
        return a.copy()
    return a * (z.conjugate() / abs(z))
