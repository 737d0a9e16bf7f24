"""Numerical Stratonovich-Weyl kernel on SU(3)/U(2).

The reference kernel w0 is expanded over the zero-weight SU(2)_23-singlet
tensors, which are exactly the diagonal operators whose entries depend only
on n1.  Those form a (lambda+1)-dimensional commutative space on which the
adjoint quadratic Casimir sum_ij ad(C_ij) ad(C_ji) acts as the symmetric
tridiagonal matrix built below; its eigenvectors, orthonormalized under the
trace inner product and signed positive at the highest weight, are the
tensors T_sigma.  The kernel is

    w0 = sum_sigma c_sigma T_sigma,
    c_sigma = sqrt(2 (sigma+1)^3 / ((lambda+1)(lambda+2))),

and symbols are W_X(Omega) = tr(D(Omega) w0 D(Omega)^dag X).  All phase
space integrals carry the coset measure

    dOmega = da2 da1 sin(b1) db1 (1 - cos b2)/4 sin(b2) db2

with total volume 4 pi^2 and traciality prefactor (lambda+1)(lambda+2)/(8 pi^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_legendre

from .groupops import CosetPoint, displacement, su2_rotation
from .irrep import IrrepSpace, LinearOperator

TRACE_ORTHONORMALITY_TOL = 1e-10


class KernelConstructionError(RuntimeError):
    """Raised when the invariant-tensor construction degenerates."""


@dataclass(frozen=True, eq=False)
class TensorBasis:
    """Orthonormal diagonal tensors T_sigma, sigma = 0..lambda.

    functions[sigma, m] is f_sigma(n1 = m); T_sigma = sum_n f_sigma(n1)|n><n|.
    """

    space: IrrepSpace
    functions: np.ndarray            # (lam+1, lam+1)
    casimir_eigenvalues: np.ndarray  # (lam+1,), strictly increasing

    @property
    def lam(self) -> int:
        return self.space.lam

    def operator(self, sigma: int) -> LinearOperator:
        diag = self.functions[sigma][self.space.occupations[:, 0]]
        return LinearOperator(self.space, np.diag(diag.astype(np.complex128)),
                              hermitian=True)


def _restricted_adjoint_casimir(lam: int) -> np.ndarray:
    """Adjoint Casimir on n1-dependent diagonal operators, orthonormal basis.

    Acting on a function x(m) of m = n1,

        (L x)(m) = 2 (m+1)(lam-m) (x(m) - x(m+1))
                 + 2 m (lam-m+2)  (x(m) - x(m-1)),

    which in the trace-orthonormalized indicator basis (weight lam+1-m)
    becomes the symmetric tridiagonal matrix returned here.
    """
    m = np.arange(lam + 1, dtype=np.float64)
    diag = 2.0 * ((m + 1) * (lam - m) + m * (lam - m + 2))
    a = np.arange(lam, dtype=np.float64)
    off = -2.0 * (a + 1) * np.sqrt((lam - a) * (lam + 1 - a))
    mat = np.diag(diag)
    mat[np.arange(lam), np.arange(1, lam + 1)] = off
    mat[np.arange(1, lam + 1), np.arange(lam)] = off
    return mat


def build_invariant_tensors(space_or_lam) -> TensorBasis:
    """Diagonalize the restricted adjoint Casimir; sort, normalize, fix signs."""
    from .irrep import space_for

    space = space_or_lam if isinstance(space_or_lam, IrrepSpace) \
        else space_for(space_or_lam)
    lam = space.lam
    evals, evecs = np.linalg.eigh(_restricted_adjoint_casimir(lam))
    gaps = np.diff(evals)
    if lam >= 1 and np.min(gaps) < 1e-6 * max(1.0, evals[-1]):
        raise KernelConstructionError(
            f"degenerate adjoint-Casimir eigenvalues at lambda={lam}: {evals}")
    weight = np.sqrt(lam + 1 - np.arange(lam + 1, dtype=np.float64))
    functions = np.empty((lam + 1, lam + 1))
    for sigma in range(lam + 1):
        f = evecs[:, sigma] / weight
        if f[lam] < 0:
            f = -f
        if f[lam] == 0.0:
            raise KernelConstructionError(
                f"tensor sigma={sigma} vanishes at the highest weight")
        functions[sigma] = f
    return TensorBasis(space=space, functions=functions,
                       casimir_eigenvalues=evals)


@dataclass(frozen=True, eq=False)
class WignerKernel:
    space: IrrepSpace
    tensors: TensorBasis
    coefficients: np.ndarray  # c_sigma
    w0: LinearOperator
    profile: np.ndarray       # w0 diagonal value as a function of n1

    @property
    def lam(self) -> int:
        return self.space.lam

    @property
    def traciality_prefactor(self) -> float:
        lam = self.lam
        return (lam + 1.0) * (lam + 2.0) / (8.0 * math.pi**2)


def build_kernel(tensors: TensorBasis) -> WignerKernel:
    lam = tensors.lam
    sigma = np.arange(lam + 1, dtype=np.float64)
    c = np.sqrt(2.0 * (sigma + 1.0) ** 3 / ((lam + 1.0) * (lam + 2.0)))
    profile = c @ tensors.functions
    diag = profile[tensors.space.occupations[:, 0]]
    w0 = LinearOperator(tensors.space, np.diag(diag.astype(np.complex128)),
                        hermitian=True)
    trace = float(np.sum(diag))
    if abs(trace - 1.0) > TRACE_ORTHONORMALITY_TOL:
        raise KernelConstructionError(f"kernel trace {trace} != 1")
    return WignerKernel(space=tensors.space, tensors=tensors, coefficients=c,
                        w0=w0, profile=profile)


@lru_cache(maxsize=None)
def kernel_for(lam: int) -> WignerKernel:
    return build_kernel(build_invariant_tensors(int(lam)))


def symbol(kernel: WignerKernel, x: LinearOperator, omega_pt: CosetPoint):
    """W_X(Omega) = tr(D w0 D^dag X); real for hermitian X."""
    if not kernel.space.same_space(x.space):
        raise ValueError("operator lives on a different space")
    d = displacement(kernel.space, omega_pt).matrix
    w_diag = kernel.profile[kernel.space.occupations[:, 0]]
    # sum_n w_n <D[:,n]| X |D[:,n]>
    val = complex(np.einsum("in,n,in->", d.conj(), w_diag, x.matrix @ d))
    return float(val.real) if x.hermitian else val


def highest_weight_profile(kernel: WignerKernel, x) -> np.ndarray:
    """W of |lam00><lam00| as a function of x = cos(beta2_bar), vectorized.

    Binomial mixture of the kernel diagonal: the displaced highest weight
    populates only n3 = 0 states with |amp|^2 = C(lam, m) c^{2m} s^{2(lam-m)}.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    lam = kernel.lam
    c2 = np.clip((1.0 + x) / 2.0, 0.0, 1.0)
    s2 = np.clip((1.0 - x) / 2.0, 0.0, 1.0)
    out = np.zeros_like(x)
    for m in range(lam + 1):
        binom = math.exp(math.lgamma(lam + 1) - math.lgamma(m + 1)
                         - math.lgamma(lam - m + 1))
        out += kernel.profile[m] * binom * c2**m * s2 ** (lam - m)
    return out


def wigner_highest_weight(kernel: WignerKernel, beta2_bar: float) -> float:
    """Highest-weight Wigner function at polar angle beta2_bar, via symbol()."""
    if not -1e-12 <= beta2_bar <= math.pi + 1e-12:
        raise ValueError("beta2_bar must lie in [0, pi]")
    space = kernel.space
    proj = np.zeros((space.dimension, space.dimension), dtype=np.complex128)
    k = space.state_index(space.lam, 0, 0)
    proj[k, k] = 1.0
    x = LinearOperator(space, proj, hermitian=True)
    return symbol(kernel, x, CosetPoint(0.0, 0.0, 0.0, float(beta2_bar)))


def approx_wigner(lam: int, beta2_bar) -> np.ndarray | float:
    """Gaussian approximation A e^{lam (cos b2 - 1)}, A = 4 lam^2/((lam+1)(lam+2))."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    a = 4.0 * lam**2 / ((lam + 1.0) * (lam + 2.0))
    val = a * np.exp(lam * (np.cos(beta2_bar) - 1.0))
    return float(val) if np.isscalar(beta2_bar) else val


def legendre_difference_basis(sigma: int, x) -> np.ndarray:
    """(P_{sigma+1}(x) - P_sigma(x)) / (x - 1), with the x -> 1 limit sigma+1."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(x)
    near = np.abs(x - 1.0) < 1e-9
    safe = ~near
    out[safe] = (eval_legendre(sigma + 1, x[safe]) - eval_legendre(sigma, x[safe])) \
        / (x[safe] - 1.0)
    out[near] = sigma + 1.0
    return out


def fit_legendre_structure(kernel: WignerKernel, n_nodes: int = 200):
    """Fit the highest-weight profile onto the Legendre-difference basis.

    Returns (coefficients, relative residual); the coefficients are the
    numerically recovered expansion weights of the closed Legendre-sum form.
    """
    x, _ = leggauss(n_nodes)
    target = highest_weight_profile(kernel, x)
    basis = np.stack([legendre_difference_basis(s, x)
                      for s in range(kernel.lam + 1)], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = float(np.max(np.abs(basis @ coeffs - target))
                     / np.max(np.abs(target)))
    return coeffs, residual


# ---------------------------------------------------------------------------
# Phase-space quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Product grid realizing the coset measure, total weight 4 pi^2.

    alpha nodes are periodic-uniform; beta nodes are Gauss-Legendre in
    u = cos(beta), with the (1-u)/4 factor absorbed into the beta2 weights.
    """

    alpha1: np.ndarray
    alpha2: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    w_alpha1: np.ndarray
    w_alpha2: np.ndarray
    w_beta1: np.ndarray
    w_beta2: np.ndarray

    @property
    def total_weight(self) -> float:
        return float(self.w_alpha1.sum() * self.w_alpha2.sum()
                     * self.w_beta1.sum() * self.w_beta2.sum())

    @property
    def weights(self) -> np.ndarray:
        """Flattened weights, index order (alpha1, beta1, alpha2, beta2)."""
        w = (self.w_alpha1[:, None, None, None] * self.w_beta1[None, :, None, None]
             * self.w_alpha2[None, None, :, None] * self.w_beta2[None, None, None, :])
        return w.ravel()

    def points(self):
        """Node coordinates as four flat arrays aligned with `weights`."""
        a1, b1, a2, b2 = np.meshgrid(self.alpha1, self.beta1, self.alpha2,
                                     self.beta2, indexing="ij")
        return a1.ravel(), b1.ravel(), a2.ravel(), b2.ravel()

    def refined(self) -> "QuadratureGrid":
        return build_quadrature(2 * len(self.alpha1), 2 * len(self.beta1))


def build_quadrature(n_alpha: int = 32, n_beta: int = 48) -> QuadratureGrid:
    if n_alpha < 4 or n_beta < 4:
        raise ValueError("need at least 4 nodes per dimension")
    alpha = np.arange(n_alpha) * (2.0 * math.pi / n_alpha)
    w_alpha = np.full(n_alpha, 2.0 * math.pi / n_alpha)
    u1, w1 = leggauss(n_beta)
    u2, w2 = leggauss(n_beta)
    beta1 = np.arccos(u1)[::-1].copy()
    w_beta1 = w1[::-1].copy()
    beta2 = np.arccos(u2)[::-1].copy()
    w_beta2 = (w2 * (1.0 - u2) / 4.0)[::-1].copy()
    return QuadratureGrid(alpha1=alpha, alpha2=alpha.copy(), beta1=beta1,
                          beta2=beta2, w_alpha1=w_alpha, w_alpha2=w_alpha.copy(),
                          w_beta1=w_beta1, w_beta2=w_beta2)


def integrate(grid: QuadratureGrid, f) -> float:
    """Integrate f(alpha1, beta1, alpha2, beta2) (vectorized) over the coset."""
    a1 = grid.alpha1[:, None, None, None]
    b1 = grid.beta1[None, :, None, None]
    a2 = grid.alpha2[None, None, :, None]
    b2 = grid.beta2[None, None, None, :]
    values = f(a1, b1, a2, b2)
    w = (grid.w_alpha1[:, None, None, None] * grid.w_beta1[None, :, None, None]
         * grid.w_alpha2[None, None, :, None] * grid.w_beta2[None, None, None, :])
    return float(np.sum(values * w))


# ---------------------------------------------------------------------------
# Symbol fields on product grids (harmonic factorization)
# ---------------------------------------------------------------------------

def _charge_arrays(space: IrrepSpace):
    occ = space.occupations
    two_k23 = occ[:, 1] - occ[:, 2]
    two_k12 = occ[:, 0] - occ[:, 1]
    return two_k23, two_k12


def symbol_field(kernel: WignerKernel, x: LinearOperator,
                 grid: QuadratureGrid) -> np.ndarray:
    """W_X on the full product grid, shape (n_a1, n_b1, n_a2, n_b2).

    Exact harmonic factorization: D = P1 B1 P1^dag P2 B2 P2^dag with all P
    diagonal and w0 commuting with P2, so the alpha dependence reduces to
    integer harmonics read off the 23- and 12-charges of the matrix entries.
    Intended for moderate dimensions (the field machinery for large-lambda
    sweeps lives in the semiclassical module).
    """
    space = kernel.space
    if not space.same_space(x.space):
        raise ValueError("operator lives on a different space")
    d = space.dimension
    two_k23, two_k12 = _charge_arrays(space)
    d23 = two_k23[:, None] - two_k23[None, :]
    d12 = two_k12[:, None] - two_k12[None, :]

    xm = x.matrix
    charges = sorted({int(g) for g in np.unique(d23[np.abs(xm) > 0])})
    parts = {g: np.where(d23 == g, xm, 0.0) for g in charges}

    w_diag = kernel.profile[space.occupations[:, 0]]
    n_a1, n_b1 = len(grid.alpha1), len(grid.beta1)
    n_a2, n_b2 = len(grid.alpha2), len(grid.beta2)

    # harmonic bins: p2 = g2 - d23 (doubled alpha1 harmonic), h2 = d12
    p2_max = int(max(abs(g - d) for g in (charges[0], charges[-1])
                     for d in (int(d23.min()), int(d23.max()))))
    p2_max = max(p2_max, 1)
    h2_max = int(max(np.abs(d12).max(), 1))
    n_p, n_h = 2 * p2_max + 1, 2 * h2_max + 1

    m_cache = []
    for b2 in grid.beta2:
        b2rot = su2_rotation(space, 1, 2, 0.0, float(b2), 0.0).matrix
        m_cache.append((b2rot * w_diag[None, :]) @ b2rot.conj().T)

    coeff = np.zeros((n_b1, n_b2, n_p, n_h), dtype=np.complex128)
    flat_h = (d12 + h2_max).ravel()
    for ib1, b1 in enumerate(grid.beta1):
        b1rot = su2_rotation(space, 2, 3, 0.0, float(b1), 0.0).matrix
        for g, xg in parts.items():
            z = b1rot.conj().T @ xg @ b1rot
            flat_p = (g - d23 + p2_max).ravel()
            bins = flat_p * n_h + flat_h
            for ib2 in range(n_b2):
                prod = (z * m_cache[ib2].T).ravel()
                re = np.bincount(bins, weights=prod.real, minlength=n_p * n_h)
                im = np.bincount(bins, weights=prod.imag, minlength=n_p * n_h)
                coeff[ib1, ib2] += (re + 1j * im).reshape(n_p, n_h)

    p_vals = (np.arange(n_p) - p2_max) / 2.0
    h_vals = (np.arange(n_h) - h2_max) / 2.0
    e1 = np.exp(1j * np.outer(grid.alpha1, p_vals))  # (n_a1, n_p)
    e2 = np.exp(1j * np.outer(grid.alpha2, h_vals))  # (n_a2, n_h)
    field = np.einsum("ap,bcph,eh->abec", e1, coeff, e2, optimize=True)
    if x.hermitian:
        return field.real
    return field


def quantum_wigner_slice(kernel: WignerKernel, amplitudes: np.ndarray,
                         alpha2: np.ndarray, beta2: np.ndarray) -> np.ndarray:
    """W of a pure state on the alpha1 = beta1 = 0 slice, shape (n_a2, n_b2).

    There D(Omega) = P2 B2 P2^dag with diagonal P2, so
    W = sum_n w0(n1) |(B2^dag P2^dag psi)_n|^2, evaluated blockwise.
    """
    from .groupops import _su2_blocks

    space = kernel.space
    occ = space.occupations
    m12 = (occ[:, 0] - occ[:, 1]) / 2.0
    w_diag = kernel.profile[occ[:, 0]]
    phased = amplitudes[:, None] * np.exp(1j * np.outer(m12, alpha2))  # (d, n_a2)
    out = np.empty((len(alpha2), len(beta2)))
    blocks = _su2_blocks(space, 1, 2)
    for j, b2 in enumerate(beta2):
        acc = np.zeros(len(alpha2))
        for idx, block in blocks.rotation_blocks(0.0, -float(b2), 0.0):
            u = block @ phased[idx, :]
            acc += w_diag[idx] @ (u.real**2 + u.imag**2)
        out[:, j] = acc
    return out


def traciality_check(kernel: WignerKernel, grid: QuadratureGrid,
                     x: LinearOperator, y: LinearOperator) -> float:
    """Relative error of tr(XY) vs the normalized phase-space overlap."""
    if not (x.hermitian and y.hermitian):
        raise ValueError("traciality check expects hermitian operators")
    lhs = float(np.trace(x.matrix @ y.matrix).real)
    fx = symbol_field(kernel, x, grid)
    fy = symbol_field(kernel, y, grid)
    w = (grid.w_alpha1[:, None, None, None] * grid.w_beta1[None, :, None, None]
         * grid.w_alpha2[None, None, :, None] * grid.w_beta2[None, None, None, :])
    rhs = kernel.traciality_prefactor * float(np.sum(fx * fy * w))
    scale = max(abs(lhs), 1e-12)
    return abs(lhs - rhs) / scale
