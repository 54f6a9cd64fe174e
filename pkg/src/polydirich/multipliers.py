"""Multiplication operators T_h : D_alpha -> D_beta and their finite sections.

The finite section of T_h at degree box ``(K, L)`` is the matrix of
``f -> P(h f)`` on polynomials supported in the box, where ``P`` drops every
coefficient outside the box. In the orthonormal bases
``z**m w**n / sqrt(W_alpha(m, n))`` and ``z**k w**l / sqrt(W_beta(k, l))``
its entries are

    M[(k, l), (m, n)] = h[k-m, l-n] * sqrt(W_beta(k, l) / W_alpha(m, n)).

Section norms increase with the box and converge to ``||T_h||`` when h is a
multiplier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from . import _kernels
from .errors import PreconditionError
from .series import TruncatedSeries, evaluate_grid
from .space import (as_weight, eval_functional_norm_1d, succ, succeq,
                    weight_grid)

DENSE_LIMIT = 1024


@dataclass(frozen=True)
class FiniteSectionOperator:
    h: TruncatedSeries
    alpha: object
    beta: object
    deg: tuple
    matrix: np.ndarray | None = field(repr=False)
    sqrt_wa: np.ndarray = field(repr=False)
    sqrt_wb: np.ndarray = field(repr=False)

    @property
    def shape(self):
        n = (self.deg[0] + 1) * (self.deg[1] + 1)
        return (n, n)

    @property
    def is_dense(self) -> bool:
        return self.matrix is not None

    def matvec(self, x: np.ndarray) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix @ x
        K, L = self.deg
        f = x.reshape(K + 1, L + 1) / self.sqrt_wa
        g = fftconvolve(self.h.coeffs, f)[: K + 1, : L + 1]
        return (g * self.sqrt_wb).ravel()

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix.conj().T @ y
        K, L = self.deg
        kh, lh = self.h.deg
        g = y.reshape(K + 1, L + 1) * self.sqrt_wb
        corr = fftconvolve(g, np.conj(self.h.coeffs)[::-1, ::-1])
        f = corr[kh: kh + K + 1, lh: lh + L + 1]
        return (f / self.sqrt_wa).ravel()

    def to_dense(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        return _dense_matrix(self.h.coeffs, self.sqrt_wa, self.sqrt_wb)


def _dense_matrix(hc, sqrt_wa, sqrt_wb):
    K1, L1 = sqrt_wa.shape
    n = K1 * L1
    mat = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n).reshape(K1, L1)
    for p in range(min(hc.shape[0], K1)):
        for q in range(min(hc.shape[1], L1)):
            c = hc[p, q]
            if c == 0:
                continue
            rows = idx[p:, q:].ravel()
            cols = idx[: K1 - p, : L1 - q].ravel()
            mat[rows, cols] = c
    return mat * sqrt_wb.ravel()[:, None] / sqrt_wa.ravel()[None, :]


def finite_section(h: TruncatedSeries, alpha, beta, deg, dense_limit: int = DENSE_LIMIT) -> FiniteSectionOperator:
    """Compression of T_h to the degree box ``deg`` (source and target share it).

    Small boxes get an explicit matrix; larger ones apply the operator as a
    truncated convolution followed by reweighting.
    """
    a, b = as_weight(alpha), as_weight(beta)
    K, L = int(deg[0]), int(deg[1])
    ht = h.resized(min(h.deg_z, K), min(h.deg_w, L))
    sqrt_wa = np.sqrt(weight_grid(a, K, L))
    sqrt_wb = np.sqrt(weight_grid(b, K, L))
    n = (K + 1) * (L + 1)
    mat = _dense_matrix(ht.coeffs, sqrt_wa, sqrt_wb) if n <= dense_limit else None
    if mat is not None:
        mat.setflags(write=False)
    return FiniteSectionOperator(ht, a, b, (K, L), mat, sqrt_wa, sqrt_wb)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    residual: float
    converged: bool


def operator_norm(op: FiniteSectionOperator, tol: float = 1e-12, max_iter: int = 10_000) -> NormEstimate:
    """Largest singular value by power iteration on ``A^H A``.

    Starts from the normalised all-ones vector. The estimates ``||A x_j||``
    are nondecreasing; iteration stops when two successive ones agree to
    ``tol`` (relative). If ``max_iter`` is reached the last estimate is
    returned with ``converged=False``.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    n = op.shape[1]
    x = np.ones(n, dtype=np.complex128) / math.sqrt(n)
    sigma_old = -1.0
    sigma = 0.0
    y = op.matvec(x)
    for it in range(1, max_iter + 1):
        sigma = float(np.linalg.norm(y))
        if sigma == 0.0:
            return NormEstimate(0.0, it, 0.0, True)
        g = op.rmatvec(y)
        if abs(sigma - sigma_old) <= tol * sigma:
            resid = float(np.linalg.norm(g - sigma ** 2 * x)) / sigma ** 2
            return NormEstimate(sigma, it, resid, True)
        sigma_old = sigma
        x = g / np.linalg.norm(g)
        y = op.matvec(x)
    g = op.rmatvec(y)
    resid = float(np.linalg.norm(g - sigma ** 2 * x)) / sigma ** 2
    return NormEstimate(sigma, max_iter, resid, False)


def section_norm(h: TruncatedSeries, alpha, beta, deg, tol: float = 1e-12, max_iter: int = 10_000) -> NormEstimate:
    return operator_norm(finite_section(h, alpha, beta, deg), tol=tol, max_iter=max_iter)


def section_norm_1d(h_coeffs, a: float, b: float, deg: int, tol: float = 1e-12, max_iter: int = 10_000) -> NormEstimate:
    """Finite-section norm of multiplication by a one-variable series."""
    h = TruncatedSeries(np.asarray(h_coeffs, dtype=np.complex128)[:, None])
    return section_norm(h, (a, 0.0), (b, 0.0), (deg, 0), tol=tol, max_iter=max_iter)


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def interpolate_weights(a1, a2, lam: float):
    """``(1 - lam) a1 + lam a2`` componentwise."""
    if not 0.0 <= lam <= 1.0:
        raise PreconditionError(f"lambda must lie in [0, 1], got {lam}")
    u, v = as_weight(a1), as_weight(a2)
    return as_weight(((1.0 - lam) * u.alpha1 + lam * v.alpha1, (1.0 - lam) * u.alpha2 + lam * v.alpha2))


@dataclass(frozen=True)
class InterpolationReport:
    slack: float
    passed: bool
    norm_mid: float
    norm_1: float
    norm_2: float
    converged: bool


def interpolation_inequality_check(h, pair1, pair2, lam, deg, tol=1e-9, norm_tol=1e-13,
                                   max_iter=10_000) -> InterpolationReport:
    """Compare ``||T_h||_{alpha,beta}`` with the geometric mean bound.

    ``slack = ||T_h||_{a1,b1}**(1-lam) * ||T_h||_{a2,b2}**lam - ||T_h||_{a,b}``
    with all three norms taken on the same finite section.
    """
    (a1, b1), (a2, b2) = pair1, pair2
    a = interpolate_weights(a1, a2, lam)
    b = interpolate_weights(b1, b2, lam)
    n1 = section_norm(h, a1, b1, deg, tol=norm_tol, max_iter=max_iter)
    n2 = section_norm(h, a2, b2, deg, tol=norm_tol, max_iter=max_iter)
    if lam == 0.0:
        nm = n1
    elif lam == 1.0:
        nm = n2
    else:
        nm = section_norm(h, a, b, deg, tol=norm_tol, max_iter=max_iter)
    rhs = n1.value ** (1.0 - lam) * n2.value ** lam
    slack = rhs - nm.value
    ok = n1.converged and n2.converged and nm.converged
    return InterpolationReport(slack, slack >= -tol, nm.value, n1.value, n2.value, ok)


# ---------------------------------------------------------------------------
# pointwise bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointwiseReport:
    max_ratio: float
    max_violation: float
    violations: int
    passed: bool


def functional_ratio(alpha, beta, z, w) -> float:
    """``||lambda^alpha_(z,w)|| / ||lambda^beta_(z,w)||`` via the one-axis factors."""
    a, b = as_weight(alpha), as_weight(beta)
    num = eval_functional_norm_1d(a.alpha1, z).value * eval_functional_norm_1d(a.alpha2, w).value
    den = eval_functional_norm_1d(b.alpha1, z).value * eval_functional_norm_1d(b.alpha2, w).value
    return num / den


def pointwise_bound_check(h: TruncatedSeries, alpha, beta, norm_est: float, points, tol: float = 1e-6) -> PointwiseReport:
    """Check ``|h(p)| ||lambda^alpha_p|| / ||lambda^beta_p|| <= norm_est`` at each point."""
    pts = [(complex(z), complex(w)) for z, w in points]
    for z, w in pts:
        if not (abs(z) < 1 and abs(w) < 1):
            raise PreconditionError(f"point {(z, w)} is not strictly inside the bidisc")
    worst = 0.0
    max_violation = 0.0
    count = 0
    for z, w in pts:
        r = abs(complex(_kernels.evaluate2d(h.coeffs, z, w))) * functional_ratio(alpha, beta, z, w)
        worst = max(worst, r)
        excess = r - norm_est * (1.0 + tol)
        if excess > 0:
            count += 1
            max_violation = max(max_violation, r / norm_est - 1.0 if norm_est > 0 else math.inf)
    return PointwiseReport(worst, max_violation, count, count == 0)


@dataclass(frozen=True)
class EnvelopeResult:
    """``profile`` rows are ``(r, max ratio, min ratio)`` over angle pairs at |z| = |w| = r."""

    sup_ratio: float
    inf_ratio: float
    profile: tuple


def boundary_envelope(h: TruncatedSeries, alpha, beta, radii, angles) -> EnvelopeResult:
    """Sample ``|h(z, w)| (1-|z|^2)^((a1-b1)/2) (1-|w|^2)^((a2-b2)/2)``.

    The sup and inf are taken over all combinations of the given radii and
    angles on each axis.
    """
    a, b = as_weight(alpha), as_weight(beta)
    radii = np.asarray(radii, dtype=float)
    angles = np.asarray(angles, dtype=float)
    pts = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    vals = np.abs(evaluate_grid(h, pts, pts))
    env_z = (1.0 - np.abs(pts) ** 2) ** ((a.alpha1 - b.alpha1) / 2.0)
    env_w = (1.0 - np.abs(pts) ** 2) ** ((a.alpha2 - b.alpha2) / 2.0)
    ratio = vals * env_z[:, None] * env_w[None, :]
    na = angles.shape[0]
    profile = []
    for i, r in enumerate(radii):
        blk = ratio[i * na:(i + 1) * na, i * na:(i + 1) * na]
        profile.append((float(r), float(blk.max()), float(blk.min())))
    return EnvelopeResult(float(ratio.max()), float(ratio.min()), tuple(profile))


# ---------------------------------------------------------------------------
# convolution weights for M(D_alpha, D_beta) = D_beta, alpha > (1, 1)
# ---------------------------------------------------------------------------

def _check_conv_pre(a, b):
    if not succ(a, (1.0, 1.0)):
        raise PreconditionError(f"need alpha > (1, 1), got {a.as_tuple()}")
    if not succeq(a, b):
        raise PreconditionError(f"need beta <= alpha, got alpha={a.as_tuple()} beta={b.as_tuple()}")


def convolution_weight_bound(k: int, l: int, alpha, beta) -> float:
    """``(k+1)^b1 (l+1)^b2 * sum_{m<=k, n<=l} 1/((m+1)^a1 (n+1)^a2 (k-m+1)^b1 (l-n+1)^b2)``,
    evaluated as a double sum."""
    a, b = as_weight(alpha), as_weight(beta)
    _check_conv_pre(a, b)
    m = np.arange(k + 1, dtype=float)[:, None]
    n = np.arange(l + 1, dtype=float)[None, :]
    logt = -(a.alpha1 * np.log(m + 1) + a.alpha2 * np.log(n + 1)
             + b.alpha1 * np.log(k - m + 1) + b.alpha2 * np.log(l - n + 1))
    s = float(np.exp(logt).sum())
    return s * math.exp(b.alpha1 * math.log(k + 1) + b.alpha2 * math.log(l + 1))


def convolution_weight_scan_1d(a: float, b: float, kmax: int) -> np.ndarray:
    """One-axis factor ``V(k)`` for k = 0..kmax."""
    return np.asarray(_kernels.conv_weight_1d(int(kmax), float(a), float(b)))


def convolution_constant(alpha, beta, kmax) -> tuple[float, float]:
    """``(sup_k V_1(k), sup_l V_2(l))`` over ``0..kmax``; their product bounds the 2-D weights."""
    a, b = as_weight(alpha), as_weight(beta)
    _check_conv_pre(a, b)
    if isinstance(kmax, int):
        kmax = (kmax, kmax)
    c1 = float(convolution_weight_scan_1d(a.alpha1, b.alpha1, kmax[0]).max())
    c2 = float(convolution_weight_scan_1d(a.alpha2, b.alpha2, kmax[1]).max())
    return c1, c2


# ---------------------------------------------------------------------------
# sup norms
# ---------------------------------------------------------------------------

def _torus_values(h: TruncatedSeries, radius: float, m: int) -> np.ndarray:
    """Exact values of h on the m x m equispaced grid of the radius-r torus."""
    kk = np.arange(h.deg_z + 1)
    ll = np.arange(h.deg_w + 1)
    scaled = h.coeffs * (radius ** kk)[:, None] * (radius ** ll)[None, :]
    folded = np.zeros((m, m), dtype=np.complex128)
    np.add.at(folded, ((kk % m)[:, None], (ll % m)[None, :]), scaled)
    return np.fft.ifft2(folded) * (m * m)


def hinf_norm_estimate(h: TruncatedSeries, radius: float, angular_count: int = 256) -> float:
    """Max of |h| over an equispaced grid on the torus of the given radius."""
    if not 0.0 < radius < 1.0:
        raise PreconditionError("radius must lie in (0, 1)")
    return float(np.abs(_torus_values(h, radius, int(angular_count))).max())


def hinf_upper_bound(h: TruncatedSeries, angular_count: int = 512) -> float:
    """Rigorous upper bound for ``sup |h|`` over the bidisc of a polynomial h.

    The max over the distinguished boundary is sampled on a grid and padded by
    the Lipschitz constant of the boundary values times the grid half-spacing.
    """
    m = int(angular_count)
    grid_max = float(np.abs(_torus_values(h, 1.0, m)).max())
    mod = np.abs(h.coeffs)
    lip = float((mod * np.arange(h.deg_z + 1)[:, None]).sum() + (mod * np.arange(h.deg_w + 1)[None, :]).sum())
    return grid_max + lip * math.pi / m
