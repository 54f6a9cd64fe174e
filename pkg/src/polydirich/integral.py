"""Integral realisations of the D_alpha norm for alpha <= (0, 0).

For a negative component ``a`` the radial weight of ``z**k`` is

    w_k(a) = int_0^1 (1 - r**2)**(-1-a) r**(2k+1) dr = B(k+1, -a) / 2

and the normalised integral norm of ``f = sum a[k, l] z**k w**l`` is

    4 * sum |a[k, l]|**2 w_k(alpha1) w_l(alpha2).

A zero component uses the Hardy (sup over circles) realisation instead, whose
per-axis factor is 1. With this normalisation alpha = (-1, -1) reproduces
the weighted l2 norm exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, roots_jacobi

from . import _kernels
from .errors import ConfigurationError, PreconditionError
from .series import TruncatedSeries
from .space import as_weight


def _radial_weights(a: float, deg: int) -> np.ndarray:
    """``w_k(a)`` for k = 0..deg."""
    s = -float(a)
    k = np.arange(deg + 1, dtype=float)
    if s.is_integer() and s <= 64:
        # B(k+1, s) = (s-1)! / prod_{j=1..s} (k+j), exact up to rounding
        out = np.full(deg + 1, float(math.factorial(int(s) - 1)))
        for j in range(1, int(s) + 1):
            out /= k + j
        return 0.5 * out
    return 0.5 * np.exp(betaln(k + 1.0, s))


def beta_radial_weight(k: int, alpha1: float) -> float:
    if not alpha1 < 0:
        raise PreconditionError(f"radial Beta weights need alpha1 < 0, got {alpha1}")
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    return float(_radial_weights(alpha1, int(k))[int(k)])


def hardy_asymptotic_ratio(k: int, alpha1: float) -> float:
    """``w_k(alpha1) / (k+1)**alpha1``; tends to ``Gamma(-alpha1) / 2``."""
    if not alpha1 < 0:
        raise PreconditionError(f"need alpha1 < 0, got {alpha1}")
    return beta_radial_weight(k, alpha1) * (k + 1.0) ** (-alpha1)


def _axis_factor(a: float, deg: int) -> np.ndarray:
    """Per-axis factor of the integral norm: 2 w_k(a), or 1 for a == 0."""
    if a == 0.0:
        return np.ones(deg + 1)
    return 2.0 * _radial_weights(a, deg)


def _require_nonpositive(alpha):
    a = as_weight(alpha)
    if a.alpha1 > 0 or a.alpha2 > 0:
        raise PreconditionError(f"integral realisation needs alpha <= (0, 0), got {a.as_tuple()}")
    return a


def integral_norm_sq_exact(f: TruncatedSeries, alpha) -> float:
    a = _require_nonpositive(alpha)
    phi1 = _axis_factor(a.alpha1, f.deg_z)
    phi2 = _axis_factor(a.alpha2, f.deg_w)
    mod2 = np.abs(f.coeffs) ** 2
    terms = mod2 * phi1[:, None] * phi2[None, :]
    return float(np.cumsum(terms.ravel())[-1])


def integral_norm_exact(f: TruncatedSeries, alpha) -> float:
    """Termwise evaluation of the integral norm (square root taken)."""
    return math.sqrt(integral_norm_sq_exact(f, alpha))


def slice_integral_norm_sq(coeffs_1d: np.ndarray, a: float) -> float:
    """One-variable integral norm squared of ``sum c_k z**k``."""
    if a > 0:
        raise PreconditionError("need a <= 0")
    phi = _axis_factor(float(a), coeffs_1d.shape[0] - 1)
    return float(np.sum(np.abs(coeffs_1d) ** 2 * phi))


@dataclass(frozen=True)
class QuadratureRule:
    """Radial Gauss-Jacobi nodes (in r) and equispaced angles, per axis.

    ``radial_weights`` already include the ``(1 - r**2)**(-1-a) r`` density,
    so ``sum_i weights[i] * g(nodes[i])`` approximates
    ``int_0^1 g(r) (1 - r**2)**(-1-a) r dr``.
    """

    radial_nodes: tuple
    radial_weights: tuple
    angular_count: tuple


def _gauss_jacobi_radial(a: float, n: int):
    s = -1.0 - a
    x, wts = roots_jacobi(n, s, 0.0)
    # r = sqrt(t), t = (1 + x)/2; the (1-t)**s density is absorbed by the rule
    nodes = np.sqrt((1.0 + x) / 2.0)
    weights = wts * 2.0 ** (-s - 2.0)
    return nodes, weights


def quadrature_rule(alpha, deg, radial_count=None, angular_count=None) -> QuadratureRule:
    """Default rule: ``deg + 2`` radial nodes and ``2*deg + 1`` angles per axis.

    The radial rule integrates polynomials in ``r**2`` of degree up to
    ``2*radial_count - 1`` exactly, so ``deg // 2 + 1`` nodes already suffice.
    """
    a = as_weight(alpha)
    if not (a.alpha1 < 0 and a.alpha2 < 0):
        raise PreconditionError("quadrature realisation needs alpha < (0, 0)")
    K, L = int(deg[0]), int(deg[1])
    rc = radial_count if radial_count is not None else (K + 2, L + 2)
    if isinstance(rc, int):
        rc = (rc, rc)
    ac = angular_count if angular_count is not None else (2 * K + 1, 2 * L + 1)
    if isinstance(ac, int):
        ac = (ac, ac)
    n1, w1 = _gauss_jacobi_radial(a.alpha1, int(rc[0]))
    n2, w2 = _gauss_jacobi_radial(a.alpha2, int(rc[1]))
    return QuadratureRule((n1, n2), (w1, w2), (int(ac[0]), int(ac[1])))


def integral_norm_quadrature(f: TruncatedSeries, alpha, rule: QuadratureRule | None = None) -> float:
    """Discretise the four-fold integral directly.

    ``f`` is sampled on circles of the radial nodes at equispaced angles;
    the angular average of ``|f|**2`` is exact once the angle count exceeds
    the degree, so the only approximation is radial.
    """
    a = as_weight(alpha)
    if not (a.alpha1 < 0 and a.alpha2 < 0):
        raise PreconditionError("quadrature realisation needs alpha < (0, 0)")
    if rule is None:
        rule = quadrature_rule(a, f.deg)
    m1, m2 = rule.angular_count
    if m1 < 2 * f.deg_z + 1 or m2 < 2 * f.deg_w + 1:
        raise ConfigurationError(
            f"angular_count {rule.angular_count} too small for degree {f.deg}; need >= 2*deg+1")
    (r1, r2), (q1, q2) = rule.radial_nodes, rule.radial_weights
    kk = np.arange(f.deg_z + 1)
    ll = np.arange(f.deg_w + 1)
    # scaled[j] = a[k, l] r2_j**l, then per radial node r1_i scale rows by r1_i**k
    scaled_w = f.coeffs[None, :, :] * (r2[:, None] ** ll[None, :])[:, None, :]
    total = 0.0
    for i in range(r1.shape[0]):
        block = scaled_w * (r1[i] ** kk)[None, :, None]
        pad = np.zeros((r2.shape[0], m1, m2), dtype=np.complex128)
        pad[:, : f.deg_z + 1, : f.deg_w + 1] = block
        vals = np.fft.ifft2(pad, axes=(1, 2)) * (m1 * m2)
        means = np.mean(np.abs(vals) ** 2, axis=(1, 2))
        total += q1[i] * float(np.dot(q2, means))
    # (1/pi^2) * (2 pi)^2 * angular means
    return math.sqrt(4.0 * total)


@dataclass(frozen=True)
class HardyNormResult:
    """``limit`` is the Hardy norm (sup over all r < 1) and ``grid_max`` the sup
    over the supplied radii, both in norm units. ``grid_max_sq`` is the largest
    angular mean of ``|f|**2`` itself. ``profile`` lists ``(r, mean of |f|**2
    on the r-torus)``."""

    limit: float
    grid_max: float
    grid_max_sq: float
    profile: tuple


def hardy_norm_sup(f: TruncatedSeries, r_grid) -> HardyNormResult:
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid < 0) or np.any(r_grid >= 1):
        raise ConfigurationError("radii must lie in [0, 1)")
    mod2 = np.abs(f.coeffs) ** 2
    kk = np.arange(f.deg_z + 1)
    ll = np.arange(f.deg_w + 1)
    profile = []
    for r in r_grid:
        means = float(np.sum(mod2 * (r ** (2 * kk))[:, None] * (r ** (2 * ll))[None, :]))
        profile.append((float(r), means))
    grid_max_sq = max(p[1] for p in profile) if profile else 0.0
    limit = math.sqrt(float(_kernels.weighted_sq_sum(f.coeffs, 0.0, 0.0)))
    return HardyNormResult(limit, math.sqrt(grid_max_sq), grid_max_sq, tuple(profile))


def equivalence_constants(alpha, deg) -> tuple[float, float]:
    """Bracket ``[c_low, c_high]`` for integral_norm**2 / norm**2 on the box ``deg``."""
    a = _require_nonpositive(alpha)
    if a.alpha1 == 0 and a.alpha2 == 0:
        return 1.0, 1.0
    K, L = int(deg[0]), int(deg[1])
    r1 = _axis_factor(a.alpha1, K) * np.exp(-a.alpha1 * np.log(np.arange(1, K + 2.0)))
    r2 = _axis_factor(a.alpha2, L) * np.exp(-a.alpha2 * np.log(np.arange(1, L + 2.0)))
    return float(r1.min() * r2.min()), float(r1.max() * r2.max())
