"""Weighted l2 structure of the Dirichlet-type spaces D_alpha on the bidisc.

The norm of ``f = sum a[k, l] z**k w**l`` is

    ||f||_alpha**2 = sum |a[k, l]|**2 (k+1)**alpha1 (l+1)**alpha2

and point evaluation at ``(z, w)`` has norm equal to the square root of
``sum |z|**(2k) |w|**(2l) (k+1)**-alpha1 (l+1)**-alpha2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import DomainError, PreconditionError
from .series import TruncatedSeries, UnivariateSeries


@dataclass(frozen=True)
class WeightVector:
    alpha1: float
    alpha2: float

    def __post_init__(self):
        a1, a2 = float(self.alpha1), float(self.alpha2)
        if not (math.isfinite(a1) and math.isfinite(a2)):
            raise PreconditionError("weight vector entries must be finite")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)

    def __iter__(self):
        yield self.alpha1
        yield self.alpha2

    def __getitem__(self, i):
        return (self.alpha1, self.alpha2)[i]

    def as_tuple(self) -> tuple[float, float]:
        return (self.alpha1, self.alpha2)


def as_weight(alpha) -> WeightVector:
    if isinstance(alpha, WeightVector):
        return alpha
    a1, a2 = alpha
    return WeightVector(a1, a2)


class PartialOrder(str, Enum):
    STRICTLY_GREATER = "strictly_greater"
    GREATER_EQUAL = "greater_equal"
    STRICTLY_LESS = "strictly_less"
    LESS_EQUAL = "less_equal"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare(alpha, beta) -> PartialOrder:
    """Classify ``alpha`` against ``beta`` in the componentwise order."""
    a, b = as_weight(alpha), as_weight(beta)
    d = (a.alpha1 - b.alpha1, a.alpha2 - b.alpha2)
    if d == (0.0, 0.0):
        return PartialOrder.EQUAL
    if d[0] > 0 and d[1] > 0:
        return PartialOrder.STRICTLY_GREATER
    if d[0] >= 0 and d[1] >= 0:
        return PartialOrder.GREATER_EQUAL
    if d[0] < 0 and d[1] < 0:
        return PartialOrder.STRICTLY_LESS
    if d[0] <= 0 and d[1] <= 0:
        return PartialOrder.LESS_EQUAL
    return PartialOrder.INCOMPARABLE


def succ(alpha, beta) -> bool:
    """``alpha`` strictly greater than ``beta`` in both components."""
    return compare(alpha, beta) is PartialOrder.STRICTLY_GREATER


def succeq(alpha, beta) -> bool:
    return compare(alpha, beta) in (PartialOrder.STRICTLY_GREATER, PartialOrder.GREATER_EQUAL,
                                    PartialOrder.EQUAL)


# ---------------------------------------------------------------------------
# weights, norms, inner products
# ---------------------------------------------------------------------------

def weight_at(k: int, l: int, alpha) -> float:
    a = as_weight(alpha)
    if k < 0 or l < 0:
        raise PreconditionError("indices must be nonnegative")
    return math.exp(a.alpha1 * math.log(k + 1) + a.alpha2 * math.log(l + 1))


def weight_grid(alpha, deg_z: int, deg_w: int) -> np.ndarray:
    a = as_weight(alpha)
    logw = (a.alpha1 * np.log(np.arange(1, deg_z + 2.0))[:, None]
            + a.alpha2 * np.log(np.arange(1, deg_w + 2.0))[None, :])
    return np.exp(logw)


def weight_vector_1d(a: float, deg: int) -> np.ndarray:
    return np.exp(a * np.log(np.arange(1, deg + 2.0)))


def norm_sq(f: TruncatedSeries, alpha) -> float:
    a = as_weight(alpha)
    return float(_kernels.weighted_sq_sum(f.coeffs, a.alpha1, a.alpha2))


def norm(f: TruncatedSeries, alpha) -> float:
    return math.sqrt(norm_sq(f, alpha))


def inner_product(f: TruncatedSeries, g: TruncatedSeries, alpha) -> complex:
    """``(f, g)_alpha``; coefficients outside either grid count as zero."""
    a = as_weight(alpha)
    K = min(f.deg_z, g.deg_z) + 1
    L = min(f.deg_w, g.deg_w) + 1
    fa = np.ascontiguousarray(f.coeffs[:K, :L])
    gb = np.ascontiguousarray(g.coeffs[:K, :L])
    return complex(_kernels.weighted_inner(fa, gb, a.alpha1, a.alpha2))


def norm1d(f: UnivariateSeries, a: float) -> float:
    return math.sqrt(norm1d_sq(f, a))


def norm1d_sq(f: UnivariateSeries, a: float) -> float:
    return float(_kernels.weighted_sq_sum(f.coeffs[:, None], float(a), 0.0))


def inner_product1d(f: UnivariateSeries, g: UnivariateSeries, a: float) -> complex:
    n = min(f.deg, g.deg) + 1
    return complex(_kernels.weighted_inner(np.ascontiguousarray(f.coeffs[:n, None]),
                                           np.ascontiguousarray(g.coeffs[:n, None]), float(a), 0.0))


# ---------------------------------------------------------------------------
# point-evaluation functionals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionalNormResult:
    """Truncated value of a series-defined norm plus a bound on what was dropped.

    ``value <= true norm <= value + tail_bound``.
    """

    value: float
    tail_bound: float
    truncation: tuple

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound


def _lambda_terms(a: float, rho: float, deg: int) -> np.ndarray:
    """``rho**k (k+1)**-a`` for k = 0..deg, in log space."""
    k = np.arange(deg + 1, dtype=float)
    out = np.zeros(deg + 1)
    out[0] = 1.0
    if rho > 0.0 and deg > 0:
        out[1:] = np.exp(k[1:] * math.log(rho) - a * np.log(k[1:] + 1.0))
    return out


_SCAN_LIMIT = 5_000_000


def _tail_1d(a: float, rho: float, deg: int) -> float:
    """Rigorous upper bound on ``sum_{k > deg} rho**k (k+1)**-a`` (0 <= rho < 1).

    Two bounds are computed and the smaller returned:

    * comparison with ``(k+1)**-2`` past the index where
      ``rho**k (k+1)**(2-a) <= 1`` holds for good; the terms before that index
      are summed directly;
    * a geometric bound from the ratio of consecutive terms, which for k > deg
      never exceeds ``q = rho * ((deg+3)/(deg+2))**max(-a, 0)``.
    """
    if rho == 0.0:
        return 0.0
    lr = math.log(rho)
    K = deg
    best = math.inf

    q = rho * ((K + 3.0) / (K + 2.0)) ** max(-a, 0.0)
    if q < 1.0:
        first = math.exp((K + 1) * lr - a * math.log(K + 2.0))
        best = first / (1.0 - q)

    # g(k) = k log rho + (2-a) log(k+1) is decreasing once k+1 >= (2-a)/(-log rho)
    c = 2.0 - a
    kstar = max(K + 1.0, c / (-lr) - 1.0 if c > 0 else 0.0)
    k0 = int(math.ceil(kstar))

    def g(k):
        return k * lr + c * math.log(k + 1.0)

    if g(k0) > 0.0:
        hi = max(k0 + 1, 2 * k0)
        while g(hi) > 0.0:
            hi *= 2
            if hi > 4 * _SCAN_LIMIT:
                return best
        lo = k0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if g(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        k0 = hi
    if k0 - (K + 1) <= _SCAN_LIMIT:
        ks = np.arange(K + 1, k0, dtype=float)
        head = float(np.exp(ks * lr - a * np.log(ks + 1.0)).sum()) if ks.size else 0.0
        # sum_{k >= k0} (k+1)**-2 <= 1/k0
        best = min(best, head + 1.0 / k0)
    return best


def _check_point(*pts):
    for p in pts:
        if not abs(p) < 1.0:
            raise DomainError(f"point {p!r} is not inside the open unit disc")


def auto_degree(a: float, r: float, rel_tol: float = 1e-17, max_deg: int = 1 << 22) -> int:
    """Smallest truncation whose 1-D tail bound is below ``rel_tol`` times the head."""
    rho = abs(r) ** 2
    if rho == 0.0:
        return 0
    lo, hi = 0, 16
    while _tail_1d(a, rho, hi) > rel_tol * _lambda_terms(a, rho, hi).sum():
        lo, hi = hi, hi * 2
        if hi > max_deg:
            return max_deg
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _tail_1d(a, rho, mid) > rel_tol * _lambda_terms(a, rho, mid).sum():
            lo = mid
        else:
            hi = mid
    return hi


def eval_functional_norm_1d(a: float, z: complex, deg: int | None = None) -> FunctionalNormResult:
    """Norm of ``f -> f(z)`` on the one-variable space D_a."""
    _check_point(z)
    rho = abs(z) ** 2
    if deg is None:
        deg = auto_degree(a, abs(z))
    u = _lambda_terms(float(a), rho, deg)
    s = float(np.cumsum(u)[-1])
    t = _tail_1d(float(a), rho, deg)
    return FunctionalNormResult(math.sqrt(s), math.sqrt(s + t) - math.sqrt(s), (deg,))


def eval_functional_norm(alpha, z: complex, w: complex, deg=None) -> FunctionalNormResult:
    """Norm of ``f -> f(z, w)`` on D_alpha, truncated to the box ``deg``.

    The double sum is evaluated as a genuine double sum; the tail bound comes
    from the one-axis bounds of :func:`_tail_1d`.
    """
    a = as_weight(alpha)
    _check_point(z, w)
    r1, r2 = abs(z) ** 2, abs(w) ** 2
    if deg is None:
        deg = (auto_degree(a.alpha1, abs(z)), auto_degree(a.alpha2, abs(w)))
    K, L = int(deg[0]), int(deg[1])
    u = _lambda_terms(a.alpha1, r1, K)
    v = _lambda_terms(a.alpha2, r2, L)
    s = float(_kernels.outer_sum(u, v))
    s1, s2 = float(u.sum()), float(v.sum())
    t1, t2 = _tail_1d(a.alpha1, r1, K), _tail_1d(a.alpha2, r2, L)
    omitted = s1 * t2 + t1 * s2 + t1 * t2
    tail = math.sqrt(s + omitted) - math.sqrt(s) if math.isfinite(omitted) else math.inf
    return FunctionalNormResult(math.sqrt(s), tail, (K, L))


def kernel_series(alpha, z0: complex, w0: complex, deg) -> TruncatedSeries:
    """Truncated reproducing kernel at ``(z0, w0)``."""
    a = as_weight(alpha)
    _check_point(z0, w0)
    K, L = int(deg[0]), int(deg[1])
    kk = np.arange(K + 1)
    ll = np.arange(L + 1)
    cz = np.conj(complex(z0)) ** kk * np.exp(-a.alpha1 * np.log(kk + 1.0))
    cw = np.conj(complex(w0)) ** ll * np.exp(-a.alpha2 * np.log(ll + 1.0))
    return TruncatedSeries(np.outer(cz, cw))


def hinf_sup_bound(alpha, deg) -> FunctionalNormResult:
    """Uniform constant C with ``|f(z, w)| <= C ||f||_alpha`` when alpha > (1, 1).

    ``value`` is exact for series supported in the box ``deg``; ``upper``
    is valid for every element of D_alpha.
    """
    a = as_weight(alpha)
    if not succ(a, (1.0, 1.0)):
        raise PreconditionError(f"need alpha > (1, 1) componentwise, got {a.as_tuple()}")
    K, L = int(deg[0]), int(deg[1])
    u = weight_vector_1d(-a.alpha1, K)
    v = weight_vector_1d(-a.alpha2, L)
    s = float(_kernels.outer_sum(u, v))
    # sum_{k > K} (k+1)**-a <= int_{K+1}^inf x**-a dx
    t1 = (K + 1.0) ** (1.0 - a.alpha1) / (a.alpha1 - 1.0)
    t2 = (L + 1.0) ** (1.0 - a.alpha2) / (a.alpha2 - 1.0)
    omitted = float(u.sum()) * t2 + t1 * float(v.sum()) + t1 * t2
    return FunctionalNormResult(math.sqrt(s), math.sqrt(s + omitted) - math.sqrt(s), (K, L))
