"""Executable checks for the structural results about D_alpha spaces and their multipliers.

Every check takes a parameter map, runs a desk-scale computation and returns a
:class:`CheckReport`. Claims of the form "this series is not in D_alpha" are
turned into trend verdicts on partial sums over dyadic cut-offs (see
:mod:`polydirich.trend`); everything else is an inequality or identity with
an explicit tolerance.
"""
from __future__ import annotations

import enum
import functools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConfigurationError, PreconditionError
from .integral import (_gauss_jacobi_radial, equivalence_constants, integral_norm_quadrature,
                       integral_norm_sq_exact, slice_integral_norm_sq)
from .multipliers import (boundary_envelope, convolution_constant, convolution_weight_bound,
                          convolution_weight_scan_1d, functional_ratio, hinf_norm_estimate,
                          hinf_upper_bound, interpolation_inequality_check, pointwise_bound_check,
                          section_norm, section_norm_1d)
from .series import (FamilyId, NamedFamily, TruncatedSeries, UnivariateSeries, cauchy_product,
                     evaluate_grid, family_rows, generate, lacunary_coefficients, slice_w,
                     tensor_product)
from .space import (as_weight, eval_functional_norm, eval_functional_norm_1d, hinf_sup_bound,
                    norm, norm1d, norm1d_sq, norm_sq, succ)
from .trend import Classification, DivergenceVerdict, divergence_trend

DEFAULT_SEED = 20240917


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CheckReport:
    check_id: str
    params: dict
    verdict: Verdict
    metrics: dict
    tolerances: dict
    runtime_ms: int
    trends: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    low_resolution: bool = False

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "verdict": self.verdict.value,
            "metrics": dict(self.metrics),
            "params": _jsonable(self.params),
            "tolerances": dict(self.tolerances),
            "trends": dict(self.trends),
            "failures": list(self.failures),
            "low_resolution": self.low_resolution,
            "runtime_ms": self.runtime_ms,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


class _Ctx:
    """Collects metrics and assertion outcomes for one check."""

    def __init__(self):
        self.metrics = {}
        self.tolerances = {}
        self.trends = {}
        self.failures = []
        self.low_res = []
        self.bad_fit = []

    def metric(self, name, value):
        self.metrics[name] = float(value)

    def require(self, name, ok, detail=""):
        if not ok:
            self.failures.append(f"{name}{': ' + detail if detail else ''}")
        return ok

    def le(self, name, value, bound, tol=0.0):
        self.metric(name, value)
        if tol:
            self.tolerances[name] = tol
        return self.require(name, value <= bound + tol, f"{value!r} > {bound!r}")

    def trend(self, name, pairs, expect, min_n=256, **kw) -> DivergenceVerdict | None:
        if len(pairs) < 4:
            v = DivergenceVerdict(Classification.INCONCLUSIVE, math.nan, math.nan,
                                  reason=f"only {len(pairs)} cut-offs")
        else:
            v = divergence_trend(pairs, min_n=min_n, **kw)
        self.trends[name] = v.classification.value
        if v.classification is Classification.INCONCLUSIVE:
            if "cut-offs" in v.reason or "samples" in v.reason:
                self.low_res.append(name)
            else:
                self.bad_fit.append(name)
                self.failures.append(f"{name}: inconclusive ({v.reason})")
            return None
        self.metric(f"{name}.fit_constant", v.fit_constant)
        self.metric(f"{name}.fit_residual", v.fit_residual)
        if v.classification is not Classification.LOG_DIVERGENT:
            self.metric(f"{name}.exponent", v.exponent)
        exp_set = {Classification(e) for e in expect}
        self.require(name, v.classification in exp_set,
                     f"classified {v.classification.value}, expected {'/'.join(sorted(e.value for e in exp_set))}")
        return v


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _w(p):
    return as_weight(tuple(p))


def _rng(params):
    return np.random.default_rng(int(params.get("seed", DEFAULT_SEED)))


def random_series(rng, deg_z, deg_w) -> TruncatedSeries:
    """Coefficients uniform in the unit disc, scaled by 1/((k+1)(l+1))."""
    shape = (deg_z + 1, deg_w + 1)
    r = np.sqrt(rng.random(shape))
    th = 2 * np.pi * rng.random(shape)
    k = np.arange(deg_z + 1)[:, None] + 1.0
    l = np.arange(deg_w + 1)[None, :] + 1.0
    return TruncatedSeries(r * np.exp(1j * th) / (k * l))


def random_polynomial(rng, deg_z, deg_w) -> TruncatedSeries:
    """Coefficients uniform in the unit disc, unscaled."""
    shape = (deg_z + 1, deg_w + 1)
    r = np.sqrt(rng.random(shape))
    th = 2 * np.pi * rng.random(shape)
    return TruncatedSeries(r * np.exp(1j * th))


def _random_points(rng, n, rmax):
    r = rmax * np.sqrt(rng.random((n, 2)))
    th = 2 * np.pi * rng.random((n, 2))
    p = r * np.exp(1j * th)
    return [(complex(a), complex(b)) for a, b in p]


def _cutoffs(params) -> list[int]:
    """Dyadic cut-offs 2^min_exp .. max_deg."""
    max_deg = int(params["max_deg"])
    lo = int(params.get("min_exp", 4))
    out = []
    e = lo
    while (1 << e) <= max_deg:
        out.append(1 << e)
        e += 1
    return out


def _log1p_range(n):
    return np.log(np.arange(1, n + 2, dtype=float))


def _box_sums(family: NamedFamily, alpha, ns, block=256):
    """Weighted box partial sums  sum_{k,l <= N} |a_kl|^2 (k+1)^a1 (l+1)^a2  at each N in ns."""
    a = as_weight(alpha)
    nmax = max(ns)
    lg = _log1p_range(nmax)
    ns_arr = np.asarray(ns, dtype=np.int64)
    out = np.zeros(len(ns))
    for k0 in range(0, nmax + 1, block):
        k1 = min(nmax + 1, k0 + block)
        rows = family_rows(family, k0, k1, nmax)
        terms = np.ascontiguousarray(
            (rows.real ** 2 + rows.imag ** 2) * np.exp(a.alpha1 * lg[k0:k1, None] + a.alpha2 * lg[None, :]))
        _kernels.box_accumulate(terms, k0, ns_arr, out)
    return list(zip(ns, out.tolist()))


# ---------------------------------------------------------------------------
# containment
# ---------------------------------------------------------------------------

def _check_proper_containment(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    fam = NamedFamily(FamilyId.PROPER_CONTAINMENT, {"alpha": alpha.as_tuple()})
    ns = _cutoffs(p)
    sa = [(n, math.sqrt(s)) for n, s in _box_sums(fam, alpha, ns)]
    sb = [(n, math.sqrt(s)) for n, s in _box_sums(fam, beta, ns)]
    # ||f||_alpha over the box is H_{N+1}, so the log constant is exactly 1
    v = ctx.trend("norm_alpha", sa, ["log_divergent"])
    if v is not None:
        ctx.le("norm_alpha.const_rel_err", abs(v.fit_constant - 1.0), p["const_rtol"])
    ctx.trend("norm_beta", sb, ["convergent"])
    ctx.metric("norm_beta.last", sb[-1][1])


def _check_remark_containment(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    ctx.require("alpha2_equals_beta2", alpha.alpha2 == beta.alpha2)
    fam = NamedFamily(FamilyId.UNIVARIATE_REMARK, {"alpha": alpha.as_tuple()})
    ns = _cutoffs(p)
    nmax = max(ns)
    col = family_rows(fam, 0, nmax + 1, 0)[:, 0]
    mod2 = np.abs(col) ** 2
    lg = _log1p_range(nmax)
    ca = np.cumsum(mod2 * np.exp(alpha.alpha1 * lg))
    cb = np.cumsum(mod2 * np.exp(beta.alpha1 * lg))
    # the sole column has l = 0, so the alpha2 weight is 1
    v = ctx.trend("norm_sq_alpha", [(n, float(ca[n])) for n in ns], ["log_divergent"])
    if v is not None:
        ctx.le("norm_sq_alpha.const_rel_err", abs(v.fit_constant - 1.0), p["const_rtol"])
    ctx.trend("norm_sq_beta", [(n, float(cb[n])) for n in ns], ["convergent"])


def _check_d_in_hinf(p, ctx):
    alpha = _w(p["alpha"])
    if not succ(alpha, (1.0, 1.0)):
        raise PreconditionError("d_in_hinf needs alpha > (1, 1)")
    rng = _rng(p)
    d = int(p["deg"])
    bound = hinf_sup_bound(alpha, (d, d))
    ctx.metric("sup_bound", bound.value)
    ctx.metric("sup_bound_infinite_series", bound.upper)
    worst = 0.0
    for _ in range(int(p["n_series"])):
        f = random_series(rng, d, d)
        nf = norm(f, alpha)
        pts = _random_points(rng, int(p["n_points"]), float(p["rmax"]))
        for z, w in pts:
            worst = max(worst, abs(complex(_kernels.evaluate2d(f.coeffs, z, w))) / (bound.value * nf))
    ctx.le("max_abs_over_bound_times_norm", worst, 1.0, 1e-12)


def _check_integral_equivalence(p, ctx):
    alpha = _w(p["alpha"])
    rng = _rng(p)
    d = int(p["deg"])
    lo, hi = equivalence_constants(alpha, (d, d))
    ctx.metric("c_low", lo)
    ctx.metric("c_high", hi)
    worst_quad = 0.0
    worst_unit = 0.0
    rmin, rmax = math.inf, 0.0
    for _ in range(int(p["n_series"])):
        f = random_series(rng, d, d)
        ex = integral_norm_sq_exact(f, alpha)
        r = ex / norm_sq(f, alpha)
        rmin, rmax = min(rmin, r), max(rmax, r)
        q = integral_norm_quadrature(f, alpha) ** 2
        worst_quad = max(worst_quad, abs(q - ex) / ex)
        unit = integral_norm_sq_exact(f, (-1.0, -1.0)) / norm_sq(f, (-1.0, -1.0))
        worst_unit = max(worst_unit, abs(unit - 1.0))
    ctx.metric("ratio_min", rmin)
    ctx.metric("ratio_max", rmax)
    ctx.require("ratio_within_constants", lo * (1 - 1e-12) <= rmin and rmax <= hi * (1 + 1e-12),
                f"[{rmin}, {rmax}] not inside [{lo}, {hi}]")
    ctx.le("quadrature_rel_err", worst_quad, p["quad_rtol"])
    ctx.le("unit_weight_ratio_err", worst_unit, 1e-12)


def _check_product_membership(p, ctx):
    alpha = _w(p["alpha"])
    rng = _rng(p)
    d = int(p["deg"])
    worst = 0.0
    for _ in range(int(p["n_series"])):
        f1 = UnivariateSeries(random_series(rng, d, 0).coeffs[:, 0])
        f2 = UnivariateSeries(random_series(rng, d, 0).coeffs[:, 0])
        lhs = norm_sq(tensor_product(f1, f2), alpha)
        rhs = norm1d_sq(f1, alpha.alpha1) * norm1d_sq(f2, alpha.alpha2)
        worst = max(worst, abs(lhs - rhs) / rhs)
    ctx.le("factorization_residual", worst, 1e-12)


# ---------------------------------------------------------------------------
# multipliers
# ---------------------------------------------------------------------------

def _check_multipliers_below_zero_iff(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    if not (succ((0.0, 0.0), alpha) and alpha.alpha1 >= beta.alpha1 and alpha.alpha2 >= beta.alpha2):
        raise PreconditionError("needs (0,0) > alpha >= beta")
    s = float(p["witness_exponent"])
    ns = _cutoffs(p)
    # both test functions are tensor squares of one-variable series, so the
    # two-variable section norm is the product of one-variable ones
    def seq(coef, a, b):
        out = []
        for n in ns:
            k = np.arange(n + 1.0)
            out.append((n, section_norm_1d(coef(k), a, b, n).value))
        return out

    wit = lambda k: np.exp(-s * np.log(k + 1.0))
    ones = lambda k: np.ones_like(k)
    w1 = seq(wit, alpha.alpha1, beta.alpha1)
    w2 = seq(wit, alpha.alpha2, beta.alpha2)
    o1 = seq(ones, alpha.alpha1, beta.alpha1)
    o2 = seq(ones, alpha.alpha2, beta.alpha2)
    wsec = [(n, a[1] * b[1]) for a, b, n in zip(w1, w2, ns)]
    osec = [(n, a[1] * b[1]) for a, b, n in zip(o1, o2, ns)]
    mn = int(p["trend_min_n"])
    ctx.trend("witness_section_norms", wsec, ["convergent"], min_n=mn)
    ctx.trend("all_ones_section_norms", osec, ["log_divergent", "power_divergent"], min_n=mn)
    ctx.metric("witness_section_norm_last", wsec[-1][1])
    ctx.metric("all_ones_section_norm_last", osec[-1][1])

    # tensor structure: the 2-D section norm is the product of 1-D ones
    d = int(p["tensor_deg"])
    k = np.arange(d + 1.0)
    hw = tensor_product(UnivariateSeries(wit(k)), UnivariateSeries(wit(k)))
    n2 = section_norm(hw, alpha, beta, (d, d)).value
    n1 = section_norm_1d(wit(k), alpha.alpha1, beta.alpha1, d).value * \
        section_norm_1d(wit(k), alpha.alpha2, beta.alpha2, d).value
    ctx.le("tensor_section_rel_err", abs(n2 - n1) / n1, 1e-9)

    # envelope |h| (1-|z|^2)^((a-b)/2) along the positive real diagonal
    radii = np.asarray(p["envelope_radii"], dtype=float)
    ed = int(p["envelope_deg"])
    k = np.arange(ed + 1.0)
    ew = boundary_envelope(tensor_product(UnivariateSeries(wit(k)), UnivariateSeries(wit(k))),
                           alpha, beta, radii, [0.0])
    eo = boundary_envelope(tensor_product(UnivariateSeries(ones(k)), UnivariateSeries(ones(k))),
                           alpha, beta, radii, [0.0])
    wprof = [row[1] for row in ew.profile]
    oprof = [row[1] for row in eo.profile]
    ctx.metric("witness_envelope_sup", ew.sup_ratio)
    ctx.metric("all_ones_envelope_last", oprof[-1])
    ctx.require("all_ones_envelope_increasing", all(b > a for a, b in zip(oprof, oprof[1:])))
    ctx.le("witness_envelope_growth", wprof[-1] / wprof[0], oprof[-1] / oprof[0])


def _check_M_equals_Hinf(p, ctx):
    alpha = _w(p["alpha"])
    if not succ((0.0, 0.0), alpha) and alpha.as_tuple() != (0.0, 0.0):
        raise PreconditionError("needs alpha <= (0, 0)")
    rng = _rng(p)
    hd = int(p["h_deg"])
    worst = 0.0
    mono = True
    degs = [int(d) for d in p["section_degs"]]
    for _ in range(int(p["n_h"])):
        h = random_polynomial(rng, hd, hd)
        sup = hinf_upper_bound(h, 1024)
        prev = 0.0
        for d in degs:
            v = section_norm(h, alpha, alpha, (d, d)).value
            worst = max(worst, v / sup)
            mono &= v >= prev * (1 - 1e-12)
            prev = v
    ctx.require("section_norms_nondecreasing", mono)
    # exact for alpha = (-1,-1); for other alpha <= 0 only up to equivalence
    lo, hi = equivalence_constants(alpha, (max(degs) + hd,) * 2)
    ctx.le("max_section_norm_over_sup", worst, math.sqrt(hi / lo), 1e-9)
    rat = NamedFamily(FamilyId.RATIONAL, {})
    seq = []
    for n in _cutoffs(p):
        seq.append((n, section_norm(generate(rat, n, n), alpha, alpha, (n, n)).value))
    ctx.trend("rational_section_norms", seq, ["log_divergent", "power_divergent"],
              min_n=int(p["trend_min_n"]))
    ctx.metric("rational_section_norm_last", seq[-1][1])


def _check_M_equals_Dbeta(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    rng = _rng(p)
    d = int(p["deg"])
    c1, c2 = convolution_constant(alpha, beta, int(p["kmax"]))
    v1 = convolution_weight_scan_1d(alpha.alpha1, beta.alpha1, int(p["kmax"]))
    ctx.metric("C1", c1)
    ctx.metric("C2", c2)
    ctx.metric("argmax_k", float(np.argmax(v1)))
    worst_fac = 0.0
    for k, l in [(0, 0), (1, 3), (7, 2), (20, 33), (64, 5)]:
        two = convolution_weight_bound(k, l, alpha, beta)
        one = convolution_weight_scan_1d(alpha.alpha1, beta.alpha1, k)[k] * \
            convolution_weight_scan_1d(alpha.alpha2, beta.alpha2, l)[l]
        worst_fac = max(worst_fac, abs(two - one) / one)
    ctx.le("factorization_rel_err", worst_fac, 1e-12)
    ctx.le("weight_at_origin_err", abs(convolution_weight_bound(0, 0, alpha, beta) - 1.0), 1e-15)
    worst = 0.0
    for _ in range(int(p["n_pairs"])):
        f = random_polynomial(rng, d, d)
        g = random_polynomial(rng, d, d)
        lhs = norm(cauchy_product(f, g), beta)
        worst = max(worst, lhs / (math.sqrt(c1 * c2) * norm(f, alpha) * norm(g, beta)))
    ctx.le("max_product_ratio", worst, 1.0, 1e-12)


def _check_M_monotone(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    lam = float(p["lam"])
    if not succ(alpha, beta):
        raise PreconditionError("needs alpha > beta")
    g1 = beta.alpha1 - lam * alpha.alpha1
    g2 = beta.alpha2 - lam * alpha.alpha2
    if not (g1 < 0 and g2 < 0):
        raise PreconditionError("lambda must make beta - lambda*alpha < 0")
    gamma = as_weight((g1 / (1 - lam), g2 / (1 - lam)))
    ctx.metric("gamma1", gamma.alpha1)
    ctx.metric("gamma2", gamma.alpha2)
    rng = _rng(p)
    d = int(p["deg"])
    hd = int(p["h_deg"])
    lo, hi = equivalence_constants(gamma, (d + hd, d + hd))
    worst_slack = math.inf
    worst_gamma = 0.0
    for _ in range(int(p["n_h"])):
        h = random_polynomial(rng, hd, hd)
        rep = interpolation_inequality_check(h, (gamma, gamma), (alpha, alpha), lam, (d, d))
        worst_slack = min(worst_slack, rep.slack)
        sup = hinf_upper_bound(h, 1024)
        worst_gamma = max(worst_gamma, rep.norm_1 / (sup * math.sqrt(hi / lo)))
    ctx.metric("min_slack", worst_slack)
    ctx.require("interpolation_slack", worst_slack >= -1e-9, f"{worst_slack}")
    ctx.tolerances["interpolation_slack"] = 1e-9
    ctx.le("gamma_norm_over_sup_bound", worst_gamma, 1.0, 1e-9)


def _check_zero_multiplier(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    if not (beta.alpha1 > alpha.alpha1 or beta.alpha2 > alpha.alpha2):
        raise PreconditionError("needs beta_i > alpha_i for some i")
    radii = [float(r) for r in p["radii"]]
    ratios = []
    worst_fac = 0.0
    for r in radii:
        two = eval_functional_norm(beta, r, r).value / eval_functional_norm(alpha, r, r).value
        one = functional_ratio(beta, alpha, r, r)
        worst_fac = max(worst_fac, abs(two - one))
        ratios.append(two)
        ctx.metric(f"ratio_r{r}", two)
    ctx.le("factorization_residual", worst_fac, 1e-9)
    ctx.require("ratio_decreasing", all(b < a for a, b in zip(ratios, ratios[1:])))
    ctx.le("ratio_last", ratios[-1], p["ratio_bound"])
    # a fixed operator-norm bound M forces |h| <= M * ratio -> 0; a nonzero
    # polynomial therefore violates it once r is close enough to 1
    rng = _rng(p)
    h = random_polynomial(rng, 2, 2)
    d = int(p["deg"])
    est = section_norm(h, alpha, beta, (d, d))
    pts = [(r, r) for r in radii]
    rep = pointwise_bound_check(h, alpha, beta, est.value, pts)
    ctx.metric("section_norm", est.value)
    ctx.metric("implied_bound_last", est.value * ratios[-1])
    ctx.metric("abs_h_last", abs(h(radii[-1], radii[-1])))
    ctx.require("fixed_bound_violated_near_boundary", rep.violations > 0)


# ---------------------------------------------------------------------------
# slices
# ---------------------------------------------------------------------------

def _slice_norm_sq(f: TruncatedSeries, a1: float, w0) -> float:
    return norm1d_sq(slice_w(f, w0), a1)


def _check_slices_membership(p, ctx):
    alpha = _w(p["alpha"])
    rng = _rng(p)
    d = int(p["deg"])
    radii = [float(r) for r in p["w0_radii"]]
    angles = np.linspace(0, 2 * np.pi, int(p["w0_angles"]), endpoint=False)
    lg = _log1p_range(d)
    wk = np.exp(alpha.alpha1 * lg)
    wl = np.exp(alpha.alpha2 * lg)
    worst = 0.0
    cmax = 0.0
    for _ in range(int(p["n_series"])):
        f = random_series(rng, d, d)
        mod2 = np.abs(f.coeffs) ** 2
        nf2 = norm_sq(f, alpha)
        for r in radii:
            pw = r ** np.arange(d + 1.0)
            big = pw > wl  # terms not dominated by the norm's weight
            cw = float((mod2[:, big] * wk[:, None] * pw[None, big]).sum())
            cmax = max(cmax, cw)
            rhs = (cw + nf2) / (1.0 - r)
            for t in angles:
                lhs = _slice_norm_sq(f, alpha.alpha1, r * np.exp(1j * t))
                worst = max(worst, lhs / rhs)
    ctx.metric("C_w0_max", cmax)
    ctx.le("max_lhs_over_rhs", worst, 1.0, 1e-12)


@functools.lru_cache(maxsize=8)
def _nonfactoring_pass(alpha: tuple, nmax: int, w0s: tuple, block: int = 256):
    """One sweep over the (nmax+1)^2 grid collecting everything the checks need."""
    a = as_weight(alpha)
    fam = NamedFamily(FamilyId.NON_FACTORING, {"alpha": alpha})
    lg = _log1p_range(nmax)
    ns = np.array([1 << e for e in range(4, 32) if (1 << e) <= nmax], dtype=np.int64)
    box = np.zeros(ns.shape[0])
    diag = np.empty(nmax + 1)
    w0 = np.asarray(w0s, dtype=np.complex128)
    wp = w0[None, :] ** np.arange(nmax + 1)[:, None]
    b = np.empty((nmax + 1, w0.shape[0]), dtype=np.complex128)
    jensen = np.zeros(w0.shape[0])
    for k0 in range(0, nmax + 1, block):
        k1 = min(nmax + 1, k0 + block)
        rows = family_rows(fam, k0, k1, nmax)
        mod2 = rows.real ** 2 + rows.imag ** 2
        zw = np.exp(a.alpha1 * lg[k0:k1])
        terms = np.ascontiguousarray(mod2 * zw[:, None] * np.exp(a.alpha2 * lg)[None, :])
        _kernels.box_accumulate(terms, k0, ns, box)
        idx = np.arange(k1 - k0)
        diag[k0:k1] = terms[idx, k0 + idx]
        b[k0:k1] = rows @ wp
        jensen += (mod2 * zw[:, None]).sum(axis=0) @ np.abs(wp)
    slice_terms = (np.abs(b) ** 2) * np.exp(a.alpha1 * lg)[:, None]
    return ns.tolist(), box.tolist(), np.cumsum(diag), np.cumsum(slice_terms, axis=0), jensen


def _nonfactoring_common(p, ctx, alpha):
    ns = _cutoffs(p)
    nmax = max(ns)
    w0s = tuple(float(x) for x in np.linspace(0.0, float(p["w0_max"]), int(p["n_w0"])))
    all_ns, box, diag, slices, jensen = _nonfactoring_pass(alpha.as_tuple(), nmax, w0s)
    # the minorant sum_{k<=N} 1/(2(k+1)) is the diagonal of the weighted grid
    v = ctx.trend("diagonal_minorant", [(n, float(diag[n])) for n in ns], ["log_divergent"])
    if v is not None:
        ctx.le("diagonal_minorant.const_rel_err", abs(v.fit_constant - 0.5) / 0.5, p["const_rtol"])
    full = [(n, s) for n, s in zip(all_ns, box) if n in ns]
    ctx.trend("full_norm_sq", full, ["log_divergent", "power_divergent"])
    snorm = slices[-1]
    bound = jensen / (1.0 - np.asarray(w0s))
    fixed = float(bound.max())
    ctx.metric("slice_norm_sq_max", float(snorm.max()))
    ctx.metric("slice_bound_fixed", fixed)
    ctx.require("slice_norms_below_own_bound", bool(np.all(snorm <= bound * (1 + 1e-12))))
    ctx.le("slice_norm_sq_max_over_fixed_bound", float(snorm.max()) / fixed, 1.0)
    # companion: the slice partial sums at the largest w0 converge
    ctx.trend("slice_partial_sums", [(n, float(slices[n, -1])) for n in ns], ["convergent"])
    return w0s


def _check_non_factoring(p, ctx):
    _nonfactoring_common(p, ctx, _w(p["alpha"]))


def _check_multiplier_slices_converse_fails(p, ctx):
    gamma, alpha = _w(p["gamma"]), _w(p["alpha"])
    if not succ(gamma, (1.0, 1.0)):
        raise PreconditionError("needs gamma > (1, 1)")
    if not (alpha.alpha1 <= gamma.alpha1 and alpha.alpha2 <= gamma.alpha2):
        raise PreconditionError("needs alpha <= gamma")
    _nonfactoring_common(p, ctx, alpha)
    # each slice multiplies D_gamma1 into D_alpha1 with norm <= sqrt(C) ||f_w0||_alpha1
    d = int(p["slice_deg"])
    fam = NamedFamily(FamilyId.NON_FACTORING, {"alpha": alpha.as_tuple()})
    f = generate(fam, d, int(p["slice_cols"]))
    c1 = float(convolution_weight_scan_1d(gamma.alpha1, alpha.alpha1, 2 * d).max())
    worst = 0.0
    for w0 in np.linspace(0.0, float(p["w0_max"]), 4):
        s = slice_w(f, w0)
        est = section_norm_1d(s.coeffs, gamma.alpha1, alpha.alpha1, d).value
        worst = max(worst, est / (math.sqrt(c1) * norm1d(s, alpha.alpha1)))
    ctx.metric("C1", c1)
    ctx.le("slice_multiplier_ratio", worst, 1.0, 1e-9)


def _check_unbounded_slice_norms(p, ctx):
    alpha = _w(p["alpha"])
    jmax = int(p["jmax"])
    kdeg = int(p["k_deg"])
    fam = NamedFamily(FamilyId.ALL_ONES, {})
    c = float(np.exp(alpha.alpha1 * _log1p_range(kdeg)).sum())
    ctx.metric("C", c)
    worst = 0.0
    prev = 0.0
    grows = True
    for j in range(1, jmax + 1):
        w = 1.0 - 2.0 ** (-j)
        ldeg = 64 << j
        f = generate(fam, kdeg, ldeg)
        s = _slice_norm_sq(f, alpha.alpha1, w)
        scaled = s * (1.0 - w) ** 2 / c
        worst = max(worst, abs(scaled - 1.0))
        grows &= s > prev
        prev = s
        ctx.metric(f"slice_norm_sq_j{j}", s)
    ctx.le("scaled_rel_err", worst, 1e-10)
    ctx.require("slice_norms_increasing", grows)
    ctx.metric("full_norm_sq_box", c * float(np.exp(alpha.alpha2 * _log1p_range(64 << jmax)).sum()))


def _check_bounded_slices_insufficient(p, ctx):
    alpha = _w(p["alpha"])
    if not alpha.alpha2 > 1:
        raise PreconditionError("needs alpha2 > 1")
    ns = _cutoffs(p)
    nmax = max(ns)
    fam = NamedFamily(FamilyId.LACUNARY_BOUNDED, {"alpha": alpha.as_tuple()})
    g = lacunary_coefficients(alpha.alpha2, nmax)
    ctx.le("sup_g_bound", float(np.abs(g).sum()), 1.0, 1e-15)
    box = _box_sums(fam, alpha, ns)
    ctx.trend("full_norm_sq", box, ["log_divergent"])
    zeta2 = math.pi ** 2 / 6
    f = generate(fam, int(p["slice_deg"]), nmax)
    worst = 0.0
    for r in p["w0_radii"]:
        for t in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            worst = max(worst, _slice_norm_sq(f, alpha.alpha1, float(r) * np.exp(1j * t)))
    ctx.le("max_slice_norm_sq_over_zeta2", worst / zeta2, 1.0, 1e-12)


def _check_bounded_slices_sufficient(p, ctx):
    alpha = _w(p["alpha"])
    if not (alpha.alpha1 < 0 and alpha.alpha2 < 0):
        raise PreconditionError("needs alpha < (0, 0)")
    rng = _rng(p)
    d = int(p["deg"])
    nodes, qw = _gauss_jacobi_radial(alpha.alpha2, d // 2 + 2)
    m = 2 * d + 1
    th = 2 * np.pi * np.arange(m) / m
    wpts = (nodes[:, None] * np.exp(1j * th)[None, :]).ravel()
    vand = wpts[None, :] ** np.arange(d + 1)[:, None]
    mass = 2.0 * float(qw.sum())
    tor = np.exp(2j * np.pi * np.arange(4 * d) / (4 * d))
    vt = tor[None, :] ** np.arange(d + 1)[:, None]
    worst_iter, worst_bound = 0.0, 0.0
    for _ in range(int(p["n_series"])):
        f = random_series(rng, d, d)
        b = f.coeffs @ vand  # slice coefficients, one column per node
        i1 = np.array([slice_integral_norm_sq(b[:, j], alpha.alpha1) for j in range(b.shape[1])])
        i1 = i1.reshape(nodes.shape[0], m)
        iterated = 2.0 * float(qw @ i1.mean(axis=1))
        exact = integral_norm_sq_exact(f, alpha)
        worst_iter = max(worst_iter, abs(iterated - exact) / exact)
        bt = f.coeffs @ vt
        m_torus = max(slice_integral_norm_sq(bt[:, j], alpha.alpha1) for j in range(bt.shape[1]))
        m_nodes = float(i1.max())
        worst_bound = max(worst_bound, iterated / (m_nodes * mass))
        ctx.metric("slice_sup_torus_last", m_torus)
    ctx.metric("measure_mass", mass)
    ctx.le("iterated_vs_exact_rel_err", worst_iter, 1e-10)
    ctx.le("full_over_sup_times_mass", worst_bound, 1.0, 1e-12)


def _check_multiplier_slices(p, ctx):
    alpha, beta = _w(p["alpha"]), _w(p["beta"])
    rng = _rng(p)
    d = int(p["deg"])
    hd = int(p["h_deg"])
    worst = 0.0
    for _ in range(int(p["n_h"])):
        h = random_polynomial(rng, hd, hd)
        two = section_norm(h, alpha, beta, (d, d)).value
        for r in p["w0_radii"]:
            for t in (0.0, 2.0, 4.0):
                w0 = float(r) * np.exp(1j * t)
                hs = slice_w(h, w0)
                one = section_norm_1d(hs.coeffs, alpha.alpha1, beta.alpha1, d).value
                lam = eval_functional_norm_1d(beta.alpha2, w0).upper
                worst = max(worst, one / (two * lam))
    ctx.le("max_slice_over_bound", worst, 1.0, 1e-9)


@functools.lru_cache(maxsize=4)
def _rational_pass(alpha: tuple, nmax: int, w0s: tuple, block: int = 256):
    a = as_weight(alpha)
    fam = NamedFamily(FamilyId.RATIONAL, {})
    lg = _log1p_range(nmax)
    ns = np.array([1 << e for e in range(4, 32) if (1 << e) <= nmax], dtype=np.int64)
    box = np.zeros(ns.shape[0])
    anti = np.zeros(2 * nmax + 1)
    w0 = np.asarray(w0s, dtype=np.complex128)
    wp = w0[None, :] ** np.arange(nmax + 1)[:, None]
    b = np.empty((nmax + 1, w0.shape[0]), dtype=np.complex128)
    for k0 in range(0, nmax + 1, block):
        k1 = min(nmax + 1, k0 + block)
        rows = family_rows(fam, k0, k1, nmax)
        mod2 = rows.real ** 2 + rows.imag ** 2
        terms = np.ascontiguousarray(mod2 * np.exp(a.alpha1 * lg[k0:k1, None] + a.alpha2 * lg[None, :]))
        _kernels.box_accumulate(terms, k0, ns, box)
        absr = np.abs(rows)
        for i in range(k1 - k0):
            anti[k0 + i: k0 + i + nmax + 1] += absr[i]
        b[k0:k1] = rows @ wp
    return ns.tolist(), box.tolist(), anti[: nmax + 1], b


def _check_rational_example(p, ctx):
    alpha = _w(p["alpha"])
    if not (alpha.alpha1 >= 0 and alpha.alpha2 >= 0):
        raise PreconditionError("the binomial lower bound needs alpha >= (0, 0)")
    ns = _cutoffs(p)
    nmax = max(ns)
    w0s = tuple(complex(x) for x in (0.5, 0.9, -0.9, 0.7j, 0.6 + 0.6j))
    all_ns, box, anti, b = _rational_pass(alpha.as_tuple(), nmax, w0s)
    k = np.arange(nmax + 1.0)
    # Cauchy-Schwarz on each anti-diagonal: (sum_l |a_{l,k-l}|)^2 / (k+1)
    minorant = np.cumsum(anti ** 2 / (k + 1.0))
    v = ctx.trend("binomial_minorant", [(n, float(minorant[n])) for n in ns], ["log_divergent"])
    if v is not None:
        ctx.le("binomial_minorant.const_rel_err", abs(v.fit_constant - 0.25) / 0.25, p["const_rtol"])
    full = [(n, s) for n, s in zip(all_ns, box) if n in ns]
    ctx.require("minorant_below_full", all(minorant[n] <= s * (1 + 1e-12) for n, s in full))
    ctx.trend("full_norm_sq", full, ["log_divergent", "power_divergent"])
    # slices: coefficients -(2-w0)^-(k+1); norms finite for every alpha1
    sd = int(p["slice_deg"])
    fs = generate(NamedFamily(FamilyId.RATIONAL, {}), sd, sd)
    ks = np.arange(sd + 1.0)
    half = sd // 2
    worst_coef = 0.0
    worst_norm = 0.0
    for w0 in w0s:
        bs = slice_w(fs, w0).coeffs
        exact = -(2.0 - w0) ** (-(ks[: half + 1] + 1.0))
        worst_coef = max(worst_coef, float(np.abs(bs[: half + 1] - exact).max()))
        q = abs(2.0 - w0) ** -2.0
        for a1 in p["slice_alphas"]:
            trunc = float(np.sum(np.abs(bs) ** 2 * np.exp(a1 * np.log(ks + 1.0))))
            kk = np.arange(20000.0)
            closed = float(np.sum(q ** (kk + 1.0) * np.exp(a1 * np.log(kk + 1.0))))
            worst_norm = max(worst_norm, abs(trunc - closed) / closed)
    ctx.le("slice_coeff_abs_err", worst_coef, 1e-10)
    ctx.le("slice_norm_rel_err", worst_norm, 1e-9)
    j = w0s.index(0.9 + 0j)
    cs = np.cumsum(np.abs(b[:, j]) ** 2 * np.exp(alpha.alpha1 * np.log(k + 1.0)))
    ctx.trend("slice_partial_sums", [(n, float(cs[n])) for n in ns], ["convergent"])
    # unboundedness of f itself
    hd = int(p["hinf_deg"])
    h = generate(NamedFamily(FamilyId.RATIONAL, {}), hd, hd)
    r_lo, r_hi = (float(x) for x in p["hinf_radii"])
    e_lo = hinf_norm_estimate(h, r_lo, 2 * hd + 2)
    e_hi = hinf_norm_estimate(h, r_hi, 2 * hd + 2)
    ctx.metric("hinf_lo", e_lo)
    ctx.metric("hinf_hi", e_hi)
    ctx.require("hinf_growth", e_hi / e_lo > float(p["hinf_growth_min"]), f"{e_hi / e_lo}")
    ctx.metric("hinf_ratio", e_hi / e_lo)


# ---------------------------------------------------------------------------
# catalogue
# ---------------------------------------------------------------------------

_TREND = dict(max_deg=8192, min_exp=4)

CATALOG = {
    "proper_containment": (_check_proper_containment,
                           dict(alpha=(1.0, 1.0), beta=(0.5, 0.5), const_rtol=0.1, **_TREND), True),
    "remark_containment": (_check_remark_containment,
                           dict(alpha=(1.0, 1.0), beta=(0.5, 1.0), const_rtol=0.1, **_TREND), True),
    "d_in_hinf": (_check_d_in_hinf,
                  dict(alpha=(2.0, 2.0), deg=32, n_series=20, n_points=50, rmax=0.999, seed=DEFAULT_SEED), False),
    "integral_equivalence": (_check_integral_equivalence,
                             dict(alpha=(-1.5, -0.5), deg=24, n_series=20, quad_rtol=1e-8, seed=DEFAULT_SEED),
                             False),
    "multipliers_below_zero_iff": (_check_multipliers_below_zero_iff,
                                   dict(alpha=(-1.0, -1.0), beta=(-2.0, -2.0), witness_exponent=0.75,
                                        max_deg=2048, min_exp=4, trend_min_n=16, tensor_deg=24,
                                        envelope_deg=1024, envelope_radii=(0.5, 0.8, 0.9, 0.95, 0.97)),
                                   True),
    "M_equals_Hinf": (_check_M_equals_Hinf,
                      dict(alpha=(-1.0, -1.0), h_deg=4, n_h=4, section_degs=(8, 16, 32), max_deg=128,
                           min_exp=3, trend_min_n=8, seed=DEFAULT_SEED), True),
    "M_equals_Dbeta": (_check_M_equals_Dbeta,
                       dict(alpha=(2.0, 2.0), beta=(1.5, 1.5), deg=16, n_pairs=20, kmax=2048, seed=DEFAULT_SEED),
                       False),
    "M_monotone": (_check_M_monotone,
                   dict(alpha=(2.0, 2.0), beta=(1.0, 1.0), lam=0.75, deg=12, h_deg=4, n_h=5, seed=DEFAULT_SEED),
                   False),
    "zero_multiplier": (_check_zero_multiplier,
                        dict(alpha=(0.0, 0.0), beta=(1.0, 1.0), radii=(0.9, 0.99, 0.999), ratio_bound=0.05,
                             deg=16, seed=DEFAULT_SEED), False),
    "slices_membership": (_check_slices_membership,
                          dict(alpha=(0.5, -1.5), deg=32, n_series=50, w0_radii=(0.0, 0.3, 0.6, 0.8, 0.9, 0.95),
                               w0_angles=4, seed=DEFAULT_SEED), False),
    "non_factoring": (_check_non_factoring,
                      dict(alpha=(0.0, 0.0), w0_max=0.9, n_w0=10, const_rtol=0.1, **_TREND), True),
    "unbounded_slice_norms": (_check_unbounded_slice_norms,
                              dict(alpha=(-2.0, -2.0), jmax=8, k_deg=256), False),
    "bounded_slices_insufficient": (_check_bounded_slices_insufficient,
                                    dict(alpha=(0.0, 2.0), slice_deg=512,
                                         w0_radii=(0.5, 0.9, 0.99, 0.999), **_TREND), True),
    "bounded_slices_sufficient": (_check_bounded_slices_sufficient,
                                  dict(alpha=(-1.0, -1.0), deg=16, n_series=10, seed=DEFAULT_SEED), False),
    "product_membership": (_check_product_membership,
                           dict(alpha=(1.0, -1.0), deg=32, n_series=10, seed=DEFAULT_SEED), False),
    "multiplier_slices": (_check_multiplier_slices,
                          dict(alpha=(0.0, 0.0), beta=(-1.0, -1.0), deg=24, h_deg=4, n_h=3,
                               w0_radii=(0.0, 0.5, 0.9), seed=DEFAULT_SEED), False),
    "multiplier_slices_converse_fails": (_check_multiplier_slices_converse_fails,
                                         dict(gamma=(2.0, 2.0), alpha=(0.0, 0.0), w0_max=0.9, n_w0=10,
                                              slice_deg=128, slice_cols=1024, const_rtol=0.1, **_TREND), True),
    "rational_example": (_check_rational_example,
                         dict(alpha=(0.0, 0.0), slice_alphas=(-1.0, 0.0, 3.0), slice_deg=512, hinf_deg=1024,
                              hinf_radii=(0.9, 0.99), hinf_growth_min=5.0, const_rtol=0.1, **_TREND), True),
}

TREND_CHECKS = tuple(k for k, v in CATALOG.items() if v[2])


def _resolve_params(check_id, params):
    if check_id not in CATALOG:
        raise ConfigurationError(f"unknown check {check_id!r}")
    _, defaults, _ = CATALOG[check_id]
    merged = dict(defaults)
    for k, v in (params or {}).items():
        if k not in defaults and k != "seed":
            raise ConfigurationError(f"check {check_id!r} has no parameter {k!r}")
        merged[k] = v
    return merged


def run_check(check_id: str, params: dict | None = None) -> CheckReport:
    """Run one catalogue entry with ``params`` overriding its defaults."""
    fn, _, _ = CATALOG.get(check_id, (None, None, None))
    merged = _resolve_params(check_id, params)
    ctx = _Ctx()
    t0 = time.perf_counter()
    fn(merged, ctx)
    ms = int(round((time.perf_counter() - t0) * 1000))
    if ctx.failures:
        verdict = Verdict.FAIL
    elif ctx.low_res or ctx.bad_fit:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.PASS
    return CheckReport(check_id, merged, verdict, ctx.metrics, ctx.tolerances, ms,
                       ctx.trends, ctx.failures, bool(ctx.low_res))


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    reports: list
    summary: dict

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0 and self.summary["inconclusive"] == 0

    def to_dict(self, timestamp: str | None = None) -> dict:
        rows = []
        for r in self.reports:
            d = r.to_dict()
            d["status"] = _status(r)
            rows.append(d)
        out = {"checks": rows, "summary": dict(self.summary)}
        if timestamp is not None:
            out["timestamp"] = timestamp
        return out


def _status(r: CheckReport) -> str:
    if r.verdict is Verdict.INCONCLUSIVE and r.low_resolution:
        return "skipped-low-resolution"
    return r.verdict.value


def default_threads() -> int:
    env = os.environ.get("POLYDIRICH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"POLYDIRICH_THREADS must be an integer, got {env!r}") from None
    return min(4, os.cpu_count() or 1)


def full_suite(config: dict | None = None, threads: int | None = None) -> SuiteReport:
    """Run every catalogue check.

    ``config`` keys: ``seed`` (applied to every randomised check), ``deg``
    (caps the largest cut-off of trend checks), ``checks`` (per-check
    parameter overrides) and ``only`` (subset of check ids).
    """
    config = dict(config or {})
    unknown = set(config) - {"seed", "deg", "checks", "only", "threads"}
    if unknown:
        raise ConfigurationError(f"unknown config keys {sorted(unknown)}")
    ids = list(config.get("only") or CATALOG)
    overrides = config.get("checks") or {}
    for cid in list(ids) + list(overrides):
        if cid not in CATALOG:
            raise ConfigurationError(f"unknown check {cid!r}")
    jobs = []
    for cid in ids:
        params = {}
        defaults = CATALOG[cid][1]
        if "seed" in config and "seed" in defaults:
            params["seed"] = int(config["seed"])
        if "deg" in config and CATALOG[cid][2]:
            params["max_deg"] = int(config["deg"])
        params.update(overrides.get(cid, {}))
        jobs.append((cid, params))
    n = threads or int(config.get("threads", 0)) or default_threads()
    t0 = time.perf_counter()
    if n <= 1:
        reports = [run_check(c, q) for c, q in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            reports = list(ex.map(lambda job: run_check(*job), jobs))
    statuses = [_status(r) for r in reports]
    summary = {
        "total": len(reports),
        "pass": statuses.count("pass"),
        "fail": statuses.count("fail"),
        "inconclusive": statuses.count("inconclusive"),
        "skipped_low_resolution": statuses.count("skipped-low-resolution"),
        "runtime_ms": int(round((time.perf_counter() - t0) * 1000)),
    }
    return SuiteReport(reports, summary)
