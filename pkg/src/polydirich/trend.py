"""Classify partial-sum sequences as convergent or divergent.

A divergence claim about an explicit series cannot be decided from finitely
many terms. Instead the partial sums ``S_N`` at increasing cut-offs are fitted
against a few growth models and the best model decides the verdict:

* ``b + c ln N``                        -> log_divergent
* ``b + c N**p`` with p > 0             -> power_divergent
* ``b + c N**p`` with p < 0, small tail -> convergent

Anything that fits badly, or has too few samples at large N, is reported as
inconclusive rather than guessed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError


class Classification(str, enum.Enum):
    CONVERGENT = "convergent"
    LOG_DIVERGENT = "log_divergent"
    POWER_DIVERGENT = "power_divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DivergenceVerdict:
    """``fit_constant`` is c of the winning model; ``exponent`` is p (0 for log).

    ``fit_residual`` is the rms residual of the winning fit divided by the
    spread of the sampled partial sums. ``tail`` is the last observed
    increment ``S_N[-1] - S_N[-2]``.
    """

    classification: Classification
    fit_constant: float
    fit_residual: float
    exponent: float = 0.0
    tail: float = 0.0
    reason: str = ""


# exponent grids kept away from 0, where N**p and ln N are indistinguishable
_P_POS = np.round(np.arange(0.05, 3.0001, 0.01), 10)
_P_NEG = -_P_POS[::-1]


def _linfit(x, y):
    A = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return coef, float(np.sqrt(np.mean(res ** 2)))


def _best_power(logn, s, grid):
    best = (math.inf, 0.0, 0.0)
    for p in grid:
        coef, rms = _linfit(np.exp(p * logn), s)
        if rms < best[0]:
            best = (rms, float(p), float(coef[1]))
    return best


def divergence_trend(partial_sums, *, min_n: int = 256, min_samples: int = 4,
                     residual_bound: float = 1e-2, tail_tol: float = 1e-2) -> DivergenceVerdict:
    """Fit ``(N, S_N)`` pairs and classify the growth.

    Only samples with ``N >= min_n`` enter the fit; with fewer than
    ``min_samples`` of them the verdict is inconclusive. A convergent verdict
    additionally needs the last increment below ``tail_tol * max(1, |S|)``.
    """
    pts = [(float(n), float(s)) for n, s in partial_sums]
    if len(pts) < 4:
        raise PreconditionError("need at least 4 partial sums")
    ns = np.array([p[0] for p in pts])
    if np.any(np.diff(ns) <= 0) or ns[0] <= 0:
        raise PreconditionError("sample sizes must be positive and strictly increasing")
    keep = ns >= min_n
    if keep.sum() < min_samples:
        return DivergenceVerdict(Classification.INCONCLUSIVE, math.nan, math.nan,
                                 reason=f"{int(keep.sum())} samples with N >= {min_n}")
    n = ns[keep]
    s = np.array([p[1] for p in pts])[keep]
    logn = np.log(n)
    spread = float(s.max() - s.min())
    tail = float(s[-1] - s[-2])
    if spread == 0.0:
        # constant partial sums: converged already
        return DivergenceVerdict(Classification.CONVERGENT, 0.0, 0.0, tail=tail)

    (_, c_log), rms_log = _linfit(logn, s)
    rms_pos, p_pos, c_pos = _best_power(logn, s, _P_POS)
    rms_neg, p_neg, c_neg = _best_power(logn, s, _P_NEG)
    fits = [
        (rms_log / spread, Classification.LOG_DIVERGENT, float(c_log), 0.0),
        (rms_pos / spread, Classification.POWER_DIVERGENT, c_pos, p_pos),
        (rms_neg / spread, Classification.CONVERGENT, c_neg, p_neg),
    ]
    # ties go to the earlier (log) model
    rel, cls, c, p = min(fits, key=lambda t: t[0])
    if rel > residual_bound:
        return DivergenceVerdict(Classification.INCONCLUSIVE, c, rel, p, tail,
                                 reason="no model fits within the residual bound")
    if cls is Classification.CONVERGENT and abs(tail) > tail_tol * max(1.0, abs(float(s[-1]))):
        return DivergenceVerdict(Classification.INCONCLUSIVE, c, rel, p, tail,
                                 reason="decaying fit but Cauchy tail still large")
    if cls is not Classification.CONVERGENT and c <= 0:
        return DivergenceVerdict(Classification.INCONCLUSIVE, c, rel, p, tail,
                                 reason="partial sums decrease")
    return DivergenceVerdict(cls, c, rel, p, tail)


def dyadic_degrees(lo_exp: int = 8, hi_exp: int = 13) -> list[int]:
    return [1 << e for e in range(lo_exp, hi_exp + 1)]


def partial_sums_1d(terms, ns) -> list[tuple[int, float]]:
    """``S_N = sum_{k <= N} terms[k]`` at each cut-off N (needs len(terms) > max N)."""
    c = np.cumsum(np.asarray(terms, dtype=float))
    return [(int(n), float(c[int(n)])) for n in ns]
