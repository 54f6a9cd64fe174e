"""Inner loops shared by the numeric modules.

Every kernel exists twice: a plain-loop version compiled with numba, and a
vectorised numpy version used when numba is disabled. The public names at the
bottom of the module are bound to whichever backend is active.

Summation order is fixed (row-major, ascending) in the loop versions. The
numpy versions use ``cumsum`` where the order matters for bit-level
reproducibility and plain reductions elsewhere.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit


# ---------------------------------------------------------------------------
# Cauchy product of two coefficient grids.
#
# The terms contributing to c[k, l] form the same multiset for a*b and b*a,
# enumerated in opposite orders. Adding term i to its mirror P-1-i before the
# running sum makes the result independent of operand order, bit for bit.
# ---------------------------------------------------------------------------

def _cauchy2d_loop(a, b):
    ka, la = a.shape
    kb, lb = b.shape
    out = np.zeros((ka + kb - 1, la + lb - 1), dtype=np.complex128)
    for k in range(ka + kb - 1):
        m0 = max(0, k - kb + 1)
        m1 = min(k, ka - 1)
        nm = m1 - m0 + 1
        for l in range(la + lb - 1):
            n0 = max(0, l - lb + 1)
            n1 = min(l, la - 1)
            nn = n1 - n0 + 1
            p = nm * nn
            acc = 0j
            for i in range(p // 2):
                q = i // nn
                r = i - q * nn
                m = m0 + q
                n = n0 + r
                mm = m1 - q
                nr = n1 - r
                t1 = a[m, n] * b[k - m, l - n]
                t2 = a[mm, nr] * b[k - mm, l - nr]
                acc += t1 + t2
            if p % 2 == 1:
                i = p // 2
                q = i // nn
                m = m0 + q
                n = n0 + i - q * nn
                acc += a[m, n] * b[k - m, l - n]
            out[k, l] = acc
    return out


def _cauchy2d_numpy(a, b):
    ka, la = a.shape
    kb, lb = b.shape
    out = np.zeros((ka + kb - 1, la + lb - 1), dtype=np.complex128)
    for k in range(ka + kb - 1):
        m0 = max(0, k - kb + 1)
        m1 = min(k, ka - 1)
        for l in range(la + lb - 1):
            n0 = max(0, l - lb + 1)
            n1 = min(l, la - 1)
            blk_a = a[m0:m1 + 1, n0:n1 + 1]
            blk_b = b[k - m0 - (m1 - m0):k - m0 + 1, l - n0 - (n1 - n0):l - n0 + 1][::-1, ::-1]
            # real arithmetic: numpy's complex multiply may fuse a*d + b*c,
            # which is not symmetric in the operands
            ar, ai = blk_a.real.ravel(), blk_a.imag.ravel()
            br, bi = blk_b.real.ravel(), blk_b.imag.ravel()
            terms = (ar * br - ai * bi) + 1j * (ar * bi + ai * br)
            p = terms.size
            half = p // 2
            acc = 0j
            if half:
                pairs = terms[:half] + terms[::-1][:half]
                acc = np.cumsum(pairs)[-1]
            if p % 2 == 1:
                acc = acc + terms[half]
            out[k, l] = acc
    return out


# ---------------------------------------------------------------------------
# Point evaluation, sum over the grid in row-major order.
# ---------------------------------------------------------------------------

def _evaluate2d_loop(a, z, w):
    K, L = a.shape
    acc = 0j
    zk = 1.0 + 0j
    for k in range(K):
        wl = 1.0 + 0j
        for l in range(L):
            acc += a[k, l] * zk * wl
            wl *= w
        zk *= z
    return acc


def _evaluate2d_numpy(a, z, w):
    K, L = a.shape
    zp = np.cumprod(np.concatenate(([1.0 + 0j], np.full(K - 1, z, dtype=np.complex128))))
    wp = np.cumprod(np.concatenate(([1.0 + 0j], np.full(L - 1, w, dtype=np.complex128))))
    terms = (a * zp[:, None]) * wp[None, :]
    return np.cumsum(terms.ravel())[-1] if terms.size else 0j


# ---------------------------------------------------------------------------
# Weighted sums with log-space weights exp(a1*log(k+1) + a2*log(l+1)).
# ---------------------------------------------------------------------------

def _weighted_sq_sum_loop(a, alpha1, alpha2):
    K, L = a.shape
    acc = 0.0
    for k in range(K):
        lk = alpha1 * np.log(k + 1.0)
        for l in range(L):
            v = a[k, l]
            mod2 = v.real * v.real + v.imag * v.imag
            if mod2 != 0.0:
                acc += mod2 * np.exp(lk + alpha2 * np.log(l + 1.0))
    return acc


def _weighted_sq_sum_numpy(a, alpha1, alpha2):
    K, L = a.shape
    logw = alpha1 * np.log(np.arange(1, K + 1.0))[:, None] + alpha2 * np.log(np.arange(1, L + 1.0))[None, :]
    mod2 = a.real ** 2 + a.imag ** 2
    terms = np.where(mod2 != 0.0, mod2 * np.exp(logw), 0.0)
    return float(np.cumsum(terms.ravel())[-1]) if terms.size else 0.0


def _weighted_inner_loop(a, b, alpha1, alpha2):
    K, L = a.shape
    acc = 0j
    for k in range(K):
        lk = alpha1 * np.log(k + 1.0)
        for l in range(L):
            acc += a[k, l] * np.conj(b[k, l]) * np.exp(lk + alpha2 * np.log(l + 1.0))
    return acc


def _weighted_inner_numpy(a, b, alpha1, alpha2):
    K, L = a.shape
    logw = alpha1 * np.log(np.arange(1, K + 1.0))[:, None] + alpha2 * np.log(np.arange(1, L + 1.0))[None, :]
    terms = a * np.conj(b) * np.exp(logw)
    return complex(np.cumsum(terms.ravel())[-1]) if terms.size else 0j


# ---------------------------------------------------------------------------
# Genuine double sum  sum_k sum_l u_k v_l  (row-major), used by the
# point-evaluation functional norms.
# ---------------------------------------------------------------------------

def _outer_sum_loop(u, v):
    acc = 0.0
    for k in range(u.shape[0]):
        uk = u[k]
        if uk == 0.0:
            continue
        for l in range(v.shape[0]):
            acc += uk * v[l]
    return acc


def _outer_sum_numpy(u, v):
    acc = 0.0
    chunk = max(1, 2_000_000 // max(1, v.shape[0]))
    for k0 in range(0, u.shape[0], chunk):
        block = u[k0:k0 + chunk, None] * v[None, :]
        acc += float(block.sum())
    return acc


# ---------------------------------------------------------------------------
# Box partial sums: given a block of rows k0..k0+B-1 of a nonnegative term
# grid, add  sum_{k<=N, l<=N} t[k, l]  to out[j] for every cut-off N = ns[j].
# ---------------------------------------------------------------------------

def _box_accumulate_loop(block, k0, ns, out):
    B, L = block.shape
    for i in range(B):
        k = k0 + i
        run = 0.0
        j = 0
        # ns is ascending; walk the row once
        for l in range(L):
            run += block[i, l]
            while j < ns.shape[0] and ns[j] == l:
                if k <= ns[j]:
                    out[j] += run
                j += 1
        while j < ns.shape[0]:
            if k <= ns[j]:
                out[j] += run
            j += 1


def _box_accumulate_numpy(block, k0, ns, out):
    B, L = block.shape
    csum = np.cumsum(block, axis=1)
    ks = k0 + np.arange(B)
    for j, n in enumerate(ns):
        col = min(int(n), L - 1)
        rows = ks <= n
        if rows.any():
            out[j] += float(csum[rows, col].sum())


# ---------------------------------------------------------------------------
# One-axis convolution weights
#   V(k) = (k+1)^b * sum_{m<=k} (m+1)^{-a} (k-m+1)^{-b}
# ---------------------------------------------------------------------------

def _conv_weight_1d_loop(kmax, a, b):
    out = np.empty(kmax + 1)
    for k in range(kmax + 1):
        acc = 0.0
        for m in range(k + 1):
            acc += np.exp(-a * np.log(m + 1.0) - b * np.log(k - m + 1.0))
        out[k] = acc * np.exp(b * np.log(k + 1.0))
    return out


def _conv_weight_1d_numpy(kmax, a, b):
    out = np.empty(kmax + 1)
    logs = np.log(np.arange(1, kmax + 2.0))
    for k in range(kmax + 1):
        terms = np.exp(-a * logs[:k + 1] - b * logs[k::-1])
        out[k] = np.cumsum(terms)[-1] * np.exp(b * logs[k])
    return out


if HAVE_NUMBA:
    cauchy2d = njit(_cauchy2d_loop)
    evaluate2d = njit(_evaluate2d_loop)
    weighted_sq_sum = njit(_weighted_sq_sum_loop)
    weighted_inner = njit(_weighted_inner_loop)
    outer_sum = njit(_outer_sum_loop)
    box_accumulate = njit(_box_accumulate_loop)
    conv_weight_1d = njit(_conv_weight_1d_loop)
else:
    cauchy2d = _cauchy2d_numpy
    evaluate2d = _evaluate2d_numpy
    weighted_sq_sum = _weighted_sq_sum_numpy
    weighted_inner = _weighted_inner_numpy
    outer_sum = _outer_sum_numpy
    box_accumulate = _box_accumulate_numpy
    conv_weight_1d = _conv_weight_1d_numpy

NUMPY_KERNELS = {
    "cauchy2d": _cauchy2d_numpy,
    "evaluate2d": _evaluate2d_numpy,
    "weighted_sq_sum": _weighted_sq_sum_numpy,
    "weighted_inner": _weighted_inner_numpy,
    "outer_sum": _outer_sum_numpy,
    "box_accumulate": _box_accumulate_numpy,
    "conv_weight_1d": _conv_weight_1d_numpy,
}
