"""Truncated power series on the bidisc and the disc.

A :class:`TruncatedSeries` stores the dense coefficient grid ``a[k, l]`` of
``sum a[k, l] z**k w**l`` for ``0 <= k <= deg_z`` and ``0 <= l <= deg_w``.
Both series types are immutable: the coefficient arrays are copied on
construction and flagged read-only.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy.special import gammaln

from . import _kernels
from .errors import ConfigurationError, DomainError


def _frozen(arr, ndim):
    out = np.array(arr, dtype=np.complex128, copy=True)
    if out.ndim != ndim:
        raise ConfigurationError(f"expected a {ndim}-d coefficient array, got shape {out.shape}")
    if out.size == 0:
        raise ConfigurationError("coefficient array is empty")
    if not np.all(np.isfinite(out)):
        raise ConfigurationError("coefficients must be finite")
    out.setflags(write=False)
    return out


def _check_disc(*points):
    for p in points:
        if not abs(p) < 1.0:
            raise DomainError(f"point {p!r} is not inside the open unit disc")


@dataclass(frozen=True)
class TruncatedSeries:
    """Bivariate Taylor polynomial with a (deg_z+1) x (deg_w+1) coefficient grid."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs, 2))

    @property
    def deg_z(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg_w(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def deg(self) -> tuple[int, int]:
        return self.deg_z, self.deg_w

    @classmethod
    def zeros(cls, deg_z: int, deg_w: int) -> "TruncatedSeries":
        return cls(np.zeros((deg_z + 1, deg_w + 1)))

    @classmethod
    def monomial(cls, k: int, l: int, coeff: complex = 1.0) -> "TruncatedSeries":
        a = np.zeros((k + 1, l + 1), dtype=np.complex128)
        a[k, l] = coeff
        return cls(a)

    @classmethod
    def constant(cls, c: complex = 1.0) -> "TruncatedSeries":
        return cls(np.full((1, 1), c, dtype=np.complex128))

    def resized(self, deg_z: int, deg_w: int) -> "TruncatedSeries":
        """Zero-pad or truncate to the given degree box."""
        out = np.zeros((deg_z + 1, deg_w + 1), dtype=np.complex128)
        kz = min(deg_z, self.deg_z) + 1
        kw = min(deg_w, self.deg_w) + 1
        out[:kz, :kw] = self.coeffs[:kz, :kw]
        return TruncatedSeries(out)

    def scaled(self, c: complex) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs * c)

    def __call__(self, z, w):
        return evaluate(self, z, w)


@dataclass(frozen=True)
class UnivariateSeries:
    """One-variable Taylor polynomial of degree ``deg``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs, 1))

    @property
    def deg(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, z):
        return evaluate1d(self, z)


class FamilyId(str, Enum):
    PROPER_CONTAINMENT = "proper_containment"
    UNIVARIATE_REMARK = "univariate_remark"
    NON_FACTORING = "non_factoring"
    ALL_ONES = "all_ones"
    RATIONAL = "rational"
    LACUNARY_BOUNDED = "lacunary_bounded"
    TENSOR = "tensor"


# parameters each family needs
_REQUIRED = {
    FamilyId.PROPER_CONTAINMENT: ("alpha",),
    FamilyId.UNIVARIATE_REMARK: ("alpha",),
    FamilyId.NON_FACTORING: ("alpha",),
    FamilyId.ALL_ONES: (),
    FamilyId.RATIONAL: (),
    FamilyId.LACUNARY_BOUNDED: ("alpha",),
    FamilyId.TENSOR: ("f1", "f2"),
}


@dataclass(frozen=True)
class NamedFamily:
    """An explicit function from the theory, identified by ``id``.

    ``params`` holds ``alpha`` (a weight pair) for the weight-dependent
    families, and ``f1``/``f2`` (:class:`UnivariateSeries`) for ``tensor``.
    """

    id: FamilyId
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        try:
            fid = FamilyId(self.id)
        except ValueError:
            raise ConfigurationError(f"unknown family {self.id!r}") from None
        object.__setattr__(self, "id", fid)
        missing = [p for p in _REQUIRED[fid] if p not in self.params]
        if missing:
            raise ConfigurationError(f"family {fid.value} needs parameter(s) {', '.join(missing)}")
        if "alpha" in _REQUIRED[fid]:
            a = self.params["alpha"]
            try:
                a1, a2 = (float(a[0]), float(a[1]))
            except (TypeError, ValueError, IndexError, KeyError):
                raise ConfigurationError(f"alpha must be a pair of reals, got {a!r}") from None
            if not (math.isfinite(a1) and math.isfinite(a2)):
                raise ConfigurationError("alpha must be finite")
        if fid is FamilyId.LACUNARY_BOUNDED and not float(self.params["alpha"][1]) > 1.0:
            raise ConfigurationError("lacunary_bounded needs alpha2 > 1")

    def alpha(self) -> tuple[float, float]:
        a = self.params["alpha"]
        return float(a[0]), float(a[1])


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def evaluate(f: TruncatedSeries, z: complex, w: complex) -> complex:
    """Sum ``a[k, l] z**k w**l`` over the grid in row-major order."""
    _check_disc(z, w)
    return complex(_kernels.evaluate2d(f.coeffs, complex(z), complex(w)))


def evaluate1d(f: UnivariateSeries, z: complex) -> complex:
    _check_disc(z)
    return complex(_kernels.evaluate2d(f.coeffs[:, None], complex(z), 0j))


def evaluate_grid(f: TruncatedSeries, zs, ws) -> np.ndarray:
    """Vectorised evaluation ``F[i, j] = f(zs[i], ws[j])`` (no domain check)."""
    zs = np.asarray(zs, dtype=np.complex128)
    ws = np.asarray(ws, dtype=np.complex128)
    vz = zs[:, None] ** np.arange(f.deg_z + 1)[None, :]
    vw = ws[:, None] ** np.arange(f.deg_w + 1)[None, :]
    return vz @ f.coeffs @ vw.T


def cauchy_product(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Full (untruncated) product; the result has degree ``deg f + deg g``."""
    return TruncatedSeries(_kernels.cauchy2d(f.coeffs, g.coeffs))


def cauchy_product1d(f: UnivariateSeries, g: UnivariateSeries) -> UnivariateSeries:
    c = _kernels.cauchy2d(f.coeffs[:, None], g.coeffs[:, None])
    return UnivariateSeries(c[:, 0])


def slice_w(f: TruncatedSeries, w0: complex) -> UnivariateSeries:
    """The one-variable function ``z -> f(z, w0)``."""
    _check_disc(w0)
    powers = complex(w0) ** np.arange(f.deg_w + 1)
    return UnivariateSeries(f.coeffs @ powers)


def slice_z(f: TruncatedSeries, z0: complex) -> UnivariateSeries:
    """The one-variable function ``w -> f(z0, w)``."""
    _check_disc(z0)
    powers = complex(z0) ** np.arange(f.deg_z + 1)
    return UnivariateSeries(powers @ f.coeffs)


def tensor_product(f1: UnivariateSeries, f2: UnivariateSeries) -> TruncatedSeries:
    """``(z, w) -> f1(z) f2(w)``."""
    return TruncatedSeries(np.outer(f1.coeffs, f2.coeffs))


def embed_z(f: UnivariateSeries) -> TruncatedSeries:
    """Regard ``f(z)`` as a function on the bidisc that ignores ``w``."""
    return TruncatedSeries(f.coeffs[:, None])


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def lacunary_coefficients(alpha2: float, deg: int) -> np.ndarray:
    """Coefficients of ``g(w) = sum_j c_j w**(2**j)`` normalised so sum|c_j| = 1.

    ``c_j`` is proportional to ``2**(-j*alpha2/2)``. The normalisation by the
    full (infinite) absolute sum makes ``sup |g| <= 1`` on the disc, while
    ``sum |c_j|**2 (2**j + 1)**alpha2`` diverges like the number of terms.
    """
    q = 2.0 ** (-alpha2 / 2.0)
    total = 1.0 / (1.0 - q)
    out = np.zeros(deg + 1)
    j = 0
    while 2 ** j <= deg:
        out[2 ** j] = q ** j / total
        j += 1
    return out


def family_rows(family: NamedFamily, k0: int, k1: int, deg_w: int) -> np.ndarray:
    """Rows ``k0 <= k < k1`` of the family's coefficient grid.

    Lets callers stream very large grids block by block.
    """
    fid = family.id
    k = np.arange(k0, k1, dtype=float)[:, None] + 1.0  # k+1
    l = np.arange(deg_w + 1, dtype=float)[None, :] + 1.0  # l+1
    if fid is FamilyId.PROPER_CONTAINMENT:
        a1, a2 = family.alpha()
        rows = np.exp(0.5 * (-a1 - 1.0) * np.log(k) + 0.5 * (-a2 - 1.0) * np.log(l))
    elif fid is FamilyId.UNIVARIATE_REMARK:
        a1, _ = family.alpha()
        rows = np.zeros((k1 - k0, deg_w + 1))
        rows[:, 0] = np.exp(0.5 * (-a1 - 1.0) * np.log(k[:, 0]))
    elif fid is FamilyId.NON_FACTORING:
        a1, a2 = family.alpha()
        lognum = (1.0 - a1) * np.log(k) + (1.0 - a2) * np.log(l)
        rows = np.exp(0.5 * (lognum - np.log(k ** 3 + l ** 3)))
    elif fid is FamilyId.ALL_ONES:
        rows = np.ones((k1 - k0, deg_w + 1))
    elif fid is FamilyId.RATIONAL:
        # 1/(z+w-2) = -sum_{i,j} binom(i+j, i) z^i w^j / 2^(i+j+1)
        i = k - 1.0
        j = l - 1.0
        logc = gammaln(i + j + 1.0) - gammaln(i + 1.0) - gammaln(j + 1.0) - (i + j + 1.0) * math.log(2.0)
        rows = -np.exp(logc)
    elif fid is FamilyId.LACUNARY_BOUNDED:
        a1, a2 = family.alpha()
        g = lacunary_coefficients(a2, deg_w)
        rows = np.exp(-0.5 * (a1 + 2.0) * np.log(k)) * g[None, :]
    elif fid is FamilyId.TENSOR:
        f1 = _as_univariate(family.params["f1"])
        f2 = _as_univariate(family.params["f2"])
        b1 = np.zeros(k1 - k0, dtype=np.complex128)
        lo, hi = k0, min(k1, f1.deg + 1)
        if hi > lo:
            b1[: hi - lo] = f1.coeffs[lo:hi]
        b2 = np.zeros(deg_w + 1, dtype=np.complex128)
        n = min(deg_w, f2.deg) + 1
        b2[:n] = f2.coeffs[:n]
        rows = np.outer(b1, b2)
    else:  # pragma: no cover - enum is exhaustive
        raise ConfigurationError(f"unknown family {fid}")
    return np.asarray(rows, dtype=np.complex128)


def _as_univariate(obj) -> UnivariateSeries:
    if isinstance(obj, UnivariateSeries):
        return obj
    return UnivariateSeries(np.atleast_1d(np.asarray(obj, dtype=np.complex128)))


def generate(family: NamedFamily, deg_z: int, deg_w: int) -> TruncatedSeries:
    """Truncation of a named family to the box ``[0, deg_z] x [0, deg_w]``."""
    if deg_z < 0 or deg_w < 0:
        raise ConfigurationError("degrees must be nonnegative")
    return TruncatedSeries(family_rows(family, 0, deg_z + 1, deg_w))


def univariate_family(family: NamedFamily, deg: int) -> UnivariateSeries:
    """The z-only series of ``univariate_remark`` as a :class:`UnivariateSeries`."""
    return UnivariateSeries(family_rows(family, 0, deg + 1, 0)[:, 0])


# ---------------------------------------------------------------------------
# CSV coefficient files:  k,l,re,im  (missing rows are zero)
# ---------------------------------------------------------------------------

CSV_HEADER = ("k", "l", "re", "im")


def to_csv(f: TruncatedSeries, path=None, *, skip_zeros: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for k in range(f.deg_z + 1):
        for l in range(f.deg_w + 1):
            c = f.coeffs[k, l]
            if skip_zeros and c == 0:
                continue
            writer.writerow((k, l, repr(float(c.real)), repr(float(c.imag))))
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv(source) -> TruncatedSeries:
    """Read a coefficient grid from a path or an open text stream."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read {source}: {exc.strerror}") from None
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ConfigurationError("empty coefficient file") from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise ConfigurationError(f"bad header {header!r}; expected k,l,re,im")
    entries = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ConfigurationError(f"line {lineno}: expected 4 fields, got {len(row)}")
        try:
            k, l = int(row[0]), int(row[1])
            re, im = float(row[2]), float(row[3])
        except ValueError:
            raise ConfigurationError(f"line {lineno}: malformed number") from None
        if k < 0 or l < 0:
            raise ConfigurationError(f"line {lineno}: negative index")
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ConfigurationError(f"line {lineno}: non-finite coefficient")
        entries.append((k, l, complex(re, im)))
    if not entries:
        return TruncatedSeries.constant(0.0)
    K = max(e[0] for e in entries)
    L = max(e[1] for e in entries)
    a = np.zeros((K + 1, L + 1), dtype=np.complex128)
    for k, l, c in entries:
        a[k, l] = c
    return TruncatedSeries(a)
