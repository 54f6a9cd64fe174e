import os
import subprocess
import sys

import numpy as np
import pytest

from polydirich import _kernels
from polydirich._accel import HAVE_NUMBA, backend

from conftest import disc_coeffs

LOOPS = {
    "cauchy2d": _kernels._cauchy2d_loop,
    "evaluate2d": _kernels._evaluate2d_loop,
    "weighted_sq_sum": _kernels._weighted_sq_sum_loop,
    "weighted_inner": _kernels._weighted_inner_loop,
    "outer_sum": _kernels._outer_sum_loop,
    "box_accumulate": _kernels._box_accumulate_loop,
    "conv_weight_1d": _kernels._conv_weight_1d_loop,
}


@pytest.fixture(params=["active", "loop"])
def impl(request):
    if request.param == "active":
        return {name: getattr(_kernels, name) for name in LOOPS}
    return LOOPS


def test_backend_name():
    assert backend() == ("numba" if HAVE_NUMBA else "numpy")


def test_cauchy(impl, rng):
    a, b = disc_coeffs(rng, (7, 5)), disc_coeffs(rng, (4, 9))
    np.testing.assert_allclose(impl["cauchy2d"](a, b), _kernels.NUMPY_KERNELS["cauchy2d"](a, b), atol=1e-14)


@pytest.mark.parametrize("fn", [_kernels._cauchy2d_loop, _kernels._cauchy2d_numpy, _kernels.cauchy2d])
def test_cauchy_commutes_bitwise(fn, rng):
    for _ in range(5):
        a = disc_coeffs(rng, tuple(rng.integers(1, 9, 2)), scale=False)
        b = disc_coeffs(rng, tuple(rng.integers(1, 9, 2)), scale=False)
        np.testing.assert_array_equal(fn(a, b), fn(b, a))


def test_evaluate(impl, rng):
    a = disc_coeffs(rng, (12, 8))
    z, w = 0.3 - 0.5j, 0.7j
    assert abs(impl["evaluate2d"](a, z, w) - _kernels.NUMPY_KERNELS["evaluate2d"](a, z, w)) < 1e-14


def test_weighted_sums(impl, rng):
    a, b = disc_coeffs(rng, (20, 11)), disc_coeffs(rng, (20, 11))
    np_k = _kernels.NUMPY_KERNELS
    assert impl["weighted_sq_sum"](a, 0.7, -1.2) == pytest.approx(np_k["weighted_sq_sum"](a, 0.7, -1.2), rel=1e-14)
    assert impl["weighted_inner"](a, b, 0.7, -1.2) == pytest.approx(np_k["weighted_inner"](a, b, 0.7, -1.2),
                                                                   rel=1e-13)
    u, v = rng.uniform(size=30), rng.uniform(size=17)
    assert impl["outer_sum"](u, v) == pytest.approx(np_k["outer_sum"](u, v), rel=1e-14)
    assert np_k["outer_sum"](u, v) == pytest.approx(u.sum() * v.sum(), rel=1e-13)


def test_box_accumulate(impl, rng):
    block = rng.uniform(size=(8, 40))
    ns = np.array([4, 16, 32, 39], dtype=np.int64)
    out_a, out_b = np.zeros(4), np.zeros(4)
    impl["box_accumulate"](block, 10, ns, out_a)
    _kernels.NUMPY_KERNELS["box_accumulate"](block, 10, ns, out_b)
    np.testing.assert_allclose(out_a, out_b, rtol=1e-14)
    # rows k0..k0+7 = 10..17; a box of side N keeps rows and columns <= N
    expect = [0.0, block[:7, :17].sum(), block[:, :33].sum(), block.sum()]
    np.testing.assert_allclose(out_b, expect, rtol=1e-13)


def test_conv_weight(impl):
    np.testing.assert_allclose(impl["conv_weight_1d"](50, 2.0, 1.5),
                               _kernels.NUMPY_KERNELS["conv_weight_1d"](50, 2.0, 1.5), rtol=1e-13)


def _run(code, disable):
    env = dict(os.environ)
    env.pop("POLYDIRICH_DISABLE_NUMBA", None)
    if disable:
        env["POLYDIRICH_DISABLE_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    return res.stdout.strip()


def test_env_flag_switches_backend():
    assert _run("import polydirich; print(polydirich.backend())", True) == "numpy"
    code = ("import polydirich as p; r = p.run_check('product_membership'); "
            "print(r.verdict.value, repr(r.metrics['factorization_residual'] < 1e-12))")
    assert _run(code, True) == _run(code, False) == "pass True"


def test_backends_agree_on_check_metrics():
    code = ("import polydirich as p; r = p.run_check('non_factoring', {'max_deg': 2048}); "
            "print(repr(r.metrics['diagonal_minorant.fit_constant']))")
    a, b = float(_run(code, True)), float(_run(code, False))
    assert a == pytest.approx(b, rel=1e-12)
