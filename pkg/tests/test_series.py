import io

import numpy as np
import pytest

from polydirich.errors import ConfigurationError, DomainError
from polydirich.series import (FamilyId, NamedFamily, TruncatedSeries, UnivariateSeries, cauchy_product,
                               cauchy_product1d, embed_z, evaluate, evaluate1d, evaluate_grid, family_rows,
                               generate, lacunary_coefficients, read_csv, slice_w, slice_z, tensor_product,
                               to_csv, univariate_family)
from polydirich.space import norm1d_sq, norm_sq

from conftest import rand_series


def ones(k, l):
    return generate(NamedFamily(FamilyId.ALL_ONES), k, l)


class TestEvaluate:
    def test_constant(self):
        assert evaluate(TruncatedSeries.constant(1.0), 0.3 + 0.1j, -0.7) == 1.0

    def test_monomial(self):
        f = TruncatedSeries.monomial(2, 1)
        assert evaluate(f, 0.5, 0.5) == pytest.approx(0.125, abs=1e-15)

    def test_all_ones_geometric(self):
        assert abs(evaluate(ones(50, 50), 0.5, 0.5) - 4.0) < 1e-12

    def test_outside_disc_rejected(self):
        with pytest.raises(DomainError):
            evaluate(ones(2, 2), 1.0, 0.0)
        with pytest.raises(DomainError):
            evaluate1d(UnivariateSeries(np.ones(3)), 1.5j)

    def test_grid_matches_pointwise(self, rng):
        f = rand_series(rng, 6, 5)
        zs = np.array([0.1, -0.4 + 0.2j, 0.7j])
        ws = np.array([0.3, 0.5 - 0.5j])
        g = evaluate_grid(f, zs, ws)
        for i, z in enumerate(zs):
            for j, w in enumerate(ws):
                assert abs(g[i, j] - evaluate(f, z, w)) < 1e-13

    def test_univariate(self):
        f = UnivariateSeries(np.array([1.0, 2.0, 3.0]))
        assert evaluate1d(f, 0.5) == pytest.approx(1 + 1 + 0.75)


class TestCauchyProduct:
    def test_binomials(self):
        f = TruncatedSeries(np.array([[1.0], [1.0]]))   # 1 + z
        g = TruncatedSeries(np.array([[1.0, 1.0]]))     # 1 + w
        np.testing.assert_array_equal(cauchy_product(f, g).coeffs, np.ones((2, 2)))

    def test_monomials(self):
        p = cauchy_product(TruncatedSeries.monomial(2, 3), TruncatedSeries.monomial(1, 4))
        assert p.deg == (3, 7)
        assert p.coeffs[3, 7] == 1.0 and np.count_nonzero(p.coeffs) == 1

    def test_evaluation_oracle(self, rng):
        f, g = rand_series(rng, 5, 7), rand_series(rng, 4, 3)
        p = cauchy_product(f, g)
        z, w = 0.3, 0.2
        assert abs(evaluate(p, z, w) - evaluate(f, z, w) * evaluate(g, z, w)) < 1e-12

    def test_commutative_bit_exact(self, rng):
        for _ in range(10):
            f = rand_series(rng, *rng.integers(0, 12, 2), scale=False)
            g = rand_series(rng, *rng.integers(0, 12, 2), scale=False)
            np.testing.assert_array_equal(cauchy_product(f, g).coeffs, cauchy_product(g, f).coeffs)

    def test_associative_integer_coefficients_exact(self, rng):
        mk = lambda: TruncatedSeries(rng.integers(-5, 6, size=tuple(rng.integers(1, 6, 2))).astype(float))
        for _ in range(10):
            f, g, h = mk(), mk(), mk()
            np.testing.assert_array_equal(cauchy_product(cauchy_product(f, g), h).coeffs,
                                          cauchy_product(f, cauchy_product(g, h)).coeffs)

    def test_associative_floats_close(self, rng):
        f, g, h = rand_series(rng, 6, 6), rand_series(rng, 5, 4), rand_series(rng, 3, 7)
        np.testing.assert_allclose(cauchy_product(cauchy_product(f, g), h).coeffs,
                                   cauchy_product(f, cauchy_product(g, h)).coeffs, atol=1e-14)

    def test_univariate_matches_convolve(self, rng):
        a, b = rng.normal(size=7), rng.normal(size=4)
        p = cauchy_product1d(UnivariateSeries(a), UnivariateSeries(b))
        np.testing.assert_allclose(p.coeffs.real, np.convolve(a, b), atol=1e-14)


class TestSlices:
    def test_zw_slice(self):
        s = slice_w(TruncatedSeries.monomial(1, 1), 0.5)
        np.testing.assert_allclose(s.coeffs, [0.0, 0.5])

    def test_all_ones_slice(self):
        L = 9
        s = slice_w(ones(7, L), 0.5)
        np.testing.assert_allclose(s.coeffs, 2 * (1 - 0.5 ** (L + 1)), rtol=1e-15)

    def test_slice_z_is_transpose(self, rng):
        f = rand_series(rng, 5, 8)
        sz = slice_z(f, 0.3 - 0.2j)
        st = slice_w(TruncatedSeries(f.coeffs.T), 0.3 - 0.2j)
        np.testing.assert_allclose(sz.coeffs, st.coeffs, atol=1e-15)

    def test_slice_evaluates_like_f(self, rng):
        f = rand_series(rng, 6, 6)
        w0 = 0.4 + 0.3j
        s = slice_w(f, w0)
        for z in (0.0, 0.2, -0.5j):
            assert abs(evaluate1d(s, z) - evaluate(f, z, w0)) < 1e-13

    def test_rational_slice(self):
        f = generate(NamedFamily(FamilyId.RATIONAL), 200, 200)
        for w0 in (0.5, -0.3, 0.4j):
            b = slice_w(f, w0).coeffs[:40]
            exact = -(2.0 - w0) ** -(np.arange(40) + 1.0)
            np.testing.assert_allclose(b, exact, atol=1e-12)

    def test_slice_outside_disc(self):
        with pytest.raises(DomainError):
            slice_w(ones(2, 2), 1.0)


class TestTensor:
    def test_constants(self):
        t = tensor_product(UnivariateSeries([1.0]), UnivariateSeries([1.0]))
        np.testing.assert_array_equal(t.coeffs, [[1.0]])

    def test_z_times_one_plus_w(self):
        t = tensor_product(UnivariateSeries([0.0, 1.0]), UnivariateSeries([1.0, 1.0]))
        np.testing.assert_array_equal(t.coeffs, [[0, 0], [1, 1]])

    @pytest.mark.parametrize("alpha", [(0.0, 0.0), (1.0, -1.0), (-2.5, 3.0)])
    def test_norm_factorises(self, rng, alpha):
        f1 = UnivariateSeries(rng.normal(size=20) + 1j * rng.normal(size=20))
        f2 = UnivariateSeries(rng.normal(size=13))
        lhs = norm_sq(tensor_product(f1, f2), alpha)
        rhs = norm1d_sq(f1, alpha[0]) * norm1d_sq(f2, alpha[1])
        assert lhs == pytest.approx(rhs, rel=1e-13)

    def test_embed_z(self):
        e = embed_z(UnivariateSeries([1.0, 2.0]))
        assert e.deg == (1, 0)


class TestFamilies:
    def test_non_factoring_origin(self):
        f = generate(NamedFamily(FamilyId.NON_FACTORING, {"alpha": (0.0, 0.0)}), 3, 3)
        assert f.coeffs[0, 0] == pytest.approx(np.sqrt(0.5), rel=1e-15)

    def test_non_factoring_formula(self):
        a1, a2 = 0.5, -1.0
        f = generate(NamedFamily(FamilyId.NON_FACTORING, {"alpha": (a1, a2)}), 5, 7)
        k, l = 3, 6
        expect = np.sqrt((k + 1) ** (1 - a1) * (l + 1) ** (1 - a2) / ((k + 1) ** 3 + (l + 1) ** 3))
        assert f.coeffs[k, l] == pytest.approx(expect, rel=1e-14)

    def test_rational(self):
        f = generate(NamedFamily(FamilyId.RATIONAL), 60, 60)
        assert f.coeffs[0, 0] == -0.5
        assert abs(evaluate(f, 0.5, 0.0) + 2.0 / 3.0) < 1e-9
        # a_{l, k-l} = -binom(k, l) / 2^(k+1)
        assert f.coeffs[2, 3] == pytest.approx(-10 / 64)

    def test_proper_containment(self):
        f = generate(NamedFamily(FamilyId.PROPER_CONTAINMENT, {"alpha": (1.0, 1.0)}), 6, 6)
        k = np.arange(1, 8.0)
        np.testing.assert_allclose(f.coeffs.real, 1.0 / np.outer(k, k), rtol=1e-15)

    def test_univariate_remark(self):
        fam = NamedFamily(FamilyId.UNIVARIATE_REMARK, {"alpha": (1.0, 2.0)})
        g = generate(fam, 5, 3)
        assert np.all(g.coeffs[:, 1:] == 0)
        np.testing.assert_allclose(univariate_family(fam, 5).coeffs.real, 1.0 / np.arange(1, 7.0))

    def test_lacunary_bounded(self):
        g = lacunary_coefficients(2.0, 1 << 12)
        assert np.abs(g).sum() <= 1.0 + 1e-15
        nz = np.flatnonzero(g)
        assert all((n & (n - 1)) == 0 for n in nz)
        with pytest.raises(ConfigurationError):
            NamedFamily(FamilyId.LACUNARY_BOUNDED, {"alpha": (0.0, 1.0)})

    def test_rows_match_generate(self):
        fam = NamedFamily(FamilyId.NON_FACTORING, {"alpha": (0.0, 0.0)})
        full = generate(fam, 9, 9).coeffs
        np.testing.assert_array_equal(family_rows(fam, 3, 7, 9), full[3:7])

    def test_tensor_family(self):
        fam = NamedFamily(FamilyId.TENSOR, {"f1": [0.0, 1.0], "f2": [1.0, 1.0]})
        np.testing.assert_array_equal(generate(fam, 1, 1).coeffs, [[0, 0], [1, 1]])

    def test_bad_params(self):
        with pytest.raises(ConfigurationError):
            NamedFamily("nope")
        with pytest.raises(ConfigurationError):
            NamedFamily(FamilyId.NON_FACTORING, {})
        with pytest.raises(ConfigurationError):
            generate(NamedFamily(FamilyId.ALL_ONES), -1, 2)


class TestCsv:
    def test_roundtrip(self, rng, tmp_path):
        f = rand_series(rng, 4, 6)
        path = tmp_path / "f.csv"
        to_csv(f, path)
        g = read_csv(path)
        np.testing.assert_array_equal(f.coeffs, g.coeffs)

    def test_missing_rows_are_zero(self):
        g = read_csv(io.StringIO("k,l,re,im\n2,1,1.5,0\n"))
        assert g.deg == (2, 1) and g.coeffs[2, 1] == 1.5 and np.count_nonzero(g.coeffs) == 1

    @pytest.mark.parametrize("text", [
        "",
        "a,b,c,d\n0,0,1,0\n",
        "k,l,re,im\n0,0,1\n",
        "k,l,re,im\n0,x,1,0\n",
        "k,l,re,im\n-1,0,1,0\n",
        "k,l,re,im\n0,0,nan,0\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(ConfigurationError):
            read_csv(io.StringIO(text))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_csv(tmp_path / "absent.csv")


def test_series_immutable():
    f = TruncatedSeries(np.ones((2, 2)))
    with pytest.raises(ValueError):
        f.coeffs[0, 0] = 3.0
