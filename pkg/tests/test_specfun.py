import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isotonic import specfun
from isotonic import verification as ver


def exact_pochhammer(g, n):
    out = Fraction(1)
    for j in range(n):
        out *= g + j
    return out


class TestPochhammer:
    def test_empty_product(self):
        assert specfun.pochhammer(0.5, 0) == 1

    @pytest.mark.parametrize("g, n", [(2, 3), (0.5, 2), (1.5, 4)])
    def test_matches_exact_product(self, g, n):
        assert specfun.pochhammer(g, n) == pytest.approx(float(exact_pochhammer(Fraction(g), n)), rel=1e-15)

    def test_values(self):
        assert specfun.pochhammer(2, 3) == 24
        assert specfun.pochhammer(0.5, 2) == 0.75

    @given(st.floats(0.1, 20), st.integers(0, 15))
    def test_gamma_ratio(self, g, n):
        assert specfun.pochhammer(g, n) == pytest.approx(math.gamma(g + n) / math.gamma(g), rel=1e-12)

    @given(st.floats(0.05, 10), st.integers(0, 20), st.integers(0, 20))
    def test_product_rule(self, g, n, m):
        lhs = specfun.pochhammer(g, n) * specfun.pochhammer(g + n, m)
        assert lhs == pytest.approx(specfun.pochhammer(g, n + m), rel=1e-12)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            specfun.pochhammer(1.0, -1)


class TestHyp1f1:
    def test_n0(self):
        assert specfun.hyp1f1_terminating(0, 1.5, 7.3) == 1

    def test_two_terms(self):
        assert specfun.hyp1f1_terminating(1, 0.5, 1) == pytest.approx(-1.0, rel=1e-15)

    def test_three_terms(self):
        expected = Fraction(1) - Fraction(4) / Fraction(3, 2) + Fraction(8) / (Fraction(3, 2) * Fraction(5, 2) * 2)
        assert expected == Fraction(-3, 5)
        assert specfun.hyp1f1_terminating(2, 1.5, 2) == pytest.approx(-0.6, rel=1e-14)

    def test_exact_arithmetic(self):
        assert specfun.hyp1f1_terminating(2, Fraction(3, 2), Fraction(2)) == Fraction(-3, 5)

    def test_vectorized(self):
        np.testing.assert_allclose(specfun.hyp1f1_terminating(1, 0.5, np.array([1.0, 2.0])), [-1.0, -3.0])

    @pytest.mark.parametrize("b", [0, -1, -2])
    def test_zero_denominator(self, b):
        with pytest.raises(ValueError):
            specfun.hyp1f1_terminating(3, b, 1.0)

    def test_negative_b_fine_beyond_sum(self):
        # (b)_k never vanishes for k <= n when b = -3 and n = 2... only b + j, j < n matters
        assert np.isfinite(specfun.hyp1f1_terminating(2, -3, 1.0))


class TestLaguerre:
    def test_degree_zero(self):
        assert specfun.laguerre(0, 0.5, 3.2) == 1

    def test_degree_one(self):
        assert specfun.laguerre(1, -0.5, 1.0) == pytest.approx(-0.5)

    def test_hermite_crosscheck(self):
        # L_1^{-1/2}(x^2) = -(1/4) H_2(x) at x = 1
        assert -0.25 * specfun.hermite(2, 1.0) == pytest.approx(-0.5)
        assert specfun.laguerre(1, -0.5, 1.0) == pytest.approx(-0.25 * specfun.hermite(2, 1.0))

    @pytest.mark.parametrize("n", [0, 1, 3, 10, 25, 50])
    @pytest.mark.parametrize("alpha", [-0.5, 0.5, 1.0, 2.5])
    def test_conversion_against_exact_series(self, n, alpha):
        zs = [Fraction(j, 3) for j in range(0, 151, 7)]
        b = Fraction(alpha) + 1
        exact = np.array([float(specfun.hyp1f1_terminating(n, b, z)) for z in zs])
        via = math.factorial(n) / specfun.pochhammer(alpha + 1, n) * specfun.laguerre(n, alpha, np.array([float(z) for z in zs]))
        np.testing.assert_allclose(via, exact, rtol=1e-12)

    def test_negative_degree_is_zero(self):
        assert specfun.laguerre(-1, 0.5, 2.0) == 0

    def test_array_shape(self):
        z = np.linspace(0, 1, 7)
        assert specfun.laguerre(4, 0.5, z).shape == (7,)

    def test_derivative_helper(self):
        z = np.linspace(0.1, 5, 11)
        np.testing.assert_allclose(specfun.laguerre_derivative(5, 0.5, z, 2), specfun.laguerre(3, 2.5, z))


class TestHermite:
    def test_h0(self):
        assert specfun.hermite(0, 5.1) == 1

    def test_h2(self):
        assert specfun.hermite(2, 1.0) == 2

    def test_h3(self):
        assert specfun.hermite(3, 1.0) == -4

    @pytest.mark.parametrize("m", [0, 1, 4, 9, 17])
    def test_against_numpy(self, m):
        z = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(specfun.hermite(m, z), np.polynomial.hermite.hermval(z, [0] * m + [1]), rtol=1e-12)


def test_gamma_half():
    assert specfun.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    with pytest.raises(ValueError):
        specfun.gamma(0.0)


@pytest.mark.parametrize("suite", ver.IDENTITY_SUITES, ids=lambda s: s.__name__)
def test_identity_suites(suite):
    res = suite()
    assert res.checked > 0
    assert res.passed, f"{res.name}: {res.max_error:.3e} > {res.tolerance:g}"
