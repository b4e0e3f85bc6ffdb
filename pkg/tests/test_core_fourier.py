import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rieszproj.core_fourier import (
    GridFunction,
    NormMethod,
    NormResult,
    TrigPoly,
    binomial_power,
    evaluate_grid,
    even_p_norm_exact,
    grid_coefficients,
    lp_norm,
    lp_norm_grid,
    parseval_norm,
    random_sparse_poly,
    riesz_project,
    sup_norm_estimate,
)

Z = TrigPoly.monomial((1,))
ONE = TrigPoly.constant(1.0)


def direct_values(poly, sizes):
    """Brute-force synthesis, independent of the FFT path."""
    out = np.zeros(sizes, dtype=complex)
    for k in np.ndindex(*sizes):
        out[k] = sum(c * cmath.exp(2j * math.pi * sum(a * kj / n for a, kj, n in zip(alpha, k, sizes)))
                     for alpha, c in poly)
    return out


sparse_polys = st.builds(
    lambda seed, dims, terms: random_sparse_poly(np.random.default_rng(seed), dims, terms, 3),
    st.integers(0, 2**32 - 1), st.integers(1, 2), st.integers(1, 6),
)


class TestTrigPoly:
    def test_zero_coefficients_dropped_and_equality(self):
        assert TrigPoly(1, {(0,): 1, (1,): 0}) == ONE
        assert TrigPoly(2, {}) == TrigPoly.zero(2)
        assert TrigPoly(1, {(0,): 1}) != TrigPoly(2, {(0, 0): 1})

    def test_rejects_wrong_arity(self):
        with pytest.raises(ValueError):
            TrigPoly(2, {(1,): 1.0})

    def test_power_matches_binomials(self):
        assert binomial_power(3) == (TrigPoly(2, {(1, 0): 1, (0, 1): 1})) ** 3

    def test_conj_is_pointwise_conjugate(self):
        f = TrigPoly(1, {(2,): 1 + 2j, (-1,): 0.5})
        z = cmath.exp(0.7j)
        assert f.conj()(z) == pytest.approx(f(z).conjugate())

    def test_hashable(self):
        assert len({binomial_power(3, 10), binomial_power(3, 10)}) == 1


class TestEvaluateGrid:
    def test_constant(self):
        assert np.allclose(evaluate_grid(ONE, 8).values, 1)

    def test_single_character(self):
        assert np.allclose(evaluate_grid(Z, 8).values, np.exp(2j * np.pi * np.arange(8) / 8))

    def test_projected_witness_pointwise(self):
        eps = 0.1
        f = TrigPoly(1, {(0,): 1 - eps**2, (1,): -eps})
        k = np.arange(16)
        assert np.allclose(evaluate_grid(f, 16).values, 0.99 - 0.1 * np.exp(2j * np.pi * k / 16), atol=1e-14)

    def test_matches_direct_summation(self):
        f = random_sparse_poly(np.random.default_rng(3), 2, 5, 3)
        assert np.allclose(evaluate_grid(f, (9, 8)).values, direct_values(f, (9, 8)), atol=1e-12)

    def test_rejects_aliasing(self):
        with pytest.raises(ValueError, match="aliasing"):
            evaluate_grid(TrigPoly(1, {(-2,): 1, (2,): 1}), 4)

    @given(sparse_polys)
    def test_round_trip_recovers_coefficients(self, f):
        sizes = tuple(bw + 3 for bw in f.bandwidth())
        back = grid_coefficients(evaluate_grid(f, sizes), f.index_range())
        for alpha, c in back:
            assert abs(c - f[alpha]) < 1e-12 * (1 + abs(f[alpha]))


class TestRieszProject:
    def test_drops_negative_indices(self):
        assert riesz_project(Z.conj() + 1 + Z) == ONE + Z

    def test_two_variables(self):
        f = TrigPoly(2, {(1, -1): 1, (1, 1): 1})
        assert riesz_project(f) == TrigPoly(2, {(1, 1): 1})

    def test_one_variable_witness_series(self):
        eps = 0.1
        f = TrigPoly(1, {(0,): 1, (1,): -eps}) * TrigPoly(1, {(-k,): eps**k for k in range(6)})
        out = riesz_project(f)
        assert out[(0,)] == pytest.approx(1 - eps**2, abs=1e-15)
        assert out[(1,)] == pytest.approx(-eps)
        assert len(out) == 2

    @given(sparse_polys)
    def test_idempotent_and_contractive(self, f):
        pf = riesz_project(f)
        assert riesz_project(pf) == pf
        assert parseval_norm(pf).value <= parseval_norm(f).value + 1e-15
        if f.is_analytic():
            assert parseval_norm(pf).value == parseval_norm(f).value
        elif len(f):
            assert parseval_norm(pf).value < parseval_norm(f).value


class TestNorms:
    def test_parseval_examples(self):
        assert parseval_norm(ONE + Z).value == pytest.approx(math.sqrt(2))
        assert parseval_norm(binomial_power(3, 10)).value == pytest.approx(math.sqrt(math.comb(6, 3)) / 10)
        assert parseval_norm(TrigPoly.zero()).value == 0
        assert parseval_norm(ONE).method is NormMethod.PARSEVAL_EXACT

    def test_even_p_examples(self):
        assert even_p_norm_exact(binomial_power(3), 4).value ** 4 == pytest.approx(math.comb(12, 6))
        for p in (2, 4, 6, 10):
            assert even_p_norm_exact(ONE, p).value == 1
        g = binomial_power(3, 10)
        assert even_p_norm_exact(g, 4).value ** 4 == pytest.approx(0.0924, rel=1e-14)
        assert 2 * parseval_norm(g).value ** 4 == pytest.approx(0.08)

    @pytest.mark.parametrize("p", [3, 2.5, 1, 0])
    def test_even_p_rejects(self, p):
        with pytest.raises(ValueError):
            even_p_norm_exact(ONE, p)

    @pytest.mark.parametrize("p", [1, 1.5, 3.7, 40])
    def test_grid_trivial_cases(self, p):
        assert lp_norm_grid(evaluate_grid(ONE, 8), p).value == pytest.approx(1)
        char = TrigPoly.monomial((2, -1))
        assert lp_norm_grid(evaluate_grid(char, (8, 8)), p).value == pytest.approx(1)

    def test_grid_parseval_exact(self):
        assert lp_norm_grid(evaluate_grid(ONE + Z, 8), 2).value == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_grid_error_estimate_nonnegative(self):
        res = lp_norm_grid(evaluate_grid(ONE + Z, 16), 3.3)
        assert res.method is NormMethod.GRID_QUADRATURE and res.err >= 0

    @given(sparse_polys)
    @settings(max_examples=60)
    def test_parseval_and_even_p_consistency(self, f):
        sizes2 = tuple(bw + 1 for bw in f.bandwidth())
        ref = parseval_norm(f).value
        assert lp_norm_grid(evaluate_grid(f, sizes2), 2).value == pytest.approx(ref, rel=1e-12, abs=1e-300)
        sizes4 = tuple(2 * bw + 1 for bw in f.bandwidth())
        exact4 = even_p_norm_exact(f, 4).value
        assert lp_norm_grid(evaluate_grid(f, sizes4), 4).value == pytest.approx(exact4, rel=1e-12, abs=1e-300)

    @given(sparse_polys, st.lists(st.floats(1, 30), min_size=2, max_size=6))
    @settings(max_examples=40)
    def test_monotone_in_p(self, f, ps):
        gf = evaluate_grid(f, tuple(bw + 2 for bw in f.bandwidth()))
        values = [lp_norm_grid(gf, p).value for p in sorted(ps)]
        assert all(b >= a * (1 - 1e-13) for a, b in zip(values, values[1:]))

    def test_adaptive_lp_norm_converges(self):
        f = ONE * 0.99 - Z * 0.1
        res = lp_norm(f, 3.5)
        # closed form: mean |a - e z|^p via the binomial series of |1 - r z|^p
        a, e, p = 0.99, 0.1, 3.5
        r = e / a
        coeffs = [math.gamma(p / 2 + 1) / (math.gamma(k + 1) * math.gamma(p / 2 - k + 1)) for k in range(40)]
        series = sum(c**2 * r ** (2 * k) for k, c in enumerate(coeffs))
        assert res.value == pytest.approx(a * series ** (1 / p), rel=1e-12)
        assert res.err <= 1e-10 * res.value

    def test_lp_norm_rejects_small_p(self):
        with pytest.raises(ValueError):
            lp_norm(ONE, 0.5)


class TestSupNorm:
    def test_constant(self):
        assert sup_norm_estimate(TrigPoly.constant(-3j)).value == pytest.approx(3)

    def test_binomial_power(self):
        res = sup_norm_estimate(binomial_power(10, 1025))
        assert res.value == pytest.approx(1024 / 1025, rel=1e-14)
        assert res.value + res.err >= 1024 / 1025

    def test_one_variable_witness_projection(self):
        eps = 0.1
        f = TrigPoly(1, {(0,): 1 - eps**2, (1,): -eps})
        assert sup_norm_estimate(f, 2).value == pytest.approx(1.09)

    def test_rejects_low_oversample(self):
        with pytest.raises(ValueError):
            sup_norm_estimate(ONE, 1)


class TestNormResult:
    def test_exact_only_for_exact_methods(self):
        with pytest.raises(ValueError):
            NormResult(1.0, NormMethod.GRID_QUADRATURE, "exact")
        with pytest.raises(ValueError):
            NormResult(-1.0, NormMethod.PARSEVAL_EXACT, "exact")
        assert NormResult(1.0, "even-p-exact", "exact").is_exact

    def test_grid_function_validates(self):
        with pytest.raises(ValueError):
            GridFunction(1, (4,), np.zeros(5))
