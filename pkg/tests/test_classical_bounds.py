import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize

from rieszproj.classical_bounds import (
    INV_PI_E,
    BoundKind,
    BoundMethod,
    ExponentBound,
    ExponentQuery,
    complexification_factor,
    golden_section_min,
    hv_upper,
    pichorides,
    riesz_hilbert_sandwich,
    thorin_interp_exponent,
    torus_lower_chain,
    zygmund_log_bound,
    zygmund_raw,
    zygmund_upper,
)

exponents = st.floats(1.01, 200)


def test_hv_examples():
    assert hv_upper(2, 1) == pytest.approx(1)
    assert hv_upper(4, 1) == pytest.approx(math.sqrt(2))
    assert hv_upper(4, 2) == pytest.approx(2)


@pytest.mark.parametrize("p", [1, 0.5, math.inf])
def test_hv_and_pichorides_reject(p):
    with pytest.raises(ValueError):
        hv_upper(p)
    with pytest.raises(ValueError):
        pichorides(p)


@given(exponents, st.integers(1, 8))
def test_hv_multiplicative(p, n):
    assert hv_upper(p, n) == pytest.approx(hv_upper(p, 1) ** n, rel=1e-12)


def test_hv_asymptote():
    p = 1e6
    assert (hv_upper(p) / p) == pytest.approx(1 / math.pi, rel=1e-5)


def test_pichorides_examples():
    assert pichorides(2) == pytest.approx(1)
    assert pichorides(4) == pytest.approx(1 + math.sqrt(2))
    assert pichorides(4 / 3) == pytest.approx(1 + math.sqrt(2))


@given(exponents)
def test_pichorides_duality(p):
    assert pichorides(p) == pytest.approx(pichorides(p / (p - 1)), rel=1e-9)


class TestInterpolation:
    def test_examples(self):
        assert thorin_interp_exponent(4, 4) == pytest.approx(8 / 3)
        assert thorin_interp_exponent(3.08164, 3.08164) == pytest.approx(2.2810, abs=5e-4)
        assert thorin_interp_exponent(2 + 1e-12, 3.5) == pytest.approx(2, abs=1e-11)

    def test_c4_reduces_to_closed_form(self):
        for q in (2.5, 3, 7, 100):
            assert thorin_interp_exponent(q, 4) == pytest.approx(4 * q / (2 + q))

    def test_rejects(self):
        with pytest.raises(ValueError):
            thorin_interp_exponent(2, 4)
        with pytest.raises(ValueError):
            thorin_interp_exponent(3, 1.5)

    @given(st.floats(2.001, 100), st.floats(2.001, 100), st.floats(1e-3, 1))
    def test_monotone_and_range(self, q, c, dq):
        p = thorin_interp_exponent(q, c)
        assert 2 < p <= min(q, c) * (1 + 1e-12)
        assert thorin_interp_exponent(q + dq, c) > p
        assert thorin_interp_exponent(q, c + dq) > p


class TestChain:
    @pytest.mark.parametrize("n,expected", [(1, 4), (2, 8 / 3), (3, 16 / 7)])
    def test_examples(self, n, expected):
        bound = torus_lower_chain(n)
        assert bound.value == pytest.approx(expected, rel=1e-14)
        assert bound.kind is BoundKind.LOWER and bound.method is BoundMethod.INTERPOLATION
        assert bound.certificate["chain"][0] == 4.0

    def test_closed_form_and_decreasing(self):
        values = [torus_lower_chain(n).value for n in range(1, 31)]
        for n, v in enumerate(values, 1):
            assert abs(v - (2 + 2 / (2**n - 1))) <= 1e-12
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] > 2


class TestZygmund:
    def test_fixed_alpha_candidate(self):
        p, alpha = 2, math.pi / 4
        candidate = math.sqrt(2 * math.gamma(3) / (alpha**2 * math.cos(alpha)))
        assert math.exp(zygmund_log_bound(p, alpha)) == pytest.approx(candidate)
        assert candidate == pytest.approx(3.026, abs=5e-3)
        assert zygmund_upper(2) <= candidate

    @pytest.mark.parametrize("p", [2, 5, 33.3, 256])
    def test_golden_matches_brent(self, p):
        ref = optimize.minimize_scalar(lambda a: zygmund_log_bound(p, a), bounds=(0.01, math.pi / 2 - 1e-6),
                                       method="bounded", options={"xatol": 1e-12})
        assert math.log(zygmund_raw(p)) == pytest.approx(ref.fun, abs=1e-10)

    def test_large_p_asymptote(self):
        assert zygmund_upper(100) / 100 == pytest.approx(2 * INV_PI_E, rel=0.15)

    def test_monotone(self):
        ps = [2, 2.2, 2.5, 2.6, 3, 4, 8, 16, 64, 256]
        values = [zygmund_upper(p) for p in ps]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_envelope(self):
        # the raw bound dips just above 2; the envelope flattens that stretch
        assert zygmund_raw(2.5) < zygmund_raw(2)
        assert zygmund_upper(2) == zygmund_upper(2.3) <= zygmund_raw(2)
        for p in (3, 10, 100):
            assert zygmund_upper(p) == zygmund_raw(p)

    def test_golden_section_quadratic(self):
        x, fx = golden_section_min(lambda t: (t - 0.3) ** 2, 0, 1)
        assert x == pytest.approx(0.3, abs=1e-9) and fx < 1e-18


class TestComplexification:
    def test_p2(self):
        a2 = math.sqrt(1 / (2 * math.pi))
        assert complexification_factor(2) == pytest.approx(math.sqrt(1 / math.pi) / a2)
        assert complexification_factor(2) == pytest.approx(math.sqrt(2))

    def test_limit(self):
        assert abs(complexification_factor(400) - 1) < 0.01

    def test_at_least_one(self):
        assert all(complexification_factor(2 + 0.5 * k) >= 1 for k in range(400))

    def test_no_overflow(self):
        assert math.isfinite(complexification_factor(5000))


class TestSandwich:
    def test_examples(self):
        assert riesz_hilbert_sandwich(0) == (1, 1)
        assert riesz_hilbert_sandwich(4) == (1, 3)

    def test_large_p_upper(self):
        p = 1e5
        _, upper = riesz_hilbert_sandwich(pichorides(p))
        assert upper / p == pytest.approx(1 / math.pi, rel=1e-4)


class TestTypes:
    def test_exponent_bound_invariants(self):
        with pytest.raises(ValueError):
            ExponentBound("lower", 1.5, "closed-form")
        with pytest.raises(ValueError):
            ExponentBound("lower", 3.0, "interpolation", {})
        assert ExponentBound("upper", 3.0, "optimizer").to_dict()["method"] == "optimizer"

    def test_query(self):
        ExponentQuery(p=3, q=5, n=2, c=3.08)
        with pytest.raises(ValueError):
            ExponentQuery(p=3, q=2)
