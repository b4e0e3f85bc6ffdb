import numpy as np
import pytest

from rieszproj.finite_groups import FiniteFunction, FreqSet, GroupSpec, projection_matrix, z3_critical_exponent
from rieszproj.optimizer import (
    OptimizerConfig,
    crossing_bisection,
    default_threads,
    gradient_check,
    group_crossing_exponent,
    maximize_median_objective,
    maximize_projection_norm,
    objective,
)

Z3 = GroupSpec(3)
E01 = FreqSet(Z3, frozenset({0, 1}))
Z3SQ = GroupSpec(3, 2)
E01SQ = FreqSet.product(Z3SQ, (0, 1))


def random_point(spec, rng, boundary=False):
    z = rng.normal(size=spec.order) + 1j * rng.normal(size=spec.order)
    z /= np.abs(z)
    return z if boundary else z * np.sqrt(rng.random(spec.order))


class TestMaximize:
    @pytest.mark.parametrize("spec,E", [(Z3, E01), (Z3SQ, E01SQ), (GroupSpec(5), FreqSet(GroupSpec(5), frozenset({1, 3})))])
    def test_p2_is_one(self, spec, E):
        res = maximize_projection_norm(spec, E, 2.0, OptimizerConfig(restarts=32))
        assert res.best_value == pytest.approx(1, abs=1e-9)

    def test_z3_p4_exceeds_one(self):
        res = maximize_projection_norm(Z3, E01, 4.0)
        assert res.best_value > 1
        # degenerate triangle: (2/3)^4 (2^4 + 2) / 3
        assert res.best_value**4 == pytest.approx((2 / 3) ** 4 * 18 / 3, rel=1e-9)
        assert res.converged

    def test_z3sq_p294_exceeds_one(self):
        res = maximize_projection_norm(Z3SQ, E01SQ, 2.94, OptimizerConfig(restarts=512, seed=7))
        assert res.best_value > 1

    def test_best_is_max_and_feasible(self):
        res = maximize_projection_norm(Z3SQ, E01SQ, 3.0, OptimizerConfig(restarts=64))
        assert res.best_value == max(res.restart_values)
        assert res.best_restart == res.restart_values.index(res.best_value)
        assert res.best_point.sup() <= 1 + 1e-12
        assert len(res.restart_values) == 64

    def test_median_objective_matches_closed_forms(self):
        assert maximize_median_objective(2.5).best_value == pytest.approx(3 * 1.5**2.5, rel=1e-9)
        assert maximize_median_objective(3.5).best_value == pytest.approx(2**3.5 + 2, rel=1e-9)

    def test_rejects_small_p(self):
        with pytest.raises(ValueError):
            maximize_projection_norm(Z3, E01, 1.5)

    def test_config_validation(self):
        for bad in (dict(restarts=0), dict(tol=0), dict(backtrack=1.0)):
            with pytest.raises(ValueError):
                OptimizerConfig(**bad)


class TestDeterminism:
    @pytest.mark.parametrize("threads", [2, 4, 8])
    def test_thread_independent(self, threads):
        base = maximize_projection_norm(Z3SQ, E01SQ, 2.93, OptimizerConfig(restarts=96, seed=3, threads=1))
        other = maximize_projection_norm(Z3SQ, E01SQ, 2.93, OptimizerConfig(restarts=96, seed=3, threads=threads))
        assert base.restart_values == other.restart_values
        assert np.array_equal(base.best_point.values, other.best_point.values)
        assert base.iterations == other.iterations

    def test_seed_changes_starts(self):
        a = maximize_projection_norm(Z3SQ, E01SQ, 3.0, OptimizerConfig(restarts=8, seed=1))
        b = maximize_projection_norm(Z3SQ, E01SQ, 3.0, OptimizerConfig(restarts=8, seed=2))
        assert a.restart_values != b.restart_values

    def test_env_threads(self, monkeypatch):
        monkeypatch.setenv("RIESZPROJ_THREADS", "3")
        assert default_threads() == 3
        monkeypatch.delenv("RIESZPROJ_THREADS")
        assert default_threads() >= 1


class TestProperties:
    def test_monotone_recovery(self):
        cfg = OptimizerConfig(restarts=64)
        values = [maximize_projection_norm(Z3, E01, p, cfg).best_value for p in np.linspace(2, 4, 21)]
        assert all(b >= a - 1e-6 for a, b in zip(values, values[1:]))

    def test_scale_covariance(self):
        rng = np.random.default_rng(5)
        P = projection_matrix(Z3SQ, E01SQ)
        for p in (2.0, 2.7, 4.0):
            x = random_point(Z3SQ, rng)[None, :]
            c = 0.3 - 0.6j
            assert objective(P, 1 / 9, p, c * x)[0] == pytest.approx(abs(c) ** p * objective(P, 1 / 9, p, x)[0],
                                                                     rel=1e-12)


class TestGradientCheck:
    def test_quadratic(self):
        x = random_point(Z3, np.random.default_rng(0))
        assert gradient_check(Z3, E01, 2.0, x, h=1e-5) < 1e-8

    @pytest.mark.parametrize("p", [2.5, 3.1, 4.0])
    def test_interior_and_boundary(self, p):
        rng = np.random.default_rng(1)
        for boundary in (False, True):
            x = random_point(Z3, rng, boundary)
            assert gradient_check(Z3, E01, p, x) < 1e-5
            assert gradient_check(Z3SQ, E01SQ, p, FiniteFunction(Z3SQ, random_point(Z3SQ, rng, boundary))) < 1e-5

    def test_rejects_step(self):
        with pytest.raises(ValueError):
            gradient_check(Z3, E01, 3.0, np.zeros(3), h=1e-3)


class TestCrossing:
    def test_linear_stub(self):
        assert crossing_bisection(lambda p: p / 3, (2, 4), tol=1e-8) == pytest.approx(3, abs=1e-8)

    def test_returns_certified_side(self):
        p = crossing_bisection(lambda p: p / 3, (2, 4), tol=1e-3)
        assert p / 3 > 1 and p - 3 <= 1e-3

    @pytest.mark.parametrize("bracket", [(3.5, 4), (2, 2.5), (4, 2)])
    def test_invalid_bracket(self, bracket):
        with pytest.raises(ValueError):
            crossing_bisection(lambda p: p / 3, bracket)

    def test_z3_optimizer_crossing(self):
        bound = group_crossing_exponent(Z3, E01, (2.9, 3.3), OptimizerConfig(restarts=128))
        assert bound.value == pytest.approx(z3_critical_exponent(), abs=5e-3)
        assert bound.kind.value == "upper" and bound.certificate["norm"] > 1
