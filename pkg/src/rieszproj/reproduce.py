"""
Registry of published numbers and the computations that reproduce them.

Each check returns a :class:`Check` record; ``run_checks`` evaluates a
selection in registry order.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

from . import classical_bounds as cb
from . import finite_groups as fg
from . import witnesses as wt
from .optimizer import OptimizerConfig, group_crossing_exponent, maximize_projection_norm


@dataclass(frozen=True)
class Check:
    id: str
    description: str
    published_value: float
    reproduced: float
    tolerance: float
    passed: bool
    detail: dict

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    threads: int | None = None
    tol: float = 1e-6
    opt_tol: float = 1e-4


def _check(id_, description, published, reproduced, tolerance, passed=None, **detail) -> Check:
    if passed is None:
        passed = abs(reproduced - published) <= tolerance
    return Check(id_, description, float(published), float(reproduced), float(tolerance), bool(passed), detail)


def t1_critical(s: Settings) -> Check:
    above = wt.t1_scan(4.5, [0.1 * 2.0**-k for k in range(14)])
    grid = [0.49 * (k + 1) / 50 for k in range(50)]
    worst = max(abs(wt.t1_projection_norm(e, 4).value ** 4 - (1 - e**4 + e**8)) for e in grid)
    below = all(wt.t1_projection_norm(e, 4).value < 1 for e in grid)
    ok = above.exceeds_one and below and worst <= 1e-10
    return _check("t1-critical", "critical exponent of P_1^+", 4.0, cb.torus_lower_chain(1).value, 0.0,
                  passed=ok, best_eps_at_4_5=above.params["eps"], closed_form_dev=worst)


def t1_expansion(s: Settings) -> Check:
    eps, p = 1e-3, 5.0
    coef = (wt.t1_projection_norm(eps, p).value ** p - 1) / eps**2
    target = p * p / 4 - p
    return _check("t1-expansion", "eps^2 coefficient p^2/4 - p at p=5", target, coef, 0.01 * abs(target))


def t3_bidisk_l4(s: Settings) -> Check:
    w = wt.BidiskWitness.binomial(3, 10)
    exact = wt.bidisk_norm4(w)
    grid = wt.lp_norm(wt.bidisk_projection(w), 4.0).value ** 4
    return _check("t3-bidisk-l4", "||P_2^+ h||_4^4 for g=(z1+z2)^3/10", 1.014, exact, 1e-10,
                  passed=abs(exact - 1.014) <= 1e-10 and abs(grid - exact) <= 1e-10 * exact,
                  grid_quadrature=grid)


def t3_bidisk(s: Settings) -> Check:
    w = wt.BidiskWitness.binomial(10, 1025)
    bound = wt.bidisk_crossing_exponent(w, tol=s.tol)
    return _check("t3-bidisk", "p_2 upper bound from g=(z1+z2)^10/1025", 3.67632, bound.value, 1e-3)


def t3_chain(s: Settings) -> Check:
    worst = max(abs(cb.torus_lower_chain(n).value - (2 + 2 / (2**n - 1))) for n in range(1, 11))
    return _check("t3-chain", "interpolation lower bound p_2 >= 8/3", 8 / 3,
                  cb.torus_lower_chain(2).value, 1e-12, passed=worst <= 1e-12, worst_n_le_10=worst)


def z3_root(s: Settings) -> Check:
    return _check("z3-root", "root of 2^p + 2 = 3 (3/2)^p", 3.08164, fg.z3_critical_exponent(1e-12), 1e-5)


def z3_optimizer(s: Settings) -> Check:
    spec = fg.GroupSpec(3, 1)
    E = fg.FreqSet(spec, frozenset({0, 1}))
    cfg = OptimizerConfig(restarts=128, seed=s.seed, threads=s.threads)
    at_3 = maximize_projection_norm(spec, E, 3.0, cfg).best_value
    at_32 = maximize_projection_norm(spec, E, 3.2, cfg).best_value
    bound = group_crossing_exponent(spec, E, (2.9, 3.3), cfg, tol=s.opt_tol)
    ok = abs(bound.value - 3.08164) <= 5e-3 and at_3 <= 1 + 1e-6 and at_32 > 1
    return _check("z3-optimizer", "optimizer-backed Z_3 crossing", 3.08164, bound.value, 5e-3,
                  passed=ok, norm_at_3_0=at_3, norm_at_3_2=at_32)


def z3sq_upper(s: Settings) -> Check:
    spec = fg.GroupSpec(3, 2)
    E = fg.FreqSet.product(spec, [0, 1])
    cfg = OptimizerConfig(restarts=512, seed=s.seed, threads=s.threads)
    at_294 = maximize_projection_norm(spec, E, 2.94, cfg).best_value
    at_285 = maximize_projection_norm(spec, E, 2.85, cfg).best_value
    bound = group_crossing_exponent(spec, E, (2.85, 2.96), cfg, tol=s.opt_tol)
    ok = 2.90 <= bound.value <= 2.96 and at_294 > 1 and at_285 <= 1 + 1e-6
    return _check("z3sq-upper", "Z_3^2 critical exponent upper estimate", 2.93039, bound.value, 0.03,
                  passed=ok, norm_at_2_94=at_294, norm_at_2_85=at_285)


def z3sq_interp(s: Settings) -> Check:
    c = fg.z3_critical_exponent(1e-12)
    return _check("z3sq-interp-lower", "Riesz-Thorin lower bound for Z_3^2", 2.28107,
                  cb.thorin_interp_exponent(c, c), 5e-4)


def t2_hilbert(s: Settings) -> Check:
    target = 2 * cb.INV_PI_E
    ratio = wt.hilbert_witness_lower(256) / 256
    return _check("t2-hilbert-asymptote", "log witness lower bound / p at p=256", target, ratio, 0.10 * target)


def t2_zygmund(s: Settings) -> Check:
    target = 2 * cb.INV_PI_E
    ratio = cb.zygmund_upper(256) / 256
    return _check("t2-zygmund-asymptote", "Zygmund upper bound / p at p=256", target, ratio, 0.15 * target,
                  passed=target <= ratio <= 1.15 * target)


CHECKS: dict[str, Callable[[Settings], Check]] = {
    "t1-critical": t1_critical,
    "t1-expansion": t1_expansion,
    "t3-bidisk-l4": t3_bidisk_l4,
    "t3-bidisk": t3_bidisk,
    "t3-chain": t3_chain,
    "z3-root": z3_root,
    "z3-optimizer": z3_optimizer,
    "z3sq-upper": z3sq_upper,
    "z3sq-interp-lower": z3sq_interp,
    "t2-hilbert-asymptote": t2_hilbert,
    "t2-zygmund-asymptote": t2_zygmund,
}


def run_checks(only: list[str] | None = None, settings: Settings | None = None) -> list[Check]:
    settings = settings or Settings()
    ids = list(CHECKS) if not only else only
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return [CHECKS[i](settings) for i in ids]
