"""
Explicit test functions that push ``||P^+ f||_p`` above 1 (or bound it below).

* the one-variable family ``f = (1 - eps z)^2 / |1 - eps z|^2`` with
  projection ``1 - eps^2 - eps z``;
* the bidisk family ``h = (1 - g) / (1 - conj g)`` with projection
  ``1 - ||g||_2^2 - g`` for homogeneous holomorphic ``g``;
* ``arg(1 - e^{i theta})``, whose conjugate function is
  ``-log|1 - e^{i theta}|`` and gives lower bounds at large ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import integrate

from .classical_bounds import BoundKind, BoundMethod, ExponentBound, riesz_hilbert_sandwich
from .core_fourier import (
    NormMethod,
    NormResult,
    TrigPoly,
    binomial_power,
    even_p_norm_exact,
    lp_norm,
    parseval_norm,
    sup_norm_estimate,
)
from .optimizer import crossing_bisection

# norms within this distance of 1 are not counted as exceeding it
EXCEED_TOL = 1e-12

CROSSING_BRACKET = (2.0, 64.0)

# split point between the logarithmic end and the smooth part of [0, pi]
_LOG_SPLIT = 0.1


class NoCrossingError(ValueError):
    """The witness never exceeds norm 1, so it certifies no exponent bound."""


@dataclass(frozen=True)
class WitnessReport:
    witness: str
    params: dict[str, Any]
    p: float
    norm_value: NormResult
    tolerance: float = EXCEED_TOL
    exceeds_one: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "exceeds_one", self.norm_value.value > 1 + self.tolerance)


# one-variable family


@dataclass(frozen=True)
class Theorem1Witness:
    eps: float

    def __post_init__(self):
        if not 0 < self.eps < 0.5:
            raise ValueError(f"eps must lie in (0, 1/2), got {self.eps}")

    def projection(self) -> TrigPoly:
        return TrigPoly(1, {(0,): 1 - self.eps**2, (1,): -self.eps})

    def function_series(self, order: int) -> TrigPoly:
        """``(1 - eps z) * sum_{k<=order} eps^k conj(z)^k``, truncating ``f``."""
        if order < 2:
            raise ValueError("order must be >= 2")
        geometric = TrigPoly(1, {(-k,): self.eps**k for k in range(order + 1)})
        return TrigPoly(1, {(0,): 1.0, (1,): -self.eps}) * geometric

    def function_values(self, n: int) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(n) / n)
        return (1 - self.eps * z) ** 2 / np.abs(1 - self.eps * z) ** 2


def _is_even_int(p: float) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0


def t1_projection_norm(eps: float, p: float) -> NormResult:
    """``||1 - eps^2 - eps z||_p``; exact for even integer ``p``."""
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    poly = Theorem1Witness(eps).projection()
    if _is_even_int(p):
        return even_p_norm_exact(poly, int(p))
    return lp_norm(poly, p)


def t1_power_excess(eps: float, p: float) -> float:
    """``||P f||_p^p - 1`` evaluated without cancellation.

    The grid mean of ``|1 - eps^2 - eps z|^p - 1`` is formed with ``expm1``
    so the ``O(eps^2)`` excess keeps full relative precision.
    """
    a = 1 - eps**2
    n = 64
    prev = None
    while True:
        z = np.exp(2j * np.pi * np.arange(n) / n)
        logmod = np.log(np.abs(a - eps * z))
        value = float(np.mean(np.expm1(p * logmod)))
        if prev is not None and abs(value - prev) <= 1e-13 * max(abs(value), 1e-300):
            return value
        prev, n = value, 2 * n
        if n > 1 << 16:
            return value


def default_eps_grid(smallest: float = 1e-4) -> list[float]:
    grid, eps = [], 0.4
    while eps >= smallest:
        grid.append(eps)
        eps /= 2
    return grid


def t1_scan(p: float, eps_grid: Sequence[float] | None = None) -> WitnessReport:
    """Best ``eps`` on the grid for the one-variable witness at exponent ``p``."""
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    eps_grid = list(eps_grid) if eps_grid is not None else default_eps_grid()
    best_eps, best = None, None
    for eps in eps_grid:
        res = t1_projection_norm(eps, p)
        if best is None or res.value > best.value:
            best_eps, best = eps, res
    return WitnessReport("t1", {"eps": best_eps, "grid_size": len(eps_grid)}, p, best)


# bidisk family


@dataclass(frozen=True)
class BidiskWitness:
    """Homogeneous holomorphic ``g`` on T^2 with ``sup |g| <= 1``."""

    g: TrigPoly
    label: str = ""

    def __post_init__(self):
        g = self.g
        if g.dims != 2:
            raise ValueError("g must be a polynomial in two variables")
        if not g.is_analytic():
            raise ValueError("g must be holomorphic (all indices >= 0)")
        if len(g.total_degrees()) > 1:
            raise ValueError("g must be homogeneous (one total degree)")
        if len(g) and sup_norm_estimate(g).value > 1 + 1e-12:
            raise ValueError("g violates the sup-norm bound ||g||_inf <= 1")
        if not 0 < self.a <= 1:
            raise ValueError(f"a = 1 - ||g||_2^2 = {self.a} is not in (0, 1]")

    @classmethod
    def binomial(cls, k: int, scale: float) -> "BidiskWitness":
        """``g = (z1 + z2)**k / scale``."""
        return cls(binomial_power(k, scale), label=f"(z1+z2)^{k}/{scale:g}")

    @property
    def g_norm2_sq(self) -> float:
        return parseval_norm(self.g).value ** 2

    @property
    def a(self) -> float:
        return 1.0 - self.g_norm2_sq


def bidisk_projection(w: BidiskWitness) -> TrigPoly:
    return TrigPoly.constant(w.a, 2) - w.g


def bidisk_norm4(w: BidiskWitness) -> float:
    """``||P h||_4^4 = 1 + ||g||_2^8 + ||g||_4^4 - 2 ||g||_2^4``."""
    s = w.g_norm2_sq
    g4 = even_p_norm_exact(w.g, 4).value ** 4 if len(w.g) else 0.0
    return 1.0 + s**4 + g4 - 2.0 * s**2


def bidisk_norm(w: BidiskWitness, p: float) -> NormResult:
    """``||a - g||_p`` by grid quadrature (exact for even integer ``p``)."""
    poly = bidisk_projection(w)
    if _is_even_int(p):
        return even_p_norm_exact(poly, int(p))
    return lp_norm(poly, p)


def bidisk_crossing_exponent(w: BidiskWitness, tol: float = 1e-6,
                             bracket: tuple[float, float] = CROSSING_BRACKET) -> ExponentBound:
    """Exponent where ``||a - g||_p`` first exceeds 1: an upper bound for p_2."""
    poly = bidisk_projection(w)
    sup = sup_norm_estimate(poly)
    if sup.value + sup.err <= 1 + 1e-12:
        raise NoCrossingError(f"sup |a - g| = {sup.value:.12g} <= 1: no crossing exists")

    def norm_at(p):
        return lp_norm(poly, p).value

    p_star = crossing_bisection(norm_at, bracket, tol)
    return ExponentBound(
        BoundKind.UPPER,
        p_star,
        BoundMethod.WITNESS,
        {
            "family": "bidisk",
            "g": w.label or repr(w.g),
            "a": w.a,
            "norm_at_p": norm_at(p_star),
            "tol": tol,
        },
    )


# logarithmic witness for the conjugate function


def _log_chord(theta: np.ndarray | float) -> np.ndarray:
    """``log|1 - e^{i theta}| = log(2 sin(theta/2))`` on (0, pi]."""
    return np.log(2.0 * np.sin(0.5 * np.asarray(theta)))


def _log_chord_of_u(u: np.ndarray | float) -> np.ndarray:
    """``log(2 sin(theta/2))`` at ``theta = exp(-u)``, accurate for huge ``u``."""
    theta = np.exp(-np.asarray(u, dtype=float))
    # sin(t/2)/(t/2) = np.sinc(t / (2 pi))
    return -np.asarray(u, dtype=float) + np.log(np.sinc(theta / (2 * np.pi)))


def log_chord_norm(p: float) -> NormResult:
    """``|| log|1 - e^{i theta}| ||_p`` under normalized measure on T.

    Uses ``(1/pi) int_0^pi |log(2 sin(theta/2))|^p``. Near ``theta = 0`` the
    substitution ``theta = e^{-u}`` turns the singular end into a
    Gamma-like bump ``u^p e^{-u}`` that is integrated on a bounded range
    around its peak; everything is scaled by the bump height so large
    ``p`` does not overflow.
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    u0 = -math.log(_LOG_SPLIT)
    peak = max(p, u0)
    # log of the inner integrand maximum, used as a common scale
    shift = p * math.log(peak) - peak

    def inner(u):
        return math.exp(p * math.log(abs(float(_log_chord_of_u(u)))) - u - shift)

    def outer(theta):
        lc = abs(float(_log_chord(theta)))
        return 0.0 if lc == 0.0 else math.exp(p * math.log(lc) - shift)

    width = math.sqrt(p + 1)
    upper = peak + 40 * width + 60
    knots = sorted({u0, *[min(max(peak + k * width, u0), upper) for k in (-8, -3, 0, 3, 8)], upper})
    total, err = 0.0, 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        if hi > lo:
            val, e = integrate.quad(inner, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)
            total, err = total + val, err + e
    for lo, hi in ((_LOG_SPLIT, math.pi / 3), (math.pi / 3, math.pi)):
        val, e = integrate.quad(outer, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)
        total, err = total + val, err + e
    log_mean = math.log(total) + shift - math.log(math.pi)
    value = math.exp(log_mean / p)
    # relative error of the integral contributes 1/p of itself to the norm
    return NormResult(value, NormMethod.ADAPTIVE_QUADRATURE, value * (err / total) / p)


def hilbert_witness_lower(p: float) -> float:
    """Lower bound ``(2/pi) ||log|1 - e^{i theta}|||_p`` for ``||H_R||_{inf,p}``."""
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    return 2.0 / math.pi * log_chord_norm(p).value


def one_dim_lower(p: float, eps_grid: Sequence[float] | None = None) -> float:
    """Best available lower bound for ``||P_1^+||_{inf,p}`` from the witnesses."""
    lower_leg, _ = riesz_hilbert_sandwich(hilbert_witness_lower(p))
    t1 = t1_scan(p, eps_grid).norm_value.value
    return max(lower_leg, t1, 1.0)


def tensor_lower_bound(p: float, n: int, eps_grid: Sequence[float] | None = None) -> float:
    """``L(p)**n``: product witnesses ``f(z1)...f(zn)`` bound ``||P_n^+||_{inf,p}`` below."""
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if n < 1:
        raise ValueError("n must be a positive integer")
    return one_dim_lower(p, eps_grid) ** n
