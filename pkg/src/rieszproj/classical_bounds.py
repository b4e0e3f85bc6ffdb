"""
Closed-form constants for the Riesz projection and the conjugate function,
plus the exponent algebra of Riesz-Thorin interpolation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

INV_PI_E = 1.0 / (math.pi * math.e)

_ALPHA_LO = 0.01
_ALPHA_HI = math.pi / 2 - 1e-6


class BoundKind(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


class BoundMethod(str, enum.Enum):
    WITNESS = "witness"
    INTERPOLATION = "interpolation"
    OPTIMIZER = "optimizer"
    ROOT = "root"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class ExponentBound:
    """A bound on a critical exponent together with what produced it."""

    kind: BoundKind
    value: float
    method: BoundMethod
    certificate: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", BoundKind(self.kind))
        object.__setattr__(self, "method", BoundMethod(self.method))
        if not self.value >= 2:
            raise ValueError(f"critical exponents are >= 2, got {self.value}")
        replayable = (BoundMethod.INTERPOLATION, BoundMethod.WITNESS)
        if self.kind is BoundKind.LOWER and self.method in replayable and not self.certificate:
            raise ValueError("interpolation/witness lower bounds need a certificate")

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "value": self.value,
            "method": self.method.value,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class ExponentQuery:
    """Exponents for an L^q -> L^p question; ``c`` is a known endpoint exponent."""

    p: float
    q: float = math.inf
    n: int = 1
    c: float = 4.0

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if not self.q > 2:
            raise ValueError(f"q must exceed 2, got {self.q}")
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not self.c >= 2:
            raise ValueError(f"endpoint exponent must be >= 2, got {self.c}")


def _check_p(p: float):
    if not (1 < p < math.inf):
        raise ValueError(f"p must lie in (1, inf), got {p}")


def hv_upper(p: float, n: int = 1) -> float:
    """``(sin(pi/p))**(-n)``, the L^p -> L^p norm of the n-variable Riesz projection."""
    _check_p(p)
    return math.sin(math.pi / p) ** (-n)


def pichorides(p: float) -> float:
    """L^p -> L^p norm of the conjugate function, ``max(tan, cot)(pi / 2p)``."""
    _check_p(p)
    t = math.tan(math.pi / (2 * p))
    return max(t, 1.0 / t)


def thorin_interp_exponent(q: float, c: float) -> float:
    """Target exponent obtained by interpolating (L^2 -> L^2) with (L^inf -> L^c).

    Solves ``1/p = 1/q + (1 - 2/q)/c``; for ``c = 4`` this is ``4q/(2+q)``.
    """
    if not q > 2:
        raise ValueError(f"q must exceed 2, got {q}")
    if not c >= 2:
        raise ValueError(f"c must be >= 2, got {c}")
    if math.isinf(q):
        return float(c)
    return 1.0 / (1.0 / q + (1.0 - 2.0 / q) / c)


def torus_lower_chain(n: int) -> ExponentBound:
    """Lower bound ``2 + 2/(2**n - 1)`` for the critical exponent on T^n.

    Obtained by iterating ``p -> 4p/(2+p)`` from ``p = 4``; the iterate is
    checked against the closed form before it is returned.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    chain = [4.0]
    for _ in range(n - 1):
        chain.append(thorin_interp_exponent(chain[-1], 4.0))
    closed = 2.0 + 2.0 / (2.0**n - 1.0)
    if abs(chain[-1] - closed) > 1e-12 * closed:
        raise ArithmeticError(f"interpolation chain {chain[-1]!r} != closed form {closed!r}")
    return ExponentBound(
        BoundKind.LOWER,
        chain[-1],
        BoundMethod.INTERPOLATION,
        {"n": n, "start": 4.0, "map": "p -> 4p/(2+p)", "chain": chain, "closed_form": closed},
    )


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def zygmund_log_bound(p: float, alpha: float) -> float:
    """``log`` of ``(2 Gamma(p+1) / (alpha**p cos alpha))**(1/p)`` for fixed alpha."""
    return (math.log(2.0) + math.lgamma(p + 1.0) - p * math.log(alpha) - math.log(math.cos(alpha))) / p


def zygmund_raw(p: float) -> float:
    """Zygmund-type upper bound for the L^inf -> L^p norm of the real conjugate function.

    Distribution-function integration of Zygmund's exponential estimate
    gives ``||f~||_p^p <= 2 Gamma(p+1) / (alpha**p cos alpha)``; the bound
    is minimized over ``alpha`` by golden section.
    """
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    # the objective's alpha-derivative (tan a - p/a, up to 1/p) must change sign in the bracket
    if not (math.tan(_ALPHA_LO) < p / _ALPHA_LO and math.tan(_ALPHA_HI) > p / _ALPHA_HI):
        raise ValueError(f"alpha bracket does not contain the minimizer for p={p}")
    _, logval = golden_section_min(lambda a: zygmund_log_bound(p, a), _ALPHA_LO, _ALPHA_HI)
    return math.exp(logval)


_RAW_TURN = golden_section_min(zygmund_raw, 2.0, 10.0, tol=1e-9)[0]


def zygmund_upper(p: float) -> float:
    """Nondecreasing envelope ``inf_{q >= p} zygmund_raw(q)``.

    The raw bound dips slightly just above ``p = 2``; since the norm it
    bounds is nondecreasing in ``p``, the bound at a larger exponent also
    holds at ``p``.
    """
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    return zygmund_raw(max(p, _RAW_TURN))


def complexification_factor(p: float) -> float:
    """Factor ``C_p`` with ``||H||_{inf,p} <= C_p * ||H_R||_{inf,p}``.

    ``C_p = A_p**-1 * (pi**(-p/2) Gamma(p/2 + 1))**(1/p)`` where
    ``A_p = (Gamma((p+1)/2) / pi**((p+1)/2))**(1/p)`` is the Gaussian
    moment constant; evaluated in log space.
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    log_a = (math.lgamma((p + 1) / 2) - (p + 1) / 2 * math.log(math.pi)) / p
    log_moment = (math.lgamma(p / 2 + 1) - p / 2 * math.log(math.pi)) / p
    return math.exp(log_moment - log_a)


def riesz_hilbert_sandwich(h_norm: float) -> tuple[float, float]:
    """Bounds on ``||P_1^+||_{inf,p}`` given a value of ``||H||_{inf,p}``.

    The lower leg is floored at 1 because constants are fixed points.
    """
    if not h_norm >= 0:
        raise ValueError("h_norm must be nonnegative")
    return max(h_norm / 2 - 1, 1.0), 1 + h_norm / 2


def conjugate_upper(p: float) -> float:
    """Best available upper bound for ``||H||_{inf,p}`` (p >= 2)."""
    return min(pichorides(p), complexification_factor(p) * zygmund_upper(p))
