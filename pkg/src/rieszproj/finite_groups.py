"""
Frequency projections on finite groups Z_m^n.

Group elements and dual elements are both enumerated as tuples in
lexicographic order; the pairing is ``<gamma, omega> = exp(2 pi i gamma.omega / m)``.
Norms use normalized counting measure.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class GroupSpec:
    m: int
    n: int = 1

    def __post_init__(self):
        if self.m < 2 or self.n < 1:
            raise ValueError(f"need m >= 2 and n >= 1, got m={self.m}, n={self.n}")

    @property
    def order(self) -> int:
        return self.m**self.n

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.m), repeat=self.n))

    def index(self, element: Sequence[int]) -> int:
        idx = 0
        for e in element:
            idx = idx * self.m + int(e) % self.m
        return idx


@dataclass(frozen=True)
class FreqSet:
    """A nonempty set ``E`` of dual-group elements, reduced mod ``m``."""

    spec: GroupSpec
    indices: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        reduced = set()
        for g in self.indices:
            g = (g,) if isinstance(g, (int, np.integer)) else tuple(g)
            if len(g) != self.spec.n:
                raise ValueError(f"frequency {g} does not have {self.spec.n} entries")
            reduced.add(tuple(int(x) % self.spec.m for x in g))
        if not reduced:
            raise ValueError("frequency set must be nonempty")
        object.__setattr__(self, "indices", frozenset(reduced))

    @classmethod
    def product(cls, spec: GroupSpec, factor: Iterable[int]) -> "FreqSet":
        """``factor**n`` as a subset of the dual of ``Z_m^n``."""
        return cls(spec, frozenset(itertools.product(list(factor), repeat=spec.n)))

    @classmethod
    def full(cls, spec: GroupSpec) -> "FreqSet":
        return cls.product(spec, range(spec.m))

    def mask(self) -> np.ndarray:
        return np.array([g in self.indices for g in self.spec.elements()])


@dataclass(frozen=True)
class FiniteFunction:
    spec: GroupSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.size != self.spec.order:
            raise ValueError(f"expected {self.spec.order} values, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def sup(self) -> float:
        return float(np.abs(self.values).max())


@lru_cache(maxsize=32)
def character_matrix(spec: GroupSpec) -> np.ndarray:
    """``X[gamma, omega] = <gamma, omega>``, rows and columns lexicographic."""
    if spec.order > 1024:
        raise ValueError("direct transforms are limited to groups of order <= 1024")
    els = np.array(spec.elements(), dtype=np.int64).reshape(spec.order, spec.n)
    phase = (els @ els.T) % spec.m
    X = np.exp(2j * np.pi * phase / spec.m)
    X.setflags(write=False)
    return X


def transform(f: FiniteFunction) -> np.ndarray:
    """``f^(gamma) = |G|^-1 sum_omega f(omega) conj<gamma, omega>``."""
    return character_matrix(f.spec).conj() @ f.values / f.spec.order


def inverse_transform(spec: GroupSpec, coeffs: np.ndarray) -> FiniteFunction:
    return FiniteFunction(spec, character_matrix(spec).T @ np.asarray(coeffs, dtype=complex))


def projection_matrix(spec: GroupSpec, E: FreqSet) -> np.ndarray:
    """Matrix of ``P_E`` acting on value vectors; Hermitian and idempotent."""
    if E.spec != spec:
        raise ValueError("frequency set belongs to a different group")
    X = character_matrix(spec)
    mask = E.mask()
    return X[mask].T @ X[mask].conj() / spec.order


def project(f: FiniteFunction, E: FreqSet) -> FiniteFunction:
    coeffs = transform(f)
    coeffs[~E.mask()] = 0
    return inverse_transform(f.spec, coeffs)


def pnorm(f: FiniteFunction | np.ndarray, p: float) -> float:
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    values = f.values if isinstance(f, FiniteFunction) else np.asarray(f)
    moduli = np.abs(values)
    top = moduli.max()
    if top == 0:
        return 0.0
    return float(top * np.mean((moduli / top) ** p) ** (1.0 / p))


# Z_3 medians picture


@dataclass(frozen=True)
class TriangleConfig:
    """Three vertices in the closed unit disc."""

    A: complex
    B: complex
    C: complex

    def __post_init__(self):
        for name in "ABC":
            v = complex(getattr(self, name))
            if abs(v) > 1 + 1e-12:
                raise ValueError(f"vertex {name}={v} lies outside the closed unit disc")
            object.__setattr__(self, name, v)

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C])

    @property
    def medians(self) -> np.ndarray:
        return np.abs(MEDIAN_MATRIX @ self.vertices)


# row j maps vertices to (vertex_j - midpoint of the other two)
MEDIAN_MATRIX = np.eye(3) - 0.5 * (np.ones((3, 3)) - np.eye(3))


def median_objective(t: TriangleConfig, p: float) -> float:
    return float(np.sum(t.medians**p))


def vertices_from_z3(values: Sequence[complex]) -> np.ndarray:
    """Vertices ``B_k = omega**k f(k)`` with ``|P_E f(k)| = (2/3) m_k`` for E = {0, 1}."""
    return np.asarray(values, dtype=complex) * OMEGA ** np.arange(3)


def z3_from_vertices(vertices: Sequence[complex]) -> np.ndarray:
    return np.asarray(vertices, dtype=complex) * OMEGA ** (-np.arange(3))


def z3_tie_function(p: float) -> float:
    """``2**p + 2 - 3 (3/2)**p``: degenerate minus equilateral median objective."""
    return 2.0**p + 2.0 - 3.0 * 1.5**p


def z3_critical_exponent(tol: float = 1e-12) -> float:
    """Root in (2, 4) of ``2**p + 2 = 3 (3/2)**p``, by bisection."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = 2.0, 4.0
    if not (z3_tie_function(lo) < 0 < z3_tie_function(hi)):
        raise ArithmeticError("tie function does not change sign on (2, 4)")
    return optimize.bisect(z3_tie_function, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


EQUILATERAL = np.array([1.0, OMEGA, OMEGA**2])
DEGENERATE = np.array([1.0 + 0j, -1.0, -1.0])


def config_distance(vertices: Sequence[complex], ideal: Sequence[complex]) -> float:
    """Max vertex distance to ``ideal`` after the best rotation, reflection and relabeling."""
    v = np.asarray(vertices, dtype=complex)
    ideal = np.asarray(ideal, dtype=complex)
    best = math.inf
    for w in (v, v.conj()):
        for perm in itertools.permutations(range(3)):
            u = w[list(perm)]
            inner = np.sum(u * ideal.conj())
            rot = inner / abs(inner) if abs(inner) > 0 else 1.0
            best = min(best, float(np.abs(u - rot * ideal).max()))
    return best


def classify_triangle(vertices: Sequence[complex], tol: float = 1e-3) -> tuple[str, float]:
    """``("equilateral" | "degenerate" | "other", distance to nearest ideal)``."""
    d_eq = config_distance(vertices, EQUILATERAL)
    d_deg = config_distance(vertices, DEGENERATE)
    label, dist = ("equilateral", d_eq) if d_eq <= d_deg else ("degenerate", d_deg)
    return (label if dist < tol else "other"), dist


@dataclass(frozen=True)
class MedianEquivalenceReport:
    p: float
    max_norm: float
    max_objective: float
    proportionality: float
    scale: float
    norm_regime: str
    norm_distance: float
    triangle_regime: str
    triangle_distance: float
    converged: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def median_equivalence_check(p: float, trials: int = 128, seed: int = 0,
                             threads: int | None = None) -> MedianEquivalenceReport:
    """Maximize both formulations on Z_3 independently and compare them.

    ``proportionality`` is ``max_norm**p / max_objective``; ``scale`` is
    ``(3 * proportionality)**(1/p)``, the factor relating a median length to
    the modulus of the projected function at the corresponding point.
    """
    from .optimizer import OptimizerConfig, maximize_median_objective, maximize_projection_norm

    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    spec = GroupSpec(3, 1)
    E = FreqSet(spec, frozenset({0, 1}))
    cfg = OptimizerConfig(restarts=trials, seed=seed, threads=threads)
    by_norm = maximize_projection_norm(spec, E, p, cfg)
    by_triangle = maximize_median_objective(p, cfg)
    ratio = by_norm.best_value**p / by_triangle.best_value
    norm_regime, norm_dist = classify_triangle(vertices_from_z3(by_norm.best_point.values))
    tri_regime, tri_dist = classify_triangle(by_triangle.best_point.vertices)
    return MedianEquivalenceReport(
        p=p,
        max_norm=by_norm.best_value,
        max_objective=by_triangle.best_value,
        proportionality=ratio,
        scale=(3 * ratio) ** (1 / p),
        norm_regime=norm_regime,
        norm_distance=norm_dist,
        triangle_regime=tri_regime,
        triangle_distance=tri_dist,
        converged=by_norm.converged and by_triangle.converged,
    )
