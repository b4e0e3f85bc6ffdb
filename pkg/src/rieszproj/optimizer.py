"""
Multi-start maximization of ``w * sum_j |(M x)_j|**p`` over the polydisc.

Both finite-group problems have this form: the projection norm uses
``M = P_E`` and ``w = 1/|G|``, the medians problem uses the median matrix
with ``w = 1``. The objective is convex in ``x`` (p >= 1), so its maximum
over the polydisc sits on the distinguished boundary, and the polish
phase ``x <- grad / |grad|`` never decreases it.

Restarts are processed in fixed-size chunks so that results do not depend
on how many worker threads are used.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .finite_groups import (
    MEDIAN_MATRIX,
    FiniteFunction,
    FreqSet,
    GroupSpec,
    TriangleConfig,
    projection_matrix,
)

THREADS_ENV = "RIESZPROJ_THREADS"
_CHUNK = 32


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 128
    max_iters: int = 400
    initial_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    tol: float = 1e-14
    polish_sweeps: int = 2000
    seed: int = 0
    threads: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtrack factor must lie in (0, 1)")


@dataclass(frozen=True)
class OptResult:
    best_value: float
    best_point: object
    restart_values: tuple[float, ...] = field(repr=False)
    iterations: int
    converged: bool
    best_restart: int


def objective(matrix: np.ndarray, weight: float, p: float, x: np.ndarray) -> np.ndarray:
    """Row-wise objective for a batch ``x`` of shape (restarts, dim)."""
    y = x @ matrix.T
    return weight * np.sum(np.abs(y) ** p, axis=-1)


def gradient(matrix: np.ndarray, weight: float, p: float, x: np.ndarray) -> np.ndarray:
    """Real gradient as a complex vector: ``dF = Re sum conj(G) dx``.

    ``G = w p M^H (|Mx|^{p-2} Mx)``.
    """
    y = x @ matrix.T
    return weight * p * ((np.abs(y) ** (p - 2) * y) @ matrix.conj())


def project_polydisc(x: np.ndarray) -> np.ndarray:
    mod = np.abs(x)
    return np.where(mod > 1, x / np.where(mod > 1, mod, 1), x)


def _initial_points(seed: int, restarts: int, dim: int) -> np.ndarray:
    """Uniform samples in the polydisc, one independent stream per restart."""
    children = np.random.SeedSequence(seed).spawn(restarts)
    out = np.empty((restarts, dim), dtype=complex)
    for r, child in enumerate(children):
        rng = np.random.default_rng(child)
        angle = rng.random(dim)
        radius = np.sqrt(rng.random(dim))
        out[r] = radius * np.exp(2j * np.pi * angle)
    return out


def _ascend_chunk(matrix, weight, p, x, cfg: OptimizerConfig):
    """Projected gradient ascent with Armijo backtracking, then polish."""
    rows = x.shape[0]
    f = objective(matrix, weight, p, x)
    step = np.full(rows, cfg.initial_step)
    active = np.isfinite(f)
    iters = 0

    for _ in range(cfg.max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        iters += 1
        xa, fa = x[idx], f[idx]
        ga = gradient(matrix, weight, p, xa)
        t = step[idx]
        x_new, f_new = xa.copy(), fa.copy()
        pending = np.ones(idx.size, dtype=bool)
        for _ in range(40):
            sub = np.flatnonzero(pending)
            if sub.size == 0:
                break
            cand = project_polydisc(xa[sub] + t[sub, None] * ga[sub])
            fc = objective(matrix, weight, p, cand)
            gain = np.sum((ga[sub].conj() * (cand - xa[sub])).real, axis=-1)
            ok = fc >= fa[sub] + cfg.armijo * gain
            x_new[sub[ok]], f_new[sub[ok]] = cand[ok], fc[ok]
            pending[sub[ok]] = False
            t[sub[~ok]] *= cfg.backtrack
        x[idx], f[idx] = x_new, f_new
        step[idx] = np.where(pending, t, np.minimum(2 * t, 1e6))
        stalled = pending | (f_new - fa <= cfg.tol * np.maximum(1.0, np.abs(f_new)))
        active[idx[stalled | ~np.isfinite(f_new)]] = False

    # polish: x <- grad/|grad| is a monotone fixed-point map for convex objectives
    live = np.isfinite(f)
    polished = np.zeros(rows, dtype=bool)
    for _ in range(cfg.polish_sweeps):
        idx = np.flatnonzero(live & ~polished)
        if idx.size == 0:
            break
        iters += 1
        g = gradient(matrix, weight, p, x[idx])
        mod = np.abs(g)
        cand = np.where(mod > 0, g / np.where(mod > 0, mod, 1), x[idx])
        fc = objective(matrix, weight, p, cand)
        gain = fc - f[idx]
        better = gain >= 0
        x[idx[better]], f[idx[better]] = cand[better], fc[better]
        stalled = (~better) | (gain <= cfg.tol * np.maximum(1.0, np.abs(fc)))
        polished[idx[stalled]] = True

    converged = polished & np.isfinite(f)
    f = np.where(np.isfinite(f), f, -np.inf)
    return x, f, iters, converged


def maximize_polydisc(matrix: np.ndarray, weight: float, p: float,
                      cfg: OptimizerConfig) -> tuple[np.ndarray, np.ndarray, int, np.ndarray]:
    """Run all restarts; returns (points, objective values, iterations, converged)."""
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[1]
    x0 = _initial_points(cfg.seed, cfg.restarts, dim)
    chunks = [slice(s, min(s + _CHUNK, cfg.restarts)) for s in range(0, cfg.restarts, _CHUNK)]

    def work(sl):
        return _ascend_chunk(matrix, weight, p, x0[sl].copy(), cfg)

    threads = cfg.threads or default_threads()
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(chunks))) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(sl) for sl in chunks]
    points = np.concatenate([part[0] for part in parts])
    values = np.concatenate([part[1] for part in parts])
    iters = sum(part[2] for part in parts)
    converged = np.concatenate([part[3] for part in parts])
    return points, values, iters, converged


def _best_index(values: np.ndarray) -> int:
    # np.argmax returns the lowest index among ties
    return int(np.argmax(values))


def maximize_projection_norm(spec: GroupSpec, E: FreqSet, p: float,
                             cfg: OptimizerConfig | None = None) -> OptResult:
    """Lower bound for ``||P_E||_{inf,p}`` by multi-start ascent over ``|f| <= 1``.

    ``best_value`` and ``restart_values`` are norms (objective to the 1/p).
    """
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    cfg = cfg or OptimizerConfig()
    P = projection_matrix(spec, E)
    points, values, iters, converged = maximize_polydisc(P, 1.0 / spec.order, p, cfg)
    best = _best_index(values)
    point = FiniteFunction(spec, points[best])
    if point.sup() > 1 + 1e-12:
        raise AssertionError("optimizer returned an infeasible point")
    norms = np.where(np.isfinite(values), np.maximum(values, 0.0) ** (1.0 / p), -np.inf)
    return OptResult(
        best_value=float(norms[best]),
        best_point=point,
        restart_values=tuple(float(v) for v in norms),
        iterations=iters,
        converged=bool(converged[best]),
        best_restart=best,
    )


def maximize_median_objective(p: float, cfg: OptimizerConfig | None = None) -> OptResult:
    """Maximize ``m0**p + m1**p + m2**p`` over triangles in the closed disc."""
    cfg = cfg or OptimizerConfig()
    points, values, iters, converged = maximize_polydisc(MEDIAN_MATRIX, 1.0, p, cfg)
    best = _best_index(values)
    v = points[best]
    return OptResult(
        best_value=float(values[best]),
        best_point=TriangleConfig(*v),
        restart_values=tuple(float(x) for x in values),
        iterations=iters,
        converged=bool(converged[best]),
        best_restart=best,
    )


def gradient_check(spec: GroupSpec, E: FreqSet, p: float, point: Sequence[complex] | FiniteFunction,
                   h: float = 1e-6, directions: int = 20, seed: int = 0) -> float:
    """Worst relative deviation between the analytic gradient and central differences.

    Deviations are measured relative to the largest directional derivative
    seen, so directions nearly orthogonal to the gradient do not blow up.
    """
    if not 1e-7 <= h <= 1e-4:
        raise ValueError("h must lie in [1e-7, 1e-4]")
    x = np.asarray(point.values if isinstance(point, FiniteFunction) else point, dtype=complex)[None, :]
    P = projection_matrix(spec, E)
    w = 1.0 / spec.order
    g = gradient(P, w, p, x)[0]
    rng = np.random.default_rng(seed)
    analytic, numeric = [], []
    for _ in range(directions):
        d = rng.normal(size=x.shape[1]) + 1j * rng.normal(size=x.shape[1])
        d /= np.linalg.norm(d)
        plus = objective(P, w, p, x + h * d)[0]
        minus = objective(P, w, p, x - h * d)[0]
        numeric.append((plus - minus) / (2 * h))
        analytic.append(float(np.sum((g.conj() * d).real)))
    analytic, numeric = np.array(analytic), np.array(numeric)
    scale = max(np.abs(analytic).max(), 1e-300)
    return float(np.abs(analytic - numeric).max() / scale)


def crossing_bisection(norm_at: Callable[[float], float], bracket: tuple[float, float],
                       tol: float = 1e-6, threshold: float = 1.0) -> float:
    """Smallest-found ``p`` where a nondecreasing ``norm_at`` exceeds ``threshold``.

    Requires ``norm_at(lo) <= threshold < norm_at(hi)``. Returns the upper
    end of the final bracket, where ``norm_at > threshold`` has been
    observed, so the answer is an upper estimate of the crossing within
    ``tol``.
    """
    lo, hi = map(float, bracket)
    if not (tol > 0 and lo < hi):
        raise ValueError(f"invalid bracket {bracket} or tol {tol}")
    cache: dict[float, float] = {}

    def value(p):
        if p not in cache:
            cache[p] = float(norm_at(p))
        return cache[p]

    if not value(lo) <= threshold:
        raise ValueError(f"norm at p={lo} is {value(lo)!r} > {threshold}: bracket does not straddle")
    if not value(hi) > threshold:
        raise ValueError(f"norm at p={hi} is {value(hi)!r} <= {threshold}: no crossing in bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if value(mid) > threshold:
            hi = mid
        else:
            lo = mid
    return hi


def group_crossing_exponent(spec: GroupSpec, E: FreqSet, bracket: tuple[float, float],
                            cfg: OptimizerConfig | None = None, tol: float = 1e-4,
                            margin: float = 1e-9):
    """Upper estimate of the critical exponent of ``P_E`` from optimizer lower bounds.

    The returned bound is certified only in the sense that an explicit
    feasible ``f`` with ``||P_E f||_p > 1 + margin`` was found at its value.
    """
    from .classical_bounds import BoundKind, BoundMethod, ExponentBound

    cfg = cfg or OptimizerConfig()
    results: dict[float, OptResult] = {}

    def norm_at(p):
        results[p] = maximize_projection_norm(spec, E, p, cfg)
        return results[p].best_value

    p_star = crossing_bisection(norm_at, bracket, tol, threshold=1.0 + margin)
    witness = results[p_star]
    return ExponentBound(
        BoundKind.UPPER,
        p_star,
        BoundMethod.OPTIMIZER,
        {
            "group": {"m": spec.m, "n": spec.n},
            "E": sorted(E.indices),
            "p": p_star,
            "norm": witness.best_value,
            "restarts": cfg.restarts,
            "seed": cfg.seed,
            "f": [[v.real, v.imag] for v in witness.best_point.values],
            "converged": witness.converged,
        },
    )
