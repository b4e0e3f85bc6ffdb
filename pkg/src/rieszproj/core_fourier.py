"""
Trigonometric polynomials on the n-torus and their norms.

All norms are taken with respect to normalized Lebesgue measure on T^n,
so ``||1||_p == 1`` for every ``p``. Polynomials are stored sparsely as a
map from multi-indices to complex coefficients.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence, Union

import numpy as np

MultiIndex = tuple[int, ...]

# Largest total grid size the adaptive p-norm will build (complex128 -> 256 MiB).
MAX_GRID_POINTS = 1 << 24


class NormMethod(str, enum.Enum):
    PARSEVAL_EXACT = "parseval-exact"
    EVEN_P_EXACT = "even-p-exact"
    GRID_QUADRATURE = "grid-quadrature"
    ADAPTIVE_QUADRATURE = "adaptive-quadrature"


_EXACT_METHODS = (NormMethod.PARSEVAL_EXACT, NormMethod.EVEN_P_EXACT)


@dataclass(frozen=True)
class NormResult:
    """A norm value tagged with how it was obtained.

    ``error_estimate`` is the string ``"exact"`` for the two exact methods
    and a nonnegative float otherwise.
    """

    value: float
    method: NormMethod
    error_estimate: Union[float, str]

    def __post_init__(self):
        object.__setattr__(self, "method", NormMethod(self.method))
        if not self.value >= 0:
            raise ValueError(f"norm value must be nonnegative, got {self.value}")
        if self.error_estimate == "exact":
            if self.method not in _EXACT_METHODS:
                raise ValueError(f"method {self.method.value} cannot be exact")
        elif not float(self.error_estimate) >= 0:
            raise ValueError("error estimate must be nonnegative")

    @property
    def is_exact(self) -> bool:
        return self.error_estimate == "exact"

    @property
    def err(self) -> float:
        return 0.0 if self.is_exact else float(self.error_estimate)


class TrigPoly:
    """A finite sum ``sum_alpha c_alpha * zeta**alpha`` on T^n.

    Parameters
    ----------
    dims : int
        Number of torus variables ``n``.
    coeffs : mapping
        Multi-index (tuple of ints, length ``dims``) to complex coefficient.
        Zero coefficients are dropped.
    """

    __slots__ = ("dims", "_coeffs", "_hash")

    def __init__(self, dims: int, coeffs: Mapping[Sequence[int], complex] | None = None):
        if dims < 1:
            raise ValueError("dims must be >= 1")
        clean: dict[MultiIndex, complex] = {}
        for key, c in (coeffs or {}).items():
            idx = tuple(int(k) for k in key)
            if len(idx) != dims:
                raise ValueError(f"multi-index {key!r} does not have {dims} entries")
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"non-finite coefficient at {idx}")
            if c != 0:
                clean[idx] = clean.get(idx, 0) + c
        self.dims = dims
        self._coeffs = {k: v for k, v in clean.items() if v != 0}
        self._hash = None

    # construction helpers

    @classmethod
    def constant(cls, c: complex, dims: int = 1) -> "TrigPoly":
        return cls(dims, {(0,) * dims: c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: complex = 1.0) -> "TrigPoly":
        return cls(len(alpha), {tuple(alpha): c})

    @classmethod
    def zero(cls, dims: int = 1) -> "TrigPoly":
        return cls(dims, {})

    # mapping-ish access

    @property
    def coeffs(self) -> dict[MultiIndex, complex]:
        return dict(self._coeffs)

    def __getitem__(self, alpha: Sequence[int]) -> complex:
        return self._coeffs.get(tuple(alpha), 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.dims == other.dims and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dims, frozenset(self._coeffs.items())))
        return self._hash

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {v:.6g}" for k, v in sorted(self._coeffs.items()))
        return f"TrigPoly(dims={self.dims}, {{{terms}}})"

    # arithmetic

    def _check(self, other: "TrigPoly"):
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = TrigPoly.constant(other, self.dims)
        self._check(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return TrigPoly(self.dims, out)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.dims, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return TrigPoly(self.dims, {k: v * other for k, v in self._coeffs.items()})
        self._check(other)
        out: dict[MultiIndex, complex] = {}
        for ka, va in self._coeffs.items():
            for kb, vb in other._coeffs.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return TrigPoly(self.dims, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __pow__(self, k: int):
        if int(k) != k or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = TrigPoly.constant(1.0, self.dims)
        base = self
        k = int(k)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> "TrigPoly":
        """Pointwise complex conjugate on the torus (indices negate)."""
        return TrigPoly(
            self.dims,
            {tuple(-a for a in k): v.conjugate() for k, v in self._coeffs.items()},
        )

    # shape information

    def index_range(self) -> list[tuple[int, int]]:
        """Per-dimension (min, max) index; (0, 0) for the zero polynomial."""
        if not self._coeffs:
            return [(0, 0)] * self.dims
        keys = np.array(list(self._coeffs), dtype=np.int64).reshape(-1, self.dims)
        return list(zip(keys.min(axis=0).tolist(), keys.max(axis=0).tolist()))

    def bandwidth(self) -> tuple[int, ...]:
        return tuple(hi - lo for lo, hi in self.index_range())

    def is_analytic(self) -> bool:
        return all(min(k) >= 0 for k in self._coeffs)

    def total_degrees(self) -> set[int]:
        return {sum(k) for k in self._coeffs}

    def __call__(self, *zeta: complex) -> complex:
        if len(zeta) != self.dims:
            raise ValueError(f"expected {self.dims} arguments")
        return complex(sum(c * np.prod([z**a for z, a in zip(zeta, k)]) for k, c in self._coeffs.items()))


def binomial_power(k: int, scale: float = 1.0) -> TrigPoly:
    """``(z1 + z2)**k / scale`` with exactly computed binomial coefficients."""
    return TrigPoly(2, {(j, k - j): math.comb(k, j) / scale for j in range(k + 1)})


@dataclass(frozen=True)
class GridFunction:
    """Samples on a uniform tensor grid of T^n.

    ``values[k1, ..., kn]`` is the sample at ``zeta_j = exp(2 pi i k_j / N_j)``.
    """

    dims: int
    sizes: tuple[int, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) != self.dims or min(sizes) < 1:
            raise ValueError(f"invalid grid sizes {self.sizes} for dims={self.dims}")
        values = np.asarray(self.values, dtype=complex)
        if values.size != math.prod(sizes):
            raise ValueError(f"expected {math.prod(sizes)} samples, got {values.size}")
        values = values.reshape(sizes)
        values.setflags(write=False)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "values", values)


def _normalize_sizes(poly: TrigPoly, sizes: Sequence[int] | int) -> tuple[int, ...]:
    if isinstance(sizes, (int, np.integer)):
        sizes = (int(sizes),) * poly.dims
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != poly.dims:
        raise ValueError(f"need {poly.dims} grid sizes, got {len(sizes)}")
    return sizes


def evaluate_grid(poly: TrigPoly, sizes: Sequence[int] | int) -> GridFunction:
    """Sample ``poly`` on a uniform grid by inverse FFT.

    Raises
    ------
    ValueError
        If some ``N_j`` does not exceed the bandwidth in dimension ``j``;
        such a grid would alias distinct coefficients onto one frequency.
    """
    sizes = _normalize_sizes(poly, sizes)
    for j, (n, bw) in enumerate(zip(sizes, poly.bandwidth())):
        if n <= bw:
            raise ValueError(
                f"grid size {n} in dimension {j} does not exceed bandwidth {bw} (aliasing)"
            )
    dense = np.zeros(sizes, dtype=complex)
    for alpha, c in poly:
        dense[tuple(a % n for a, n in zip(alpha, sizes))] += c
    values = np.fft.ifftn(dense) * math.prod(sizes)
    return GridFunction(poly.dims, sizes, values)


def grid_coefficients(gf: GridFunction, index_range: Sequence[tuple[int, int]]) -> TrigPoly:
    """Recover coefficients from samples, reading indices in ``index_range``."""
    dense = np.fft.fftn(gf.values) / math.prod(gf.sizes)
    out = {}
    for alpha in np.ndindex(*[hi - lo + 1 for lo, hi in index_range]):
        key = tuple(a + lo for a, (lo, _) in zip(alpha, index_range))
        out[key] = dense[tuple(k % n for k, n in zip(key, gf.sizes))]
    return TrigPoly(gf.dims, out)


def riesz_project(poly: TrigPoly) -> TrigPoly:
    """Keep only the coefficients whose multi-index has all entries >= 0."""
    return TrigPoly(poly.dims, {k: v for k, v in poly if min(k) >= 0})


def parseval_norm(poly: TrigPoly) -> NormResult:
    value = math.sqrt(math.fsum(abs(c) ** 2 for _, c in poly))
    return NormResult(value, NormMethod.PARSEVAL_EXACT, "exact")


def even_p_norm_exact(poly: TrigPoly, p: int) -> NormResult:
    """``||f||_p`` for even integer ``p`` via ``||f||_{2k}^{2k} = ||f^k||_2^2``."""
    if int(p) != p or p < 2 or int(p) % 2:
        raise ValueError(f"p must be an even integer >= 2, got {p}")
    k = int(p) // 2
    power_sq = math.fsum(abs(c) ** 2 for _, c in poly**k)
    return NormResult(power_sq ** (1.0 / p), NormMethod.EVEN_P_EXACT, "exact")


def _mean_power(moduli: np.ndarray, p: float) -> float:
    """``(mean |v|^p)^(1/p)`` computed without overflow for large ``p``."""
    top = float(moduli.max()) if moduli.size else 0.0
    if top == 0.0:
        return 0.0
    return top * float(np.mean((moduli / top) ** p)) ** (1.0 / p)


def lp_norm_grid(gf: GridFunction, p: float) -> NormResult:
    """Trapezoid-rule ``L^p`` norm of grid samples under normalized measure.

    The error estimate is the difference against the same rule on the
    every-other-sample subgrid (along each even-sized dimension).
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    moduli = np.abs(gf.values)
    value = _mean_power(moduli, p)
    coarse = tuple(slice(None, None, 2) if n % 2 == 0 else slice(None) for n in gf.sizes)
    if all(n % 2 for n in gf.sizes):
        err = math.inf
    else:
        err = abs(value - _mean_power(moduli[coarse], p))
    return NormResult(value, NormMethod.GRID_QUADRATURE, err)


@lru_cache(maxsize=8)
def _grid_moduli(poly: TrigPoly, sizes: tuple[int, ...]) -> np.ndarray:
    out = np.abs(evaluate_grid(poly, sizes).values)
    out.setflags(write=False)
    return out


def default_grid_sizes(poly: TrigPoly, factor: int = 4) -> tuple[int, ...]:
    """``factor`` times the bandwidth per dimension, 1 where the poly is constant."""
    return tuple(factor * bw if bw > 0 else 1 for bw in poly.bandwidth())


def lp_norm(poly: TrigPoly, p: float, rtol: float = 1e-10,
            max_points: int = MAX_GRID_POINTS) -> NormResult:
    """``||poly||_p`` by uniform-grid quadrature with grid doubling.

    Starts from :func:`default_grid_sizes` and doubles every non-constant
    dimension until two successive values agree to ``rtol``. The returned
    error estimate is the last difference; it stays large if ``max_points``
    is reached first.
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    sizes = default_grid_sizes(poly)
    prev = _mean_power(_grid_moduli(poly, sizes), p)
    while True:
        finer = tuple(2 * n if bw > 0 else 1 for n, bw in zip(sizes, poly.bandwidth()))
        if finer == sizes or math.prod(finer) > max_points:
            err = 0.0 if finer == sizes else math.inf
            return NormResult(prev, NormMethod.GRID_QUADRATURE, err)
        value = _mean_power(_grid_moduli(poly, finer), p)
        diff = abs(value - prev)
        sizes, prev = finer, value
        if diff <= rtol * max(value, 1e-300):
            return NormResult(value, NormMethod.GRID_QUADRATURE, diff)


def sup_norm_estimate(poly: TrigPoly, oversample: int = 8) -> NormResult:
    """Lower estimate of ``max |poly|`` from an oversampled grid.

    ``error_estimate`` is a Bernstein-inequality margin: with effective
    degree ``d_j`` (half the bandwidth, rounded up) the true supremum is at
    most ``grid_max / (1 - pi * sum_j d_j / N_j)``, and the reported error
    is the gap between that and the grid maximum.
    """
    if oversample < 2:
        raise ValueError("oversample must be >= 2")
    sizes = tuple(oversample * (bw + 1) for bw in poly.bandwidth())
    top = float(np.abs(evaluate_grid(poly, sizes).values).max())
    degrees = [math.ceil(bw / 2) for bw in poly.bandwidth()]
    slack = 1.0 - math.pi * sum(d / n for d, n in zip(degrees, sizes))
    err = top * (1.0 / slack - 1.0) if slack > 0 else math.inf
    return NormResult(top, NormMethod.GRID_QUADRATURE, err)


def random_sparse_poly(rng: np.random.Generator, dims: int = 2, terms: int = 6,
                       max_index: int = 4) -> TrigPoly:
    """Random complex coefficients on random indices in ``[-max_index, max_index]^dims``."""
    keys = rng.integers(-max_index, max_index + 1, size=(terms, dims))
    vals = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return TrigPoly(dims, {tuple(k): v for k, v in zip(keys.tolist(), vals)})
