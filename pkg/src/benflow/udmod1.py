"""Uniform distribution modulo one: Weyl sums and torus-map pushforwards.

A sequence or sampled function is equidistributed mod 1 exactly when
all its nonzero-frequency exponential-sum averages vanish in the
limit; the reports here estimate those averages at frequencies
1..K and compare against a CLT-scale noise floor.  The module also
implements the skew torus maps
    x -> <p . x + alpha * ln|u_1 cos(2 pi x_1) + ... + u_d cos(2 pi x_d)|>
whose non-uniform pushforwards are the mechanism behind failing
verdicts, with Fourier coefficients of the pushforward estimated by
midpoint-rule quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import UsageError

# below this, a cosine sum is treated as an exact zero (ln 0 := 0 convention)
_LN_ZERO_GUARD = 1e-300


def _cos_2pi(x: np.ndarray) -> np.ndarray:
    """cos(2 pi x) with exact zeros at quarter turns.

    Reduces 2x modulo 2 first (exact in floating point), so inputs like
    x = 1/4 hit the ln 0 := 0 convention instead of a stray 1e-17.
    """
    r = np.mod(2.0 * np.asarray(x, dtype=float), 2.0)
    out = np.cos(np.pi * r)
    out[(r == 0.5) | (r == 1.5)] = 0.0
    return out


@dataclass(frozen=True)
class SamplingGrid:
    """Uniform time grid on (offset, T]: t_i = offset + i*step, i = 1..n."""

    T: float
    step: float
    offset: float = 0.0

    def __post_init__(self):
        if not (self.T > 0 and self.step > 0 and self.offset >= 0):
            raise UsageError("need T > 0, step > 0, offset >= 0")
        if self.step >= self.T:
            raise UsageError("step must be smaller than the horizon")
        if self.count < 100:
            raise UsageError(f"grid yields only {self.count} samples; need >= 100")

    @property
    def count(self) -> int:
        return int(math.floor((self.T - self.offset) / self.step))

    def times(self) -> np.ndarray:
        return self.offset + self.step * np.arange(1, self.count + 1)


@dataclass(frozen=True)
class WeylReport:
    """Magnitudes of averaged exponentials at frequencies 1..K."""

    magnitudes: Mapping[int, float]
    K: int
    count: int

    def __post_init__(self):
        for k, m in self.magnitudes.items():
            if not (0.0 <= m <= 1.0 + 1e-12):
                raise UsageError(f"weyl magnitude at k={k} outside [0,1]: {m}")

    @property
    def max_magnitude(self) -> float:
        return max(self.magnitudes.values())

    def noise_floor(self, multiplier: float = 3.0) -> float:
        return multiplier / math.sqrt(self.count)

    def equidistributed(self, multiplier: float = 3.0) -> bool:
        """Advisory: all magnitudes below the CLT-scale floor. Not a proof."""
        return self.max_magnitude < self.noise_floor(multiplier)


def weyl_sum_sequence(x: Sequence[float] | np.ndarray, k: int) -> complex:
    """(1/N) sum of exp(2 pi i k x_n) over the sequence."""
    if k == 0:
        raise UsageError("frequency k must be nonzero")
    arr = np.asarray(x, dtype=float)
    if arr.size == 0:
        raise UsageError("sequence must be non-empty")
    return complex(np.exp(2j * np.pi * k * arr).mean())


def weyl_average_function(samples: Sequence[float] | np.ndarray, k: int) -> complex:
    """Riemann-sum estimate of the time average of exp(2 pi i k f(t)).

    The samples must come from a uniform grid over [0, T]; the estimate
    is then the plain mean, as for a sequence.
    """
    return weyl_sum_sequence(samples, k)


def cud_report(samples: Sequence[float] | np.ndarray, K: int = 5) -> WeylReport:
    """Weyl magnitudes of the sample at frequencies 1..K."""
    if K < 1:
        raise UsageError("K must be >= 1")
    arr = np.asarray(samples, dtype=float)
    if arr.size < 100:
        raise UsageError("need at least 100 samples for a meaningful report")
    phases = np.exp(2j * np.pi * arr)
    mags: dict[int, float] = {}
    power = np.ones_like(phases)
    for k in range(1, K + 1):
        power = power * phases
        mags[k] = min(float(abs(power.mean())), 1.0)
    return WeylReport(magnitudes=mags, K=K, count=int(arr.size))


@dataclass(frozen=True)
class DeltaComparison:
    """Discrete Weyl sums along arithmetic subsequences vs the time average."""

    deltas: tuple[float, ...]
    discrete_sums: tuple[complex, ...]
    continuous_sum: complex
    flagged: tuple[bool, ...]
    tolerance: float
    k: int

    @property
    def discrete_magnitudes(self) -> tuple[float, ...]:
        return tuple(abs(s) for s in self.discrete_sums)

    @property
    def continuous_magnitude(self) -> float:
        return abs(self.continuous_sum)


def delta_sampling_check(
    f: Callable[[np.ndarray], np.ndarray],
    T: float,
    deltas: Sequence[float],
    k: int = 1,
    *,
    tolerance: float = 0.1,
    continuous_step: float | None = None,
) -> DeltaComparison:
    """Compare Weyl sums of (f(n*delta)) against the continuous estimate.

    Sampling a function along an arithmetic progression preserves
    equidistribution for almost every step; the countable exceptional
    steps show up as discrete sums disagreeing with the time average
    and are flagged.  Each delta must yield at least 100 samples in
    (0, T].
    """
    if k == 0:
        raise UsageError("frequency k must be nonzero")
    deltas = tuple(float(d) for d in deltas)
    if not deltas or any(d <= 0 for d in deltas):
        raise UsageError("delta list must be non-empty and positive")
    if any(math.floor(T / d) < 100 for d in deltas):
        raise UsageError("every delta must yield at least 100 samples in (0, T]")
    if continuous_step is None:
        continuous_step = T / 1e6
    sums = []
    for d in deltas:
        n = int(math.floor(T / d))
        seq = f(d * np.arange(1, n + 1))
        sums.append(weyl_sum_sequence(seq, k))
    grid = SamplingGrid(T=T, step=continuous_step)
    continuous = weyl_average_function(f(grid.times()), k)
    flagged = tuple(abs(s - continuous) > tolerance for s in sums)
    return DeltaComparison(
        deltas=deltas,
        discrete_sums=tuple(sums),
        continuous_sum=continuous,
        flagged=flagged,
        tolerance=tolerance,
        k=k,
    )


@dataclass(frozen=True)
class TorusMapSpec:
    """Skew product x -> <p . x + alpha ln|sum_j u_j cos(2 pi x_j)|>."""

    p: tuple[int, ...]
    alpha: float
    u: tuple[float, ...]

    def __post_init__(self):
        if len(self.p) != len(self.u):
            raise UsageError("p and u must have equal length")
        if not self.u or all(w == 0.0 for w in self.u):
            raise UsageError("weight vector u must be nonzero")
        if self.alpha == 0.0:
            raise UsageError("alpha must be nonzero")

    @property
    def d(self) -> int:
        return len(self.p)


def torus_map_apply(spec: TorusMapSpec, x) -> np.ndarray | float:
    """Apply the map at points of the d-torus.

    Accepts a single point (length-d array or scalar for d = 1) or an
    (n, d) batch.  Cosine sums indistinguishable from zero fall back to
    the ln 0 := 0 convention; no point is excluded.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        scalar_input = True
        pts = arr.reshape(1, 1)
    elif arr.ndim == 1:
        if spec.d == 1:  # a 1-d array is a batch of points on the circle
            scalar_input = False
            pts = arr.reshape(-1, 1)
        else:
            scalar_input = True
            pts = arr.reshape(1, -1)
    else:
        scalar_input = False
        pts = arr
    if pts.shape[1] != spec.d:
        raise UsageError(f"points must have dimension {spec.d}")
    linear = pts @ np.asarray(spec.p, dtype=float)
    cos_sum = _cos_2pi(pts) @ np.asarray(spec.u, dtype=float)
    mag = np.abs(cos_sum)
    near_zero = mag < _LN_ZERO_GUARD
    log_term = np.where(near_zero, 0.0, np.log(np.where(near_zero, 1.0, mag)))
    out = np.mod(linear + spec.alpha * log_term, 1.0)
    return float(out[0]) if scalar_input else out


TorusMap = TorusMapSpec | Callable[[np.ndarray], np.ndarray]


def pushforward_fourier(spec: TorusMap, k: int, grid_n: int = 1000) -> complex:
    """Fourier coefficient of the pushforward of Haar measure under the map.

    Midpoint-rule quadrature with grid_n points per axis; the k = 0
    coefficient is exactly 1 (total mass).  Besides TorusMapSpec, a
    vectorized callable on [0,1) is accepted as a one-dimensional map.
    Dimensions above 3 are rejected: tensor grids do not scale, use
    Monte Carlo instead.
    """
    if k == 0:
        return complex(1.0)
    if grid_n < 10:
        raise UsageError("grid_n is too small for quadrature")
    if isinstance(spec, TorusMapSpec):
        d = spec.d
        if d > 3:
            raise UsageError("grid quadrature supports d <= 3; use Monte Carlo sampling")
        if grid_n**d > 5e7:
            raise UsageError("tensor grid too large; reduce grid_n or use Monte Carlo")
        axes = [(np.arange(n := grid_n) + 0.5) / n for _ in range(d)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        values = torus_map_apply(spec, mesh)
    else:
        x = (np.arange(grid_n) + 0.5) / grid_n
        values = np.asarray(spec(x), dtype=float)
    return complex(np.exp(2j * np.pi * k * values).mean())
