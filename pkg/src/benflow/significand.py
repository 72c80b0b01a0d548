"""Base-b significand arithmetic and the logarithmic first-digit law.

The significand of x in base b is the unique S in [1, b) with
|x| = S * b^k for an integer k; S(0) is 0 by convention.  The target
law assigns probability log_b(s) to the event S <= s, which for first
digits specializes to P(digit = d) = log_b(1 + 1/d).

The scalar `significand` is computed by exact integer exponent search
followed by one correctly-rounded rational division, never by a
log/pow round trip: that keeps significand(x * b^k) == significand(x)
whenever the scaled input is exactly representable.  The vectorized
helper used on large sample arrays renormalizes after a log-based
exponent guess, which is accurate to a couple of ulps and is only used
for statistics with tolerances far above that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, UsageError


def validate_base(b: int) -> int:
    """Check that b is an integer base >= 2 and return it."""
    if not isinstance(b, (int, np.integer)) or isinstance(b, bool):
        raise UsageError(f"base must be an integer, got {b!r}")
    if b < 2:
        raise UsageError(f"base must be >= 2, got {b}")
    return int(b)


def _compare_with_power(mant: int, exp2: int, b: int, k: int) -> int:
    """Sign of mant * 2^exp2 - b^k using exact integer arithmetic."""
    if k >= 0:
        if exp2 >= 0:
            lhs, rhs = mant << exp2, b**k
        else:
            lhs, rhs = mant, b**k << (-exp2)
    else:
        if exp2 >= 0:
            lhs, rhs = (mant << exp2) * b ** (-k), 1
        else:
            lhs, rhs = mant * b ** (-k), 1 << (-exp2)
    return (lhs > rhs) - (lhs < rhs)


def significand(x: float, b: int = 10) -> float:
    """Return S_b(x): the significand of x in base b, with S_b(0) = 0.

    Correctly rounded.  Raises DomainError for non-finite x.
    """
    b = validate_base(b)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"significand requires finite x, got {x}")
    if x == 0.0:
        return 0.0
    a = abs(x)
    m, e2 = math.frexp(a)  # a == m * 2**e2 with m in [0.5, 1)
    mant = int(m * (1 << 53))
    exp2 = e2 - 53
    # Exponent k = floor(log_b a), guessed from floats then fixed exactly.
    k = math.floor(math.log2(a) / math.log2(b))
    while _compare_with_power(mant, exp2, b, k + 1) >= 0:
        k += 1
    while _compare_with_power(mant, exp2, b, k) < 0:
        k -= 1
    s = float(Fraction(mant, 1) * Fraction(2) ** exp2 / Fraction(b) ** k)
    if s >= b:  # true value is below b but rounded up to it
        s = math.nextafter(float(b), 1.0)
    return s


def first_digit(x: float, b: int = 10) -> int:
    """First significant digit of x in base b: floor(S_b(x)), 0 only for x = 0."""
    s = significand(x, b)
    return int(s)


def benford_cdf(s: float, b: int = 10) -> float:
    """The target law's CDF log_b(s) for s in [1, b)."""
    b = validate_base(b)
    if not (1 <= s < b):
        raise DomainError(f"significand argument must lie in [1, {b}), got {s}")
    return math.log(s) / math.log(b)


def digit_law_pmf(b: int = 10) -> np.ndarray:
    """Probabilities of first digits 1..b-1 under the logarithmic law."""
    b = validate_base(b)
    digits = np.arange(1, b)
    return np.log1p(1.0 / digits) / math.log(b)


def _significand_array(values: np.ndarray, b: int) -> np.ndarray:
    """Significands of the nonzero entries of `values` (zeros dropped).

    Renormalization-based; accurate to a few ulps, which is far below
    every statistical tolerance this path feeds.
    """
    a = np.abs(np.asarray(values, dtype=float))
    if a.size and not np.all(np.isfinite(a)):
        raise DomainError("samples must be finite")
    a = a[a > 0.0]
    if a.size == 0:
        return a
    logb = math.log(b)
    k = np.floor(np.log(a) / logb)
    s = a * np.power(float(b), -k)
    for _ in range(2):  # k guess is off by at most 1 either way
        high = s >= b
        if high.any():
            s[high] /= b
        low = s < 1.0
        if low.any():
            s[low] *= b
    np.clip(s, 1.0, math.nextafter(float(b), 1.0), out=s)
    return s


@dataclass(frozen=True)
class DigitHistogram:
    """First-digit counts of a sample, with exact zeros tallied apart."""

    base: int
    counts: Mapping[int, int]
    zeros: int
    total: int

    def __post_init__(self):
        if sum(self.counts.values()) + self.zeros != self.total:
            raise UsageError("histogram counts + zeros must equal total")

    def frequencies(self) -> np.ndarray:
        """Observed frequencies of digits 1..b-1 among nonzero samples."""
        nonzero = self.total - self.zeros
        freqs = np.zeros(self.base - 1)
        if nonzero == 0:
            return freqs
        for digit, count in self.counts.items():
            freqs[digit - 1] = count / nonzero
        return freqs


def digit_frequencies(samples: Iterable[float], b: int = 10) -> DigitHistogram:
    """Histogram of first digits of the samples in base b."""
    b = validate_base(b)
    arr = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float)
    if arr.size and not np.all(np.isfinite(arr)):
        raise DomainError("samples must be finite")
    total = int(arr.size)
    zeros = int(np.count_nonzero(arr == 0.0))
    sig = _significand_array(arr, b)
    digits = sig.astype(np.int64)
    binned = np.bincount(digits, minlength=b)
    counts = {d: int(binned[d]) for d in range(1, b) if binned[d]}
    return DigitHistogram(base=b, counts=counts, zeros=zeros, total=total)


@dataclass(frozen=True)
class SignificandECDF:
    """Sorted nonzero significands of a sample, ready for sup-distance."""

    base: int
    values: np.ndarray  # sorted, each in [1, base)

    @classmethod
    def from_samples(cls, samples: Sequence[float] | np.ndarray, b: int = 10) -> "SignificandECDF":
        b = validate_base(b)
        sig = _significand_array(np.asarray(samples, dtype=float), b)
        if sig.size == 0:
            raise UsageError("need at least one nonzero sample")
        sig.sort()
        return cls(base=b, values=sig)

    @classmethod
    def from_significands(cls, sig: np.ndarray, b: int = 10) -> "SignificandECDF":
        b = validate_base(b)
        sig = np.asarray(sig, dtype=float)
        if sig.size == 0:
            raise UsageError("need at least one nonzero sample")
        if np.any(sig < 1.0) or np.any(sig >= b):
            raise DomainError("significands must lie in [1, base)")
        sig = np.sort(sig)
        return cls(base=b, values=sig)

    def sup_distance(self) -> float:
        """Sup over s of |ECDF(s) - log_b s|, attained at the jump points.

        Both one-sided gaps at every jump are checked, as for a
        one-sample Kolmogorov-Smirnov statistic against log_b.
        """
        n = self.values.size
        target = np.log(self.values) / math.log(self.base)
        upper = np.arange(1, n + 1) / n - target
        lower = target - np.arange(0, n) / n
        return float(max(upper.max(), lower.max()))


def empirical_distance(samples: Sequence[float] | np.ndarray, b: int = 10) -> float:
    """Sup-distance of the sample's significand ECDF from the log_b law.

    Exact zeros are excluded (they belong to the histogram, not the
    ECDF).  Raises UsageError when no nonzero sample remains.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise UsageError("empirical_distance requires a non-empty sample")
    return SignificandECDF.from_samples(arr, b).sup_distance()
