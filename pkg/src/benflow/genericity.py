"""Monte Carlo census of resonance-like events over random matrices.

Exponential resonance of a spectrum requires either an eigenvalue on
the imaginary axis, or a rational relation tying real parts to scaled
imaginary parts.  Both events confine the matrix to a measure-zero
set, so a continuous ensemble should essentially never hit them at
tight tolerances, while small discrete ensembles (integer entries) hit
them easily.  The census counts three proxies per sampled matrix:
imaginary-axis proximity, eigenvalue-collision proximity (the
multiple-eigenvalue nullset), and advisory integer relations found by
the numeric scan.

Sampling is counter-based (Philox4x64 keyed by the seed, one counter
block per index), so any census entry can be regenerated in isolation
and reports are bit-reproducible.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .matrixcore import as_square_matrix
from .resonance import numeric_relation_scan
from .significand import validate_base

_RNG_ALGORITHM = "philox4x64"
_DISTRIBUTIONS = ("gaussian", "uniform")
_INT_PATTERN = re.compile(r"^int(\d+)$")


@dataclass(frozen=True)
class EnsembleSpec:
    """A reproducible random-matrix ensemble.

    distribution is 'gaussian' (standard normal entries), 'uniform'
    (entries uniform on (-1, 1)), or 'int<m>' (integer entries uniform
    on -m..m).
    """

    d: int
    distribution: str
    N: int
    seed: int

    def __post_init__(self):
        if self.d < 1:
            raise UsageError("dimension must be >= 1")
        if self.N < 1:
            raise UsageError("sample count must be >= 1")
        if self.distribution not in _DISTRIBUTIONS and not _INT_PATTERN.match(self.distribution):
            raise UsageError(
                f"unknown distribution {self.distribution!r}; "
                "use 'gaussian', 'uniform', or 'int<m>'"
            )

    @property
    def int_bound(self) -> int | None:
        m = _INT_PATTERN.match(self.distribution)
        return int(m.group(1)) if m else None


def sample_generator(spec: EnsembleSpec, index: int) -> np.ndarray:
    """The index-th matrix of the ensemble; deterministic in (seed, index)."""
    if not 0 <= index < spec.N:
        raise UsageError(f"index {index} outside 0..{spec.N - 1}")
    bitgen = np.random.Philox(key=spec.seed, counter=[0, index, 0, 0])
    rng = np.random.Generator(bitgen)
    shape = (spec.d, spec.d)
    if spec.distribution == "gaussian":
        return rng.standard_normal(shape)
    if spec.distribution == "uniform":
        return rng.uniform(-1.0, 1.0, shape)
    m = spec.int_bound
    return rng.integers(-m, m + 1, size=shape).astype(float)


def discriminant_proxy(a: np.ndarray, tol: float = 1e-8) -> bool:
    """True when two computed eigenvalues are within tol of each other."""
    if tol <= 0:
        raise UsageError("tolerance must be positive")
    a = as_square_matrix(a)
    if a.shape[0] == 1:
        return False
    eigs = np.linalg.eigvals(a)
    gaps = np.abs(eigs[:, None] - eigs[None, :])
    np.fill_diagonal(gaps, np.inf)
    return bool(gaps.min() <= tol)


def characteristic_polynomial(a: np.ndarray) -> list[Fraction]:
    """Monic characteristic polynomial coefficients, exactly.

    Faddeev-LeVerrier over Fractions; entries must be exactly
    representable (integers or dyadics), which is what the discrete
    ensembles produce.  Returns [1, c1, ..., cd] for z^d + c1 z^{d-1} + ...
    """
    a = as_square_matrix(a)
    d = a.shape[0]
    exact = [[Fraction(float(a[i, j])) for j in range(d)] for i in range(d)]

    def mat_mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(d)) for j in range(d)] for i in range(d)]

    def mat_add_diag(x, c):
        return [[x[i][j] + (c if i == j else 0) for j in range(d)] for i in range(d)]

    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * d for _ in range(d)]
    for k in range(1, d + 1):
        m = mat_mul(exact, mat_add_diag(m, coeffs[-1]))
        trace = sum(m[i][i] for i in range(d))
        coeffs.append(-trace / k)
    return coeffs


def exact_discriminant(a: np.ndarray) -> Fraction:
    """Discriminant of the characteristic polynomial, exact, for d <= 4.

    Zero iff the matrix has a multiple eigenvalue; implemented as the
    resultant of p and p' via a Sylvester determinant over Fractions.
    """
    a = as_square_matrix(a)
    d = a.shape[0]
    if d > 4:
        raise UsageError("exact discriminant offered only for d <= 4")
    if d == 1:
        return Fraction(1)
    p = characteristic_polynomial(a)
    dp = [c * (d - i) for i, c in enumerate(p[:-1])]
    n, m = len(p) - 1, len(dp) - 1
    size = n + m
    syl = [[Fraction(0)] * size for _ in range(size)]
    for i in range(m):
        for j, c in enumerate(p):
            syl[i][i + j] = c
    for i in range(n):
        for j, c in enumerate(dp):
            syl[m + i][i + j] = c
    det = _exact_det(syl)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * det


def _exact_det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    rows = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                factor = rows[r][col] * inv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


@dataclass(frozen=True)
class CensusReport:
    """Aggregated counts over one ensemble."""

    ensemble: EnsembleSpec
    base: int
    tol: float
    height: int
    imaginary_axis_hits: int
    multiple_eigenvalue_hits: int
    relation_hits: int
    rng_algorithm: str = _RNG_ALGORITHM

    def __post_init__(self):
        for name in ("imaginary_axis_hits", "multiple_eigenvalue_hits", "relation_hits"):
            if not 0 <= getattr(self, name) <= self.ensemble.N:
                raise UsageError(f"{name} outside 0..N")

    def to_dict(self) -> dict:
        return {
            "n": self.ensemble.N,
            "imaginary_axis_hits": self.imaginary_axis_hits,
            "multiple_eigenvalue_hits": self.multiple_eigenvalue_hits,
            "relation_hits": self.relation_hits,
            "tol": self.tol,
            "height": self.height,
            "seed": self.ensemble.seed,
            "ensemble": self.ensemble.distribution,
            "dim": self.ensemble.d,
            "base": self.base,
            "rng_algorithm": self.rng_algorithm,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def resonance_census(
    spec: EnsembleSpec, b: int = 10, tol: float = 1e-8, height: int = 8
) -> CensusReport:
    """Count resonance proxies over the ensemble.

    Per matrix: an imaginary-axis hit when min |Re z| <= tol, a
    multiple-eigenvalue hit when some eigenvalue gap is <= tol, and a
    relation hit when the advisory numeric scan finds an integer
    relation at the given height.  Indices are processed in order, so
    identical inputs give identical reports.
    """
    b = validate_base(b)
    if tol <= 0:
        raise UsageError("tolerance must be positive")
    if height < 1:
        raise UsageError("height must be >= 1")
    axis_hits = 0
    multiple_hits = 0
    relation_hits = 0
    for index in range(spec.N):
        a = sample_generator(spec, index)
        eigs = np.linalg.eigvals(a)
        if np.abs(eigs.real).min() <= tol:
            axis_hits += 1
        if spec.d > 1:
            gaps = np.abs(eigs[:, None] - eigs[None, :])
            np.fill_diagonal(gaps, np.inf)
            if gaps.min() <= tol:
                multiple_hits += 1
        if numeric_relation_scan(eigs.tolist(), b, height) is not None:
            relation_hits += 1
    return CensusReport(
        ensemble=spec,
        base=b,
        tol=tol,
        height=height,
        imaginary_axis_hits=axis_hits,
        multiple_eigenvalue_hits=multiple_hits,
        relation_hits=relation_hits,
    )


def enumerate_integer_support(d: int, bound: int):
    """All integer matrices with entries in -bound..bound (test oracle)."""
    entries = range(-bound, bound + 1)
    for combo in itertools.product(entries, repeat=d * d):
        yield np.array(combo, dtype=float).reshape(d, d)
