"""Signals from linear flows and their Benford verdicts.

A signal is one of: a linear observable applied to e^{tA}, a matrix
norm of e^{tA}, or a synthetic mode sum e^{rt} t^k sum_j u_j cos(w_j t).
Verdicts sample log_b|f| over a uniform grid (never |f| itself, which
overflows long before interesting horizons), exclude near-zero
samples, and combine the significand sup-distance with Weyl magnitudes
of the log under the configured thresholds.

Sampling uses the eigendecomposition of the generator: with r the
spectral abscissa, e^{tA} e^{-rt} = e^{t(A - rI)} stays bounded, so
log|f| = r t + log|shifted signal| is computed without overflow.  A
matrix-power stepping fallback covers defective generators.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import VerdictThresholds
from .errors import DomainError, SignalOverflowError, UnsupportedStructureError, UsageError
from .matrixcore import as_square_matrix, expm, spectrum
from .significand import DigitHistogram, SignificandECDF, validate_base
from .udmod1 import SamplingGrid, WeylReport, cud_report

_EIG_COND_LIMIT = 1e8
_CHUNK = 200_000

VERDICT_PASS = "BENFORD_PASS"
VERDICT_FAIL = "FAIL"
VERDICT_TRIVIAL = "TRIVIAL"


@dataclass(frozen=True)
class Observable:
    """Linear functional on matrices: H(A) = sum_{jk} c_jk A_jk."""

    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", as_square_matrix(self.c))

    def __call__(self, a: np.ndarray) -> float:
        return float(np.sum(self.c * a))

    @classmethod
    def entry(cls, i: int, j: int, d: int) -> "Observable":
        c = np.zeros((d, d))
        c[i, j] = 1.0
        return cls(c)


@dataclass(frozen=True)
class ObservableOnFlow:
    generator: np.ndarray
    observable: Observable

    def __post_init__(self):
        a = as_square_matrix(self.generator)
        object.__setattr__(self, "generator", a)
        if self.observable.c.shape != a.shape:
            raise UsageError("observable and generator dimensions differ")


_NORMS = ("spectral", "frobenius", "max")


@dataclass(frozen=True)
class NormOnFlow:
    generator: np.ndarray
    norm: str = "spectral"

    def __post_init__(self):
        object.__setattr__(self, "generator", as_square_matrix(self.generator))
        if self.norm not in _NORMS:
            raise UsageError(f"norm must be one of {_NORMS}, got {self.norm!r}")


@dataclass(frozen=True)
class Synthetic:
    """Closed-form mode sum e^{rt} t^k sum_j weight_j cos(omega_j t)."""

    r: float
    k: int
    modes: tuple[tuple[float, float], ...]  # (omega, weight)

    def __post_init__(self):
        if self.k < 0:
            raise UsageError("polynomial order k must be >= 0")
        omegas = [w for w, _ in self.modes]
        if len(set(omegas)) != len(omegas):
            raise UsageError("mode frequencies must be distinct")
        if any(w < 0 for w in omegas):
            raise UsageError("mode frequencies must be >= 0")
        if not any(u != 0.0 for _, u in self.modes):
            raise UsageError("at least one mode weight must be nonzero")


SignalSpec = ObservableOnFlow | NormOnFlow | Synthetic


# ---------------------------------------------------------------------------
# direct evaluation


def _matrix_norm(m: np.ndarray, kind: str) -> float:
    if kind == "spectral":
        return float(np.linalg.norm(m, 2))
    if kind == "frobenius":
        return float(np.linalg.norm(m, "fro"))
    return float(np.max(np.abs(m)))


def eval_signal(spec: SignalSpec, t: float) -> float:
    """Evaluate the signal at one time point (direct, overflow-checked)."""
    if not math.isfinite(t):
        raise DomainError(f"time must be finite, got {t}")
    if isinstance(spec, Synthetic):
        acc = math.fsum(u * math.cos(w * t) for w, u in spec.modes)
        return math.exp(spec.r * t) * t**spec.k * acc
    if isinstance(spec, ObservableOnFlow):
        return spec.observable(expm(spec.generator, t))
    return _matrix_norm(expm(spec.generator, t), spec.norm)


_FROBENIUS_EXAMPLE_ALPHA = math.log(10) - 0.5


def frobenius_example_generator() -> np.ndarray:
    """Fixed 3x3 reference generator: a spiral block plus a real mode."""
    a = _FROBENIUS_EXAMPLE_ALPHA
    return np.array([[1.0, -math.pi, 0.0], [math.pi, 1.0, 0.0], [0.0, 0.0, a]])


def frobenius_norm_signal_3x3_example(t) -> np.ndarray | float:
    """Closed form sqrt(2 e^{2t} + e^{2 a t}) of the reference flow's
    Frobenius norm, with a = ln 10 - 1/2."""
    a = _FROBENIUS_EXAMPLE_ALPHA
    t_arr = np.asarray(t, dtype=float)
    out = np.sqrt(2.0 * np.exp(2.0 * t_arr) + np.exp(2.0 * a * t_arr))
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# triviality and observable construction


def triviality_check(a: np.ndarray, obs: Observable, tol: float = 1e-12) -> bool:
    """True iff the signal H(e^{tA}) vanishes identically.

    By Cayley-Hamilton this reduces to H(A^j) = 0 for j = 0..d-1,
    checked against tol times the largest power norm.
    """
    a = as_square_matrix(a)
    d = a.shape[0]
    power = np.eye(d)
    values, scales = [], []
    for _ in range(d):
        values.append(abs(obs(power)))
        scales.append(float(np.linalg.norm(power)))
        power = power @ a
    scale = max(scales)
    return all(v <= tol * scale for v in values)


def build_observable_for_modes(
    a: np.ndarray, modes: Sequence[complex], weights: Sequence[float], *, tol: float = 1e-8
) -> Observable:
    """An observable whose signal is sum_z u_z e^{t Re z} cos(t Im z).

    Each requested mode must be a simple eigenvalue (multiplicity one,
    no Jordan block), given as the Im >= 0 representative of its
    conjugate pair.  Built from the real and imaginary eigenvector
    parts; defective or clustered modes are rejected.
    """
    a = as_square_matrix(a)
    if len(modes) != len(weights):
        raise UsageError("need one weight per mode")
    if not modes:
        raise UsageError("need at least one mode")
    info = spectrum(a, tol)
    eigvals, eigvecs = np.linalg.eig(a)
    scale = max(float(np.linalg.norm(a)), 1e-300)
    c = np.zeros_like(a)
    for mode, u in zip(modes, weights):
        mode = complex(mode)
        if mode.imag < 0:
            raise UsageError("modes must be the Im >= 0 representative of each pair")
        matches = [p for p in info.points if abs(p.z - mode) <= 10 * tol * scale]
        if not matches:
            raise DomainError(f"{mode} is not an eigenvalue of the generator")
        point = min(matches, key=lambda p: abs(p.z - mode))
        if point.m != 1 or point.k != 0:
            raise UnsupportedStructureError(
                f"mode {mode} is defective or clustered (m={point.m}, k={point.k})"
            )
        idx = int(np.argmin(np.abs(eigvals - point.z)))
        w = eigvecs[:, idx]
        if abs(point.z.imag) <= tol * scale:
            # real simple mode: rotate the (possibly complex-scaled) vector real
            pivot = w[int(np.argmax(np.abs(w)))]
            v = (w / pivot).real
            v_tilde = v
        else:
            # A w = z w with w = v + i v~ gives the planar rotation pair
            v = w.real
            v_tilde = w.imag
        rows = np.vstack([v, v_tilde])
        rhs = np.array([u / 2.0, u / 2.0])
        g, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
        c = c + np.outer(g, v + v_tilde)
    return Observable(c)


# ---------------------------------------------------------------------------
# log-domain sampling


@dataclass(frozen=True)
class _LogSample:
    """log_b|f| over the grid; -inf marks exact zeros."""

    values: np.ndarray
    truncated_at: float | None = None


class _FlowModes:
    """Eigendecomposition of a generator, cached for repeated sampling.

    Exposes per-time mode factors e^{(lambda_j - r) t} so that signal
    and norm sampling stay bounded; `weights(c)` turns an observable
    coefficient matrix into mode weights.
    """

    def __init__(self, a: np.ndarray):
        self.a = as_square_matrix(a)
        lam, vecs = np.linalg.eig(self.a)
        self.lam = lam
        self.v = vecs
        self.r = float(lam.real.max())
        try:
            self.vinv = np.linalg.inv(vecs)
            self.cond = float(np.linalg.cond(vecs))
        except np.linalg.LinAlgError:
            self.vinv = None
            self.cond = math.inf
        self.diagonalizable = self.cond < _EIG_COND_LIMIT

    def weights(self, c: np.ndarray) -> np.ndarray:
        """Mode weights w_j with H(e^{tA}) = sum_j w_j e^{lambda_j t}."""
        return np.einsum("aj,ab,jb->j", self.v, c, self.vinv)

    def shifted_modes(self, times: np.ndarray) -> np.ndarray:
        """Matrix of e^{(lambda_j - r) t} values, shape (len(times), d)."""
        return np.exp(np.outer(times, self.lam - self.r))


def _logb_observable(flow: ObservableOnFlow, grid: SamplingGrid, b: int) -> _LogSample:
    modes = _FlowModes(flow.generator)
    times = grid.times()
    lnb = math.log(b)
    if modes.diagonalizable:
        w = modes.weights(flow.observable.c)
        out = np.empty(times.size)
        for lo in range(0, times.size, _CHUNK):
            chunk = times[lo : lo + _CHUNK]
            vals = (modes.shifted_modes(chunk) @ w).real
            with np.errstate(divide="ignore"):
                out[lo : lo + _CHUNK] = np.log(np.abs(vals)) / lnb
        out += (modes.r / lnb) * times
        return _LogSample(out)
    return _stepping_logb(flow.generator, grid, b, lambda m: flow.observable(m))


def _logb_norm(flow: NormOnFlow, grid: SamplingGrid, b: int) -> _LogSample:
    modes = _FlowModes(flow.generator)
    times = grid.times()
    lnb = math.log(b)
    if modes.diagonalizable:
        out = np.empty(times.size)
        for lo in range(0, times.size, _CHUNK):
            chunk = times[lo : lo + _CHUNK]
            diag = modes.shifted_modes(chunk)  # (n, d)
            mats = np.einsum("ij,nj,jk->nik", modes.v, diag, modes.vinv).real
            out[lo : lo + _CHUNK] = np.log(_batched_norm(mats, flow.norm)) / lnb
        out += (modes.r / lnb) * times
        return _LogSample(out)
    return _stepping_logb(flow.generator, grid, b, lambda m: _matrix_norm(m, flow.norm))


def _batched_norm(mats: np.ndarray, kind: str) -> np.ndarray:
    if kind == "frobenius":
        return np.sqrt(np.sum(mats**2, axis=(1, 2)))
    if kind == "max":
        return np.max(np.abs(mats), axis=(1, 2))
    if mats.shape[1] == 2:
        # closed form for 2x2: largest singular value from F-norm and det
        f2 = np.sum(mats**2, axis=(1, 2))
        det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
        gap = np.sqrt(np.maximum(f2**2 - 4.0 * det**2, 0.0))
        return np.sqrt((f2 + gap) / 2.0)
    return np.linalg.svd(mats, compute_uv=False)[:, 0]


def _stepping_logb(a: np.ndarray, grid: SamplingGrid, b: int, functional) -> _LogSample:
    """Fallback for defective generators: walk e^{(A - rI) step} along the grid.

    The shifted propagator grows at most polynomially, so overflow can
    only come from extreme Jordan structure; if it does, the horizon is
    truncated and reported.
    """
    r = float(np.linalg.eigvals(a).real.max())
    d = a.shape[0]
    step_mat = expm(a - r * np.eye(d), grid.step)
    times = grid.times()
    lnb = math.log(b)
    out = np.full(times.size, -np.inf)
    current = expm(a - r * np.eye(d), grid.offset) if grid.offset else np.eye(d)
    truncated_at = None
    with np.errstate(over="ignore", invalid="ignore"):
        for i, t in enumerate(times):
            current = current @ step_mat
            if not np.all(np.isfinite(current)):
                truncated_at = float(t)
                out = out[:i]
                break
            value = functional(current)
            out[i] = -np.inf if value == 0.0 else math.log(abs(value)) / lnb
    out = out + (r / lnb) * times[: out.size]
    return _LogSample(out, truncated_at=truncated_at)


def _logb_synthetic(spec: Synthetic, grid: SamplingGrid, b: int) -> _LogSample:
    times = grid.times()
    acc = np.zeros(times.size)
    for omega, u in spec.modes:
        acc += u * np.cos(omega * times)
    lnb = math.log(b)
    with np.errstate(divide="ignore"):
        out = (spec.r * times + spec.k * np.log(times) + np.log(np.abs(acc))) / lnb
    return _LogSample(out)


def sample_log_signal(spec: SignalSpec, grid: SamplingGrid, b: int = 10) -> _LogSample:
    """log_b|f(t)| over the grid, computed without forming |f| itself."""
    b = validate_base(b)
    if isinstance(spec, Synthetic):
        return _logb_synthetic(spec, grid, b)
    if isinstance(spec, ObservableOnFlow):
        return _logb_observable(spec, grid, b)
    if isinstance(spec, NormOnFlow):
        return _logb_norm(spec, grid, b)
    raise UsageError(f"unknown signal spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class BenfordReport:
    """Outcome of an empirical conformance check for one signal."""

    base: int
    horizon: float
    step: float
    verdict: str
    inconclusive: bool
    significand_distance: float | None
    digit_histogram: DigitHistogram | None
    weyl: WeylReport | None
    excluded_sample_count: int
    sample_count: int
    thresholds: VerdictThresholds
    truncated_at: float | None = None
    # downsampled sorted significands for ECDF plot emission; not serialized
    ecdf_quantiles: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.verdict not in (VERDICT_PASS, VERDICT_FAIL, VERDICT_TRIVIAL):
            raise UsageError(f"unknown verdict {self.verdict!r}")
        if self.verdict == VERDICT_TRIVIAL and self.significand_distance is not None:
            raise UsageError("trivial verdicts carry no statistics")

    def to_dict(self) -> dict:
        out = {
            "base": self.base,
            "horizon": self.horizon,
            "step": self.step,
            "verdict": self.verdict,
            "inconclusive": self.inconclusive,
            "significand_distance": self.significand_distance,
            "digit_counts": dict(sorted(self.digit_histogram.counts.items())) if self.digit_histogram else None,
            "zeros": self.digit_histogram.zeros if self.digit_histogram else None,
            "weyl_magnitudes": {str(k): v for k, v in sorted(self.weyl.magnitudes.items())} if self.weyl else None,
            "excluded_sample_count": self.excluded_sample_count,
            "sample_count": self.sample_count,
            "thresholds": {
                "distance": self.thresholds.distance,
                "weyl_multiplier": self.thresholds.weyl_multiplier,
                "fail_factor": self.thresholds.fail_factor,
                "zero_rel": self.thresholds.zero_rel,
            },
            "truncated_at": self.truncated_at,
        }
        return out


def _verdict_from_logb(
    logb: np.ndarray,
    b: int,
    horizon: float,
    step: float,
    thresholds: VerdictThresholds,
    K: int,
    truncated_at: float | None,
) -> BenfordReport:
    total = logb.size
    finite = np.isfinite(logb)
    guarded = np.where(finite, logb, -np.inf)
    running_max = np.maximum.accumulate(guarded)
    cutoff = math.log(thresholds.zero_rel) / math.log(b)
    keep = finite & (guarded >= running_max + cutoff)
    excluded = int(total - keep.sum())
    if not keep.any():
        return BenfordReport(
            base=b,
            horizon=horizon,
            step=step,
            verdict=VERDICT_TRIVIAL,
            inconclusive=False,
            significand_distance=None,
            digit_histogram=None,
            weyl=None,
            excluded_sample_count=excluded,
            sample_count=total,
            thresholds=thresholds,
            truncated_at=truncated_at,
        )
    kept = logb[keep]
    frac = kept - np.floor(kept)
    sig = np.clip(np.power(float(b), frac), 1.0, math.nextafter(float(b), 1.0))
    ecdf = SignificandECDF.from_significands(sig, b)
    distance = ecdf.sup_distance()
    digits = sig.astype(np.int64)
    binned = np.bincount(digits, minlength=b)
    hist = DigitHistogram(base=b, counts={d: int(binned[d]) for d in range(1, b) if binned[d]}, zeros=0, total=int(kept.size))
    weyl = cud_report(kept, K)
    stride = max(1, ecdf.values.size // 512)
    quantiles = tuple(float(x) for x in ecdf.values[stride - 1 :: stride])
    floor = weyl.noise_floor(thresholds.weyl_multiplier)
    max_mag = weyl.max_magnitude
    dist_ok = distance < thresholds.distance
    weyl_ok = max_mag < floor
    if dist_ok and weyl_ok:
        verdict, inconclusive = VERDICT_PASS, False
    elif distance > thresholds.fail_factor * thresholds.distance or max_mag > thresholds.fail_factor * floor:
        verdict, inconclusive = VERDICT_FAIL, False
    else:
        verdict, inconclusive = VERDICT_FAIL, True
    return BenfordReport(
        base=b,
        horizon=horizon,
        step=step,
        verdict=verdict,
        inconclusive=inconclusive,
        significand_distance=distance,
        digit_histogram=hist,
        weyl=weyl,
        excluded_sample_count=excluded,
        sample_count=total,
        thresholds=thresholds,
        truncated_at=truncated_at,
        ecdf_quantiles=quantiles,
    )


def benford_verdict(
    spec: SignalSpec,
    b: int = 10,
    grid: SamplingGrid | None = None,
    thresholds: VerdictThresholds | None = None,
    K: int = 5,
) -> BenfordReport:
    """Sample the signal on the grid and judge its conformance."""
    b = validate_base(b)
    grid = grid or SamplingGrid(T=1e4, step=1e-2)
    thresholds = thresholds or VerdictThresholds()
    sample = sample_log_signal(spec, grid, b)
    return _verdict_from_logb(
        sample.values, b, grid.T, grid.step, thresholds, K, sample.truncated_at
    )


def benford_report_from_samples(
    values: Sequence[float] | np.ndarray,
    b: int = 10,
    thresholds: VerdictThresholds | None = None,
    K: int = 5,
) -> BenfordReport:
    """Verdict for externally supplied signal values (e.g. CSV data)."""
    b = validate_base(b)
    thresholds = thresholds or VerdictThresholds()
    arr = np.asarray(values, dtype=float)
    if arr.size < 100:
        raise UsageError("need at least 100 samples for a verdict")
    if not np.all(np.isfinite(arr)):
        raise DomainError("signal values must be finite")
    with np.errstate(divide="ignore"):
        logb = np.log(np.abs(arr)) / math.log(b)
    return _verdict_from_logb(logb, b, float(arr.size), 1.0, thresholds, K, None)


def benford_report_from_log_samples(
    logb_values: Sequence[float] | np.ndarray,
    b: int = 10,
    thresholds: VerdictThresholds | None = None,
    K: int = 5,
    *,
    horizon: float | None = None,
    step: float | None = None,
) -> BenfordReport:
    """Verdict for a signal supplied directly as log_b|f| samples.

    The entry point for closed-form fixtures whose raw values overflow;
    -inf entries mark exact zeros.
    """
    b = validate_base(b)
    thresholds = thresholds or VerdictThresholds()
    arr = np.asarray(logb_values, dtype=float)
    if arr.size < 100:
        raise UsageError("need at least 100 samples for a verdict")
    if np.any(np.isnan(arr)) or np.any(arr == np.inf):
        raise DomainError("log samples must be finite or -inf")
    return _verdict_from_logb(
        arr, b, horizon if horizon is not None else float(arr.size), step or 1.0, thresholds, K, None
    )


def load_signal_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column (t, value) CSV; a single header row is tolerated."""
    times, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise UsageError(f"{path}: line {lineno}: expected two columns")
            try:
                t, v = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1:  # header
                    continue
                raise UsageError(f"{path}: line {lineno}: non-numeric row {row[:2]}") from None
            times.append(t)
            values.append(v)
    if not times:
        raise UsageError(f"{path}: no data rows")
    return np.asarray(times), np.asarray(values)
