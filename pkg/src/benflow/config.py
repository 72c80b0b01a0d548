"""Run configuration: verdict thresholds, numerical tolerances, defaults.

Thresholds are data, not code: every statistic compared against a cutoff
reads the cutoff from these records so that callers (and the CLI config
file) can tighten or relax them without touching the analysis modules.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import UsageError


@dataclass(frozen=True)
class VerdictThresholds:
    """Cutoffs applied when turning statistics into a pass/fail verdict.

    distance: max sup-distance of the significand ECDF for a PASS.
    weyl_multiplier: PASS requires every Weyl magnitude < multiplier/sqrt(N).
    fail_factor: a statistic above factor*threshold forces a clean FAIL;
        the band in between is inconclusive (reported as FAIL with a flag).
    zero_rel: samples with |f| below zero_rel times the running max of |f|
        are excluded from the statistics and counted separately.
    """

    distance: float = 0.02
    weyl_multiplier: float = 3.0
    fail_factor: float = 2.0
    zero_rel: float = 1e-13


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances for the linear-algebra kernels."""

    rank: float = 1e-10
    eigen_cluster: float = 1e-8
    hyperbolicity: float = 1e-9


@dataclass(frozen=True)
class RunConfig:
    base: int = 10
    horizon: float = 1e4
    step: float = 1e-2
    weyl_k: int = 5
    thresholds: VerdictThresholds = field(default_factory=VerdictThresholds)
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    output_format: str = "json"

    def __post_init__(self):
        if self.base < 2:
            raise UsageError(f"base must be >= 2, got {self.base}")
        if self.horizon <= 0 or self.step <= 0 or self.step >= self.horizon:
            raise UsageError("need 0 < step < horizon")
        if self.weyl_k < 1:
            raise UsageError("weyl_k must be >= 1")
        if self.output_format not in ("json", "csv"):
            raise UsageError(f"unknown output format {self.output_format!r}")


def load_config(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    """Read a JSON config file whose keys mirror RunConfig field names."""
    cfg = base or RunConfig()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(raw, dict):
        raise UsageError(f"config {path}: expected a JSON object")
    nested = {"thresholds": VerdictThresholds, "tolerances": Tolerances}
    updates: dict = {}
    for key, value in raw.items():
        if key in nested:
            if not isinstance(value, dict):
                raise UsageError(f"config {path}: {key} must be an object")
            current = getattr(cfg, key)
            unknown = set(value) - set(current.__dataclass_fields__)
            if unknown:
                raise UsageError(f"config {path}: unknown {key} keys {sorted(unknown)}")
            updates[key] = replace(current, **value)
        elif key in RunConfig.__dataclass_fields__:
            updates[key] = value
        else:
            raise UsageError(f"config {path}: unknown key {key!r}")
    return replace(cfg, **updates)
