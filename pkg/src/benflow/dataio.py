"""File formats: matrices, exact spectrum annotations, report emission.

Matrices arrive as CSV (one row per line) or JSON (a plain
array-of-arrays, or an object with a "matrix" key and an optional
"exact_spectrum" annotation).  The annotation assigns each eigenvalue
exact (re, im) coordinates over named symbols, which is the only way
float input can reach the exact resonance engine: the eigenvalues of a
float matrix carry no exact arithmetic by themselves.

Annotation schema:

    {
      "matrix": [[...], ...],
      "exact_spectrum": {
        "symbols": ["pi", "ln10", "pi*ln10^-1"],
        "atoms": {"myconst": 1.234},            # only for non-stock atoms
        "eigenvalues": [
          {"re": {"1": "1"}, "im": {"pi*ln10^-1": "2"}},
          ...
        ]
      }
    }

Symbols are monomial labels: atom names joined by '*', each optionally
carrying an integer '^exponent'.  Stock atoms are "pi" and "ln<b>";
anything else needs a value in "atoms".  Coordinates map symbol labels
to rationals written as integers or "p/q" strings.
"""
from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import UsageError
from .exactreal import ExactComplex, ExactReal, Monomial, ONE, SymbolBasis


def parse_monomial_label(label: str) -> Monomial:
    label = label.strip()
    if label == "1":
        return ONE
    powers = {}
    for part in label.split("*"):
        part = part.strip()
        if "^" in part:
            atom, _, exp = part.partition("^")
            try:
                powers[atom.strip()] = powers.get(atom.strip(), 0) + int(exp)
            except ValueError:
                raise UsageError(f"bad exponent in symbol {label!r}") from None
        elif part:
            powers[part] = powers.get(part, 0) + 1
        else:
            raise UsageError(f"bad symbol label {label!r}")
    return Monomial.of(**powers)


def _stock_atom_value(atom: str) -> float | None:
    if atom == "pi":
        return math.pi
    if atom.startswith("ln") and atom[2:].isdigit():
        return math.log(int(atom[2:]))
    return None


def parse_exact_spectrum(annotation: dict) -> list[ExactComplex]:
    """Build the annotated eigenvalue set over a basis derived from it."""
    if not isinstance(annotation, dict) or "eigenvalues" not in annotation:
        raise UsageError("exact_spectrum must be an object with an 'eigenvalues' list")
    symbol_labels = annotation.get("symbols", [])
    monomials = [parse_monomial_label(s) for s in symbol_labels]
    declared = {str(k): float(v) for k, v in annotation.get("atoms", {}).items()}
    atom_values: dict[str, float] = {}
    for mono in monomials:
        for atom, _ in mono.powers:
            if atom in atom_values:
                continue
            value = declared.get(atom, _stock_atom_value(atom))
            if value is None:
                raise UsageError(f"atom {atom!r} needs a numeric value in 'atoms'")
            atom_values[atom] = value
    basis = SymbolBasis(symbols=(ONE,), atom_values=tuple(sorted(atom_values.items())))
    basis = basis.extended(*monomials)

    def coords(obj) -> ExactReal:
        if not isinstance(obj, dict):
            raise UsageError("eigenvalue coordinates must be objects")
        terms = {}
        for label, raw in obj.items():
            mono = parse_monomial_label(label)
            try:
                value = Fraction(raw) if isinstance(raw, str) else Fraction(raw)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"bad rational coordinate {raw!r}") from None
            terms[mono] = value
        return basis.combination(terms)

    out = []
    for entry in annotation["eigenvalues"]:
        if not isinstance(entry, dict):
            raise UsageError("each eigenvalue must be an object with re/im")
        out.append(ExactComplex(coords(entry.get("re", {})), coords(entry.get("im", {}))))
    return out


def load_matrix(path: str | Path) -> tuple[np.ndarray, dict | None]:
    """Read a matrix file; returns (matrix, exact annotation or None)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip()[:1] in "[{":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(
                f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}"
            ) from exc
        if isinstance(data, dict):
            if "matrix" not in data:
                raise UsageError(f"{path}: object form needs a 'matrix' key")
            raw, annotation = data["matrix"], data.get("exact_spectrum")
        else:
            raw, annotation = data, None
        try:
            matrix = np.asarray(raw, dtype=float)
        except (TypeError, ValueError):
            raise UsageError(f"{path}: matrix entries must be numbers") from None
        _check_square(matrix, path)
        return matrix, annotation
    rows = []
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            rows.append([float(c) for c in row])
        except ValueError as exc:
            raise UsageError(f"{path}: line {lineno}: non-numeric entry ({exc})") from None
    if not rows:
        raise UsageError(f"{path}: empty matrix file")
    matrix = np.asarray(rows, dtype=float)
    _check_square(matrix, path)
    return matrix, None


def _check_square(matrix: np.ndarray, path) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise UsageError(f"{path}: matrix must be square, got shape {matrix.shape}")


def fixture_text(name: str) -> str:
    """Contents of a packaged annotated-matrix fixture."""
    ref = resources.files("benflow") / "fixtures" / name
    try:
        return ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        available = sorted(p.name for p in (resources.files("benflow") / "fixtures").iterdir())
        raise UsageError(f"no fixture {name!r}; available: {available}") from None


def write_digit_csv(path: str | Path, histogram, pmf) -> None:
    """Per-digit observed vs target frequencies, for plotting."""
    freqs = histogram.frequencies()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["digit", "observed", "target"])
        for digit in range(1, histogram.base):
            writer.writerow([digit, f"{freqs[digit - 1]:.10g}", f"{pmf[digit - 1]:.10g}"])


def write_ecdf_csv(path: str | Path, quantiles, base: int) -> None:
    """Significand ECDF quantiles vs the log_b target, for plotting."""
    n = len(quantiles)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["significand", "ecdf", "target"])
        for i, s in enumerate(quantiles):
            writer.writerow(
                [f"{s:.10g}", f"{(i + 1) / n:.10g}", f"{math.log(s) / math.log(base):.10g}"]
            )
