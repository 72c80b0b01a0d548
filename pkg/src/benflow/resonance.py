"""Exact decisions about spectral resonance with respect to a base b.

Two notions are decided over exact rational coordinates:

* shell nonresonance of a set on circles |z| = r: pairwise argument
  differences (in turns) may be rational only when zero, and log_b(r)
  must avoid the rational span of the argument-difference set;
* exponential nonresonance of a spectrum-like set Z (conjugate-closed):
  for every z in Z, Re z must avoid the rational span of
  (ln b / pi) * Im w over the w in Z whose real part equals Re z
  exactly.  A violation is returned as an integer relation witness
  q * Re z = sum p_l * (ln b / pi) * Im w_l.

The multiplications by ln b / pi are carried out formally on symbol
monomials, so products like pi * (ln b)^-1 stay exact.  A companion
floating-point scan looks for integer relations numerically (PSLQ plus
a continued-fraction fast path); the scan is advisory only, absence of
a hit proves nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import DomainError, UsageError
from .exactreal import (
    ExactComplex,
    ExactReal,
    Monomial,
    SymbolBasis,
    membership_over_monomials,
    mul_symbol,
    span_membership,
)
from .significand import validate_base

__all__ = [
    "ShellPoint",
    "RelationWitness",
    "ResonanceVerdict",
    "IntegerRelation",
    "argument_difference_set",
    "span_membership",
    "is_b_nonresonant",
    "is_exp_b_nonresonant",
    "is_exp_nonresonant_algebraic",
    "numeric_relation_scan",
    "verify_exp_witness",
]


@dataclass(frozen=True)
class ShellPoint:
    """Exact polar data of one element for shell-resonance decisions.

    log_modulus is log_b|z| and turns is arg(z)/(2*pi); both must be
    supplied exactly by the caller, since neither is derivable from
    cartesian floats.
    """

    log_modulus: ExactReal
    turns: ExactReal

    def __post_init__(self):
        if self.log_modulus.basis != self.turns.basis:
            raise UsageError("shell point parts must share a basis")


def argument_difference_set(points: Sequence[ShellPoint]) -> list[ExactReal]:
    """The set {1 + turns(z) - turns(w)} over all ordered pairs.

    Always contains 1 (the diagonal pairs) and is closed under
    x -> 2 - x, because pairs appear in both orders.  Duplicates are
    removed; the order is deterministic in the input order.
    """
    out: list[ExactReal] = []
    seen: set[tuple] = set()
    for zi in points:
        for zj in points:
            delta = zi.turns.basis.rational(1) + zi.turns - zj.turns
            if delta.coords not in seen:
                seen.add(delta.coords)
                out.append(delta)
    return out


@dataclass(frozen=True)
class RelationWitness:
    """A rational relation certifying resonance.

    kind says which condition broke:
      - "argument-difference": a pair of shell points whose turns differ
        by the nonzero rational q-th part p/q;
      - "span-membership": q * target = sum p_l * generator_l with the
        generators listed in `elements`;
      - "zero-real-part": the target element lies on the imaginary axis
        (the empty rational combination).
    """

    kind: str
    q: int
    p: tuple[int, ...]
    target: object
    elements: tuple


@dataclass(frozen=True)
class ResonanceVerdict:
    resonant: bool
    witness: RelationWitness | None
    assumptions: tuple[str, ...]
    detail: str

    def __post_init__(self):
        if (self.witness is not None) and not self.resonant:
            raise UsageError("witness implies a resonant verdict")


def _coeffs_to_relation(coeffs: Sequence[Fraction]) -> tuple[int, list[int]]:
    """Clear denominators: coefficients rho_l become p_l / q."""
    q = 1
    for c in coeffs:
        q = q * c.denominator // math.gcd(q, c.denominator)
    return q, [int(c * q) for c in coeffs]


# ---------------------------------------------------------------------------
# shell (multiplicative) nonresonance


def is_b_nonresonant(points: Iterable[ShellPoint], b: int) -> ResonanceVerdict:
    """Decide shell nonresonance of a set given in exact polar form.

    Elements are grouped into shells by exact equality of log_b|z|;
    each nonempty shell must satisfy both defining conditions.
    """
    b = validate_base(b)
    pts = list(points)
    if not pts:
        return ResonanceVerdict(False, None, (), "empty set is nonresonant")
    basis = pts[0].log_modulus.basis
    for p in pts:
        if p.log_modulus.basis != basis:
            raise UsageError("all shell points must share one symbol basis")
    assumptions = (basis.assumption(),)
    shells: dict[tuple, list[ShellPoint]] = {}
    for p in pts:
        shells.setdefault(p.log_modulus.coords, []).append(p)
    for coords, shell in shells.items():
        # (i) rational argument differences only when zero
        for i, zi in enumerate(shell):
            for zj in shell[i + 1 :]:
                diff = zi.turns - zj.turns
                if diff.is_rational and not diff.is_zero:
                    frac = diff.rational_part
                    return ResonanceVerdict(
                        True,
                        RelationWitness(
                            kind="argument-difference",
                            q=frac.denominator,
                            p=(frac.numerator,),
                            target=zi,
                            elements=(zi, zj),
                        ),
                        assumptions,
                        f"argument difference {frac} is a nonzero rational",
                    )
        # (ii) log-modulus against the span of the difference set
        deltas = argument_difference_set(shell)
        target = shell[0].log_modulus
        coeffs = span_membership(target, deltas)
        if coeffs is not None:
            q, p = _coeffs_to_relation(coeffs)
            involved = [i for i, c in enumerate(p) if c != 0]
            return ResonanceVerdict(
                True,
                RelationWitness(
                    kind="span-membership",
                    q=q,
                    p=tuple(p[i] for i in involved),
                    target=target,
                    elements=tuple(deltas[i] for i in involved),
                ),
                assumptions,
                "log-modulus lies in the rational span of the argument-difference set",
            )
    return ResonanceVerdict(False, None, assumptions, "every shell passed both conditions")


# ---------------------------------------------------------------------------
# exponential nonresonance


def _lnb_over_pi_times(x: ExactReal, b: int) -> dict[Monomial, Fraction]:
    factor = Monomial.of(pi=-1, **{f"ln{b}": 1})
    return mul_symbol(x.as_terms(), factor)


def _check_conjugate_closed(zs: Sequence[ExactComplex]) -> None:
    for z in zs:
        if not any(w.re.coords == z.re.coords and (w.im + z.im).is_zero for w in zs):
            raise UsageError(
                "set must be closed under complex conjugation for the "
                "exponential-resonance criterion to apply"
            )


def is_exp_b_nonresonant(zs: Iterable[ExactComplex], b: int) -> ResonanceVerdict:
    """Decide exponential nonresonance of a conjugate-closed exact set.

    Resonant exactly when some Re z is a rational combination of the
    numbers (ln b / pi) * Im w over elements w sharing that exact real
    part.  Elements on the imaginary axis are resonant outright (the
    empty combination).
    """
    b = validate_base(b)
    elements = list(zs)
    if not elements:
        return ResonanceVerdict(
            True, None, (), "empty set: no time rescaling can make it nonresonant"
        )
    basis = elements[0].basis
    for z in elements:
        if z.basis != basis:
            raise UsageError("all elements must share one symbol basis")
    _check_conjugate_closed(elements)
    assumptions = (basis.assumption(),)
    done: set[tuple] = set()
    for z in elements:
        key = z.re.coords
        if key in done:
            continue
        done.add(key)
        group = [w for w in elements if w.re.coords == key]
        if z.re.is_zero:
            return ResonanceVerdict(
                True,
                RelationWitness("zero-real-part", q=1, p=(), target=z, elements=()),
                assumptions,
                "an element lies on the imaginary axis",
            )
        gens = [_lnb_over_pi_times(w.im, b) for w in group]
        target = {m: c for m, c in z.re.as_terms().items()}
        coeffs = membership_over_monomials(target, gens)
        if coeffs is not None:
            q, p = _coeffs_to_relation(coeffs)
            involved = [i for i, c in enumerate(p) if c != 0]
            return ResonanceVerdict(
                True,
                RelationWitness(
                    kind="span-membership",
                    q=q,
                    p=tuple(p[i] for i in involved),
                    target=z,
                    elements=tuple(group[i] for i in involved),
                ),
                assumptions,
                "a real part lies in the rational span of its equal-Re scaled imaginary parts",
            )
    return ResonanceVerdict(False, None, assumptions, "no rational relation exists")


def verify_exp_witness(witness: RelationWitness, b: int) -> bool:
    """Substitute a span-membership witness back in exact arithmetic."""
    if witness.kind == "zero-real-part":
        return witness.target.re.is_zero
    if witness.kind != "span-membership" or not isinstance(witness.target, ExactComplex):
        raise UsageError("can only verify exponential span-membership witnesses")
    acc: dict[Monomial, Fraction] = {}
    for m, c in witness.target.re.as_terms().items():
        acc[m] = acc.get(m, Fraction(0)) + Fraction(witness.q) * c
    for coeff, w in zip(witness.p, witness.elements):
        for m, c in _lnb_over_pi_times(w.im, b).items():
            acc[m] = acc.get(m, Fraction(0)) - coeff * c
    return all(c == 0 for c in acc.values())


def is_exp_nonresonant_algebraic(zs: Iterable[complex], tol: float = 1e-12) -> bool:
    """Shortcut valid for sets of algebraic numbers: off the imaginary axis.

    The caller asserts algebraicity; tol guards the floating-point
    comparison of real parts against zero.
    """
    if tol <= 0:
        raise UsageError("tolerance must be positive")
    zs = list(zs)
    if not zs:
        return False
    return min(abs(complex(z).real) for z in zs) > tol


# ---------------------------------------------------------------------------
# advisory floating-point relation scan


@dataclass(frozen=True)
class IntegerRelation:
    """A numerically detected relation q*Re z = sum p_l * (ln b/pi) Im w_l."""

    q: int
    p: tuple[int, ...]
    target: complex
    elements: tuple[complex, ...]
    residual: float


_RESIDUAL_TOL = 1e-9


def _rational_fit(ratio: float, height: int) -> tuple[int, int] | None:
    """Best p/q approximation with q <= height; rejects |p| > height."""
    frac = Fraction(ratio).limit_denominator(height)
    if abs(frac.numerator) > height:
        return None
    return frac.numerator, frac.denominator


def _pslq_relation(values: list[mpmath.mpf], height: int) -> list[int] | None:
    try:
        rel = mpmath.pslq(values, maxcoeff=height, maxsteps=10000)
    except ValueError:
        return None
    return list(rel) if rel is not None else None


def numeric_relation_scan(
    zs: Iterable[complex], b: int, height: int = 8, *, group_tol: float = 1e-9
) -> IntegerRelation | None:
    """Search for integer relations among scaled spectrum coordinates.

    Elements are grouped by nearly-equal real part; duplicate
    generators (equal up to sign) are collapsed before searching, so
    coefficients are bounded per collapsed generator.  A returned
    relation has residual below 1e-9 after renormalization; None is
    advisory only and proves nothing.
    """
    b = validate_base(b)
    if height < 1:
        raise UsageError("height must be >= 1")
    if height > 10**6:
        raise UsageError("height is unreasonably large for a numeric scan")
    elements = sorted(set(complex(z) for z in zs), key=lambda z: (z.real, z.imag))
    if not elements:
        return None
    factor = math.log(b) / math.pi
    scale = max(max(abs(z.real), abs(z.imag) * factor) for z in elements)
    scale = max(scale, 1.0)
    groups: list[list[complex]] = []
    for z in elements:
        for g in groups:
            if abs(z.real - g[0].real) <= group_tol * scale:
                g.append(z)
                break
        else:
            groups.append([z])
    for group in groups:
        re = group[0].real
        # one generator per distinct |Im|, represented by the Im > 0 element
        gens: list[tuple[float, complex]] = []
        for w in sorted(group, key=lambda v: -v.imag):
            g = factor * w.imag
            if g == 0.0:
                continue
            if any(abs(abs(g) - abs(prev)) <= 1e-15 * scale for prev, _ in gens):
                continue
            gens.append((g, w))
        if not gens:
            if abs(re) < _RESIDUAL_TOL * scale:
                return IntegerRelation(q=1, p=(), target=group[0], elements=(), residual=abs(re))
            continue
        rel = _scan_group(re / scale, [g / scale for g, _ in gens], height)
        if rel is not None:
            q, p = rel
            residual = abs(q * re - sum(pi_ * g for pi_, (g, _) in zip(p, gens)))
            if residual < _RESIDUAL_TOL * scale:
                involved = [i for i, c in enumerate(p) if c != 0]
                return IntegerRelation(
                    q=q,
                    p=tuple(p[i] for i in involved),
                    target=group[0],
                    elements=tuple(gens[i][1] for i in involved),
                    residual=residual,
                )
    return None


def _scan_group(re: float, gens: list[float], height: int) -> tuple[int, list[int]] | None:
    """Relation q*re = sum p_l gens_l with all coefficients <= height."""
    if abs(re) < 1e-300:
        return 1, [0] * len(gens)
    if len(gens) == 1:
        fit = _rational_fit(re / gens[0], height)
        if fit is None:
            return None
        p, q = fit
        if abs(q * re - p * gens[0]) < _RESIDUAL_TOL:
            return q, [p]
        return None
    # multi-generator: PSLQ with elimination of relations not involving re
    with mpmath.workdps(50):
        values = [mpmath.mpf(re)] + [mpmath.mpf(g) for g in gens]
        active = list(range(len(gens)))
        for _ in range(len(gens)):
            rel = _pslq_relation(values, height)
            if rel is None:
                return None
            if rel[0] != 0:
                q = rel[0]
                p = [-c for c in rel[1:]]
                if q < 0:
                    q, p = -q, [-c for c in p]
                full = [0] * len(gens)
                for slot, coeff in zip(active, p):
                    full[slot] = coeff
                return q, full
            # drop one generator participating in the re-free relation
            drop = max(range(1, len(rel)), key=lambda i: abs(rel[i]))
            del values[drop]
            del active[drop - 1]
            if len(values) == 1:
                return None
            if len(values) == 2:
                fit = _rational_fit(float(values[0] / values[1]), height)
                if fit is None:
                    return None
                p1, q = fit
                if abs(q * float(values[0]) - p1 * float(values[1])) < _RESIDUAL_TOL:
                    full = [0] * len(gens)
                    full[active[0]] = p1
                    return q, full
                return None
    return None
