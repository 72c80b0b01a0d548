import itertools
import math
from fractions import Fraction

import mpmath
import pytest

from benflow.errors import RepresentationError, UsageError
from benflow.exactreal import ExactComplex, Monomial, PI, SymbolBasis, exact_log_base
from benflow.resonance import (
    IntegerRelation,
    ShellPoint,
    argument_difference_set,
    is_b_nonresonant,
    is_exp_b_nonresonant,
    is_exp_nonresonant_algebraic,
    numeric_relation_scan,
    verify_exp_witness,
)

LN10 = math.log(10)


def scalar_set(basis, value):
    return [ExactComplex(basis.rational(value), basis.zero())]


def conjugate_pair(basis, re, im_symbol, im_coeff):
    z = ExactComplex(basis.rational(re), basis.term(im_symbol, im_coeff))
    return [z, z.conjugate()]


def spiral_pair(b):
    mono = Monomial.of(pi=1, **{f"ln{b}": -1})
    basis = SymbolBasis.default(b).extended(mono)
    return conjugate_pair(basis, 1, mono, 2)


class TestExponentialNonresonance:
    def test_nonzero_rational_singleton(self):
        basis = SymbolBasis.default(10)
        verdict = is_exp_b_nonresonant(scalar_set(basis, 3), 10)
        assert not verdict.resonant
        assert verdict.witness is None

    def test_zero_singleton_resonant(self):
        basis = SymbolBasis.default(10)
        verdict = is_exp_b_nonresonant(scalar_set(basis, 0), 10)
        assert verdict.resonant
        assert verdict.witness.kind == "zero-real-part"

    def test_imaginary_pair_resonant(self):
        basis = SymbolBasis.default(10)
        verdict = is_exp_b_nonresonant(conjugate_pair(basis, 0, PI, 2), 10)
        assert verdict.resonant
        assert verify_exp_witness(verdict.witness, 10)

    def test_spiral_pair_witness(self):
        verdict = is_exp_b_nonresonant(spiral_pair(10), 10)
        assert verdict.resonant
        assert verdict.witness.kind == "span-membership"
        assert verdict.witness.q == 2
        assert tuple(verdict.witness.p) == (1,)
        assert verify_exp_witness(verdict.witness, 10)

    def test_pi_pair_nonresonant_two_bases(self):
        for b in (2, 10):
            basis = SymbolBasis.default(b)
            verdict = is_exp_b_nonresonant(conjugate_pair(basis, 1, PI, 1), b)
            assert not verdict.resonant, b

    def test_assumptions_echoed(self):
        verdict = is_exp_b_nonresonant(spiral_pair(10), 10)
        assert any("Q-linearly independent" in a for a in verdict.assumptions)

    def test_non_symmetric_rejected(self):
        basis = SymbolBasis.default(10)
        lone = ExactComplex(basis.rational(1), basis.term(PI, 1))
        with pytest.raises(UsageError, match="conjugation"):
            is_exp_b_nonresonant([lone], 10)

    def test_mixed_bases_rejected(self):
        b10 = SymbolBasis.default(10)
        b2 = SymbolBasis.default(2)
        with pytest.raises(UsageError):
            is_exp_b_nonresonant(scalar_set(b10, 1) + scalar_set(b2, 2), 10)

    def test_empty_set_exponentially_resonant(self):
        verdict = is_exp_b_nonresonant([], 10)
        assert verdict.resonant


class TestClosureProperties:
    """Verdicts are preserved under negation, conjugation, subsets, scaling."""

    def corpus(self):
        basis10 = SymbolBasis.default(10)
        yield scalar_set(basis10, 3), 10, False
        yield scalar_set(basis10, 0), 10, True
        yield conjugate_pair(basis10, 1, PI, 1), 10, False
        yield spiral_pair(10), 10, True
        yield conjugate_pair(basis10, 0, PI, 2), 10, True
        basis2 = SymbolBasis.default(2)
        yield conjugate_pair(basis2, 1, PI, 1) + scalar_set(basis2, 5), 2, False

    def test_corpus_baseline(self):
        for zs, b, expected in self.corpus():
            assert is_exp_b_nonresonant(zs, b).resonant == expected

    def test_negation_preserves_nonresonance(self):
        for zs, b, expected in self.corpus():
            if not expected:
                negated = [-z for z in zs]
                assert not is_exp_b_nonresonant(negated, b).resonant

    def test_conjugation_preserves_nonresonance(self):
        for zs, b, expected in self.corpus():
            if not expected:
                conj = [z.conjugate() for z in zs]
                assert not is_exp_b_nonresonant(conj, b).resonant

    def test_conjugate_closed_subsets_preserve_nonresonance(self):
        for zs, b, expected in self.corpus():
            if expected or len(zs) < 2:
                continue
            for size in range(1, len(zs)):
                for subset in itertools.combinations(zs, size):
                    closed = all(
                        any(w.re.coords == z.re.coords and (w.im + z.im).is_zero for w in subset)
                        for z in subset
                    )
                    if closed:
                        assert not is_exp_b_nonresonant(list(subset), b).resonant

    def test_rational_scaling_preserves_verdict(self):
        for zs, b, expected in self.corpus():
            for t in (Fraction(2), Fraction(-1, 3), Fraction(7, 5)):
                scaled = [z.scaled(t) for z in zs]
                assert is_exp_b_nonresonant(scaled, b).resonant == expected, (t, b)

    def test_agreement_with_algebraic_shortcut_on_rational_sets(self):
        basis = SymbolBasis.default(10)
        rational_sets = [
            [(3, 0)],
            [(0, 0)],
            [(2, 0), (-1, 0)],
            [(1, 2), (1, -2)],
            [(0, 1), (0, -1)],
            [(-2, 3), (-2, -3), (5, 0)],
        ]
        for pairs in rational_sets:
            zs = [
                ExactComplex(basis.rational(re), basis.rational(im)) for re, im in pairs
            ]
            floats = [complex(re, im) for re, im in pairs]
            for b in (2, 10):
                exact = not is_exp_b_nonresonant(zs, b).resonant
                shortcut = is_exp_nonresonant_algebraic(floats, 1e-12)
                assert exact == shortcut, (pairs, b)

    def test_witness_validity_on_resonant_corpus(self):
        for zs, b, expected in self.corpus():
            if expected:
                verdict = is_exp_b_nonresonant(zs, b)
                if verdict.witness is not None and verdict.witness.kind == "span-membership":
                    assert verify_exp_witness(verdict.witness, b)


class TestShellNonresonance:
    def test_rational_two_nonresonant(self):
        basis = SymbolBasis.default(10)
        lm, ext, certified = exact_log_base(2, 10, basis)
        assert certified
        verdict = is_b_nonresonant([ShellPoint(lm, ext.zero())], 10)
        assert not verdict.resonant

    def test_base_itself_resonant(self):
        basis = SymbolBasis.default(10)
        lm, ext, _ = exact_log_base(10, 10, basis)
        verdict = is_b_nonresonant([ShellPoint(lm, ext.zero())], 10)
        assert verdict.resonant
        assert verdict.witness.kind == "span-membership"

    def test_plus_minus_e_resonant_every_base(self):
        # {-e, e}: same modulus, argument difference exactly half a turn
        for b in (2, 3, 10):
            inv_ln = Monomial.of(**{f"ln{b}": -1})
            basis = SymbolBasis.default(b).extended(inv_ln)
            log_mod = basis.term(inv_ln, 1)  # log_b e = 1 / ln b
            points = [
                ShellPoint(log_mod, basis.zero()),
                ShellPoint(log_mod, basis.rational(Fraction(1, 2))),
            ]
            verdict = is_b_nonresonant(points, b)
            assert verdict.resonant, b
            assert verdict.witness.kind == "argument-difference"

    def test_unit_circle_resonant(self):
        # r = 1: log_b 1 = 0 is in every span
        basis = SymbolBasis.default(10)
        verdict = is_b_nonresonant([ShellPoint(basis.zero(), basis.zero())], 10)
        assert verdict.resonant

    def test_empty_set_nonresonant(self):
        assert not is_b_nonresonant([], 10).resonant

    def test_argument_difference_set_invariants(self):
        basis = SymbolBasis.default(10)
        points = [
            ShellPoint(basis.zero(), basis.zero()),
            ShellPoint(basis.zero(), basis.rational(Fraction(1, 3))),
            ShellPoint(basis.zero(), basis.term(PI, Fraction(1, 7))),
        ]
        deltas = argument_difference_set(points)
        one = basis.rational(1)
        assert any(d.coords == one.coords for d in deltas)
        # closed under x -> 2 - x (swapping the pair)
        coords = {d.coords for d in deltas}
        for d in deltas:
            mirrored = one.scaled(2) - d
            assert mirrored.coords in coords

    def test_distinct_shells_checked_independently(self):
        basis = SymbolBasis.default(10)
        lm2, ext, _ = exact_log_base(2, 10, basis)
        lm10 = ext.rational(1)
        points = [ShellPoint(lm2, ext.zero()), ShellPoint(lm10, ext.zero())]
        verdict = is_b_nonresonant(points, 10)
        assert verdict.resonant  # the r = 10 shell trips condition (ii)


class TestAlgebraicShortcut:
    def test_rank_one_spectrum(self):
        assert not is_exp_nonresonant_algebraic([0.0, 2.0])

    def test_off_axis_pair(self):
        assert is_exp_nonresonant_algebraic([complex(1, math.sqrt(2)), complex(1, -math.sqrt(2))])

    def test_pure_imaginary(self):
        assert not is_exp_nonresonant_algebraic([1j, -1j])

    def test_tolerance_required(self):
        with pytest.raises(UsageError):
            is_exp_nonresonant_algebraic([1.0], 0.0)


def brute_force_relation(re, gens, height, residual=1e-9):
    """Exhaustive oracle for q*re = sum p_l gens_l with coefficients <= height."""
    scale = max([abs(re)] + [abs(g) for g in gens] + [1.0])
    for q in range(1, height + 1):
        for ps in itertools.product(range(-height, height + 1), repeat=len(gens)):
            if abs(q * re - sum(p * g for p, g in zip(ps, gens))) < residual * scale:
                return q, ps
    return None


class TestNumericRelationScan:
    def test_spiral_pair_found(self):
        c = 2 * math.pi / LN10
        rel = numeric_relation_scan([complex(1, c), complex(1, -c)], 10, 4)
        assert rel is not None
        assert rel.q == 2
        assert tuple(rel.p) == (1,)
        # residual verified at high precision
        with mpmath.workdps(60):
            residual = abs(
                rel.q * mpmath.mpf(1)
                - rel.p[0] * mpmath.log(10) / mpmath.pi * mpmath.mpf(rel.elements[0].imag)
            )
            assert residual < 1e-9

    def test_real_singleton_none(self):
        assert numeric_relation_scan([complex(1, 0)], 10) is None

    def test_off_relation_pair_none(self):
        zs = [complex(3, 1), complex(3, -1)]
        assert numeric_relation_scan(zs, 10, 20) is None
        # exhaustive oracle agrees: no relation up to height 20
        gens = [LN10 / math.pi * 1.0]
        assert brute_force_relation(3.0, gens, 20) is None

    def test_imaginary_axis_trivial_relation(self):
        rel = numeric_relation_scan([complex(0, 2), complex(0, -2)], 10, 8)
        assert rel is not None
        assert rel.residual < 1e-9

    def test_three_element_group_via_pslq(self):
        # Re = (ln b / pi)(im1 + im2) with Q-independent im parts
        im1 = 1.0
        im2 = math.sqrt(2)
        re = LN10 / math.pi * (im1 + im2)
        zs = [
            complex(re, im1),
            complex(re, -im1),
            complex(re, im2),
            complex(re, -im2),
        ]
        rel = numeric_relation_scan(zs, 10, 8)
        assert rel is not None
        assert rel.q >= 1
        # substitute back numerically
        total = sum(
            p * LN10 / math.pi * w.imag for p, w in zip(rel.p, rel.elements)
        )
        assert abs(rel.q * re - total) < 1e-8

    def test_height_bounds_search(self):
        # the relation 7*Re = 3*(ln b/pi)*Im needs coefficients above height 2
        g = LN10 / math.pi
        zs = [complex(3 * g / 7, 1), complex(3 * g / 7, -1)]
        assert numeric_relation_scan(zs, 10, 2) is None
        found = numeric_relation_scan(zs, 10, 8)
        assert found is not None and found.q == 7 and tuple(found.p) == (3,)

    def test_bad_height_rejected(self):
        with pytest.raises(UsageError):
            numeric_relation_scan([complex(1, 1)], 10, 0)
