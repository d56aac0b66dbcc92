"""Named form construction, evaluation, Jensen checks and their invariants."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from mpmath import mpf

import revineq as rq
from revineq import (
    BadConstantError,
    BadExponentError,
    InputFormatError,
    InvalidRangeError,
    NotDecreasingError,
    PreconditionError,
    Sequence,
)
from util_oracles import direct_eval, random_exact_decreasing, random_rational_sequence


class TestRangeSums:
    def test_head_units(self):
        assert rq.head_sum(rq.ones(3), rq.ones(3), 1, 3) == 3

    def test_head_single_term(self):
        assert rq.head_sum(Sequence.exact([2, 1]), rq.ones(2), 2, 2) == 1

    def test_head_exact_cancellation(self):
        a = Sequence.exact([1, Fraction(1, 2), Fraction(1, 3)])
        w = Sequence.exact([1, 2, 3])
        assert rq.head_sum(a, w, 1, 3) == 3

    def test_tail_units(self):
        assert rq.tail_sum(rq.ones(3), rq.ones(3), 2, 3) == 2

    def test_tail_direct(self):
        assert rq.tail_sum(Sequence.exact([4, 2, 1]), rq.ones(3), 1, 3) == 7

    def test_empty_range_rejected(self):
        with pytest.raises(InvalidRangeError):
            rq.tail_sum(rq.ones(3), rq.ones(3), 3, 2)

    def test_out_of_bounds_rejected(self):
        with pytest.raises(InvalidRangeError):
            rq.head_sum(rq.ones(3), rq.ones(3), 1, 4)


class TestPowerSumNorm:
    def test_linear_sum(self):
        assert rq.power_sum_norm(Sequence.exact([1, 1]), 1) == 2

    def test_root_two(self):
        v = rq.power_sum_norm(Sequence.exact([1, 1]), 2)
        assert abs(v - mpf(2) ** mpf("0.5")) < mpf("1e-40")

    def test_single_support_point(self):
        from revineq.numeric import as_mpf

        for alpha in (1, 2, Fraction(1, 2), Fraction(7, 3)):
            v = rq.power_sum_norm(Sequence.exact([3, 0, 0]), alpha)
            assert abs(as_mpf(v) - 3) < mpf("1e-40")

    def test_positive_alpha_required(self):
        with pytest.raises(BadExponentError):
            rq.power_sum_norm(rq.ones(2), 0)


class TestVerifyJensen:
    def test_two_ones(self):
        holds, lhs, rhs = rq.verify_jensen(Sequence.exact([1, 1]), 1, 2)
        assert holds
        assert abs(lhs - mpf(2) ** mpf("0.5")) < mpf("1e-40")
        assert rhs == 2

    def test_single_point_equality(self):
        holds, lhs, rhs = rq.verify_jensen(Sequence.exact([0, 5, 0]), 1, 2)
        assert holds
        assert abs(lhs - rhs) < mpf("1e-40")

    def test_exact_random_sample(self):
        rng = random.Random(101)
        for _ in range(300):
            b = random_rational_sequence(rng)
            holds, _, _ = rq.verify_jensen(b, 1, 2)
            assert holds

    def test_float_exponents(self):
        rng = random.Random(5)
        for _ in range(100):
            b = random_rational_sequence(rng)
            holds, _, _ = rq.verify_jensen(b, Fraction(1, 2), Fraction(5, 2))
            assert holds

    def test_bad_exponents(self):
        with pytest.raises(BadExponentError):
            rq.verify_jensen(rq.ones(2), 2, 1)
        with pytest.raises(BadExponentError):
            rq.verify_jensen(rq.ones(2), 2, 2)


class TestMakeNamedForm:
    def test_t2_2_unit_structure(self):
        form = rq.make_named_form(
            "T2_2", p=1, n=1, m=16, outer_weight=rq.ones(32), inner_weight=rq.ones(32)
        )
        assert form.outer_range == (1, 16)
        assert form.inner_kind == "tail" and form.inner_anchor == 16
        assert form.rhs_range == (8, 16)
        assert form.direction == "GE"

    def test_t2_2_multiple_violated(self):
        with pytest.raises(PreconditionError) as err:
            rq.make_named_form(
                "T2_2", p=1, n=1, m=15, outer_weight=rq.ones(32), inner_weight=rq.ones(32)
            )
        assert "16n" in str(err.value)

    def test_t5_1b_power_weights(self):
        form = rq.make_named_form("T5_1b", p=1, n=1, m=8, alpha=1, lambda_exp=0)
        assert form.outer_weight[2] == Fraction(1, 4)  # mu**(-alpha-1) with alpha = 1
        assert all(form.inner_weight[i] == 1 for i in range(1, 9))
        assert form.inner_kind == "head" and form.inner_anchor == 1
        assert form.rhs_range == (4, 8)

    def test_t2_3_ranges(self):
        form = rq.make_named_form(
            "T2_3", p=1, n=2, m=16, outer_weight=rq.ones(32), inner_weight=rq.ones(32)
        )
        assert form.outer_range == (8, 16)
        assert form.inner_kind == "head" and form.inner_anchor == 8
        assert form.rhs_range == (2, 16)

    def test_p_ranges_enforced(self):
        unit = rq.ones(64)
        with pytest.raises(BadExponentError):
            rq.make_named_form("T2_1", p=Fraction(1, 2), n=1, m=16, outer_weight=unit, inner_weight=unit)
        with pytest.raises(BadExponentError):
            rq.make_named_form("T2_3", p=2, n=1, m=4, outer_weight=unit, inner_weight=unit)
        with pytest.raises(BadExponentError):
            rq.make_named_form("HL_1_1", p=Fraction(1, 2), n=1, m=4, alpha=1)
        with pytest.raises(BadExponentError):
            rq.make_named_form("HL_1_3", p=2, n=1, m=4, alpha=1)
        # C5_1 allows any positive p
        rq.make_named_form("C5_1a", p=Fraction(1, 3), n=1, m=8, alpha=1)

    def test_full_range_forms_pin_lower_index(self):
        with pytest.raises(PreconditionError):
            rq.make_named_form("C5_2a", p=1, n=2, m=8, alpha=1)

    def test_alpha_required_and_positive(self):
        with pytest.raises(BadExponentError):
            rq.make_named_form("HL_1_1", p=1, n=1, m=4, alpha=None)
        with pytest.raises(BadExponentError):
            rq.make_named_form("HL_1_1", p=1, n=1, m=4, alpha=0)

    def test_explicit_weights_demanded_for_t2(self):
        with pytest.raises(PreconditionError):
            rq.make_named_form("T2_2", p=1, n=1, m=16)

    def test_unknown_id(self):
        with pytest.raises(InputFormatError):
            rq.make_named_form("T9_9", p=1, n=1, m=4)

    def test_json_round_trip(self):
        form = rq.make_named_form("T5_2a", p=Fraction(1, 2), n=1, m=8, alpha=2, lambda_exp=-1)
        again = rq.InequalityForm.from_json(form.to_json())
        a = rq.random_decreasing(8, 9)
        r1 = rq.eval_form(form, a)
        r2 = rq.eval_form(again, a)
        assert abs(r1.lhs - r2.lhs) < mpf("1e-30")
        assert abs(r1.rhs0 - r2.rhs0) < mpf("1e-30")


class TestEvalForm:
    def unit_t2_2(self, n=1, m=16, p=1):
        wlen = 4 * m
        return rq.make_named_form(
            "T2_2", p=p, n=n, m=m, outer_weight=rq.ones(wlen), inner_weight=rq.ones(wlen)
        )

    def test_unit_instance_values(self):
        res = rq.eval_form(self.unit_t2_2(), rq.ones(16))
        assert res.lhs == 136
        assert res.rhs0 == 108
        assert res.ratio == Fraction(34, 27)
        assert res.exact

    def test_hl_1_2_two_terms(self):
        form = rq.make_named_form("HL_1_2", p=1, n=1, m=2, alpha=1)
        res = rq.eval_form(form, rq.ones(2))
        assert res.lhs == Fraction(3, 2)
        assert res.rhs0 == Fraction(3, 2)
        assert res.ratio == 1

    def test_zero_sequence_indeterminate(self):
        res = rq.eval_form(self.unit_t2_2(), Sequence.exact([0] * 16))
        assert res.indeterminate
        assert res.to_json()["ratio"] == "nan"

    def test_vanishing_rhs_gives_infinite_ratio(self):
        # a step ending before the shifted range: rhs0 = 0 < lhs
        res = rq.eval_form(self.unit_t2_2(), rq.step_sequence(4, 16))
        assert res.lhs == 10 and res.rhs0 == 0
        assert res.ratio == float("inf")
        assert res.to_json()["ratio"] == "inf"

    def test_decreasing_required_for_reverse_forms(self):
        a = Sequence.exact([1] * 15 + [2])
        with pytest.raises(NotDecreasingError):
            rq.eval_form(self.unit_t2_2(), a)

    def test_classical_forms_accept_any_nonnegative(self):
        form = rq.make_named_form("HL_1_1", p=2, n=1, m=8, alpha=1)
        b = Sequence.exact([1, 3, 0, 2, 5, 0, 1, 1])
        res = rq.eval_form(form, b)
        assert res.lhs > 0 and res.rhs0 > 0

    def test_matches_direct_oracle_on_random_instances(self):
        rng = random.Random(77)
        unit = rq.ones(64)
        cases = [
            ("T2_1", dict(outer_weight=unit, inner_weight=rq.power_sequence(1, 64)), 1, 16),
            ("T2_4", dict(outer_weight=rq.power_sequence(-1, 64), inner_weight=unit), 2, 8),
            ("HL_1_1", dict(alpha=2), 3, 11),
            ("T5_1a", dict(alpha=1, lambda_exp=1), 1, 16),
            ("C5_1b", dict(alpha=2, lambda_exp=0), 1, 13),
        ]
        for form_id, kwargs, n, m in cases:
            p = 1 if form_id in ("T2_4", "T5_2a") else rng.choice([1, 2]) if form_id.startswith("HL") else 1
            form = rq.make_named_form(form_id, p=p, n=n, m=m, **kwargs)
            for _ in range(10):
                a = random_exact_decreasing(rng, m)
                res = rq.eval_form(form, a)
                lhs, rhs0 = direct_eval(form, a)
                assert res.lhs == lhs
                assert res.rhs0 == rhs0

    def test_float_path_close_to_exact_path(self):
        form = self.unit_t2_2()
        rng = random.Random(3)
        for _ in range(10):
            a = random_exact_decreasing(rng, 16)
            exact = rq.eval_form(form, a)
            fl = rq.eval_form(form, a.to_float())
            assert not fl.exact
            if exact.rhs0 > 0:
                assert abs(fl.ratio - exact.ratio) < mpf("1e-30")

    def test_fast_evaluator_tracks_eval_form(self):
        rng = random.Random(13)
        form = rq.make_named_form("T5_2a", p=Fraction(1, 2), n=1, m=16, alpha=2, lambda_exp=1)
        fast = rq.FormEvaluator(form)
        for _ in range(20):
            a = random_exact_decreasing(rng, 16)
            res = rq.eval_form(form, a)
            lhs, rhs0 = fast.evaluate([float(v) for v in a.values])
            assert abs(lhs - float(res.lhs)) <= 1e-9 * max(1.0, float(res.lhs))
            assert abs(rhs0 - float(res.rhs0)) <= 1e-9 * max(1.0, float(res.rhs0))


class TestCheckHolds:
    def unit_t2_2(self):
        return rq.make_named_form(
            "T2_2", p=1, n=1, m=16, outer_weight=rq.ones(32), inner_weight=rq.ones(32)
        )

    def test_unit_instance_with_c_one(self):
        assert rq.check_holds(self.unit_t2_2(), rq.ones(16), 1)

    def test_unit_instance_with_c_two_fails(self):
        assert not rq.check_holds(self.unit_t2_2(), rq.ones(16), 2)

    def test_zero_sequence_vacuous(self):
        assert rq.check_holds(self.unit_t2_2(), Sequence.exact([0] * 16), 5)

    def test_constant_must_be_positive(self):
        with pytest.raises(BadConstantError):
            rq.check_holds(self.unit_t2_2(), rq.ones(16), 0)

    def test_equiv_needs_two_constants(self):
        form = rq.make_named_form("C5_2a", p=1, n=1, m=8, alpha=1)
        with pytest.raises(InputFormatError):
            rq.check_holds(form, rq.ones(8), 1)

    def test_check_equiv_brackets_the_harmonic_identity(self):
        form = rq.make_named_form("C5_2a", p=1, n=1, m=8, alpha=1, lambda_exp=0)
        a = rq.harmonic_sequence(8)
        assert rq.check_equiv(form, a, Fraction(1, 2), 2)
        assert rq.check_equiv(form, a, 1, 1)  # ratio is exactly 1
        assert not rq.check_equiv(form, a, 2, 3)


class TestFormInvariants:
    def test_scale_invariance_exact(self):
        rng = random.Random(9)
        form = rq.make_named_form(
            "T2_1", p=2, n=1, m=16, outer_weight=rq.power_sequence(1, 64), inner_weight=rq.ones(64)
        )
        for _ in range(10):
            a = random_exact_decreasing(rng, 16)
            base = rq.eval_form(form, a)
            if base.indeterminate:
                continue
            for c in (Fraction(2), Fraction(1, 3), Fraction(7, 5)):
                scaled = rq.eval_form(form, a.scaled(c))
                assert scaled.ratio == base.ratio

    def test_harmonic_summation_swap_identity(self):
        # Tail double sum of 1/nu over the full square collapses to the upper limit.
        for upper in (4, 8, 16, 32):
            form = rq.make_named_form("C5_2a", p=1, n=1, m=upper, alpha=1, lambda_exp=0)
            res = rq.eval_form(form, rq.harmonic_sequence(upper))
            assert res.lhs == upper
            assert res.rhs0 == upper
            assert res.ratio == 1 and res.exact

    def test_monotone_in_m_for_tail_lower_forms(self):
        rng = random.Random(21)
        for _ in range(10):
            a = random_exact_decreasing(rng, 64)
            lhs_small = rq.eval_form(
                rq.make_named_form("T2_2", p=1, n=1, m=16, outer_weight=rq.ones(64), inner_weight=rq.ones(64)),
                a,
            ).lhs
            lhs_large = rq.eval_form(
                rq.make_named_form("T2_2", p=1, n=1, m=32, outer_weight=rq.ones(64), inner_weight=rq.ones(64)),
                a,
            ).lhs
            assert lhs_large >= lhs_small

    def test_additivity_at_p_one(self):
        rng = random.Random(31)
        form = rq.make_named_form(
            "T2_2", p=1, n=1, m=16, outer_weight=rq.power_sequence(1, 64), inner_weight=rq.ones(64)
        )
        for _ in range(10):
            a = random_exact_decreasing(rng, 16)
            b = random_exact_decreasing(rng, 16)
            ab = Sequence.exact(x + y for x, y in zip(a.values, b.values))
            ra, rb, rab = (rq.eval_form(form, s) for s in (a, b, ab))
            assert rab.lhs == ra.lhs + rb.lhs
            assert rab.rhs0 == ra.rhs0 + rb.rhs0

    def test_eval_result_json_keys(self):
        form = rq.make_named_form("HL_1_1", p=1, n=1, m=4, alpha=1)
        payload = rq.eval_form(form, rq.ones(4)).to_json()
        assert set(payload) == {"lhs", "rhs0", "ratio", "exact"}
