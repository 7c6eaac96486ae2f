"""Worked-example tests for the rank metrics.

Expected values are frozen from independent hand/script evaluation of the
formulas (decay(p) = 1/log2(p+1); a missing item costs the length penalty
|1 - decay(n)| plus its own decay); the implementation is never its own
oracle here.
"""

import math

import pytest

from rankrobust.metrics import (
    RankedList,
    kendall_tau,
    pearson,
    rds,
    rds_max,
    rds_raw,
    spearman_rho,
    tau_ap,
    tau_ap_symmetric,
    with_appended_missing,
)

TOL = 1e-9

R1 = RankedList.of(1, 2, 3, 4)
R2_SWAP = RankedList.of(1, 2, 4, 3)
R2_TOP = RankedList.of(2, 1, 3, 4)
R3_TAIL = RankedList.of(1, 2, 5, 6)


def _decay(p):
    return 1.0 / math.log2(p + 1)


# Frozen from scripted evaluation: 2*|1/log2(4) - 1/log2(5)|
SWAP_RAW = 0.1386468838532139
# 2*[(1 - 1/log2 5) + 1/log2 4] + 2*[(1 - 1/log2 5) + 1/log2 5]
TAIL_RAW = 4.138646883853214
MAX_4_4 = 9.677800158702556


class TestRankedList:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            RankedList(())

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            RankedList.of(1, 2, 2)

    def test_positions_are_one_based(self):
        assert R1.positions() == {"1": 1, "2": 2, "3": 3, "4": 4}


class TestRdsRaw:
    def test_identical_lists_are_zero(self):
        assert rds_raw(R1, R1) == 0.0

    def test_adjacent_swap(self):
        expected = 2 * abs(_decay(3) - _decay(4))
        assert rds_raw(R1, R2_SWAP) == pytest.approx(expected, abs=TOL)
        assert rds_raw(R1, R2_SWAP) == pytest.approx(SWAP_RAW, abs=TOL)

    def test_disjoint_tail(self):
        expected = 2 * ((1 - _decay(4)) + _decay(3)) + 2 * ((1 - _decay(4)) + _decay(4))
        assert rds_raw(R1, R3_TAIL) == pytest.approx(expected, abs=TOL)
        assert rds_raw(R1, R3_TAIL) == pytest.approx(TAIL_RAW, abs=TOL)

    def test_symmetric(self):
        assert rds_raw(R1, R3_TAIL) == rds_raw(R3_TAIL, R1)
        assert rds_raw(R1, R2_SWAP) == rds_raw(R2_SWAP, R1)

    def test_distinguishes_swap_depth(self):
        # the paper-critiqued blindness: a swap near the top must cost more
        assert rds_raw(R1, R2_TOP) > rds_raw(R1, R2_SWAP)


class TestRdsMax:
    def test_single_items(self):
        assert rds_max(1, 1) == pytest.approx(2.0, abs=TOL)

    def test_four_four(self):
        assert rds_max(4, 4) == pytest.approx(MAX_4_4, abs=TOL)

    def test_equals_fully_disjoint_lists(self):
        a = RankedList.of(*range(1, 8))
        b = RankedList.of(*range(101, 106))
        assert rds_raw(a, b) == pytest.approx(rds_max(7, 5), abs=TOL)

    def test_rejects_zero_length(self):
        with pytest.raises(ValueError):
            rds_max(0, 4)
        with pytest.raises(ValueError):
            rds_max(4, 0)


class TestRds:
    def test_identical_similarity_is_exactly_one(self):
        res = rds(R1, R1)
        assert res.similarity == 1.0
        assert res.normalized == 0.0

    def test_normalized_tail(self):
        res = rds(R1, R3_TAIL)
        assert res.normalized == pytest.approx(TAIL_RAW / MAX_4_4, abs=TOL)
        assert res.normalized == pytest.approx(0.4276433503466822, abs=TOL)

    def test_similarity_complements_normalized(self):
        for other in (R1, R2_SWAP, R2_TOP, R3_TAIL):
            res = rds(R1, other)
            assert res.similarity == 1.0 - res.normalized
            assert res.similarity + res.normalized == pytest.approx(1.0, abs=TOL)

    def test_paper_ordering(self):
        assert rds(R1, R2_SWAP).similarity > rds(R1, R3_TAIL).similarity


class TestKendall:
    def test_position_blindness(self):
        swap = kendall_tau(R1, R2_SWAP)
        top = kendall_tau(R1, R2_TOP)
        assert swap.value == pytest.approx(2 / 3, abs=TOL)
        assert top.value == pytest.approx(2 / 3, abs=TOL)
        assert swap.value == top.value

    def test_full_reversal(self):
        out = kendall_tau(RankedList.of(1, 2, 3), RankedList.of(3, 2, 1))
        assert out.value == pytest.approx(-1.0, abs=TOL)

    def test_common_items_only(self):
        out = kendall_tau(R1, R3_TAIL)
        assert out.value == pytest.approx(1.0, abs=TOL)
        assert out.support == 2

    def test_undefined_below_two_common(self):
        out = kendall_tau(RankedList.of(1, 2), RankedList.of(1, 9))
        assert not out.defined
        assert out.support == 1


class TestTauAp:
    def test_identical(self):
        assert tau_ap(R1, R1).value == pytest.approx(1.0, abs=TOL)

    def test_disjoint_tail_common_items(self):
        assert tau_ap(R1, R3_TAIL).value == pytest.approx(1.0, abs=TOL)

    def test_full_reversal(self):
        out = tau_ap(RankedList.of(1, 2, 3), RankedList.of(3, 2, 1))
        assert out.value == pytest.approx(-1.0, abs=TOL)

    def test_standard_formula_for_swap(self):
        # i over <1,2,4,3>: C = 1, 2, 2 -> (2/3)*(1 + 1 + 2/3) - 1
        assert tau_ap(R1, R2_SWAP).value == pytest.approx(
            2 / 3 * (1 + 1 + 2 / 3) - 1, abs=TOL
        )

    def test_symmetric_mean(self):
        ab = tau_ap(R1, R2_SWAP).value
        ba = tau_ap(R2_SWAP, R1).value
        assert tau_ap_symmetric(R1, R2_SWAP).value == pytest.approx(
            (ab + ba) / 2, abs=TOL
        )

    def test_undefined_below_two_common(self):
        assert not tau_ap(RankedList.of(1), RankedList.of(2)).defined


class TestAppendedMissing:
    def test_paper_example(self):
        a_ext, b_ext = with_appended_missing(R1, R3_TAIL)
        assert a_ext.items == ("1", "2", "3", "4", "5", "6")
        assert b_ext.items == ("1", "2", "5", "6", "3", "4")

    def test_identical_lists_unchanged(self):
        a_ext, b_ext = with_appended_missing(R1, R1)
        assert a_ext.items == R1.items
        assert b_ext.items == R1.items

    def test_fully_disjoint(self):
        a_ext, b_ext = with_appended_missing(RankedList.of(1, 2), RankedList.of(3, 4))
        assert a_ext.items == ("1", "2", "3", "4")
        assert b_ext.items == ("3", "4", "1", "2")

    def test_item_sets_become_equal(self):
        a_ext, b_ext = with_appended_missing(R1, R3_TAIL)
        assert set(a_ext.items) == set(b_ext.items)


class TestSpearman:
    def test_identical(self):
        assert spearman_rho(R1, R1).value == pytest.approx(1.0, abs=TOL)

    def test_full_reversal(self):
        out = spearman_rho(R1, RankedList.of(4, 3, 2, 1))
        assert out.value == pytest.approx(-1.0, abs=TOL)

    def test_swap_is_point_eight(self):
        # 1 - 6*2/(4*15), sum of squared rank differences = 2
        assert spearman_rho(R1, R2_SWAP).value == pytest.approx(0.8, abs=TOL)

    def test_undefined_below_two_common(self):
        assert not spearman_rho(RankedList.of(1), RankedList.of(1)).defined


class TestPearson:
    def test_perfect_positive(self):
        r, _ = pearson((1.0, 2.0, 3.0, 4.0), (1.0, 2.0, 3.0, 4.0))
        assert r == pytest.approx(1.0, abs=TOL)

    def test_perfect_negative(self):
        r, _ = pearson((1.0, 2.0, 3.0), (-1.0, -2.0, -3.0))
        assert r == pytest.approx(-1.0, abs=TOL)

    def test_against_covariance_oracle(self):
        xs = (1.0, 2.0, 3.0, 4.0, 5.0)
        ys = (2.0, 1.0, 4.0, 3.0, 6.0)
        mx = sum(xs) / len(xs)
        my = sum(ys) / len(ys)
        cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        sx = math.sqrt(sum((x - mx) ** 2 for x in xs))
        sy = math.sqrt(sum((y - my) ** 2 for y in ys))
        r, p = pearson(xs, ys)
        assert r == pytest.approx(cov / (sx * sy), abs=TOL)
        assert 0.0 <= p <= 1.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            pearson((1.0, 2.0), (1.0, 2.0))
        with pytest.raises(ValueError):
            pearson((1.0, 2.0, 3.0), (1.0, 2.0))
        with pytest.raises(ValueError):
            pearson((1.0, 1.0, 1.0), (1.0, 2.0, 3.0))
