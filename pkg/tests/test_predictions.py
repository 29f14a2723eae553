"""Closed forms against the optimizer, hypothesis readings, scans, identities."""

import itertools
from math import comb

import pytest

from chaincx import (
    BettiVector,
    ComplexShape,
    HypothesisReading,
    RankVector,
    SourceTheorem,
    Verdict,
    betti_lower_bound,
    brute_force_maximize,
    check_shape,
    conjecture_scan,
    enumerate_maximizers,
    equal_dim_quadratic_form,
    hypothesis_holds,
    predict_equal_dim,
    predict_length1,
    predict_length2,
    predict_length3_sum,
    ranks_from_betti,
    is_feasible,
    spread_identity_check,
    stratum_dimension,
    sweep_theorems,
)
from chaincx.predictions import _length2_cases

INTERIOR = HypothesisReading.INTERIOR


def shape(*dims):
    return ComplexShape(dims)


def spectrum_set(s):
    return {b.bettis for b in brute_force_maximize(s).betti_spectrum}


class TestLength1:
    def test_examples(self):
        assert [b.bettis for b in predict_length1(shape(2, 5)).predicted_betti_set] == [(0, 3)]
        assert [b.bettis for b in predict_length1(shape(5, 2)).predicted_betti_set] == [(3, 0)]
        assert [b.bettis for b in predict_length1(shape(4, 4)).predicted_betti_set] == [(0, 0)]

    def test_wrong_length_not_applicable(self):
        assert not predict_length1(shape(2, 2, 2)).applicable

    def test_matches_brute_force_exhaustively(self):
        for dims in itertools.product(range(9), repeat=2):
            s = ComplexShape(dims)
            predicted = {b.bettis for b in predict_length1(s).predicted_betti_set}
            assert predicted == spectrum_set(s), dims


class TestLength2:
    def test_examples(self):
        assert {b.bettis for b in predict_length2(shape(3, 1, 3)).predicted_betti_set} == {
            (2, 0, 3),
            (3, 0, 2),
        }
        assert [b.bettis for b in predict_length2(shape(1, 5, 2)).predicted_betti_set] == [(0, 2, 0)]
        assert [b.bettis for b in predict_length2(shape(2, 2, 2)).predicted_betti_set] == [(1, 0, 1)]

    def test_second_space_dominant(self):
        # a_2 >= a_0 + a_1 concentrates the surplus in beta_2.
        assert [b.bettis for b in predict_length2(shape(1, 0, 5)).predicted_betti_set] == [(1, 0, 5)]
        assert [b.bettis for b in predict_length2(shape(2, 1, 4)).predicted_betti_set] == [(2, 0, 3)]

    def test_total_and_boundary_consistent(self):
        # Every non-negative triple fires at least one case, and whenever
        # guards overlap the predicted sets agree.
        for dims in itertools.product(range(21), repeat=3):
            cases = _length2_cases(*dims)
            assert cases, dims
            sets = {tuple(sorted(v)) for _, v in cases}
            assert len(sets) == 1, (dims, cases)

    def test_predictions_are_valid_betti_vectors(self):
        for dims in itertools.product(range(13), repeat=3):
            s = ComplexShape(dims)
            chi = dims[0] - dims[1] + dims[2]
            for b in predict_length2(s).predicted_betti_set:
                assert all(v >= 0 for v in b.bettis)
                assert b.bettis[0] - b.bettis[1] + b.bettis[2] == chi

    def test_sum_is_lower_bound(self):
        for dims in itertools.product(range(13), repeat=3):
            s = ComplexShape(dims)
            for b in predict_length2(s).predicted_betti_set:
                assert sum(b.bettis) == betti_lower_bound(s)


class TestLength3:
    def test_examples(self):
        assert predict_length3_sum(shape(2, 2, 2, 2)).predicted_sum == 0
        assert not predict_length3_sum(shape(2, 1, 1, 2)).applicable

    def test_readings_differ_on_forced_ends(self):
        # Interior reading drops the end conditions, so the motivating
        # forced-homology shape slips through it.
        s = shape(2, 1, 1, 2)
        assert not hypothesis_holds(s)
        assert hypothesis_holds(s, INTERIOR)

    def test_sentinel_window(self):
        assert hypothesis_holds(shape(2, 3, 2, 1))
        assert not hypothesis_holds(shape(3, 2, 2, 3))  # a_1 < a_0
        assert not hypothesis_holds(shape(1, 2, 1, 2))  # a_3 > a_2

    def test_prediction_verified_by_oracle(self):
        applicable = 0
        for dims in itertools.product(range(5), repeat=4):
            s = ComplexShape(dims)
            pred = predict_length3_sum(s)
            if not pred.applicable:
                continue
            applicable += 1
            observed = {sum(b.bettis) for b in brute_force_maximize(s).betti_spectrum}
            assert observed == {pred.predicted_sum}, dims
        assert applicable > 50  # the hypothesis is satisfiable, not vacuous


class TestEqualDim:
    def test_examples(self):
        assert [b.bettis for b in predict_equal_dim(shape(2, 2, 2, 2)).predicted_betti_set] == [
            (0, 0, 0, 0)
        ]
        assert {b.bettis for b in predict_equal_dim(shape(3, 3, 3)).predicted_betti_set} == {
            (1, 0, 2),
            (2, 0, 1),
        }
        assert [b.bettis for b in predict_equal_dim(shape(6, 6, 6, 6, 6)).predicted_betti_set] == [
            (2, 0, 2, 0, 2)
        ]

    def test_not_applicable(self):
        assert not predict_equal_dim(shape(2, 3, 2)).applicable
        assert not predict_equal_dim(shape(0, 0, 0)).applicable  # needs m >= 1

    def test_spread_cardinality(self):
        for n in (2, 4, 6, 8):
            slots = n // 2 + 1
            for m in range(1, 10):
                pred = predict_equal_dim(ComplexShape((m,) * (n + 1)))
                assert len(pred.predicted_betti_set) == comb(slots, m % slots)

    def test_spread_vectors_realizable(self):
        for n, m in [(2, 3), (4, 5), (6, 4)]:
            s = ComplexShape((m,) * (n + 1))
            best = enumerate_maximizers(s).max_dimension
            for b in predict_equal_dim(s).predicted_betti_set:
                rv = ranks_from_betti(s, b)
                assert is_feasible(s, rv)
                assert stratum_dimension(s, rv) == best


class TestCheckShape:
    def test_examples(self):
        assert check_shape(shape(3, 1, 3)).verdict is Verdict.MATCH
        assert check_shape(shape(5)).verdict is Verdict.MATCH
        assert check_shape(shape(7)).verdict is Verdict.MATCH

    def test_no_applicable_closed_form(self):
        result = check_shape(shape(1, 2, 1, 2))
        assert result.verdict is Verdict.NOT_APPLICABLE
        # Under the interior reading the conjecture applies and holds here.
        assert check_shape(shape(1, 2, 1, 2), INTERIOR).verdict is Verdict.MATCH

    def test_equal_even_check(self):
        result = check_shape(shape(6, 6, 6, 6, 6))
        assert result.verdict is Verdict.MATCH
        assert result.observed.maximizers == (RankVector((4, 2, 2, 4)),)


class TestSweeps:
    def test_theorem_sweep_small(self):
        summary = sweep_theorems(2, 6)
        assert summary.mismatches == 0
        assert summary.shapes_checked == 7 + 49 + 343

    def test_conjecture_scan_sentinel_finds_nothing(self):
        report = conjecture_scan(4, 4)
        assert report.counterexamples == ()
        assert not report.truncated
        assert report.shapes_scanned > 0

    @pytest.mark.parametrize("max_length,max_entry", [(4, 6), (3, 8), (2, 12)])
    def test_conjecture_scan_documented_bounds(self, max_length, max_entry):
        report = conjecture_scan(max_length, max_entry)
        assert report.counterexamples == ()
        assert not report.truncated

    def test_conjecture_scan_interior_flags_forced_homology(self):
        report = conjecture_scan(3, 2, INTERIOR)
        found = {c.shape.dims for c in report.counterexamples}
        assert (2, 1, 1, 2) in found
        for c in report.counterexamples:
            assert c.verdict is Verdict.MISMATCH

    def test_counterexamples_reported_with_mirror(self):
        report = conjecture_scan(3, 2, INTERIOR)
        found = {c.shape.dims for c in report.counterexamples}
        assert (1, 0, 1, 2) in found and (2, 1, 0, 1) in found

    def test_scan_truncation(self):
        report = conjecture_scan(3, 3, work_cap=5)
        assert report.truncated
        assert report.shapes_scanned == 5


class TestQuadraticForm:
    def test_examples(self):
        assert equal_dim_quadratic_form(1) == [[-2]]
        assert equal_dim_quadratic_form(2) == [[-2, -1], [-1, -2]]

    def test_leading_minors(self):
        # det of the k x k leading block is (-1)^k (k+1): negative definite.
        hessian = equal_dim_quadratic_form(8)
        minors = [1, -2]
        for k in range(2, 9):
            minors.append(-2 * minors[k - 1] - minors[k - 2])
        for k in range(1, 9):
            assert minors[k] == (-1) ** k * (k + 1)
            assert _det_int([row[:k] for row in hessian[:k]]) == minors[k]

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            equal_dim_quadratic_form(0)


def _det_int(matrix):
    """Fraction-free integer determinant (Bareiss), used as an oracle."""
    from fractions import Fraction

    m = [[Fraction(v) for v in row] for row in matrix]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] * inv
            for c in range(col, size):
                m[r][c] -= factor * m[col][c]
    assert det.denominator == 1
    return int(det)


class TestSpreadIdentity:
    def test_examples(self):
        assert spread_identity_check(2, 2, RankVector((1, 1))) is True
        assert spread_identity_check(2, 2, RankVector((2, 0))) is True

    def test_holds_on_all_maximizers(self):
        for n, m in [(2, 3), (4, 3), (4, 5)]:
            s = ComplexShape((m,) * (n + 1))
            for rv in brute_force_maximize(s).maximizers:
                assert spread_identity_check(n, m, rv) is True

    def test_hypothesis_violations_return_none(self):
        assert spread_identity_check(3, 2, RankVector((1, 1, 1))) is None  # odd n
        assert spread_identity_check(2, 2, RankVector((0, 0))) is None  # r1+r2 != m
        assert spread_identity_check(2, 0, RankVector((0, 0))) is None  # m < 1
        assert spread_identity_check(2, 2, RankVector((1,))) is None  # wrong length
