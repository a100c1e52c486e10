import math
from fractions import Fraction as F

import pytest

from moranslice.carpet import carpet_dimension, dimension_ratio
from moranslice.dimension import (DimensionEstimate, VerificationSuite, box_dim_sequence, carpet_control_exact,
                                  carpet_control_sequence, estimate_ratio, tail_bounds, verify_matrix_counts)
from moranslice.errors import WindowTooLarge
from moranslice.slicing import Slope

from conftest import seq


def test_estimate_ratio():
    s = seq("(0)")
    assert estimate_ratio(9, s, 2) == pytest.approx(1.0, rel=1e-15)
    assert estimate_ratio(0, s, 2) == float("-inf")


def test_diagonal_slice():
    est = box_dim_sequence(F(1, 2), seq("(0)"), Slope(1, 1), 12)
    assert est.depths == list(range(1, 13))
    assert est.counts[:2] == [3, 9]
    assert abs(est.estimates[-1] - 1.0) < 0.05
    assert not est.boundary


def test_horizontal_slice():
    est = box_dim_sequence(F(1, 2), seq("(0)"), Slope(0, 1), 20)
    assert est.counts == [2**k for k in range(1, 21)]
    assert abs(est.estimates[-1] - math.log(2) / math.log(3)) < 0.01


@pytest.mark.parametrize("method", ["matrix", "oracle", "both"])
def test_methods_agree_off_boundary(method):
    est = box_dim_sequence(F(2, 7), seq("(01)"), Slope(1, 2), 6, method=method)
    ref = box_dim_sequence(F(2, 7), seq("(01)"), Slope(1, 2), 6)
    assert est.counts == ref.counts
    if method == "both":
        assert est.oracle_counts == ref.counts


def test_oracle_method_capped():
    est = box_dim_sequence(F(1, 3), seq("(1)"), Slope(1, 1), 8, method="oracle", cell_budget=200, window=2)
    assert est.capped and len(est.counts) < 8


def test_boundary_reported_with_both():
    # a = 1/4 under (10) has a terminating expansion; the matrix product undercounts there
    est = box_dim_sequence(F(1, 4), seq("(10)"), Slope(1, 1), 2, method="both", window=1)
    assert est.boundary
    assert est.counts == [3, 6] and est.oracle_counts == [5, 10]


def test_unknown_method():
    with pytest.raises(ValueError):
        box_dim_sequence(F(1, 2), seq("(0)"), Slope(1, 1), 3, method="fast")


def test_tail_bounds():
    est = DimensionEstimate([1, 2, 3], [1, 1, 1], [0.9, 0.7, 0.8], 0, 0)
    assert tail_bounds(est, 2) == (0.7, 0.8)
    assert tail_bounds(est, 3) == (0.7, 0.9)
    for w in (0, 4):
        with pytest.raises(WindowTooLarge):
            tail_bounds(est, w)


@pytest.mark.parametrize("k", [2, 4, 6, 8, 12])
def test_control_exact_at_period_multiples(k):
    assert carpet_control_exact(seq("(01)"), k) == carpet_dimension(seq("(01)"))


def test_control_sequence_converges():
    vals = carpet_control_sequence(seq("110(0)"), 60)
    assert abs(vals[-1] - carpet_dimension(seq("110(0)"))) < 0.01
    assert dimension_ratio(2, 2) == dimension_ratio(1, 1) == dimension_ratio(7, 7)


def test_verification_harness_small():
    suite = VerificationSuite([Slope(1, 1), Slope(2, 3)], [seq("(01)"), seq("(0)")], seed=3, samples=4, depth=5,
                              intercepts=[F(1, 4)])
    report = verify_matrix_counts(suite)
    assert report.passed and report.mismatches == 0
    assert report.checked >= 4 * 4
    assert report.checked + report.skipped == len(report.records)
    assert {r["status"] for r in report.records} <= {"pass", "skipped-boundary"}
    again = verify_matrix_counts(suite)
    assert again.records == report.records


def test_verification_rejects_out_of_range_intercept():
    suite = VerificationSuite([Slope(1, 1)], [seq("(0)")], samples=1, depth=3, intercepts=[F(2)])
    with pytest.raises(Exception, match="outside"):
        verify_matrix_counts(suite)
