import pytest
from mpmath import mpf

from quadfield import QuadInt
from sextic_field import ALPHA, build_field_spec, embeddings_at, k_mul
from src.utils.error_handler import SingularSystemError
from unit_bounds import (conjugate_classes, exponent_box, k_range, log_size_bound,
                         small_conjugate_fallback)

C50 = 10 ** 50
# Exponent tuples of the known relative solutions of Example 1
KNOWN_TUPLES = [(0, 0), (1, 0), (3, 0)]
PUBLISHED_B0 = 152


def test_log_size_bound_exceeds_C(example1, table100):
    c1 = log_size_bound(C50, example1, table100)
    assert c1 > mpf(C50)
    assert log_size_bound(10, example1, table100) < c1


def test_exponent_box_is_sound(example1, table100):
    report = exponent_box(C50, example1, table100)
    assert report.row_strategy == "paired"
    assert report.C == C50
    assert len(report.chosen_rows) == example1.h + 1
    assert len(report.pattern) == 3
    for t in KNOWN_TUPLES:
        assert max(abs(k) for k in t) <= report.B0
    data = report.to_dict()
    assert data['B0'] == report.B0
    assert data['C'] == str(C50)


def test_conjugate_classes_pair_complex_rows(example1, table100):
    assert conjugate_classes(table100) == ((0,), (1, 2), (3, 4), (5,))


def test_paired_bound_matches_published_magnitude(example1, table100):
    report = exponent_box(C50, example1, table100)
    # rows 0, 1, 5 under log c1 at C = 1e50 land just above the published 152
    assert PUBLISHED_B0 <= report.B0 <= 160
    assert report.chosen_rows == (0, 1, 5)
    assert exponent_box(10 ** 10, example1, table100).B0 < PUBLISHED_B0


def test_exponent_box_monotone_in_C(example1, table100):
    small = exponent_box(10 ** 20, example1, table100)
    large = exponent_box(C50, example1, table100)
    assert small.B0 <= large.B0


def test_tightest_rows_never_exceed_worst(example1, table100):
    worst = exponent_box(C50, example1, table100, row_strategy="worst")
    tight = exponent_box(C50, example1, table100, row_strategy="tightest")
    assert tight.B0 <= worst.B0
    assert tight.B0 >= 3
    paired = exponent_box(C50, example1, table100)
    assert 3 <= paired.B0 <= worst.B0


def test_exponent_box_argument_checks(example1, table100):
    with pytest.raises(ValueError):
        exponent_box(C50, example1, table100, row_strategy="best")
    with pytest.raises(ValueError):
        exponent_box(C50, example1, embeddings_at(example1, 60))


def test_dependent_units_are_singular(example1):
    alpha_sq = k_mul(ALPHA, ALPHA, example1)
    spec = build_field_spec(2, *example1.f, units=[ALPHA, alpha_sq])
    with pytest.raises(SingularSystemError):
        exponent_box(C50, spec, embeddings_at(spec, 100))


def test_small_conjugate_fallback(example1, table100):
    bound = small_conjugate_fallback(example1, table100, C50)
    assert 0 <= bound < C50
    assert small_conjugate_fallback(example1, table100, 2) <= 1


def test_k_range_contains_known_exponents(example1, table100):
    lo, hi = k_range(QuadInt(1, 0), QuadInt(0, 0), example1, table100, C50)
    assert lo < 0 < hi
    # Example 1's second generator comes from (X0, Y0) = (0, -1) at k = -1
    lo, hi = k_range(QuadInt(0, 0), QuadInt(-1, 0), example1, table100, C50)
    assert lo <= -1 <= hi
    with pytest.raises(ValueError):
        k_range(QuadInt(0, 0), QuadInt(0, 0), example1, table100, C50)


def test_k_range_grows_with_C(example1, table100):
    narrow = k_range(QuadInt(1, 0), QuadInt(0, 0), example1, table100, 10 ** 5)
    wide = k_range(QuadInt(1, 0), QuadInt(0, 0), example1, table100, C50)
    assert wide[0] <= narrow[0] and narrow[1] <= wide[1]
