import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yborel.series import (
    BiSeries,
    CoeffSeq,
    EXACT,
    NonzeroConstantTerm,
    RingMismatch,
    borel_at_y,
    borel_transform,
    exp_compose,
    log1p_compose,
    semigroup_check,
    series_compare,
    triangular,
)

nonzero_fraction = st.fractions(min_value=-9, max_value=9).filter(lambda q: q != 0)


def make_seq(values):
    return CoeffSeq.make([Fraction(v) for v in values])


class TestBorelTransform:
    def test_cubic_golden_support(self):
        f = make_seq([1, 1, 1, 1])
        q = borel_transform(f, 3, 6)
        expect = BiSeries.from_terms(
            [(0, 0, 1), (1, 1, 1), (2, 3, 1), (3, 6, 1)], 3, 6)
        assert q == expect

    def test_support_shape(self):
        f = make_seq([3, -2, 5, 7, -1])
        q = borel_transform(f, 4, 10)
        assert set(q.coeffs) == {(n, triangular(n)) for n in range(5)}

    def test_at_one_is_identity(self):
        f = make_seq([2, -3, 5, 7])
        assert borel_at_y(f, 1).coeffs == f.coeffs

    def test_at_zero_collapses_to_constant(self):
        f = make_seq([2, -3, 5, 7])
        g = borel_at_y(f, 0)
        assert g.coeffs[0] == 2
        assert all(c == 0 for c in g.coeffs[1:])


class TestProduct:
    def test_section5_factorization_identity(self):
        lhs = borel_transform(make_seq([1, 1, 1, 1]), 3, 6)
        f1 = BiSeries.from_terms([(0, 0, 1), (1, 2, 1)], 3, 6)
        f2 = BiSeries.from_terms(
            [(0, 0, 1), (1, 1, 1), (1, 2, -1), (2, 4, 1)], 3, 6)
        assert f1 * f2 == lhs

    def test_multiplication_by_one(self):
        q = borel_transform(make_seq([1, 4, -2]), 5, 8)
        one = BiSeries.from_terms([(0, 0, 1)], 5, 8)
        assert one * q == q

    def test_difference_of_squares(self):
        # (1 + y^3 x)(1 - y^3 x) = 1 - y^6 x^2
        a = BiSeries.from_terms([(0, 0, 1), (1, 3, 1)], 2, 6)
        b = BiSeries.from_terms([(0, 0, 1), (1, 3, -1)], 2, 6)
        expect = BiSeries.from_terms([(0, 0, 1), (2, 6, -1)], 2, 6)
        assert a * b == expect

    def test_ring_mismatch_raises(self):
        from yborel.numerics import ErrFloat
        a = BiSeries.from_terms([(0, 0, 1)], 1, 1)
        b = BiSeries.from_terms([(0, 0, ErrFloat.exact(1))], 1, 1)
        with pytest.raises(RingMismatch):
            a * b


class TestLogExp:
    def test_log_of_one_plus_x(self):
        s = BiSeries.from_terms([(1, 0, 1)], 6, 0)
        L = log1p_compose(s)
        for q in range(1, 7):
            assert L.get(q, 0) == Fraction((-1) ** (q + 1), q)

    def test_nonzero_constant_raises(self):
        s = BiSeries.from_terms([(0, 0, 1)], 2, 2)
        with pytest.raises(NonzeroConstantTerm):
            log1p_compose(s)

    def test_exp_log_identity_random(self):
        rng = random.Random(7)
        for _ in range(10):
            terms = []
            for i in range(3):
                for j in range(3):
                    if i + j > 0 and rng.random() < 0.6:
                        terms.append((i, j, Fraction(rng.randint(-5, 5), rng.randint(1, 4))))
            s = BiSeries.from_terms(terms, 4, 4)
            back = log1p_compose(exp_compose(s) - BiSeries.from_terms([(0, 0, 1)], 4, 4))
            assert back == s

    def test_first_log_coefficient_is_ratio(self):
        # [x^1 y^1] log(Q/A_0) = A_1/A_0 for any gap-free f
        f = make_seq([3, 5, 7, 11])
        q = borel_transform(f, 3, 8)
        s = q * Fraction(1, 3) - BiSeries.from_terms([(0, 0, 1)], 3, 8)
        L = log1p_compose(s)
        assert L.get(1, 1) == Fraction(5, 3)
        # and the p = 1 log route carries no higher y-terms at x-degree 1
        for j in range(2, 9):
            assert L.get(1, j) == 0


class TestSemigroup:
    def test_y0_equal_one(self):
        f = make_seq([1, 2, 3])
        assert semigroup_check(f, 1, Fraction(1, 3))

    def test_worked_example(self):
        f = make_seq([1, 1, 1])
        lhs = borel_at_y(f, Fraction(1, 4))
        assert lhs.coeffs == (Fraction(1), Fraction(1, 4), Fraction(1, 64))
        assert semigroup_check(f, Fraction(1, 2), Fraction(1, 4))

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            semigroup_check(make_seq([1, 1]), 0, Fraction(1, 2))

    @settings(max_examples=200, deadline=None)
    @given(st.lists(nonzero_fraction, min_size=1, max_size=9),
           nonzero_fraction,
           st.fractions(min_value=-9, max_value=9))
    def test_semigroup_law_random(self, coeffs, y0, y):
        f = CoeffSeq.make(coeffs)
        assert semigroup_check(f, y0, y)


class TestCompare:
    def test_exact_distinct(self):
        a = BiSeries.from_terms([(0, 0, 1)], 2, 2)
        b = BiSeries.from_terms([(0, 0, 2)], 2, 2)
        assert series_compare(a, b) == "distinct"

    def test_ball_overlap_equal(self):
        from yborel.numerics import ErrFloat, PrecisionContext
        with PrecisionContext().activate():
            a = BiSeries.from_terms([(1, 1, ErrFloat.exact(Fraction(1, 3)))], 2, 2)
            b = BiSeries.from_terms([(1, 1, ErrFloat.exact(Fraction(1, 3)))], 2, 2)
            assert series_compare(a, b) == "equal"

    def test_json_terms_sorted(self):
        q = borel_transform(make_seq([1, 2, 3]), 2, 3)
        d = q.to_json()
        assert d["terms"] == sorted(d["terms"])
        assert d["ring"] == "exact"
