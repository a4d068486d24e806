from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yborel.numerics import (
    DegenerateInput,
    ErrFloat,
    PrecisionContext,
    Sign,
    certified_eval,
    isolate_real_roots,
    lacunary_half_sum,
    mpf_to_fraction,
    solve_rho,
)

CTX = PrecisionContext()


def contains_fraction(ball, value):
    return ball.lower_fraction() <= Fraction(value) <= ball.upper_fraction()


class TestErrFloat:
    def test_exact_int_roundtrip(self):
        x = ErrFloat.exact(7)
        assert x.is_exact and x.mid == 7

    def test_dyadic_fraction_exact(self):
        x = ErrFloat.exact(Fraction(3, 8))
        assert x.is_exact
        assert mpf_to_fraction(x.mid) == Fraction(3, 8)

    def test_nondyadic_fraction_enclosed(self):
        with CTX.activate():
            x = ErrFloat.exact(Fraction(1, 3))
            assert not x.is_exact
            assert contains_fraction(x, Fraction(1, 3))

    def test_add_sub_mul_div_enclosures(self):
        with CTX.activate():
            a = ErrFloat.exact(Fraction(1, 3))
            b = ErrFloat.exact(Fraction(2, 7))
            assert contains_fraction(a + b, Fraction(1, 3) + Fraction(2, 7))
            assert contains_fraction(a - b, Fraction(1, 3) - Fraction(2, 7))
            assert contains_fraction(a * b, Fraction(2, 21))
            assert contains_fraction(a / b, Fraction(7, 6))

    def test_pow_int(self):
        with CTX.activate():
            a = ErrFloat.exact(Fraction(1, 3))
            assert contains_fraction(a ** 5, Fraction(1, 243))
            assert contains_fraction(a ** 0, 1)
            assert contains_fraction(a ** -2, 9)

    def test_sign_trichotomy(self):
        with CTX.activate():
            assert ErrFloat.exact(2).sign() is Sign.POSITIVE
            assert ErrFloat.exact(-2).sign() is Sign.NEGATIVE
            assert ErrFloat.exact(0).sign() is Sign.ZERO
            assert ErrFloat(0, mp.mpf("1e-30")).sign() is Sign.INDETERMINATE

    def test_division_by_straddling_ball_raises(self):
        with CTX.activate():
            with pytest.raises(ZeroDivisionError):
                ErrFloat.exact(1) / ErrFloat(0, mp.mpf("1e-10"))

    def test_sqrt_exp_log_enclosures(self):
        with CTX.activate():
            two = ErrFloat.exact(2)
            s = two.sqrt()
            assert (s * s).contains(Fraction(2))
            e = ErrFloat.exact(1).exp()
            assert e.log().contains(Fraction(1))

    def test_json_roundtrip_bit_exact(self):
        with CTX.activate():
            x = ErrFloat.exact(Fraction(1, 3)) * ErrFloat.exact(Fraction(22, 7))
            y = ErrFloat.from_json(x.to_json())
            assert y.mid == x.mid and y.rad == x.rad

    def test_immutability(self):
        x = ErrFloat.exact(1)
        with pytest.raises(AttributeError):
            x.mid = mp.mpf(2)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=-100, max_value=100), min_size=2, max_size=6),
       st.fractions(min_value=-4, max_value=4))
def test_enclosure_soundness_random_expressions(coefs, point):
    """Exact rational Horner value always lies in the ball Horner enclosure."""
    with CTX.activate():
        ball = certified_eval([ErrFloat.exact(c) for c in coefs], ErrFloat.exact(point))
        exact = Fraction(0)
        for c in reversed(coefs):
            exact = exact * point + c
        assert ball.lower_fraction() <= exact <= ball.upper_fraction()


class TestCertifiedEval:
    def test_square_at_exact_two(self):
        with CTX.activate():
            v = certified_eval([0, 0, 1], 2)
            assert v.contains(Fraction(4))

    def test_constant(self):
        with CTX.activate():
            v = certified_eval([Fraction(5, 3)], 123)
            assert v.contains(Fraction(5, 3))

    def test_cancellation_is_indeterminate(self):
        # 4y^2 - 8y^3 at y = 1/2 is exactly 0; ball route must straddle
        with CTX.activate():
            coeffs = [ErrFloat.exact(0), ErrFloat.exact(0),
                      ErrFloat.exact(4), ErrFloat.exact(-8)]
            v = certified_eval(coeffs, Fraction(1, 2))
            assert v.contains(Fraction(0))
            assert v.sign() in (Sign.ZERO, Sign.INDETERMINATE)


class TestIsolation:
    def test_quadratic_pm_one(self):
        res = isolate_real_roots([-1, 0, 1], (Fraction(-2), Fraction(2)))
        assert res.certified and res.count == 2
        (a1, b1), (a2, b2) = res.intervals
        assert a1 <= -1 <= b1 and a2 <= 1 <= b2

    def test_no_real_roots(self):
        res = isolate_real_roots([1, 0, 1], (Fraction(0), Fraction(1)))
        assert res.certified and res.count == 0

    def test_discriminant_example_exact(self):
        # 4y^2 - 8y^3 on [1/4, 1): single root at 1/2
        res = isolate_real_roots([0, 0, 4, -8], (Fraction(1, 4), Fraction(999, 1000)))
        assert res.certified and res.count == 1
        a, b = res.intervals[0]
        assert a <= Fraction(1, 2) <= b

    def test_multiple_root_squarefree_reduction(self):
        # (x-1)^2 (x+2) has roots 1 (double) and -2
        coeffs = [2, -3, 0, 1]
        res = isolate_real_roots(coeffs, (Fraction(-3), Fraction(3)))
        assert res.certified and res.count == 2

    def test_root_at_endpoint(self):
        res = isolate_real_roots([-1, 1], (Fraction(1), Fraction(2)))
        assert res.count == 1 and res.intervals[0] == (Fraction(1), Fraction(1))

    def test_ball_coefficients_certified(self):
        with CTX.activate():
            coeffs = [ErrFloat.exact(-1), ErrFloat.exact(0), ErrFloat.exact(1)]
            res = isolate_real_roots(coeffs, (Fraction(-2), Fraction(2)))
            assert res.certified and res.count == 2

    def test_ball_positive_polynomial(self):
        with CTX.activate():
            coeffs = [ErrFloat.exact(1), ErrFloat.exact(0), ErrFloat.exact(1)]
            res = isolate_real_roots(coeffs, (Fraction(0), Fraction(1)))
            assert res.certified and res.count == 0

    def test_all_straddling_raises(self):
        with CTX.activate():
            wide = [ErrFloat(0, mp.mpf(1)), ErrFloat(0, mp.mpf(1))]
            with pytest.raises(DegenerateInput):
                isolate_real_roots(wide, (Fraction(0), Fraction(1)))

    def test_near_double_root_ball_reports_indeterminate(self):
        # (x - 1/2)^2 + tiny fuzz: ball route cannot separate, must not lie
        with CTX.activate():
            eps = mp.mpf("1e-50")
            coeffs = [ErrFloat(mp.mpf(1) / 4, eps), ErrFloat.exact(-1), ErrFloat.exact(1)]
            res = isolate_real_roots(coeffs, (Fraction(0), Fraction(1)), max_depth=12)
            assert not res.certified
            assert res.count <= 2

    def test_brute_force_count_agreement_corpus(self):
        # counts agree with the known constructed roots and with a coarse
        # sign-change scan, degree <= 12
        import random
        rng = random.Random(20240817)
        for _ in range(25):
            deg = rng.randint(2, 12)
            frs = [Fraction(round(rng.uniform(-1.8, 1.8) * 64), 64) for _ in range(deg)]
            poly = [Fraction(1)]
            for fr in frs:
                poly = [Fraction(0)] + poly
                for i in range(len(poly) - 1):
                    poly[i] -= fr * poly[i + 1]
            lo, hi = Fraction(-2), Fraction(2)
            res = isolate_real_roots(poly, (lo, hi))
            distinct = sorted(set(frs))
            assert res.count == len(distinct)
            for (a, b) in res.intervals:
                inside = [r for r in distinct if a <= r <= b]
                assert len(inside) == 1
            # coarse scan at resolution 1e-4 cannot see more sign changes
            # than isolated roots
            scan_hits = 0
            prev_sign = None
            x = Fraction(-2)
            step = Fraction(1, 2500)
            from yborel.numerics import _poly_eval_fraction
            while x <= 2:
                v = _poly_eval_fraction(poly, x)
                s = 0 if v == 0 else (1 if v > 0 else -1)
                if prev_sign is not None and s != 0 and prev_sign != 0 and s != prev_sign:
                    scan_hits += 1
                if s != 0:
                    prev_sign = s
                x += step
            assert scan_hits <= res.count


class TestRho:
    def test_bracket_signs(self):
        with CTX.activate():
            lo = lacunary_half_sum(ErrFloat.exact(Fraction(1, 4)), CTX)
            hi = lacunary_half_sum(ErrFloat.exact(Fraction(9, 10)), CTX)
            assert lo.upper_fraction() < Fraction(1, 2) < hi.lower_fraction()

    def test_rho_value_and_width(self):
        rho = solve_rho(CTX)
        assert rho.rad <= mp.mpf(CTX.target_abs_error)
        # independent digits from a direct high-precision root solve
        with mp.workdps(60):
            ref = mp.findroot(lambda r: mp.nsum(lambda k: r ** (k * k), [1, mp.inf]) - mp.mpf(1) / 2,
                              mp.mpf("0.456"))
            assert abs(rho.mid - ref) < mp.mpf("1e-39")

    def test_rho_squared_matches_printed_digits(self):
        rho = solve_rho(CTX)
        sq = rho * rho
        assert Fraction(2078, 10000) <= sq.lower_fraction()
        assert sq.upper_fraction() < Fraction(2079, 10000)

    def test_monotone_consistency(self):
        rho = solve_rho(CTX)
        with CTX.activate():
            lo = lacunary_half_sum(ErrFloat(rho.lower()), CTX)
            hi = lacunary_half_sum(ErrFloat(rho.upper()), CTX)
            assert lo.lower_fraction() <= Fraction(1, 2) <= hi.upper_fraction()
