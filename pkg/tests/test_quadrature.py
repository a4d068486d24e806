from fractions import Fraction

import mpmath as mp

from yborel.numerics import ErrFloat, PrecisionContext
from yborel.quadrature import cc_nodes_weights, integrate_analytic

CTX = PrecisionContext()


def test_weights_integrate_monomials_exactly():
    # the rule equals the integral of the degree-N interpolant, so it is
    # exact on polynomials of degree <= N
    with CTX.activate():
        for N in (2, 4, 8, 16):
            nodes, weights = cc_nodes_weights(N)
            for k in range(N + 1):
                acc = ErrFloat(0)
                for x, w in zip(nodes, weights):
                    acc = acc + w * x ** k
                exact = Fraction(0) if k % 2 else Fraction(2, k + 1)
                assert acc.contains(exact), (N, k)


def test_weights_sum_to_two():
    with CTX.activate():
        _, weights = cc_nodes_weights(12)
        total = ErrFloat(0)
        for w in weights:
            total = total + w
        assert total.contains(Fraction(2))


def test_integrate_exp():
    with CTX.activate():
        val = integrate_analytic(lambda x: x.exp(), 0, 1, r=1.0,
                                 M=mp.exp(2), tol=mp.mpf("1e-50"))
        truth = mp.e - 1
        assert abs(val.mid - truth) < mp.mpf("1e-45")
        assert val.rad < mp.mpf("1e-45")
        assert val.lower() <= truth <= val.upper()


def test_integrate_runge_function():
    # 1/(1+x^2) on [-1/2, 1/2]: poles at +/- i, so r = 0.4 is safe;
    # |1/(1+z^2)| <= 1/(1 - (0.9)^2) on the neighborhood (crude but certified)
    with CTX.activate():
        f = lambda x: (ErrFloat(1) + x * x).reciprocal()
        M = 1 / (1 - mp.mpf("0.9") ** 2)
        val = integrate_analytic(f, mp.mpf("-0.5"), mp.mpf("0.5"),
                                 r=mp.mpf("0.4"), M=M, tol=mp.mpf("1e-40"))
        truth = 2 * mp.atan(mp.mpf("0.5"))
        assert val.lower() <= truth <= val.upper()
        assert val.rad < mp.mpf("1e-35")


def test_remainder_scales_with_tolerance():
    with CTX.activate():
        loose = integrate_analytic(lambda x: x.exp(), 0, 1, r=1.0,
                                   M=mp.exp(2), tol=mp.mpf("1e-10"))
        tight = integrate_analytic(lambda x: x.exp(), 0, 1, r=1.0,
                                   M=mp.exp(2), tol=mp.mpf("1e-60"))
        assert tight.rad < loose.rad
