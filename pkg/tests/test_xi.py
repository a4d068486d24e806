from fractions import Fraction

import mpmath as mp
import pytest

from yborel.numerics import ErrFloat, PrecisionContext
from yborel.xi import (
    ChecksumMismatch,
    MissingCache,
    PrecisionDowngrade,
    XiCache,
    closed_form_a0,
    omega_turan_report,
    phi_disk_sup,
    phi_eval,
    xi_coefficients,
    xi_moments,
)

# cheap context for unit tests; acceptance runs the shipped 256-bit one
CTX = PrecisionContext(working_precision=128, target_abs_error=1e-25)


class TestPhi:
    def test_phi_zero_bracket(self):
        v = phi_eval(0, CTX)
        assert v.lower() > mp.mpf("0.89")
        assert v.upper() < mp.mpf("0.90")

    def test_width_meets_target(self):
        for u in (0, mp.mpf("0.5"), 1):
            v = phi_eval(u, CTX)
            assert v.rad <= mp.mpf(CTX.target_abs_error)

    def test_leading_term_dominance_at_three(self):
        # at u = 3 the k = 1 term brackets Phi(3) to within the k = 2 term
        with CTX.activate():
            pi = ErrFloat.pi()
            u = ErrFloat(3)
            e2 = (u * 2).exp()

            def term(k):
                return ((4 * pi * pi * k ** 4) * (u * 9 / 2).exp()
                        - (6 * pi * k ** 2) * (u * 5 / 2).exp()) * (-(pi * k * k) * e2).exp()

            t1 = term(1)
            t2 = term(2)
            full = phi_eval(3, CTX)
            # the k = 1 term brackets Phi(3) within the k = 2 magnitude, up
            # to the certified radii of both enclosures
            assert abs(full.mid - t1.mid) <= (2 * abs(t2).upper()
                                              + 8 * (full.rad + t1.rad))

    def test_negative_u_rejected(self):
        with pytest.raises(ValueError):
            phi_eval(-1, CTX)

    def test_disk_sup_dominates_real_values(self):
        M = phi_disk_sup(0, mp.mpf("0.5"), mp.mpf("0.5"))
        for u in (0, mp.mpf("0.25"), mp.mpf("0.5")):
            assert phi_eval(u, CTX).upper() <= M


class TestCoefficients:
    def test_a0_overlaps_closed_form(self):
        coeffs = xi_coefficients(0, CTX)
        assert coeffs[0].value.overlaps(closed_form_a0(CTX))

    def test_positivity_small_n(self):
        coeffs = xi_coefficients(6, CTX)
        assert all(c.value.lower() > 0 for c in coeffs)

    def test_deterministic_rerun_bit_identical(self):
        a = xi_coefficients(2, CTX)
        b = xi_coefficients(2, CTX)
        for x, y in zip(a, b):
            assert x.value.mid == y.value.mid and x.value.rad == y.value.rad

    def test_independent_quadrature_parameters_agree(self):
        # distinct panel width + higher precision rerun must overlap
        a = xi_coefficients(4, CTX)
        ctx2 = PrecisionContext(working_precision=192, target_abs_error=1e-30)
        b = xi_coefficients(4, ctx2, panel_width=Fraction(3, 8))
        for x, y in zip(a, b):
            assert x.value.overlaps(y.value)

    def test_mpmath_quad_oracle(self):
        # independent adaptive quadrature of the same moments
        coeffs = xi_coefficients(3, CTX)
        with mp.workdps(40):
            def phi(u):
                return mp.nsum(lambda k: (4 * mp.pi ** 2 * k ** 4 * mp.exp(9 * u / 2)
                                          - 6 * mp.pi * k ** 2 * mp.exp(5 * u / 2))
                               * mp.exp(-mp.pi * k ** 2 * mp.exp(2 * u)), [1, 12])
            for n in (0, 1, 3):
                ref = 2 * mp.quad(lambda u: phi(u) * u ** (2 * n), [0, 1, 2, 3]) \
                    / mp.factorial(2 * n)
                enc = coeffs[n].value
                assert enc.lower() <= ref <= enc.upper()


class TestTuran:
    def test_n1_bounds(self):
        reports = omega_turan_report(1, CTX)
        assert reports[0].lower == Fraction(1, 6)
        assert reports[0].upper == Fraction(1, 2)

    def test_all_pass_small_n(self):
        reports = omega_turan_report(5, CTX)
        assert all(r.verdict == "pass" for r in reports)

    def test_requires_one_extra_coefficient(self):
        coeffs = xi_coefficients(3, CTX)
        with pytest.raises(ValueError):
            omega_turan_report(3, CTX, coeffs=coeffs)


class TestCache:
    def test_roundtrip_bit_exact(self, tmp_path):
        coeffs = xi_coefficients(3, CTX)
        cache = XiCache.from_coefficients(coeffs, CTX)
        p = tmp_path / "xi.json"
        cache.store(p)
        loaded = XiCache.load(p)
        for n in range(4):
            assert loaded.records[n].value.mid == coeffs[n].value.mid
            assert loaded.records[n].value.rad == coeffs[n].value.rad

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingCache):
            XiCache.load(tmp_path / "absent.json")

    def test_checksum_mismatch(self, tmp_path):
        coeffs = xi_coefficients(1, CTX)
        p = tmp_path / "xi.json"
        XiCache.from_coefficients(coeffs, CTX).store(p)
        text = p.read_text().replace('"n": 1', '"n": 2')
        p.write_text(text)
        with pytest.raises(ChecksumMismatch):
            XiCache.load(p)

    def test_precision_downgrade(self, tmp_path):
        coeffs = xi_coefficients(1, CTX)
        p = tmp_path / "xi.json"
        XiCache.from_coefficients(coeffs, CTX).store(p)
        strict = PrecisionContext(working_precision=512, target_abs_error=1e-60)
        with pytest.raises(PrecisionDowngrade):
            XiCache.load(p, require=strict)

    def test_cache_path_hit_skips_quadrature(self, tmp_path):
        p = tmp_path / "xi.json"
        first = xi_coefficients(3, CTX, cache_path=p)
        second = xi_coefficients(3, CTX, cache_path=p)
        assert all(c.method == "cache" for c in second)
        for x, y in zip(first, second):
            assert x.value.mid == y.value.mid
