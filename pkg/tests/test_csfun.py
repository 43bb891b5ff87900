import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from reslab.csfun import AIRY_DOMAIN_RADIUS, airy_ai, airy_ai_prime, airy_pair, sph_hankel1
from reslab.errors import DomainError, OrderOverflowError, PoleError


def complex_in_disk(radius, min_abs=0.0):
    return st.builds(
        lambda r, a: r * cmath.exp(1j * a),
        st.floats(min_abs, radius),
        st.floats(-math.pi, math.pi),
    )


def rel_err(a, b):
    return abs(a - b) / abs(b)


class TestAiry:
    def test_values_at_origin(self):
        assert abs(airy_ai(0) - 0.35502805388781723926) < 1e-16
        assert abs(airy_ai_prime(0) + 0.25881940379280679840) < 1e-16

    def test_first_zeros(self):
        assert abs(airy_ai(-2.33810741)) < 1e-8
        assert abs(airy_ai_prime(-1.01879297)) < 1e-8

    def test_conjugate_examples(self):
        z = 1 + 2j
        assert airy_ai(z.conjugate()) == pytest.approx(airy_ai(z).conjugate(), rel=1e-15)
        z = 2 - 1j
        assert airy_ai_prime(z.conjugate()) == pytest.approx(airy_ai_prime(z).conjugate(), rel=1e-15)

    def test_against_series_oracle_on_grid(self):
        rng = np.random.default_rng(7)
        r = 30 * np.sqrt(rng.random(300))
        z = r * np.exp(2j * np.pi * rng.random(300))
        ai, aip = airy_pair(z)
        worst = 0.0
        for k in range(z.size):
            ref, ref_p = oracles.airy_series(z[k])
            worst = max(worst, rel_err(ai[k], ref), rel_err(aip[k], ref_p))
        assert worst <= 1e-10

    @given(complex_in_disk(30.0))
    def test_oracle_property(self, z):
        ref, ref_p = oracles.airy_series(z)
        assert rel_err(airy_ai(z), ref) <= 1e-10
        assert rel_err(airy_ai_prime(z), ref_p) <= 1e-10

    @given(complex_in_disk(40.0))
    def test_schwarz_reflection(self, z):
        a, ap = airy_pair(z)
        b, bp = airy_pair(z.conjugate())
        assert abs(b - a.conjugate()) <= 1e-14 * abs(a) + 1e-300
        assert abs(bp - ap.conjugate()) <= 1e-14 * abs(ap) + 1e-300

    @given(complex_in_disk(12.0))
    def test_airy_equation(self, z):
        step = 1e-3
        second = (airy_ai(z + step) - 2 * airy_ai(z) + airy_ai(z - step)) / step**2
        scale = abs(z * airy_ai(z)) + abs(airy_ai(z)) * (1 + abs(z)) ** 2
        assert abs(second - z * airy_ai(z)) <= 1e-5 * scale

    def test_derivative_matches_difference(self):
        z = 3.5 - 2.0j
        step = 1e-5
        fd = (airy_ai(z + step) - airy_ai(z - step)) / (2 * step)
        assert rel_err(fd, airy_ai_prime(z)) < 1e-8

    def test_vectorized(self):
        z = np.array([0.0, -2.0, 7.0 + 1j])
        ai, aip = airy_pair(z)
        assert ai.shape == (3,)
        assert ai[1] == pytest.approx(airy_ai(-2.0), rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            airy_ai(AIRY_DOMAIN_RADIUS * 1.01)
        with pytest.raises(DomainError):
            airy_ai(complex(math.nan, 0))


class TestSphericalHankel:
    def test_order_zero_closed_form(self):
        h, _ = sph_hankel1(0, 1j)
        assert h == pytest.approx(-math.exp(-1), abs=1e-15)

    def test_order_one_zero(self):
        h, _ = sph_hankel1(1, -1j)
        assert abs(h) < 1e-12

    @pytest.mark.parametrize("l,z", [(5, 3.0), (2, 0.7 - 0.4j), (40, 25 - 3j), (300, 280 - 12j)])
    def test_recurrence_identity(self, l, z):
        h, hp = sph_hankel1(l, z)
        hm, _ = sph_hankel1(l - 1, z)
        assert abs(hp - (hm - (l + 1) / z * h)) <= 1e-9 * abs(hp)

    @pytest.mark.parametrize("l", [0, 1, 2, 7, 30, 120, 333, 512])
    def test_against_mpmath(self, l):
        rng = np.random.default_rng(l)
        for _ in range(6):
            z = complex((0.5 + 1.5 * rng.random()) * (l + 1), -rng.random() * (l + 1) ** (1 / 3) * 3)
            h, _ = sph_hankel1(l, z)
            assert rel_err(h, oracles.sph_hankel1(l, z)) <= 1e-10

    @given(st.integers(0, 60), complex_in_disk(40.0, min_abs=0.5))
    def test_wronskian(self, l, z):
        h, hp = sph_hankel1(l, z)
        j, jp = oracles.sph_bessel_j(l, z)
        w = z * z * (j * hp - jp * h)
        # relative to the size of the two cancelling products
        scale = abs(z * z * j * hp) + abs(z * z * jp * h)
        assert abs(w - 1j) <= 1e-8 * max(1.0, scale)

    @given(st.integers(0, 200), complex_in_disk(300.0, min_abs=0.5))
    def test_reflection(self, l, z):
        # h_l(-conj z) = (-1)^l conj h_l(z)
        try:
            h, hp = sph_hankel1(l, z)
        except DomainError:
            return
        g, gp = sph_hankel1(l, -z.conjugate())
        sign = (-1) ** l
        assert abs(g - sign * h.conjugate()) <= 1e-12 * abs(h)
        assert abs(gp + sign * hp.conjugate()) <= 1e-12 * abs(hp)

    def test_errors(self):
        with pytest.raises(PoleError):
            sph_hankel1(3, 0)
        with pytest.raises(OrderOverflowError):
            sph_hankel1(513, 1.0)
        with pytest.raises(DomainError):
            sph_hankel1(-1, 1.0)
