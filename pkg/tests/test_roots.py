import cmath

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from reslab.csfun import airy_ai, airy_ai_prime
from reslab.errors import BoundaryZeroError, DomainError
from reslab.roots import Rect, find_zeros, winding_count


def test_winding_examples():
    assert winding_count(lambda z: z * z + 1, Rect(-2, 2, -2, 2)) == 2
    assert winding_count(airy_ai, Rect(-3, -2, -0.5, 0.5)) == 1
    assert winding_count(cmath.exp, Rect(-1, 1, -1, 1)) == 0


def test_find_quadratic_roots():
    zs = find_zeros(lambda z: z * z + 1, lambda z: 2 * z, Rect(-2, 2, -2, 2), 1e-12)
    got = sorted(zs.locations(), key=lambda z: z.imag)
    assert got[0] == pytest.approx(-1j, abs=1e-12)
    assert got[1] == pytest.approx(1j, abs=1e-12)
    assert all(z.residual < 1e-12 for z in zs)


def test_airy_zeros_against_bisection_oracle():
    zs = find_zeros(airy_ai, airy_ai_prime, Rect(-6, 0, -1, 1), 1e-13)
    got = sorted(z.real for z in zs.locations())
    ref = [oracles.airy_real_zero("ai", b) for b in [(-5.6, -5.4), (-4.2, -4.0), (-2.4, -2.3)]]
    assert np.allclose(got, ref, atol=1e-10)
    assert np.allclose(got, [-5.52056, -4.08795, -2.33811], atol=1e-5)


def test_airy_prime_zeros():
    zs = find_zeros(airy_ai_prime, lambda z: z * airy_ai(z), Rect(-4, 0, -1, 1), 1e-13)
    got = sorted(z.real for z in zs.locations())
    assert np.allclose(got, [-3.24820, -1.01879], atol=1e-5)


def test_boundary_zero_detected():
    with pytest.raises(BoundaryZeroError):
        winding_count(lambda z: z - 1, Rect(-1, 1, -1, 1), floor=1e-8)


def test_degenerate_rect():
    with pytest.raises(DomainError):
        Rect(1, 1, 0, 1)


def test_multiplicity_reported():
    zs = find_zeros(lambda z: (z - 0.3j) ** 2, lambda z: 2 * (z - 0.3j), Rect(-1, 1, -1, 1), 1e-12)
    assert zs.total_multiplicity == 2


roots_strategy = st.lists(
    st.complex_numbers(max_magnitude=2.5, allow_nan=False, allow_infinity=False), min_size=1, max_size=6
)


def _poly(roots):
    coeffs = np.poly(roots)
    der = np.polyder(coeffs)
    return (lambda z: np.polyval(coeffs, z)), (lambda z: np.polyval(der, z))


def _clear_of(roots, rects, gap=1e-3):
    for r in rects:
        for z in roots:
            d = min(abs(z.real - r.re_min), abs(z.real - r.re_max), abs(z.imag - r.im_min), abs(z.imag - r.im_max))
            if d < gap:
                return False
    return True


@given(roots_strategy, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_count_conservation(roots, xs, ys):
    big = Rect(-3, 3, -3, 3)
    parts = big.split((xs + 3) / 6, (ys + 3) / 6)
    assume(_clear_of(roots, [big, *parts]))
    f, _ = _poly(roots)
    total = winding_count(f, big)
    assert total == len(roots)
    assert sum(winding_count(f, p) for p in parts) == total


@given(st.lists(st.complex_numbers(max_magnitude=2.5, allow_nan=False, allow_infinity=False), min_size=1, max_size=4))
def test_polish_idempotence(roots):
    assume(all(abs(a - b) > 0.05 for i, a in enumerate(roots) for b in roots[:i]))
    f, fp = _poly(roots)
    big = Rect(-3, 3, -3, 3)
    assume(_clear_of(roots, [big]))
    first = find_zeros(f, fp, big, 1e-12)
    for z in first.locations():
        cell = Rect(z.real - 0.01, z.real + 0.013, z.imag - 0.011, z.imag + 0.01)
        again = find_zeros(f, fp, cell, 1e-12)
        assert len(again) == 1
        assert abs(again.locations()[0] - z) <= 1e-9


@given(st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=3), st.lists(st.complex_numbers(max_magnitude=2.0), max_size=2))
def test_conjugate_closure(real_roots, pairs):
    roots = list(real_roots) + [c for p in pairs for c in (p, p.conjugate())]
    assume(all(abs(a - b) > 0.05 for i, a in enumerate(roots) for b in roots[:i]))
    f, fp = _poly(roots)
    zs = find_zeros(f, fp, Rect(-2.7, 2.9, -2.8, 2.6), 1e-12).locations()
    for z in zs:
        assert np.min(np.abs(zs - z.conjugate())) <= 1e-8
