"""Independent high-precision reference values used only by the tests."""

from __future__ import annotations

import mpmath as mp
import numpy as np


def airy_series(z: complex, dps: int | None = None) -> tuple[complex, complex]:
    """Ai(z), Ai'(z) from the Maclaurin series summed in extended precision.

    The default precision covers the cancellation between partial sums of
    size exp(2/3 |z|^1.5) and a result as small as exp(-2/3 |z|^1.5).
    """
    if dps is None:
        dps = 30 + int(4.0 / 3.0 * abs(z) ** 1.5 / np.log(10.0))
    with mp.workdps(dps):
        z = mp.mpc(z)
        c1 = 1 / (mp.power(3, mp.mpf(2) / 3) * mp.gamma(mp.mpf(2) / 3))
        c2 = 1 / (mp.power(3, mp.mpf(1) / 3) * mp.gamma(mp.mpf(1) / 3))
        z3 = z**3
        # f = sum z^{3k} prod(3j-2)/(3k)!, g = sum z^{3k+1} prod(3j-1)/(3k+1)!
        f_term, g_term = mp.mpc(1), z
        f, g = f_term, g_term
        fp, gp = mp.mpc(0), mp.mpc(1)
        k = 0
        eps = mp.mpf(10) ** (-dps + 5)
        while True:
            k += 1
            fp += f_term * z * z / (3 * k - 1)
            gp += g_term * z * z / (3 * k)
            f_term *= z3 / ((3 * k - 1) * (3 * k))
            g_term *= z3 / ((3 * k) * (3 * k + 1))
            f += f_term
            g += g_term
            if k > 5 and abs(f_term) + abs(g_term) < eps * (abs(f) + abs(g)):
                break
        return complex(c1 * f - c2 * g), complex(c1 * fp - c2 * gp)


def airy_real_zero(kind: str, bracket: tuple[float, float]) -> float:
    """Zero of Ai or Ai' on a real bracket by bisection on the series oracle."""
    idx = 0 if kind == "ai" else 1

    def fn(x):
        return airy_series(x, 40)[idx].real

    a, b = bracket
    fa = fn(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = fn(m)
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
        if b - a < 1e-15:
            break
    return 0.5 * (a + b)


def sph_hankel1(l: int, z: complex, dps: int = 40) -> complex:
    with mp.workdps(dps):
        z = mp.mpc(z)
        nu = l + mp.mpf(1) / 2
        return complex(mp.sqrt(mp.pi / (2 * z)) * (mp.besselj(nu, z) + 1j * mp.bessely(nu, z)))


def sph_bessel_j(l: int, z: complex, dps: int = 60) -> tuple[complex, complex]:
    """j_l(z) and j_l'(z) from the power series."""
    with mp.workdps(dps):
        z = mp.mpc(z)
        pref = mp.mpf(1)
        for j in range(1, 2 * l + 2, 2):
            pref *= j
        term = mp.mpc(1)
        val, der = term, mp.mpc(0)
        k = 0
        while True:
            k += 1
            term *= -(z * z / 2) / (k * (2 * l + 2 * k + 1))
            val += term
            der += 2 * k * term
            if k > 5 and abs(term) < mp.mpf(10) ** (-dps + 5) * abs(val):
                break
        # der accumulates z d/dz of the series
        j = z**l * val / pref
        jp = z ** (l - 1) * (l * val + der) / pref
        return complex(j), complex(jp)


def ellipsoid_curvatures(a: float, b: float, c: float, x: np.ndarray) -> tuple[float, float]:
    """Principal curvatures of an ellipsoid at x from closed-form Gauss and mean curvature."""
    x, y, z = x
    s = x * x / a**4 + y * y / b**4 + z * z / c**4
    K = 1.0 / (a * a * b * b * c * c * s * s)
    H = abs(x * x + y * y + z * z - a * a - b * b - c * c) / (2.0 * (a * b * c) ** 2 * s**1.5)
    disc = np.sqrt(max(H * H - K, 0.0))
    return H - disc, H + disc


def airy_ground_state(kind: str, dps: int = 30):
    """Lowest Airy eigenpair on [0, inf): (lambda, u, u') with u(s) = Ai(s - lambda)."""
    with mp.workdps(dps):
        lam = mp.airyaizero(1) if kind == "D" else mp.airyaizero(1, derivative=1)
        lam = -lam
        return float(lam), lambda s: float(mp.airyai(s - lam)), lambda s: float(mp.airyai(s - lam, derivative=1))
