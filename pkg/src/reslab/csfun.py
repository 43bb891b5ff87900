"""Complex-argument special functions: Airy Ai, Ai' and spherical Hankel h_l^(1).

Airy evaluation strategy (all regions are mapped to Im z >= 0 first and the
result conjugated back, so Schwarz reflection holds exactly):

* Maclaurin series for |z| <= 2, and for |z| <= 6 when |arg z| >= pi/2.
  Inside |arg z| < pi/2 the series cancels catastrophically beyond |z| ~ 2
  (Ai decays while the partial sums grow like Bi).
* Laplace-type integral of the Macdonald function K_{1/3}, K_{2/3} evaluated by
  generalized Gauss-Laguerre quadrature along a ray rotated away from the
  integrand's branch cut, for |arg z| <= 2pi/3.
* The three-term connection formula Ai(z) = e^{pi i/3} Ai(z e^{-2pi i/3})
  + e^{-pi i/3} Ai(z e^{2pi i/3}) for |arg z| > 2pi/3 (both rotated arguments
  fall back into the quadrature sector).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import gamma, hankel1, roots_genlaguerre

from .errors import DomainError, OrderOverflowError, PoleError

AIRY_DOMAIN_RADIUS = 1.0e4
MACLAURIN_RADIUS = 6.0
MACLAURIN_RADIUS_DECAYING = 2.0
LAGUERRE_NODES = 100
MAX_HANKEL_ORDER = 512

AI0 = 3.0 ** (-2.0 / 3.0) / gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / gamma(1.0 / 3.0)

_SQRT_PI = np.sqrt(np.pi)
_G56 = gamma(5.0 / 6.0)
_G76 = gamma(7.0 / 6.0)
_ROT = np.exp(2j * np.pi / 3.0)


@lru_cache(maxsize=None)
def _laguerre(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_genlaguerre(LAGUERRE_NODES, alpha)
    return nodes, weights


def _maclaurin(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ai and Ai' from the power series about the origin."""
    z3 = z**3
    # f = sum 3^k (1/3)_k z^{3k}/(3k)!,  g = sum 3^k (2/3)_k z^{3k+1}/(3k+1)!
    tf, tg = np.ones_like(z), z.copy()
    tfp, tgp = z * z / 2.0, np.ones_like(z)
    f, g, fp, gp = tf.copy(), tg.copy(), tfp.copy(), tgp.copy()
    for k in range(60):
        tf = tf * z3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * z3 / ((3 * k + 3) * (3 * k + 4))
        tfp = tfp * z3 / ((3 * k + 3) * (3 * k + 5))
        tgp = tgp * z3 / ((3 * k + 1) * (3 * k + 3))
        f, g, fp, gp = f + tf, g + tg, fp + tfp, gp + tgp
        small = np.abs(tf) + np.abs(tg) + np.abs(tfp) + np.abs(tgp)
        if np.all(small <= 1e-17 * (np.abs(f) + np.abs(g) + np.abs(fp) + np.abs(gp))):
            break
    return AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp


def _laplace(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ai and Ai' from the K_{1/3}, K_{2/3} integrals; requires 0 <= arg z <= 2pi/3."""
    zeta = (2.0 / 3.0) * z**1.5
    psi = 1.5 * np.angle(z) - np.pi
    beta = np.maximum(0.0, 0.5 * (psi + 0.5 * np.pi))
    c = np.cos(beta)
    rot = np.exp(1j * beta)
    u = (rot / (2.0 * c * zeta))[:, None]
    osc = np.tan(beta)[:, None]
    out = []
    for alpha in (-1.0 / 6.0, 1.0 / 6.0):
        s, w = _laguerre(alpha)
        integrand = np.exp(-1j * s[None, :] * osc) * (1.0 + s[None, :] * u) ** alpha
        scale = rot ** (1.0 + alpha) * c ** (-(1.0 + alpha))
        out.append(scale * (integrand @ w))
    with np.errstate(over="ignore", invalid="ignore"):
        expo = np.exp(-zeta)
        q = z**0.25
        ai = expo / (2.0 * _SQRT_PI * q * _G56) * out[0]
        aip = -q * expo / (2.0 * _SQRT_PI * _G76) * out[1]
    return ai, aip


def _airy_upper(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ai, Ai' for 0 <= arg z <= pi."""
    r = np.abs(z)
    th = np.angle(z)
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    series = (r <= MACLAURIN_RADIUS_DECAYING) | ((r <= MACLAURIN_RADIUS) & (th >= 0.5 * np.pi))
    direct = ~series & (th <= 2.0 * np.pi / 3.0)
    connect = ~series & ~direct
    if series.any():
        ai[series], aip[series] = _maclaurin(z[series])
    if direct.any():
        ai[direct], aip[direct] = _laplace(z[direct])
    if connect.any():
        zc = z[connect]
        za = zc / _ROT  # arg in (0, pi/3]
        zb = np.conj(zc * _ROT)  # conj of an argument in (-2pi/3, -pi/3)
        a1, a1p = _laplace(za)
        b1, b1p = _laplace(zb)
        b1, b1p = np.conj(b1), np.conj(b1p)
        e = np.exp(1j * np.pi / 3.0)
        ai[connect] = e * a1 + np.conj(e) * b1
        # d/dz Ai(z w) = w Ai'(z w)
        aip[connect] = e * a1p / _ROT + np.conj(e) * b1p * _ROT
    return ai, aip


def airy_pair(z):
    """Return ``(Ai(z), Ai'(z))`` for scalar or array complex ``z``.

    Raises
    ------
    DomainError
        If ``|z|`` exceeds :data:`AIRY_DOMAIN_RADIUS` or the result overflows.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    zs = np.atleast_1d(arr).ravel()
    if not np.all(np.isfinite(zs)):
        raise DomainError("non-finite Airy argument")
    if np.any(np.abs(zs) > AIRY_DOMAIN_RADIUS):
        raise DomainError(f"|z| exceeds Airy evaluation domain {AIRY_DOMAIN_RADIUS:g}")
    lower = zs.imag < 0
    zu = np.where(lower, np.conj(zs), zs)
    ai, aip = _airy_upper(zu)
    ai = np.where(lower, np.conj(ai), ai)
    aip = np.where(lower, np.conj(aip), aip)
    if not (np.all(np.isfinite(ai)) and np.all(np.isfinite(aip))):
        raise DomainError("Airy function overflows at requested argument")
    ai = ai.reshape(arr.shape if not scalar else ())
    aip = aip.reshape(arr.shape if not scalar else ())
    if scalar:
        return complex(ai), complex(aip)
    return ai, aip


def airy_ai(z):
    """Airy function Ai(z) for complex ``z`` with ``|z| <= 1e4``."""
    return airy_pair(z)[0]


def airy_ai_prime(z):
    """Derivative Ai'(z); same domain and accuracy as :func:`airy_ai`."""
    return airy_pair(z)[1]


def _h01(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e = np.exp(1j * z)
    inv = 1.0 / z
    return -1j * e * inv, -e * (z + 1j) * inv * inv


def _sph_h(l: int, z: np.ndarray) -> np.ndarray:
    if l <= 1:
        return _h01(z)[l]
    return np.sqrt(0.5 * np.pi / z) * hankel1(l + 0.5, z)


def sph_hankel1(l: int, z):
    """Spherical Hankel function of the first kind and its derivative.

    Orders 0 and 1 use the closed forms h_0 = -i e^{iz}/z and
    h_1 = -e^{iz}(z+i)/z^2. Higher orders go through the half-integer
    cylindrical Hankel function (AMOS), h_l = sqrt(pi/(2z)) H_{l+1/2}(z),
    evaluated directly at the point. The derivative comes from
    h_l' = h_{l-1} - (l+1)/z h_l (h_0' = -h_1).

    Parameters
    ----------
    l : int
        Order, ``0 <= l <= 512``.
    z : complex or array_like
        Nonzero argument(s).

    Returns
    -------
    value, derivative : complex or ndarray
    """
    l = int(l)
    if l < 0:
        raise DomainError("order must be nonnegative")
    if l > MAX_HANKEL_ORDER:
        raise OrderOverflowError(f"order {l} exceeds {MAX_HANKEL_ORDER}")
    arr = np.asarray(z, dtype=complex)
    if np.any(arr == 0):
        raise PoleError("spherical Hankel function has a pole at z = 0")
    with np.errstate(over="ignore", invalid="ignore"):
        if l == 0:
            value, h1 = _h01(arr)
            deriv = -h1
        else:
            value = _sph_h(l, arr)
            deriv = _sph_h(l - 1, arr) - (l + 1) / arr * value
    if not (np.all(np.isfinite(value)) and np.all(np.isfinite(deriv))):
        raise DomainError(f"h_{l}(z) overflows double precision at the requested argument")
    if arr.ndim == 0:
        return complex(value), complex(deriv)
    return value, deriv
