"""Complex-scaling contours and the symbol of the scaled Laplacian.

Near a convex obstacle the exterior is deformed into the totally real
submanifold {x + i theta f'(x)} with f = d^2/2, d the distance to the
obstacle. In normal coordinates the deformation is y + g(t) nu(y) with a
unit-speed complex curve g. This module builds g and evaluates the
principal symbol

    p(x, xi) = <(1 + i theta f''(x))^{-1} xi, (1 + i theta f''(x))^{-1} xi>

(complex bilinear pairing), checking that it stays inside a sector of the
lower half plane away from the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError

THETA_MAX = math.sqrt(3.0)
DEFAULT_THETA = math.sqrt(3.0)
DEFAULT_L = 4.0
UNIT_SPEED_TOL = 1e-8
_GL_NODES, _GL_WEIGHTS = leggauss(32)


def _smoothstep5(x):
    x = np.clip(x, 0.0, 1.0)
    return x**3 * (10.0 - 15.0 * x + 6.0 * x**2)


@dataclass(frozen=True)
class ContourSpec:
    """Unit-speed contour g : [0, inf) -> C.

    g(t) = t (1 + i theta)/|1 + i theta| for t <= t_inner, and
    g(t) = t (1 + i phi)/|1 + i phi| + offset for t >= t_outer. In between,
    arg g'(t) moves monotonically from arg(1 + i theta) to arg(1 + i phi)
    along a quintic smoothstep, so |g'| = 1 everywhere.

    Parameters
    ----------
    theta : float
        Scaling angle, 0 <= theta <= sqrt(3). The default sqrt(3) makes
        g(t) = t exp(i pi/3) near 0. theta = 0 gives the identity contour.
    phi : float, optional
        Far-field angle, 0 <= phi <= theta. Defaults to theta/4.
    L : float
        Inverse length of the near-boundary layer.
    t_inner, t_outer : float, optional
        Transition endpoints, defaulting to 1/(2L) and 2/L.
    """

    theta: float = DEFAULT_THETA
    phi: float | None = None
    L: float = DEFAULT_L
    t_inner: float | None = None
    t_outer: float | None = None
    _g_outer: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.theta) and 0.0 <= self.theta <= THETA_MAX):
            raise DomainError(f"theta must lie in [0, {THETA_MAX:.6f}], got {self.theta}")
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError("L must be positive")
        if self.phi is None:
            object.__setattr__(self, "phi", self.theta / 4.0)
        if self.t_inner is None:
            object.__setattr__(self, "t_inner", 1.0 / (2.0 * self.L))
        if self.t_outer is None:
            object.__setattr__(self, "t_outer", 2.0 / self.L)
        if not (0.0 <= self.phi <= self.theta):
            raise DomainError("phi must lie in [0, theta]")
        if not (0.0 < self.t_inner < self.t_outer):
            raise DomainError("need 0 < t_inner < t_outer")
        object.__setattr__(self, "_g_outer", complex(_transition(self, np.array([self.t_outer]))[0]))

    @property
    def inner_angle(self) -> float:
        return math.atan(self.theta)

    @property
    def outer_angle(self) -> float:
        return math.atan(self.phi)

    def slope_angle(self, t):
        """arg g'(t)."""
        t = np.asarray(t, dtype=float)
        s = _smoothstep5((t - self.t_inner) / (self.t_outer - self.t_inner))
        return self.inner_angle + (self.outer_angle - self.inner_angle) * s


def _transition(spec: ContourSpec, t: np.ndarray) -> np.ndarray:
    # g(t) = g(t_inner) + integral of exp(i arg g') over [t_inner, t]
    a = spec.t_inner
    half = 0.5 * (t - a)
    nodes = a + half[:, None] * (_GL_NODES[None, :] + 1.0)
    integral = half * (np.exp(1j * spec.slope_angle(nodes)) @ _GL_WEIGHTS)
    return a * np.exp(1j * spec.inner_angle) + integral


def contour_g(spec: ContourSpec, t):
    """Evaluate g(t) and g'(t).

    Parameters
    ----------
    spec : ContourSpec
    t : float or array_like
        Nonnegative contour parameters.

    Returns
    -------
    g, g_prime : complex or ndarray
        Same shape as ``t``. Closed forms are used for t <= t_inner and
        t >= t_outer; the transition is integrated by 32-point
        Gauss-Legendre quadrature of the smooth unit-speed tangent.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("contour parameter must be finite and nonnegative")
    flat = arr.ravel()
    g = np.empty(flat.shape, dtype=complex)
    inner = flat <= spec.t_inner
    outer = flat >= spec.t_outer
    mid = ~(inner | outer)
    g[inner] = flat[inner] * np.exp(1j * spec.inner_angle)
    g[outer] = spec._g_outer + (flat[outer] - spec.t_outer) * np.exp(1j * spec.outer_angle)
    if np.any(mid):
        g[mid] = _transition(spec, flat[mid])
    gp = np.exp(1j * spec.slope_angle(flat))
    g, gp = g.reshape(arr.shape), gp.reshape(arr.shape)
    if arr.ndim == 0:
        return complex(g), complex(gp)
    return g, gp


@dataclass(frozen=True)
class ContourCheck:
    """Sampled contour invariants; each ``*_ok`` flag is a pass/fail."""

    max_speed_error: float
    min_arg_g: float
    max_arg_g: float
    min_arg_gp: float
    max_arg_gp: float
    speed_ok: bool
    arg_g_ok: bool
    arg_gp_ok: bool

    @property
    def ok(self) -> bool:
        return self.speed_ok and self.arg_g_ok and self.arg_gp_ok


def check_contour(spec: ContourSpec, n_samples: int = 10_000, t_max: float | None = None, gp_upper: float | None = None) -> ContourCheck:
    """Verify |g'| = 1 and the argument windows of g and g' on samples.

    arg(1 + i phi) <= arg g(t) <= arg(1 + i theta) and
    arg(1 + i phi)/2 <= arg g'(t) <= ``gp_upper`` (default arg(1 + i theta)).
    """
    t_max = 4.0 * spec.t_outer if t_max is None else t_max
    t = np.linspace(0.0, t_max, n_samples + 1)[1:]
    g, gp = contour_g(spec, t)
    lo, hi = spec.outer_angle, spec.inner_angle
    hi_gp = hi if gp_upper is None else gp_upper
    slack = 1e-12
    arg_g, arg_gp = np.angle(g), np.angle(gp)
    speed = float(np.max(np.abs(np.abs(gp) - 1.0)))
    return ContourCheck(
        max_speed_error=speed,
        min_arg_g=float(arg_g.min()),
        max_arg_g=float(arg_g.max()),
        min_arg_gp=float(arg_gp.min()),
        max_arg_gp=float(arg_gp.max()),
        speed_ok=speed <= UNIT_SPEED_TOL,
        arg_g_ok=bool(arg_g.min() >= lo - slack and arg_g.max() <= hi + slack),
        arg_gp_ok=bool(arg_gp.min() >= 0.5 * lo - slack and arg_gp.max() <= hi_gp + slack),
    )


def normal_coordinate_point(spec: ContourSpec, y, nu, x_n):
    """Contour point y + g(|1 + i theta| x_n) nu over a boundary point y with unit normal nu."""
    stretch = abs(complex(1.0, spec.theta))
    g, _ = contour_g(spec, stretch * float(x_n))
    return np.asarray(y, dtype=float) + g * np.asarray(nu, dtype=float)


@dataclass(frozen=True)
class HessianField:
    """Hessian x -> f''(x) of the scaling function outside an obstacle.

    Parameters
    ----------
    evaluator : callable
        Maps a point of shape ``(dim,)`` to a symmetric ``(dim, dim)`` array.
    dim : int
    distance : callable, optional
        Distance from a point to the obstacle, used to place samples.
    name : str
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    dim: int = 3
    distance: Callable[[np.ndarray], float] | None = None
    name: str = "hessian"

    def __call__(self, x) -> np.ndarray:
        H = np.asarray(self.evaluator(np.asarray(x, dtype=float)), dtype=float)
        if H.shape != (self.dim, self.dim):
            raise DomainError(f"hessian has shape {H.shape}, expected {(self.dim, self.dim)}")
        return 0.5 * (H + H.T)


def ball_hessian(R: float = 1.0) -> HessianField:
    """f''(x) for f = d^2/2 outside the ball |x| <= R.

    With r = |x| and x^ = x/r, f'' = x^ x^T + ((r - R)/r)(I - x^ x^T): one
    along the normal and d/r on the tangent plane.
    """
    if not (math.isfinite(R) and R > 0):
        raise DomainError("radius must be positive")

    def f2(x):
        r = float(np.linalg.norm(x))
        if r < R:
            raise DomainError("point lies inside the obstacle")
        xh = x / r
        radial = np.outer(xh, xh)
        return radial + ((r - R) / r) * (np.eye(3) - radial)

    return HessianField(f2, 3, lambda x: float(np.linalg.norm(x)) - R, f"ball({R:g})")


def symbol_p(theta: float, hess, xi) -> tuple[complex, float, float]:
    """Principal symbol of the scaled Laplacian and its real/imaginary parts.

    Returns
    -------
    p : complex
        <y, y> with y = (1 + i theta H)^{-1} xi (bilinear, no conjugation).
    a, b : float
        a = <(1 - (theta H)^2) v, v> and b = 2 theta <H v, v> with
        v = (1 + (theta H)^2)^{-1} xi, so that p = a - i b.
    """
    H = np.asarray(hess, dtype=float)
    xi = np.asarray(xi, dtype=float)
    n = H.shape[0]
    eye = np.eye(n)
    y = np.linalg.solve(eye + 1j * theta * H, xi.astype(complex))
    p = complex(y @ y)
    tH = theta * H
    v = np.linalg.solve(eye + tH @ tH, xi)
    a = float(v @ (eye - tH @ tH) @ v)
    b = float(2.0 * theta * (v @ H @ v))
    return p, a, b


def fibonacci_sphere(n: int) -> np.ndarray:
    """n nearly uniform unit vectors in R^3, shape ``(n, 3)``."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    rho = np.sqrt(1.0 - z * z)
    ang = math.pi * (3.0 - math.sqrt(5.0)) * k
    return np.column_stack([rho * np.cos(ang), rho * np.sin(ang), z])


@dataclass(frozen=True)
class WindowScan:
    """Result of a sector scan of the symbol; ``epsilon <= 0`` marks a failure."""

    epsilon: float
    worst_point: np.ndarray
    worst_xi: np.ndarray
    worst_p: complex


def arg_window_scan(spec: ContourSpec, hess_field: HessianField, delta: float, sample_n: int = 64, radius: float = 1.0) -> WindowScan:
    """Largest epsilon with epsilon <= -arg p <= pi - epsilon on samples.

    Points are x = (R + t) x^ with t log-spaced on [delta, 10 R] and x^ on
    a Fibonacci grid of boundary directions; covectors xi are unit vectors
    on a Fibonacci grid.
    """
    if not (math.isfinite(delta) and delta > 0):
        raise DomainError("delta must be positive")
    if sample_n < 4:
        raise DomainError("sample_n must be at least 4")
    ts = np.geomspace(delta, max(10.0 * radius, 2.0 * delta), sample_n)
    bases = fibonacci_sphere(max(8, sample_n // 8))
    xis = fibonacci_sphere(sample_n)
    eye = np.eye(3)
    best = (math.inf, None, None, 0j)
    for xh in bases:
        for t in ts:
            x = (radius + t) * xh
            M = np.linalg.inv(eye + 1j * spec.theta * hess_field(x))
            y = xis @ M.T
            p = np.einsum("ij,ij->i", y, y)
            ang = -np.angle(p)
            margin = np.minimum(ang, math.pi - ang)
            k = int(np.argmin(margin))
            if margin[k] < best[0]:
                best = (float(margin[k]), x, xis[k], complex(p[k]))
    return WindowScan(best[0], best[1], best[2], best[3])


def arg_window_check(spec: ContourSpec, hess_field: HessianField, delta: float, sample_n: int = 64) -> float:
    """Sector margin epsilon of the scaled symbol for t >= delta.

    A positive value certifies epsilon <= -arg p <= pi - epsilon at the
    sampled resolution; a nonpositive value means the window fails (use
    :func:`arg_window_scan` for the offending sample).
    """
    return arg_window_scan(spec, hess_field, delta, sample_n).epsilon
