"""Parametric convex surfaces, principal curvatures and the cubic barrier constant.

Surfaces are described by an atlas of charts, each supplying the point and its
first and second partial derivatives analytically. Principal curvatures are
the eigenvalues of the second fundamental form relative to the first, with the
normal chosen to point into the enclosed body so that convex surfaces have
positive curvatures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize

from .csfun import airy_ai, airy_ai_prime
from .errors import CurvatureError, DegenerateMetricError, DomainError
from .roots import Rect, find_zeros

METRIC_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class Chart:
    """One coordinate patch.

    ``jet(u, v)`` returns ``(X, Xu, Xv, Xuu, Xuv, Xvv)``, each an array of
    shape ``(3,)``.
    """

    jet: Callable[[float, float], tuple[np.ndarray, ...]]
    u_range: tuple[float, float]
    v_range: tuple[float, float]

    def contains(self, u: float, v: float) -> bool:
        return self.u_range[0] <= u <= self.u_range[1] and self.v_range[0] <= v <= self.v_range[1]


@dataclass(frozen=True)
class ParametricSurface:
    """A closed surface given by an atlas of charts.

    Parameters
    ----------
    charts : sequence of Chart
    interior_point : array_like
        Any point strictly inside the enclosed body; used to orient normals.
    name : str
    """

    charts: tuple[Chart, ...]
    interior_point: np.ndarray
    name: str = "surface"

    def jet(self, uv: Sequence[float], chart: int = 0) -> tuple[np.ndarray, ...]:
        u, v = float(uv[0]), float(uv[1])
        ch = self.charts[chart]
        if not ch.contains(u, v):
            raise DomainError(f"({u}, {v}) outside chart {chart} domain {ch.u_range} x {ch.v_range}")
        return ch.jet(u, v)

    def point(self, uv: Sequence[float], chart: int = 0) -> np.ndarray:
        return self.jet(uv, chart)[0]

    def transformed(self, rotation: np.ndarray, translation: Sequence[float] = (0.0, 0.0, 0.0)) -> "ParametricSurface":
        """Image under the rigid motion x -> rotation @ x + translation."""
        rot = np.asarray(rotation, dtype=float)
        if rot.shape != (3, 3) or not np.allclose(rot.T @ rot, np.eye(3), atol=1e-12):
            raise DomainError("rotation must be an orthogonal 3x3 matrix")
        shift = np.asarray(translation, dtype=float)

        def moved(jet):
            def inner(u, v):
                X, *rest = jet(u, v)
                return (rot @ X + shift, *(rot @ d for d in rest))

            return inner

        charts = tuple(Chart(moved(c.jet), c.u_range, c.v_range) for c in self.charts)
        return ParametricSurface(charts, rot @ self.interior_point + shift, self.name + "'")


def _ellipsoid_charts(a: float, b: float, c: float) -> tuple[Chart, ...]:
    band = (0.25 * np.pi, 0.75 * np.pi)
    full = (0.0, 2.0 * np.pi)

    def about_z(u, v):
        su, cu, sv, cv = math.sin(u), math.cos(u), math.sin(v), math.cos(v)
        X = np.array([a * su * cv, b * su * sv, c * cu])
        Xu = np.array([a * cu * cv, b * cu * sv, -c * su])
        Xv = np.array([-a * su * sv, b * su * cv, 0.0])
        Xuu = np.array([-a * su * cv, -b * su * sv, -c * cu])
        Xuv = np.array([-a * cu * sv, b * cu * cv, 0.0])
        Xvv = np.array([-a * su * cv, -b * su * sv, 0.0])
        return X, Xu, Xv, Xuu, Xuv, Xvv

    def about_x(u, v):
        su, cu, sv, cv = math.sin(u), math.cos(u), math.sin(v), math.cos(v)
        X = np.array([a * cu, b * su * cv, c * su * sv])
        Xu = np.array([-a * su, b * cu * cv, c * cu * sv])
        Xv = np.array([0.0, -b * su * sv, c * su * cv])
        Xuu = np.array([-a * cu, -b * su * cv, -c * su * sv])
        Xuv = np.array([0.0, -b * cu * sv, c * cu * cv])
        Xvv = np.array([0.0, -b * su * cv, -c * su * sv])
        return X, Xu, Xv, Xuu, Xuv, Xvv

    return (Chart(about_z, band, full), Chart(about_x, band, full))


def Ellipsoid(a: float, b: float, c: float) -> ParametricSurface:
    """Ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 centred at the origin.

    Two charts are used, each a latitude band |u - pi/2| <= pi/4 around a
    different axis (z, then x), so neither chart touches its own poles.
    Chart 1 maps (pi/2, pi/2) to the point (0, 0, c).
    """
    if not all(math.isfinite(s) and s > 0 for s in (a, b, c)):
        raise DomainError("semi-axes must be positive and finite")
    return ParametricSurface(_ellipsoid_charts(a, b, c), np.zeros(3), f"Ellipsoid({a:g},{b:g},{c:g})")


def Sphere(R: float) -> ParametricSurface:
    """Sphere of radius ``R`` centred at the origin."""
    if not (math.isfinite(R) and R > 0):
        raise DomainError("radius must be positive and finite")
    surf = Ellipsoid(R, R, R)
    return ParametricSurface(surf.charts, surf.interior_point, f"Sphere({R:g})")


def _forms(surface: ParametricSurface, uv, chart: int) -> tuple[np.ndarray, np.ndarray]:
    X, Xu, Xv, Xuu, Xuv, Xvv = surface.jet(uv, chart)
    first = np.array([[Xu @ Xu, Xu @ Xv], [Xu @ Xv, Xv @ Xv]])
    if not np.all(np.isfinite(first)) or np.linalg.det(first) <= 0:
        raise DegenerateMetricError(f"singular first fundamental form at {tuple(uv)}")
    if np.linalg.cond(first) > METRIC_CONDITION_LIMIT:
        raise DegenerateMetricError(f"first fundamental form condition number exceeds 1e12 at {tuple(uv)}")
    normal = np.cross(Xu, Xv)
    normal /= np.linalg.norm(normal)
    if normal @ (surface.interior_point - X) < 0:
        normal = -normal
    second = np.array([[Xuu @ normal, Xuv @ normal], [Xuv @ normal, Xvv @ normal]])
    return first, second


def principal_curvatures(surface: ParametricSurface, uv: Sequence[float], chart: int = 0) -> list[float]:
    """Principal curvatures at a chart point, ascending.

    Eigenvalues of the second fundamental form with respect to the first,
    using the normal that points into the body. Both are positive on a
    strictly convex surface.

    Raises
    ------
    DegenerateMetricError
        If the first fundamental form is singular or has condition number
        above 1e12.
    """
    first, second = _forms(surface, uv, chart)
    return [float(k) for k in eigh(second, first, eigvals_only=True)]


@dataclass
class CurvatureReport:
    """Principal curvatures sampled on the chart grids of a surface."""

    samples: list[tuple[int, float, float]] = field(default_factory=list)
    curvatures: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    min_k: float = math.inf
    argmin: tuple[int, float, float] = (0, 0.0, 0.0)

    @property
    def strictly_convex(self) -> bool:
        return bool(self.curvatures.size) and bool(np.all(self.curvatures > 0))


def curvature_report(surface: ParametricSurface, grid_n: int) -> CurvatureReport:
    """Sample both principal curvatures on a grid_n x grid_n grid of every chart."""
    rep = CurvatureReport()
    rows = []
    for ci, ch in enumerate(surface.charts):
        us = np.linspace(*ch.u_range, grid_n)
        vs = np.linspace(*ch.v_range, grid_n)
        for u in us:
            for v in vs:
                rep.samples.append((ci, float(u), float(v)))
                rows.append(principal_curvatures(surface, (u, v), ci))
    rep.curvatures = np.array(rows)
    k = int(np.argmin(rep.curvatures[:, 0]))
    rep.min_k = float(rep.curvatures[k, 0])
    rep.argmin = rep.samples[k]
    return rep


def min_curvature(surface: ParametricSurface, grid_n: int = 32) -> float:
    """Smallest principal curvature over the surface.

    A grid_n x grid_n grid on each chart locates a candidate, which is then
    refined by Nelder-Mead inside that chart. The result never exceeds the
    grid minimum, so it is nonincreasing under nested grid refinement.
    """
    if grid_n < 8:
        raise DomainError("grid_n must be at least 8")
    rep = curvature_report(surface, grid_n)
    ci, u0, v0 = rep.argmin
    ch = surface.charts[ci]

    def objective(p):
        u = min(max(p[0], ch.u_range[0]), ch.u_range[1])
        v = min(max(p[1], ch.v_range[0]), ch.v_range[1])
        return principal_curvatures(surface, (u, v), ci)[0]

    res = minimize(objective, np.array([u0, v0]), method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    return float(min(rep.min_k, res.fun))


@lru_cache(maxsize=1)
def first_airy_prime_zero() -> float:
    """Magnitude of the first zero of Ai', located with the argument-principle solver."""
    zeros = find_zeros(airy_ai_prime, lambda z: z * airy_ai(z), Rect(-2.0, -0.5, -0.5, 0.5), tol=1e-14)
    if len(zeros) != 1:
        raise ArithmeticError("expected a single Ai' zero in [-2, -0.5]")
    return -zeros.zeros[0].location.real


@lru_cache(maxsize=1)
def first_airy_zero() -> float:
    """Magnitude of the first zero of Ai."""
    zeros = find_zeros(airy_ai, airy_ai_prime, Rect(-3.0, -1.5, -0.5, 0.5), tol=1e-14)
    if len(zeros) != 1:
        raise ArithmeticError("expected a single Ai zero in [-3, -1.5]")
    return -zeros.zeros[0].location.real


def _barrier(min_k: float, airy_zero: float) -> float:
    if not (math.isfinite(min_k) and min_k > 0):
        raise CurvatureError(f"minimum curvature must be positive, got {min_k}")
    return 2.0 ** (-1.0 / 3.0) * math.cos(math.pi / 6.0) * airy_zero * min_k ** (2.0 / 3.0)


def barrier_constant(min_k: float) -> float:
    """Width constant S of the cubic resonance-free region.

    S = 2^{-1/3} cos(pi/6) a'_1 k^{2/3}, with a'_1 ~ 1.01879 the magnitude of
    the first zero of Ai' and k the smallest principal curvature of the
    obstacle boundary.
    """
    return _barrier(min_k, first_airy_prime_zero())


def dirichlet_barrier_constant(min_k: float) -> float:
    """Same as :func:`barrier_constant` with the first Ai zero (~2.33811) in place of Ai'."""
    return _barrier(min_k, first_airy_zero())
