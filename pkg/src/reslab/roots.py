"""Zeros of holomorphic functions in a rectangle.

The argument principle counts zeros by unwrapping the phase of ``f`` along the
rectangle boundary; cells holding more than one zero are split into quadrants
until each holds a single zero, which is then polished by Newton's method.

Functions passed in must accept numpy arrays of complex points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryZeroError, ConvergenceError, DomainError, ResolutionError

DEFAULT_FLOOR = 1e-280
MAX_REFINE = 24
SPLIT_FRACTIONS = (0.5, 0.4619, 0.5381, 0.4237, 0.5763, 0.3856, 0.6144)


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("rectangle bounds must be finite")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError(f"degenerate rectangle {vals}")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def diag(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    def corners(self) -> tuple[complex, complex, complex, complex]:
        """Counterclockwise from the lower-left corner."""
        return (
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        )

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min - margin <= z.real <= self.re_max + margin
            and self.im_min - margin <= z.imag <= self.im_max + margin
        )

    def split(self, fx: float = 0.5, fy: float = 0.5) -> list["Rect"]:
        """Quadrants in row-major order, bottom row first."""
        xm = self.re_min + fx * (self.re_max - self.re_min)
        ym = self.im_min + fy * (self.im_max - self.im_min)
        return [
            Rect(self.re_min, xm, self.im_min, ym),
            Rect(xm, self.re_max, self.im_min, ym),
            Rect(self.re_min, xm, ym, self.im_max),
            Rect(xm, self.re_max, ym, self.im_max),
        ]


@dataclass(frozen=True)
class Zero:
    location: complex
    residual: float
    newton_iters: int
    multiplicity: int = 1


@dataclass
class ZeroList:
    zeros: list[Zero] = field(default_factory=list)

    def __iter__(self):
        return iter(self.zeros)

    def __len__(self) -> int:
        return len(self.zeros)

    def locations(self) -> np.ndarray:
        return np.array([z.location for z in self.zeros], dtype=complex)

    @property
    def total_multiplicity(self) -> int:
        return sum(z.multiplicity for z in self.zeros)


def _sample(f, zs: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array, falling back to pointwise calls for scalar-only callables."""
    try:
        w = np.asarray(f(zs), dtype=complex)
        if w.shape == zs.shape:
            return w
    except TypeError:
        pass
    return np.array([complex(f(z)) for z in zs], dtype=complex)


def _rate(f_prime, zs: np.ndarray, w: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.abs(_sample(f_prime, zs) / w)


def _edge_phase(f, a: complex, b: complex, n_samples: int, floor: float, f_prime=None) -> float:
    """Total change of arg f along the segment a -> b.

    Segments whose phase jump exceeds pi/2 are bisected. When ``f_prime`` is
    given, segments are also bisected while |f'/f| * |dz| (the local rate of
    phase change times the step) exceeds pi/2. Once every jump is resolved,
    all segments are bisected once more and the total must not change; this
    catches phases aliased by whole turns between samples.
    """
    t = np.linspace(0.0, 1.0, n_samples + 1)
    zs = a + (b - a) * t
    w = _sample(f, zs)
    rate = None if f_prime is None else _rate(f_prime, zs, w)
    length = abs(b - a)
    previous = None
    for _ in range(MAX_REFINE + 1):
        if not np.all(np.isfinite(w)):
            raise ResolutionError(f"non-finite function value on segment {a} -> {b}")
        if np.min(np.abs(w)) < floor:
            k = int(np.argmin(np.abs(w)))
            raise BoundaryZeroError(f"|f| below floor {floor:g} near {a + (b - a) * t[k]}")
        d = np.angle(w[1:] / w[:-1])
        bad = np.abs(d) > 0.5 * np.pi
        if rate is not None:
            bad |= np.maximum(rate[1:], rate[:-1]) * np.diff(t) * length > 0.5 * np.pi
        if bad.any():
            previous = None
            idx = np.nonzero(bad)[0]
        else:
            total = float(d.sum())
            if previous is not None and abs(total - previous) < 1e-6:
                return total
            previous = total
            idx = np.arange(len(d))
        if len(t) + len(idx) > 1 << 21:
            break
        tm = 0.5 * (t[idx] + t[idx + 1])
        zm = a + (b - a) * tm
        wm = _sample(f, zm)
        t = np.insert(t, idx + 1, tm)
        w = np.insert(w, idx + 1, wm)
        if rate is not None:
            rate = np.insert(rate, idx + 1, _rate(f_prime, zm, wm))
    raise ResolutionError(f"phase of f not resolved on segment {a} -> {b}")


class _PhaseCache:
    """Memoizes edge phase changes; shared edges between cells are evaluated once."""

    def __init__(self, f, n_samples: int, floor: float, f_prime=None):
        self.f = f
        self.f_prime = f_prime
        self.n_samples = n_samples
        self.floor = floor
        self._store: dict[tuple[complex, complex], float] = {}

    def edge(self, a: complex, b: complex) -> float:
        if (a, b) in self._store:
            return self._store[(a, b)]
        if (b, a) in self._store:
            return -self._store[(b, a)]
        val = _edge_phase(self.f, a, b, self.n_samples, self.floor, self.f_prime)
        self._store[(a, b)] = val
        return val

    def count(self, rect: Rect) -> int:
        c = rect.corners()
        total = sum(self.edge(c[i], c[(i + 1) % 4]) for i in range(4))
        turns = total / (2.0 * np.pi)
        n = round(turns)
        if abs(turns - n) > 1e-6:
            raise ResolutionError(f"non-integer winding {turns:.6f} on {rect}")
        return int(n)


def winding_count(
    f, rect: Rect, n_samples: int = 64, floor: float = DEFAULT_FLOOR, *, f_prime=None
) -> int:
    """Number of zeros (with multiplicity) of holomorphic ``f`` inside ``rect``.

    Passing ``f_prime`` lets the boundary sampler bound the phase change per
    step, which guards against aliasing where ``f`` rotates quickly.

    Raises
    ------
    BoundaryZeroError
        If ``|f|`` falls below ``floor`` on a boundary sample.
    ResolutionError
        If adjacent samples cannot be brought within a pi/2 phase jump.
    """
    return _PhaseCache(f, n_samples, floor, f_prime).count(rect)


def newton(f, f_prime, z0: complex, tol: float, max_iter: int = 100) -> tuple[complex, int, bool]:
    """Plain Newton iteration; returns (z, iterations, converged).

    The step tolerance is floored at 16 ulp of ``|z|`` so that a request finer
    than double precision still terminates.
    """
    z = complex(z0)
    for it in range(1, max_iter + 1):
        fz = complex(f(z))
        dfz = complex(f_prime(z))
        if fz == 0:
            return z, it, True
        if dfz == 0 or not (np.isfinite(fz) and np.isfinite(dfz)):
            return z, it, False
        step = fz / dfz
        z = z - step
        if abs(step) <= max(tol, 16 * np.finfo(float).eps * abs(z)):
            return z, it, True
    return z, max_iter, False


def find_zeros(
    f,
    f_prime,
    rect: Rect,
    tol: float = 1e-12,
    *,
    n_samples: int = 64,
    floor: float = DEFAULT_FLOOR,
    max_depth: int = 40,
    max_newton: int = 100,
    cluster_radius: float | None = None,
) -> ZeroList:
    """All zeros of ``f`` in ``rect``, Newton-polished to ``|dz| <= tol``.

    Cells are visited depth-first in row-major quadrant order, so the output
    order is deterministic. Zeros closer together than ``cluster_radius``
    (default ``1e-8 * rect.diag``) are reported once, with multiplicity taken
    from the winding number.
    """
    if cluster_radius is None:
        cluster_radius = 1e-8 * rect.diag
    cache = _PhaseCache(f, n_samples, floor, f_prime)
    total = cache.count(rect)
    found: list[Zero] = []

    def polish(cell: Rect, count: int) -> Zero | None:
        z, iters, ok = newton(f, f_prime, cell.center, tol, max_newton)
        margin = 1e-9 * max(cell.diag, abs(z))
        if ok and cell.contains(z, margin):
            return Zero(z, float(abs(f(z))), iters, count)
        return None

    def visit(cell: Rect, count: int, depth: int) -> None:
        if count == 0:
            return
        if count == 1 or cell.diag <= cluster_radius:
            zero = polish(cell, count)
            if zero is not None:
                found.append(zero)
                return
            if cell.diag <= cluster_radius:
                c = cell.center
                found.append(Zero(c, float(abs(f(c))), max_newton, count))
                return
        if depth >= max_depth:
            raise ConvergenceError(f"subdivision depth {max_depth} exceeded near {cell.center}")
        last_err: Exception | None = None
        for frac in SPLIT_FRACTIONS:
            kids = cell.split(frac, frac)
            try:
                counts = [cache.count(k) for k in kids]
            except (BoundaryZeroError, ResolutionError) as err:
                last_err = err
                continue
            if sum(counts) != count:
                last_err = ResolutionError(f"count mismatch {counts} vs {count} in {cell}")
                continue
            for kid, c in zip(kids, counts):
                visit(kid, c, depth + 1)
            return
        raise ConvergenceError(f"could not subdivide {cell}: {last_err}")

    visit(rect, total, 0)
    out = ZeroList(found)
    if out.total_multiplicity != total:
        raise ConvergenceError(f"found {out.total_multiplicity} zeros, winding count {total}")
    return out
