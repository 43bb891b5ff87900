"""Scattering resonances of a ball in R^3 and the cubic resonance-free barrier.

For the ball of radius R the outgoing solutions separate into h_l(zeta r)
Y_lm, so resonances of the mode l are the zeros of

* Dirichlet: W(zeta) = h_l(zeta R)
* Neumann:   W(zeta) = zeta h_l'(zeta R)
* Robin:     W(zeta) = zeta h_l'(zeta R) + gamma h_l(zeta R)

with h_l the spherical Hankel function of the first kind. Zeros are located
with the argument principle on a pole-free rescaling of W: the factor
exp(-i zeta R) removes the exponential growth in the lower half plane, and
near the origin a power (zeta/s)^{l+1} cancels the pole of order l+1 at 0.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np
from scipy.stats import linregress

from .conditions import BoundaryCondition
from .csfun import MAX_HANKEL_ORDER, sph_hankel1
from .errors import ConvergenceError, DomainError, MissingModeError, PoleError
from .geometry import barrier_constant
from .roots import Rect, find_zeros

CSV_HEADER = ("l", "re_zeta", "im_zeta", "residual", "class", "bc", "gamma", "radius")
RESIDUAL_CIRCLE = 0.25
RESIDUAL_POINTS = 32
NEAR_ORIGIN = 1.0


def _threads() -> int:
    env = os.environ.get("RESLAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as err:
            raise DomainError(f"RESLAB_THREADS must be an integer, got {env!r}") from err
        return max(1, n)
    return os.cpu_count() or 1


def _condition_and_derivative(l: int, zeta, R: float, bc: BoundaryCondition):
    """W(zeta) and dW/dzeta for array or scalar zeta."""
    z = np.asarray(zeta, dtype=complex) * R
    h, hp = sph_hankel1(l, z)
    if bc.kind == "dirichlet":
        return h, R * hp
    zeta = np.asarray(zeta, dtype=complex)
    # h'' from the spherical Bessel equation
    hpp = -(2.0 / z) * hp - (1.0 - l * (l + 1) / (z * z)) * h
    w = zeta * hp
    dw = hp + zeta * R * hpp
    if bc.kind == "robin":
        w = w + bc.gamma * h
        dw = dw + bc.gamma * R * hp
    return w, dw


def resonance_condition(l: int, zeta: complex, R: float, bc: BoundaryCondition) -> complex:
    """Mode-l condition function whose zeros are the ball's resonances.

    Parameters
    ----------
    l : int
        Angular momentum, ``0 <= l <= 512``.
    zeta : complex
        Nonzero frequency.
    R : float
        Ball radius.
    bc : BoundaryCondition
        du/dr + gamma u = 0 on r = R for Robin; gamma = 0 is Neumann.

    Returns
    -------
    complex
        h_l(zeta R) (Dirichlet), zeta h_l'(zeta R) (Neumann) or
        zeta h_l'(zeta R) + gamma h_l(zeta R) (Robin).
    """
    if zeta == 0:
        raise PoleError("the condition function has a pole at zeta = 0")
    if not R > 0:
        raise DomainError("radius must be positive")
    w, _ = _condition_and_derivative(l, complex(zeta), R, bc)
    return complex(w)


class _Scaled:
    """Pole-free, growth-free version of W used for root finding.

    G(zeta) = (zeta/s)^p exp(-i zeta R) W(zeta) / norm, where p = l + 1 when
    the search window comes close to the origin and p = 0 otherwise. Same
    zeros as W away from 0. Values and derivatives are computed together and
    the last evaluation is memoized, since the root finder asks for f and f'
    at the same points.
    """

    def __init__(self, l: int, R: float, bc: BoundaryCondition, window: Rect):
        self.l, self.R, self.bc = l, R, bc
        corners = np.array(window.corners())
        near = _distance_to_origin(window) < NEAR_ORIGIN
        self.power = l + 1 if near else 0
        self.s = float(np.max(np.abs(corners)))
        self.norm = 1.0
        self._key = None
        self._val = None
        ref = np.abs(self._raw(corners)[0])
        self.norm = float(np.max(ref)) if np.all(np.isfinite(ref)) and np.max(ref) > 0 else 1.0

    def _raw(self, z):
        z = np.asarray(z, dtype=complex)
        # Newton may probe far outside the window; overflow there becomes NaN,
        # which the root finder treats as a failed step
        try:
            w, dw = _condition_and_derivative(self.l, z, self.R, self.bc)
        except PoleError:
            raise
        except DomainError:
            nan = np.full(z.shape, complex(np.nan, np.nan))
            return nan, nan
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.exp(-1j * z * self.R)
            g = e * w
            dg = e * (dw - 1j * self.R * w)
            if self.power:
                q = (z / self.s) ** self.power
                dg = q * (dg + self.power / z * g)
                g = q * g
        return g / self.norm, dg / self.norm

    def _eval(self, z):
        arr = np.asarray(z, dtype=complex)
        key = (arr.shape, arr.tobytes())
        if key != self._key:
            if np.any(arr == 0):
                # removable point of the regularized function: use a tiny offset
                arr = np.where(arr == 0, 1e-300 + 0j, arr)
            self._val = self._raw(arr)
            self._key = key
        return self._val

    def f(self, z):
        return self._eval(z)[0]

    def fp(self, z):
        return self._eval(z)[1]


def _distance_to_origin(r: Rect) -> float:
    dx = max(r.re_min, 0.0, -r.re_max)
    dy = max(r.im_min, 0.0, -r.im_max)
    return math.hypot(dx, dy)


def auto_window(l: int, R: float) -> Rect:
    """Default search window for mode l.

    Re zeta in [0.5 l/R, 2.5 (l+1)/R], Im zeta in [-3 S (l/R)^{1/3} - 5, 0],
    with S the sphere's barrier constant. For l = 0 the real range is made
    symmetric about 0 so that purely imaginary zeros are interior.
    """
    S = barrier_constant(1.0 / R)
    re_max = 2.5 * (l + 1) / R
    re_min = 0.5 * l / R if l > 0 else -re_max
    im_min = -3.0 * S * (l / R) ** (1.0 / 3.0) - 5.0
    return Rect(re_min, re_max, im_min, 0.0)


@dataclass(frozen=True)
class ResonanceQuery:
    """Parameters of a ball resonance sweep.

    ``window=None`` selects :func:`auto_window` for each mode.
    """

    radius: float
    bc: BoundaryCondition
    l_min: int
    l_max: int
    window: Rect | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DomainError("radius must be positive and finite")
        if not (0 <= self.l_min <= self.l_max):
            raise DomainError(f"need 0 <= l_min <= l_max, got {self.l_min}, {self.l_max}")
        if self.l_max > MAX_HANKEL_ORDER:
            raise DomainError(f"l_max must not exceed {MAX_HANKEL_ORDER}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise DomainError("tol must be positive")

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "bc": self.bc.kind,
            "gamma": self.bc.effective_gamma,
            "l_min": self.l_min,
            "l_max": self.l_max,
            "window": None if self.window is None else asdict(self.window),
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResonanceQuery":
        bc = BoundaryCondition(d["bc"], float(d["gamma"]) if d["bc"] == "robin" else 0.0)
        window = None if d.get("window") is None else Rect(**d["window"])
        return cls(float(d["radius"]), bc, int(d["l_min"]), int(d["l_max"]), window, float(d["tol"]))


@dataclass(frozen=True)
class ResonanceEntry:
    l: int
    zeta: complex
    residual: float
    cls: str

    @property
    def is_resonance(self) -> bool:
        return self.cls == "resonance"


@dataclass
class ResonanceSet:
    """Zeros of the mode-l condition functions, ordered by l then by -Im zeta."""

    entries: list[ResonanceEntry] = field(default_factory=list)
    query: ResonanceQuery | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def resonances(self) -> list[ResonanceEntry]:
        return [e for e in self.entries if e.is_resonance]

    def modes(self) -> list[int]:
        return sorted({e.l for e in self.entries})

    def first_string(self) -> dict[int, ResonanceEntry]:
        """For each l, the resonance with the largest imaginary part."""
        out: dict[int, ResonanceEntry] = {}
        for e in self.resonances():
            if e.l not in out or e.zeta.imag > out[e.l].zeta.imag:
                out[e.l] = e
        return out

    def restricted(self, l_lo: int, l_hi: int) -> "ResonanceSet":
        return ResonanceSet([e for e in self.entries if l_lo <= e.l <= l_hi], self.query)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        q = self.query
        bc = q.bc.kind if q else ""
        gamma = repr(q.bc.effective_gamma) if q else ""
        radius = repr(q.radius) if q else ""
        for e in self.entries:
            w.writerow([e.l, repr(e.zeta.real), repr(e.zeta.imag), repr(e.residual), e.cls, bc, gamma, radius])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "query": None if self.query is None else self.query.to_dict(),
            "entries": [
                {"l": e.l, "re_zeta": e.zeta.real, "im_zeta": e.zeta.imag, "residual": e.residual, "class": e.cls}
                for e in self.entries
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ResonanceSet":
        rows = list(csv.DictReader(io.StringIO(text)))
        if rows and tuple(rows[0].keys()) != CSV_HEADER:
            raise DomainError(f"unexpected CSV header {tuple(rows[0].keys())}")
        entries = [
            ResonanceEntry(int(r["l"]), complex(float(r["re_zeta"]), float(r["im_zeta"])), float(r["residual"]), r["class"])
            for r in rows
        ]
        query = None
        if rows:
            r0 = rows[0]
            kind = r0["bc"]
            bc = BoundaryCondition(kind, float(r0["gamma"]) if kind == "robin" else 0.0)
            ls = [e.l for e in entries]
            query = ResonanceQuery(float(r0["radius"]), bc, min(ls), max(ls))
        return cls(entries, query)

    @classmethod
    def from_json(cls, text: str) -> "ResonanceSet":
        doc = json.loads(text)
        entries = [
            ResonanceEntry(int(d["l"]), complex(d["re_zeta"], d["im_zeta"]), float(d["residual"]), d["class"])
            for d in doc["entries"]
        ]
        query = None if doc.get("query") is None else ResonanceQuery.from_dict(doc["query"])
        return cls(entries, query)


def normalized_residual(l: int, zeta: complex, R: float, bc: BoundaryCondition, radius: float | None = None) -> float:
    """|W(zeta)| divided by max |W| on a small circle around zeta."""
    rho = RESIDUAL_CIRCLE / R if radius is None else radius
    rho = min(rho, 0.5 * abs(zeta))
    ring = zeta + rho * np.exp(2j * np.pi * np.arange(RESIDUAL_POINTS) / RESIDUAL_POINTS)
    w_ring, _ = _condition_and_derivative(l, ring, R, bc)
    w0, _ = _condition_and_derivative(l, zeta, R, bc)
    return float(abs(w0) / np.max(np.abs(w_ring)))


def _mode_zeros(l: int, query: ResonanceQuery) -> list[ResonanceEntry]:
    R, bc = query.radius, query.bc
    window = query.window if query.window is not None else auto_window(l, R)
    search = window
    reflect = window.re_min < 0.0 < window.re_max
    if reflect:
        # conjugate symmetry zeta -> -conj(zeta): search the right half plus a margin
        margin = 0.05 * (window.re_max - window.re_min)
        right = max(window.re_max, -window.re_min)
        search = Rect(-margin, right, window.im_min, window.im_max)
    fn = _Scaled(l, R, bc, search)
    try:
        found = find_zeros(fn.f, fn.fp, search, query.tol)
    except ConvergenceError as err:
        raise ConvergenceError(f"mode l={l}: {err}") from err
    zs = [z.location for z in found for _ in range(z.multiplicity)]
    if reflect:
        merged: list[complex] = []
        dedupe = 1e-8 * max(1.0, window.re_max - window.re_min)
        for z in zs + [-z.conjugate() for z in zs]:
            if not any(abs(z - m) <= dedupe for m in merged):
                merged.append(z)
        zs = merged
    out = []
    for z in zs:
        if not window.contains(z):
            continue
        if abs(z.real) <= 1e-14 * max(1.0, abs(z)):
            z = complex(0.0, z.imag)
        cls = "resonance" if z.imag < 0 else "bound-state"
        out.append(ResonanceEntry(l, z, normalized_residual(l, z, R, bc), cls))
    out.sort(key=lambda e: (-e.zeta.imag, e.zeta.real))
    return out


def ball_resonances(query: ResonanceQuery, threads: int | None = None) -> ResonanceSet:
    """All zeros of the mode condition functions for l_min <= l <= l_max.

    Modes are searched concurrently (``RESLAB_THREADS`` caps the worker
    count) and assembled in ascending l, so the output does not depend on
    the thread count.
    """
    ls = list(range(query.l_min, query.l_max + 1))
    workers = min(threads or _threads(), len(ls))
    if workers <= 1:
        per_mode = [_mode_zeros(l, query) for l in ls]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_mode = list(pool.map(lambda l: _mode_zeros(l, query), ls))
    return ResonanceSet([e for group in per_mode for e in group], query)


@dataclass
class BarrierReport:
    """Outcome of checking resonances against Im zeta <= -S |zeta|^{1/3} + C."""

    S: float
    C_fit: float
    violations: list[ResonanceEntry]
    S_fit: float
    stderr: float
    n_entries: int
    l_range: tuple[int, int]
    C: float | None = None

    def to_dict(self) -> dict:
        def num(x):
            return None if x is None or not math.isfinite(x) else x

        return {
            "S": self.S,
            "C_fit": self.C_fit,
            "S_fit": num(self.S_fit),
            "stderr": num(self.stderr),
            "n_entries": self.n_entries,
            "l_range": list(self.l_range),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def verify_barrier(rset: ResonanceSet, S: float, C: float | None = None) -> BarrierReport:
    """Smallest C with Im zeta <= -S|zeta|^{1/3} + C over all resonances.

    Bound-state entries are excluded. When a candidate ``C`` is supplied,
    resonances with Im zeta + S|zeta|^{1/3} > C are listed as violations.
    The slope fit over the full mode range is attached when available
    (NaN otherwise).
    """
    res = rset.resonances()
    if not res:
        raise DomainError("resonance set has no resonance-class entries")
    if not (math.isfinite(S) and S >= 0):
        raise DomainError("S must be nonnegative and finite")
    excess = [e.zeta.imag + S * abs(e.zeta) ** (1.0 / 3.0) for e in res]
    C_fit = max(excess)
    violations = [] if C is None else [e for e, x in zip(res, excess) if x > C]
    ls = [e.l for e in res]
    l_range = (min(ls), max(ls))
    try:
        S_fit, stderr = fit_cubic_slope(rset, *l_range)
    except (MissingModeError, DomainError):
        S_fit, stderr = math.nan, math.nan
    return BarrierReport(S, C_fit, violations, S_fit, stderr, len(res), l_range, C)


def fit_cubic_slope(rset: ResonanceSet, l_lo: int, l_hi: int) -> tuple[float, float]:
    """Least-squares slope of -Im zeta against |zeta|^{1/3} over the first string.

    Returns
    -------
    S_fit, stderr : float
        Fitted slope and its standard error.

    Raises
    ------
    MissingModeError
        If some l in [l_lo, l_hi] has no resonance in the set.
    """
    if l_hi - l_lo < 20:
        raise DomainError("the fit needs l_hi - l_lo >= 20")
    first = rset.first_string()
    missing = [l for l in range(l_lo, l_hi + 1) if l not in first]
    if missing:
        raise MissingModeError(f"no first-string resonance for l = {missing}")
    z = np.array([first[l].zeta for l in range(l_lo, l_hi + 1)])
    fit = linregress(np.abs(z) ** (1.0 / 3.0), -z.imag)
    return float(fit.slope), float(fit.stderr)


def first_string(rset: ResonanceSet, ls: Iterable[int] | None = None) -> list[ResonanceEntry]:
    fs = rset.first_string()
    keys = sorted(fs) if ls is None else list(ls)
    return [fs[l] for l in keys if l in fs]
