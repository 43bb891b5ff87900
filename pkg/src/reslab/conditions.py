"""Boundary conditions shared by the ball resonance and Airy-model code.

The sign convention is du/dnu + gamma * u = 0 with nu the unit normal pointing
out of the obstacle (into the exterior domain). In boundary-normal
coordinates t >= 0 this reads u'(0) + gamma * u(0) = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

KINDS = ("dirichlet", "neumann", "robin")


@dataclass(frozen=True)
class BoundaryCondition:
    """Dirichlet, Neumann or Robin condition at the obstacle boundary.

    Parameters
    ----------
    kind : {"dirichlet", "neumann", "robin"}
    gamma : float
        Robin coefficient. Must be 0 for the other kinds.
    scaled_phase : complex, optional
        Unit-modulus factor multiplying the normal derivative, used for the
        condition on a complex-scaled contour (``e^{-i pi/3}`` there).
    """

    kind: str
    gamma: float = 0.0
    scaled_phase: complex | None = None

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in KINDS:
            raise DomainError(f"unknown boundary condition {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        if not math.isfinite(self.gamma):
            raise DomainError("gamma must be finite")
        if kind != "robin" and self.gamma != 0.0:
            raise DomainError(f"gamma is only meaningful for Robin conditions, got {self.gamma}")
        if self.scaled_phase is not None:
            ph = complex(self.scaled_phase)
            if not cmath.isfinite(ph) or abs(abs(ph) - 1.0) > 1e-12:
                raise DomainError("scaled_phase must have unit modulus")
            object.__setattr__(self, "scaled_phase", ph)

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls("dirichlet")

    @classmethod
    def neumann(cls) -> "BoundaryCondition":
        return cls("neumann")

    @classmethod
    def robin(cls, gamma: float, scaled_phase: complex | None = None) -> "BoundaryCondition":
        return cls("robin", float(gamma), scaled_phase)

    @property
    def effective_gamma(self) -> float:
        """Robin coefficient, 0 for Neumann (Dirichlet has none)."""
        return self.gamma if self.kind == "robin" else 0.0

    def label(self) -> str:
        if self.kind == "robin":
            return f"robin({self.gamma:g})"
        return self.kind
