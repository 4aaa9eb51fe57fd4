"""Oscillator definitions in first-order phase-plane form.

All systems are written as

    y' = z
    z' = -eps * f(y, z) - g(y)

with a damping function ``f`` scaled by the nonlinearity parameter ``eps``
and a restoring force ``g``.  Two named members:

* Rayleigh:     y'' + eps*(y'^3/3 - y') + y = 0,   f(y, z) = z**3/3 - z
* Van der Pol:  x'' + eps*x'*(x^2 - 1)  + x = 0,   f(y, z) = z*(y**2 - 1)

Differentiating the Rayleigh equation and substituting x = y' turns it into
the Van der Pol equation, so the two limit cycles are images of each other
under (y, z) -> (z, z').  :func:`rayleigh_vdp_link` verifies that mapping
numerically on sampled trajectories via finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError

RAYLEIGH = "rayleigh"
VAN_DER_POL = "vanderpol"
LIENARD = "lienard"

_KINDS = (RAYLEIGH, VAN_DER_POL, LIENARD)


@dataclass(frozen=True)
class PhasePoint:
    """A point of the extended phase plane (position, velocity, time)."""

    y: float
    z: float
    t: float = 0.0

    def __post_init__(self):
        for name in ("y", "z", "t"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"non-finite phase coordinate {name}={v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.y, self.z], dtype=float)


@dataclass(frozen=True)
class OscillatorSpec:
    """A second-order oscillator ``y'' + eps*f(y, y') + g(y) = 0``.

    Use the :meth:`rayleigh`, :meth:`van_der_pol` or :meth:`lienard`
    constructors rather than filling fields by hand; the named kinds carry
    their damping/restoring functions implicitly.
    """

    kind: str
    epsilon: float
    damping: Optional[Callable[[float, float], float]] = field(
        default=None, compare=False
    )
    restoring: Optional[Callable[[float], float]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown oscillator kind {self.kind!r}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise DomainError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        if self.kind == LIENARD and (self.damping is None or self.restoring is None):
            raise DomainError("custom oscillators need damping and restoring functions")

    # -- constructors -------------------------------------------------------

    @classmethod
    def rayleigh(cls, epsilon: float) -> "OscillatorSpec":
        return cls(RAYLEIGH, float(epsilon))

    @classmethod
    def van_der_pol(cls, epsilon: float) -> "OscillatorSpec":
        return cls(VAN_DER_POL, float(epsilon))

    @classmethod
    def lienard(
        cls,
        epsilon: float,
        damping: Callable[[float, float], float],
        restoring: Callable[[float], float],
    ) -> "OscillatorSpec":
        """General system ``y'' + eps*damping(y, y') + restoring(y) = 0``."""
        return cls(LIENARD, float(epsilon), damping, restoring)

    # -- serialization (named kinds only) ------------------------------------

    def to_dict(self) -> dict:
        if self.kind == LIENARD:
            raise DomainError("custom oscillators with callables are not serializable")
        return {"kind": self.kind, "epsilon": self.epsilon}

    @classmethod
    def from_dict(cls, data: dict) -> "OscillatorSpec":
        return cls(str(data["kind"]), float(data["epsilon"]))

    # -- vector field ----------------------------------------------------------

    def field_function(self) -> Callable[[float, np.ndarray], list]:
        """Right-hand side ``fun(t, state)`` suitable for ODE solvers."""
        eps = self.epsilon
        if self.kind == RAYLEIGH:

            def fun(t, state):
                y, z = state
                return [z, eps * (z - z * z * z / 3.0) - y]

        elif self.kind == VAN_DER_POL:

            def fun(t, state):
                y, z = state
                return [z, eps * z * (1.0 - y * y) - y]

        else:
            f, g = self.damping, self.restoring

            def fun(t, state):
                y, z = state
                return [z, -eps * f(y, z) - g(y)]

        return fun


def rhs(spec: OscillatorSpec, point: PhasePoint) -> Tuple[float, float]:
    """Phase-plane velocity ``(y', z')`` at a single point.

    >>> dy, dz = rhs(OscillatorSpec.rayleigh(1.0), PhasePoint(0.0, 1.0))
    >>> (dy, dz)
    (1.0, 0.6666666666666667)
    """
    dy, dz = spec.field_function()(point.t, (point.y, point.z))
    return float(dy), float(dz)


def rayleigh_vdp_link(
    epsilon: float, t: np.ndarray, z: np.ndarray
) -> np.ndarray:
    """Residual of the velocity-substitution link between the two systems.

    Given uniform samples ``z(t) = y'(t)`` of a Rayleigh trajectory, the
    substitution ``x = y'`` should satisfy the Van der Pol equation
    ``x'' + eps*x'*(x^2 - 1) + x = 0``.  This evaluates that equation with
    second-order central differences for ``x'`` and ``x''`` and returns the
    residual at the interior sample points.  For an exact trajectory the
    residual is pure finite-difference error, O(dt^2).
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(z, dtype=float)
    if t.ndim != 1 or t.shape != x.shape or t.size < 3:
        raise DomainError("need at least three matching 1-d samples")
    steps = np.diff(t)
    dt = steps.mean()
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-8, atol=1e-12):
        raise DomainError("link residual requires uniform time samples")
    xdot = (x[2:] - x[:-2]) / (2.0 * dt)
    xddot = (x[2:] - 2.0 * x[1:-1] + x[:-2]) / (dt * dt)
    xin = x[1:-1]
    return xddot + epsilon * xdot * (xin * xin - 1.0) + xin
