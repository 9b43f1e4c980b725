"""Parametric boundary curves and their trapezoidal discretizations."""

from dataclasses import dataclass, field

import numpy as np

CURVE_KINDS = ("kite", "peanut", "circle")


@dataclass(frozen=True)
class ParametricCurve:
    """A smooth, 2*pi-periodic, counterclockwise closed curve.

    Parameters
    ----------
    kind : {"kite", "peanut", "circle"}
    center : tuple of float
        Only used for ``kind="circle"``.
    radius : float
        Only used for ``kind="circle"``.
    """

    kind: str
    center: tuple = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ValueError(f"unknown curve {self.kind!r}; expected one of {CURVE_KINDS}")
        if self.kind == "circle" and not self.radius > 0:
            raise ValueError("circle radius must be positive")

    @classmethod
    def circle(cls, radius=1.0, center=(0.0, 0.0)):
        return cls("circle", center=tuple(float(c) for c in center), radius=float(radius))

    @property
    def interior_point(self):
        """A point the curve is star-shaped about."""
        if self.kind == "kite":
            return np.array([-0.5, 0.0])
        if self.kind == "circle":
            return np.array(self.center, dtype=float)
        return np.zeros(2)

    def point(self, t):
        """Curve points, shape ``t.shape + (2,)``."""
        t = np.asarray(t, dtype=float)
        c, s = np.cos(t), np.sin(t)
        if self.kind == "kite":
            x = np.stack([c + 0.65 * np.cos(2 * t) - 0.65, 1.5 * s], axis=-1)
        elif self.kind == "peanut":
            rho = np.sqrt(3 * c**2 + 1)
            x = np.stack([rho * c, rho * s], axis=-1)
        else:
            x = self.radius * np.stack([c, s], axis=-1) + np.asarray(self.center)
        return x

    def derivative(self, t):
        """First derivative dx/dt."""
        t = np.asarray(t, dtype=float)
        c, s = np.cos(t), np.sin(t)
        if self.kind == "kite":
            return np.stack([-s - 1.3 * np.sin(2 * t), 1.5 * c], axis=-1)
        if self.kind == "peanut":
            rho = np.sqrt(3 * c**2 + 1)
            drho = -3 * c * s / rho
            return np.stack([drho * c - rho * s, drho * s + rho * c], axis=-1)
        return self.radius * np.stack([-s, c], axis=-1)

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        c, s = np.cos(t), np.sin(t)
        if self.kind == "kite":
            return np.stack([-c - 2.6 * np.cos(2 * t), -1.5 * s], axis=-1)
        if self.kind == "peanut":
            rho = np.sqrt(3 * c**2 + 1)
            drho = -3 * c * s / rho
            # rho^2 = 3c^2 + 1  =>  rho*rho'' + rho'^2 = 3(s^2 - c^2)
            ddrho = (3 * (s**2 - c**2) - drho**2) / rho
            return np.stack(
                [ddrho * c - 2 * drho * s - rho * c, ddrho * s + 2 * drho * c - rho * s],
                axis=-1,
            )
        return self.radius * np.stack([-c, -s], axis=-1)


def curve_point(curve, t):
    return curve.point(np.mod(t, 2 * np.pi))


def curve_derivative(curve, t):
    return curve.derivative(np.mod(t, 2 * np.pi))


@dataclass(frozen=True)
class QuadratureBoundary:
    """Trapezoidal discretization of a closed curve.

    Attributes
    ----------
    t : ndarray, shape (n,)
        Parameter nodes ``2*pi*j/n``.
    points, normals : ndarray, shape (n, 2)
        Nodes and outward unit normals.
    tangents, accels : ndarray, shape (n, 2)
        ``x'(t_j)`` and ``x''(t_j)``.
    speeds : ndarray, shape (n,)
        ``|x'(t_j)|``.
    weights : ndarray, shape (n,)
        Arc-length weights ``(2*pi/n) * |x'(t_j)|``.
    """

    curve: ParametricCurve
    t: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    tangents: np.ndarray = field(repr=False)
    accels: np.ndarray = field(repr=False)
    normals: np.ndarray = field(repr=False)
    speeds: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def n(self):
        return len(self.t)

    @property
    def length(self):
        return float(self.weights.sum())


def discretize(curve, n_q):
    """Sample ``curve`` at ``n_q`` equispaced parameter values."""
    if int(n_q) != n_q or n_q < 8 or n_q % 2:
        raise ValueError(f"n_q must be an even integer >= 8, got {n_q!r}")
    n_q = int(n_q)
    t = 2 * np.pi * np.arange(n_q) / n_q
    x = curve.point(t)
    dx = curve.derivative(t)
    ddx = curve.second_derivative(t)
    speed = np.hypot(dx[:, 0], dx[:, 1])
    normals = np.stack([dx[:, 1], -dx[:, 0]], axis=-1) / speed[:, None]
    if np.dot(x[0] - curve.interior_point, normals[0]) < 0:
        normals = -normals
    weights = (2 * np.pi / n_q) * speed
    return QuadratureBoundary(curve, t, x, dx, ddx, normals, speed, weights)
