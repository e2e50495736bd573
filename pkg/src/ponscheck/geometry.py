"""Three constant-curvature plane models sharing one small interface.

Points are plain tuples: (x, y) for the euclidean plane and the open unit
Poincare disk, a unit 3-vector (x, y, z) for the sphere.  Production angle
measurement goes through each model's law of cosines (see models.angle_at);
this module only provides distances, geodesic motion (exp map along a unit
tangent), tangent-frame helpers, and seeded point sampling.

The Poincare disk is handled internally on the hyperboloid sheet
{x^2 + y^2 - t^2 = -1, t > 0} in Minkowski 3-space, where geodesics are the
cosh/sinh analogue of great circles; points are projected back to the disk
at the API boundary.  Spherical work stays inside an open hemisphere around
the north pole so that geodesics between sample points are unique and
strict betweenness behaves as in the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Tuple

Vec = Tuple[float, ...]


class DomainError(ValueError):
    """Point outside a model's domain (e.g. on or beyond the disk rim)."""


class GeodesicOutOfDomain(ValueError):
    """A construction walked a geodesic out of the model's working domain."""


class DegenerateDirection(ValueError):
    """No unique tangent direction (coincident or antipodal-ish points)."""


_TINY = 1e-12


@dataclass(frozen=True)
class SamplingLimits:
    """Coordinate bounds and nondegeneracy guards for seeded sampling.

    min_separation / min_angle reject near-degenerate triangles so that
    strict facts (Lt, NonCollinear) hold by a margin far above tolerance.
    """

    euclidean_box: float = 4.0
    poincare_radius: float = 0.9
    sphere_cap: float = 0.5  # radians from the north pole; pairwise <= 1.0 rad
    min_separation: float = 0.0  # intrinsic; 0 means per-model default
    min_angle: float = 0.15

    def separation_for(self, model: "Model") -> float:
        if self.min_separation > 0:
            return self.min_separation
        return {"euclidean": 0.8, "poincare": 0.25, "sphere": 0.08}[model.name]


DEFAULT_LIMITS = SamplingLimits()


def _norm2(v: Vec) -> float:
    return math.sqrt(sum(c * c for c in v))


def _clamp(x: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return min(hi, max(lo, x))


class Model:
    name: str = ""

    def validate(self, p: Vec) -> None:
        raise NotImplementedError

    def dist(self, p: Vec, q: Vec) -> float:
        raise NotImplementedError

    def unit_tangent(self, p: Vec, q: Vec):
        """Unit tangent at p pointing along the geodesic toward q."""
        raise NotImplementedError

    def exp(self, p: Vec, v, t: float) -> Vec:
        """Walk arc length t from p along unit tangent v."""
        raise NotImplementedError

    def perp_tangent(self, p: Vec, v):
        """A unit tangent at p orthogonal to v."""
        raise NotImplementedError

    def tangent_dot(self, p: Vec, u, v) -> float:
        """Riemannian inner product of tangent vectors at p."""
        raise NotImplementedError

    def random_point(self, rng: Random, limits: SamplingLimits = DEFAULT_LIMITS) -> Vec:
        raise NotImplementedError

    def random_tangent(self, rng: Random, p: Vec):
        """Uniformly random unit tangent direction at p."""
        e1 = self._frame_seed(p)
        e2 = self.perp_tangent(p, e1)
        th = rng.uniform(0.0, 2.0 * math.pi)
        c, s = math.cos(th), math.sin(th)
        return tuple(c * a + s * b for a, b in zip(e1, e2))

    def rotate_tangent(self, p: Vec, v, ang: float):
        """Rotate a unit tangent at p by ang (sign picks the half-plane)."""
        w = self.perp_tangent(p, v)
        c, s = math.cos(ang), math.sin(ang)
        return tuple(c * a + s * b for a, b in zip(v, w))

    def point_toward(self, p: Vec, q: Vec, t: float) -> Vec:
        """Point at arc length t from p on the geodesic through q."""
        return self.exp(p, self.unit_tangent(p, q), t)

    def _frame_seed(self, p: Vec):
        raise NotImplementedError


class EuclideanModel(Model):
    name = "euclidean"

    def validate(self, p: Vec) -> None:
        if len(p) != 2 or not all(math.isfinite(c) for c in p):
            raise DomainError(f"bad euclidean point: {p!r}")

    def dist(self, p: Vec, q: Vec) -> float:
        return math.hypot(p[0] - q[0], p[1] - q[1])

    def unit_tangent(self, p: Vec, q: Vec):
        d = self.dist(p, q)
        if d < _TINY:
            raise DegenerateDirection("coincident points")
        return ((q[0] - p[0]) / d, (q[1] - p[1]) / d)

    def exp(self, p: Vec, v, t: float) -> Vec:
        return (p[0] + t * v[0], p[1] + t * v[1])

    def perp_tangent(self, p: Vec, v):
        return (-v[1], v[0])

    def tangent_dot(self, p: Vec, u, v) -> float:
        return u[0] * v[0] + u[1] * v[1]

    def random_point(self, rng: Random, limits: SamplingLimits = DEFAULT_LIMITS) -> Vec:
        b = limits.euclidean_box
        return (rng.uniform(-b, b), rng.uniform(-b, b))

    def _frame_seed(self, p: Vec):
        return (1.0, 0.0)


def disk_to_hyperboloid(p: Vec) -> Vec:
    """Lift a disk point to the upper hyperboloid sheet."""
    r2 = p[0] * p[0] + p[1] * p[1]
    d = 1.0 - r2
    if d <= 0:
        raise DomainError(f"point not inside unit disk: {p!r}")
    return (2.0 * p[0] / d, 2.0 * p[1] / d, (1.0 + r2) / d)


def hyperboloid_to_disk(h: Vec) -> Vec:
    return (h[0] / (1.0 + h[2]), h[1] / (1.0 + h[2]))


def minkowski_dot(u: Vec, v: Vec) -> float:
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


class PoincareModel(Model):
    name = "poincare"

    def validate(self, p: Vec) -> None:
        if len(p) != 2 or not all(math.isfinite(c) for c in p):
            raise DomainError(f"bad disk point: {p!r}")
        if p[0] * p[0] + p[1] * p[1] >= 1.0:
            raise DomainError(f"point not inside unit disk: {p!r}")

    def dist(self, p: Vec, q: Vec) -> float:
        dp = 1.0 - (p[0] * p[0] + p[1] * p[1])
        dq = 1.0 - (q[0] * q[0] + q[1] * q[1])
        if dp <= 0 or dq <= 0:
            raise DomainError("point not inside unit disk")
        dd = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
        return math.acosh(max(1.0, 1.0 + 2.0 * dd / (dp * dq)))

    def unit_tangent(self, p: Vec, q: Vec):
        P, Q = disk_to_hyperboloid(p), disk_to_hyperboloid(q)
        d = self.dist(p, q)
        if d < _TINY:
            raise DegenerateDirection("coincident points")
        ch, sh = math.cosh(d), math.sinh(d)
        return tuple((Q[i] - ch * P[i]) / sh for i in range(3))

    def exp(self, p: Vec, v, t: float) -> Vec:
        P = disk_to_hyperboloid(p)
        ch, sh = math.cosh(t), math.sinh(t)
        H = tuple(ch * P[i] + sh * v[i] for i in range(3))
        # re-project to the sheet to cancel float drift
        s = math.sqrt(max(_TINY, -minkowski_dot(H, H)))
        return hyperboloid_to_disk(tuple(c / s for c in H))

    def perp_tangent(self, p: Vec, v):
        P = disk_to_hyperboloid(p)
        # euclidean cross of the time-flipped vectors is Minkowski-orthogonal
        a = (P[0], P[1], -P[2])
        b = (v[0], v[1], -v[2])
        w = (
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
        n = math.sqrt(max(_TINY, minkowski_dot(w, w)))
        return tuple(c / n for c in w)

    def tangent_dot(self, p: Vec, u, v) -> float:
        return minkowski_dot(u, v)

    def random_point(self, rng: Random, limits: SamplingLimits = DEFAULT_LIMITS) -> Vec:
        r = limits.poincare_radius * math.sqrt(rng.random())
        th = rng.uniform(0.0, 2.0 * math.pi)
        return (r * math.cos(th), r * math.sin(th))

    def _frame_seed(self, p: Vec):
        q = (p[0] + 1e-3, p[1]) if abs(p[0]) < 0.98 else (p[0] - 1e-3, p[1])
        return self.unit_tangent(p, q)


class SphereModel(Model):
    name = "sphere"
    POLE = (0.0, 0.0, 1.0)

    def validate(self, p: Vec) -> None:
        if len(p) != 3 or not all(math.isfinite(c) for c in p):
            raise DomainError(f"bad sphere point: {p!r}")
        if abs(_norm2(p) - 1.0) > 1e-9:
            raise DomainError(f"not a unit vector: {p!r}")

    def in_hemisphere(self, p: Vec) -> bool:
        return p[2] > _TINY

    def dist(self, p: Vec, q: Vec) -> float:
        return math.acos(_clamp(p[0] * q[0] + p[1] * q[1] + p[2] * q[2]))

    def unit_tangent(self, p: Vec, q: Vec):
        d = self.dist(p, q)
        if d < _TINY or d > math.pi - _TINY:
            raise DegenerateDirection("coincident or antipodal points")
        c, s = math.cos(d), math.sin(d)
        return tuple((q[i] - c * p[i]) / s for i in range(3))

    def exp(self, p: Vec, v, t: float) -> Vec:
        c, s = math.cos(t), math.sin(t)
        w = tuple(c * p[i] + s * v[i] for i in range(3))
        n = _norm2(w)
        return (w[0] / n, w[1] / n, w[2] / n)

    def perp_tangent(self, p: Vec, v):
        w = (
            p[1] * v[2] - p[2] * v[1],
            p[2] * v[0] - p[0] * v[2],
            p[0] * v[1] - p[1] * v[0],
        )
        n = _norm2(w)
        if n < _TINY:
            raise DegenerateDirection("tangent parallel to base point")
        return (w[0] / n, w[1] / n, w[2] / n)

    def tangent_dot(self, p: Vec, u, v) -> float:
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]

    def random_point(self, rng: Random, limits: SamplingLimits = DEFAULT_LIMITS) -> Vec:
        phi = limits.sphere_cap * math.sqrt(rng.random())
        th = rng.uniform(0.0, 2.0 * math.pi)
        return (math.sin(phi) * math.cos(th), math.sin(phi) * math.sin(th), math.cos(phi))

    def _frame_seed(self, p: Vec):
        seed = (1.0, 0.0, 0.0) if abs(p[0]) < 0.9 else (0.0, 1.0, 0.0)
        d = p[0] * seed[0] + p[1] * seed[1] + p[2] * seed[2]
        w = tuple(seed[i] - d * p[i] for i in range(3))
        n = _norm2(w)
        return (w[0] / n, w[1] / n, w[2] / n)


EUCLIDEAN = EuclideanModel()
POINCARE = PoincareModel()
SPHERE = SphereModel()

MODELS = {m.name: m for m in (EUCLIDEAN, POINCARE, SPHERE)}
MODEL_NAMES = ("euclidean", "poincare", "sphere")


def get_model(name: str) -> Model:
    try:
        return MODELS[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; expected one of {MODEL_NAMES}") from None
