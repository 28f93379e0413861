"""Scalar 3-vector helpers.

Vectors are plain ``(x, y, z)`` float tuples. Tuple arithmetic keeps the
per-pair geometry pipeline cheap enough for long closed-loop runs; numpy is
reserved for the places where actual linear algebra happens (QP solves,
batch logging).
"""

from __future__ import annotations

import math

Vec3 = tuple[float, float, float]

ZERO: Vec3 = (0.0, 0.0, 0.0)


def vec3(x: float, y: float, z: float) -> Vec3:
    return (float(x), float(y), float(z))


def add(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(a: Vec3, s: float) -> Vec3:
    return (a[0] * s, a[1] * s, a[2] * s)


def dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm_sq(a: Vec3) -> float:
    return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]


def norm(a: Vec3) -> float:
    return math.sqrt(norm_sq(a))


def dist(a: Vec3, b: Vec3) -> float:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    dz = a[2] - b[2]
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def is_finite(a: Vec3) -> bool:
    return math.isfinite(a[0]) and math.isfinite(a[1]) and math.isfinite(a[2])


def clamp_norm(a: Vec3, limit: float) -> Vec3:
    """Radially rescale ``a`` onto the ball of radius ``limit`` if outside."""
    n = norm(a)
    if n <= limit or n == 0.0:
        return a
    return scale(a, limit / n)
