"""Scalar triangle geometry used throughout the package.

Positions are plain ``(x, y, z)`` float tuples in these helpers; the hot
decimation loop calls them far too often for small-array numpy to pay
off. Vectorized equivalents for whole-mesh statistics live in
:mod:`decimesh.report`. Lengths are in Angstroms everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTriangle

# Area below this (A^2) counts as degenerate; far below any meaningful
# molecular-surface element.
EPS_AREA = 1e-12


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm(a):
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def dist(a, b):
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    dz = a[2] - b[2]
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def triangle_normal_area(a, b, c):
    """Return (unit outward normal, area) of triangle (a, b, c).

    Raises DegenerateTriangle when the area falls at or below EPS_AREA.
    """
    n = cross(sub(b, a), sub(c, a))
    double_area = norm(n)
    area = 0.5 * double_area
    if area <= EPS_AREA:
        raise DegenerateTriangle(f"triangle area {area:.3g} below tolerance")
    inv = 1.0 / double_area
    return (n[0] * inv, n[1] * inv, n[2] * inv), area


def triangle_area(a, b, c):
    n = cross(sub(b, a), sub(c, a))
    return 0.5 * norm(n)


def centroid(a, b, c):
    return (
        (a[0] + b[0] + c[0]) / 3.0,
        (a[1] + b[1] + c[1]) / 3.0,
        (a[2] + b[2] + c[2]) / 3.0,
    )


def circumcenter(a, b, c):
    """Circumcenter of a 3D triangle (equidistant from all three vertices)."""
    ab = sub(b, a)
    ac = sub(c, a)
    n = cross(ab, ac)
    n2 = dot(n, n)
    if n2 <= 4.0 * EPS_AREA * EPS_AREA:
        raise DegenerateTriangle("circumcenter of a degenerate triangle")
    ab2 = dot(ab, ab)
    ac2 = dot(ac, ac)
    # a + [ |ac|^2 (n x ac)... ] standard closed form:
    # c0 = a + ( |ab|^2 (ac x n) + |ac|^2 (n x ab) ) / (2 n.n)  -- careful with order
    t1 = cross(n, ab)
    t2 = cross(ac, n)
    inv = 0.5 / n2
    return (
        a[0] + (ac2 * t1[0] + ab2 * t2[0]) * inv,
        a[1] + (ac2 * t1[1] + ab2 * t2[1]) * inv,
        a[2] + (ac2 * t1[2] + ab2 * t2[2]) * inv,
    )


def triangle_quality(a, b, c):
    """Aspect-plus-angle quality: longest/shortest side + largest/smallest angle.

    2 for an equilateral triangle, growing without bound as the triangle
    degenerates. Unit-independent. Works on squared side lengths (one
    sqrt for the side ratio, law of cosines for the angles); this sits
    in the innermost decimation loop, hence the inlined arithmetic.
    """
    ux = b[0] - c[0]; uy = b[1] - c[1]; uz = b[2] - c[2]
    vx = c[0] - a[0]; vy = c[1] - a[1]; vz = c[2] - a[2]
    wx = a[0] - b[0]; wy = a[1] - b[1]; wz = a[2] - b[2]
    la2 = ux * ux + uy * uy + uz * uz
    lb2 = vx * vx + vy * vy + vz * vz
    lc2 = wx * wx + wy * wy + wz * wz
    if la2 <= lb2:
        lmin2, lmax2 = (la2, lc2 if lc2 >= lb2 else lb2) if la2 <= lc2 else (lc2, lb2)
    else:
        lmin2, lmax2 = (lb2, lc2 if lc2 >= la2 else la2) if lb2 <= lc2 else (lc2, la2)
    if lmin2 <= 0.0:
        raise DegenerateTriangle("triangle with a zero-length side")
    # law of cosines on squared lengths, clamped against rounding
    ca = (lb2 + lc2 - la2) / (2.0 * math.sqrt(lb2 * lc2))
    cb = (lc2 + la2 - lb2) / (2.0 * math.sqrt(lc2 * la2))
    cc = (la2 + lb2 - lc2) / (2.0 * math.sqrt(la2 * lb2))
    ca = 1.0 if ca > 1.0 else (-1.0 if ca < -1.0 else ca)
    cb = 1.0 if cb > 1.0 else (-1.0 if cb < -1.0 else cb)
    cc = 1.0 if cc > 1.0 else (-1.0 if cc < -1.0 else cc)
    aa = math.acos(ca)
    ab = math.acos(cb)
    ac = math.acos(cc)
    if aa <= ab:
        amin, amax = (aa, ac if ac >= ab else ab) if aa <= ac else (ac, ab)
    else:
        amin, amax = (ab, ac if ac >= aa else aa) if ab <= ac else (ac, aa)
    if amin <= 0.0:
        raise DegenerateTriangle("triangle with a zero angle")
    return math.sqrt(lmax2 / lmin2) + amax / amin


def is_well_centered(a, b, c):
    """True iff the circumcenter lies strictly inside the triangle.

    Equivalent to all angles strictly acute; tested on squared side
    lengths so a right triangle built from exact coordinates reports
    False without rounding ambiguity.
    """
    la2 = dot(sub(b, c), sub(b, c))
    lb2 = dot(sub(c, a), sub(c, a))
    lc2 = dot(sub(a, b), sub(a, b))
    return (la2 + lb2 > lc2) and (lb2 + lc2 > la2) and (lc2 + la2 > lb2)


@dataclass(frozen=True)
class TriangleMetrics:
    """Per-triangle geometric summary.

    quality >= 2 (2 only for equilateral), area in A^2, center_offset is
    the barycenter-to-circumcenter distance (0 iff equilateral).
    """

    quality: float
    area: float
    centroid: tuple
    circumcenter: tuple
    barycenter: tuple
    well_centered: bool
    center_offset: float


def triangle_metrics(a, b, c):
    """Compute TriangleMetrics for one triangle; DegenerateTriangle if flat."""
    area = triangle_area(a, b, c)
    if area <= EPS_AREA:
        raise DegenerateTriangle(f"triangle area {area:.3g} below tolerance")
    bary = centroid(a, b, c)
    circ = circumcenter(a, b, c)
    return TriangleMetrics(
        quality=triangle_quality(a, b, c),
        area=area,
        centroid=bary,
        circumcenter=circ,
        barycenter=bary,
        well_centered=is_well_centered(a, b, c),
        center_offset=dist(bary, circ),
    )
