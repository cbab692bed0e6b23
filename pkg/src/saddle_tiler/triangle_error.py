"""Exact L-infinity error of an affine piece over a triangle for F(x,y) = xy.

Along an edge with endpoint deviations (di, dj) and edge product
k = dx * dy, the pointwise error is the quadratic

    E(lam) = (1 - lam) * di + lam * dj + lam * (1 - lam) * k,

and the maximum of |E| over the whole closed triangle is attained on an
edge, so three one-dimensional profiles determine everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateTriangleError,
    DeviationOutOfRangeError,
    ZeroEdgeProductError,
    ExtremumOutsideEdgeError,
)
from .quadform import LinearPiece, Point

# A triangle is degenerate when its area falls below this fraction of the
# squared bounding-box diagonal.
_DEGENERATE_REL = 1e-12


@dataclass(frozen=True)
class Triangle:
    v1: Point
    v2: Point
    v3: Point

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.v1, self.v2, self.v3)

    @property
    def area(self) -> float:
        (x1, y1), (x2, y2), (x3, y3) = self.v1, self.v2, self.v3
        return 0.5 * abs((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))

    @property
    def is_degenerate(self) -> bool:
        xs = (self.v1[0], self.v2[0], self.v3[0])
        ys = (self.v1[1], self.v2[1], self.v3[1])
        diag_sq = (max(xs) - min(xs)) ** 2 + (max(ys) - min(ys)) ** 2
        return self.area <= _DEGENERATE_REL * diag_sq

    def translated(self, t: Sequence[float]) -> "Triangle":
        tx, ty = t[0], t[1]
        return Triangle((self.v1[0] + tx, self.v1[1] + ty),
                        (self.v2[0] + tx, self.v2[1] + ty),
                        (self.v3[0] + tx, self.v3[1] + ty))

    def point_reflected(self) -> "Triangle":
        return Triangle((-self.v1[0], -self.v1[1]),
                        (-self.v2[0], -self.v2[1]),
                        (-self.v3[0], -self.v3[1]))

    def contains(self, p: Sequence[float], tol: float = 0.0) -> bool:
        """Closed-triangle containment via signed areas."""
        (x1, y1), (x2, y2), (x3, y3) = self.v1, self.v2, self.v3
        px, py = p[0], p[1]
        s1 = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
        s2 = (x3 - x2) * (py - y2) - (px - x2) * (y3 - y2)
        s3 = (x1 - x3) * (py - y3) - (px - x3) * (y1 - y3)
        return (s1 >= -tol and s2 >= -tol and s3 >= -tol) or \
               (s1 <= tol and s2 <= tol and s3 <= tol)


class Deviations(NamedTuple):
    """Signed vertical offsets l(v_i) - F(v_i) at the three vertices."""

    d1: float
    d2: float
    d3: float


@dataclass(frozen=True)
class EdgeAnalysis:
    """Error profile of one edge: extremum location and worst absolute error."""

    k: float
    lambda_star: float | None
    extremal_error: float | None
    max_abs_error: float
    argmax_lambda: float

    def to_json_dict(self) -> dict:
        return {"k": self.k, "lambda_star": self.lambda_star,
                "extremal_error": self.extremal_error,
                "max_abs_error": self.max_abs_error,
                "argmax_lambda": self.argmax_lambda}


def edge_product(p: Sequence[float], q: Sequence[float]) -> float:
    """Product of coordinate differences along the edge p -> q."""
    return (q[0] - p[0]) * (q[1] - p[1])


def edge_error(lam: float, di: float, dj: float, k: float) -> float:
    """Error at parameter lam along an edge (lam outside [0,1] permitted)."""
    return (1.0 - lam) * di + lam * dj + lam * (1.0 - lam) * k


def lambda_star(di: float, dj: float, k: float) -> float:
    """Location of the interior extremum of the edge error."""
    if k == 0.0:
        raise ZeroEdgeProductError("error profile is linear for k = 0")
    return (dj - di) / (2.0 * k) + 0.5


def extremal_edge_error(di: float, dj: float, k: float) -> float:
    """Value of the edge error at its interior extremum.

    Equals (di + dj)/2 + k/4 + (dj - di)^2 / (4k); only defined when the
    critical point lies strictly inside the edge.
    """
    lam = lambda_star(di, dj, k)
    if not 0.0 < lam < 1.0:
        raise ExtremumOutsideEdgeError(
            f"critical point {lam} is not interior to the edge")
    return 0.5 * (di + dj) + 0.25 * k + (dj - di) ** 2 / (4.0 * k)


def max_abs_error_edge(di: float, dj: float, k: float) -> EdgeAnalysis:
    """Exact maximum of |E| over one edge.

    Candidates are the endpoints and, for curved profiles, the interior
    extremum.  Ties report the smallest parameter.
    """
    lam_star: float | None = None
    e_star: float | None = None
    candidates = [(0.0, di), (1.0, dj)]
    if k != 0.0:
        lam_star = (dj - di) / (2.0 * k) + 0.5
        if 0.0 < lam_star < 1.0:
            e_star = edge_error(lam_star, di, dj, k)
            candidates.insert(1, (lam_star, e_star))
    best_lam, best = 0.0, -math.inf
    for lam, value in candidates:  # ascending lam: ties keep the smallest
        if abs(value) > best:
            best_lam, best = lam, abs(value)
    return EdgeAnalysis(k=k, lambda_star=lam_star, extremal_error=e_star,
                        max_abs_error=best, argmax_lambda=best_lam)


def error_interval(di: float, dj: float, k: float) -> tuple[float, float]:
    """Range of the edge error over the closed edge."""
    lo = min(di, dj)
    hi = max(di, dj)
    if k != 0.0:
        lam = (dj - di) / (2.0 * k) + 0.5
        if 0.0 < lam < 1.0:
            e_star = edge_error(lam, di, dj, k)
            lo = min(lo, e_star)
            hi = max(hi, e_star)
    return lo, hi


def _edges(tri: Triangle, dev: Deviations):
    k1 = edge_product(tri.v1, tri.v2)
    k2 = edge_product(tri.v1, tri.v3)
    k3 = edge_product(tri.v2, tri.v3)
    return ((dev.d1, dev.d2, k1), (dev.d1, dev.d3, k2), (dev.d2, dev.d3, k3))


def max_abs_error_triangle(tri: Triangle, dev: Deviations) -> float:
    """Exact L-infinity error of the piece encoded by dev over the closed triangle."""
    if tri.is_degenerate:
        raise DegenerateTriangleError("triangle is numerically collinear")
    return max(max_abs_error_edge(di, dj, k).max_abs_error
               for di, dj, k in _edges(tri, dev))


def error_range_triangle(tri: Triangle, dev: Deviations) -> tuple[float, float]:
    """Signed error range (min, max) over the closed triangle."""
    if tri.is_degenerate:
        raise DegenerateTriangleError("triangle is numerically collinear")
    lo, hi = math.inf, -math.inf
    for di, dj, k in _edges(tri, dev):
        elo, ehi = error_interval(di, dj, k)
        lo = min(lo, elo)
        hi = max(hi, ehi)
    return lo, hi


def plane_from_deviations(tri: Triangle, dev: Deviations) -> LinearPiece:
    """The unique affine piece taking value x_i*y_i + d_i at each vertex."""
    if tri.is_degenerate:
        raise DegenerateTriangleError("triangle is numerically collinear")
    a = np.array([[tri.v1[0], tri.v1[1], 1.0],
                  [tri.v2[0], tri.v2[1], 1.0],
                  [tri.v3[0], tri.v3[1], 1.0]])
    rhs = np.array([tri.v1[0] * tri.v1[1] + dev.d1,
                    tri.v2[0] * tri.v2[1] + dev.d2,
                    tri.v3[0] * tri.v3[1] + dev.d3])
    alpha, beta, gamma = np.linalg.solve(a, rhs)
    return LinearPiece(float(alpha), float(beta), float(gamma))


def deviations_from_plane(tri: Triangle, piece: LinearPiece) -> Deviations:
    """Vertex offsets of an affine piece relative to the saddle."""
    return Deviations(piece(tri.v1) - tri.v1[0] * tri.v1[1],
                      piece(tri.v2) - tri.v2[0] * tri.v2[1],
                      piece(tri.v3) - tri.v3[0] * tri.v3[1])


def is_feasible(dev: Deviations, k1: float, k2: float, k3: float,
                emin: float, emax: float) -> bool:
    """Whether the edge errors stay inside [emin, emax].

    Uses the closed-form bounds: an edge with positive product k needs
    k <= (sqrt(emax - di) + sqrt(emax - dj))^2, a negative product needs
    -k <= (sqrt(di - emin) + sqrt(dj - emin))^2, and a zero product imposes
    nothing.  Checked with a small absolute slack so exactly-tight optima
    do not flip on rounding.
    """
    if not emin < emax:
        raise ValueError(f"need emin < emax, got [{emin}, {emax}]")
    for d in dev:
        if not emin <= d <= emax:
            raise DeviationOutOfRangeError(
                f"deviation {d} outside [{emin}, {emax}]")
    tol = 1e-9 * max(1.0, emax - emin)
    checks = ((dev.d1, dev.d2, k1), (dev.d1, dev.d3, k2), (dev.d2, dev.d3, k3))
    for di, dj, k in checks:
        if k > 0.0:
            cap = (math.sqrt(emax - di) + math.sqrt(emax - dj)) ** 2
            if k > cap + tol:
                return False
        elif k < 0.0:
            cap = (math.sqrt(di - emin) + math.sqrt(dj - emin)) ** 2
            if -k > cap + tol:
                return False
    return True
