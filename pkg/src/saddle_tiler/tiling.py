"""Parallelogram tilings of a square window and their exports.

A base triangle T with one vertex at the origin, together with its point
reflection T', forms a parallelogram that tiles the plane under translations
by v2 and v3.  Every copy carries an affine piece built so that the original
deviation pattern (d1, d2, d3) reappears at the role vertices of each copy
(the reflected copies carry the reflected-then-translated piece).  The module
materializes every facet meeting a closed window, evaluates the resulting
piecewise-linear surface, measures empirical density, error and continuity,
and exports SVG / OBJ / JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateBaseError,
    OutsideWindowError,
    UnsupportedFormatError,
    WindowExceededError,
    WindowTooLargeError,
)
from .optimizer import ApproximationSpec, OptimalSolution
from .quadform import (
    LinearPiece,
    STANDARD_FORM,
    point_reflect_piece,
    translate_piece,
)
from .triangle_error import (
    Deviations,
    Triangle,
    deviations_from_plane,
    max_abs_error_triangle,
    plane_from_deviations,
)

ORIENTATION_ORIGINAL = "original"
ORIENTATION_REFLECTED = "reflected"

JSON_SCHEMA = "saddle-tiler/tiling-v1"

DEFAULT_FACET_CAP = 10_000_000


@dataclass(frozen=True)
class PlacedFacet:
    """One triangle of the materialized tiling with its affine piece."""

    triangle: Triangle
    piece: LinearPiece
    orientation: str
    lattice_index: tuple[int, int]
    local_index: int
    deviations: Deviations

    def vertex_keys(self) -> tuple[tuple[int, int], ...]:
        """Integer lattice coordinates of the three vertices (exact identity)."""
        i, j = self.lattice_index
        if self.orientation == ORIENTATION_ORIGINAL:
            return ((i, j), (i + 1, j), (i, j + 1))
        return ((i + 1, j + 1), (i, j + 1), (i + 1, j))


def _tri_box_intersect(tri: Triangle, half: float) -> bool:
    """Closed-set intersection of a triangle with [-half, half]^2 (separating axis)."""
    (x1, y1), (x2, y2), (x3, y3) = tri.vertices
    if min(x1, x2, x3) > half or max(x1, x2, x3) < -half:
        return False
    if min(y1, y2, y3) > half or max(y1, y2, y3) < -half:
        return False
    verts = tri.vertices
    for a, b in ((verts[0], verts[1]), (verts[1], verts[2]), (verts[2], verts[0])):
        nx = -(b[1] - a[1])
        ny = b[0] - a[0]
        t1 = nx * x1 + ny * y1
        t2 = nx * x2 + ny * y2
        t3 = nx * x3 + ny * y3
        radius = half * (abs(nx) + abs(ny))  # box projection is [-radius, radius]
        if min(t1, t2, t3) > radius or max(t1, t2, t3) < -radius:
            return False
    return True


class Tiling:
    """A materialized window of the parallelogram tiling."""

    def __init__(self, base: Triangle, deviations: Deviations,
                 window_half: float, facets: list[PlacedFacet],
                 error_bounds: tuple[float, float], epsilon_hint: float):
        self.base = base
        self.deviations = deviations
        self.window_half = window_half
        self.facets = facets
        self.error_bounds = error_bounds
        self.epsilon_hint = epsilon_hint
        self.lattice = (base.v2, base.v3)
        v2, v3 = base.v2, base.v3
        det = v2[0] * v3[1] - v3[0] * v2[1]
        self._lattice_inv = ((v3[1] / det, -v3[0] / det),
                             (-v2[1] / det, v2[0] / det))
        cell_scale = math.hypot(*v2) + math.hypot(*v3)
        self._contain_tol = 1e-12 * cell_scale * cell_scale
        self._cells: dict[tuple[int, int, str], PlacedFacet] = {
            (f.lattice_index[0], f.lattice_index[1], f.orientation): f
            for f in facets
        }

    @property
    def facet_count(self) -> int:
        return len(self.facets)

    def lattice_coords(self, p) -> tuple[float, float]:
        (i00, i01), (i10, i11) = self._lattice_inv
        return (i00 * p[0] + i01 * p[1], i10 * p[0] + i11 * p[1])

    def facets_containing(self, p) -> list[PlacedFacet]:
        """All materialized facets whose closed triangle contains p, by index."""
        u, v = self.lattice_coords(p)
        iu, iv = math.floor(u), math.floor(v)
        found = []
        for i in range(iu - 2, iu + 2):
            for j in range(iv - 2, iv + 2):
                for orient in (ORIENTATION_ORIGINAL, ORIENTATION_REFLECTED):
                    facet = self._cells.get((i, j, orient))
                    if facet is not None and facet.triangle.contains(p, self._contain_tol):
                        found.append(facet)
        found.sort(key=lambda f: f.local_index)
        return found


def build_tiling(source, window: float, *, error_bounds=None,
                 epsilon_hint: float | None = None,
                 max_facets: int = DEFAULT_FACET_CAP) -> Tiling:
    """Materialize every facet of the tiling meeting the closed window.

    ``source`` is either an OptimalSolution or a (Triangle, Deviations) pair;
    ``window`` is the full side length of the square, centered at the origin.
    The base is translated so its first vertex sits at the origin (errors are
    translation invariant).  Raises WindowTooLargeError when the candidate
    facet count exceeds ``max_facets``.
    """
    if isinstance(source, OptimalSolution):
        base = source.vertices
        dev = source.deviations
        spec = ApproximationSpec(source.kind, source.epsilon)
        bounds = spec.bounds
        eps_hint = source.epsilon
    else:
        base, dev = source
        dev = Deviations(*dev)
        mag = max(abs(dev.d1), abs(dev.d2), abs(dev.d3), 1e-12)
        bounds = (-mag, mag)
        eps_hint = mag
    if error_bounds is not None:
        bounds = (float(error_bounds[0]), float(error_bounds[1]))
    if epsilon_hint is not None:
        eps_hint = float(epsilon_hint)
    if not window > 0.0:
        raise ValueError(f"window side must be positive, got {window}")

    if base.v1 != (0.0, 0.0):
        base = base.translated((-base.v1[0], -base.v1[1]))
    if base.is_degenerate:
        raise DegenerateBaseError("tiling base triangle is degenerate")

    v2, v3 = base.v2, base.v3
    piece0 = plane_from_deviations(base, dev)
    piece_reflect = point_reflect_piece(piece0, STANDARD_FORM)

    half = window / 2.0
    xs = (0.0, v2[0], v3[0], v2[0] + v3[0])
    ys = (0.0, v2[1], v3[1], v2[1] + v3[1])
    # Translations t with bbox(prototypes) + t meeting the window form a box.
    tx_lo, tx_hi = -half - max(xs), half - min(xs)
    ty_lo, ty_hi = -half - max(ys), half - min(ys)
    det = v2[0] * v3[1] - v3[0] * v2[1]
    inv = ((v3[1] / det, -v3[0] / det), (-v2[1] / det, v2[0] / det))
    corners = ((tx_lo, ty_lo), (tx_lo, ty_hi), (tx_hi, ty_lo), (tx_hi, ty_hi))
    ij = [(inv[0][0] * cx + inv[0][1] * cy, inv[1][0] * cx + inv[1][1] * cy)
          for cx, cy in corners]
    i_lo = math.floor(min(c[0] for c in ij)) - 1
    i_hi = math.ceil(max(c[0] for c in ij)) + 1
    j_lo = math.floor(min(c[1] for c in ij)) - 1
    j_hi = math.ceil(max(c[1] for c in ij)) + 1
    candidates = 2 * (i_hi - i_lo + 1) * (j_hi - j_lo + 1)
    if candidates > max_facets:
        raise WindowTooLargeError(
            f"window {window} needs ~{candidates} facets, cap is {max_facets}")

    facets: list[PlacedFacet] = []
    index = 0
    for i in range(i_lo, i_hi + 1):
        for j in range(j_lo, j_hi + 1):
            tx = i * v2[0] + j * v3[0]
            ty = i * v2[1] + j * v3[1]
            tri = Triangle((tx, ty), (v2[0] + tx, v2[1] + ty),
                           (v3[0] + tx, v3[1] + ty))
            if _tri_box_intersect(tri, half):
                facets.append(PlacedFacet(
                    triangle=tri,
                    piece=translate_piece(piece0, STANDARD_FORM, (tx, ty)),
                    orientation=ORIENTATION_ORIGINAL,
                    lattice_index=(i, j),
                    local_index=index,
                    deviations=dev,
                ))
                index += 1
            # Reflected copy, shifted into the same parallelogram cell: its
            # role vertices land on v2 + v3 + t (d1), v3 + t (d2), v2 + t (d3).
            sx = v2[0] + v3[0] + tx
            sy = v2[1] + v3[1] + ty
            tri_r = Triangle((sx, sy), (v3[0] + tx, v3[1] + ty),
                             (v2[0] + tx, v2[1] + ty))
            if _tri_box_intersect(tri_r, half):
                facets.append(PlacedFacet(
                    triangle=tri_r,
                    piece=translate_piece(piece_reflect, STANDARD_FORM, (sx, sy)),
                    orientation=ORIENTATION_REFLECTED,
                    lattice_index=(i, j),
                    local_index=index,
                    deviations=dev,
                ))
                index += 1
    return Tiling(base, dev, half, facets, bounds, eps_hint)


def pwl_eval(tiling: Tiling, p) -> float:
    """Value of the piecewise-linear surface at a window point.

    Among the facets whose closed triangle contains p, the one with the
    smallest local index wins, which makes values on shared edges and
    vertices deterministic.
    """
    half = tiling.window_half
    if abs(p[0]) > half or abs(p[1]) > half:
        raise OutsideWindowError(f"point {tuple(p)} outside the +-{half} window")
    containing = tiling.facets_containing(p)
    if not containing:
        # Cell-local lookup cannot miss for in-window points; full scan as a net.
        containing = sorted((f for f in tiling.facets
                             if f.triangle.contains(p, tiling._contain_tol)),
                            key=lambda f: f.local_index)
        if not containing:
            raise RuntimeError(f"no facet contains in-window point {tuple(p)}")
    return containing[0].piece(p)


def max_error_over_window(tiling: Tiling) -> float:
    """Largest exact per-facet error among facets fully inside the window.

    Deviations are recomputed from each materialized piece, so this checks
    the placed planes, not just the prescribed pattern.  When the window is
    smaller than a single facet, all facets are used instead.
    """
    half = tiling.window_half
    tol = 1e-9 * max(half, 1.0)
    pool = [f for f in tiling.facets
            if all(abs(x) <= half + tol and abs(y) <= half + tol
                   for x, y in f.triangle.vertices)]
    if not pool:
        pool = tiling.facets
    return max(max_abs_error_triangle(f.triangle,
                                      deviations_from_plane(f.triangle, f.piece))
               for f in pool)


def density_estimate(tiling: Tiling, ell: float) -> float:
    """Facets meeting the closed square of side ell, per unit area."""
    if ell <= 0.0:
        raise ValueError(f"square side must be positive, got {ell}")
    if ell > 2.0 * tiling.window_half * (1.0 + 1e-12):
        raise WindowExceededError(
            f"side {ell} exceeds the materialized window {2 * tiling.window_half}")
    half = ell / 2.0
    count = sum(1 for f in tiling.facets if _tri_box_intersect(f.triangle, half))
    return count / (ell * ell)


def continuity_report(tiling: Tiling) -> tuple[float, float]:
    """(max vertex jump, max shared-edge midpoint jump) of the surface.

    Vertices are identified exactly through their integer lattice keys, so
    coincident positions are grouped without coordinate fuzz.
    """
    v2, v3 = tiling.lattice

    def key_pos(key):
        return (key[0] * v2[0] + key[1] * v3[0],
                key[0] * v2[1] + key[1] * v3[1])

    vertex_values: dict[tuple[int, int], list[float]] = {}
    edge_facets: dict[tuple, list[PlacedFacet]] = {}
    for facet in tiling.facets:
        keys = facet.vertex_keys()
        for key in keys:
            vertex_values.setdefault(key, []).append(facet.piece(key_pos(key)))
        for a, b in ((keys[0], keys[1]), (keys[1], keys[2]), (keys[0], keys[2])):
            edge = (a, b) if a <= b else (b, a)
            edge_facets.setdefault(edge, []).append(facet)

    vertex_jump = 0.0
    for values in vertex_values.values():
        if len(values) > 1:
            vertex_jump = max(vertex_jump, max(values) - min(values))

    edge_jump = 0.0
    for (ka, kb), facets in edge_facets.items():
        if len(facets) < 2:
            continue
        pa, pb = key_pos(ka), key_pos(kb)
        mid = (0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]))
        values = [f.piece(mid) for f in facets]
        edge_jump = max(edge_jump, max(values) - min(values))
    return vertex_jump, edge_jump


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _ramp_color(d: float, emin: float, emax: float) -> str:
    width = emax - emin
    t = 0.5 if width <= 0 else min(max((d - emin) / width, 0.0), 1.0)
    return f"rgb({round(255 * t)},40,{round(255 * (1 - t))})"


def _export_svg(tiling: Tiling) -> bytes:
    eps = tiling.epsilon_hint if tiling.epsilon_hint > 0 else 1.0
    px = 40.0 / math.sqrt(eps)
    half = tiling.window_half
    pad = 12.0
    size = 2.0 * half * px + 2.0 * pad
    emin, emax = tiling.error_bounds

    def sx(x):
        return pad + (x + half) * px

    def sy(y):
        return pad + (half - y) * px

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f17(size)}" '
        f'height="{_f17(size)}" viewBox="0 0 {_f17(size)} {_f17(size)}">',
    ]
    for facet in tiling.facets:
        pts = " ".join(f"{_f17(sx(x))},{_f17(sy(y))}"
                       for x, y in facet.triangle.vertices)
        mean_d = sum(facet.deviations) / 3.0
        parts.append(f'<polygon points="{pts}" fill="{_ramp_color(mean_d, emin, emax)}" '
                     f'fill-opacity="0.55" stroke="#222" stroke-width="0.6"/>')
    for facet in tiling.facets:
        cx = sum(x for x, _ in facet.triangle.vertices) / 3.0
        cy = sum(y for _, y in facet.triangle.vertices) / 3.0
        for (x, y), d in zip(facet.triangle.vertices, facet.deviations):
            # nudge dots toward the facet centroid so per-facet deviations at a
            # shared corner stay distinguishable
            dx = x + 0.12 * (cx - x)
            dy = y + 0.12 * (cy - y)
            parts.append(f'<circle cx="{_f17(sx(dx))}" cy="{_f17(sy(dy))}" r="2.4" '
                         f'fill="{_ramp_color(d, emin, emax)}"/>')
    parts.append(f'<rect x="{_f17(pad)}" y="{_f17(pad)}" width="{_f17(2 * half * px)}" '
                 f'height="{_f17(2 * half * px)}" fill="none" stroke="black" '
                 f'stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")


def _export_obj(tiling: Tiling) -> bytes:
    # Vertices are duplicated per facet so jumps of a discontinuous surface
    # render as open gaps instead of being welded shut.
    lines = []
    for facet in tiling.facets:
        for x, y in facet.triangle.vertices:
            lines.append(f"v {_f17(x)} {_f17(y)} {_f17(facet.piece((x, y)))}")
    for n in range(len(tiling.facets)):
        lines.append(f"f {3 * n + 1} {3 * n + 2} {3 * n + 3}")
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def _export_json(tiling: Tiling) -> bytes:
    def arr(values):
        return "[" + ",".join(_f17(v) for v in values) + "]"

    def pt_list(points):
        return "[" + ",".join(arr(p) for p in points) + "]"

    records = []
    for f in tiling.facets:
        records.append(
            '{"lattice_index":[%d,%d],"orientation":"%s","local_index":%d,'
            '"triangle":%s,"plane":%s,"deviations":%s}'
            % (f.lattice_index[0], f.lattice_index[1], f.orientation,
               f.local_index, pt_list(f.triangle.vertices),
               arr((f.piece.alpha, f.piece.beta, f.piece.gamma)),
               arr(f.deviations)))
    doc = (
        '{"schema":"%s",'
        '"base":%s,'
        '"deviations":%s,'
        '"window_half":%s,'
        '"error_bounds":%s,'
        '"epsilon_hint":%s,'
        '"facets":[%s]}'
        % (JSON_SCHEMA, pt_list(tiling.base.vertices), arr(tiling.deviations),
           _f17(tiling.window_half), arr(tiling.error_bounds),
           _f17(tiling.epsilon_hint), ",".join(records)))
    return doc.encode("utf-8")


def export(tiling: Tiling, fmt: str) -> bytes:
    """Serialize the tiling: 'svg' (2-D map), 'obj' (surface mesh) or 'json'."""
    name = fmt.lower()
    if name in ("svg", "svg2d"):
        return _export_svg(tiling)
    if name in ("obj", "obj3d"):
        return _export_obj(tiling)
    if name == "json":
        return _export_json(tiling)
    raise UnsupportedFormatError(f"unknown export format {fmt!r}")


def tiling_from_json(data) -> Tiling:
    """Rebuild a tiling from its JSON export (re-materializes the window)."""
    obj = json.loads(data)
    if obj.get("schema") != JSON_SCHEMA:
        raise ValueError(f"unexpected schema {obj.get('schema')!r}")
    base = Triangle(*(tuple(v) for v in obj["base"]))
    dev = Deviations(*obj["deviations"])
    return build_tiling((base, dev), 2.0 * float(obj["window_half"]),
                        error_bounds=tuple(obj["error_bounds"]),
                        epsilon_hint=float(obj["epsilon_hint"]))
