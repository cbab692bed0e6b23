"""Largest triangles admitting an affine approximation of xy within an error band.

The search for a maximum-area triangle whose affine approximant keeps the
pointwise error inside [E_min, E_max] reduces, after normalization, to a
box-constrained problem over edge products.  With slacks

    a_i = sqrt(E_max - d_i),   b_i = sqrt(d_i - E_min),   a_i^2 + b_i^2 = sigma,

each ascending edge product is capped by (a_i + a_j)^2 and the descending one
by (b_i + b_j)^2, while the squared area is the separately convex quadratic
(k1 + k2 - k3)^2 - 4 k1 k2.  The maximum therefore sits at a vertex of the
edge-product box; the all-bounds-tight vertex dominates, the optimal slacks
satisfy a2 = a3, and an explicit nonnegative decomposition of the optimality
gap certifies the closed form 4 A*^2 = 1024 sigma^2 / 27.

This module carries the closed-form optima for all seven approximation
classes, the certificate arithmetic, a triangle realization from prescribed
edge products, and two independent brute-force oracles (a reduced-space grid
sweep and a randomized geometric search) used to cross-check the closed forms.
"""

from __future__ import annotations

import concurrent.futures
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    IdenticalCentersError,
    InvalidEpsilonError,
    InvalidParameterError,
    DeviationOutOfRangeError,
    OutOfRangeError,
    SlackOutOfRangeError,
    UnrealizableProductsError,
)
from .triangle_error import Deviations, Triangle, error_interval, lambda_star
from .quadform import Point


class ApproximationKind(str, enum.Enum):
    GENERAL = "general"
    CONTINUOUS = "continuous"
    INTERPOLATION = "interpolation"
    OVERESTIMATION = "overestimation"
    UNDERESTIMATION = "underestimation"
    CONTINUOUS_OVERESTIMATION = "continuous-overestimation"
    CONTINUOUS_UNDERESTIMATION = "continuous-underestimation"


#: Order used for full-table reports.
TABLE_ORDER = (
    ApproximationKind.GENERAL,
    ApproximationKind.CONTINUOUS,
    ApproximationKind.INTERPOLATION,
    ApproximationKind.OVERESTIMATION,
    ApproximationKind.CONTINUOUS_OVERESTIMATION,
    ApproximationKind.UNDERESTIMATION,
    ApproximationKind.CONTINUOUS_UNDERESTIMATION,
)

_CONSTANT_KINDS = frozenset({
    ApproximationKind.CONTINUOUS,
    ApproximationKind.CONTINUOUS_OVERESTIMATION,
    ApproximationKind.CONTINUOUS_UNDERESTIMATION,
})


def parse_kind(name: str) -> ApproximationKind:
    try:
        return ApproximationKind(name)
    except ValueError:
        valid = ", ".join(k.value for k in ApproximationKind)
        raise ValueError(f"unknown approximation kind {name!r}; expected one of {valid}")


@dataclass(frozen=True)
class ApproximationSpec:
    """An approximation class together with its error budget epsilon."""

    kind: ApproximationKind
    epsilon: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.epsilon, (int, float))
                and math.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidEpsilonError(f"epsilon must be positive, got {self.epsilon}")
        if not isinstance(self.kind, ApproximationKind):
            object.__setattr__(self, "kind", parse_kind(self.kind))

    @property
    def bounds(self) -> tuple[float, float]:
        """Admissible error interval (E_min, E_max)."""
        eps = self.epsilon
        if self.kind in (ApproximationKind.OVERESTIMATION,
                         ApproximationKind.CONTINUOUS_OVERESTIMATION):
            return (0.0, eps)
        if self.kind in (ApproximationKind.UNDERESTIMATION,
                         ApproximationKind.CONTINUOUS_UNDERESTIMATION):
            return (-eps, 0.0)
        return (-eps, eps)

    @property
    def sigma(self) -> float:
        emin, emax = self.bounds
        return emax - emin

    @property
    def constant_deviation(self) -> bool:
        """Whether all three vertex deviations are forced to a common value."""
        return self.kind in _CONSTANT_KINDS or self.interpolating

    @property
    def interpolating(self) -> bool:
        return self.kind is ApproximationKind.INTERPOLATION


@dataclass(frozen=True)
class SlackPair:
    """Distances of one deviation to the two error caps, in square-root scale."""

    a: float
    b: float


@dataclass(frozen=True)
class BoxEndpoints:
    """Caps of the three edge products induced by a slack triple."""

    p12: float
    p13: float
    p23: float
    q: float


@dataclass(frozen=True)
class OptimalSolution:
    """Closed-form optimum for one approximation class."""

    kind: ApproximationKind
    epsilon: float
    area: float
    density: float
    deviations: Deviations
    k_ascending: float
    k_descending: float
    lambda_ascending: float
    lambda_descending: float
    vertices: Triangle
    aspect_ratio: float

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "epsilon": self.epsilon,
            "area": self.area,
            "density": self.density,
            "deviations": list(self.deviations),
            "k_ascending": self.k_ascending,
            "k_descending": self.k_descending,
            "lambda_ascending": self.lambda_ascending,
            "lambda_descending": self.lambda_descending,
            "vertices": [list(v) for v in self.vertices.vertices],
            "aspect_ratio": self.aspect_ratio,
        }


@dataclass(frozen=True)
class ReducedSearchResult:
    """Outcome of the reduced-space grid sweep."""

    area: float
    argmax: tuple[float, ...]  # slack triple, or a single constant deviation


def slack_from_deviation(d: float, emin: float, emax: float) -> SlackPair:
    """Slack pair (sqrt(emax - d), sqrt(d - emin)) of a deviation."""
    width = emax - emin
    tol = 1e-12 * max(1.0, abs(width))
    if d < emin - tol or d > emax + tol:
        raise DeviationOutOfRangeError(f"deviation {d} outside [{emin}, {emax}]")
    d = min(max(d, emin), emax)
    return SlackPair(a=math.sqrt(emax - d), b=math.sqrt(d - emin))


def _check_slacks(sigma: float, *values: float) -> float:
    root = math.sqrt(sigma)
    tol = 1e-12 * max(1.0, root)
    for v in values:
        if v < -tol or v > root + tol:
            raise SlackOutOfRangeError(f"slack {v} outside [0, {root}]")
    return root


def box_endpoints(a1: float, a2: float, a3: float, sigma: float) -> BoxEndpoints:
    """Edge-product caps P12, P13, P23 and descending cap Q for a slack triple."""
    _check_slacks(sigma, a1, a2, a3)
    b2 = math.sqrt(max(sigma - a2 * a2, 0.0))
    b3 = math.sqrt(max(sigma - a3 * a3, 0.0))
    return BoxEndpoints(p12=(a1 + a2) ** 2, p13=(a1 + a3) ** 2,
                        p23=(a2 + a3) ** 2, q=(b2 + b3) ** 2)


def area_sq_from_k(k1: float, k2: float, k3: float) -> float:
    """Four times the squared area of any triangle with these edge products.

    May be non-positive, which signals that no non-degenerate triangle
    realizes the triple.
    """
    return (k1 + k2 - k3) ** 2 - 4.0 * k1 * k2


def realize_triangle(k1: float, k2: float, k3: float, t: float) -> Triangle:
    """Triangle (0,0), (t, k1/t), (s, k2/s) with the prescribed edge products.

    s is the smaller root of  k1 s^2 - (k1 + k2 - k3) t s + k2 t^2 = 0,
    computed through the cancellation-free quadratic formula.
    """
    if t <= 0.0:
        raise InvalidParameterError(f"free parameter t must be positive, got {t}")
    if k1 <= 0.0 or k2 <= 0.0:
        raise InvalidParameterError(
            f"ascending products must be positive, got k1={k1}, k2={k2}")
    disc = area_sq_from_k(k1, k2, k3)
    if disc <= 0.0:
        raise UnrealizableProductsError(
            f"products ({k1}, {k2}, {k3}) admit no non-degenerate triangle")
    b_coef = -(k1 + k2 - k3) * t
    sqrt_disc = math.sqrt(disc) * t
    q = -0.5 * (b_coef + math.copysign(sqrt_disc, b_coef))
    roots = sorted((q / k1, (k2 * t * t) / q))
    s = roots[0]
    return Triangle((0.0, 0.0), (t, k1 / t), (s, k2 / s))


def type_a_objective(a1: float, a2: float, a3: float, sigma: float) -> float:
    """4 A^2 at the all-bounds-tight box vertex (P12, P13, -Q)."""
    ends = box_endpoints(a1, a2, a3, sigma)
    return (ends.p12 - ends.p13) ** 2 + ends.q * (ends.q + 2.0 * ends.p12 + 2.0 * ends.p13)


def certificate_gap(a: float, b: float, sigma: float) -> tuple[float, float, float]:
    """Optimality gap at symmetric slacks (a, b, b) and its certificate split.

    Returns (gap, term1, term2) with

        gap   = 1024 sigma^2 / 27 - 16 (sigma - b^2)(sigma + a^2 + 2ab)
        term1 = (32 sqrt(sigma) / 27) (3b - sqrt(sigma))^2 (3b + 5 sqrt(sigma))
        term2 = 16 (sigma - b^2)(sqrt(sigma) - a)(sqrt(sigma) + a + 2b)

    The split satisfies gap = term1 + term2 with both terms nonnegative on
    [0, sqrt(sigma)]^2, vanishing only at a = sqrt(sigma), b = sqrt(sigma)/3.
    """
    root = _check_slacks(sigma, a, b)
    gap = 1024.0 * sigma * sigma / 27.0 - 16.0 * (sigma - b * b) * (sigma + a * a + 2.0 * a * b)
    term1 = (32.0 * root / 27.0) * (3.0 * b - root) ** 2 * (3.0 * b + 5.0 * root)
    term2 = 16.0 * (sigma - b * b) * (root - a) * (root + a + 2.0 * b)
    return gap, term1, term2


def box_vertex_enumerate(a1: float, a2: float, a3: float,
                         sigma: float) -> tuple[float, str]:
    """Largest 4 A^2 over the eight sign-pattern vertices of the product box.

    Returns the value and the vertex type: A = (P12, P13, -Q),
    B = (P12, P13, P23), C/D = one ascending product zeroed (with -Q / P23),
    E = both ascending products zeroed.  Ties resolve to the earliest label.
    """
    ends = box_endpoints(a1, a2, a3, sigma)
    p12, p13, p23, q = ends.p12, ends.p13, ends.p23, ends.q
    vertices = (
        ("A", (p12, p13, -q)),
        ("B", (p12, p13, p23)),
        ("C", (0.0, p13, -q)),
        ("C", (p12, 0.0, -q)),
        ("D", (0.0, p13, p23)),
        ("D", (p12, 0.0, p23)),
        ("E", (0.0, 0.0, -q)),
        ("E", (0.0, 0.0, p23)),
    )
    best_label, best = "A", -math.inf
    for label, (k1, k2, k3) in vertices:
        value = area_sq_from_k(k1, k2, k3)
        if value > best:
            best_label, best = label, value
    return best, best_label


_CONSTANT_DELTA_FACTOR = {
    ApproximationKind.CONTINUOUS: 1.0 / 3.0,
    ApproximationKind.CONTINUOUS_OVERESTIMATION: 2.0 / 3.0,
    ApproximationKind.CONTINUOUS_UNDERESTIMATION: -1.0 / 3.0,
}


def optimal_triangle(spec: ApproximationSpec) -> OptimalSolution:
    """Closed-form optimal triangle for an approximation class.

    Non-constant classes come from the certificate optimum
    (a, b) = (sqrt(sigma), sqrt(sigma)/3): deviations (E_min, (E_min + 8 E_max)/9
    at the two far vertices), ascending products 16 sigma / 9 and descending
    magnitude 32 sigma / 9.  Constant-deviation classes maximize the
    one-parameter area over the admissible constant, and interpolation pins
    all deviations to zero.  Vertices are returned in the symmetric
    normalized position: v1 at the origin, v2 = (x2, y2) with x2 > y2 > 0 and
    v3 its mirror across the diagonal.
    """
    eps = spec.epsilon
    emin, emax = spec.bounds
    sigma = emax - emin
    if spec.interpolating:
        d1 = d23 = 0.0
        k = 4.0 * eps
        w = 4.0 * eps
    elif spec.kind in _CONSTANT_DELTA_FACTOR:
        delta = _CONSTANT_DELTA_FACTOR[spec.kind] * eps
        d1 = d23 = delta
        k = 4.0 * (emax - delta)
        w = 4.0 * (delta - emin)
    else:
        d1 = emin
        d23 = (emin + 8.0 * emax) / 9.0
        k = 16.0 * sigma / 9.0
        w = 32.0 * sigma / 9.0
    q = math.sqrt(w)            # x2 - y2
    p = math.sqrt(4.0 * k + w)  # x2 + y2
    x2 = 0.5 * (p + q)
    y2 = 0.5 * (p - q)
    tri = Triangle((0.0, 0.0), (x2, y2), (y2, x2))
    area = 0.5 * p * q
    return OptimalSolution(
        kind=spec.kind,
        epsilon=eps,
        area=area,
        density=1.0 / area,
        deviations=Deviations(d1, d23, d23),
        k_ascending=k,
        k_descending=-w,
        lambda_ascending=lambda_star(d1, d23, k),
        lambda_descending=lambda_star(d23, d23, -w),
        vertices=tri,
        aspect_ratio=x2 / y2,
    )


def continuous_area(delta: float, epsilon: float) -> float:
    """Best area of a constant-deviation triangle within a symmetric budget.

    Equals sqrt((epsilon + delta) * (20 epsilon - 12 delta)) for
    delta in [-epsilon, epsilon].
    """
    if not -epsilon <= delta <= epsilon:
        raise OutOfRangeError(f"delta {delta} outside [{-epsilon}, {epsilon}]")
    inner = (epsilon + delta) * (20.0 * epsilon - 12.0 * delta)
    if inner < 0.0:
        raise OutOfRangeError(f"area is undefined for delta = {delta}")
    return math.sqrt(inner)


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def _box_vertex_max_slice(a1: float, a2u: np.ndarray, a3u: np.ndarray,
                          p23: np.ndarray, q: np.ndarray,
                          q_sq: np.ndarray, p23_sq: np.ndarray) -> np.ndarray:
    """Vectorized eight-vertex maximum of 4A^2 for fixed a1 over (a2, a3)."""
    p12 = (a1 + a2u) ** 2
    p13 = (a1 + a3u) ** 2
    s = p12 + p13
    prod4 = 4.0 * p12 * p13
    val = (s + q) ** 2 - prod4          # type A
    np.maximum(val, (s - p23) ** 2 - prod4, out=val)   # type B
    np.maximum(val, (p13 + q) ** 2, out=val)           # type C
    np.maximum(val, (p12 + q) ** 2, out=val)
    np.maximum(val, (p13 - p23) ** 2, out=val)         # type D
    np.maximum(val, (p12 - p23) ** 2, out=val)
    np.maximum(val, q_sq, out=val)                     # type E
    np.maximum(val, p23_sq, out=val)
    return val


def brute_force_reduced(spec: ApproximationSpec, grid_n: int,
                        workers: int = 1) -> ReducedSearchResult:
    """Exhaustive grid sweep of the reduced slack-space problem.

    For the free-deviation classes this sweeps (a1, a2, a3) over
    [0, sqrt(sigma)]^3 (restricted to a2 <= a3 by the objective's symmetry)
    and maximizes the eight-vertex box value; for constant-deviation classes
    it sweeps the single constant; interpolation is a single evaluation.
    Ties report the lexicographically smallest argument, so partitioning the
    a1 axis across workers reproduces the sequential result bit for bit.
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be at least 2, got {grid_n}")
    emin, emax = spec.bounds
    sigma = emax - emin

    if spec.interpolating:
        a = math.sqrt(spec.epsilon)
        value, _ = box_vertex_enumerate(a, a, a, sigma)
        return ReducedSearchResult(area=0.5 * math.sqrt(max(value, 0.0)),
                                   argmax=(a, a, a))

    if spec.constant_deviation:
        deltas = np.linspace(emin, emax, grid_n)
        inner = (deltas - emin) * (4.0 * emax - 3.0 * deltas - emin)
        areas = 2.0 * np.sqrt(np.maximum(inner, 0.0))
        i = int(np.argmax(areas))  # first maximum: smallest delta on ties
        return ReducedSearchResult(area=float(areas[i]),
                                   argmax=(float(deltas[i]),))

    grid = np.linspace(0.0, math.sqrt(sigma), grid_n)
    b = np.sqrt(np.maximum(sigma - grid * grid, 0.0))
    iu2, iu3 = np.triu_indices(grid_n)  # a2 <= a3, row-major
    a2u = grid[iu2]
    a3u = grid[iu3]
    p23 = (a2u + a3u) ** 2
    q = (b[iu2] + b[iu3]) ** 2
    q_sq = q * q
    p23_sq = p23 * p23

    def sweep(i_range):
        best_val = -math.inf
        best_idx = (0, 0, 0)
        for i1 in i_range:
            vals = _box_vertex_max_slice(grid[i1], a2u, a3u, p23, q, q_sq, p23_sq)
            j = int(np.argmax(vals))
            v = float(vals[j])
            if v > best_val:
                best_val = v
                best_idx = (i1, int(iu2[j]), int(iu3[j]))
        return best_val, best_idx

    if workers > 1:
        chunks = np.array_split(np.arange(grid_n), workers)
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(sweep, chunks))
        # Deterministic merge: maximum value, lexicographically smallest index.
        best_val, best_idx = max(results, key=lambda r: (r[0], tuple(-i for i in r[1])))
    else:
        best_val, best_idx = sweep(range(grid_n))

    argmax = tuple(float(grid[i]) for i in best_idx)
    return ReducedSearchResult(area=0.5 * math.sqrt(max(best_val, 0.0)),
                               argmax=argmax)


def _sample_chunk(spec: ApproximationSpec, chunk_seed: int, size: int,
                  keep: int) -> list[tuple[float, tuple[float, ...]]]:
    """Draw one chunk of random candidate triangles, return the best feasible ones."""
    rng = np.random.default_rng(chunk_seed)
    emin, emax = spec.bounds
    eps = spec.epsilon
    log_lo, log_hi = math.log(0.1 * math.sqrt(eps)), math.log(10.0 * math.sqrt(eps))
    coords = np.exp(rng.uniform(log_lo, log_hi, size=(4, size)))
    x2, y2, x3, y3 = coords
    if spec.interpolating:
        d1 = d2 = d3 = np.zeros(size)
    elif spec.constant_deviation:
        d1 = rng.uniform(emin, emax, size)
        d2 = d3 = d1
    else:
        d1, d2, d3 = rng.uniform(emin, emax, size=(3, size))

    k1 = x2 * y2
    k2 = x3 * y3
    k3 = (x3 - x2) * (y3 - y2)
    hi = np.maximum(np.maximum(d1, d2), d3)
    lo = np.minimum(np.minimum(d1, d2), d3)
    for di, dj, k in ((d1, d2, k1), (d1, d3, k2), (d2, d3, k3)):
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = (dj - di) / (2.0 * k) + 0.5
        inside = (k != 0.0) & (lam > 0.0) & (lam < 1.0)
        e_star = (1.0 - lam) * di + lam * dj + lam * (1.0 - lam) * k
        hi = np.maximum(hi, np.where(inside, e_star, -np.inf))
        lo = np.minimum(lo, np.where(inside, e_star, np.inf))
    feasible = (hi <= emax) & (lo >= emin)
    if not feasible.any():
        return []
    area = 0.5 * np.abs(x3 * y2 - x2 * y3)
    area = np.where(feasible, area, -np.inf)
    order = np.argsort(area)[::-1][:keep]
    out = []
    for j in order:
        if not feasible[j]:
            break
        out.append((float(area[j]),
                    (float(x2[j]), float(y2[j]), float(x3[j]), float(y3[j]),
                     float(d1[j]), float(d2[j]), float(d3[j]))))
    return out


def _feasible_area(spec: ApproximationSpec,
                   vec: tuple[float, ...]) -> float | None:
    """Area of the candidate, or None when it violates the error band."""
    x2, y2, x3, y3, d1, d2, d3 = vec
    emin, emax = spec.bounds
    for d in (d1, d2, d3):
        if not emin <= d <= emax:
            return None
    edges = ((d1, d2, x2 * y2), (d1, d3, x3 * y3),
             (d2, d3, (x3 - x2) * (y3 - y2)))
    for di, dj, k in edges:
        lo, hi = error_interval(di, dj, k)
        if hi > emax or lo < emin:
            return None
    return 0.5 * abs(x3 * y2 - x2 * y3)


def _refine(spec: ApproximationSpec, vec: tuple[float, ...],
            area: float) -> float:
    """Deterministic compass search: coordinate and scale moves, shrinking steps."""
    eps = spec.epsilon
    coord_scale = math.sqrt(eps)
    dev_scale = eps
    constant = spec.constant_deviation
    interp = spec.interpolating
    best_vec = list(vec)
    best_area = area
    step = 0.25
    while step > 1e-9:
        moved = False
        for _ in range(200):  # cap zigzags per step level
            best_move = None
            candidates = []
            for i in range(4):
                for sign in (1.0, -1.0):
                    nxt = list(best_vec)
                    nxt[i] += sign * step * coord_scale
                    candidates.append(nxt)
            # uniform rescale of all coordinates
            for factor in (1.0 + step, 1.0 - step):
                candidates.append([best_vec[0] * factor, best_vec[1] * factor,
                                   best_vec[2] * factor, best_vec[3] * factor,
                                   best_vec[4], best_vec[5], best_vec[6]])
            if not interp:
                dev_idx = (4,) if constant else (4, 5, 6)
                for i in dev_idx:
                    for sign in (1.0, -1.0):
                        nxt = list(best_vec)
                        nxt[i] += sign * step * dev_scale
                        if constant:
                            nxt[5] = nxt[6] = nxt[4]
                        candidates.append(nxt)
            for nxt in candidates:
                a = _feasible_area(spec, tuple(nxt))
                if a is not None and a > best_area:
                    if best_move is None or a > best_move[0]:
                        best_move = (a, nxt)
            if best_move is None:
                break
            best_area, best_vec = best_move[0], best_move[1]
            moved = True
        if not moved:
            step *= 0.5
    return best_area


def brute_force_geometric(spec: ApproximationSpec, samples: int, seed: int,
                          workers: int = 1) -> float:
    """Randomized direct search over vertex coordinates and deviations.

    Samples triangles with one vertex at the origin and the other two
    log-uniform in [0.1 sqrt(eps), 10 sqrt(eps)]^2, keeps those whose exact
    per-edge error range stays inside the admissible band, then polishes the
    best finds by compass search.  The result is a certified-feasible area,
    hence a lower bound on the optimum; identical seeds give identical
    results regardless of worker count.
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    chunk = 1 << 17
    n_chunks = (samples + chunk - 1) // chunk
    master = np.random.default_rng(seed)
    chunk_seeds = master.integers(0, 2 ** 63 - 1, size=n_chunks)
    sizes = [chunk] * (n_chunks - 1) + [samples - chunk * (n_chunks - 1)]
    keep = 8

    def run(i):
        return _sample_chunk(spec, int(chunk_seeds[i]), sizes[i], keep)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            chunk_tops = list(pool.map(run, range(n_chunks)))
    else:
        chunk_tops = [run(i) for i in range(n_chunks)]

    candidates = sorted((c for top in chunk_tops for c in top),
                        key=lambda c: (-c[0], c[1]))[:keep]
    if not candidates:
        return 0.0
    best = candidates[0][0]
    for area, vec in candidates:
        best = max(best, _refine(spec, vec, area))
    return best


def hyperbola_intersections(u1: Point, u2: Point,
                            kstar: float) -> list[Point]:
    """Intersections of (x - p1)(y - q1) = k* and (x - p2)(y - q2) = k*.

    Eliminating y gives (q1 - q2)(x - p1)(x - p2) = k* (p2 - p1): at most two
    points, and none at all when the centers share a height but not a width.
    """
    p1, q1 = u1
    p2, q2 = u2
    if p1 == p2 and q1 == q2:
        raise IdenticalCentersError("hyperbola centers coincide")
    if kstar <= 0.0:
        raise InvalidParameterError(f"level k* must be positive, got {kstar}")
    dq = q1 - q2
    if dq == 0.0:
        return []
    # dq * x^2 - dq (p1 + p2) x + dq p1 p2 - k* (p2 - p1) = 0
    b_coef = -dq * (p1 + p2)
    c_coef = dq * p1 * p2 - kstar * (p2 - p1)
    disc = b_coef * b_coef - 4.0 * dq * c_coef
    if disc < 0.0:
        return []
    if disc == 0.0:
        roots = [-b_coef / (2.0 * dq)]
    else:
        qq = -0.5 * (b_coef + math.copysign(math.sqrt(disc), b_coef))
        if qq == 0.0:  # b_coef == 0: symmetric roots
            r = math.sqrt(disc) / (2.0 * abs(dq))
            roots = [-r, r]
        else:
            roots = sorted({qq / dq, c_coef / qq})
    points = []
    for x in roots:
        if x == p1 or x == p2:  # no finite y on a degenerate branch
            continue
        points.append((x, q1 + kstar / (x - p1)))
    return points
