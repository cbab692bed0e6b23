"""Quadratic forms on the plane and the error-preserving transformations.

A quadratic form ``a*x^2 + 2*b*x*y + c*y^2 + d*x + e*y + g`` with negative
discriminant ``D = a*c - b^2`` has a saddle graph.  Every such form can be
brought to the standard bilinear shape ``kappa * u * v`` by an invertible
linear change of variables, so all downstream analysis runs on ``F(x,y) = xy``.
This module provides that reduction plus the moves that leave the pointwise
approximation error of an affine piece invariant: translation, point
reflection, axis reflection (standard form only) and the hyperbolic slide
``(x, y) -> (m*x, y/m)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .errors import (
    NearDegenerateError,
    NotFirstQuadrantError,
    NotIndefiniteError,
    NotOnCommonHyperbolaError,
    ZeroParameterError,
)

if TYPE_CHECKING:  # only for annotations; avoids a circular import
    from .triangle_error import Triangle

Point = tuple[float, float]
Matrix2 = tuple[tuple[float, float], tuple[float, float]]

# Relative threshold below which a leading coefficient is treated as zero
# when choosing the reduction construction.
_COEFF_ZERO_REL = 1e-12


@dataclass(frozen=True)
class QuadraticForm:
    """Coefficients of ``a*x^2 + 2*b*x*y + c*y^2 + d*x + e*y + g``."""

    a: float
    b: float
    c: float
    d: float = 0.0
    e: float = 0.0
    g: float = 0.0

    def __call__(self, p: Sequence[float]) -> float:
        return evaluate(self, p)

    @property
    def quadratic_matrix(self) -> Matrix2:
        """Symmetric matrix Q with x^T Q x equal to the quadratic part."""
        return ((self.a, self.b), (self.b, self.c))

    @property
    def linear_part(self) -> Point:
        return (self.d, self.e)

    def to_json_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c,
                "d": self.d, "e": self.e, "g": self.g}

    @classmethod
    def from_json_dict(cls, data: dict) -> "QuadraticForm":
        return cls(float(data["a"]), float(data["b"]), float(data["c"]),
                   float(data.get("d", 0.0)), float(data.get("e", 0.0)),
                   float(data.get("g", 0.0)))


#: The standard saddle F(x, y) = x*y.
STANDARD_FORM = QuadraticForm(a=0.0, b=0.5, c=0.0)


@dataclass(frozen=True)
class LinearPiece:
    """An affine facet ``l(x, y) = alpha*x + beta*y + gamma``."""

    alpha: float
    beta: float
    gamma: float

    def __call__(self, p: Sequence[float]) -> float:
        return self.alpha * p[0] + self.beta * p[1] + self.gamma

    @property
    def gradient(self) -> Point:
        return (self.alpha, self.beta)


class ReductionCase(enum.Enum):
    """Which construction produced the change of variables."""

    BILINEAR_ONLY = "bilinear-only"   # a = c = 0: already bilinear
    SHEAR_A = "shear-a"               # c = 0, a != 0: shear absorbing x^2
    SHEAR_C = "shear-c"               # a = 0, c != 0: shear absorbing y^2
    ASYMPTOTE = "asymptote"           # a, c != 0: asymptotes to the axes


@dataclass(frozen=True)
class StandardReduction:
    """Change of variables sending a saddle form to ``kappa * u * v``.

    ``phi`` maps (x, y) to (u, v); ``phi_inv`` is its exact per-case inverse.
    Substituting (x, y) = phi_inv (u, v) into the quadratic part yields
    ``kappa * u * v`` with vanishing u^2 and v^2 coefficients.  The linear
    terms of the source form survive as ``residual`` (expressed in (u, v)
    coordinates) and are meant to be absorbed into the affine approximant.
    """

    phi: Matrix2
    phi_inv: Matrix2
    kappa: float
    jacobian: float
    case_tag: ReductionCase
    residual: LinearPiece

    def to_standard(self, p: Sequence[float]) -> Point:
        """Apply phi: source coordinates (x, y) -> standard (u, v)."""
        (m00, m01), (m10, m11) = self.phi
        return (m00 * p[0] + m01 * p[1], m10 * p[0] + m11 * p[1])

    def from_standard(self, p: Sequence[float]) -> Point:
        """Apply phi^-1: standard (u, v) -> source (x, y)."""
        (m00, m01), (m10, m11) = self.phi_inv
        return (m00 * p[0] + m01 * p[1], m10 * p[0] + m11 * p[1])

    def to_json_dict(self) -> dict:
        (p00, p01), (p10, p11) = self.phi
        return {"phi": [p00, p01, p10, p11],  # row-major
                "kappa": self.kappa,
                "jacobian": self.jacobian,
                "case": self.case_tag.value}


def evaluate(qf: QuadraticForm, p: Sequence[float]) -> float:
    """Value of the form at a point."""
    x, y = p[0], p[1]
    return (qf.a * x * x + 2.0 * qf.b * x * y + qf.c * y * y
            + qf.d * x + qf.e * y + qf.g)


def discriminant(qf: QuadraticForm) -> float:
    """``a*c - b^2``; negative exactly for saddle graphs."""
    return qf.a * qf.c - qf.b * qf.b


def _invert2(m: Matrix2) -> tuple[Matrix2, float]:
    (m00, m01), (m10, m11) = m
    det = m00 * m11 - m01 * m10
    inv = ((m11 / det, -m01 / det), (-m10 / det, m00 / det))
    return inv, det


def reduce_to_standard(qf: QuadraticForm) -> StandardReduction:
    """Bring the quadratic part of an indefinite form to ``kappa * u * v``.

    Dispatches on which of a, c vanish (relative to the coefficient norm):

    * a = c = 0: the form is already bilinear; phi is the identity and
      kappa = 2b.
    * c = 0, a != 0 (or symmetrically a = 0, c != 0): a unit shear absorbs
      the square term and kappa = 2b.
    * a, c != 0: the null directions of the quadratic part have slopes
      m = (-b +- sqrt(b^2 - a*c)) / c; mapping them onto the coordinate axes
      leaves the cross term kappa = 4*(a*c - b^2)/c.

    Raises NotIndefiniteError when D >= 0 and NearDegenerateError when |D|
    is too small for a meaningful bilinear coefficient.
    """
    a, b, c = qf.a, qf.b, qf.c
    disc = a * c - b * b
    scale = max(abs(a), abs(b), abs(c))
    if disc >= 0.0:
        raise NotIndefiniteError(
            f"discriminant {disc} is non-negative; the graph is not a saddle")
    if abs(disc) < 1e-12 * scale * scale:
        raise NearDegenerateError(
            f"discriminant {disc} is numerically zero relative to the coefficients")

    coeff_norm = math.sqrt(a * a + b * b + c * c)
    a_zero = abs(a) <= _COEFF_ZERO_REL * coeff_norm
    c_zero = abs(c) <= _COEFF_ZERO_REL * coeff_norm

    if a_zero and c_zero:
        # Pure bilinear term: keep coordinates, read off kappa = 2b.
        phi: Matrix2 = ((1.0, 0.0), (0.0, 1.0))
        phi_inv: Matrix2 = ((1.0, 0.0), (0.0, 1.0))
        kappa = 2.0 * b
        case = ReductionCase.BILINEAR_ONLY
    elif c_zero:
        # x = u, y = v - (a / 2b) u  absorbs a*x^2 into the cross term.
        shear = a / (2.0 * b)
        phi = ((1.0, 0.0), (shear, 1.0))
        phi_inv = ((1.0, 0.0), (-shear, 1.0))
        kappa = 2.0 * b
        case = ReductionCase.SHEAR_A
    elif a_zero:
        # y = v, x = u - (c / 2b) v  absorbs c*y^2.
        shear = c / (2.0 * b)
        phi = ((1.0, shear), (0.0, 1.0))
        phi_inv = ((1.0, -shear), (0.0, 1.0))
        kappa = 2.0 * b
        case = ReductionCase.SHEAR_C
    else:
        # Slopes of the null directions, roots of c m^2 + 2 b m + a = 0,
        # computed without cancellation.
        s = math.sqrt(-disc)
        if b >= 0.0:
            m_minus = (-b - s) / c
            m_plus = a / (c * m_minus)
        else:
            m_plus = (-b + s) / c
            m_minus = a / (c * m_plus)
        # (x, y) = M (u, v) sends the axes onto the null directions.
        m_mat: Matrix2 = ((1.0, 1.0), (m_plus, m_minus))
        phi, _ = _invert2(m_mat)
        phi_inv = m_mat
        kappa = 4.0 * disc / c
        case = ReductionCase.ASYMPTOTE

    (p00, p01), (p10, p11) = phi
    jacobian = abs(p00 * p11 - p01 * p10)
    # Linear terms re-expressed in (u, v):  d*x + e*y = (d, e) . phi_inv (u, v)
    (i00, i01), (i10, i11) = phi_inv
    residual = LinearPiece(alpha=qf.d * i00 + qf.e * i10,
                           beta=qf.d * i01 + qf.e * i11,
                           gamma=qf.g)
    return StandardReduction(phi=phi, phi_inv=phi_inv, kappa=kappa,
                             jacobian=jacobian, case_tag=case,
                             residual=residual)


def quadratic_coefficients_in_standard(qf: QuadraticForm,
                                       red: StandardReduction) -> tuple[float, float, float]:
    """Coefficients (of u^2, u*v, v^2) of the quadratic part after substitution.

    Computes M^T Q M for M = phi^-1; the u*v coefficient should equal kappa
    and the square coefficients should vanish.
    """
    (m00, m01), (m10, m11) = red.phi_inv
    a, b, c = qf.a, qf.b, qf.c
    # Q' = M^T Q M with Q = [[a, b], [b, c]]
    q00 = m00 * (a * m00 + b * m10) + m10 * (b * m00 + c * m10)
    q01 = m00 * (a * m01 + b * m11) + m10 * (b * m01 + c * m11)
    q11 = m01 * (a * m01 + b * m11) + m11 * (b * m01 + c * m11)
    return q00, 2.0 * q01, q11


def translate_piece(piece: LinearPiece, qf: QuadraticForm,
                    t: Sequence[float]) -> LinearPiece:
    """Affine piece with the same error profile over a translated domain.

    The returned piece satisfies ``(qf - out)(p + t) = (qf - piece)(p)`` for
    every point p: gradient shifts by 2*Q*t, the constant compensates the
    expansion of the quadratic at the new location.
    """
    tx, ty = t[0], t[1]
    gx = piece.alpha + 2.0 * (qf.a * tx + qf.b * ty)
    gy = piece.beta + 2.0 * (qf.b * tx + qf.c * ty)
    t_q_t = qf.a * tx * tx + 2.0 * qf.b * tx * ty + qf.c * ty * ty
    gamma = (piece.gamma - t_q_t + (qf.d * tx + qf.e * ty)
             - (piece.alpha * tx + piece.beta * ty))
    return LinearPiece(gx, gy, gamma)


def point_reflect_piece(piece: LinearPiece, qf: QuadraticForm) -> LinearPiece:
    """Affine piece with the same error profile over the point-reflected domain.

    Satisfies ``(qf - out)(-p) = (qf - piece)(p)``: the gradient becomes
    2*(d, e) - grad, the constant is unchanged.
    """
    return LinearPiece(2.0 * qf.d - piece.alpha,
                       2.0 * qf.e - piece.beta,
                       piece.gamma)


def axis_reflect_piece(piece: LinearPiece, axis: str) -> LinearPiece:
    """Affine piece matching the error profile across an axis reflection.

    Valid for the standard form only, whose sign flips under either axis
    reflection: the reflected piece is -piece(x, -y) for the x axis and
    -piece(-x, y) for the y axis, so |out - F| over the reflected triangle
    equals |piece - F| over the original.
    """
    ax = axis.lower()
    if ax == "x":
        return LinearPiece(-piece.alpha, piece.beta, -piece.gamma)
    if ax == "y":
        return LinearPiece(piece.alpha, -piece.beta, -piece.gamma)
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def pe_motion(p: Sequence[float], m: float) -> Point:
    """Slide a point along its hyperbola x*y = const: (x, y) -> (m x, y/m)."""
    if m == 0.0:
        raise ZeroParameterError("slide parameter m must be nonzero")
    return (m * p[0], p[1] / m)


def pe_normalize(tri: "Triangle") -> float:
    """Slide parameter that puts a hyperbola-sharing triangle in symmetric form.

    Requires vertex 1 at the origin and x2*y2 = x3*y3 > 0.  Applying
    ``pe_motion`` with the returned m to v2 and v3 yields coordinates with
    (x2', y2') = (y3', x3'), i.e. the two free vertices mirror each other
    across the diagonal.
    """
    x2, y2 = tri.v2
    x3, y3 = tri.v3
    k1 = x2 * y2
    k2 = x3 * y3
    tol = 1e-9 * max(abs(k1), abs(k2), 1e-300)
    if abs(k1 - k2) > tol or k1 <= 0.0:
        raise NotOnCommonHyperbolaError(
            f"vertex products {k1} and {k2} do not match a positive common value")
    if x2 <= 0.0 or y3 <= 0.0:
        raise NotFirstQuadrantError(
            "vertices must lie in the open first quadrant; normalize first")
    return math.sqrt(y3 / x2)
