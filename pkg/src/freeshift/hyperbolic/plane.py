"""Upper half-plane model: points, distance, Moebius isometries.

The ambient space everywhere in this package is H^2 with the metric
cosh d(p, q) = 1 + (|p - q|^2) / (2 Im p Im q); its thin-triangles
constant (each side within a neighborhood of the other two) is
DELTA_H2 = ln(1 + sqrt 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DELTA_H2 = math.log(1.0 + math.sqrt(2.0))


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("upper half-plane points need y > 0")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @staticmethod
    def of(z: complex) -> "HPoint":
        return HPoint(z.real, z.imag)


I = HPoint(0.0, 1.0)


def hdist(p: HPoint, q: HPoint) -> float:
    # 2 asinh(|p - q| / (2 sqrt(y_p y_q))): same value as the acosh form but
    # stable when the points sit exponentially close to the boundary
    num = math.hypot(p.x - q.x, p.y - q.y)
    return 2.0 * math.asinh(num / (2.0 * math.sqrt(p.y) * math.sqrt(q.y)))


def hdist_arrays(x1, y1, x2, y2):
    """Vectorized hdist on coordinate arrays (numpy broadcasting applies)."""
    num = np.hypot(x1 - x2, y1 - y2)
    return 2.0 * np.arcsinh(num / (2.0 * np.sqrt(y1) * np.sqrt(y2)))


def pairwise_hdist(xs, ys):
    """Full distance matrix of a point cloud given as coordinate arrays."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    return hdist_arrays(xs[:, None], ys[:, None], xs[None, :], ys[None, :])


@dataclass(frozen=True)
class Moebius:
    """Unit-determinant real 2x2 matrix up to sign.

    Entries are normalized so the determinant is 1 within 1e-12 and the
    first nonzero of (a, b, c) is positive, making equality checks and
    serialization canonical.
    """

    a: float
    b: float
    c: float
    d: float

    @staticmethod
    def of(a: float, b: float, c: float, d: float) -> "Moebius":
        det = a * d - b * c
        if det <= 0:
            raise ValueError(f"determinant {det} must be positive")
        r = math.sqrt(det)
        a, b, c, d = a / r, b / r, c / r, d / r
        for lead in (a, b, c):
            if lead != 0.0:
                if lead < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return Moebius(a, b, c, d)

    @staticmethod
    def identity() -> "Moebius":
        return Moebius(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def _signed(a: float, b: float, c: float, d: float) -> "Moebius":
        # canonical sign only; unit determinant is preserved by products of
        # unit matrices, and recomputing it from huge entries cancels badly
        for lead in (a, b, c):
            if lead != 0.0:
                if lead < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return Moebius(a, b, c, d)

    def compose(self, other: "Moebius") -> "Moebius":
        return Moebius._signed(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Moebius":
        return Moebius._signed(self.d, -self.b, -self.c, self.a)

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def trace(self) -> float:
        return self.a + self.d

    def apply_complex(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def apply(self, p: HPoint) -> HPoint:
        return HPoint.of(self.apply_complex(p.z))

    def apply_boundary(self, x: float) -> float:
        """Action on the boundary circle R + {inf}."""
        if math.isinf(x):
            return math.inf if self.c == 0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0:
            return math.inf
        return (self.a * x + self.b) / den

    def derivative_at(self, z: complex) -> complex:
        return 1.0 / (self.c * z + self.d) ** 2

    def is_hyperbolic(self) -> bool:
        return abs(self.trace()) > 2.0

    def translation_length(self) -> float:
        t = abs(self.trace())
        if t <= 2.0:
            return 0.0
        return 2.0 * math.acosh(t / 2.0)

    def fixed_points(self) -> tuple[float, float]:
        """Boundary fixed points of a hyperbolic element as
        (attracting, repelling)."""
        if not self.is_hyperbolic():
            raise ValueError("fixed points on the boundary need |trace| > 2")
        if self.c == 0:
            # fixed points are inf and b/(d-a); inf attracts iff |a| > |d|
            finite = self.b / (self.d - self.a)
            return (math.inf, finite) if abs(self.a) > abs(self.d) else (finite, math.inf)
        disc = math.sqrt(self.trace() ** 2 - 4.0)
        # eigenvalues (tr +- disc)/2; the attracting point belongs to the
        # eigenvalue of larger absolute value, via [a b; c d][x; 1] = lam [x; 1]
        lams = ((self.trace() + disc) / 2.0, (self.trace() - disc) / 2.0)
        lam_att, lam_rep = (
            (lams[0], lams[1]) if abs(lams[0]) > abs(lams[1]) else (lams[1], lams[0])
        )
        return (lam_att - self.d) / self.c, (lam_rep - self.d) / self.c

    def attracting_fixed_point(self) -> float:
        return self.fixed_points()[0]

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)


def scaling(factor: float) -> Moebius:
    """z -> factor z, hyperbolic with axis the imaginary half-line."""
    if factor <= 0 or factor == 1:
        raise ValueError("scaling factor must be positive and != 1")
    return Moebius.of(math.sqrt(factor), 0.0, 0.0, 1.0 / math.sqrt(factor))


def from_tangent(p: HPoint, angle: float) -> Moebius:
    """Isometry sending i to p and the upward direction to ``angle``
    (Euclidean angle of the tangent vector, conformal model)."""
    alpha = angle - math.pi / 2.0
    rot = Moebius.of(
        math.cos(alpha / 2.0),
        math.sin(alpha / 2.0),
        -math.sin(alpha / 2.0),
        math.cos(alpha / 2.0),
    )
    scale = Moebius.of(math.sqrt(p.y), 0.0, 0.0, 1.0 / math.sqrt(p.y))
    translate = Moebius.of(1.0, p.x, 0.0, 1.0)
    return translate.compose(scale).compose(rot)


def _geodesic_data(p: HPoint, angle: float) -> tuple[float, float, float, float]:
    """Circle data (center, radius, travel sign, start parameter) of the
    unit-speed geodesic from p with tangent angle ``angle``; radius inf
    encodes a vertical line.  The parameterization is

        gamma(t) = (center - r tanh u, r / cosh u),   u = sign * t + u0,

    which is numerically stable for long parameters (coordinates saturate
    instead of overflowing)."""
    cosang = math.cos(angle)
    if abs(cosang) < 1e-12:
        sign = 1.0 if math.sin(angle) > 0 else -1.0
        return p.x, math.inf, sign, math.log(p.y)
    center = p.x + p.y * math.tan(angle)
    radius = p.y / abs(cosang)
    phi = math.atan2(p.y, p.x - center)
    # moving counterclockwise means the tangent angle is phi + pi/2
    sign = 1.0 if math.cos(angle - phi - math.pi / 2.0) > 0 else -1.0
    # (center - x)/radius = sin(angle) sign(cos(angle)); computing it that
    # way (with sqrt(1 - s^2) = |cos|) avoids the float absorption of the
    # tiny offset center - x for near-vertical directions
    s = math.sin(angle) * math.copysign(1.0, cosang)
    u0 = math.copysign(math.log((1.0 + abs(s)) / abs(cosang)), s) if s else 0.0
    return center, radius, sign, u0


def geodesic_points(p: HPoint, angle: float, params) -> tuple[np.ndarray, np.ndarray]:
    """Points of the unit-speed geodesic from p in direction ``angle`` at
    the given parameters; returns coordinate arrays."""
    t = np.asarray(params, dtype=float)
    center, radius, sign, u0 = _geodesic_data(p, angle)
    if math.isinf(radius):
        return np.full(t.shape, center), np.exp(u0 + sign * t)
    u = sign * t + u0
    return center - radius * np.tanh(u), radius / np.cosh(u)


def geodesic_endpoint_direction(p: HPoint, angle: float, t: float) -> tuple[HPoint, float]:
    """Endpoint and forward tangent angle after time t along the geodesic."""
    center, radius, sign, u0 = _geodesic_data(p, angle)
    if math.isinf(radius):
        return HPoint(center, math.exp(u0 + sign * t)), angle
    u = sign * t + u0
    end = HPoint(center - radius * math.tanh(u), radius / math.cosh(u))
    phi = 2.0 * math.atan(math.exp(u))
    return end, phi + sign * math.pi / 2.0


def dist_to_geodesic(p: HPoint, x1: float, x2: float) -> float:
    """Distance from p to the geodesic with boundary endpoints x1, x2
    (one endpoint may be inf)."""
    if math.isinf(x1) or math.isinf(x2):
        finite = x2 if math.isinf(x1) else x1
        return math.asinh(abs(p.x - finite) / p.y)
    if x1 == x2:
        raise ValueError("geodesic endpoints must differ")
    w = (p.z - x1) / (p.z - x2)
    return math.asinh(abs(w.real) / w.imag) if w.imag > 0 else math.asinh(abs(w.real) / -w.imag)


def dist_to_halfdisk(p: HPoint, x1: float, x2: float) -> float:
    """Distance from p to the half-disk bounded by the geodesic over the
    finite boundary interval [x1, x2]; zero inside."""
    lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
    center = (lo + hi) / 2.0
    radius = (hi - lo) / 2.0
    if (p.x - center) ** 2 + p.y**2 <= radius**2:
        return 0.0
    return dist_to_geodesic(p, lo, hi)


def to_disk_boundary(x: float) -> complex:
    """Cayley transform of a boundary point onto the unit circle; the
    chordal metric |w1 - w2| there is a visual metric for basepoint i."""
    if math.isinf(x):
        return complex(1.0, 0.0)
    w = (complex(x, 0.0) - 1j) / (complex(x, 0.0) + 1j)
    return w


def chordal(x1: float, x2: float) -> float:
    return abs(to_disk_boundary(x1) - to_disk_boundary(x2))
