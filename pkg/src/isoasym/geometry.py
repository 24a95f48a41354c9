"""Planar shape classes and primitive measures.

Four shape classes share one interface: simple polygons, star-shaped bodies
given by a radial profile about the origin, stadiums (rectangle capped by two
half disks, area pi by construction), and composites made of disks optionally
joined by segments.  On top of them this module provides the primitive
measures every functional is built from: area, barycenter, perimeter in the
Minkowski sense (one-dimensional hairs count twice), diameter, Hausdorff
distance, and exact disk-intersection areas used by the symmetric-difference
functionals.

Shapes serialize to JSON with a "type" tag in {"polygon", "radial",
"stadium", "composite"}; angles are radians, coordinates abstract length
units.  All operations are pure functions of their inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

TWO_PI = 2.0 * math.pi


class ShapeError(ValueError):
    """Base class for invalid shape inputs."""


class ShapeValidationError(ShapeError):
    """Construction-time invariant violated."""


class DegenerateShapeError(ShapeError):
    """Operation undefined for a measure-zero or empty shape."""


class RasterResolutionError(ShapeError):
    """Raster grid cannot resolve the requested enlargement."""


# ---------------------------------------------------------------------------
# shape classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ShapeValidationError("point coordinates must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


def _signed_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_properly_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


@dataclass(frozen=True, eq=False)
class Polygon:
    """Simple polygon with counterclockwise vertices and positive area."""

    vertices: np.ndarray  # (V, 2)

    def __init__(self, vertices):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
            raise ShapeValidationError("polygon needs at least 3 planar vertices")
        if not np.all(np.isfinite(verts)):
            raise ShapeValidationError("polygon vertices must be finite")
        # repeated vertices are rejected outright
        v = verts.round(decimals=12)
        if len(np.unique(v, axis=0)) != len(v):
            raise ShapeValidationError("polygon has repeated vertices")
        if _signed_area(verts) <= 0.0:
            raise ShapeValidationError("polygon must be counterclockwise with positive area")
        n = len(verts)
        for i in range(n):
            p1, p2 = verts[i], verts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                q1, q2 = verts[j], verts[(j + 1) % n]
                if _segments_properly_intersect(p1, p2, q1, q2):
                    raise ShapeValidationError("polygon is self-intersecting")
        object.__setattr__(self, "vertices", verts)


@dataclass(frozen=True, eq=False)
class RadialShape:
    """Star-shaped body about the origin: boundary radius 1 + u(theta).

    The profile u lives on the uniform grid theta_k = 2 pi k / M and is
    identified with its trigonometric interpolant, so derivatives and
    evaluations at arbitrary angles are spectral.  Sample count M must be
    even and at least 16, and 1 + u must stay positive.
    """

    u_samples: np.ndarray
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __init__(self, u_samples=None, cos_coeffs=None, sin_coeffs=None):
        if u_samples is not None:
            u = np.asarray(u_samples, dtype=float)
            if u.ndim != 1 or len(u) < 16 or len(u) % 2:
                raise ShapeValidationError("radial profile needs an even sample count >= 16")
            if not np.all(np.isfinite(u)):
                raise ShapeValidationError("radial profile must be finite")
            a, b = _fourier_from_samples(u)
        else:
            a = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
            b = np.atleast_1d(np.asarray(sin_coeffs, dtype=float)) if sin_coeffs is not None else np.zeros_like(a)
            if len(b) < len(a):
                b = np.concatenate([b, np.zeros(len(a) - len(b))])
            elif len(a) < len(b):
                a = np.concatenate([a, np.zeros(len(b) - len(a))])
            M = max(16, 4 * len(a))
            M += M % 2
            u = _fourier_eval(a, b, TWO_PI * np.arange(M) / M)
        if np.min(1.0 + u) <= 0.0:
            raise ShapeValidationError("radial profile must keep 1 + u > 0 (star-shaped about 0)")
        object.__setattr__(self, "u_samples", u)
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)

    @property
    def grid_size(self) -> int:
        return len(self.u_samples)

    def thetas(self) -> np.ndarray:
        return TWO_PI * np.arange(self.grid_size) / self.grid_size

    def radius(self, theta) -> np.ndarray:
        return 1.0 + _fourier_eval(self.cos_coeffs, self.sin_coeffs, theta)

    def radius_prime(self, theta) -> np.ndarray:
        return _fourier_eval_deriv(self.cos_coeffs, self.sin_coeffs, theta, order=1)

    def radius_second(self, theta) -> np.ndarray:
        return _fourier_eval_deriv(self.cos_coeffs, self.sin_coeffs, theta, order=2)

    def u_prime_samples(self) -> np.ndarray:
        return self.radius_prime(self.thetas())

    def resampled(self, grid_size: int) -> "RadialShape":
        th = TWO_PI * np.arange(grid_size) / grid_size
        return RadialShape(u_samples=self.radius(th) - 1.0)


@dataclass(frozen=True)
class Stadium:
    """Convex hull of two disks of radius sin(theta), normalized to area pi.

    theta in (0, pi/2] is the half-angle parameter; the rectangle half-length
    is l = pi (1 - sin^2 theta) / (4 sin theta) and theta = pi/2 is the unit
    disk.
    """

    theta: float

    def __post_init__(self):
        if not (0.0 < self.theta <= math.pi / 2.0 and math.isfinite(self.theta)):
            raise ShapeValidationError("stadium parameter must lie in (0, pi/2]")

    @property
    def r(self) -> float:
        return math.sin(self.theta)

    @property
    def l(self) -> float:
        s = math.sin(self.theta)
        return math.pi * (1.0 - s * s) / (4.0 * s)


@dataclass(frozen=True, eq=False)
class DiskSegmentComposite:
    """Union of pairwise-disjoint disks and connecting segments.

    Segments are one-dimensional: they carry no area but their length counts
    twice in the Minkowski perimeter.  Every segment endpoint must lie on a
    disk boundary or coincide with another segment endpoint.  Connectivity is
    not forced at construction (the disconnected two-disk family is a valid
    instance); use is_connected() where a theorem needs it.
    """

    disks: tuple  # of (Point2, radius)
    segments: tuple  # of (Point2, Point2)

    def __init__(self, disks, segments=()):
        dd = []
        for c, r in disks:
            c = c if isinstance(c, Point2) else Point2(*c)
            r = float(r)
            if not (r > 0.0 and math.isfinite(r)):
                raise ShapeValidationError("disk radius must be positive and finite")
            dd.append((c, r))
        if not dd:
            raise ShapeValidationError("composite needs at least one disk")
        for i in range(len(dd)):
            for j in range(i + 1, len(dd)):
                ci, ri = dd[i]
                cj, rj = dd[j]
                if math.hypot(ci.x - cj.x, ci.y - cj.y) < ri + rj - 1e-12:
                    raise ShapeValidationError("composite disks must be pairwise disjoint")
        ss = []
        for p, q in segments:
            p = p if isinstance(p, Point2) else Point2(*p)
            q = q if isinstance(q, Point2) else Point2(*q)
            if math.hypot(p.x - q.x, p.y - q.y) <= 0.0:
                raise ShapeValidationError("segments must have positive length")
            ss.append((p, q))
        endpoints = [e for s in ss for e in s]
        for e in endpoints:
            on_disk = any(abs(math.hypot(e.x - c.x, e.y - c.y) - r) <= 1e-9 for c, r in dd)
            on_other = sum(1 for f in endpoints if math.hypot(e.x - f.x, e.y - f.y) <= 1e-9) > 1
            if not (on_disk or on_other):
                raise ShapeValidationError(
                    "segment endpoints must lie on a disk boundary or meet another segment"
                )
        object.__setattr__(self, "disks", tuple(dd))
        object.__setattr__(self, "segments", tuple(ss))

    def is_connected(self) -> bool:
        n = len(self.disks) + len(self.segments)
        if n <= 1:
            return True
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            parent[find(i)] = find(j)

        def touches_disk(p: Point2, k: int) -> bool:
            c, r = self.disks[k]
            return math.hypot(p.x - c.x, p.y - c.y) <= r + 1e-9

        for si, (p, q) in enumerate(self.segments):
            for di in range(len(self.disks)):
                if touches_disk(p, di) or touches_disk(q, di):
                    union(len(self.disks) + si, di)
            for sj in range(si + 1, len(self.segments)):
                p2, q2 = self.segments[sj]
                for e in (p, q):
                    for f in (p2, q2):
                        if math.hypot(e.x - f.x, e.y - f.y) <= 1e-9:
                            union(len(self.disks) + si, len(self.disks) + sj)
        return len({find(i) for i in range(n)}) == 1


Shape = Union[Polygon, RadialShape, Stadium, DiskSegmentComposite]


# ---------------------------------------------------------------------------
# Fourier helpers for radial profiles
# ---------------------------------------------------------------------------


def _fourier_from_samples(u: np.ndarray):
    """Real trig coefficients of the interpolant of samples on 2 pi k / M."""
    M = len(u)
    c = np.fft.rfft(u) / M
    a = np.empty(len(c))
    b = np.empty(len(c))
    a[0], b[0] = c[0].real, 0.0
    a[1:] = 2.0 * c[1:].real
    b[1:] = -2.0 * c[1:].imag
    if M % 2 == 0:
        a[-1] *= 0.5  # Nyquist mode is not doubled
    # drop trailing numerically-zero modes so arbitrary-angle evaluation stays cheap
    mag = np.maximum(np.abs(a), np.abs(b))
    keep = np.nonzero(mag > 1e-15 * max(1.0, mag.max()))[0]
    K = int(keep[-1]) + 1 if len(keep) else 1
    return a[:K].copy(), b[:K].copy()


def _fourier_eval(a: np.ndarray, b: np.ndarray, theta, order: int = 0):
    return _fourier_eval_deriv(a, b, theta, order=0)


def _fourier_eval_deriv(a: np.ndarray, b: np.ndarray, theta, order: int):
    theta = np.asarray(theta, dtype=float)
    scalar = theta.ndim == 0
    th = np.atleast_1d(theta)
    k = np.arange(len(a), dtype=float)
    if order == 0:
        ca, sb = a, b
    elif order == 1:
        ca, sb = k * b, -k * a  # d/dt (a cos + b sin) = -a k sin + b k cos
    elif order == 2:
        ca, sb = -(k**2) * a, -(k**2) * b
    else:
        raise ValueError("order must be 0, 1 or 2")
    out = np.zeros(len(th))
    chunk = 2048
    for lo in range(0, len(th), chunk):
        t = th[lo : lo + chunk, None]
        out[lo : lo + chunk] = np.cos(t * k) @ ca + np.sin(t * k) @ sb
    return out[0] if scalar else out


def radial_angle_solve(shape: RadialShape, center: np.ndarray, phis: np.ndarray,
                       scale: float = 1.0) -> np.ndarray:
    """Radii of the scaled-and-translated body, measured from the new origin.

    The body scale*E + center is re-read as a radial graph about 0: for each
    target angle phi solve angle(scale*R(t)e^{it} + center) = phi by Newton
    and return the distance.  Requires the translated body to stay
    star-shaped about the new origin.
    """
    cx, cy = float(center[0]), float(center[1])
    t = phis.copy()
    for _ in range(60):
        R = shape.radius(t)
        Rp = shape.radius_prime(t)
        ct, st = np.cos(t), np.sin(t)
        px = scale * R * ct + cx
        py = scale * R * st + cy
        dpx = scale * (Rp * ct - R * st)
        dpy = scale * (Rp * st + R * ct)
        rho2 = px * px + py * py
        if np.any(rho2 <= 1e-24):
            raise DegenerateShapeError("translated body is not star-shaped about the origin")
        f = np.arctan2(py, px) - phis
        f = (f + math.pi) % TWO_PI - math.pi
        fp = (dpy * px - dpx * py) / rho2
        step = f / fp
        t = t - np.clip(step, -0.5, 0.5)
        if np.max(np.abs(f)) < 1e-14:
            break
    else:
        raise DegenerateShapeError("radial reparametrization did not converge")
    R = shape.radius(t)
    px = scale * R * np.cos(t) + cx
    py = scale * R * np.sin(t) + cy
    return np.hypot(px, py)


# ---------------------------------------------------------------------------
# area / barycenter
# ---------------------------------------------------------------------------


def area(s: Shape) -> float:
    """Lebesgue measure of the shape; segments contribute nothing."""
    if isinstance(s, Polygon):
        return _signed_area(s.vertices)
    if isinstance(s, RadialShape):
        R = 1.0 + s.u_samples
        return 0.5 * float(np.sum(R * R)) * TWO_PI / s.grid_size
    if isinstance(s, Stadium):
        return 4.0 * s.r * s.l + math.pi * s.r * s.r
    if isinstance(s, DiskSegmentComposite):
        return float(sum(math.pi * r * r for _, r in s.disks))
    raise TypeError(f"not a shape: {type(s)!r}")


def barycenter(s: Shape) -> Point2:
    """Area centroid (1/|s|) * integral of x over s."""
    A = area(s)
    if A <= 0.0:
        raise DegenerateShapeError("barycenter needs positive area")
    if isinstance(s, Polygon):
        v = s.vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        cx = float(np.sum((v[:, 0] + w[:, 0]) * cross)) / (6.0 * A)
        cy = float(np.sum((v[:, 1] + w[:, 1]) * cross)) / (6.0 * A)
        return Point2(cx, cy)
    if isinstance(s, RadialShape):
        th = s.thetas()
        R = 1.0 + s.u_samples
        h = TWO_PI / s.grid_size
        cx = float(np.sum(np.cos(th) * R**3)) * h / (3.0 * A)
        cy = float(np.sum(np.sin(th) * R**3)) * h / (3.0 * A)
        return Point2(cx, cy)
    if isinstance(s, Stadium):
        return Point2(0.0, 0.0)
    if isinstance(s, DiskSegmentComposite):
        wx = sum(math.pi * r * r * c.x for c, r in s.disks)
        wy = sum(math.pi * r * r * c.y for c, r in s.disks)
        return Point2(wx / A, wy / A)
    raise TypeError(f"not a shape: {type(s)!r}")


# ---------------------------------------------------------------------------
# perimeter
# ---------------------------------------------------------------------------


def perimeter_minkowski(s: Shape) -> float:
    """Minkowski perimeter: boundary length with segments counted twice."""
    if isinstance(s, Polygon):
        d = np.roll(s.vertices, -1, axis=0) - s.vertices
        return float(np.sum(np.hypot(d[:, 0], d[:, 1])))
    if isinstance(s, RadialShape):
        R = 1.0 + s.u_samples
        Rp = s.u_prime_samples()
        return float(np.sum(np.sqrt(R * R + Rp * Rp))) * TWO_PI / s.grid_size
    if isinstance(s, Stadium):
        return 4.0 * s.l + TWO_PI * s.r
    if isinstance(s, DiskSegmentComposite):
        p = sum(TWO_PI * r for _, r in s.disks)
        p += 2.0 * sum(math.hypot(a.x - b.x, a.y - b.y) for a, b in s.segments)
        return float(p)
    raise TypeError(f"not a shape: {type(s)!r}")


def _distance_to_set(pts: np.ndarray, s: Shape) -> np.ndarray:
    """Euclidean distance from each point to the (closed) shape; 0 inside."""
    if isinstance(s, Polygon):
        d = _distance_to_polyline(pts, np.vstack([s.vertices, s.vertices[:1]]))
        inside = _points_in_polygon(pts, s.vertices)
        return np.where(inside, 0.0, d)
    if isinstance(s, RadialShape):
        poly = _radial_polygon(s, 1024)
        d = _distance_to_polyline(pts, np.vstack([poly, poly[:1]]))
        rho = np.hypot(pts[:, 0], pts[:, 1])
        inside = rho <= s.radius(np.arctan2(pts[:, 1], pts[:, 0]))
        return np.where(inside, 0.0, d)
    if isinstance(s, Stadium):
        dx = np.maximum(np.abs(pts[:, 0]) - s.l, 0.0)
        dy = np.maximum(np.abs(pts[:, 1]) - s.r, 0.0)
        d_rect = np.hypot(dx, dy)
        d_capl = np.maximum(np.hypot(pts[:, 0] + s.l, pts[:, 1]) - s.r, 0.0)
        d_capr = np.maximum(np.hypot(pts[:, 0] - s.l, pts[:, 1]) - s.r, 0.0)
        return np.minimum(d_rect, np.minimum(d_capl, d_capr))
    if isinstance(s, DiskSegmentComposite):
        d = np.full(len(pts), np.inf)
        for c, r in s.disks:
            d = np.minimum(d, np.maximum(np.hypot(pts[:, 0] - c.x, pts[:, 1] - c.y) - r, 0.0))
        for a, b in s.segments:
            d = np.minimum(d, _distance_to_segment(pts, a.as_array(), b.as_array()))
        return d
    raise TypeError(f"not a shape: {type(s)!r}")


def _distance_to_segment(pts, a, b):
    ab = b - a
    t = np.clip(((pts - a) @ ab) / (ab @ ab), 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.hypot(pts[:, 0] - proj[:, 0], pts[:, 1] - proj[:, 1])


def _distance_to_polyline(pts, poly):
    d = np.full(len(pts), np.inf)
    for i in range(len(poly) - 1):
        d = np.minimum(d, _distance_to_segment(pts, poly[i], poly[i + 1]))
    return d


def _points_in_polygon(pts, verts):
    """Even-odd rule, vectorized over points."""
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        cond = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xin = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= cond & (x < np.where(cond, xin, np.inf))
    return inside


def _radial_polygon(s: RadialShape, n: int) -> np.ndarray:
    th = TWO_PI * np.arange(n) / n
    R = s.radius(th)
    return np.column_stack([R * np.cos(th), R * np.sin(th)])


def perimeter_epsilon_estimate(s: Shape, eps_list) -> float:
    """Perimeter from enlargement areas: extrapolate (|s^eps| - |s|)/eps to 0.

    Enlargement areas are counted on a raster of cell size eps/20 over the
    padded bounding box, so segment hairs are seen from both sides and count
    twice, matching the Minkowski perimeter.
    """
    eps_arr = np.asarray(list(eps_list), dtype=float)
    if len(eps_arr) < 2 or np.any(eps_arr <= 0.0) or np.any(np.diff(eps_arr) >= 0.0):
        raise ShapeValidationError("eps_list must be strictly decreasing and positive")
    A0 = area(s)
    lo, hi = bounding_box(s)
    slopes = []
    for eps in eps_arr:
        cell = eps / 20.0
        x0, y0 = lo[0] - eps - 2 * cell, lo[1] - eps - 2 * cell
        x1, y1 = hi[0] + eps + 2 * cell, hi[1] + eps + 2 * cell
        nx = int(math.ceil((x1 - x0) / cell))
        ny = int(math.ceil((y1 - y0) / cell))
        if nx * ny > 80_000_000:
            raise RasterResolutionError(
                f"raster of {nx}x{ny} cells exceeds the resolution budget for eps={eps}"
            )
        xs = x0 + (np.arange(nx) + 0.5) * cell
        count = 0
        for lo_row in range(0, ny, max(1, 2_000_000 // max(nx, 1))):
            hi_row = min(ny, lo_row + max(1, 2_000_000 // max(nx, 1)))
            ys = y0 + (np.arange(lo_row, hi_row) + 0.5) * cell
            gx, gy = np.meshgrid(xs, ys)
            pts = np.column_stack([gx.ravel(), gy.ravel()])
            count += int(np.sum(_distance_to_set(pts, s) <= eps))
        slopes.append((count * cell * cell - A0) / eps)
    coeffs = np.polyfit(eps_arr, np.array(slopes), 1)
    return float(coeffs[1])


# ---------------------------------------------------------------------------
# diameter / bounding box / boundary sampling
# ---------------------------------------------------------------------------


def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns hull vertices counterclockwise."""
    pts = np.unique(points.round(decimals=12), axis=0)
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    if len(pts) <= 2:
        return pts

    def half(pp):
        out = []
        for p in pp:
            while len(out) >= 2 and np.cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _hull_diameter(points: np.ndarray) -> float:
    """Rotating calipers on the convex hull."""
    hull = _convex_hull(points)
    n = len(hull)
    if n == 1:
        return 0.0
    if n == 2:
        return float(np.hypot(*(hull[1] - hull[0])))
    best = 0.0
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        edge = hull[ni] - hull[i]
        for _ in range(n):
            nj = (j + 1) % n
            if np.cross(edge, hull[nj] - hull[j]) > 0:
                j = nj
            else:
                break
        for k in (j, (j + 1) % n):
            best = max(best, float(np.hypot(*(hull[k] - hull[i]))),
                       float(np.hypot(*(hull[k] - hull[ni]))))
    return best


def diameter(s: Shape) -> float:
    """Largest pairwise distance; exact for polygons, stadiums, composites."""
    if isinstance(s, Polygon):
        return _hull_diameter(s.vertices)
    if isinstance(s, RadialShape):
        return _hull_diameter(_radial_polygon(s, max(s.grid_size, 1024)))
    if isinstance(s, Stadium):
        return 2.0 * (s.l + s.r)
    if isinstance(s, DiskSegmentComposite):
        pts = [c.as_array() for c, _ in s.disks]
        pts += [e.as_array() for seg in s.segments for e in seg]
        best = max(2.0 * r for _, r in s.disks)
        items = [(c.as_array(), r) for c, r in s.disks]
        items += [(e.as_array(), 0.0) for seg in s.segments for e in seg]
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                (ci, ri), (cj, rj) = items[i], items[j]
                best = max(best, float(np.hypot(*(ci - cj))) + ri + rj)
        return best
    raise TypeError(f"not a shape: {type(s)!r}")


def bounding_box(s: Shape):
    if isinstance(s, Polygon):
        v = s.vertices
    elif isinstance(s, RadialShape):
        v = _radial_polygon(s, max(s.grid_size, 1024))
    elif isinstance(s, Stadium):
        v = np.array([[-s.l - s.r, -s.r], [s.l + s.r, s.r]])
    elif isinstance(s, DiskSegmentComposite):
        rows = [[c.x - r, c.y - r] for c, r in s.disks] + [[c.x + r, c.y + r] for c, r in s.disks]
        rows += [[e.x, e.y] for seg in s.segments for e in seg]
        v = np.array(rows)
    else:
        raise TypeError(f"not a shape: {type(s)!r}")
    return v.min(axis=0), v.max(axis=0)


def boundary_polyline(s: Shape, step: float):
    """Boundary resampled at roughly the given arc-length step.

    Returns a list of closed polylines (one per boundary component), plus the
    bare segments of composites as open polylines.
    """
    outs = []
    if isinstance(s, Polygon):
        v = np.vstack([s.vertices, s.vertices[:1]])
        outs.append(_resample_polyline(v, step))
    elif isinstance(s, RadialShape):
        n = max(64, int(math.ceil(perimeter_minkowski(s) / step)))
        poly = _radial_polygon(s, n)
        outs.append(np.vstack([poly, poly[:1]]))
    elif isinstance(s, Stadium):
        n_arc = max(8, int(math.ceil(math.pi * s.r / step)))
        t = np.linspace(-math.pi / 2, math.pi / 2, n_arc + 1)
        right = np.column_stack([s.l + s.r * np.cos(t), s.r * np.sin(t)])
        left = np.column_stack([-s.l - s.r * np.cos(t), -s.r * np.sin(t)])
        ring = np.vstack([right, left, right[:1]])
        outs.append(_resample_polyline(ring, step))
    elif isinstance(s, DiskSegmentComposite):
        for c, r in s.disks:
            n = max(16, int(math.ceil(TWO_PI * r / step)))
            t = np.linspace(0.0, TWO_PI, n + 1)
            outs.append(np.column_stack([c.x + r * np.cos(t), c.y + r * np.sin(t)]))
        for a, b in s.segments:
            n = max(1, int(math.ceil(math.hypot(a.x - b.x, a.y - b.y) / step)))
            t = np.linspace(0.0, 1.0, n + 1)[:, None]
            outs.append(a.as_array() * (1 - t) + b.as_array() * t)
    else:
        raise TypeError(f"not a shape: {type(s)!r}")
    return outs


def _resample_polyline(poly: np.ndarray, step: float) -> np.ndarray:
    seg = np.diff(poly, axis=0)
    lens = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = cum[-1]
    n = max(8, int(math.ceil(total / step)))
    at = np.linspace(0.0, total, n + 1)
    x = np.interp(at, cum, poly[:, 0])
    y = np.interp(at, cum, poly[:, 1])
    return np.column_stack([x, y])


def hausdorff_distance(a: Shape, b: Shape) -> float:
    """Hausdorff distance between the two closed sets.

    One-sided sups run over boundary-plus-interior sample clouds (boundary
    resampled at step diam/2000, interior on a coarse grid); the inner inf is
    the exact distance to the other shape.  Deterministic for fixed shapes.
    """
    def cloud(s: Shape) -> np.ndarray:
        d = max(diameter(s), 1e-9)
        pieces = boundary_polyline(s, d / 2000.0)
        pts = [np.vstack(pieces).reshape(-1, 2)]
        lo, hi = bounding_box(s)
        step = d / 60.0
        xs = np.arange(lo[0] + step / 2, hi[0], step)
        ys = np.arange(lo[1] + step / 2, hi[1], step)
        if len(xs) and len(ys):
            gx, gy = np.meshgrid(xs, ys)
            grid = np.column_stack([gx.ravel(), gy.ravel()])
            inside = _distance_to_set(grid, s) <= 0.0
            if inside.any():
                pts.append(grid[inside])
        return np.vstack(pts)

    d_ab = float(np.max(_distance_to_set(cloud(a), b)))
    d_ba = float(np.max(_distance_to_set(cloud(b), a)))
    return max(d_ab, d_ba)


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------


def normalize(s: Shape) -> Shape:
    """Scale to area pi and translate the barycenter to the origin.

    The deficit and both asymmetries are invariant under this map.
    """
    A = area(s)
    if A <= 0.0:
        raise DegenerateShapeError("cannot normalize a degenerate shape")
    scale = math.sqrt(math.pi / A)
    if isinstance(s, Polygon):
        c = barycenter(s).as_array()
        return Polygon((s.vertices - c) * scale)
    if isinstance(s, Stadium):
        return s  # already area pi, centered
    if isinstance(s, DiskSegmentComposite):
        c = barycenter(s).as_array()
        disks = [(Point2(*((ct.as_array() - c) * scale)), r * scale) for ct, r in s.disks]
        segs = [
            (Point2(*((p.as_array() - c) * scale)), Point2(*((q.as_array() - c) * scale)))
            for p, q in s.segments
        ]
        return DiskSegmentComposite(disks, segs)
    if isinstance(s, RadialShape):
        out = s
        sc = scale
        for _ in range(3):
            c = barycenter(out).as_array() * sc
            phis = out.thetas()
            rho = radial_angle_solve(out, -c, phis, scale=sc)
            out = RadialShape(u_samples=rho - 1.0)
            sc = math.sqrt(math.pi / area(out))
            if abs(sc - 1.0) < 1e-13 and np.hypot(*barycenter(out).as_array()) < 1e-13:
                break
        return out
    raise TypeError(f"not a shape: {type(s)!r}")


# ---------------------------------------------------------------------------
# exact disk-intersection areas
# ---------------------------------------------------------------------------


def polygon_disk_intersection_area(verts: np.ndarray, center, r: float) -> float:
    """Exact area of polygon ∩ disk via per-edge Green contributions.

    Each edge is split at its circle crossings; inside parts contribute the
    triangle term, outside parts the circular-sector term (a chord not meeting
    the open disk subtends less than pi, so the wrapped angle is safe).
    Vectorized over edges; ccw input assumed.
    """
    c = np.asarray(center, dtype=float)
    v = verts - c
    w = np.roll(v, -1, axis=0)
    d = w - v
    dd = np.einsum("ij,ij->i", d, d)
    r2 = r * r
    tb = np.einsum("ij,ij->i", v, d) / dd
    cc = (np.einsum("ij,ij->i", v, v) - r2) / dd
    sq = np.sqrt(np.maximum(tb * tb - cc, 0.0))
    # breakpoints clipped to the edge; when there is no crossing the two
    # interior breakpoints coincide and the empty sub-intervals drop out
    tA = np.clip(-tb - sq, 0.0, 1.0)
    tB = np.clip(np.maximum(-tb + sq, -tb - sq), 0.0, 1.0)
    total = 0.0
    for t0, t1 in (("zero", tA), (tA, tB), (tB, "one")):
        t0 = np.zeros(len(v)) if isinstance(t0, str) else t0
        t1 = np.ones(len(v)) if isinstance(t1, str) else t1
        live = t1 - t0 > 1e-15
        if not live.any():
            continue
        p0 = v + t0[:, None] * d
        p1 = v + t1[:, None] * d
        pm = v + (0.5 * (t0 + t1))[:, None] * d
        inside = np.einsum("ij,ij->i", pm, pm) <= r2
        tri = 0.5 * (p0[:, 0] * p1[:, 1] - p1[:, 0] * p0[:, 1])
        ang = np.arctan2(p1[:, 1], p1[:, 0]) - np.arctan2(p0[:, 1], p0[:, 0])
        ang = (ang + math.pi) % TWO_PI - math.pi
        total += float(np.sum(np.where(inside, tri, 0.5 * r2 * ang) * live))
    return max(total, 0.0)


def disk_disk_intersection_area(c1, r1: float, c2, r2: float) -> float:
    """Exact lens area of two disks."""
    d = math.hypot(c1[0] - c2[0], c1[1] - c2[1])
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        rm = min(r1, r2)
        return math.pi * rm * rm
    a1 = math.acos(max(-1.0, min(1.0, (d * d + r1 * r1 - r2 * r2) / (2 * d * r1))))
    a2 = math.acos(max(-1.0, min(1.0, (d * d + r2 * r2 - r1 * r1) / (2 * d * r2))))
    tri = 0.5 * math.sqrt(
        max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
    )
    return r1 * r1 * a1 + r2 * r2 * a2 - tri


def _arc_green(mx, my, rho, a0, a1):
    """Green line integral 0.5*(x dy - y dx) along a ccw arc of a circle."""
    return 0.5 * (
        rho * rho * (a1 - a0)
        + rho * (mx * (math.sin(a1) - math.sin(a0)) + my * (math.cos(a0) - math.cos(a1)))
    )


def region_disk_intersection_area(primitives, inside_fn, center, r: float) -> float:
    """Area of (region ∩ disk) for a region bounded by segments and arcs.

    primitives: ccw boundary pieces, each ("seg", p, q) or
    ("arc", m, rho, a0, a1) with a0 < a1 (ccw).  inside_fn(points) tests
    region membership.  The disk has the given center and radius.
    """
    cx, cy = float(center[0]), float(center[1])
    r2 = r * r
    total = 0.0
    crossings = []  # angles on the disk boundary where the region boundary crosses

    def disk_contains(p):
        return (p[0] - cx) ** 2 + (p[1] - cy) ** 2 <= r2

    for prim in primitives:
        if prim[0] == "seg":
            _, p, q = prim
            p = np.asarray(p, float)
            q = np.asarray(q, float)
            d = q - p
            dd = float(d @ d)
            rel = p - np.array([cx, cy])
            tb = float(rel @ d) / dd
            cc = (float(rel @ rel) - r2) / dd
            disc = tb * tb - cc
            ts = [0.0, 1.0]
            if disc > 0.0:
                rt = math.sqrt(disc)
                for t in (-tb - rt, -tb + rt):
                    if 1e-13 < t < 1.0 - 1e-13:
                        ts.append(t)
                        xpt = p + t * d
                        crossings.append(math.atan2(xpt[1] - cy, xpt[0] - cx))
            ts.sort()
            for t0, t1 in zip(ts[:-1], ts[1:]):
                pm = p + 0.5 * (t0 + t1) * d
                if disk_contains(pm):
                    p0, p1 = p + t0 * d, p + t1 * d
                    total += 0.5 * (p0[0] * p1[1] - p1[0] * p0[1])
        else:
            _, m, rho, a0, a1 = prim
            mx, my = float(m[0]), float(m[1])
            # crossings of the two circles, mapped to parameter angles on this arc
            dcx, dcy = cx - mx, cy - my
            dist = math.hypot(dcx, dcy)
            params = [a0, a1]
            if abs(rho - r) < dist < rho + r:
                alpha = math.acos(
                    max(-1.0, min(1.0, (dist * dist + rho * rho - r2) / (2 * dist * rho)))
                )
                base = math.atan2(dcy, dcx)
                for ang in (base - alpha, base + alpha):
                    t = a0 + ((ang - a0) % TWO_PI)
                    if a0 + 1e-12 < t < a1 - 1e-12:
                        params.append(t)
                        crossings.append(
                            math.atan2(my + rho * math.sin(t) - cy, mx + rho * math.cos(t) - cx)
                        )
            params.sort()
            for t0, t1 in zip(params[:-1], params[1:]):
                tm = 0.5 * (t0 + t1)
                pm = (mx + rho * math.cos(tm), my + rho * math.sin(tm))
                if disk_contains(pm):
                    total += _arc_green(mx, my, rho, t0, t1)
    # arcs of the disk boundary inside the region
    if crossings:
        crossings.sort()
        arcs = list(zip(crossings, crossings[1:] + [crossings[0] + TWO_PI]))
    else:
        arcs = [(0.0, TWO_PI)]
    for a0, a1 in arcs:
        if a1 - a0 <= 1e-14:
            continue
        tm = 0.5 * (a0 + a1)
        pm = np.array([[cx + r * math.cos(tm), cy + r * math.sin(tm)]])
        if inside_fn(pm)[0]:
            total += _arc_green(cx, cy, r, a0, a1)
    return max(total, 0.0)


def stadium_disk_intersection_area(s: Stadium, center, r: float) -> float:
    """Exact area of stadium ∩ disk (rectangle plus the two cap half-disks)."""
    l, rs = s.l, s.r
    rect = np.array([[-l, -rs], [l, -rs], [l, rs], [-l, rs]])
    total = polygon_disk_intersection_area(rect, center, r)

    def cap_prims(sign):
        # ccw boundary of the half disk {(x - sign*l)^2 + y^2 <= rs^2, sign*x >= l}
        if sign > 0:
            return [
                ("arc", (l, 0.0), rs, -math.pi / 2, math.pi / 2),
                ("seg", (l, rs), (l, -rs)),
            ]
        return [
            ("arc", (-l, 0.0), rs, math.pi / 2, 3 * math.pi / 2),
            ("seg", (-l, -rs), (-l, rs)),
        ]

    for sign in (+1, -1):
        def inside(pts, sign=sign):
            return ((pts[:, 0] - sign * l) ** 2 + pts[:, 1] ** 2 <= rs * rs + 1e-15) & (
                sign * pts[:, 0] >= l - 1e-12
            )

        total += region_disk_intersection_area(cap_prims(sign), inside, center, r)
    return total


def shape_disk_intersection_area(s: Shape, center, r: float) -> float:
    """Exact (polygon, stadium, composite) or spectral-grade (radial) area of s ∩ disk."""
    if isinstance(s, Polygon):
        return polygon_disk_intersection_area(s.vertices, center, r)
    if isinstance(s, Stadium):
        return stadium_disk_intersection_area(s, center, r)
    if isinstance(s, DiskSegmentComposite):
        return sum(
            disk_disk_intersection_area((c.x, c.y), rr, center, r) for c, rr in s.disks
        )
    if isinstance(s, RadialShape):
        poly = _radial_polygon(s, max(s.grid_size, 2048))
        return polygon_disk_intersection_area(poly, center, r)
    raise TypeError(f"not a shape: {type(s)!r}")


def contains_points(s: Shape, pts: np.ndarray) -> np.ndarray:
    """Membership test for an (N, 2) array of points (closed shapes)."""
    if isinstance(s, Polygon):
        return _points_in_polygon(pts, s.vertices)
    if isinstance(s, RadialShape):
        rho = np.hypot(pts[:, 0], pts[:, 1])
        return rho <= s.radius(np.arctan2(pts[:, 1], pts[:, 0]))
    if isinstance(s, Stadium):
        in_rect = (np.abs(pts[:, 0]) <= s.l) & (np.abs(pts[:, 1]) <= s.r)
        in_capr = (pts[:, 0] - s.l) ** 2 + pts[:, 1] ** 2 <= s.r**2
        in_capl = (pts[:, 0] + s.l) ** 2 + pts[:, 1] ** 2 <= s.r**2
        return in_rect | in_capl | in_capr
    if isinstance(s, DiskSegmentComposite):
        inside = np.zeros(len(pts), dtype=bool)
        for c, r in s.disks:
            inside |= (pts[:, 0] - c.x) ** 2 + (pts[:, 1] - c.y) ** 2 <= r * r
        return inside
    raise TypeError(f"not a shape: {type(s)!r}")


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def shape_to_dict(s: Shape) -> dict:
    if isinstance(s, Polygon):
        return {"type": "polygon", "vertices": s.vertices.tolist()}
    if isinstance(s, RadialShape):
        return {
            "type": "radial",
            "u_samples": s.u_samples.tolist(),
            "fourier": {"cos": s.cos_coeffs.tolist(), "sin": s.sin_coeffs.tolist()},
        }
    if isinstance(s, Stadium):
        return {"type": "stadium", "theta": s.theta}
    if isinstance(s, DiskSegmentComposite):
        return {
            "type": "composite",
            "disks": [{"center": [c.x, c.y], "radius": r} for c, r in s.disks],
            "segments": [[[p.x, p.y], [q.x, q.y]] for p, q in s.segments],
        }
    raise TypeError(f"not a shape: {type(s)!r}")


def shape_from_dict(d: dict) -> Shape:
    try:
        kind = d["type"]
    except (KeyError, TypeError):
        raise ShapeValidationError("shape dict needs a 'type' tag")
    if kind == "polygon":
        return Polygon(d["vertices"])
    if kind == "radial":
        if "u_samples" in d:
            return RadialShape(u_samples=d["u_samples"])
        f = d["fourier"]
        return RadialShape(cos_coeffs=f.get("cos"), sin_coeffs=f.get("sin"))
    if kind == "stadium":
        return Stadium(theta=float(d["theta"]))
    if kind == "composite":
        disks = [(tuple(dd["center"]), dd["radius"]) for dd in d["disks"]]
        segs = [tuple(map(tuple, seg)) for seg in d.get("segments", [])]
        return DiskSegmentComposite(disks, segs)
    raise ShapeValidationError(f"unknown shape type {kind!r}")


def save_shape(s: Shape, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(shape_to_dict(s), fh, indent=1)
        fh.write("\n")


def load_shape(path) -> Shape:
    with open(path, "r", encoding="utf-8") as fh:
        return shape_from_dict(json.load(fh))
