"""First-order curvature condition for the convex minimizer and the
stadium equations.

On strictly convex boundary parts the optimal convex shape must satisfy a
pointwise curvature identity built from the deficit, the barycentric
asymmetry, the partition of the unit circle into arcs inside/outside the
shape, and two moment multipliers.  For the stadium family the condition
reduces to a scalar equation in the half-angle parameter whose root
coincides with the critical point of the deficit/asymmetry ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import radial_is_convex
from .functionals import barycentric_asymmetry, deficit
from .geometry import (
    RadialShape,
    Shape,
    ShapeError,
    Stadium,
    TWO_PI,
    area,
    barycenter,
    contains_points,
)

PI = math.pi


class RootBracketError(ShapeError):
    """The bracket handed to the root finder carries no sign change."""


# ---------------------------------------------------------------------------
# the two stadium equations
# ---------------------------------------------------------------------------


def eqop1(theta: float) -> float:
    """Criticality of the stadium's deficit/asymmetry ratio in theta."""
    s, c = math.sin(theta), math.cos(theta)
    return 8.0 * s * (1.0 - s) ** 2 - c * (PI - 2.0 * theta - math.sin(2.0 * theta))


def eqop2(theta: float) -> float:
    """Curvature condition specialized to the stadium's caps."""
    s = math.sin(theta)
    denom = PI - 2.0 * theta - math.sin(2.0 * theta)
    return 4.0 * s - 1.5 * s * s - 2.5 + 2.0 * (1.0 - s) ** 2 * (PI - 2.0 * theta) / denom


def bisect_newton(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Bracketed bisection narrowed enough for a safeguarded Newton polish.

    Raises RootBracketError when f(lo) and f(hi) share a sign.  Newton steps
    use a central finite-difference slope and fall back to bisection when
    they leave the bracket.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise RootBracketError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    x = 0.5 * (lo + hi)
    for _ in range(60):
        fx = f(x)
        if flo * fx < 0.0:
            hi = x
        else:
            lo = x
        h = 1e-7
        slope = (f(x + h) - f(x - h)) / (2.0 * h)
        x_new = x - fx / slope if slope != 0.0 else 0.5 * (lo + hi)
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) < tol and abs(fx) < tol:
            return x_new
        x = x_new
    return x


def eqop1_root() -> float:
    """Root of the ratio-criticality equation in (0.1, pi/2 - 0.01)."""
    return bisect_newton(eqop1, 0.1, PI / 2.0 - 0.01, tol=1e-10)


def eqop2_root() -> float:
    """Root of the cap-curvature equation in (0.1, pi/2 - 0.01)."""
    return bisect_newton(eqop2, 0.1, PI / 2.0 - 0.01, tol=1e-10)


# ---------------------------------------------------------------------------
# unit-circle partition
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CirclePartition:
    """Arcs of the unit circle inside/outside a normalized shape, with their
    lengths and first trig moments."""

    arcs_in: tuple
    arcs_out: tuple
    len_in: float
    len_out: float
    cos_in: float
    cos_out: float
    sin_in: float
    sin_out: float


def _on_circle(phis) -> np.ndarray:
    phis = np.atleast_1d(phis)
    return np.column_stack([np.cos(phis), np.sin(phis)])


def circle_partition(s: Shape, probe: int = 8192, tol: float = 1e-12) -> CirclePartition:
    """Partition the unit circle by membership in the (normalized) shape.

    Transitions are located on a fine probe grid and refined by bisection on
    the membership predicate.  Requires area pi and barycenter at the origin.
    """
    if abs(area(s) - PI) > 1e-8 or math.hypot(*barycenter(s).as_array()) > 1e-8:
        raise ShapeError("circle partition needs a normalized shape (area pi, centered)")
    phis = TWO_PI * np.arange(probe) / probe
    inside = contains_points(s, _on_circle(phis))
    if inside.all():
        return CirclePartition(((0.0, TWO_PI),), (), TWO_PI, 0.0, 0.0, 0.0, 0.0, 0.0)
    if not inside.any():
        return CirclePartition((), ((0.0, TWO_PI),), 0.0, TWO_PI, 0.0, 0.0, 0.0, 0.0)

    def refine(a: float, b: float, ina: bool) -> float:
        # membership flips once in (a, b); bisect the predicate
        while b - a > tol:
            mid = 0.5 * (a + b)
            if bool(contains_points(s, _on_circle(mid))[0]) == ina:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    flips = []
    for i in range(probe):
        j = (i + 1) % probe
        if inside[i] != inside[j]:
            a = phis[i]
            b = phis[i] + TWO_PI / probe
            flips.append(refine(a, b, bool(inside[i])))
    flips.sort()
    arcs_in, arcs_out = [], []
    for i, a in enumerate(flips):
        b = flips[(i + 1) % len(flips)]
        if b <= a:
            b += TWO_PI
        mid = 0.5 * (a + b)
        (arcs_in if bool(contains_points(s, _on_circle(mid))[0]) else arcs_out).append((a, b))

    def moments(arcs):
        ln = sum(b - a for a, b in arcs)
        cs = sum(math.sin(b) - math.sin(a) for a, b in arcs)
        sn = sum(math.cos(a) - math.cos(b) for a, b in arcs)
        return ln, cs, sn

    len_in, cos_in, sin_in = moments(arcs_in)
    len_out, cos_out, sin_out = moments(arcs_out)
    return CirclePartition(tuple(arcs_in), tuple(arcs_out), len_in, len_out,
                           cos_in, cos_out, sin_in, sin_out)


# ---------------------------------------------------------------------------
# curvature condition residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OptimalityReport:
    """Sampled curvature against the first-order prediction."""

    mu1: float
    mu2: float
    delta: float
    lambda0: float
    partition: CirclePartition
    params: np.ndarray  # boundary parameter of each kept sample
    curvature: np.ndarray
    predicted: np.ndarray
    residual: np.ndarray
    points: np.ndarray  # (n, 2) sample locations
    n_skipped: int

    @property
    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residual))) if len(self.residual) else math.nan

    def to_csv_rows(self):
        yield "param,curvature,predicted,residual"
        for t, c, p, r in zip(self.params, self.curvature, self.predicted, self.residual):
            yield ",".join(format(v, ".12g") for v in (t, c, p, r))


def _prediction(pts: np.ndarray, dlt: float, lam0: float, part: CirclePartition,
                mu1: float, mu2: float) -> np.ndarray:
    base = 1.0 - 3.0 * dlt + (4.0 * dlt / (TWO_PI * lam0)) * (part.len_out - part.len_in)
    sign = np.where(np.hypot(pts[:, 0], pts[:, 1]) > 1.0, 1.0, -1.0)
    return base + sign * (4.0 * dlt / lam0) + mu1 * pts[:, 0] + mu2 * pts[:, 1]


def optimality_residual(s: Shape, n_samples: int = 2048,
                        exclusion_window: float = 1e-3) -> OptimalityReport:
    """Sample the curvature condition on strictly convex boundary parts.

    Supported inputs are analytically parametrized convex shapes: stadiums
    (caps are exact circular arcs, flats are excluded as non-strictly
    convex) and convex radial profiles (spectral derivatives).  Samples
    within the exclusion window (in boundary parameter) of a crossing of
    the unit circle are skipped and counted, since the prediction's sign
    term is undefined on the circle itself.
    """
    dlt = deficit(s)
    lam0 = barycentric_asymmetry(s)
    if lam0 < 1e-12:
        raise ShapeError("curvature condition degenerates on the disk itself")
    part = circle_partition(s)
    mu1 = (4.0 * dlt / (PI * lam0)) * (part.cos_out - part.cos_in)
    mu2 = (4.0 * dlt / (PI * lam0)) * (part.sin_out - part.sin_in)

    if isinstance(s, Stadium):
        l, r = s.l, s.r
        half = n_samples // 2
        psi = np.linspace(-PI / 2 + 1e-6, PI / 2 - 1e-6, half)
        params, pts, curv = [], [], []
        for sign in (+1.0, -1.0):
            x = sign * (l + r * np.cos(psi))
            y = sign * r * np.sin(psi)
            params.append(psi if sign > 0 else psi + PI)
            pts.append(np.column_stack([x, y]))
            curv.append(np.full(half, 1.0 / r))
        params = np.concatenate(params)
        pts = np.vstack(pts)
        curv = np.concatenate(curv)
        # cap points satisfy |p|^2 = l^2 + r^2 + 2 l r cos psi, so the unit
        # circle is crossed where cos psi = (1 - l^2 - r^2)/(2 l r)
        cross = []
        cosval = (1.0 - l * l - r * r) / (2.0 * l * r)
        if -1.0 < cosval < 1.0:
            pc = math.acos(cosval)
            cross = [pc, -pc, pc + PI, -pc + PI]
        keep = np.ones(len(params), dtype=bool)
        for c in cross:
            keep &= np.abs((params - c + PI) % TWO_PI - PI) > exclusion_window
    elif isinstance(s, RadialShape):
        if not radial_is_convex(s):
            raise ShapeError("curvature condition needs a convex shape")
        th = TWO_PI * np.arange(n_samples) / n_samples
        R = s.radius(th)
        Rp = s.radius_prime(th)
        Rpp = s.radius_second(th)
        curv = (R * R + 2.0 * Rp * Rp - R * Rpp) / np.power(R * R + Rp * Rp, 1.5)
        pts = np.column_stack([R * np.cos(th), R * np.sin(th)])
        params = th
        keep = curv > 1e-9  # non-strictly-convex spots excluded
        # exclude samples near crossings of the unit circle
        f = R - 1.0
        for i in range(n_samples):
            j = (i + 1) % n_samples
            if f[i] == 0.0 or f[i] * f[j] < 0.0:
                root = th[i] + (TWO_PI / n_samples) * f[i] / (f[i] - f[j]) if f[i] != f[j] else th[i]
                keep &= np.abs((th - root + PI) % TWO_PI - PI) > exclusion_window
    else:
        raise ShapeError("curvature residuals are defined for stadiums and convex radial shapes")

    n_skipped = int(np.sum(~keep))
    pts_k = pts[keep]
    pred = _prediction(pts_k, dlt, lam0, part, mu1, mu2)
    curv_k = curv[keep]
    return OptimalityReport(
        mu1=mu1, mu2=mu2, delta=dlt, lambda0=lam0, partition=part,
        params=params[keep], curvature=curv_k, predicted=pred,
        residual=curv_k - pred, points=pts_k, n_skipped=n_skipped,
    )


def stadium_cap_residual(theta: float) -> float:
    """Largest curvature-condition residual on the caps of the stadium."""
    return optimality_residual(Stadium(theta)).max_abs_residual
