"""Explicit shape families, constraint projection, and parameter sweeps.

Families: the stadium curve (closed-form deficit and barycentric asymmetry
in the half-angle parameter), the dumbbell (two half-area disks joined by a
length-2 segment), the disconnected two-disk family showing why
connectedness matters, and nearly-spherical radial perturbations projected
onto the area/barycenter constraint set.  Sweeps emit CSV-ready records.

Also hosts the seeded random corpus (convex polygons, projected radial
profiles, connected composites) used by the property suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    DiskSegmentComposite,
    Point2,
    Polygon,
    RadialShape,
    Shape,
    ShapeError,
    TWO_PI,
    area,
    barycenter,
    normalize,
    radial_angle_solve,
)

ARCTAN_QUARTER_PI = math.atan(math.pi / 4.0)


class ProjectionFailedError(ShapeError):
    """Newton projection onto the constraint set did not converge."""


@dataclass(frozen=True)
class ScanRecord:
    """One sweep row: parameter, deficit, asymmetries, and their ratio."""

    parameter: float
    delta: float
    lambda0: float
    fraenkel: float | None = None
    ratio: float = math.nan

    @staticmethod
    def csv_header() -> str:
        return "param,delta,lambda0,lambda,ratio"

    def to_csv_row(self) -> str:
        lam = "" if self.fraenkel is None else format(self.fraenkel, ".12g")
        return ",".join(
            [
                format(self.parameter, ".12g"),
                format(self.delta, ".12g"),
                format(self.lambda0, ".12g"),
                lam,
                format(self.ratio, ".12g"),
            ]
        )


# ---------------------------------------------------------------------------
# stadium
# ---------------------------------------------------------------------------


def stadium_delta_closed(theta: float) -> float:
    """Deficit of the area-pi stadium with cap radius sin(theta)."""
    s = math.sin(theta)
    return 1.0 / (2.0 * s) + s / 2.0 - 1.0


def stadium_lambda0_closed(theta: float) -> float:
    """Barycentric asymmetry of the stadium, from twice the area outside
    the unit disk.  Exact while the unit circle crosses the flat sides,
    i.e. for theta <= arctan(pi/4); beyond that use the geometric pipeline.
    """
    return (2.0 / math.pi) * (math.pi - 2.0 * theta - math.sin(2.0 * theta))


def stadium_profile(theta: float) -> ScanRecord:
    """Closed-form stadium record; matches the geometric pipeline to 1e-4
    on the validity range theta <= arctan(pi/4) (the sweep of interest)."""
    if not (0.0 < theta < math.pi / 2.0):
        raise ShapeError("stadium parameter must lie in (0, pi/2)")
    d = stadium_delta_closed(theta)
    lam0 = stadium_lambda0_closed(theta)
    ratio = d / (lam0 * lam0) if lam0 > 1e-15 else math.nan
    return ScanRecord(parameter=theta, delta=d, lambda0=lam0, fraenkel=None, ratio=ratio)


# ---------------------------------------------------------------------------
# dumbbell
# ---------------------------------------------------------------------------


def dumbbell_shape() -> DiskSegmentComposite:
    """Two disks of area pi/2 with a length-2 segment between their boundaries.

    Lobe centers sit at (+-(1 + 1/sqrt 2), 0), so the barycentric unit disk is
    tangent to both lobes and the symmetric difference is the full 2 pi.
    """
    rho = 1.0 / math.sqrt(2.0)
    c = 1.0 + rho
    return DiskSegmentComposite(
        disks=[((c, 0.0), rho), ((-c, 0.0), rho)],
        segments=[((-1.0, 0.0), (1.0, 0.0))],
    )


def dumbbell_report() -> ScanRecord:
    """Deficit/asymmetry ratio of the dumbbell, evaluated geometrically."""
    from .functionals import barycentric_asymmetry, deficit

    shape = dumbbell_shape()
    d = deficit(shape)
    lam0 = barycentric_asymmetry(shape)
    return ScanRecord(parameter=2.0, delta=d, lambda0=lam0, fraenkel=None,
                      ratio=d / (lam0 * lam0))


# ---------------------------------------------------------------------------
# disconnected counterexample family
# ---------------------------------------------------------------------------


def counterexample_radii(n: int):
    """Radii and second-disk center of the two-disk family member n."""
    if n < 2:
        raise ShapeError("family parameter must satisfy n >= 2")
    R = 1.0 - 1.0 / n
    r = math.sqrt(2.0 * n - 1.0) / n
    x2 = -2.0 * (n - 1.0) ** 2 / (2.0 * n - 1.0)
    return R, r, x2


def counterexample_disjoint_from_unit_disk(n: int) -> bool:
    """Whether both disks avoid the unit disk at the barycenter.

    True exactly for n >= 4: the small disk still overlaps the unit disk for
    n in {2, 3}, so the reported asymmetry value 2 is geometrically exact
    only from n = 4 on.
    """
    R, r, x2 = counterexample_radii(n)
    return (2.0 - R >= 1.0) and (abs(x2) - r >= 1.0)


def fuglede_counterexample(n: int):
    """Disconnected two-disk shape with area pi and barycenter 0.

    Returns (shape, record).  The record carries the family's closed-form
    values: deficit R_n + r_n - 1 (exact) and asymmetry 2 (the family's
    limiting value; geometrically exact for n >= 4, see
    counterexample_disjoint_from_unit_disk).
    """
    R, r, x2 = counterexample_radii(n)
    shape = DiskSegmentComposite(disks=[((2.0, 0.0), R), ((x2, 0.0), r)], segments=[])
    delta = R + r - 1.0
    lam0 = 2.0
    return shape, ScanRecord(parameter=float(n), delta=delta, lambda0=lam0,
                             fraenkel=None, ratio=delta / (lam0 * lam0))


# ---------------------------------------------------------------------------
# nearly-spherical projection
# ---------------------------------------------------------------------------


def constraint_residuals(s: RadialShape) -> np.ndarray:
    """Area and barycenter constraint residuals of a radial profile:
    [ integral (1+u)^2 - 2 pi,  integral cos (1+u)^3,  integral sin (1+u)^3 ].
    """
    th = s.thetas()
    h = TWO_PI / s.grid_size
    R = 1.0 + s.u_samples
    return np.array([
        float(np.sum(R * R)) * h - TWO_PI,
        float(np.sum(np.cos(th) * R**3)) * h,
        float(np.sum(np.sin(th) * R**3)) * h,
    ])


def nearly_spherical(u_raw, project: bool = True, tol: float = 1e-10) -> RadialShape:
    """Project a raw radial profile onto area pi and barycenter 0.

    Newton iteration on (scale, shift_x, shift_y) applied to the underlying
    set, re-read as a radial graph after each move.  Raises
    ProjectionFailedError when the iteration cannot reach the tolerance
    (wild profiles that stop being star-shaped when recentred).
    """
    base = u_raw if isinstance(u_raw, RadialShape) else RadialShape(u_samples=np.asarray(u_raw, float))
    if not project:
        return base
    phis = base.thetas()

    def profile_for(v: np.ndarray) -> RadialShape:
        s, cx, cy = v
        if s <= 0.0:
            raise ProjectionFailedError("projection drove the scale negative")
        rho = radial_angle_solve(base, np.array([cx, cy]), phis, scale=s)
        if np.min(rho) <= 0.0:
            raise ProjectionFailedError("projection lost star-shapedness")
        return RadialShape(u_samples=rho - 1.0)

    v = np.array([math.sqrt(math.pi / area(base)), 0.0, 0.0])
    try:
        for _ in range(40):
            cur = profile_for(v)
            g = constraint_residuals(cur)
            if np.max(np.abs(g)) < tol:
                return cur
            J = np.empty((3, 3))
            for j in range(3):
                dv = np.zeros(3)
                dv[j] = 1e-7
                J[:, j] = (constraint_residuals(profile_for(v + dv)) - g) / 1e-7
            step = np.linalg.solve(J, g)
            v = v - np.clip(step, -0.5, 0.5)
    except (np.linalg.LinAlgError, ShapeError) as exc:
        raise ProjectionFailedError(f"projection failed: {exc}") from exc
    raise ProjectionFailedError("projection did not reach tolerance in 40 iterations")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def scan(family: str, lo: float, hi: float, steps: int):
    """Uniform deterministic parameter sweep; rows are CSV-ready."""
    if steps < 2:
        raise ShapeError("a scan needs at least 2 steps")
    if family == "stadium":
        if not (0.0 < lo < hi <= math.pi / 2.0):
            raise ShapeError("stadium scan range must satisfy 0 < lo < hi <= pi/2")
        thetas = np.linspace(lo, hi, steps)
        thetas[-1] = min(thetas[-1], math.pi / 2.0 - 1e-12)
        return [stadium_profile(float(t)) for t in thetas]
    if family == "counterexample":
        if lo < 2 or hi <= lo:
            raise ShapeError("counterexample scan needs 2 <= lo < hi")
        ns = np.unique(np.round(np.linspace(lo, hi, steps)).astype(int))
        return [fuglede_counterexample(int(n))[1] for n in ns]
    raise ShapeError(f"unknown scan family {family!r}")


# ---------------------------------------------------------------------------
# seeded random corpus
# ---------------------------------------------------------------------------


def random_convex_polygon(rng: np.random.Generator, n_points: int = 18) -> Polygon:
    """Area-normalized convex hull of points uniform in a disk."""
    for _ in range(64):
        phi = rng.uniform(0.0, TWO_PI, n_points)
        rad = np.sqrt(rng.uniform(0.0, 1.0, n_points))
        pts = np.column_stack([rad * np.cos(phi), rad * np.sin(phi)])
        from .geometry import _convex_hull

        hull = _convex_hull(pts)
        if len(hull) >= 3:
            try:
                return normalize(Polygon(hull))
            except ShapeError:
                continue
    raise ShapeError("could not draw a valid convex polygon")


def random_projected_radial(rng: np.random.Generator, amplitude: float,
                            max_harmonic: int = 6, grid: int = 256) -> RadialShape:
    """Projected random low-frequency radial profile with the given size."""
    th = TWO_PI * np.arange(grid) / grid
    ks = np.arange(1, max_harmonic + 1)
    for _ in range(64):
        a = rng.standard_normal(max_harmonic) / ks
        b = rng.standard_normal(max_harmonic) / ks
        raw = np.cos(np.outer(th, ks)) @ a + np.sin(np.outer(th, ks)) @ b
        peak = np.abs(raw).max()
        if peak < 1e-12:
            continue
        try:
            return nearly_spherical(RadialShape(u_samples=raw * (amplitude / peak)))
        except ShapeError:
            continue
    raise ShapeError("could not draw a projectable radial profile")


def radial_is_convex(s: RadialShape, tol: float = 1e-9) -> bool:
    """Convexity via the reciprocal radial function v = 1/R: v'' + v >= 0."""
    fine = s.resampled(max(s.grid_size, 512))
    v = RadialShape(u_samples=1.0 / (1.0 + fine.u_samples) - 1.0)
    th = v.thetas()
    return bool(np.min(v.radius_second(th) + v.radius(th)) >= -tol)


def random_connected_composite(rng: np.random.Generator, max_disks: int = 3) -> DiskSegmentComposite:
    """Chain of disjoint disks joined by boundary-to-boundary segments."""
    k = int(rng.integers(2, max_disks + 1))
    radii = rng.uniform(0.4, 1.2, k)
    gaps = rng.uniform(0.2, 1.5, k - 1)
    xs = np.zeros(k)
    for i in range(1, k):
        xs[i] = xs[i - 1] + radii[i - 1] + gaps[i - 1] + radii[i]
    disks = [((float(xs[i]), 0.0), float(radii[i])) for i in range(k)]
    segs = [
        ((float(xs[i] + radii[i]), 0.0), (float(xs[i + 1] - radii[i + 1]), 0.0))
        for i in range(k - 1)
    ]
    return normalize(DiskSegmentComposite(disks, segs))


def make_corpus(seed: int, n_shapes: int):
    """Deterministic mixed corpus: (kind, shape) pairs.

    Kinds cycle through convex polygons, projected radial profiles (small
    amplitudes, some convex), and connected composites.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n_shapes:
        mode = len(out) % 5
        if mode in (0, 1):
            out.append(("polygon", random_convex_polygon(rng, int(rng.integers(8, 28)))))
        elif mode in (2, 3):
            amp = float(rng.uniform(0.01, 0.22)) if mode == 2 else float(rng.uniform(0.005, 0.095))
            out.append(("radial", random_projected_radial(rng, amp)))
        else:
            out.append(("composite", random_connected_composite(rng)))
    return out
