"""Runnable invariant suite behind `iso verify all`.

Each check returns (ok, message); the runner prints one PASS/FAIL line per
check plus NOTE lines for two documented upstream numerical discrepancies
(recorded in the README) that are reported but not counted as failures of
this artifact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from . import families as fam
from . import functionals as fn
from . import geometry as geo
from . import optimality as opt
from . import rearrangement as rea
from . import variational as var

PI = math.pi
CheckFn = Callable[[], Tuple[bool, str]]


@dataclass
class Check:
    name: str
    fn: CheckFn


@dataclass
class Result:
    name: str
    status: str
    message: str


def _corpus(seed: int, n: int):
    return fam.make_corpus(seed, n)


# ---------------------------------------------------------------------------
# geometry checks
# ---------------------------------------------------------------------------


def check_normalize_invariance(seed: int, n: int = 24):
    worst_d, worst_l0 = 0.0, 0.0
    for kind, s in _corpus(seed, n):
        ns = geo.normalize(s)
        worst_d = max(worst_d, abs(fn.deficit(ns) - fn.deficit(s)))
        worst_l0 = max(worst_l0, abs(fn.barycentric_asymmetry(ns) - fn.barycentric_asymmetry(s)))
    ok = worst_d < 1e-9 and worst_l0 < 1e-9
    return ok, f"max |d_delta|={worst_d:.2e}, max |d_lambda0|={worst_l0:.2e}"


def check_fraenkel_invariance(seed: int, n: int = 10):
    # the functional is affine-invariant; compare optimizer outputs on
    # translated+scaled copies of random polygons
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(n):
        p = fam.random_convex_polygon(rng, 14)
        lam1, _ = fn.fraenkel_asymmetry(p)
        shift = rng.uniform(-3.0, 3.0, 2)
        scale = float(rng.uniform(0.5, 2.0))
        moved = geo.Polygon((p.vertices + shift) * scale)
        lam2, _ = fn.fraenkel_asymmetry(moved)
        worst = max(worst, abs(lam1 - lam2))
    return worst < 1e-9, f"max |d_lambda|={worst:.2e}"


def check_diameter_bound(seed: int, n: int = 60):
    worst = -math.inf
    for kind, s in _corpus(seed + 2, n):
        if isinstance(s, geo.DiskSegmentComposite) and not s.is_connected():
            continue
        worst = max(worst, geo.diameter(s) - 0.5 * geo.perimeter_minkowski(s))
    return worst <= 1e-9, f"max (diam - P/2)={worst:.2e}"


def check_epsilon_perimeter(seed: int):
    eps = [0.2, 0.1, 0.05]
    cases = [
        ("disk", geo.DiskSegmentComposite([((0.0, 0.0), 1.0)]), 0.02),
        ("square", geo.Polygon([[0, 0], [1, 0], [1, 1], [0, 1]]), 0.02),
        ("dumbbell", fam.dumbbell_shape(), 0.03),
    ]
    rng = np.random.default_rng(seed + 3)
    cases.append(("polygon", fam.random_convex_polygon(rng, 12), 0.03))
    worst_name, worst_rel = "", 0.0
    for name, s, tol in cases:
        est = geo.perimeter_epsilon_estimate(s, eps)
        exact = geo.perimeter_minkowski(s)
        rel = abs(est - exact) / exact
        if rel > worst_rel:
            worst_name, worst_rel = name, rel
        if rel > tol:
            return False, f"{name}: rel err {rel:.3%} over {tol:.0%}"
    return True, f"worst {worst_name}: rel err {worst_rel:.3%}"


def check_gradient_estimate(seed: int, n: int = 80):
    worst = -math.inf
    count = 0
    for kind, s in _corpus(seed + 4, n):
        if kind != "radial" or not fam.radial_is_convex(s):
            continue
        sup_u = float(np.abs(s.u_samples).max())
        if sup_u >= 1.0 or sup_u < 1e-12:
            continue
        sup_up = float(np.abs(s.u_prime_samples()).max())
        bound = 2.0 * (1.0 + sup_u) / (1.0 - sup_u) * math.sqrt(sup_u)
        worst = max(worst, sup_up - bound)
        count += 1
    return worst <= 0.0, f"{count} convex profiles, max (|u'| - bound)={worst:.2e}"


def check_monte_carlo_oracle(seed: int, samples: int = 10_000_000):
    rng = np.random.default_rng(seed + 5)
    shapes = [
        ("polygon", fam.random_convex_polygon(rng, 16)),
        ("radial", fam.random_projected_radial(rng, 0.15)),
        ("stadium", geo.Stadium(0.7)),
        ("composite", fam.random_connected_composite(rng)),
    ]
    msgs = []
    for name, s in shapes:
        lo, hi = geo.bounding_box(s)
        pts = rng.uniform(lo, hi, size=(samples, 2))
        inside = geo.contains_points(s, pts)
        box = float(np.prod(hi - lo))
        p_hat = float(np.mean(inside))
        a_mc = box * p_hat
        sigma = box * math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / samples)
        if abs(a_mc - geo.area(s)) > 3.0 * sigma:
            return False, f"{name}: area off by {abs(a_mc - geo.area(s)):.3e} > 3 sigma"
        c_mc = pts[inside].mean(axis=0)
        c_sigma = (hi - lo) / math.sqrt(max(int(inside.sum()), 1)) / math.sqrt(12.0)
        bc = geo.barycenter(s).as_array()
        if np.any(np.abs(c_mc - bc) > 3.0 * np.maximum(c_sigma, 1e-9)):
            return False, f"{name}: barycenter off by {np.abs(c_mc - bc).max():.3e}"
        msgs.append(f"{name} ok")
    return True, "; ".join(msgs)


# ---------------------------------------------------------------------------
# functionals checks
# ---------------------------------------------------------------------------


def check_inequality_chain(seed: int, n: int = 200, grid_step_hint: float | None = 0.25):
    viol = []
    for kind, s in _corpus(seed + 6, n):
        d = fn.deficit(s)
        lam0 = fn.barycentric_asymmetry(s)
        lam, _ = fn.fraenkel_asymmetry(s, grid_step=grid_step_hint)
        lam = min(lam, lam0)
        if d < -1e-9:
            viol.append(f"{kind}: delta={d}")
        if not (-1e-12 <= lam <= lam0 + 1e-9 and lam0 <= 2.0 + 1e-9):
            viol.append(f"{kind}: lam={lam}, lam0={lam0}")
        if lam > 1e-3 and d / (lam * lam) < 0.02:
            viol.append(f"{kind}: HHW ratio {d/(lam*lam)}")
        if kind == "radial" and np.abs(s.u_samples).max() <= 0.1 and fam.radial_is_convex(s):
            if d < lam0 * lam0 / 16.0 - 1e-12:
                viol.append(f"radial: quadratic bound {d} < {lam0*lam0/16}")
        if not (isinstance(s, geo.DiskSegmentComposite) and not s.is_connected()):
            if geo.diameter(s) > 0.5 * geo.perimeter_minkowski(s) + 1e-9:
                viol.append(f"{kind}: diameter bound")
    return not viol, (viol[0] if viol else f"{n} shapes, zero violations")


def check_two_ball(seed: int = 0):
    grid = np.arange(0.0, 2.0 + 1e-12, 0.05)
    worst = 0.0
    for a in grid:
        lens = fn.symmetric_difference_with_disk(
            geo.DiskSegmentComposite([((0.0, 0.0), 1.0)]), geo.Point2(float(a), 0.0), 1.0
        )
        worst = max(worst, abs(fn.two_ball_l1_distance(float(a)) - lens))
    small = fn.two_ball_l1_distance(1e-3) / 1e-3
    ok = worst < 1e-8 and abs(small - 4.0) < 0.1
    return ok, f"max |formula - lens|={worst:.2e}, f(1e-3)/1e-3={small:.6f}"


def check_stadium_lambda_equality(seed: int = 0):
    worst = 0.0
    for theta in (0.4, 0.5750260317970199, 0.9):
        st = geo.Stadium(theta)
        lam, _ = fn.fraenkel_asymmetry(st)
        worst = max(worst, abs(lam - fn.barycentric_asymmetry(st)))
    return worst < 1e-5, f"max |lambda - lambda0| on stadiums = {worst:.2e}"


# ---------------------------------------------------------------------------
# families checks
# ---------------------------------------------------------------------------


def check_stadium_closed_vs_geometric(seed: int = 0, n: int = 40):
    thetas = np.linspace(0.3, fam.ARCTAN_QUARTER_PI, n)
    worst = 0.0
    for th in thetas:
        st = geo.Stadium(float(th))
        worst = max(
            worst,
            abs(fam.stadium_delta_closed(float(th)) - fn.deficit(st)),
            abs(fam.stadium_lambda0_closed(float(th)) - fn.barycentric_asymmetry(st)),
        )
    return worst < 1e-4, f"max closed-form vs geometric gap = {worst:.2e}"


def check_counterexample_sanity(seed: int = 0):
    for n in (2, 3, 4, 7, 10, 100, 1000, 10000):
        s, rec = fam.fuglede_counterexample(n)
        if abs(geo.area(s) - PI) > 1e-12:
            return False, f"n={n}: area off"
        if math.hypot(*geo.barycenter(s).as_array()) > 1e-12:
            return False, f"n={n}: barycenter off"
        if n >= 4:
            if not fam.counterexample_disjoint_from_unit_disk(n):
                return False, f"n={n}: expected disjoint"
            lam0 = fn.barycentric_asymmetry(s)
            if abs(lam0 - 2.0) > 1e-12:
                return False, f"n={n}: geometric lambda0 = {lam0}"
    return True, "area/barycenter exact; geometric asymmetry 2 for n >= 4"


def check_projection(seed: int, n: int = 30):
    rng = np.random.default_rng(seed + 7)
    worst = 0.0
    for _ in range(n):
        s = fam.random_projected_radial(rng, float(rng.uniform(0.01, 0.2)))
        worst = max(worst, float(np.abs(fam.constraint_residuals(s)).max()))
    return worst < 1e-10, f"max constraint residual = {worst:.2e}"


# ---------------------------------------------------------------------------
# rearrangement checks
# ---------------------------------------------------------------------------


def check_rearrangement_properties(seed: int, n: int = 60):
    rng = np.random.default_rng(seed + 8)
    for _ in range(n):
        N = int(rng.choice([16, 32, 64]))
        T = float(rng.uniform(0.5, 3.0))
        f = rea.SampledFunction(T, rng.standard_normal(N))
        g = rea.SampledFunction(T, rng.standard_normal(N))
        fs, gs = rea.decreasing_rearrangement(f), rea.decreasing_rearrangement(g)
        if abs(f.integral() - fs.integral()) > 1e-12 * max(1.0, abs(f.integral())):
            return False, "equimeasurability broken"
        c = float(rng.standard_normal())
        shifted = rea.decreasing_rearrangement(rea.SampledFunction(T, f.values + c))
        if not np.array_equal(shifted.values, fs.values + c):
            return False, "constant shift broken"
        hi = rea.SampledFunction(T, f.values + np.abs(rng.standard_normal(N)))
        his = rea.decreasing_rearrangement(hi)
        if np.any(his.values < fs.values - 1e-15):
            return False, "monotonicity broken"
    return True, f"{n} random grids: equimeasurable, shift-exact, monotone"


def check_riesz_suite(seed: int, n: int = 100):
    rng = np.random.default_rng(seed + 9)
    worst = -math.inf
    for _ in range(n):
        N = int(rng.choice([32, 64]))
        T = float(rng.uniform(0.5, 3.0))
        def pw():
            k = int(rng.integers(2, 7))
            edges = np.sort(rng.integers(0, N, k))
            vals = rng.uniform(-2, 2, k + 1)
            out = np.empty(N)
            prev = 0
            for e, v in zip(edges, vals):
                out[prev:e] = v
                prev = e
            out[prev:] = vals[-1]
            return rea.SampledFunction(T, out)
        f, g, h = pw(), pw(), pw()
        lhs, rhs = rea.riesz_pair(f, g, h)
        worst = max(worst, lhs - rhs - rea.riesz_tolerance(f))
    return worst <= 0.0, f"max (lhs - rhs - tol) = {worst:.2e}"


# ---------------------------------------------------------------------------
# variational checks
# ---------------------------------------------------------------------------


def check_solver_agreement(seed: int):
    a = var.opepl_solve_fourier(seed=seed, restarts=8)
    b = var.opepl_solve_fixedpoint()
    lo, hi = 0.5388 - 1e-3, 3.0 * PI / 16.0 + 1e-6
    in_bracket = lo <= min(a.m, b.m) and max(a.m, b.m) <= hi
    gap = max(var.norm_identity_gap(a), var.norm_identity_gap(b))
    res = max(max(a.residuals), max(b.residuals))
    ok = abs(a.m - b.m) < 1e-3 and in_bracket and gap < 1e-6 and res < 1e-6
    return ok, (
        f"m_fourier={a.m:.8f}, m_fixed={b.m:.8f}, diff={abs(a.m-b.m):.2e}, "
        f"identity gap={gap:.2e}, residuals={res:.2e}"
    )


def check_rayleigh_gradient(seed: int, n: int = 20):
    rng = np.random.default_rng(seed + 10)
    worst = 0.0
    for _ in range(n):
        nk = int(rng.integers(3, 9))
        p = var.FourierProfile(rng.standard_normal(nk), rng.standard_normal(nk))
        ga, gb = var.opepl_rayleigh_gradient(p)
        i = int(rng.integers(0, nk))
        h = 1e-6
        for coeffs, grad in ((p.cos_coeffs, ga), (p.sin_coeffs, gb)):
            cp, cm = coeffs.copy(), coeffs.copy()
            cp[i] += h
            cm[i] -= h
            if coeffs is p.cos_coeffs:
                fd = (var.opepl_rayleigh(var.FourierProfile(cp, p.sin_coeffs))
                      - var.opepl_rayleigh(var.FourierProfile(cm, p.sin_coeffs))) / (2 * h)
            else:
                fd = (var.opepl_rayleigh(var.FourierProfile(p.cos_coeffs, cp))
                      - var.opepl_rayleigh(var.FourierProfile(p.cos_coeffs, cm))) / (2 * h)
            worst = max(worst, abs(fd - grad[i]) / max(abs(fd), 1e-12))
    return worst < 1e-5, f"max relative gradient error = {worst:.2e}"


def check_quotient_vs_geometry(seed: int):
    worst = 0.0
    for eps in (0.05, 0.02):
        th = geo.TWO_PI * np.arange(4096) / 4096
        s = fam.nearly_spherical(geo.RadialShape(u_samples=eps * np.cos(2 * th)))
        J = var.J_full(s)
        ratio = fn.deficit(s) / fn.barycentric_asymmetry(s) ** 2
        worst = max(worst, abs(J - ratio))
    return worst < 1e-6, f"max |J - delta/lambda0^2| = {worst:.2e}"


def check_barrier(seed: int = 0):
    xs = np.linspace(0.0, PI, 10000)
    viol = float(np.max(var.kernel_H(xs) - var.barrier_M(xs)))
    inner = var.barrier_inner_integral()
    bound = var.m_lower_bound()
    ok = viol <= 0.0 and PI / 4.0 * bound >= 0.41
    return ok, (
        f"max(H - M)={viol:.2e} on 10^4 grid; inner integral={inner:.6f}; "
        f"(pi/4) m_lower={PI/4*bound:.6f}"
    )


def check_ode_solver(seed: int = 0):
    n = 2048
    x = -PI + 2 * PI * np.arange(n) / n
    R = rea.SampledFunction(PI, np.cos(2 * x) - 0.5 * np.sin(3 * x))
    h = var.solve_ode_periodic(R)
    target = -np.cos(2 * x) / 3 + 0.5 * np.sin(3 * x) / 8
    direct = float(np.abs(h.values - target).max())
    step = h.step
    hpp = (np.roll(h.values, -1) - 2 * h.values + np.roll(h.values, 1)) / step**2
    fd = float(np.abs(hpp + h.values - R.values).max())
    ok = direct < 1e-4 and fd < 1e-4
    return ok, f"spectral-oracle err={direct:.2e}, fd residual={fd:.2e}"


# ---------------------------------------------------------------------------
# optimality checks
# ---------------------------------------------------------------------------


def check_stadium_roots(seed: int = 0):
    r1, r2 = opt.eqop1_root(), opt.eqop2_root()
    rec = fam.stadium_profile(r1)
    ok = (
        abs(r1 - 0.5750) < 1e-3
        and abs(r1 - r2) < 1e-6
        and abs(opt.eqop1(r1)) < 1e-10
        and abs(rec.ratio - 0.406) < 1e-3
    )
    return ok, f"roots {r1:.10f}/{r2:.10f}, ratio at root {rec.ratio:.6f}"


def check_partition_closure(seed: int, n: int = 25):
    worst = 0.0
    for kind, s in _corpus(seed + 11, n):
        if kind != "radial" or not fam.radial_is_convex(s):
            continue
        part = opt.circle_partition(geo.normalize(s))
        worst = max(worst, abs(part.len_in + part.len_out - geo.TWO_PI))
    part = opt.circle_partition(geo.Stadium(0.6))
    worst = max(worst, abs(part.len_in + part.len_out - geo.TWO_PI))
    return worst < 1e-8, f"max |in + out - 2 pi| = {worst:.2e}"


def check_cap_residuals(seed: int = 0):
    at_root = opt.stadium_cap_residual(opt.eqop2_root())
    off = opt.stadium_cap_residual(0.8)
    rep = opt.optimality_residual(geo.Stadium(0.65))
    sym_ok = abs(rep.mu1) < 1e-8 and abs(rep.mu2) < 1e-8
    ok = at_root < 1e-4 and off > 1e-2 and sym_ok
    return ok, f"residual at root={at_root:.2e}, at 0.8={off:.2e}, symmetric mu ok={sym_ok}"


def check_ball_motion_moments(seed: int):
    # d/dt |s delta B(t v, 1)| at 0 equals the in/out moment difference
    rng = np.random.default_rng(seed + 12)
    s = geo.normalize(fam.random_convex_polygon(rng, 16))
    part = opt.circle_partition(s)
    v = np.array([0.7, -0.4])
    t = 1e-6
    f = lambda c: fn.symmetric_difference_with_disk(s, geo.Point2(*c), 1.0)
    fd = (f(t * v) - f(-t * v)) / (2 * t)
    formula = v[0] * (part.cos_out - part.cos_in) + v[1] * (part.sin_out - part.sin_in)
    ok = abs(fd - formula) < 1e-4 * max(1.0, abs(formula))
    return ok, f"fd={fd:.8f} vs moments={formula:.8f}"


def check_stadium_family_derivative(seed: int = 0):
    # finite-difference derivative of the closed-form ratio against the
    # shape-derivative assembly with the curvature condition's ingredients
    worst = 0.0
    for theta in (0.45, 0.55, 0.62):
        st = geo.Stadium(theta)
        d, lam0 = fn.deficit(st), fn.barycentric_asymmetry(st)
        part = opt.circle_partition(st)
        s_, c_ = math.sin(theta), math.cos(theta)
        dl = -(PI / 4.0) * c_ * (1.0 + 1.0 / (s_ * s_))
        # normal velocity: caps dl*cos(psi) + dr; flats dr (dr = cos theta)
        psi = np.linspace(-PI / 2, PI / 2, 4001)
        w = np.gradient(psi)
        curv_term = 0.0
        lam_term = 0.0
        for sign in (1.0, -1.0):
            x = sign * (st.l + st.r * np.cos(psi))
            y = sign * st.r * np.sin(psi)
            vn = dl * np.cos(psi) + c_
            ds = st.r * w
            curvature = 1.0 / st.r
            curv_term += float(np.sum((curvature - d - 1.0) * vn * ds)) / (2 * PI)
            outside = np.hypot(x, y) > 1.0
            lam_term += float(np.sum(np.where(outside, vn, -vn) * ds)) / PI
        # flats: curvature 0, vn = cos theta, length 2 l each
        for ys in (st.r, -st.r):
            vn = c_
            curv_term += (0.0 - d - 1.0) * vn * (2 * st.l) / (2 * PI)
            # flats at |y| = r < 1 with |x| <= l: inside iff x^2 + y^2 < 1
            xs = np.linspace(-st.l, st.l, 4001)
            wx = np.gradient(xs)
            outside = xs * xs + ys * ys > 1.0
            lam_term += float(np.sum(np.where(outside, vn, -vn) * wx)) / PI
        d_ratio_formula = curv_term / lam0**2 - 2.0 * d / lam0**3 * lam_term
        h = 1e-6
        fd = (
            fam.stadium_delta_closed(theta + h) / fam.stadium_lambda0_closed(theta + h) ** 2
            - fam.stadium_delta_closed(theta - h) / fam.stadium_lambda0_closed(theta - h) ** 2
        ) / (2 * h)
        worst = max(worst, abs(d_ratio_formula - fd) / max(abs(fd), 1e-9))
    return worst < 1e-3, f"max relative mismatch = {worst:.2e}"


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

DOCUMENTED_NOTES = (
    "upstream value note: the barrier inner integral evaluates to 0.23685 "
    "(source prints ~0.2320); the implied bound (pi/4) m_lower = 0.41450 > 0.41 holds",
    "upstream value note: the two-disk family deficit is increasing from n=2 to n=3 "
    "(max at n = 2 + sqrt 2) and strictly decreasing from n = 3 on",
)


def build_checks(seed: int, quick: bool = False) -> List[Check]:
    n_chain = 60 if quick else 200
    mc = 1_000_000 if quick else 10_000_000
    return [
        Check("geometry.normalize-invariance", lambda: check_normalize_invariance(seed, 10 if quick else 24)),
        Check("geometry.fraenkel-invariance", lambda: check_fraenkel_invariance(seed, 4 if quick else 10)),
        Check("geometry.diameter-bound", lambda: check_diameter_bound(seed, 30 if quick else 60)),
        Check("geometry.epsilon-perimeter", lambda: check_epsilon_perimeter(seed)),
        Check("geometry.lipschitz-estimate", lambda: check_gradient_estimate(seed)),
        Check("geometry.monte-carlo-oracle", lambda: check_monte_carlo_oracle(seed, mc)),
        Check("functionals.inequality-chain", lambda: check_inequality_chain(seed, n_chain)),
        Check("functionals.two-ball", check_two_ball),
        Check("functionals.stadium-lambda-equality", check_stadium_lambda_equality),
        Check("families.stadium-closed-vs-geometric", check_stadium_closed_vs_geometric),
        Check("families.counterexample-sanity", check_counterexample_sanity),
        Check("families.projection", lambda: check_projection(seed, 10 if quick else 30)),
        Check("rearrangement.properties", lambda: check_rearrangement_properties(seed)),
        Check("rearrangement.riesz-suite", lambda: check_riesz_suite(seed, 30 if quick else 100)),
        Check("variational.solver-agreement", lambda: check_solver_agreement(seed)),
        Check("variational.rayleigh-gradient", lambda: check_rayleigh_gradient(seed)),
        Check("variational.quotient-vs-geometry", lambda: check_quotient_vs_geometry(seed)),
        Check("variational.barrier", check_barrier),
        Check("variational.ode-solver", check_ode_solver),
        Check("optimality.stadium-roots", check_stadium_roots),
        Check("optimality.partition-closure", lambda: check_partition_closure(seed, 10 if quick else 25)),
        Check("optimality.cap-residuals", check_cap_residuals),
        Check("optimality.ball-motion-moments", lambda: check_ball_motion_moments(seed)),
        Check("optimality.stadium-family-derivative", check_stadium_family_derivative),
    ]


def run_all(seed: int, quick: bool = False, out=print) -> int:
    results: List[Result] = []
    failures = 0
    for check in build_checks(seed, quick):
        try:
            ok, msg = check.fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, msg = False, f"error={exc!r}"
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        results.append(Result(check.name, status, msg))
        out(f"{status} {check.name}: {msg}")
    for note in DOCUMENTED_NOTES:
        out(f"NOTE {note}")
    out(f"done: {len(results)} checks, {failures} failures")
    return 2 if failures else 0
