"""Linearized near-disk minimization and the kernel/barrier machinery.

The quadratic-over-L1 quotient  integral(u'^2 - u^2) / [integral |u|]^2  is
minimized over zero-mean profiles orthogonal to cos and sin (first
harmonics removed), by two independent routes: preconditioned normalized
gradient descent in Fourier coefficients, and a fixed-point iteration on
the kernel characterization u = H * sign(u).  A piecewise-polynomial
barrier above the kernel H turns its rearrangement into an explicit lower
bound for the minimum.

The periodic Green kernel G solves h'' + h = R for data orthogonal to the
first harmonics; H subtracts the projection terms so that convolution with
H lands in the constrained subspace automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .geometry import RadialShape, ShapeError, TWO_PI
from .rearrangement import SampledFunction

PI = math.pi


class ConstraintViolationError(ShapeError):
    """Profile handed to a constrained functional violates its constraints."""


class CompatibilityError(ValueError):
    """Right-hand side incompatible with the periodic kernel inversion."""


# ---------------------------------------------------------------------------
# kernels and the periodic second-order solve
# ---------------------------------------------------------------------------


def green_kernel(t):
    """Periodic Green kernel G(t) = (1/2)(1 - |t|/pi) sin|t| on [-pi, pi]."""
    t = np.asarray(t, dtype=float)
    w = np.abs((t + PI) % TWO_PI - PI)
    return 0.5 * (1.0 - w / PI) * np.sin(w)


def kernel_H(x):
    """Fixed-point kernel H(x) = -G(x) + 1/(2 pi) + cos(x)/(4 pi); even,
    with vanishing mean and first harmonics."""
    x = np.asarray(x, dtype=float)
    return -green_kernel(x) + 1.0 / (2.0 * PI) + np.cos(x) / (4.0 * PI)


def solve_ode_periodic(R: SampledFunction) -> SampledFunction:
    """Solve h'' + h = R for a 2 pi-periodic h orthogonal to cos and sin.

    R must be sampled on the [-pi, pi] grid and orthogonal to the first
    harmonics (compatibility of the resonant operator); the solution is the
    circular convolution of R with the Green kernel.
    """
    if not math.isclose(R.half_width, PI, rel_tol=1e-12):
        raise CompatibilityError("right-hand side must live on [-pi, pi]")
    x = R.nodes()
    h_step = R.step
    if abs(float(np.sum(R.values * np.sin(x))) * h_step) > 1e-8 or \
       abs(float(np.sum(R.values * np.cos(x))) * h_step) > 1e-8:
        raise CompatibilityError("right-hand side must be orthogonal to cos and sin")
    n = R.size
    G = green_kernel(x)
    # h(x_i) = sum_k G(x_k) R(x_i + x_k) step ; x_i + x_k = x_{(i+k+n/2) mod n}
    corr = np.real(np.fft.ifft(np.conj(np.fft.fft(np.roll(G, -(n // 2)))) * np.fft.fft(R.values)))
    return SampledFunction(PI, corr * h_step)


# ---------------------------------------------------------------------------
# the full quotient on radial profiles
# ---------------------------------------------------------------------------


def J_full(u, constraint_tol: float = 1e-6) -> float:
    """Perimeter-excess over squared-symmetric-difference quotient of a
    constrained radial profile: (pi/2) * [P - 2 pi] / [area of profile
    against the unit disk]^2.

    The profile must already satisfy the area and barycenter constraints to
    constraint_tol, and be 2 pi-periodic (grid-borne); otherwise it is
    rejected.  On such profiles this equals the deficit over squared
    barycentric asymmetry of the corresponding shape.
    """
    from .families import constraint_residuals

    s = u if isinstance(u, RadialShape) else RadialShape(u_samples=np.asarray(u, float))
    res = constraint_residuals(s)
    if np.max(np.abs(res)) >= constraint_tol:
        raise ConstraintViolationError(
            f"constraint residuals {res} exceed {constraint_tol}"
        )
    h = TWO_PI / s.grid_size
    R = 1.0 + s.u_samples
    Rp = s.u_prime_samples()
    num = float(np.sum(np.sqrt(R * R + Rp * Rp) - 1.0)) * h
    den = 0.5 * float(np.sum(np.abs(R * R - 1.0))) * h
    if den < 1e-14:
        raise ConstraintViolationError("profile coincides with the disk; quotient undefined")
    return 0.5 * PI * num / (den * den)


# ---------------------------------------------------------------------------
# Fourier-side quotient
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FourierProfile:
    """Trig polynomial with modes k = 2..N only (constant and first
    harmonics excluded by the constraints); periodic by construction."""

    cos_coeffs: np.ndarray  # a_k, k = 2..N
    sin_coeffs: np.ndarray  # b_k, k = 2..N
    grid_size: int = 4096

    def __init__(self, cos_coeffs, sin_coeffs, grid_size: int = 4096):
        a = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
        if len(a) != len(b) or len(a) < 1:
            raise ValueError("need matching nonempty coefficient arrays for k = 2..N")
        if len(a) + 2 > grid_size // 2:
            raise ValueError("grid too coarse for the highest harmonic")
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)
        object.__setattr__(self, "grid_size", int(grid_size))

    @property
    def max_harmonic(self) -> int:
        return len(self.cos_coeffs) + 1

    def ks(self) -> np.ndarray:
        return np.arange(2, self.max_harmonic + 1, dtype=float)

    def reconstruct(self) -> np.ndarray:
        M = self.grid_size
        spec = np.zeros(M // 2 + 1, dtype=complex)
        spec[2 : self.max_harmonic + 1] = (self.cos_coeffs - 1j * self.sin_coeffs) * (M / 2.0)
        return np.fft.irfft(spec, M)


def opepl_rayleigh(p: FourierProfile) -> float:
    """Scale-invariant quotient integral(u'^2 - u^2) / [integral |u|]^2.

    The numerator is exact in coefficients, pi * sum (k^2 - 1)(a_k^2 + b_k^2);
    the denominator is the grid quadrature of |u|.
    """
    k = p.ks()
    num = PI * float(np.sum((k * k - 1.0) * (p.cos_coeffs**2 + p.sin_coeffs**2)))
    u = p.reconstruct()
    den = float(np.sum(np.abs(u))) * TWO_PI / p.grid_size
    if den < 1e-300:
        raise ValueError("zero profile")
    return num / (den * den)


def opepl_rayleigh_gradient(p: FourierProfile):
    """Gradient of the quotient in (cos, sin) coefficients, using sign(u)
    as the subgradient of the absolute-value integral."""
    k = p.ks()
    w = k * k - 1.0
    num = PI * float(np.sum(w * (p.cos_coeffs**2 + p.sin_coeffs**2)))
    u = p.reconstruct()
    h = TWO_PI / p.grid_size
    den = float(np.sum(np.abs(u))) * h
    sgn = np.sign(u)
    S = np.fft.rfft(sgn)[2 : p.max_harmonic + 1]
    dden_da = h * S.real
    dden_db = -h * S.imag
    ga = 2.0 * PI * w * p.cos_coeffs / den**2 - 2.0 * num / den**3 * dden_da
    gb = 2.0 * PI * w * p.sin_coeffs / den**2 - 2.0 * num / den**3 * dden_db
    return ga, gb


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VariationalSolution:
    """Minimizer data: profile scaled so that integral |u0| = 1/m."""

    u0: np.ndarray  # samples on theta_k = 2 pi k / M
    m: float
    sign_pattern: np.ndarray
    multipliers: tuple  # (mean, cos, sin) multipliers from the sign pattern
    residuals: tuple  # (L1, L2-cos, L2-sin, periodicity)
    converged: bool
    method: str

    @property
    def grid_size(self) -> int:
        return len(self.u0)


def _solution_from_u(u: np.ndarray, m: float, converged: bool, method: str) -> VariationalSolution:
    M = len(u)
    h = TWO_PI / M
    th = TWO_PI * np.arange(M) / M
    u0 = u / (float(np.sum(np.abs(u))) * h) / m
    sgn = np.sign(u0).astype(np.int8)
    mult = (
        -float(np.sum(sgn)) * h / TWO_PI,
        -float(np.sum(sgn * np.cos(th))) * h / PI,
        -float(np.sum(sgn * np.sin(th))) * h / PI,
    )
    res = (
        abs(float(np.sum(u0)) * h),
        abs(float(np.sum(u0 * np.cos(th))) * h),
        abs(float(np.sum(u0 * np.sin(th))) * h),
        0.0,  # periodic grid carries u(0) = u(2 pi) structurally
    )
    return VariationalSolution(u0=u0, m=m, sign_pattern=sgn, multipliers=mult,
                               residuals=res, converged=converged, method=method)


def norm_identity_gap(sol: VariationalSolution) -> float:
    """|integral |u0| - double integral sign(u0) H(theta - t) sign(u0)|.

    Vanishes at a fixed point of the kernel characterization.
    """
    M = sol.grid_size
    h = TWO_PI / M
    th = TWO_PI * np.arange(M) / M
    lhs = float(np.sum(np.abs(sol.u0))) * h
    s = sol.sign_pattern.astype(float)
    Hs = kernel_H(th)
    conv = np.real(np.fft.ifft(np.fft.fft(Hs) * np.fft.fft(s))) * h
    rhs = float(s @ conv) * h
    return abs(lhs - rhs)


def opepl_solve_fourier(n_harmonics: int = 256, grid_size: int = 8192,
                        restarts: int = 32, seed: int = 0,
                        iter_cap: int = 4000) -> VariationalSolution:
    """Minimize the quotient by preconditioned normalized gradient descent.

    Multi-start over seeded random coefficient draws; descent runs in the
    variables sqrt(k^2 - 1) * (a_k, b_k) so the numerator is isotropic, with
    a step that halves on failure.  Once descent stalls, a Newton-style
    polish solves the first-order conditions exactly for the locked sign
    pattern (the smooth subproblem is quadratic over linear), removing the
    first-order crawl floor.  Deterministic reduction: best final value,
    ties by start index.
    """
    if n_harmonics < 8 or grid_size < 1024:
        raise ValueError("need at least 8 harmonics and a grid of 1024")
    if n_harmonics + 2 > grid_size // 2:
        raise ValueError("grid too coarse for the highest harmonic")
    rng = np.random.default_rng(seed)
    k = np.arange(2, n_harmonics + 1, dtype=float)
    w = np.sqrt(k * k - 1.0)
    nk = len(k)
    h = TWO_PI / grid_size

    def u_of(x):
        p = FourierProfile(x[:nk] / w, x[nk:] / w, grid_size)
        return p.reconstruct()

    def value_grad(x):
        u = u_of(x)
        num = PI * float(x @ x)
        den = float(np.sum(np.abs(u))) * h
        val = num / (den * den)
        S = np.fft.rfft(np.sign(u))[2 : n_harmonics + 1]
        dden = np.concatenate([h * S.real, -h * S.imag]) / np.concatenate([w, w])
        grad = 2.0 * PI * x / den**2 - 2.0 * num / den**3 * dden
        return val, grad

    def polish(x, val):
        # with the sign pattern frozen, the optimal coefficients are the
        # pattern's own harmonics damped by k^2 - 1 (first-order conditions)
        for _ in range(8):
            s = np.sign(u_of(x))
            S = np.fft.rfft(s)[2 : n_harmonics + 1]
            a = S.real / (k * k - 1.0)
            b = -S.imag / (k * k - 1.0)
            x_new = np.concatenate([a * w, b * w])
            val_new, _ = value_grad(x_new)
            if val_new >= val - 1e-15:
                break
            x, val = x_new, val_new
            if np.array_equal(np.sign(u_of(x)), s):
                break
        return x, val

    best_val, best_x, best_converged = math.inf, None, False
    for _ in range(restarts):
        x = rng.standard_normal(2 * nk) / np.concatenate([k, k])
        val, grad = value_grad(x)
        eta = 0.1
        converged = False
        for _ in range(iter_cap):
            gn = float(np.linalg.norm(grad))
            if gn < 1e-14:
                converged = True
                break
            x_try = x - eta * grad / gn
            val_try, grad_try = value_grad(x_try)
            if val_try < val - 1e-15:
                x, val, grad = x_try, val_try, grad_try
                eta *= 1.07
            else:
                eta *= 0.5
                if eta < 1e-12:
                    converged = True
                    break
        x, val = polish(x, val)
        if val < best_val - 1e-15:
            best_val, best_x, best_converged = val, x, converged
    u = u_of(best_x)
    return _solution_from_u(u, best_val, best_converged, "fourier")


def opepl_solve_fixedpoint(grid_size: int = 4096, init_sign=None,
                           damping: float = 0.5, iter_cap: int = 500) -> VariationalSolution:
    """Solve the kernel fixed point u = H * sign(u) by damped iteration.

    Sign patterns are +-1 valued, so the damping blends the profiles
    (u <- (1-d) u + d H*sign u), which suppresses pattern two-cycles; the
    iteration stops when the sign pattern is stationary and one undamped
    application then enforces the fixed-point identities exactly.
    m = 1 / integral |u0| at the fixed point.

    Different initial patterns converge to different critical profiles of
    the quotient (more sign changes give larger m); the default start
    targets the minimizing two-lobes-per-period pattern and is
    cross-validated against the Fourier descent solver.
    """
    M = int(grid_size)
    if M < 1024 or M % 2:
        raise ValueError("need an even grid of at least 1024")
    th = TWO_PI * np.arange(M) / M
    h = TWO_PI / M
    Hs = kernel_H(th)
    fftH = np.fft.fft(Hs)

    def apply_H(sgn):
        return np.real(np.fft.ifft(fftH * np.fft.fft(sgn))) * h

    u = np.cos(2.0 * th) if init_sign is None else np.asarray(init_sign, dtype=float)
    if len(u) != M:
        raise ValueError("init_sign length must match the grid")
    converged = False
    for _ in range(iter_cap):
        s = np.sign(u)
        u_new = (1.0 - damping) * u + damping * apply_H(s)
        if np.array_equal(np.sign(u_new), s):
            u = u_new
            converged = True
            break
        u = u_new
    u0 = apply_H(np.sign(u))  # exact fixed-point application
    m = 1.0 / (float(np.sum(np.abs(u0))) * h)
    return _solution_from_u(u0 * m, m, converged, "fixedpoint")


# ---------------------------------------------------------------------------
# barrier above the kernel and the resulting lower bound
# ---------------------------------------------------------------------------

BARRIER_NODES = (0.355, 0.59, 1.3, 1.9, 2.25)
_X1, _X2, _X3, _X4, _X5 = BARRIER_NODES
_H_X1 = float(kernel_H(_X1))
# parabola through (x5, 0) and (2 pi - x5, 0) normalized to peak H(x1) at pi,
# which the level-measure branch structure requires (printed constant 1/9.99)
_R5_DIV = (PI - _X5) ** 2 / _H_X1
_R2_DIV = 4.34
_R2_X3 = (_X3 - _X2) * (_X3 - (_X2 + _X3)) / _R2_DIV
_R3_COEF = -_R2_X3 / 0.85**2  # positive; parabola with roots 0.45 and 2.15
_R3_X4 = _R3_COEF * (_X4 - 2.15) * (_X4 - 0.45)


def _r1(x):
    return _H_X1 / (_X1 - _X2) * (x - _X2)


def _r2(x):
    return (x - _X2) * (x - (_X2 + _X3)) / _R2_DIV


def _r3(x):
    return _R3_COEF * (x - 2.15) * (x - 0.45)


def _r4(x):
    return _R3_X4 / (_X4 - _X5) * (x - _X5)


def _r5(x):
    return -(x - TWO_PI + _X5) * (x - _X5) / _R5_DIV


def barrier_M(x):
    """Piecewise barrier above the kernel H on [0, pi]: the kernel itself up
    to x1 = 0.355, then straight/parabolic pieces through the printed nodes,
    continuous and tangent-normalized so that M >= H everywhere."""
    x = np.asarray(x, dtype=float)
    return np.select(
        [x <= _X1, x <= _X2, x <= _X3, x <= _X4, x <= _X5],
        [kernel_H(x), _r1(x), _r2(x), _r3(x), _r4(x)],
        default=_r5(x),
    )


_R2_VERTEX = 0.5 * (_X2 + (_X2 + _X3))
_M_MIN = float(_r2(_R2_VERTEX))
_M_MAX = float(kernel_H(0.0))


def barrier_level_measure(t):
    """|{x in [0, pi] : M(x) > t}| in closed form per barrier piece."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t_arr)

    # t >= H(x1): only the kernel piece exceeds such levels; invert H on [0, x1]
    top = t_arr >= _H_X1
    if top.any():
        tv = t_arr[top]
        lo = np.zeros_like(tv)
        hi = np.full_like(tv, _X1)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            above = kernel_H(mid) > tv
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        out[top] = np.where(tv >= _M_MAX, 0.0, 0.5 * (lo + hi))

    band = (~top) & (t_arr >= 0.0)
    if band.any():
        tv = t_arr[band]
        inv_r1 = _X2 + tv * (_X1 - _X2) / _H_X1
        inv_r5 = PI - np.sqrt(np.maximum(0.0, (PI - _X5) ** 2 - _R5_DIV * tv))
        out[band] = inv_r1 + PI - inv_r5

    neg = t_arr < 0.0
    if neg.any():
        tv = t_arr[neg]
        half = 0.5 * _X3  # half distance between the r2 roots x2 and x2 + x3
        disc = np.maximum(0.0, half * half + _R2_DIV * tv)
        inv_left = _R2_VERTEX - np.sqrt(disc)
        inv_r4 = _X5 + tv * (_X4 - _X5) / _R3_X4
        inv_r3 = _X3 + np.sqrt(np.maximum(0.0, 0.85**2 + tv / _R3_COEF))
        inv_right = _R2_VERTEX + np.sqrt(disc)
        res = np.where(
            tv >= _R3_X4,
            inv_left + PI - inv_r4,
            np.where(tv >= _R2_X3, inv_left + PI - inv_r3, inv_left + PI - inv_right),
        )
        out[neg] = np.where(tv <= _M_MIN, PI, res)

    return float(out[0]) if np.asarray(t).ndim == 0 else out


def barrier_M_star(s):
    """Decreasing rearrangement of the barrier on [0, pi], by monotone
    bisection on the closed-form level-measure map."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float)).copy()
    lo = np.full_like(s_arr, _M_MIN)
    hi = np.full_like(s_arr, _M_MAX)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        above = barrier_level_measure(mid) > s_arr
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out = 0.5 * (lo + hi)
    out = np.where(s_arr <= 0.0, _M_MAX, np.where(s_arr >= PI, _M_MIN, out))
    return float(out[0]) if np.asarray(s).ndim == 0 else out


def barrier_inner_integral() -> float:
    """Adaptive quadrature of integral_0^pi (pi - x) M*(x) dx, split at the
    rearrangement's piece boundaries."""
    breaks = sorted(
        {0.0, _X1, float(barrier_level_measure(0.0)), float(barrier_level_measure(_R3_X4)),
         float(barrier_level_measure(_R2_X3)), PI}
    )
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        val, _ = quad(lambda x: (PI - x) * float(barrier_M_star(x)), a, b, limit=200)
        total += val
    return total


def m_lower_bound() -> float:
    """Lower bound for the quotient minimum: 1 / (8 * inner integral)."""
    return 1.0 / (8.0 * barrier_inner_integral())
