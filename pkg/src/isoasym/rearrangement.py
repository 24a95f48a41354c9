"""Symmetric decreasing rearrangement on symmetric intervals, and the
rearranged triple-convolution comparison.

Functions are sampled on the periodic half-open grid x_k = -T + 2Tk/N
(N even), which makes the shifted-kernel quadrature an exact circular
convolution and gives every node except -T a mirror partner.  The
rearrangement redistributes the sorted sample multiset from the center
outward, so equimeasurability, monotonicity and constant shifts hold
exactly on the grid; plateaus break by node index, making the output
deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class GridMismatchError(ValueError):
    """Operands sampled on different grids."""


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Real function on [-T, T] sampled at x_k = -T + 2Tk/N, N even >= 8."""

    half_width: float
    values: np.ndarray

    def __init__(self, half_width, values):
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or len(vals) < 8 or len(vals) % 2:
            raise ValueError("need an even sample count >= 8")
        if not np.all(np.isfinite(vals)) or not (half_width > 0):
            raise ValueError("samples and half-width must be finite and positive")
        object.__setattr__(self, "half_width", float(half_width))
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / len(self.values)

    def nodes(self) -> np.ndarray:
        n = len(self.values)
        return -self.half_width + 2.0 * self.half_width * np.arange(n) / n

    def integral(self) -> float:
        return float(np.sum(self.values)) * self.step


def _fill_order(n: int) -> np.ndarray:
    """Node indices ordered center-out: 0 first, then -h, +h, -2h, ...

    Index k = n/2 is the center x = 0; pairs (n/2 - j, n/2 + j) follow, the
    negative node first; index 0 (x = -T, its own periodic mirror) is last.
    """
    order = [n // 2]
    for j in range(1, n // 2):
        order.append(n // 2 - j)
        order.append(n // 2 + j)
    order.append(0)
    return np.array(order)


def decreasing_rearrangement(f: SampledFunction) -> SampledFunction:
    """Symmetric decreasing rearrangement of the sample multiset.

    The sorted values (descending, ties kept in node order) are laid out
    from the center outward, giving an even profile non-increasing on
    [0, T] with the same distribution function as the input.
    """
    n = f.size
    order = np.argsort(-f.values, kind="stable")
    out = np.empty(n)
    out[_fill_order(n)] = f.values[order]
    return SampledFunction(f.half_width, out)


def riesz_pair(f: SampledFunction, g: SampledFunction, h: SampledFunction):
    """Both sides of the rearranged triple-product comparison.

    lhs = iint f(t) g(t - theta) h(theta) dt dtheta with g read
    2T-periodically; rhs is the same integral with every factor replaced by
    its symmetric decreasing rearrangement.  Quadrature is the tensor
    trapezoid rule on the periodic grid (an exact circular convolution);
    the documented comparison tolerance is 10 * step^2.
    """
    if not (f.size == g.size == h.size) or not (
        math.isclose(f.half_width, g.half_width) and math.isclose(f.half_width, h.half_width)
    ):
        raise GridMismatchError("riesz_pair needs one common grid")

    def double_integral(ff, gg, hh):
        n = ff.size
        # g(x_i - x_j) = g(x_{(i - j + n/2) mod n}); correlate via FFT
        g_shift = np.roll(gg.values, -(n // 2))
        conv = np.real(np.fft.ifft(np.fft.fft(g_shift) * np.fft.fft(hh.values)))
        return float(ff.values @ conv) * ff.step * ff.step

    lhs = double_integral(f, g, h)
    rhs = double_integral(
        decreasing_rearrangement(f), decreasing_rearrangement(g), decreasing_rearrangement(h)
    )
    return lhs, rhs


def riesz_tolerance(f: SampledFunction) -> float:
    """Comparison tolerance for riesz_pair on this grid: 10 * step^2."""
    return 10.0 * f.step * f.step
