"""Truncated Zak transforms with certified tails and zero location.

Z_p g(x, xi) = sum_k g(x - p k) e^{2 pi i p k xi}, truncated at a radius
derived from the window's decay envelope so the reported truncation error
is a certified bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .windows import TPWindow, truncation_radius


class ZakError(RuntimeError):
    """Zak transform evaluation or zero location failed."""


class ZakZeroNotFound(ZakError):
    """No zero of |Zg| below tolerance exists in the fundamental domain."""

    def __init__(self, msg, min_abs=None, argmin=None):
        super().__init__(msg)
        self.min_abs = min_abs
        self.argmin = argmin


@dataclass(frozen=True)
class ZakValue:
    re: float
    im: float
    trunc_err: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class ZakZero:
    x0: float
    xi0: float
    residual: float


def _kmax(w: TPWindow, p: float, xabs: float, tol: float) -> int:
    R = truncation_radius(w, tol)
    return int(math.ceil((R + xabs) / min(p, 1.0))) + 2


def zak_values(w: TPWindow, p: float, xs, xi: float, tol: float = 1e-12):
    """Vectorized truncated Z_p g(x, xi) over an array of x values."""
    if p <= 0:
        raise ZakError("period p must be positive")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    K = _kmax(w, p, float(np.max(np.abs(xs))) if xs.size else 0.0, tol)
    k = np.arange(-K, K + 1)
    gvals = w(xs[:, None] - p * k[None, :])
    phases = np.exp(2j * math.pi * p * k * xi)
    return gvals @ phases


def zak(w: TPWindow, p: float, x: float, xi: float, tol: float = 1e-12) -> ZakValue:
    """Truncated Zak transform at a single point, with certified tail bound."""
    z = zak_values(w, p, [x], xi, tol)[0]
    return ZakValue(re=float(z.real), im=float(z.imag), trunc_err=tol)


def zak_on_half_line(w: TPWindow, x: float, tol: float = 1e-12) -> float:
    """The real number Zg(x, 1/2) = sum_k (-1)^k g(x-k).

    Raises if the truncated sum acquires an imaginary part above tol,
    which would signal an evaluation bug (the exact value is real).
    """
    z = zak(w, 1.0, x, 0.5, tol)
    if abs(z.im) > tol:
        raise ZakError(f"Zg(x, 1/2) should be real; got imaginary part {z.im:g}")
    return z.re


def _zak_abs_grid(w: TPWindow, grid_n: int, tol: float) -> np.ndarray:
    """|Zg| on the grid (i/n, j/n), returned as an (n, n) array [x, xi]."""
    xs = np.arange(grid_n) / grid_n
    K = _kmax(w, 1.0, 1.0, tol)
    k = np.arange(-K, K + 1)
    gmat = w(xs[:, None] - k[None, :])              # (n, nk)
    xis = np.arange(grid_n) / grid_n
    phases = np.exp(2j * math.pi * np.outer(k, xis))  # (nk, n)
    return np.abs(gmat @ phases)


def locate_zero(w: TPWindow, grid_n: int = 256, zero_tol: float = 1e-10,
                tol: float = 1e-12) -> ZakZero:
    """Locate the unique zero of Zg in [0,1)^2.

    Scans |Zg| on a grid, then refines x by sign-change bisection of the
    real-valued section x -> Zg(x, 1/2).  Raises :class:`ZakZeroNotFound`
    if no zero exists (window outside the unique-zero hypothesis) and
    :class:`ZakError` if a second candidate cell shows up.
    """
    if grid_n < 64:
        raise ZakError("grid_n must be at least 64")
    A = _zak_abs_grid(w, grid_n, tol)
    i0, j0 = np.unravel_index(np.argmin(A), A.shape)
    xi_cell = j0 / grid_n

    # the zero must sit on the line xi = 1/2
    if min(abs(xi_cell - 0.5), 1.0 - abs(xi_cell - 0.5)) > 1.5 / grid_n:
        raise ZakZeroNotFound(
            f"grid minimum |Zg| = {A[i0, j0]:.3g} is not on the xi = 1/2 line",
            min_abs=float(A[i0, j0]), argmin=(i0 / grid_n, xi_cell))

    f = lambda x: zak_on_half_line(w, x, tol)
    h = 1.0 / grid_n
    xc = i0 / grid_n
    lo, hi = xc - h, xc + h
    width = h
    while f(lo) * f(hi) > 0:
        width += h
        lo, hi = xc - width, xc + width
        if width > 4 * h:
            raise ZakZeroNotFound(
                f"no sign change of Zg(., 1/2) near grid minimum "
                f"|Zg| = {A[i0, j0]:.3g}",
                min_abs=float(A[i0, j0]), argmin=(xc, xi_cell))
    x0 = brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16)
    x0 = x0 % 1.0
    residual = abs(zak(w, 1.0, x0, 0.5, tol).value)
    if residual >= zero_tol:
        raise ZakZeroNotFound(
            f"refined residual {residual:.3g} exceeds zero_tol {zero_tol:g}",
            min_abs=residual, argmin=(x0, 0.5))

    # uniqueness on the grid: any other near-zero cell is a hard error
    ii, jj = np.meshgrid(np.arange(grid_n), np.arange(grid_n), indexing="ij")
    dx = np.abs(ii / grid_n - x0)
    dx = np.minimum(dx, 1.0 - dx)
    dxi = np.abs(jj / grid_n - 0.5)
    dxi = np.minimum(dxi, 1.0 - dxi)
    far = np.maximum(dx, dxi) > 1.5 / grid_n
    bad = far & (A < 10.0 * zero_tol)
    if np.any(bad):
        raise ZakError("multiple Zak-zero candidates on the grid; "
                       "numeric failure (theory forbids a second zero)")
    return ZakZero(x0=float(x0), xi0=0.5, residual=float(residual))
