"""Half-plane displacement from the crack-face profile.

``w(x, y)`` is the Poisson extension of the opening ``f`` (zero outside
[-1, 1]).  The default route integrates the Poisson kernel exactly against
a clamped cubic spline of ``f``; a Fourier-synthesis route is kept as an
independent check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft
from scipy.interpolate import CubicSpline

from . import kernels
from .errors import DomainError, ResolutionError
from .fredholm import BoundaryProfile, CrackParams
from .hilbert import GridFunction, hilbert_of_derivative

DEFAULT_L = 3.0
DEFAULT_Y = 3.0
DEFAULT_SHAPE = (301, 301)
FOURIER_H = 1.25e-3
FOURIER_PERIOD = 650.0


@dataclass(frozen=True)
class HalfPlaneField:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray        # shape (len(y), len(x))
    w_x: np.ndarray
    w_y: np.ndarray
    method: str
    f_nodes: np.ndarray  # boundary profile used, on linspace(-1, 1, n)

    @property
    def gradient_norm(self):
        return np.hypot(self.w_x, self.w_y)


def _as_grid_function(f) -> GridFunction:
    if isinstance(f, BoundaryProfile):
        return f.f
    if isinstance(f, GridFunction):
        return f
    return GridFunction(np.asarray(f, dtype=float))


def _profile_spline(gf: GridFunction) -> CubicSpline:
    if not gf.has_compact_support():
        raise DomainError("profile must vanish at both tips")
    return CubicSpline(gf.x, gf.values, bc_type="clamped")


def default_axes(L=DEFAULT_L, Y=DEFAULT_Y, shape=DEFAULT_SHAPE):
    ny, nx = shape
    return np.linspace(-L, L, nx), np.linspace(0.0, Y, ny)


def _boundary_row(cs, xs):
    inside = np.abs(xs) <= 1.0
    f0 = np.where(inside, cs(np.clip(xs, -1, 1)), 0.0)
    df0 = np.where(inside, cs(np.clip(xs, -1, 1), 1), 0.0)
    return f0, df0


def reconstruct_field(f, xs=None, ys=None, *, method="convolution") -> HalfPlaneField:
    """Poisson extension of ``f`` onto the tensor grid ``xs`` x ``ys``.

    ``f`` may be a BoundaryProfile, a GridFunction or nodal values on
    ``linspace(-1, 1, n)``.  Rows with ``y = 0`` copy the profile for
    ``w`` and ``w_x``; ``w_y`` there is the principal-value limit.
    """
    gf = _as_grid_function(f)
    dx, dy = default_axes()
    xs = dx if xs is None else np.asarray(xs, dtype=float)
    ys = dy if ys is None else np.asarray(ys, dtype=float)
    if np.any(ys < 0):
        raise DomainError("field rows must satisfy y >= 0")
    cs = _profile_spline(gf)
    if method == "convolution":
        w, wx, wy = kernels.poisson_panels(gf.x, np.ascontiguousarray(cs.c), xs, ys)
    elif method == "fourier":
        w, wx, wy = _fourier_synthesis(cs, xs, ys)
    else:
        raise ValueError(f"unknown method {method!r}")
    f0, df0 = _boundary_row(cs, xs)
    for iy in np.flatnonzero(ys == 0.0):
        w[iy] = f0
        wx[iy] = df0
    return HalfPlaneField(xs, ys, w, wx, wy, method, gf.values.copy())


def _fourier_synthesis(cs, xs, ys, h_target=FOURIER_H, period=FOURIER_PERIOD):
    """Symbol ``exp(-2 pi |xi| y)`` on a long periodic grid aligned with ``xs``.

    Images of the periodic copies add ``pi M y / (3 P^2)`` to ``w`` and
    ``pi M / (3 P^2)`` to ``w_y`` at leading order, ``M`` being the area
    under ``f``; both are removed.
    """
    if xs.size > 1:
        dx = float(np.min(np.diff(xs)))
        hf = dx / np.ceil(dx / h_target)
    else:
        hf = h_target
    nf = 2.0 / hf
    offs = (xs + 1.0) / hf
    if abs(nf - round(nf)) > 1e-6 or np.max(np.abs(offs - np.round(offs))) > 1e-6:
        raise ResolutionError("Fourier synthesis needs x nodes on a lattice containing +-1")
    nf = int(round(nf))
    N = sfft.next_fast_len(int(np.ceil(period / hf)), real=True)
    P = N * hf
    buf = np.zeros(N)
    buf[:nf + 1] = cs(-1.0 + hf * np.arange(nf + 1))
    M = hf * (buf[:nf + 1].sum() - 0.5 * (buf[0] + buf[nf]))
    F = sfft.rfft(buf)
    xi = sfft.rfftfreq(N, d=hf)
    idx = np.round(offs).astype(int) % N
    w = np.empty((ys.size, xs.size))
    wx = np.empty_like(w)
    wy = np.empty_like(w)
    image = np.pi * M / (3 * P * P)
    for iy, y in enumerate(ys):
        Fy = F * np.exp(-2 * np.pi * xi * y)
        w[iy] = sfft.irfft(Fy, n=N)[idx] - image * y
        wx[iy] = sfft.irfft(2j * np.pi * xi * Fy, n=N)[idx]
        wy[iy] = sfft.irfft(-2 * np.pi * xi * Fy, n=N)[idx] - image
    return w, wx, wy


def dtn_check(f, field: HalfPlaneField, *, exclude=0.0) -> float:
    """max |-w_y(x, 0+) - H f'(x)| over boundary nodes with |x| < 1 - exclude.

    ``w_y(x, 0+)`` is the second-order one-sided difference over the first
    three rows, which must be equally spaced starting at ``y = 0``.
    """
    gf = _as_grid_function(f)
    y = field.y
    if y.size < 3 or y[0] != 0.0 or not np.isclose(y[2] - y[1], y[1] - y[0], rtol=1e-9):
        raise ResolutionError("need three equally spaced rows starting at y = 0")
    if not np.any(gf.values):
        return 0.0
    hy = y[1]
    wy0 = (-3 * field.w[0] + 4 * field.w[1] - field.w[2]) / (2 * hy)
    hf = CubicSpline(gf.x, hilbert_of_derivative(gf).values)
    m = np.abs(field.x) < 1.0 - exclude
    return float(np.max(np.abs(-wy0[m] - hf(field.x[m]))))


def harmonicity_residual(field: HalfPlaneField, *, y_min=0.0) -> float:
    """max |five-point Laplacian of w| over interior nodes with y >= y_min."""
    x, y, w = field.x, field.y, field.w
    hx = np.diff(x)
    hy = np.diff(y)
    if not (np.allclose(hx, hx[0]) and np.allclose(hy, hy[0])):
        raise ResolutionError("harmonicity check needs a uniform grid")
    hx, hy = hx[0], hy[0]
    lap = ((w[1:-1, 2:] - 2 * w[1:-1, 1:-1] + w[1:-1, :-2]) / hx ** 2
           + (w[2:, 1:-1] - 2 * w[1:-1, 1:-1] + w[:-2, 1:-1]) / hy ** 2)
    rows = y[1:-1] >= y_min
    if not np.any(rows):
        raise ResolutionError("no interior rows above y_min")
    return float(np.max(np.abs(lap[rows])))


def strain_bound_report(field: HalfPlaneField, params: CrackParams) -> float:
    """sup over the grid of (|w| + |grad w|) / |gamma|; 0 when gamma = 0."""
    g = abs(params.gamma)
    if g == 0.0:
        return 0.0
    return float(np.max(np.abs(field.w) + field.gradient_norm) / g)
