"""Hilbert transform of the derivative of a compactly supported grid function.

Convention: ``(H g)(x) = (1/pi) p.v. int g(s) / (x - s) ds``, so that on the
half plane the Dirichlet-to-Neumann map reads ``-w_y(x, 0) = H w_x(x, 0)``
and ``H d/dx`` has Fourier symbol ``2 pi |xi|``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from . import kernels
from ._fd import d1
from .errors import AccuracyWarning, DomainError, ResolutionError

MIN_NODES = 5
MIN_PAD = 8


@dataclass(frozen=True)
class GridFunction:
    """Values on the uniform grid ``linspace(-1, 1, n)`` with ``n`` odd."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ResolutionError("grid values must be one-dimensional")
        if v.size < MIN_NODES or v.size % 2 == 0:
            raise ResolutionError(f"need an odd node count >= {MIN_NODES}, got {v.size}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, fn, n):
        return cls(fn(np.linspace(-1.0, 1.0, n)))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        return 2.0 / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.n)

    def has_compact_support(self, atol=1e-10) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return abs(self.values[0]) <= atol * scale and abs(self.values[-1]) <= atol * scale

    def derivative(self) -> np.ndarray:
        return d1(self.values, self.h)


def _require_support(f: GridFunction):
    if not f.has_compact_support():
        raise DomainError("grid function must vanish at both ends")


def hilbert_of_derivative(f: GridFunction) -> GridFunction:
    """``H f'`` at the nodes by exact product integration.

    ``f'`` is recovered with fourth-order differences and integrated as a
    piecewise-linear function against the Cauchy kernel.
    """
    _require_support(f)
    g = f.derivative()
    return GridFunction(kernels.hilbert_apply(g))


def hilbert_spectral_oracle(f: GridFunction, pad: int = 16) -> GridFunction:
    """Fourier-multiplier evaluation of ``H f'`` on a zero-padded periodic grid.

    Verification only.  The leading periodization error, a constant
    ``-pi (int f) / (3 P^2)`` for period ``P``, is added back analytically.
    """
    _require_support(f)
    if pad < MIN_PAD:
        warnings.warn(f"pad={pad} < {MIN_PAD}; periodization error may dominate",
                      AccuracyWarning, stacklevel=2)
    h = f.h
    N = sfft.next_fast_len(int(np.ceil(2.0 * pad / h)), real=True)
    period = N * h
    buf = np.zeros(N)
    buf[:f.n] = f.values
    xi = sfft.rfftfreq(N, d=h)
    out = sfft.irfft(2 * np.pi * xi * sfft.rfft(buf), n=N)[:f.n]
    integral = h * (f.values.sum() - 0.5 * (f.values[0] + f.values[-1]))
    return GridFunction(out + np.pi * integral / (3 * period ** 2))


def kernel_hilbert_part(x, s):
    """Closed form of ``(1/pi) p.v. int G_tau(x, tau) / (s - tau) dtau``.

    Removable singularities at ``s = x`` and ``s = +-1`` take their limits
    inside a ``1e-9`` guard radius.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    for a in (x, s):
        if not np.all(np.isfinite(a)) or np.any(np.abs(a) > 1.0 + 1e-12):
            raise DomainError("kernel arguments must lie in [-1, 1]")
    out = kernels.hilbert_part_numpy(x, s)
    return out[()] if out.ndim == 0 else out


def l2_norm(values, h):
    """Trapezoidal L2 norm of nodal values."""
    v = np.asarray(values, dtype=float) ** 2
    return float(np.sqrt(h * (v.sum() - 0.5 * (v[0] + v[-1]))))
