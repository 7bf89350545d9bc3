"""Uniform grids on 1D/2D/3D boxes and their discrete Fourier transforms.

Transform convention: a grid function f_j is paired with the spectrum
F_k = sum_j f_j exp(-i xi_k (x_j - x_0)) (numpy/scipy ``fft``), with angular
frequencies xi_k = 2 pi fftfreq(N, dx).  Multiplying F by a symbol p(xi) and
transforming back discretizes  int p(xi) f~(xi) e^{i x xi} dxi  with f~ the
transform normalized so that p = 1 is the identity.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
import scipy.fft as sfft

from .errors import AliasWarning, DomainError

_WORKERS = 1
ALIAS_THRESHOLD = 1e-8


def set_workers(n: int | None):
    """Thread count for multi-dimensional transforms (results are independent of it)."""
    global _WORKERS
    _WORKERS = max(1, int(n or 1))


def get_workers() -> int:
    return _WORKERS


def fftn(a, axes=None):
    return sfft.fftn(a, axes=axes, workers=_WORKERS)


def ifftn(a, axes=None):
    return sfft.ifftn(a, axes=axes, workers=_WORKERS)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on the box [origin, origin + L)^d with N points per axis."""

    values: np.ndarray
    L: float
    origin: float

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim not in (1, 2, 3) or len(set(v.shape)) != 1:
            raise DomainError("grid must be square with dimension 1, 2 or 3")
        n = v.shape[0]
        if n & (n - 1):
            raise DomainError("samples per axis must be a power of two")
        if not self.L > 0:
            raise DomainError("box extent must be positive")

    @classmethod
    def sample(
        cls,
        func: Callable[..., np.ndarray],
        L: float,
        N: int,
        d: int = 1,
        origin: float | None = None,
    ) -> "GridFunction":
        """Evaluate ``func`` on the grid; in d > 1 it receives one array per axis."""
        origin = -L / 2 if origin is None else origin
        x = origin + (L / N) * np.arange(N)
        if d == 1:
            vals = func(x)
        else:
            vals = func(*np.meshgrid(*([x] * d), indexing="ij"))
        return cls(np.asarray(vals), float(L), float(origin))

    @property
    def d(self) -> int:
        return self.values.ndim

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(self.N)

    def coords(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.x] * self.d), indexing="ij")

    @property
    def xi(self) -> np.ndarray:
        """Angular frequencies along one axis, in FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.N, self.dx)

    def xi_mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.xi] * self.d), indexing="ij")

    def abs_xi(self) -> np.ndarray:
        if self.d == 1:
            return np.abs(self.xi)
        return np.sqrt(sum(k**2 for k in self.xi_mesh()))

    def spectrum(self) -> np.ndarray:
        return fftn(self.values)

    def with_values(self, values) -> "GridFunction":
        return replace(self, values=np.asarray(values))

    def from_spectrum(self, F, real: bool | None = None) -> "GridFunction":
        v = ifftn(F)
        if real is None:
            real = not np.iscomplexobj(self.values)
        return self.with_values(v.real if real else v)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dx**self.d))

    def alias_fraction(self, F=None) -> float:
        """Share of spectral power above half the Nyquist frequency."""
        F = self.spectrum() if F is None else F
        p = np.abs(F) ** 2
        tot = p.sum()
        if tot == 0:
            return 0.0
        return float(p[self.abs_xi() > 0.5 * np.pi / self.dx].sum() / tot)

    def check_alias(self, F=None, threshold: float = ALIAS_THRESHOLD):
        frac = self.alias_fraction(F)
        if frac > threshold:
            warnings.warn(f"spectral mass {frac:.2e} above Nyquist/2", AliasWarning, stacklevel=3)
        return frac

    def apply_multiplier(self, m: np.ndarray, real: bool | None = None) -> "GridFunction":
        """Fourier multiplier m(xi) on the FFT-ordered frequency mesh."""
        F = self.spectrum()
        self.check_alias(F)
        return self.from_spectrum(F * m, real)

    def derivative(self, order: int = 1, axis: int = 0) -> "GridFunction":
        k = self.xi_mesh()[axis] if self.d > 1 else self.xi
        m = (1j * k) ** order
        if order % 2 == 1:
            m = np.where(np.abs(k) >= np.pi / self.dx - 1e-12, 0.0, m)
        return self.apply_multiplier(m)


def rel_l2(a, b) -> float:
    """||a - b|| / ||b|| for arrays or GridFunctions."""
    a = a.values if isinstance(a, GridFunction) else np.asarray(a)
    b = b.values if isinstance(b, GridFunction) else np.asarray(b)
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / nb) if nb > 0 else float(np.linalg.norm(a - b))
