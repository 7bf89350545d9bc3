"""Symbols, the energy operator (-Laplacian + m^2)^{1/2}, and Sobolev norms.

Symbols are evaluated on the FFT frequency mesh of a :class:`GridFunction`;
see :mod:`modflow.grid` for the transform convention.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy.special import binom

from .errors import AliasWarning, DomainError
from .flows import fit_slope
from .grid import GridFunction, rel_l2
from .report import VerificationReport

DEFAULT_GRID = {1: (4096, 64.0), 3: (128, 16.0)}


@dataclass(frozen=True)
class Symbol:
    """p(x, xi) with declared order m and type (rho, delta).

    ``func(x, xi)`` must broadcast.  In d = 3 both arguments carry a trailing
    axis of length 3.  For x-independent symbols ``x`` is passed as None.
    """

    func: Callable
    order: float
    rho: float = 1.0
    delta: float = 0.0
    d: int = 1
    x_dependent: bool = False

    def __post_init__(self):
        if not (0 <= self.delta <= self.rho <= 1 and self.delta < 1):
            raise DomainError("symbol type needs 0 <= delta <= rho <= 1, delta < 1")
        if self.d not in (1, 3):
            raise DomainError("symbols are supported in d = 1 and d = 3")

    def __call__(self, x, xi):
        return self.func(x if self.x_dependent else None, xi)

    def __mul__(self, other: "Symbol") -> "Symbol":
        return Symbol(
            lambda x, xi: self(x, xi) * other(x, xi),
            self.order + other.order,
            min(self.rho, other.rho),
            max(self.delta, other.delta),
            self.d,
            self.x_dependent or other.x_dependent,
        )


def _norm_xi(xi, d):
    return np.abs(xi) if d == 1 else np.linalg.norm(xi, axis=-1)


def energy_symbol(m: float, power: float = 0.5, d: int = 1) -> Symbol:
    """(|xi|^2 + m^2)^power, of order 2 power."""
    return Symbol(lambda x, xi: (_norm_xi(xi, d) ** 2 + m * m) ** power, 2 * power, d=d)


def derivative_symbol() -> Symbol:
    return Symbol(lambda x, xi: 1j * xi, 1.0)


def constant_symbol(c: float = 1.0, d: int = 1) -> Symbol:
    return Symbol(lambda x, xi: np.full(np.shape(_norm_xi(xi, d)), c), 0.0, d=d)


# ------------------------------------------------------------ symbol estimates


def _margins(p: Symbol, xi: np.ndarray, xs: np.ndarray, maxorder: int) -> dict[tuple[int, int], float]:
    hx = 1e-3
    out = {}
    X, XI = np.meshgrid(xs, xi, indexing="ij")
    hxi = 1e-3 * (1.0 + np.abs(XI))

    def ev(dx, dxi):
        return p(X + dx * hx, XI + dxi * hxi)

    base = ev(0, 0)
    derivs = {(0, 0): base}
    if maxorder >= 1:
        derivs[(1, 0)] = (ev(0, 1) - ev(0, -1)) / (2 * hxi)
        if p.x_dependent:
            derivs[(0, 1)] = (ev(1, 0) - ev(-1, 0)) / (2 * hx)
    if maxorder >= 2:
        derivs[(2, 0)] = (ev(0, 1) - 2 * base + ev(0, -1)) / hxi**2
        if p.x_dependent:
            derivs[(0, 2)] = (ev(1, 0) - 2 * base + ev(-1, 0)) / hx**2
            derivs[(1, 1)] = (ev(1, 1) - ev(1, -1) - ev(-1, 1) + ev(-1, -1)) / (4 * hx * hxi)
    for (a, b), v in derivs.items():
        w = (1.0 + np.abs(XI)) ** (-(p.order + p.delta * b - p.rho * a))
        out[(a, b)] = float(np.max(np.abs(v) * w))
    return out


def symbol_estimate_check(
    p: Symbol,
    maxorder: int = 2,
    xi_max: float = 1e3,
    x_grid: Sequence[float] | None = None,
) -> VerificationReport:
    """Weighted suprema |d_xi^a d_x^b p| (1+|xi|)^{-(m + delta b - rho a)}, a + b <= maxorder.

    Passes when every supremum is finite and grows by less than 10% when the
    probed frequency range is doubled.  One-dimensional symbols only.
    """
    if maxorder > 2:
        raise DomainError("maxorder must be at most 2")
    if p.d != 1:
        raise DomainError("symbol_estimate_check probes d = 1 symbols")
    xs = np.asarray(x_grid if x_grid is not None else ([0.0] if not p.x_dependent else np.linspace(-3, 3, 13)))

    def grid(top):
        g = np.geomspace(1e-3, top, 600)
        return np.concatenate([-g[::-1], [0.0], g])

    m1 = _margins(p, grid(xi_max), xs, maxorder)
    m2 = _margins(p, grid(2 * xi_max), xs, maxorder)
    rep = VerificationReport("psdo.symbol_estimate", meta={"order": p.order, "xi_max": xi_max})
    for key in sorted(m1):
        a, b = m1[key], m2[key]
        growth = (b - a) / a if a > 0 else (0.0 if b == 0 else math.inf)
        finite = math.isfinite(a) and math.isfinite(b)
        rep.add(f"margin_growth[a={key[0]},b={key[1]}]", growth if finite else math.inf, 0.0, 0.1, note=f"sup={a:.6g}")
        rep.data[f"margin[{key[0]},{key[1]}]"] = a
    return rep


# -------------------------------------------------------------- application


def _spectral_symbol(p: Symbol, f: GridFunction, x=None):
    if p.d != f.d:
        raise DomainError("symbol and grid dimensions differ")
    if f.d == 1:
        xi = f.xi
    else:
        xi = np.stack(f.xi_mesh(), axis=-1)
    return p(x, xi)


def apply_psdo(p: Symbol, f: GridFunction) -> GridFunction:
    """Discretization of  int p(x, xi) f~(xi) e^{i x xi} dxi."""
    F = f.spectrum()
    f.check_alias(F)
    if not p.x_dependent:
        return f.from_spectrum(F * _spectral_symbol(p, f), real=False)
    if f.d != 1:
        raise DomainError("x-dependent symbols are supported in d = 1")
    xi = f.xi
    x = f.x
    out = np.empty(f.N, dtype=complex)
    phase_x = x - f.origin
    for lo in range(0, f.N, 256):
        xs = x[lo : lo + 256]
        P = p(xs[:, None], xi[None, :])
        E = np.exp(1j * phase_x[lo : lo + 256, None] * xi[None, :])
        out[lo : lo + 256] = (P * E) @ F / f.N
    return f.with_values(out)


def real_part(g: GridFunction) -> GridFunction:
    return g.with_values(np.real(g.values))


# -------------------------------------------------------- energy expansions


@dataclass(frozen=True)
class ExpansionTerm:
    """coefficient * |xi|^power."""

    power: float
    coefficient: float

    def __call__(self, xi):
        a = np.abs(np.asarray(xi, float))
        if self.coefficient == 0.0:
            return np.zeros_like(a)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.coefficient * a**self.power
        return np.where(a > 0, v, 0.0) if self.power < 0 else v


@dataclass(frozen=True)
class AsymptoticExpansion:
    """Graded terms of (xi^2 + m^2)^{+-1/2} in one regime.

    In the ultrarelativistic regime the powers (the term orders) strictly
    decrease; the nonrelativistic series is a convergent Taylor series in
    increasing powers of |xi|.
    """

    terms: tuple[ExpansionTerm, ...]
    regime: str
    m: float
    inverse: bool = False

    @property
    def orders(self) -> list[float]:
        return [t.power for t in self.terms]

    def evaluate(self, xi, n_terms: int | None = None):
        ts = self.terms if n_terms is None else self.terms[:n_terms]
        out = np.zeros(np.shape(xi))
        for t in ts:
            out = out + t(xi)
        return out


def energy_expansion(m: float, N: int, regime: str = "ur", inverse: bool = False) -> AsymptoticExpansion:
    """First N + 1 terms of the expansion of (xi^2 + m^2)^{1/2} or its inverse.

    ur:  |xi|^{+-1} sum_k binom(+-1/2, k) (m^2/xi^2)^k
    nr:  m^{+-1}    sum_k binom(+-1/2, k) (xi^2/m^2)^k
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    if m < 0:
        raise DomainError("mass must be non-negative")
    a = -0.5 if inverse else 0.5
    terms = []
    for k in range(N + 1):
        c = float(binom(a, k))
        if regime == "ur":
            terms.append(ExpansionTerm(2 * a - 2 * k, c * m ** (2 * k) if k else c))
        elif regime == "nr":
            if m <= 0:
                raise DomainError("the nonrelativistic series needs m > 0")
            terms.append(ExpansionTerm(2 * k, c * m ** (2 * a - 2 * k)))
        else:
            raise DomainError("regime must be 'ur' or 'nr'")
    return AsymptoticExpansion(tuple(terms), regime, float(m), inverse)


def expansion_remainder(m: float, N: int, xi, inverse: bool = False, dps: int = 60) -> np.ndarray:
    """|(xi^2+m^2)^{+-1/2} - sum_{k<N} p_k(xi)| in extended precision (ur regime)."""
    a = mpmath.mpf(-1) / 2 if inverse else mpmath.mpf(1) / 2
    out = []
    with mpmath.workdps(dps):
        mm = mpmath.mpf(m)
        for x in np.atleast_1d(xi):
            x = mpmath.mpf(abs(float(x)))
            exact = (x * x + mm * mm) ** a
            part = sum(mpmath.binomial(a, k) * mm ** (2 * k) * x ** (2 * a - 2 * k) for k in range(N))
            out.append(float(abs(exact - part)))
    return np.array(out)


def expansion_remainder_order(
    m: float,
    N: int,
    xi_range: tuple[float, float] | None = None,
    inverse: bool = False,
    n_points: int = 24,
) -> float:
    """Log-log slope of the level-N remainder over ``xi_range``.

    Expected 1 - 2N for the energy, -1 - 2N for its inverse.  Returns -inf
    when the remainder vanishes identically (m = 0).
    """
    if xi_range is None:
        xi_range = (10.0 * max(m, 1e-300), 1000.0 * max(m, 1e-300)) if m > 0 else (1.0, 100.0)
    lo, hi = xi_range
    if m > 0 and lo <= 2 * m:
        raise DomainError("xi_range must lie in (2m, inf)")
    xi = np.geomspace(lo, hi, n_points)
    r = expansion_remainder(m, N, xi, inverse)
    if np.all(r == 0):
        return -math.inf
    return fit_slope(xi, r)


def _regime_weight(absxi, m, smooth):
    if not smooth or m == 0:
        return (absxi > m).astype(float)
    return 0.5 * (1.0 + np.tanh((absxi - m) / (0.1 * m)))


def apply_energy_truncated(
    f: GridFunction,
    m: float,
    N: int,
    regime_split: bool = True,
    inverse: bool = False,
    smooth: bool = False,
) -> GridFunction:
    """Apply the expansion with terms k = 0..N termwise as Fourier multipliers.

    With ``regime_split`` the ultrarelativistic series acts on the part of the
    spectrum with |xi| > m and the nonrelativistic one on |xi| < m.
    """
    F = f.spectrum()
    f.check_alias(F)
    a = f.abs_xi()
    ur = energy_expansion(m, N, "ur", inverse).evaluate(a)
    if regime_split and m > 0:
        w = _regime_weight(a, m, smooth)
        nr = energy_expansion(m, N, "nr", inverse).evaluate(a)
        mult = w * ur + (1.0 - w) * nr
    else:
        mult = ur
    return f.from_spectrum(F * mult)


def apply_energy(f: GridFunction, m: float, inverse: bool = False) -> GridFunction:
    p = energy_symbol(m, -0.5 if inverse else 0.5, f.d)
    out = apply_psdo(p, f)
    return out if np.iscomplexobj(f.values) else real_part(out)


# ---------------------------------------------------------- anti-locality


def anti_locality_probe(f: GridFunction, m: float, support: tuple[float, float]) -> float:
    """||(omega_m f) 1_{outside}|| / ||omega_m f|| for f supported in ``support`` (d = 1)."""
    g = apply_energy(f, m)
    nrm = g.l2_norm()
    if nrm == 0:
        return 0.0
    x = g.x
    outside = (x < support[0]) | (x > support[1])
    return float(np.sqrt(np.sum(np.abs(g.values[outside]) ** 2) * g.dx) / nrm)


def smooth_bump(x, a: float = -1.0, b: float = 1.0):
    """C-infinity bump exp(-1/(1 - u^2)) on (a, b), u the rescaled coordinate."""
    u = (2.0 * np.asarray(x, float) - (a + b)) / (b - a)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


# ---------------------------------------------------------------- Sobolev


def sobolev_norm(f: GridFunction, s: float) -> float:
    """(int (1 + |xi|^2)^s |f~(xi)|^2 dxi)^{1/2}, scaled so that s = 0 is the L2 norm."""
    F = f.spectrum()
    w = (1.0 + f.abs_xi() ** 2) ** s
    return float(np.sqrt(np.sum(w * np.abs(F) ** 2) * f.dx**f.d / f.N**f.d))


def probe_family(
    ks: Sequence[float],
    L: float = 64.0,
    N: int = 4096,
    support: tuple[float, float] = (-1.5, 1.5),
    origin: float | None = None,
) -> list[GridFunction]:
    """Bumps modulated by cos(k x); their spectra concentrate near |xi| = k."""
    c = 0.5 * (support[0] + support[1])
    return [
        GridFunction.sample(lambda x, k=k: smooth_bump(x, *support) * np.cos(k * (x - c)), L, N, origin=origin)
        for k in ks
    ]


def mapping_order_estimate(
    op: Callable[[GridFunction], GridFunction],
    s_list: Sequence[float] = (0.0, 1.0),
    probes: Sequence[GridFunction] | None = None,
    ks: Sequence[float] = (8, 12, 16, 24, 32, 48, 64),
) -> float:
    """Fit the order m for which ||op f||_{s-m} / ||f||_s stays bounded.

    For each s the log of ||op f_k||_s / ||f_k||_s is regressed on log k over
    the probe family; the slopes are averaged over ``s_list``.
    """
    probes = probe_family(ks) if probes is None else probes
    slopes = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasWarning)
        outs = [op(p) for p in probes]
    for s in s_list:
        r = [sobolev_norm(o, s) / sobolev_norm(p, s) for o, p in zip(outs, probes)]
        slopes.append(fit_slope(ks, r))
    return float(np.mean(slopes))


# ------------------------------------------------------------------- suite


def _gauss(L, N, x0=0.0, w=1.0):
    return GridFunction.sample(lambda x: np.exp(-((x - x0) ** 2) / (2 * w * w)), L, N)


def wavepacket(xi0: float, width: float = 6.0, L: float = 256.0, N: int = 4096) -> GridFunction:
    """Gaussian envelope times exp(i xi0 x): spectrum centered at xi0 with std 1/width."""
    return GridFunction.sample(lambda x: np.exp(-(x**2) / (2 * width**2) + 1j * xi0 * x), L, N)


def truncation_errors(m: float, xi0: float, Ns: Sequence[int], inverse: bool = False) -> list[float]:
    f = wavepacket(xi0, width=12.0 / max(m, 1.0))
    exact = apply_energy(f, m, inverse)
    return [rel_l2(apply_energy_truncated(f, m, n, inverse=inverse), exact) for n in Ns]


def composed_remainder_bound(m: float, N: int, xi_low: float) -> float:
    """Relative error bound for omega then omega^{-1}, both truncated after term N,
    on spectra supported in |xi| >= xi_low."""
    w = math.sqrt(xi_low**2 + m * m)
    r1 = expansion_remainder(m, N + 1, [xi_low])[0]
    r2 = expansion_remainder(m, N + 1, [xi_low], inverse=True)[0]
    return r1 / w + r2 * w + (r1 / w) * (r2 * w)


def run_suite(L: float = 64.0, N: int = 4096) -> VerificationReport:
    rep = VerificationReport("psdo", meta={"L": L, "N": N})
    g = _gauss(L, N)
    rep.add("identity_symbol", rel_l2(real_part(apply_psdo(constant_symbol(), g)), g), 0.0, 1e-14)
    d = real_part(apply_psdo(derivative_symbol(), g))
    rep.add("derivative_gaussian", rel_l2(d, g.with_values(-g.x * g.values)), 0.0, 1e-8)
    packet = wavepacket(2.0, width=800.0, L=16384.0, N=32768)
    w = apply_psdo(energy_symbol(1.0), packet)
    rep.add("stationary_symbol", rel_l2(w, packet.with_values(np.sqrt(5.0) * packet.values)), 0.0, 1e-3)
    pq = apply_psdo(energy_symbol(1.0) * derivative_symbol(), g)
    qp = apply_psdo(energy_symbol(1.0), apply_psdo(derivative_symbol(), g))
    rep.add("product_composition", rel_l2(pq, qp), 0.0, 1e-10)

    rep.extend(symbol_estimate_check(energy_symbol(1.0)), "estimate.omega_order1")
    wrong = symbol_estimate_check(Symbol(energy_symbol(1.0).func, 0.0))
    rep.add("estimate.omega_order0_fails", float(not wrong.passed), mode="bool", passed=not wrong.passed)
    one = symbol_estimate_check(constant_symbol())
    rep.add("estimate.constant_margin", abs(one.data["margin[0,0]"] - 1.0), 0.0, 1e-15)

    ex = energy_expansion(1.0, 3)
    rep.add("expansion.k2_coefficient", abs(ex.terms[2].coefficient + 0.125), 0.0, 1e-15)
    inv = energy_expansion(1.0, 3, inverse=True)
    rep.add("expansion.inverse_k2_coefficient", abs(inv.terms[2].coefficient - 0.375), 0.0, 1e-15)
    rep.resolved["inverse_series_k2"] = 0.375
    for n in range(1, 5):
        slope = expansion_remainder_order(1.0, n)
        rep.add(f"remainder_order.N{n}", slope, 1 - 2 * n, 0.05 * abs(1 - 2 * n), mode="range")
        slope = expansion_remainder_order(1.0, n, inverse=True)
        rep.add(f"remainder_order_inverse.N{n}", slope, -1 - 2 * n, 0.05 * abs(-1 - 2 * n), mode="range")
    rep.add("remainder_m0", 0.0 if expansion_remainder_order(0.0, 1) == -math.inf else 1.0, 0.0, 0.0)

    for xi0 in (5.0, 0.2):
        errs = truncation_errors(1.0, xi0, [1, 2, 3, 4])
        mono = all(b < a for a, b in zip(errs, errs[1:]))
        rep.add(f"truncation_monotone.xi0={xi0}", float(mono), mode="bool", passed=mono, note=str(["%.2e" % e for e in errs]))
    f = wavepacket(5.0)
    m0 = rel_l2(apply_energy_truncated(f, 0.0, 3), apply_energy(f, 0.0))
    rep.add("truncation_m0", m0, 0.0, 1e-10)
    fw = apply_energy_truncated(apply_energy_truncated(f, 1.0, 3), 1.0, 3, inverse=True)
    rep.add("omega_then_inverse", rel_l2(fw, f), 0.0, composed_remainder_bound(1.0, 3, 5.0 - 4.0 / 6.0))

    bump = GridFunction.sample(smooth_bump, L, N)
    frac = anti_locality_probe(bump, 1.0, (-1.0, 1.0))
    rep.add("anti_locality", frac, None, 1e-3, mode="ge")
    fine = GridFunction.sample(smooth_bump, L, 2 * N)
    frac2 = anti_locality_probe(fine, 1.0, (-1.0, 1.0))
    rep.add("anti_locality_refinement", abs(frac2 - frac) / frac, 0.0, 0.1)

    rep.add("sobolev_s0_is_L2", abs(sobolev_norm(g, 0.0) - g.l2_norm()) / g.l2_norm(), 0.0, 1e-12)
    ns = [sobolev_norm(g, s) for s in (-1.0, 0.0, 0.5, 1.0, 2.0)]
    mono = all(b >= a for a, b in zip(ns, ns[1:]))
    rep.add("sobolev_monotone_in_s", float(mono), mode="bool", passed=mono)
    deriv = mapping_order_estimate(lambda p: real_part(apply_psdo(derivative_symbol(), p)))
    rep.add("mapping_order.derivative", deriv, 1.0, 0.1, mode="range")
    om = mapping_order_estimate(lambda p: apply_energy(p, 1.0))
    rep.add("mapping_order.omega", om, 1.0, 0.1, mode="range")
    return rep
