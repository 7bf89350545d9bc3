"""Free scalar field kernels in 3+1 dimensions.

Two-point function, Pauli-Jordan commutator function, the detailed-balance
form of the KMS condition along boost orbits, and the radial Fourier
multipliers behind the massless/massive field comparison.

Radial momentum integrals of rotation invariant kernels are reduced with
int d^3p e^{ip.x} g(|p|) = (4 pi / r) int_0^inf p g(p) sin(pr) dp and
integrated panel-wise with Gauss-Legendre rules; the panels are shorter than
half a period of the fastest oscillation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.fft import dst, idst
from scipy.integrate import quad

from .errors import AliasWarning, DomainError, QuadratureFailure, WindowTooSmall
from .flows import fit_slope
from .geometry import W_R, as_points, contains
from .report import VerificationReport

TWO_PI = 2.0 * np.pi
# massless two-point constant: W = C0 / ((dt - i eps)^2 - r^2)
C0_MASSLESS = -1.0 / (4.0 * np.pi**2)
TAIL_RTOL = 1e-8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _panel_integral(h, P: float, freq: float) -> complex:
    """int_0^P h(p) dp with panels no longer than pi / (2 freq)."""
    width = min(1.0, 0.5 * np.pi / max(freq, 1e-12))
    n = max(1, int(math.ceil(P / width)))
    edges = np.linspace(0.0, P, n + 1)
    a, b = edges[:-1, None], edges[1:, None]
    p = 0.5 * (b - a) * _GL_X[None, :] + 0.5 * (a + b)
    w = 0.5 * (b - a) * _GL_W[None, :]
    return complex(np.sum(w * h(p)))


# ------------------------------------------------------------- two-point


@dataclass(frozen=True)
class TwoPointEvaluator:
    """W(x, y) = <Omega, phi(x) phi(y) Omega> with the i eps prescription dt -> dt - i eps."""

    m: float = 0.0
    epsilon: float = 1e-3

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("mass must be non-negative")
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")

    def __call__(self, x, y, method: str = "auto"):
        return two_point(self.m, x, y, self.epsilon, method)


def _separation(x, y):
    d = np.atleast_2d(as_points(x)) - np.atleast_2d(as_points(y))
    return d[:, 0], np.linalg.norm(d[:, 1:], axis=1)


def two_point_closed(dt, r, eps: float):
    tau = np.asarray(dt, float) - 1j * eps
    return C0_MASSLESS / (tau**2 - np.asarray(r, float) ** 2)


def two_point_radial(m: float, dt: float, r: float, eps: float, max_panels: int = 4_000_000) -> complex:
    """(1/(4 pi^2)) int_0^inf p^2 sinc(pr) / omega e^{-i omega (dt - i eps)} dp, adaptive cutoff."""

    def h(p):
        w = np.sqrt(p * p + m * m)
        return p * p * np.sinc(p * r / np.pi) / w * np.exp(-eps * w - 1j * w * dt)

    freq = r + abs(dt) + 1.0
    P = 40.0 / eps
    while True:
        val = _panel_integral(h, P, freq) / (4 * np.pi**2)
        # |integrand| <= min(p, 1/r) e^{-eps p}
        tail = math.exp(-eps * P) * min((P / eps + 1 / eps**2), 1.0 / (eps * r) if r > 0 else math.inf)
        tail /= 4 * np.pi**2
        if tail <= TAIL_RTOL * abs(val):
            return val
        P *= 2.0
        if P * freq / (0.5 * np.pi) > max_panels:
            raise QuadratureFailure(f"tail {tail:.2e} above {TAIL_RTOL:g} relative at cutoff {P:g}")


def two_point(m: float, x, y, eps: float = 1e-3, method: str = "auto"):
    """Two-point function for one pair or for batches of pairs (arrays of shape (n, 4))."""
    if not eps > 0:
        raise DomainError("epsilon must be positive")
    single = np.ndim(x) == 1 and np.ndim(y) == 1
    dt, r = _separation(x, y)
    if method == "closed" or (method == "auto" and m == 0):
        if m != 0:
            raise DomainError("closed form only for m = 0")
        out = two_point_closed(dt, r, eps)
    else:
        out = np.array([two_point_radial(m, a, b, eps) for a, b in zip(dt, r)])
    return complex(out[0]) if single else out


# ---------------------------------------------------------- Pauli-Jordan


@dataclass(frozen=True)
class PauliJordanEvaluator:
    """Delta_m(t, r) with a Gaussian momentum regulator exp(-(eps p)^2)."""

    m: float = 0.0
    epsilon: float = 0.05

    def __call__(self, t, r):
        return pauli_jordan(self.m, t, r, self.epsilon)


def pauli_jordan(m: float, t, r, eps: float = 0.05):
    """Delta_m(t, r) = -(2 pi)^{-3} int d^3p sin(omega t)/omega e^{ip.x}, regulated.

    Radial form -(1/(2 pi^2)) int_0^inf p^2 sinc(pr) sin(omega t)/omega e^{-(eps p)^2} dp.
    """
    if m < 0 or not eps > 0:
        raise DomainError("need m >= 0 and eps > 0")
    scalar = np.ndim(t) == 0 and np.ndim(r) == 0
    t, r = np.broadcast_arrays(np.asarray(t, float), np.asarray(r, float))
    P = 6.5 / eps
    out = np.empty(t.shape)
    for idx in np.ndindex(t.shape):
        tt, rr = float(t[idx]), float(r[idx])
        if tt == 0.0:
            out[idx] = 0.0
            continue

        def h(p, tt=tt, rr=rr):
            w = np.sqrt(p * p + m * m)
            return p * p * np.sinc(p * rr / np.pi) * np.sin(w * tt) / w * np.exp(-((eps * p) ** 2))

        out[idx] = -_panel_integral(h, P, rr + abs(tt) + 1.0).real / (2 * np.pi**2)
    return float(out) if scalar else out


def _d2(f, x, h):
    """Sixth-order central second derivative."""
    c = (1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90)
    return sum(ci * f(x + (i - 3) * h) for i, ci in enumerate(c)) / h**2


def kg_residual(func, m: float, t, r, h: float = 5e-3) -> float:
    """Relative residual of (box + m^2) on a radial function u(t, r) at points (t, r).

    Uses box = d_t^2 - (1/r) d_r^2 (r .) and normalizes by the size of the
    individual terms.
    """
    t = np.atleast_1d(np.asarray(t, float))
    r = np.atleast_1d(np.asarray(r, float))
    u = lambda tt, rr: rr * func(tt, rr)
    utt = _d2(lambda s: u(s, r), t, h)
    urr = _d2(lambda s: u(t, s), r, h)
    u0 = u(t, r)
    res = utt - urr + m * m * u0
    scale = np.max(np.abs(utt)) + np.max(np.abs(urr)) + m * m * np.max(np.abs(u0))
    return float(np.max(np.abs(res)) / scale)


# ------------------------------------------------------------------ KMS


def boost_points(s, x):
    """Lambda_s x for the x^1 boost; s an array, x a single 4-vector."""
    x = np.asarray(x, float)
    s = np.asarray(s, float)
    ch, sh = np.cosh(s), np.sinh(s)
    X = np.empty(s.shape + (4,))
    X[..., 0] = ch * x[0] + sh * x[1]
    X[..., 1] = sh * x[0] + ch * x[1]
    X[..., 2] = x[2]
    X[..., 3] = x[3]
    return X


def orbit_correlator(s, x, y, eps: float):
    """G(s) = W(Lambda_s x, y) with the massless closed form."""
    X = boost_points(s, x)
    d = X - np.asarray(y, float)
    return two_point_closed(d[..., 0], np.linalg.norm(d[..., 1:], axis=-1), eps)


def kms_boost_check(
    x,
    y,
    T_window: float = 40.0,
    N_samples: int | None = None,
    eps: float = 1e-3,
    E_range: tuple[float, float] = (0.3, 2.0),
    n_E: int = 18,
    leak_tol: float = 1e-2,
) -> VerificationReport:
    """Detailed balance |G^(E)| = e^{beta E} |G^(-E)| with G^(E) = int G(s) e^{iEs} ds.

    beta is fitted by least squares of log(|G^(E)|/|G^(-E)|) against E and
    compared with 2 pi (boost-parameter units).
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    for p in (x, y):
        if not bool(contains(W_R, p)):
            raise DomainError("x and y must lie in W_R")
    if N_samples is None:
        N_samples = 1 << int(math.ceil(math.log2(2 * T_window / (eps / 8))))
    ds = 2 * T_window / N_samples
    s = -T_window + ds * np.arange(N_samples)
    g = orbit_correlator(s, x, y, eps)
    peak = float(np.max(np.abs(g)))
    leak = float(max(abs(g[0]), abs(g[-1])) / peak)
    if leak > leak_tol:
        raise WindowTooSmall(f"edge/peak ratio {leak:.2e} exceeds {leak_tol:g}")
    E = TWO_PI * np.fft.fftfreq(N_samples, ds)
    Gh = np.fft.ifft(g) * N_samples * ds * np.exp(-1j * E * T_window)
    Es = np.linspace(*E_range, n_E)
    ip = np.array([int(np.argmin(np.abs(E - e))) for e in Es])
    im = np.array([int(np.argmin(np.abs(E + e))) for e in Es])
    Ep = E[ip]
    ratio = np.log(np.abs(Gh[ip]) / np.abs(Gh[im]))
    beta, icpt = np.polyfit(Ep, ratio, 1)
    rep = VerificationReport("freefield.kms", meta={"x": x.tolist(), "y": y.tolist(), "eps": eps, "T_window": T_window, "N": N_samples})
    rep.resolved["kms_beta"] = float(beta)
    rep.add("beta=2pi", float(beta), TWO_PI, 0.02 * TWO_PI, mode="range", note=f"beta/2pi={beta / TWO_PI:.6f}")
    rep.add("edge_decay", leak, 0.0, leak_tol)
    X = boost_points(s[::64], x)
    d = y[None, :] - X
    swap = two_point_closed(d[:, 0], np.linalg.norm(d[:, 1:], axis=1), eps)
    rep.add("swap_conjugates", float(np.max(np.abs(swap - np.conj(g[::64]))) / peak), 0.0, 1e-12)
    rep.data["samples"] = (s, g)
    rep.data["spectrum"] = (Ep, Gh[ip], Gh[im])
    return rep


def unruh_from_kms(beta_s: float, a: float) -> float:
    """Temperature in proper time for acceleration a, with s = a tau."""
    return a / beta_s


# ------------------------------------------------------- radial transforms


@dataclass(frozen=True)
class RadialFunction:
    """Samples f(r_j) of a radial function on r_j = (j + 1) dr, j = 0..N-1."""

    values: np.ndarray
    dr: float

    @classmethod
    def sample(cls, func, r_max: float = 12.8, N: int = 255) -> "RadialFunction":
        dr = r_max / (N + 1)
        r = dr * np.arange(1, N + 1)
        return cls(np.asarray(func(r), float), dr)

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def r(self) -> np.ndarray:
        return self.dr * np.arange(1, self.N + 1)

    @property
    def k(self) -> np.ndarray:
        return np.pi * np.arange(1, self.N + 1) / ((self.N + 1) * self.dr)

    def with_values(self, v) -> "RadialFunction":
        return RadialFunction(np.asarray(v, float), self.dr)

    def transform(self) -> np.ndarray:
        """F(k) = (4 pi / k) int r f(r) sin(kr) dr on the DST-I frequencies."""
        return 4 * np.pi / self.k * self.dr * 0.5 * dst(self.r * self.values, type=1)

    def norm(self) -> float:
        """3D L2 norm."""
        return float(np.sqrt(4 * np.pi * np.sum(self.r**2 * self.values**2) * self.dr))

    def apply_multiplier(self, mult: np.ndarray) -> "RadialFunction":
        F = dst(self.r * self.values, type=1)
        p = F**2
        if p.sum() > 0 and p[self.N // 2 :].sum() / p.sum() > 1e-8:
            warnings.warn("radial spectrum not resolved", AliasWarning, stacklevel=2)
        return self.with_values(idst(mult * F, type=1) / self.r)


def rel_l2_radial(a: RadialFunction, b: RadialFunction) -> float:
    return a.with_values(a.values - b.values).norm() / b.norm()


def mass_shift_multiplier(k, m: float):
    """|k|^{1/2} / (k^2 + m^2)^{1/4}."""
    k = np.abs(np.asarray(k, float))
    return np.sqrt(k) / (k * k + m * m) ** 0.25


def mass_shift_exact(f: RadialFunction, m: float, inverse: bool = False) -> RadialFunction:
    """mu_0^{1/2} mu_m^{-1/2} f through the discrete radial sine transform."""
    if m < 0:
        raise DomainError("mass must be non-negative")
    mult = mass_shift_multiplier(f.k, m)
    return f.apply_multiplier(1.0 / mult if inverse else mult)


def R_kernel(r, m: float):
    """R(r) = r^{3/2}/(r^2 + m^2)^{1/4} - r, written to avoid cancellation."""
    r = np.asarray(r, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = m * m / (r * r) if m > 0 else 0.0 * r
        out = r * np.expm1(-0.25 * np.log1p(q))
    return np.where(r > 0, out, 0.0)


# alternative normalization, kept for comparison with the calibrated value
F_REST_C_ALT = -4.0 * np.pi
F_REST_C_DERIVED = 1.0 / (2.0 * np.pi**2)


def _radial_fourier_quad(f: RadialFunction, k: np.ndarray, n_per_panel: int = 16) -> np.ndarray:
    """(4 pi / k) int_0^rmax s f(s) sin(ks) ds by Gauss-Legendre on a cubic spline of f."""
    from scipy.interpolate import make_interp_spline

    s_nodes = np.concatenate([[0.0], f.r])
    # f is even in r, so f(0) is extrapolated with zero slope
    f0 = (4 * f.values[0] - f.values[1]) / 3
    spl = make_interp_spline(s_nodes, np.concatenate([[f0], f.values]), k=3)
    s_max = f.r[-1]
    n = int(math.ceil(s_max * (np.max(k) + 1.0) / np.pi)) + 1
    edges = np.linspace(0.0, s_max, n + 1)
    a, b = edges[:-1, None], edges[1:, None]
    s = (0.5 * (b - a) * _GL_X[None, :] + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * _GL_W[None, :]).ravel()
    sf = w * s * spl(s)
    return 4 * np.pi / k * (np.sin(np.outer(k, s)) @ sf)


def f_rest_kernel(f: RadialFunction, m: float, c: float = F_REST_C_DERIVED, k_max: float | None = None) -> RadialFunction:
    """c int_0^inf dr R(r) int d^3y sin(r|x - y|)/|x - y| f(y).

    The y-integral reduces to F(r) sin(r|x|)/|x| with F the radial Fourier
    transform; F is computed by Gauss-Legendre quadrature and the outer
    oscillatory r-integral by QUADPACK's sine-weighted rule.
    """
    if m < 0:
        raise DomainError("mass must be non-negative")
    if m == 0:
        return f.with_values(np.zeros(f.N))
    from scipy.interpolate import make_interp_spline

    if k_max is None:
        # cutoff where the spectrum has decayed to the interpolation noise floor
        kk = np.linspace(1e-6, float(f.k[-1]), 2049)
        F = np.abs(_radial_fourier_quad(f, kk))
        above = np.nonzero(F > 1e-9 * F.max())[0]
        k_max = float(kk[min(above[-1] + 1, len(kk) - 1)])
    kk = np.linspace(1e-6, k_max, 4097)
    F = _radial_fourier_quad(f, kk)
    Fs = make_interp_spline(kk, F, k=5)
    if abs(F[-1]) > 1e-8 * np.max(np.abs(F)):
        raise QuadratureFailure("radial spectrum not decayed at the cutoff")
    g = lambda q: float(R_kernel(q, m) * Fs(q))
    scale = float(np.trapezoid(np.abs(R_kernel(kk, m) * F), kk))
    out = np.empty(f.N)
    for j, x in enumerate(f.r):
        val, err = quad(g, 0.0, k_max, weight="sin", wvar=x, limit=400)
        if err > 1e-7 * scale:
            raise QuadratureFailure(f"oscillatory r-integral error {err:.2e} at |x|={x:g}")
        out[j] = c * val / x
    return f.with_values(out)


def calibrate_f_rest(f: RadialFunction, m: float) -> float:
    """Least-squares c with f + c K f = mass_shift_exact(f) in the radial L2(r^2 dr) sense."""
    K = f_rest_kernel(f, m, c=1.0).values
    target = mass_shift_exact(f, m).values - f.values
    w = f.r**2
    return float(np.sum(w * K * target) / np.sum(w * K * K))


# (width, mass) pairs
F_REST_CORPUS = ((0.7, 1.0), (1.5, 0.5), (1.0, 2.0), (0.5, 0.5))


def radial_gaussian(width: float, r_max: float = 51.2, N: int = 1023) -> RadialFunction:
    return RadialFunction.sample(lambda r: np.exp(-(r**2) / (2 * width**2)), r_max, N)


# ------------------------------------------------------------ Bogoliubov


@dataclass(frozen=True)
class BogoliubovKernel:
    """beta_pm = (q +- 1/q)/2 with q = mu_2^{-1/2} mu_1^{1/2}, mu_i = (k^2 + m_i^2)^{1/2}."""

    m1: float
    m2: float

    def q(self, k):
        k = np.asarray(k, float)
        return ((k * k + self.m1**2) / (k * k + self.m2**2)) ** 0.25

    def beta(self, sign: str, k):
        q = self.q(k)
        if sign == "+":
            return 0.5 * (q + 1.0 / q)
        if sign == "-":
            return 0.5 * (q - 1.0 / q)
        raise DomainError("sign must be '+' or '-'")


def bogoliubov_beta_apply(sign: str, f: RadialFunction, m1: float, m2: float) -> RadialFunction:
    return f.apply_multiplier(BogoliubovKernel(m1, m2).beta(sign, f.k))


def hs_probe(m1: float, m2: float, window: float, r_max: float = 25.6, N: int = 511) -> float:
    """Hilbert-Schmidt norm of chi_window beta_- on the s-wave radial grid.

    In the variable u = r f the radial transform is orthogonal, so the norm is
    (sum_{j,l} chi(r_j)^2 Q_{jl}^2 beta_-(k_l)^2)^{1/2} with Q the normalized
    DST-I matrix; chi is the Gaussian window exp(-r^2/(2 window^2)).
    """
    dr = r_max / (N + 1)
    j = np.arange(1, N + 1)
    r = dr * j
    k = np.pi * j / ((N + 1) * dr)
    Q2 = (2.0 / (N + 1)) * np.sin(np.pi * np.outer(j, j) / (N + 1)) ** 2
    chi2 = np.exp(-(r**2) / window**2)
    b2 = BogoliubovKernel(m1, m2).beta("-", k) ** 2
    return float(np.sqrt(chi2 @ Q2 @ b2))


# ------------------------------------------------------------------ suite


def run_suite(rng: np.random.Generator, quick: bool = False, kms_eps: float = 1e-3, kms_window: float = 40.0) -> VerificationReport:
    rep = VerificationReport("freefield")

    # two-point function
    eps = 0.1
    pairs = rng.uniform(-1.5, 1.5, size=(6, 2, 4))
    herm = 0.0
    for m in (0.0, 1.0):
        for x, y in pairs[:3]:
            a = two_point(m, x, y, eps, method="quad" if m else "closed")
            b = two_point(m, y, x, eps, method="quad" if m else "closed")
            herm = max(herm, abs(a - np.conj(b)) / abs(a))
    rep.add("two_point.hermiticity", herm, 0.0, 1e-10)
    x, y = np.array([0.3, 0.2, -0.4, 0.1]), np.array([0.3, -0.6, 0.5, 0.2])
    rep.add("two_point.equal_time_imag", abs(two_point(1.0, x, y, eps).imag), 0.0, 1e-12)
    worst = 0.0
    for x, y in pairs:
        q = two_point(0.0, x, y, eps, method="quad")
        c = two_point(0.0, x, y, eps, method="closed")
        worst = max(worst, abs(q - c) / abs(c))
    rep.add("two_point.closed_vs_quadrature", worst, 0.0, 1e-6)
    rep.resolved["two_point_massless_constant"] = C0_MASSLESS
    pts = np.column_stack([rng.uniform(-1, 1, 40), rng.uniform(-1, 1, (40, 3))])
    Wm = two_point(0.0, np.repeat(pts, len(pts), 0), np.tile(pts, (len(pts), 1)), eps).reshape(len(pts), len(pts))
    ev = np.linalg.eigvalsh(0.5 * (Wm + Wm.conj().T))
    rep.add("two_point.positivity", float(ev.min() / ev.max()), None, -1e-10, mode="ge")
    for m in (0.0, 1.0):
        ts, rs = np.array([0.2, 0.3]), np.array([1.0, 1.3])

        def w(tt, rr, m=m):
            return np.array([two_point_radial(m, a, b, eps).real for a, b in np.broadcast(tt, rr)]) if m else two_point_closed(tt, rr, eps).real

        rep.add(f"two_point.kg_residual m={m:g}", kg_residual(w, m, ts, rs, h=1e-2), 0.0, 1e-4)

    # Pauli-Jordan
    pe = 0.05
    rep.add("pauli_jordan.equal_time", float(np.max(np.abs(pauli_jordan(1.0, 0.0, np.linspace(0.1, 3, 7), pe)))), 0.0, 1e-8)
    rep.add("pauli_jordan.spacelike_(0.5,2)", abs(pauli_jordan(1.0, 0.5, 2.0, pe)), 0.0, 1e-6)
    for m in (0.0, 1.0):
        tt = np.array([0.3, 0.6, 1.0, 1.2])
        rr = tt + 0.5
        leak = float(np.max(np.abs(pauli_jordan(m, tt, rr, pe))))
        inside = float(np.max(np.abs(pauli_jordan(m, tt, tt, pe))))
        rep.add(f"pauli_jordan.causal_leak m={m:g}", leak / inside, 0.0, 1e-5)
        anti = abs(pauli_jordan(m, -0.7, 0.4, pe) + pauli_jordan(m, 0.7, 0.4, pe))
        rep.add(f"pauli_jordan.antisymmetry m={m:g}", anti, 0.0, 1e-14)
        t0, r0 = (1.0, 1.0) if m == 0 else (1.0, 0.5)
        pts_t = t0 + np.array([-0.03, 0.0, 0.03])
        pts_r = r0 + np.array([0.02, -0.02, 0.0])
        kg = kg_residual(lambda a, b, m=m: pauli_jordan(m, a, b, pe), m, pts_t, pts_r, h=5e-3)
        rep.add(f"pauli_jordan.kg_residual m={m:g}", kg, 0.0, 1e-4)

    # KMS along boost orbits
    configs = [((0, 1, 0, 0), (0, 1, 0.5, 0)), ((0, 1, 0, 0), (0, 2, 0, 0)), ((0.2, 1, 0, 0.3), (-0.1, 1.5, 0.2, 0))]
    if quick:
        configs = configs[:1]
    betas = []
    for x, y in configs:
        for e in (kms_eps, kms_eps / 2):
            r = kms_boost_check(x, y, T_window=kms_window, eps=e)
            betas.append(r.resolved["kms_beta"])
            rep.extend(r, f"kms x={x} y={y} eps={e:g}")
    rep.resolved["kms_beta"] = float(np.mean(betas))
    rep.add("kms.beta_spread", float(np.ptp(betas) / TWO_PI), 0.0, 0.02)
    rep.add("kms.unruh_a=1", unruh_from_kms(rep.resolved["kms_beta"], 1.0), 1.0 / TWO_PI, 0.02 / TWO_PI, mode="range")

    # mass shift and kernel
    f = radial_gaussian(1.0)
    rep.add("mass_shift.m=0_identity", float(np.max(np.abs(mass_shift_exact(f, 0.0).values - f.values))), 0.0, 1e-12)
    rep.add("mass_shift.value_at_k=m", abs(float(mass_shift_multiplier(1.7, 1.7)) - 2 ** -0.25), 0.0, 1e-15)
    back = mass_shift_exact(mass_shift_exact(f, 1.0), 1.0, inverse=True)
    rep.add("mass_shift.inverse_roundtrip", rel_l2_radial(back, f), 0.0, 1e-8)
    rep.add("f_rest.m=0_zero", float(np.max(np.abs(f_rest_kernel(f, 0.0).values))), 0.0, 0.0)
    c = calibrate_f_rest(f, 1.0)
    rep.resolved["f_rest_c"] = c
    rep.resolved["f_rest_c_over_minus_4pi"] = c / F_REST_C_ALT
    rep.add("f_rest.c_vs_1/(2pi^2)", abs(c / F_REST_C_DERIVED - 1.0), 0.0, 1e-3)
    corpus = F_REST_CORPUS[:2] if quick else F_REST_CORPUS
    worst = 0.0
    for width, m in corpus:
        g = radial_gaussian(width)
        worst = max(worst, rel_l2_radial(g.with_values(g.values + f_rest_kernel(g, m, c).values), mass_shift_exact(g, m)))
    rep.add("f_rest.corpus_rel_l2", worst, 0.0, 1e-3)

    # Bogoliubov
    k = np.geomspace(1e-3, 1e3, 200)
    bk = BogoliubovKernel(0.3, 1.7)
    rep.add("bogoliubov.identity", float(np.max(np.abs(bk.beta("+", k) ** 2 - bk.beta("-", k) ** 2 - 1))), 0.0, 1e-12)
    same = BogoliubovKernel(1.0, 1.0)
    rep.add("bogoliubov.equal_masses", float(np.max(np.abs(same.beta("-", k))) + np.max(np.abs(same.beta("+", k) - 1))), 0.0, 0.0)
    kk = np.geomspace(50, 500, 10)
    slope = fit_slope(kk, np.abs(BogoliubovKernel(0.0, 1.0).beta("-", kk)))
    rep.add("bogoliubov.beta_minus_decay", slope, -2.0, 0.05, mode="range")
    hs = [hs_probe(0.0, 1.0, w) for w in (4.0, 2.0, 1.0, 0.5)]
    rep.data["hs_probe_window"] = hs
    ok = bool(np.all(np.diff(hs) < 0))
    rep.add("bogoliubov.hs_decreasing", float(ok), mode="bool", passed=ok)
    ref = [hs_probe(0.0, 1.0, 1.0, N=n) for n in (255, 511, 1023)]
    rep.resolved["hs_probe_refinement"] = ref
    return rep
