"""Geometric modular flows of the wedge, forward cone and unit double cone.

Point flows are parametrized by the boost rapidity s = 2 pi t.  Test
function actions and their generators are oriented so that

    d/ds flow_testfunction(kind, s, f)(x) at s = 0  ==  generator_apply(kind, f, x)

which is what :func:`generator_vs_flow` checks by central differences.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .conformal import boost_matrix, projected_rotation
from .errors import DomainError, SingularPoint
from .geometry import D1, E1, V_PLUS, W_R, Region, as_points, contains, sample_region, to_lightcone
from .report import VerificationReport

TWO_PI = 2.0 * np.pi


class FlowKind(enum.Enum):
    WEDGE = "wedge"
    FORWARD_CONE = "cone"
    DOUBLE_CONE = "doublecone"

    @classmethod
    def parse(cls, name) -> "FlowKind":
        if isinstance(name, cls):
            return name
        aliases = {"forwardcone": "cone", "doublecone_unit": "doublecone", "doubleconeunit": "doublecone"}
        key = str(name).lower().replace("-", "").replace("_", "")
        key = aliases.get(key, key)
        for k in cls:
            if k.value == key:
                return k
        raise DomainError(f"unknown flow kind {name!r}")

    @property
    def region(self) -> Region:
        return {FlowKind.WEDGE: W_R, FlowKind.FORWARD_CONE: V_PLUS, FlowKind.DOUBLE_CONE: D1}[self]


def s_from_t(t):
    return TWO_PI * np.asarray(t, float)


def t_from_s(s):
    return np.asarray(s, float) / TWO_PI


def hl_lightcone(s: float, u, eps_sing: float = 1e-12) -> np.ndarray:
    """u -> (1 + u - e^{-s}(1 - u)) / (1 + u + e^{-s}(1 - u)), applied to x_plus and x_minus."""
    u = np.asarray(u, float)
    e = np.exp(-s)
    den = 1.0 + u + e * (1.0 - u)
    if np.any(np.abs(den) < eps_sing):
        raise SingularPoint("Hislop-Longo denominator vanishes")
    return (1.0 + u - e * (1.0 - u)) / den


def hl_denominator(s: float, x) -> np.ndarray:
    """N(s) = x0 sinh s + (1 + (x,x)) cosh s / 2 + (1 - (x,x)) / 2."""
    x = as_points(x)
    q = x[..., 0] ** 2 - np.sum(x[..., 1:] ** 2, axis=-1)
    return x[..., 0] * np.sinh(s) + 0.5 * (1.0 + q) * np.cosh(s) + 0.5 * (1.0 - q)


def flow_point(kind, s: float, x, eps_sing: float = 1e-12) -> np.ndarray:
    kind = FlowKind.parse(kind)
    x = as_points(x)
    if kind is FlowKind.WEDGE:
        return x @ boost_matrix(s).T
    if kind is FlowKind.FORWARD_CONE:
        return np.exp(s) * x
    if np.any(np.abs(hl_denominator(s, x)) < eps_sing):
        raise SingularPoint("N(s) vanishes")
    lc = to_lightcone(x)
    xp = hl_lightcone(s, lc.x_plus, eps_sing)
    xm = hl_lightcone(s, lc.x_minus, eps_sing)
    out = np.empty_like(x)
    out[..., 0] = 0.5 * (xp + xm)
    r = 0.5 * (xp - xm)
    d = np.where(np.isfinite(lc.direction), lc.direction, 0.0)
    out[..., 1:] = r[..., None] * d
    return out


def flow_point_conjugated(s: float, x) -> np.ndarray:
    """Double-cone flow as the projected T41(pi/2) T10(s) T41(pi/2)^-1."""
    return projected_rotation("T04", s, x)


@dataclass(frozen=True)
class ScalarTestFunction:
    """Real function on spacetime, evaluated on arrays of shape (..., 4)."""

    func: Callable[[np.ndarray], np.ndarray]
    support: Region | None = None

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.func(as_points(x)), float)


def gaussian_bump(center, width: float, support: Region | None = None) -> ScalarTestFunction:
    """exp(-|x - center|^2 / (2 width^2)) with the Euclidean norm."""
    c = as_points(center)

    def f(x):
        return np.exp(-np.sum((x - c) ** 2, axis=-1) / (2.0 * width**2))

    return ScalarTestFunction(f, support)


def cocycle_gamma(x0, x3, s):
    """gamma = 2^6 (1 + z+ + e^{-s}(1 - z+))^{-3} (1 - z- + e^{s}(1 + z-))^{-3}, z_pm = x0 pm x3."""
    zp = np.asarray(x0) + np.asarray(x3)
    zm = np.asarray(x0) - np.asarray(x3)
    a = 1.0 + zp + np.exp(-s) * (1.0 - zp)
    b = 1.0 - zm + np.exp(s) * (1.0 + zm)
    return 64.0 / (a * b) ** 3


def flow_testfunction(kind, s: float, f: ScalarTestFunction) -> ScalarTestFunction:
    """Modular action on test functions.

    wedge:       f(Lambda_s x)
    cone:        e^{-3s} f(e^{-s} x)            (the f_{-s} orientation)
    double cone: gamma(x0, x3, -s) f(x(-s))
    """
    kind = FlowKind.parse(kind)
    if kind is FlowKind.WEDGE:
        L = boost_matrix(s)
        return ScalarTestFunction(lambda x: f(x @ L.T), f.support)
    if kind is FlowKind.FORWARD_CONE:
        k = np.exp(-s)
        return ScalarTestFunction(lambda x: k**3 * f(k * x), f.support)

    def g(x):
        return cocycle_gamma(x[..., 0], x[..., 3], -s) * f(flow_point(kind, -s, x))

    return ScalarTestFunction(g, f.support)


def _grad(f: ScalarTestFunction, x: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central differences along the four coordinate axes."""
    out = np.empty_like(x)
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        out[..., mu] = (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h)
    return out


def generator_apply(kind, f: ScalarTestFunction, x, h: float = 1e-4) -> np.ndarray:
    """Infinitesimal generator of :func:`flow_testfunction` applied to f at x.

    wedge:       x1 d0 f + x0 d1 f
    cone:        -(3 + x^mu d_mu) f
    double cone: 3 x0 f + (-1 + x0^2 + |x|^2)/2 d0 f + x0 x^i d_i f
    """
    kind = FlowKind.parse(kind)
    x = as_points(x)
    g = _grad(f, x, h)
    if kind is FlowKind.WEDGE:
        return x[..., 1] * g[..., 0] + x[..., 0] * g[..., 1]
    if kind is FlowKind.FORWARD_CONE:
        return -(3.0 * f(x) + np.sum(x * g, axis=-1))
    r2 = np.sum(x[..., 1:] ** 2, axis=-1)
    return (
        3.0 * x[..., 0] * f(x)
        + 0.5 * (-1.0 + x[..., 0] ** 2 + r2) * g[..., 0]
        + x[..., 0] * np.sum(x[..., 1:] * g[..., 1:], axis=-1)
    )


def variant_cone_generator(f: ScalarTestFunction, x, h: float = 1e-4) -> np.ndarray:
    """(-3 + x^mu d_mu) f, kept for comparison with the oriented generator."""
    x = as_points(x)
    return -3.0 * f(x) + np.sum(x * _grad(f, x, h), axis=-1)


def fit_slope(xs, ys) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


def generator_vs_flow(kind, f: ScalarTestFunction, x, h: float = 0.05, gen_h: float = 1e-4) -> VerificationReport:
    """Compare (f_h - f_{-h})/(2h) with the generator at h, h/2, h/4."""
    if not 0 < h <= 0.1:
        raise DomainError("h must lie in (0, 0.1]")
    kind = FlowKind.parse(kind)
    x = as_points(x)
    gen = generator_apply(kind, f, x, gen_h)
    hs = [h, h / 2, h / 4]
    errs = []
    for hh in hs:
        fd = (flow_testfunction(kind, hh, f)(x) - flow_testfunction(kind, -hh, f)(x)) / (2 * hh)
        errs.append(float(np.max(np.abs(fd - gen))))
    rep = VerificationReport(f"modflow.generator.{kind.value}", meta={"h": hs})
    rep.data["errors"] = errs
    scale = float(np.max(np.abs(gen))) if gen.size else 0.0
    if max(errs) <= 1e-13 * max(1.0, scale):
        rep.add("discrepancy", max(errs), 0.0, 1e-12, note="flow and generator both vanish")
        return rep
    slope = fit_slope(hs, errs)
    rep.add("decay_slope", slope, 2.0, 0.2, mode="range")
    rep.add("rel_discrepancy_h/4", errs[-1] / max(scale, 1e-300), 0.0, 1e-2)
    return rep


def fredenhagen_comparison(
    s: float,
    lambdas,
    rng: np.random.Generator,
    n_samples: int = 40000,
) -> VerificationReport:
    """sup |x|^{-1} |phi_D(s, x) - Lambda_s x| over x in lambda*D1, W_R and D.

    D = D1 + e1 is the unit double cone whose edge passes through the origin,
    where it is tangent to W_R; phi_D is the Hislop-Longo flow of D.
    """
    lambdas = [float(v) for v in lambdas]
    if any(not 0 < v <= 1 for v in lambdas) or abs(s) > 2:
        raise DomainError("need 0 < lambda <= 1 and |s| <= 2")
    shifted = Region.double_cone(1.0, E1)
    sups = []
    for lam in lambdas:
        pts = lam * sample_region(D1, n_samples, rng)
        pts = pts[contains(W_R, pts) & contains(shifted, pts)]
        hl = flow_point(FlowKind.DOUBLE_CONE, s, pts - E1) + E1
        boost = flow_point(FlowKind.WEDGE, s, pts)
        ratio = np.linalg.norm(hl - boost, axis=-1) / np.linalg.norm(pts, axis=-1)
        sups.append(float(np.max(ratio)) if len(ratio) else 0.0)
    rep = VerificationReport("modflow.fredenhagen", meta={"s": s, "lambdas": lambdas, "n_samples": n_samples})
    rep.data["sup_discrepancy"] = sups
    order = np.argsort(lambdas)[::-1]
    seq = [sups[i] for i in order]
    if s == 0:
        rep.add("s=0 vanishes", max(sups), 0.0, 1e-15)
        return rep
    decreasing = all(b < a for a, b in zip(seq, seq[1:]))
    rep.add("strictly_decreasing", float(decreasing), mode="bool", passed=decreasing)
    rep.add("sup_at_smallest_lambda", seq[-1], 0.0, 0.05, note=f"lambda={lambdas[order[-1]]}")
    if len(lambdas) >= 3:
        tail = sorted(lambdas)[:3]
        ys = [sups[lambdas.index(v)] for v in tail]
        rep.add("decay_order_small_lambda", fit_slope(tail, ys), 1.0, 0.1, mode="range")
    return rep


def wedge_fourier_conjugation(n: int = 128, box: float = 24.0) -> float:
    """Wedge generator vs the (p0, p1) boost-derivative part under a 2D DFT.

    With f^(p) = sum f(x) e^{-i p.x} (Euclidean pairing), the field
    x1 d0 + x0 d1 becomes -(p0 d/dp1 + p1 d/dp0) on f^.  Returns the
    relative L2 discrepancy.
    """
    dx = box / n
    x = (np.arange(n) - n // 2) * dx
    X0, X1 = np.meshgrid(x, x, indexing="ij")
    f = np.exp(-((X0 - 0.7) ** 2 + (X1 - 0.4) ** 2) / 2.0) * np.cos(0.8 * X0)
    k = 2 * np.pi * np.fft.fftfreq(n, dx)
    K0, K1 = np.meshgrid(k, k, indexing="ij")
    F = np.fft.fft2(f)
    d0 = np.real(np.fft.ifft2(1j * K0 * F))
    d1 = np.real(np.fft.ifft2(1j * K1 * F))
    lhs = np.fft.fft2(X1 * d0 + X0 * d1)
    # d/dp of the transform is the transform of -i x f; the grid-origin phase
    # factor is common to both sides and dropped
    dFdp0 = np.fft.fft2(-1j * X0 * f)
    dFdp1 = np.fft.fft2(-1j * X1 * f)
    rhs = -(K0 * dFdp1 + K1 * dFdp0)
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs))


def run_suite(rng: np.random.Generator, n_samples: int = 10000) -> VerificationReport:
    rep = VerificationReport("modflow")
    x = rng.normal(size=(4,))
    for k in FlowKind:
        rep.add(f"identity.{k.value}", float(np.max(np.abs(flow_point(k, 0.0, x) - x))), 0.0, 1e-15)
    img = flow_point(FlowKind.WEDGE, 0.8, [0, 1, 0, 0])
    rep.add("wedge(0,1,0,0)", float(np.max(np.abs(img - [np.sinh(0.8), np.cosh(0.8), 0, 0]))), 0.0, 1e-14)
    img = flow_point(FlowKind.DOUBLE_CONE, 0.5, [0, 0, 0, 0])
    rep.add("doublecone(origin)", float(np.max(np.abs(img - [np.tanh(0.25), 0, 0, 0]))), 0.0, 1e-15)
    rep.extend(group_law_check(rng, n_samples), "group")
    rep.extend(region_preservation_check(rng, n_samples), "region")
    rep.extend(fixed_point_check(rng), "fixed")
    rep.extend(testfunction_checks(rng), "testfn")
    for k, f, pts in generator_probes(rng):
        rep.extend(generator_vs_flow(k, f, pts), f"generator.{k.value}")
    rep.add("wedge_fourier_conjugation", wedge_fourier_conjugation(), 0.0, 1e-6)
    f_one = ScalarTestFunction(lambda x: np.ones(x.shape[:-1]))
    val = generator_apply(FlowKind.FORWARD_CONE, f_one, [[1.0, 0.2, 0.1, 0.0]])
    rep.add("cone_generator(f=1)", float(abs(val[0] + 3.0)), 0.0, 1e-10)
    disp = variant_cone_generator(gaussian_bump([1.5, 0.2, 0, 0], 0.3), [[1.4, 0.3, 0.1, 0.0]])
    ours = generator_apply(FlowKind.FORWARD_CONE, gaussian_bump([1.5, 0.2, 0, 0], 0.3), [[1.4, 0.3, 0.1, 0.0]])
    rep.resolved["cone_generator_form"] = "-(3 + x.d) f for f -> e^{-3s} f(e^{-s} x)"
    rep.resolved["cone_variant_form_deviation"] = float(abs(disp[0] - ours[0]))
    rep.resolved["doublecone_3x0_sign"] = "+3 x0 with gamma(x0,x3,-s) f(x(-s))"
    rep.extend(fredenhagen_comparison(0.5, (0.5, 0.25, 0.125, 0.0625), rng), "fredenhagen")
    return rep


def group_law_check(rng, n: int = 10000) -> VerificationReport:
    rep = VerificationReport("modflow.group_law")
    for k in FlowKind:
        x = sample_region(k.region, n, rng, extent=2.0)
        s1, s2 = rng.uniform(-1.5, 1.5, 2)
        a = flow_point(k, s1, flow_point(k, s2, x))
        b = flow_point(k, s1 + s2, x)
        err = float(np.max(np.abs(a - b) / (1.0 + np.abs(b))))
        rep.add(k.value, err, 0.0, 1e-10)
    x = sample_region(D1, n, rng)
    err = 0.0
    for s in rng.uniform(-2, 2, 5):
        err = max(err, float(np.max(np.abs(flow_point(FlowKind.DOUBLE_CONE, s, x) - flow_point_conjugated(s, x)))))
    rep.add("doublecone=T41.T10.T41^-1", err, 0.0, 1e-10)
    return rep


def region_preservation_check(rng, n: int = 10000) -> VerificationReport:
    rep = VerificationReport("modflow.region")
    for k in FlowKind:
        x = sample_region(k.region, n, rng, extent=2.0)
        s = rng.uniform(-2.0, 2.0, n)
        y = np.stack([flow_point(k, si, xi) for si, xi in zip(s[:200], x[:200])])
        inside = contains(k.region, y)
        # vectorized pass over the rest at a handful of shared parameters
        for si in rng.uniform(-2.0, 2.0, 8):
            inside = np.concatenate([inside, contains(k.region, flow_point(k, si, x))])
        rep.add(k.value, float(np.mean(inside)), 1.0, 1.0, mode="ge")
    return rep


def fixed_point_check(rng) -> VerificationReport:
    rep = VerificationReport("modflow.fixed")
    u = np.array([-1.0, 1.0])
    worst = max(float(np.max(np.abs(hl_lightcone(s, u) - u))) for s in (-1.7, 0.3, 2.5))
    rep.add("doublecone x_pm=pm1", worst, 0.0, 0.0)
    o = np.zeros(4)
    rep.add("wedge origin", float(np.max(np.abs(flow_point(FlowKind.WEDGE, 1.1, o)))), 0.0, 0.0)
    rep.add("cone apex", float(np.max(np.abs(flow_point(FlowKind.FORWARD_CONE, 1.1, o)))), 0.0, 0.0)
    return rep


def generator_probes(rng):
    """(kind, bump, probe points) triples used by the generator checks."""
    out = []
    c = [0.2, 1.2, 0.1, 0.0]
    out.append((FlowKind.WEDGE, gaussian_bump(c, 0.3, W_R), np.array(c) + 0.2 * rng.normal(size=(16, 4))))
    c = [1.5, 0.3, 0.0, 0.2]
    out.append((FlowKind.FORWARD_CONE, gaussian_bump(c, 0.3, V_PLUS), np.array(c) + 0.2 * rng.normal(size=(16, 4))))
    c = [0.1, 0.0, 0.0, 0.2]
    out.append((FlowKind.DOUBLE_CONE, gaussian_bump(c, 0.15, D1), np.array(c) + 0.1 * rng.normal(size=(16, 4))))
    return out


def testfunction_checks(rng) -> VerificationReport:
    rep = VerificationReport("modflow.testfunction")
    rep.add("gamma(s=0)=1", float(np.max(np.abs(cocycle_gamma(rng.uniform(-0.5, 0.5, 50), rng.uniform(-0.4, 0.4, 50), 0.0) - 1))), 0.0, 1e-15)
    # group law of the test-function actions, cocycle restricted to x || e3
    for k, f, _ in generator_probes(rng):
        if k is FlowKind.DOUBLE_CONE:
            x = np.zeros((200, 4))
            x[:, 0] = rng.uniform(-0.4, 0.4, 200)
            x[:, 3] = rng.uniform(-0.5, 0.5, 200)
        else:
            x = sample_region(k.region, 200, rng, extent=2.0)
        s1, s2 = 0.4, -0.9
        a = flow_testfunction(k, s2, flow_testfunction(k, s1, f))(x)
        b = flow_testfunction(k, s1 + s2, f)(x)
        rep.add(f"composition.{k.value}", float(np.max(np.abs(a - b))), 0.0, 1e-8)
    rep.add("cone_slice_integral", cone_slice_integral_error(0.7), 0.0, 1e-8)
    return rep


def cone_slice_integral_error(s: float, n: int = 112, box: float = 20.0) -> float:
    """|int f_s(0, x) d^3x - int f(0, x) d^3x| / int f on the x0 = 0 slice."""
    f = gaussian_bump([0.0, 0.3, -0.2, 0.1], 0.6)
    fs = flow_testfunction(FlowKind.FORWARD_CONE, s, f)
    g = (np.arange(n) - n / 2) * (box / n)
    X = np.zeros((n, n, n, 4))
    X[..., 1], X[..., 2], X[..., 3] = np.meshgrid(g, g, g, indexing="ij")
    dv = (box / n) ** 3
    a, b = float(np.sum(fs(X)) * dv), float(np.sum(f(X)) * dv)
    return abs(a - b) / abs(b)
