"""Temperatures seen by observers moving along modular orbits.

Wedge: uniformly accelerated observer, Unruh temperature a/2pi.
Forward light cone: observer on a dilation orbit, T = e^{-a tau}/(2 pi rho0),
where rho0 is the proper-time distance to the apex at tau = 0.
Double cone of radius L: T = a^2 L / (2 pi (sqrt(1 + a^2 L^2) - cosh a tau)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LifetimeBoundary
from .flows import FlowKind, flow_point
from .geometry import W_R, FourVector, contains, minkowski_inner
from .report import VerificationReport

TWO_PI = 2.0 * math.pi
SERIES_THRESHOLD = 1e-6
EPS_LIFETIME = 1e-12


class ObserverRegion(enum.Enum):
    WEDGE = "wedge"
    FORWARD_CONE = "cone"
    DOUBLE_CONE = "diamond"


@dataclass(frozen=True)
class ObserverSpec:
    a: float
    region: ObserverRegion = ObserverRegion.WEDGE
    L: float = 1.0

    def __post_init__(self):
        if self.a < 0:
            raise DomainError("acceleration must be non-negative")
        if self.region is ObserverRegion.DOUBLE_CONE and not self.L > 0:
            raise DomainError("diamond radius must be positive")

    def lifetime(self) -> float:
        """Proper-time half-lifetime inside the diamond; infinite otherwise."""
        if self.region is not ObserverRegion.DOUBLE_CONE:
            return math.inf
        if self.a < SERIES_THRESHOLD:
            return self.L
        return math.acosh(math.sqrt(1.0 + (self.a * self.L) ** 2)) / self.a

    def within_lifetime(self, tau) -> np.ndarray:
        return np.abs(np.asarray(tau, float)) < self.lifetime()

    def temperature(self, tau=0.0):
        if self.region is ObserverRegion.WEDGE:
            return unruh_temperature(self.a) * np.ones_like(np.asarray(tau, float))
        if self.region is ObserverRegion.FORWARD_CONE:
            return cone_temperature(self.a, tau)
        return diamond_temperature(self.a, self.L, tau)


def unruh_temperature(a: float) -> float:
    if not a > 0:
        raise DomainError("acceleration must be positive")
    return a / TWO_PI


def cone_temperature(a: float, tau, rho0: float = 1.0):
    """e^{-a tau} / (2 pi rho0)."""
    out = np.exp(-a * np.asarray(tau, float)) / (TWO_PI * rho0)
    return float(out) if np.ndim(out) == 0 else out


def _diamond_denominator(a: float, L: float, tau):
    """sqrt(1 + a^2 L^2) - cosh(a tau) without cancellation."""
    aL = a * L
    return aL * aL / (math.sqrt(1.0 + aL * aL) + 1.0) - 2.0 * np.sinh(0.5 * a * np.asarray(tau, float)) ** 2


def diamond_temperature(a: float, L: float, tau):
    """Diamond temperature; for a below the series threshold the a -> 0 limit L/(pi (L^2 - tau^2))."""
    if a < 0 or not L > 0:
        raise DomainError("need a >= 0 and L > 0")
    tau = np.asarray(tau, float)
    if a < SERIES_THRESHOLD:
        den = L * L - tau * tau
        if np.any(den <= EPS_LIFETIME * L * L):
            raise LifetimeBoundary("|tau| reached the diamond lifetime")
        out = L / (math.pi * den)
    else:
        den = _diamond_denominator(a, L, tau)
        scale = (a * L) ** 2 / (math.sqrt(1.0 + (a * L) ** 2) + 1.0)
        if np.any(den <= EPS_LIFETIME * scale):
            raise LifetimeBoundary("cosh(a tau) reached sqrt(1 + a^2 L^2)")
        out = a * a * L / (TWO_PI * den)
    return float(out) if np.ndim(out) == 0 else out


def boost_orbit(a: float, tau) -> np.ndarray:
    """(sinh(a tau)/a, cosh(a tau)/a, 0, 0)."""
    if not a > 0:
        raise DomainError("acceleration must be positive")
    tau = np.asarray(tau, float)
    out = np.zeros(tau.shape + (4,))
    out[..., 0] = np.sinh(a * tau) / a
    out[..., 1] = np.cosh(a * tau) / a
    return out


def boost_orbit_vector(a: float, tau: float) -> FourVector:
    return FourVector.from_array(boost_orbit(a, float(tau)))


def run_suite() -> VerificationReport:
    rep = VerificationReport("thermal")
    rep.add("unruh a=2pi", abs(unruh_temperature(TWO_PI) - 1.0), 0.0, 1e-15)
    rep.add("unruh a=1", abs(unruh_temperature(1.0) - 1 / TWO_PI), 0.0, 0.0)
    rep.add("cone tau=0", abs(cone_temperature(1.0, 0.0) - 1 / TWO_PI), 0.0, 0.0)
    taus = np.linspace(-3, 3, 61)
    rep.add("cone a=0 constant", float(np.max(np.abs(cone_temperature(0.0, taus) - 1 / TWO_PI))), 0.0, 0.0)
    tt = np.linspace(0, 40, 200)
    ct = cone_temperature(0.7, tt)
    ok = bool(np.all(np.diff(ct) < 0) and ct[-1] < 1e-10)
    rep.add("cone decays monotonically", float(ok), mode="bool", passed=ok)
    shift = np.max(np.abs(cone_temperature(0.7, taus + 0.3) - math.exp(-0.21) * cone_temperature(0.7, taus)) / cone_temperature(0.7, taus + 0.3))
    rep.add("cone thermal-time shift", float(shift), 0.0, 1e-14)

    # diamond
    rep.add("diamond a->0 limit", abs(diamond_temperature(0.0, 1.0, 0.0) - 1 / math.pi), 0.0, 1e-15)
    jumps = [abs(diamond_temperature(a, 1.0, 0.3) - diamond_temperature(0.0, 1.0, 0.3)) / diamond_temperature(0.0, 1.0, 0.3) for a in (SERIES_THRESHOLD * 1.0001, SERIES_THRESHOLD * 0.9999)]
    rep.add("diamond series threshold continuity", max(jumps), 0.0, 1e-8)
    for a, L in ((0.5, 1.0), (2.0, 3.0), (10.0, 1.0)):
        spec = ObserverSpec(a, ObserverRegion.DOUBLE_CONE, L)
        tmax = spec.lifetime()
        tau = np.linspace(-0.999 * tmax, 0.999 * tmax, 401)
        T = diamond_temperature(a, L, tau)
        even = float(np.max(np.abs(T - T[::-1]) / T))
        rep.add(f"diamond even a={a} L={L}", even, 0.0, 1e-12)
        rep.add(f"diamond minimum at tau=0 a={a} L={L}", float(np.argmin(T) == 200), mode="bool", passed=bool(np.argmin(T) == 200))
        floor = unruh_temperature(a)
        rep.add(f"diamond above Unruh floor a={a} L={L}", float(T.min() - floor), None, 0.0, mode="ge")
        near = diamond_temperature(a, L, tmax * (1 - np.geomspace(1e-2, 1e-8, 7)))
        grows = bool(np.all(np.diff(near) > 0) and near[-1] > 1e4 * near[0])
        rep.add(f"diamond diverges at lifetime a={a} L={L}", float(near[-1]), mode="bool", passed=grows)
        try:
            diamond_temperature(a, L, tmax * 1.0001)
            raised = False
        except LifetimeBoundary:
            raised = True
        rep.add(f"diamond lifetime boundary raised a={a} L={L}", float(raised), mode="bool", passed=raised)
    aL = 1e4
    big = diamond_temperature(aL, 1.0, 0.0)
    approx = unruh_temperature(aL) / (1 - 1 / aL)
    rep.add("diamond large aL", abs(big / approx - 1), 0.0, 1e-7)
    kappa = 3.7
    sc = 0.0
    for a, L, tau in ((0.5, 1.0, 0.2), (2.0, 3.0, -0.4)):
        sc = max(sc, abs(diamond_temperature(kappa * a, L / kappa, tau / kappa) / (kappa * diamond_temperature(a, L, tau)) - 1))
        sc = max(sc, abs(cone_temperature(kappa * a, tau / kappa, 1.0 / kappa) / (kappa * cone_temperature(a, tau)) - 1))
        sc = max(sc, abs(unruh_temperature(kappa * a) / (kappa * unruh_temperature(a)) - 1))
    rep.add("dimensional scaling", sc, 0.0, 1e-12)

    # worldline
    a = 1.3
    rep.add("orbit tau=0", float(np.max(np.abs(boost_orbit(a, 0.0) - [0, 1 / a, 0, 0]))), 0.0, 0.0)
    taus = np.linspace(-4, 4, 81)
    pts = boost_orbit(a, taus)
    inside = bool(np.all(contains(W_R, pts)))
    rep.add("orbit inside W_R", float(inside), mode="bool", passed=inside)
    h = 1e-4
    vel = (boost_orbit(a, taus + h) - boost_orbit(a, taus - h)) / (2 * h)
    rep.add("orbit proper time", float(np.max(np.abs(minkowski_inner(vel, vel) - 1))), 0.0, 1e-7)
    vel_exact = np.stack([np.cosh(a * taus), np.sinh(a * taus), 0 * taus, 0 * taus], axis=-1)
    rep.add("orbit proper time exact", float(np.max(np.abs(minkowski_inner(vel_exact, vel_exact) - 1))), 0.0, 1e-10)
    x0 = boost_orbit(a, 0.0)
    cross = max(float(np.max(np.abs(flow_point(FlowKind.WEDGE, a * t, x0) - boost_orbit(a, t)))) for t in (-1.0, 0.4, 2.0))
    rep.add("orbit equals boost flow", cross, 0.0, 1e-12)
    return rep
