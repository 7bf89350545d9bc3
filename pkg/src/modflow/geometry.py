"""Minkowski space R^{1,3}: inner product, lightcone coordinates, regions.

Points are handled either as :class:`FourVector` values or as float arrays
whose last axis has length 4.  Every function accepts both and broadcasts
over leading axes.  The metric is diag(+1, -1, -1, -1).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
EPS_LIGHT = 1e-12


@dataclass(frozen=True)
class FourVector:
    """A single spacetime point with contravariant components."""

    x0: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.x0, self.x1, self.x2, self.x3])):
            raise DomainError("FourVector components must be finite")

    @classmethod
    def from_array(cls, a) -> "FourVector":
        a = np.asarray(a, dtype=float).reshape(4)
        return cls(*(float(v) for v in a))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x0, self.x1, self.x2, self.x3], dtype=dtype or float)

    def to_array(self) -> np.ndarray:
        return np.array(self)

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2, self.x3))


ORIGIN = FourVector(0.0, 0.0, 0.0, 0.0)
E0 = np.array([1.0, 0.0, 0.0, 0.0])
E1 = np.array([0.0, 1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 0.0, 1.0])


def as_points(x) -> np.ndarray:
    """Convert ``x`` to a float array of shape (..., 4), rejecting NaN/Inf."""
    if isinstance(x, FourVector):
        a = x.to_array()
    else:
        a = np.asarray(x, dtype=float)
    if a.shape[-1:] != (4,):
        raise DomainError(f"expected trailing axis of length 4, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite spacetime coordinates")
    return a


def minkowski_inner(x, y) -> np.ndarray | float:
    """(x, y) = x0 y0 - x1 y1 - x2 y2 - x3 y3."""
    a, b = as_points(x), as_points(y)
    r = a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2] - a[..., 3] * b[..., 3]
    return float(r) if np.ndim(r) == 0 else r


def interval(x) -> np.ndarray | float:
    """Shorthand for (x, x)."""
    return minkowski_inner(x, x)


@dataclass(frozen=True)
class LightconeCoords:
    """x_plus = x0 + |x_vec|, x_minus = x0 - |x_vec| and the spatial direction.

    ``direction`` holds NaN where the spatial part vanishes.
    """

    x_plus: np.ndarray
    x_minus: np.ndarray
    direction: np.ndarray

    @property
    def direction_defined(self) -> np.ndarray:
        return np.all(np.isfinite(self.direction), axis=-1)


def to_lightcone(x) -> LightconeCoords:
    a = as_points(x)
    r = np.linalg.norm(a[..., 1:], axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        d = a[..., 1:] / r[..., None]
    d = np.where((r > 0)[..., None], d, np.nan)
    return LightconeCoords(a[..., 0] + r, a[..., 0] - r, d)


def from_lightcone(lc: LightconeCoords) -> np.ndarray:
    xp, xm = np.asarray(lc.x_plus, float), np.asarray(lc.x_minus, float)
    if np.any(xp < xm):
        raise DomainError("from_lightcone requires x_plus >= x_minus")
    r = 0.5 * (xp - xm)
    d = np.asarray(lc.direction, float)
    need = r > 0
    if np.any(need & ~np.all(np.isfinite(d), axis=-1)):
        raise DomainError("direction undefined for a point with non-zero spatial radius")
    d = np.where(np.isfinite(d), d, 0.0)
    out = np.empty(np.shape(xp) + (4,))
    out[..., 0] = 0.5 * (xp + xm)
    out[..., 1:] = r[..., None] * d
    return out


class CausalRelation(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


def causal_relation(x, y, eps_light: float = EPS_LIGHT):
    """Classify x - y by the sign of its interval.

    Returns a :class:`CausalRelation` for a single pair, or an object array
    of them for batched input.
    """
    q = np.asarray(interval(as_points(x) - as_points(y)))
    codes = np.where(np.abs(q) <= eps_light, 1, np.where(q > 0, 0, 2))
    table = list(CausalRelation)
    if np.ndim(codes) == 0:
        return table[int(codes)]
    return np.array(table, dtype=object)[codes]


class RegionKind(enum.Enum):
    RIGHT_WEDGE = "W_R"
    LEFT_WEDGE = "W_L"
    FORWARD_CONE = "V+"
    BACKWARD_CONE = "V-"
    DOUBLE_CONE = "D"


@dataclass(frozen=True)
class Region:
    """An open region of Minkowski space.

    Wedges use the x1 axis.  ``radius`` and ``center`` only matter for
    double cones; the unit double cone D1 is radius 1 about the origin.
    """

    kind: RegionKind
    radius: float = 1.0
    center: FourVector = field(default=ORIGIN)

    def __post_init__(self):
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise DomainError("double cone radius must be positive")

    @classmethod
    def double_cone(cls, radius: float = 1.0, center=ORIGIN) -> "Region":
        if not isinstance(center, FourVector):
            center = FourVector.from_array(center)
        return cls(RegionKind.DOUBLE_CONE, radius, center)


W_R = Region(RegionKind.RIGHT_WEDGE)
W_L = Region(RegionKind.LEFT_WEDGE)
V_PLUS = Region(RegionKind.FORWARD_CONE)
V_MINUS = Region(RegionKind.BACKWARD_CONE)
D1 = Region.double_cone()


def contains(region: Region, x) -> np.ndarray | bool:
    """Strict membership; boundary points are outside."""
    a = as_points(x)
    t, x1 = a[..., 0], a[..., 1]
    k = region.kind
    if k is RegionKind.RIGHT_WEDGE:
        res = np.abs(t) < x1
    elif k is RegionKind.LEFT_WEDGE:
        res = np.abs(t) < -x1
    elif k in (RegionKind.FORWARD_CONE, RegionKind.BACKWARD_CONE):
        r = np.linalg.norm(a[..., 1:], axis=-1)
        res = (t > r) if k is RegionKind.FORWARD_CONE else (-t > r)
    else:
        y = (a - region.center.to_array()) / region.radius
        res = np.abs(y[..., 0]) + np.linalg.norm(y[..., 1:], axis=-1) < 1.0
    return bool(res) if np.ndim(res) == 0 else res


def sample_region(region: Region, n: int, rng: np.random.Generator, extent: float = 2.0) -> np.ndarray:
    """Draw ``n`` points uniformly from ``region``.

    Unbounded regions are cut to the box [-extent, extent]^4.  Bounded double
    cones ignore ``extent``.
    """
    if region.kind is RegionKind.DOUBLE_CONE:
        lo = region.center.to_array() - region.radius
        width = 2.0 * region.radius
    else:
        lo = np.full(4, -extent)
        width = 2.0 * extent
    chunks, have = [], 0
    while have < n:
        cand = lo + width * rng.random((max(4 * (n - have), 64), 4))
        cand = cand[contains(region, cand)]
        chunks.append(cand)
        have += len(cand)
    return np.concatenate(chunks)[:n]


def reflect_x1(x) -> np.ndarray:
    """(x0, x1, x2, x3) -> (x0, -x1, x2, x3)."""
    a = as_points(x).copy()
    a[..., 1] *= -1.0
    return a


def run_suite(rng: np.random.Generator, n: int = 10000):
    """Examples and invariants of the Minkowski substrate."""
    from .report import VerificationReport

    rep = VerificationReport("geometry")
    rep.add("inner timelike", abs(minkowski_inner(E0, E0) - 1.0), 0.0, 0.0)
    rep.add("inner spacelike", abs(minkowski_inner(E1, E1) + 1.0), 0.0, 0.0)
    rep.add("inner lightlike", abs(minkowski_inner(E0 + E1, E0 + E1)), 0.0, 0.0)
    x, y, z = rng.normal(size=(3, n, 4))
    a, b = rng.normal(size=2)
    sym = np.max(np.abs(minkowski_inner(x, y) - minkowski_inner(y, x)))
    lin = np.max(np.abs(minkowski_inner(a * x + b * z, y) - a * minkowski_inner(x, y) - b * minkowski_inner(z, y)))
    rep.add("inner symmetric", float(sym), 0.0, 1e-12)
    rep.add("inner bilinear", float(lin), 0.0, 1e-12)

    examples = [
        (contains(W_R, E1), True),
        (contains(V_PLUS, E0), True),
        (contains(D1, E0), False),
    ]
    ok = all(bool(got) is want for got, want in examples)
    rep.add("contains examples", float(ok), mode="bool", passed=ok)
    pts = rng.uniform(-2, 2, size=(n, 4))
    refl = bool(np.all(contains(W_R, pts) == contains(W_L, reflect_x1(pts))))
    rep.add("W_R reflects to W_L", float(refl), mode="bool", passed=refl)

    lc = to_lightcone(E0)
    ok = lc.x_plus == 1 and lc.x_minus == 1 and not lc.direction_defined
    lc3 = to_lightcone(E3)
    ok = bool(ok and lc3.x_plus == 1 and lc3.x_minus == -1 and np.allclose(lc3.direction, [0, 0, 1]))
    rep.add("lightcone examples", float(ok), mode="bool", passed=ok)
    rt = np.max(np.abs(from_lightcone(to_lightcone(x)) - x))
    rep.add("lightcone roundtrip", float(rt), 0.0, 1e-12)
    d = to_lightcone(sample_region(D1, n, rng))
    ok = bool(np.all((-1 < d.x_minus) & (d.x_minus <= d.x_plus) & (d.x_plus < 1)))
    rep.add("D1 in lightcone coordinates", float(ok), mode="bool", passed=ok)

    rel = [causal_relation(E0, 0 * E0), causal_relation(E0 + E1, 0 * E0), causal_relation(E1, 0 * E0)]
    ok = rel == [CausalRelation.TIMELIKE, CausalRelation.LIGHTLIKE, CausalRelation.SPACELIKE]
    rep.add("causal examples", float(ok), mode="bool", passed=ok)
    return rep
