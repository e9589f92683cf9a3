"""Branched minimal immersions from Weierstrass data.

A surface is given by a holomorphic ``f`` and a meromorphic ``g`` on a
planar chart; the immersion is

    X(z) = X(z0) + Re int_{z0}^{z} (f(1-g^2)/2, i f(1+g^2)/2, f g) dzeta.

Everything is evaluated from the holomorphic triple ``(f, f*g, f*g^2)`` so
that zeros of ``f`` cancelling poles of ``g`` (as in the Meeks data) never
produce spurious singularities.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (BranchPointError, DomainError, PoleError, PoleOnPathError,
                     SimplificationError)
from .quadrature import gauss_kronrod
from .rational import BivariatePoly, RationalComplexFunction

TWO_PI = 2 * math.pi
PATH_CLEARANCE = 1e-3
BRANCH_MATCH_TOL = 1e-6


# ---------------------------------------------------------------- domains

@dataclass(frozen=True)
class Domain:
    """Planar chart: canonical annulus, punctured plane, strip, or disk.

    ``slit`` is the angle of the ray removed to make an annulus-type chart
    simply connected; default contours never cross it.
    """

    kind: str
    R: float | None = None
    half_width: float | None = None
    radius: float | None = None
    period: float | None = None
    slit: float | None = None

    def __post_init__(self):
        if self.kind not in ("annulus", "punctured_plane", "strip", "disk"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "annulus" and not (self.R is not None and self.R > 1):
            raise ValueError("canonical annulus needs R > 1")
        if self.kind == "strip" and not (self.half_width and self.half_width > 0):
            raise ValueError("strip needs a positive half width")
        if self.kind == "disk" and not (self.radius and self.radius > 0):
            raise ValueError("disk needs a positive radius")
        if self.slit is not None:
            object.__setattr__(self, "slit", self.slit % TWO_PI)

    @classmethod
    def canonical_annulus(cls, R: float, slit: float | None = None):
        return cls("annulus", R=float(R), slit=slit)

    @classmethod
    def punctured_plane(cls, slit: float | None = None):
        return cls("punctured_plane", slit=slit)

    @classmethod
    def strip(cls, half_width: float, period: float | None = TWO_PI):
        return cls("strip", half_width=float(half_width), period=period)

    @classmethod
    def disk(cls, radius: float = 1.0):
        return cls("disk", radius=float(radius))

    @property
    def inner_radius(self) -> float:
        return 1.0 / self.R

    def contains(self, z: complex, slack: float = 1e-9) -> bool:
        if self.kind == "annulus":
            r = abs(z)
            return self.inner_radius * (1 - slack) <= r <= self.R * (1 + slack)
        if self.kind == "punctured_plane":
            return z != 0
        if self.kind == "strip":
            return abs(z.imag) <= self.half_width * (1 + slack)
        return abs(z) <= self.radius * (1 + slack)

    def in_interior(self, z: complex, margin: float = 0.0) -> bool:
        if self.kind == "annulus":
            r = abs(z)
            return self.inner_radius + margin < r < self.R - margin
        if self.kind == "punctured_plane":
            return abs(z) > margin
        if self.kind == "strip":
            return abs(z.imag) < self.half_width - margin
        return abs(z) < self.radius - margin

    def has_boundary(self) -> bool:
        return self.kind != "punctured_plane"

    def boundary_samples(self, n: int):
        """``n`` points per boundary component, with outward unit normals.

        Returns a list of ``(z, normal)`` where ``normal`` is a unit complex
        number giving the outward direction in the chart.
        """
        theta = TWO_PI * np.arange(n) / n
        out = []
        if self.kind == "annulus":
            for t in theta:
                u = cmath.exp(1j * t)
                out.append((self.R * u, u))
            for t in theta:
                u = cmath.exp(1j * t)
                out.append((self.inner_radius * u, -u))
        elif self.kind == "disk":
            for t in theta:
                u = cmath.exp(1j * t)
                out.append((self.radius * u, u))
        elif self.kind == "strip":
            period = self.period or TWO_PI
            for t in theta:
                u = t / TWO_PI * period
                out.append((complex(u, self.half_width), 1j))
            for t in theta:
                u = t / TWO_PI * period
                out.append((complex(u, -self.half_width), -1j))
        return out

    def grid(self, n_r: int, n_theta: int, r_min: float | None = None,
             r_max: float | None = None) -> np.ndarray:
        """Tensor grid of chart points, shape ``(n_r, n_theta)``.

        Annulus, disk and punctured plane use a polar grid whose angles are
        offset by half a step (so the grid avoids the coordinate axes); the
        strip uses its periodic coordinate across and the bounded one down.
        """
        if n_r < 2 or n_theta < 2:
            raise ValueError("grid counts must be at least 2")
        if self.kind == "strip":
            lo = -self.half_width if r_min is None else r_min
            hi = self.half_width if r_max is None else r_max
            period = self.period or TWO_PI
            u = period * (np.arange(n_theta) + 0.5) / n_theta - period / 2
            v = np.linspace(lo, hi, n_r)
            return u[None, :] + 1j * v[:, None]
        if r_min is None:
            r_min = {"annulus": self.inner_radius if self.R else None,
                     "disk": 0.05 * (self.radius or 1.0),
                     "punctured_plane": 0.5}[self.kind]
        if r_max is None:
            r_max = {"annulus": self.R, "disk": self.radius,
                     "punctured_plane": 2.0}[self.kind]
        if not r_min < r_max:
            raise ValueError("grid needs r_min < r_max")
        r = np.linspace(r_min, r_max, n_r)
        theta = TWO_PI * (np.arange(n_theta) + 0.5) / n_theta
        return r[:, None] * np.exp(1j * theta)[None, :]

    def random_points(self, n: int, rng: np.random.Generator, r_range=None):
        if self.kind == "strip":
            period = self.period or TWO_PI
            u = rng.uniform(-period / 2, period / 2, n)
            v = rng.uniform(-self.half_width, self.half_width, n)
            return u + 1j * v
        if r_range is None:
            r_range = {"annulus": (self.inner_radius if self.R else 0.5, self.R),
                       "disk": (0.0, self.radius),
                       "punctured_plane": (0.5, 2.0)}[self.kind]
        lo, hi = r_range
        if self.kind == "disk":
            r = hi * np.sqrt(rng.uniform((lo / hi) ** 2, 1.0, n))
        else:
            r = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
        theta = rng.uniform(0, TWO_PI, n)
        return r * np.exp(1j * theta)

    def to_dict(self):
        return {k: v for k, v in (("kind", self.kind), ("R", self.R),
                                  ("half_width", self.half_width), ("radius", self.radius),
                                  ("period", self.period), ("slit", self.slit)) if v is not None}


# ------------------------------------------------------------------ paths

@dataclass(frozen=True)
class Segment:
    """Line segment, or circular arc about ``center`` sweeping ``sweep`` radians."""

    start: complex
    end: complex
    kind: str = "line"
    center: complex = 0j
    sweep: float = 0.0

    @classmethod
    def line(cls, a: complex, b: complex):
        return cls(complex(a), complex(b))

    @classmethod
    def arc(cls, start: complex, sweep: float, center: complex = 0j):
        start = complex(start)
        end = center + (start - center) * cmath.exp(1j * sweep)
        return cls(start, end, "arc", complex(center), float(sweep))

    def points(self, t):
        if self.kind == "line":
            return self.start + (self.end - self.start) * t
        return self.center + (self.start - self.center) * np.exp(1j * self.sweep * t)

    def velocity(self, t):
        if self.kind == "line":
            return np.full(np.shape(t), self.end - self.start, dtype=complex)
        return 1j * self.sweep * (self.start - self.center) * np.exp(1j * self.sweep * t)

    def distance_to(self, p: complex) -> float:
        if self.kind == "line":
            d = self.end - self.start
            if d == 0:
                return abs(p - self.start)
            t = ((p - self.start) * d.conjugate()).real / abs(d) ** 2
            t = min(max(t, 0.0), 1.0)
            return abs(p - (self.start + t * d))
        rho = abs(self.start - self.center)
        a0 = cmath.phase(self.start - self.center)
        ap = cmath.phase(p - self.center) if p != self.center else a0
        rel = (ap - a0) if self.sweep >= 0 else (a0 - ap)
        rel %= TWO_PI
        if rel <= abs(self.sweep):
            return abs(abs(p - self.center) - rho)
        return min(abs(p - self.start), abs(p - self.end))


@dataclass(frozen=True)
class PathInPlane:
    """Piecewise contour made of lines and circular arcs."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("empty path")
        for a, b in zip(segs, segs[1:]):
            if abs(a.end - b.start) > 1e-12 * max(1.0, abs(a.end)):
                raise ValueError("path segments are not contiguous")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_waypoints(cls, waypoints, kinds=None, center: complex = 0j):
        """Join waypoints by lines or by arcs about ``center``.

        Arcs take the shorter way round; both ends must lie on one circle.
        """
        pts = [complex(w) for w in waypoints]
        kinds = kinds or ["line"] * (len(pts) - 1)
        segs = []
        for (a, b), kind in zip(zip(pts, pts[1:]), kinds):
            if a == b:
                raise ValueError("consecutive waypoints must be distinct")
            if kind == "line":
                segs.append(Segment.line(a, b))
            else:
                ra, rb = abs(a - center), abs(b - center)
                if abs(ra - rb) > 1e-12 * max(ra, 1.0):
                    raise ValueError("arc end points must share a radius")
                sweep = cmath.phase((b - center) / (a - center))
                segs.append(Segment(a, b, "arc", complex(center), sweep))
        return cls(tuple(segs))

    @classmethod
    def circle(cls, radius: float, center: complex = 0j, start_angle: float = 0.0):
        """Positively oriented full circle, split into two half arcs."""
        s = center + radius * cmath.exp(1j * start_angle)
        first = Segment.arc(s, math.pi, center)
        second = Segment.arc(first.end, math.pi, center)
        return cls((first, Segment(second.start, s, "arc", complex(center), math.pi)))

    @property
    def start(self) -> complex:
        return self.segments[0].start

    @property
    def end(self) -> complex:
        return self.segments[-1].end

    def is_closed(self, tol: float = 1e-12) -> bool:
        return abs(self.end - self.start) <= tol * max(1.0, abs(self.start))

    def clearance(self, points) -> float:
        return min((seg.distance_to(p) for seg in self.segments for p in points),
                   default=math.inf)

    def integrate(self, fun):
        """Contour integral of the vectorized complex function ``fun``."""
        total = 0
        for seg in self.segments:
            val, _ = gauss_kronrod(lambda t, s=seg: fun(s.points(t)).reshape(len(t), -1)
                                   * s.velocity(t)[:, None])
            total = total + val
        return total


def default_path(domain: Domain, base: complex, z: complex) -> PathInPlane:
    """Deterministic contour from ``base`` to ``z`` inside the slit chart.

    Annulus-type charts: radial segment along the base point's ray out to
    ``|z|``, then an arc that does not cross the slit. Other charts: a line.
    """
    base, z = complex(base), complex(z)
    if domain.kind in ("strip", "disk") or base == 0 or z == 0:
        return PathInPlane((Segment.line(base, z),))
    segs = []
    a0 = cmath.phase(base)
    corner = abs(z) * cmath.exp(1j * a0)
    if abs(corner - base) > 1e-15 * max(1.0, abs(base)):
        segs.append(Segment.line(base, corner))
    sweep = cmath.phase(z / corner)
    if domain.slit is not None and sweep != 0:
        rel = (domain.slit - a0) % TWO_PI
        if (sweep > 0 and 0 < rel < sweep) or (sweep < 0 and 0 < TWO_PI - rel < -sweep):
            sweep = sweep - math.copysign(TWO_PI, sweep)
    if abs(sweep) > 1e-15:
        segs.append(Segment(corner, z, "arc", 0j, sweep))
    if not segs:
        segs.append(Segment.line(base, z))
    return PathInPlane(tuple(segs))


# ---------------------------------------------------- quadratic differentials

@dataclass(frozen=True)
class QuadDiffForm:
    """Quadratic differential ``phi(z) dz^2`` in a fixed chart.

    Either symbolic (``phi`` a rational function) or sampled
    (``samples`` a tuple of ``(z, phi(z))`` pairs).
    """

    chart: Domain
    phi: RationalComplexFunction | None = None
    samples: tuple | None = None

    @property
    def symbolic(self) -> bool:
        return self.phi is not None

    def __call__(self, z):
        if self.phi is None:
            raise ValueError("sampled form has no closed-form evaluator")
        return self.phi(z)

    def is_zero(self) -> bool:
        if self.phi is not None:
            return self.phi.is_zero()
        return all(v == 0 for _, v in self.samples)


# ----------------------------------------------------------------- surface

def _as_rf(x) -> RationalComplexFunction:
    return x if isinstance(x, RationalComplexFunction) else RationalComplexFunction.constant(x)


@dataclass(frozen=True, eq=False)
class WeierstrassSurface:
    """Weierstrass data ``(f, g)`` on a chart, with a pinned base value."""

    f: RationalComplexFunction
    g: RationalComplexFunction
    domain: Domain
    base_point: complex = 1 + 0j
    base_value: tuple = (0.0, 0.0, 0.0)
    name: str = ""
    fg: RationalComplexFunction = field(init=False, repr=False)
    fg2: RationalComplexFunction = field(init=False, repr=False)

    def __post_init__(self):
        f = _as_rf(self.f).simplify()
        g = _as_rf(self.g).simplify()
        if f.is_zero():
            raise ValueError("f must not vanish identically")
        if g.is_zero():
            raise ValueError("g must not vanish identically")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "fg", (f * g).simplify())
        object.__setattr__(self, "fg2", (f * g * g).simplify())
        object.__setattr__(self, "base_point", complex(self.base_point))
        object.__setattr__(self, "base_value", tuple(float(x) for x in self.base_value))
        for label, h in (("f", self.f), ("f*g", self.fg), ("f*g^2", self.fg2)):
            for p, _ in h.poles():
                if self.domain.in_interior(p) or (self.domain.kind == "annulus"
                                                  and self.domain.contains(p)):
                    raise ValueError(f"{label} has a pole at {p} inside the domain")

    @cached_property
    def integrand_poles(self) -> list[complex]:
        return sorted({p for h in (self.f, self.fg, self.fg2) for p, _ in h.poles()},
                      key=lambda c: (c.real, c.imag))

    def integrand(self, zeta):
        """The holomorphic vector ``(f(1-g^2)/2, i f(1+g^2)/2, f g)`` at ``zeta``."""
        zeta = np.asarray(zeta, dtype=complex)
        f = np.asarray(self.f(zeta))
        fg2 = np.asarray(self.fg2(zeta))
        fg = np.asarray(self.fg(zeta))
        return np.stack([0.5 * (f - fg2), 0.5j * (f + fg2), fg], axis=-1)

    # duck-typed surface protocol shared with DirectChartSurface
    def position(self, z):
        return immerse(self, z)

    def xz(self, z) -> np.ndarray:
        return 0.5 * self.integrand(complex(z))

    def normal(self, z) -> np.ndarray:
        return gauss_map(self, z)

    def hopf(self) -> RationalComplexFunction:
        return hopf_coefficient(self).phi

    def increments(self, z, offsets) -> np.ndarray:
        """``X(z + d) - X(z)`` for each offset ``d``, integrated on short lines.

        Differences of nearby values are computed directly, so they carry
        no cancellation error from the (much larger) absolute position.
        """
        z = complex(z)
        out = np.empty((len(offsets), 3))
        for k, d in enumerate(offsets):
            if d == 0:
                out[k] = 0.0
                continue
            path = PathInPlane((Segment.line(z, z + d),))
            out[k] = np.real(path.integrate(self.integrand))
        return out

    def branch_points(self):
        return branch_points(self)


def _check_path(s: WeierstrassSurface, path: PathInPlane):
    if s.integrand_poles and path.clearance(s.integrand_poles) < PATH_CLEARANCE:
        raise PoleOnPathError(f"integration path passes within {PATH_CLEARANCE:g} of a pole")


def immerse(s: WeierstrassSurface, z: complex, path: PathInPlane | None = None) -> np.ndarray:
    """Position ``X(z)`` by adaptive quadrature along ``path``.

    Without a path the default radial-then-arc contour from the base point is
    used. A supplied path must start at the base point.
    """
    z = complex(z)
    if not s.domain.contains(z):
        raise DomainError(f"{z} is outside the domain")
    if path is None:
        if z == s.base_point:
            return np.array(s.base_value)
        path = default_path(s.domain, s.base_point, z)
    elif abs(path.start - s.base_point) > 1e-12 * max(1.0, abs(s.base_point)):
        raise ValueError("path must start at the base point")
    _check_path(s, path)
    return np.array(s.base_value) + np.real(path.integrate(s.integrand))


def period_residual(s: WeierstrassSurface, loop: PathInPlane) -> np.ndarray:
    """Real part of the loop integral of the Weierstrass integrand."""
    if not loop.is_closed():
        raise ValueError("period loop must be closed")
    _check_path(s, loop)
    return np.real(loop.integrate(s.integrand))


def conformal_factor(s: WeierstrassSurface, z: complex) -> float:
    """Metric density ``(1+|g|^2)^2 |f|^2 / 4`` at ``z``.

    Evaluated as ``(|f|(1+|g|^2))^2/4`` where ``|g| <= 1`` and as
    ``(|f g^2|(1+|g|^-2))^2/4`` elsewhere, so a zero of ``f`` meeting a pole
    of ``g`` is harmless.
    """
    z = complex(z)
    if not s.domain.contains(z):
        raise DomainError(f"{z} is outside the domain")
    try:
        gabs = abs(s.g(z))
    except PoleError:
        gabs = math.inf
    if gabs <= 1.0:
        return 0.25 * (abs(s.f(z)) * (1 + gabs * gabs)) ** 2
    inv = 0.0 if math.isinf(gabs) else 1.0 / (gabs * gabs)
    return 0.25 * (abs(s.fg2(z)) * (1 + inv)) ** 2


def conformal_factor_symbolic(s: WeierstrassSurface):
    """Conformal factor as a rational function of ``z`` and ``w = conj(z)``.

    Returns ``(numerator, denominator)`` as :class:`BivariatePoly`.
    """
    gn, gd = s.g.numerator, s.g.denominator
    fn, fd = s.f.numerator, s.f.denominator
    gd_gd = BivariatePoly.from_z(gd) * BivariatePoly.from_w(gd.conj())
    gn_gn = BivariatePoly.from_z(gn) * BivariatePoly.from_w(gn.conj())
    fn_fn = BivariatePoly.from_z(fn) * BivariatePoly.from_w(fn.conj())
    fd_fd = BivariatePoly.from_z(fd) * BivariatePoly.from_w(fd.conj())
    num = (gd_gd + gn_gn) ** 2 * fn_fn
    den = gd_gd ** 2 * fd_fd * 4
    return num, den


def bivariate_identity_residual(a, b) -> float:
    """Largest coefficient of ``a.num*b.den - b.num*a.den`` for two fractions."""
    (n1, d1), (n2, d2) = a, b
    return (n1 * d2 - n2 * d1).max_abs_coeff()


def gauss_map(s: WeierstrassSurface, z: complex) -> np.ndarray:
    """Unit normal: inverse stereographic projection (from the north pole) of ``g``."""
    z = complex(z)
    try:
        g = s.g(z)
    except PoleError:
        return np.array([0.0, 0.0, 1.0])
    if abs(g) <= 1.0:
        d = 1 + abs(g) ** 2
        return np.array([2 * g.real / d, 2 * g.imag / d, (abs(g) ** 2 - 1) / d])
    h = 1.0 / g
    d = 1 + abs(h) ** 2
    return np.array([2 * h.real / d, -2 * h.imag / d, (1 - abs(h) ** 2) / d])


def hopf_coefficient(s: WeierstrassSurface) -> QuadDiffForm:
    """Hopf differential ``-g' f / 2 dz^2`` as a simplified rational function."""
    phi = (s.g.derivative() * s.f * (-1) / 2).simplify()
    if s.domain.kind == "annulus":
        for p, _ in phi.poles():
            if s.domain.contains(p):
                raise SimplificationError(f"Hopf coefficient keeps a pole at {p}")
    return QuadDiffForm(chart=s.domain, phi=phi)


def branch_points(s: WeierstrassSurface):
    """Common zeros of ``f`` and ``f g^2`` in the domain closure, with order.

    The order is ``min(ord f, ord f g^2)``, the exponent of the leading term
    of ``X_z`` at the point.
    """
    fz = s.f.zeros()
    hz = s.fg2.zeros()
    out = []
    for p, m in fz:
        for q, k in hz:
            if abs(p - q) <= BRANCH_MATCH_TOL * max(1.0, abs(p)) and s.domain.contains(p):
                out.append((p, min(m, k)))
    return out


def second_fundamental_form(s: WeierstrassSurface, z: complex, v, w) -> float:
    """``II(v, w) = 2 Re(phi(z) (v1 + i v2)(w1 + i w2))``."""
    z = complex(z)
    for p, _ in branch_points(s):
        if abs(z - p) <= 1e-9 * max(1.0, abs(p)):
            raise BranchPointError(f"{z} is a branch point")
    phi = hopf_coefficient(s).phi(z)
    return 2.0 * (phi * complex(v[0], v[1]) * complex(w[0], w[1])).real
