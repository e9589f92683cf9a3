"""Built-in surfaces with exact data and the properties they should exhibit."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .conformal_map import EllipseDiskMap
from .errors import ParamRangeError, UnknownSurfaceError
from .rational import I, RationalComplexFunction
from .weierstrass import Domain, WeierstrassSurface

NAMES = ("henneberg", "meeks", "catenoid", "critical_catenoid", "equatorial_disk", "cerezo")

SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True, eq=False)
class DirectChartSurface:
    """Surface given by explicit harmonic coordinates on a chart.

    ``position`` maps a chart point to a 3-vector and ``xz_fn`` returns the
    complex derivative ``X_z = (X_u - i X_v)/2``. ``hopf_rf`` is the Hopf
    coefficient when it is known in closed form (``None`` means: use the
    finite-difference oracle).
    """

    name: str
    position_fn: object
    xz_fn: object
    domain: Domain
    normal_fn: object = None
    hopf_rf: RationalComplexFunction | None = None
    branch: tuple = ()
    params: dict = field(default_factory=dict)

    def position(self, z):
        return np.asarray(self.position_fn(complex(z)), dtype=float)

    def xz(self, z):
        return np.asarray(self.xz_fn(complex(z)), dtype=complex)

    def normal(self, z):
        if self.normal_fn is not None:
            return np.asarray(self.normal_fn(complex(z)), dtype=float)
        x = self.xz(z)
        n = np.cross(2 * x.real, -2 * x.imag)
        return n / np.linalg.norm(n)

    def hopf(self):
        return self.hopf_rf

    def increments(self, z, offsets):
        z = complex(z)
        x0 = self.position(z)
        return np.array([self.position(z + d) - x0 for d in offsets])

    def branch_points(self):
        return list(self.branch)


@dataclass(frozen=True)
class ExpectedProperties:
    """What the checker modules should find for a catalog surface.

    ``umbilics`` lists zeros of the Hopf differential away from branch
    points; ``None`` means the surface is totally umbilic (planar).
    """

    branch_points: tuple
    umbilics: tuple | None
    deck_invariant: bool
    free_boundary: bool
    branch_order_downstairs: int | None = None


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    form: object
    expected: ExpectedProperties
    params: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)


def catalog_list() -> list[str]:
    return list(NAMES)


_PARAMS = {
    "henneberg": {"R": 2.0},
    "meeks": {"R": 2.0},
    "catenoid": {"c": 1.0, "R": 2.0},
    "critical_catenoid": {"scale": 1.0},
    "equatorial_disk": {},
    "cerezo": {"n_points": 256},
}


def _merge_params(name, params):
    defaults = dict(_PARAMS[name])
    for key, value in (params or {}).items():
        if key not in defaults:
            raise ParamRangeError(f"{name} takes no parameter {key!r}")
        if isinstance(value, complex):
            if value.imag != 0:
                raise ParamRangeError(f"{key} must be real")
            value = value.real
        defaults[key] = float(value)
    for key in ("R",):
        if key in defaults and not defaults[key] > 1:
            raise ParamRangeError("annulus R must exceed 1")
    for key in ("c", "scale"):
        if key in defaults and not defaults[key] > 0:
            raise ParamRangeError(f"{key} must be positive")
    if "n_points" in defaults:
        n = defaults["n_points"]
        if n != int(n) or n < 16:
            raise ParamRangeError("n_points must be an integer >= 16")
        defaults["n_points"] = int(n)
    return defaults


def catalog_get(name: str, params: dict | None = None) -> CatalogEntry:
    """Look up a surface by name; ``params`` override documented defaults."""
    if name not in NAMES:
        raise UnknownSurfaceError(f"unknown surface {name!r}; known: {', '.join(NAMES)}")
    p = _merge_params(name, params)
    return _BUILDERS[name](p)


# ---------------------------------------------------------------- builders

def _z():
    return RationalComplexFunction.identity(exact=True)


def henneberg_surface(R: float = 2.0) -> WeierstrassSurface:
    z = _z()
    return WeierstrassSurface((z ** 4 - 1) / z ** 4, z, Domain.canonical_annulus(R),
                              base_point=1, base_value=(0, 0, 0), name="henneberg")


def meeks_surface(R: float = 2.0) -> WeierstrassSurface:
    z = _z()
    f = I * 2 * (z - 1) ** 2 / z ** 4
    g = z ** 2 * (z + 1) / (z - 1)
    return WeierstrassSurface(f, g, Domain.canonical_annulus(R),
                              base_point=1, base_value=(0, 0, 0), name="meeks")


def catenoid_surface(c: float = 1.0, R: float = 2.0, name: str = "catenoid") -> WeierstrassSurface:
    """Catenoid ``f = c/z^2, g = z`` with waist circle ``|z| = 1`` centred at 0."""
    z = _z()
    f = RationalComplexFunction.constant(c) / z ** 2
    return WeierstrassSurface(f, z, Domain.canonical_annulus(R),
                              base_point=1, base_value=(-c, 0.0, 0.0), name=name)


def orthogonality_residual(s: float) -> float:
    """Signed failure of the unit catenoid to meet the sphere through X(e^s) orthogonally.

    Uses the ``c = 1`` catenoid at ``z = e^s``: the planar cross product of
    the position with the outward conormal, computed from the surface
    itself. Zero exactly when the boundary circle can be scaled onto the
    unit sphere with the surface meeting it at right angles.
    """
    surf = catenoid_surface(1.0, R=max(2.0, 2 * math.exp(abs(s))))
    z = cmath.exp(s)
    x = surf.position(z)
    conormal = 2 * (z / abs(z) * surf.xz(z)).real
    return float(x[0] * conormal[2] - x[2] * conormal[0])


def critical_parameter(tol: float = 1e-13, lo: float = 0.5, hi: float = 2.0) -> float:
    """Bisection for the positive root of :func:`orthogonality_residual`."""
    flo, fhi = orthogonality_residual(lo), orthogonality_residual(hi)
    if flo * fhi > 0:
        raise ValueError("bracket does not straddle the root")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = orthogonality_residual(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def critical_catenoid_data(tol: float = 1e-13):
    """``(s0, c, R)``: boundary parameter, scale and annulus modulus."""
    s0 = critical_parameter(tol)
    c = 1.0 / math.sqrt(math.cosh(s0) ** 2 + s0 ** 2)
    return s0, c, math.exp(s0)


@lru_cache(maxsize=None)
def ellipse_disk_map(n_points: int = 256) -> EllipseDiskMap:
    return EllipseDiskMap(math.cosh(1.0), math.sinh(1.0), n_points=n_points)


def cerezo_surface(n_points: int = 256) -> DirectChartSurface:
    """``F(sin z)`` on the strip ``|Im z| <= 1``, period ``2 pi``.

    ``sin`` maps each boundary line onto the ellipse with semi-axes
    ``cosh 1, sinh 1`` and ``F`` is the conformal map of that ellipse onto
    the unit disk. The result is a planar free boundary annulus with two
    branch points, at ``z = +-pi/2``.
    """
    F = ellipse_disk_map(n_points)

    def position(z):
        y = F(cmath.sin(z))
        return (y.real, y.imag, 0.0)

    def xz(z):
        dy = F.derivative(cmath.sin(z)) * cmath.cos(z)
        return (0.5 * dy, -0.5j * dy, 0.0)

    return DirectChartSurface(
        "cerezo", position, xz, Domain.strip(1.0),
        normal_fn=lambda z: (0.0, 0.0, 1.0),
        hopf_rf=RationalComplexFunction.constant(0),
        branch=((-math.pi / 2, 1), (math.pi / 2, 1)),
        params={"conformal_map": F.to_dict()},
    )


def equatorial_disk_surface() -> DirectChartSurface:
    return DirectChartSurface(
        "equatorial_disk", lambda z: (z.real, z.imag, 0.0),
        lambda z: (0.5, -0.5j, 0.0), Domain.disk(1.0),
        normal_fn=lambda z: (0.0, 0.0, 1.0),
        hopf_rf=RationalComplexFunction.constant(0),
    )


def _henneberg(p):
    return CatalogEntry(
        "henneberg", henneberg_surface(p["R"]),
        ExpectedProperties(branch_points=((-1, 1), (-1j, 1), (1j, 1), (1, 1)),
                           umbilics=(), deck_invariant=True, free_boundary=False),
        params=p)


def _meeks(p):
    return CatalogEntry(
        "meeks", meeks_surface(p["R"]),
        ExpectedProperties(branch_points=(), umbilics=((1 - SQRT5) / 2, (1 + SQRT5) / 2),
                           deck_invariant=True, free_boundary=False),
        params=p)


def _catenoid(p):
    return CatalogEntry(
        "catenoid", catenoid_surface(p["c"], p["R"]),
        ExpectedProperties(branch_points=(), umbilics=(), deck_invariant=False,
                           free_boundary=False),
        params=p)


def _critical_catenoid(p):
    s0, c, R = critical_catenoid_data()
    scale = p["scale"]
    return CatalogEntry(
        "critical_catenoid", catenoid_surface(scale * c, R, name="critical_catenoid"),
        ExpectedProperties(branch_points=(), umbilics=(), deck_invariant=False,
                           free_boundary=scale == 1.0),
        params=p, notes={"s0": s0, "c": scale * c, "R": R})


def _equatorial_disk(p):
    return CatalogEntry(
        "equatorial_disk", equatorial_disk_surface(),
        ExpectedProperties(branch_points=(), umbilics=None, deck_invariant=False,
                           free_boundary=True),
        params=p)


def _cerezo(p):
    surf = cerezo_surface(p["n_points"])
    return CatalogEntry(
        "cerezo", surf,
        ExpectedProperties(branch_points=((-math.pi / 2, 1), (math.pi / 2, 1)), umbilics=None,
                           deck_invariant=False, free_boundary=True,
                           branch_order_downstairs=2),
        params=p,
        notes={"annulus_coordinate": "w = exp(i z)", "annulus_R": math.e,
               "conformal_map": surf.params["conformal_map"]})


_BUILDERS = {
    "henneberg": _henneberg,
    "meeks": _meeks,
    "catenoid": _catenoid,
    "critical_catenoid": _critical_catenoid,
    "equatorial_disk": _equatorial_disk,
    "cerezo": _cerezo,
}
