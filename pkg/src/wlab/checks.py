"""Numerical checks: harmonicity and conformality, the free boundary
condition, boundary reality of the Hopf differential, a finite-difference
Hopf oracle, and leading-order expansions at branch points.

Checks report rather than raise, so negative controls can be asserted on.
Surfaces are duck-typed: anything with ``domain``, ``position(z)``,
``xz(z)``, ``normal(z)``, ``hopf()``, ``increments(z, offsets)`` and
``branch_points()`` works.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FitAmbiguousError

DEFAULT_TOLERANCES = {
    "minimal": 1e-4,
    "free_boundary": 1e-8,
    "hopf_boundary": 1e-8,
    "deck": 1e-8,
    "gauss_law": 1e-12,
    "f_law": 1e-12,
    "hopf_law": 1e-12,
    "fit_symbolic": 1e-10,
    "fit_sampled": 1e-6,
}

BRANCH_CLEARANCE = 0.1


@dataclass
class CheckReport:
    check_name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    worst_point: complex | None
    details: dict = field(default_factory=dict)

    @classmethod
    def from_residuals(cls, name, points, residuals, tol, **details):
        residuals = np.asarray(residuals, dtype=float)
        if residuals.size == 0:
            return cls(name, 0, math.inf, tol, False, None, details)
        worst = int(np.argmax(residuals))  # first index wins ties
        value = float(residuals[worst])
        return cls(name, int(residuals.size), value, tol, bool(value <= tol),
                   complex(points[worst]), details)

    def to_dict(self):
        out = {"kind": "check", "check_name": self.check_name, "samples": self.samples,
               "max_residual": self.max_residual, "tolerance": self.tolerance,
               "passed": self.passed, "worst_point": self.worst_point}
        if self.details:
            out["details"] = self.details
        return out


def _avoid(surface):
    pts = [p for p, _ in surface.branch_points()]
    pts += list(getattr(surface, "integrand_poles", []))
    return pts


def _clear(z, avoid, clearance):
    return all(abs(z - p) >= clearance for p in avoid)


def _step(z, h):
    return h if h is not None else 1e-5 * max(abs(z), 1.0)


def check_minimal_immersion(surface, grid=None, tol: float = DEFAULT_TOLERANCES["minimal"],
                            clearance: float = BRANCH_CLEARANCE, h: float | None = None):
    """Five-point Laplacian of each coordinate and the two conformality defects.

    The residual at a point is the largest of ``|Delta X|``,
    ``| |X_u| - |X_v| |`` and ``|<X_u, X_v>|``.
    """
    if grid is None:
        grid = surface.domain.grid(20, 20)
    avoid = _avoid(surface)
    pts, res = [], []
    for z in np.ravel(grid):
        z = complex(z)
        if not _clear(z, avoid, clearance):
            continue
        hz = _step(z, h)
        d = surface.increments(z, [hz, -hz, 1j * hz, -1j * hz])
        lap = (d[0] + d[1] + d[2] + d[3]) / hz ** 2
        xu = (d[0] - d[1]) / (2 * hz)
        xv = (d[2] - d[3]) / (2 * hz)
        r = max(float(np.max(np.abs(lap))),
                abs(float(np.linalg.norm(xu) - np.linalg.norm(xv))),
                abs(float(xu @ xv)))
        pts.append(z)
        res.append(r)
    return CheckReport.from_residuals("minimal", pts, res, tol)


def conormal_derivative(surface, z, direction) -> np.ndarray:
    """Derivative of X along the chart direction ``direction`` (a complex number)."""
    return 2.0 * np.real(direction * surface.xz(z))


def check_free_boundary(surface, samples: int = 64,
                        tol: float = DEFAULT_TOLERANCES["free_boundary"]):
    """Boundary on the unit sphere, and conormal parallel to the position there.

    Residual per sample: ``max(| |X| - 1 |, |nu - (nu.X/|X|) X/|X||)`` with
    ``nu`` the outward conormal derivative.
    """
    dom = surface.domain
    if not dom.has_boundary():
        return CheckReport.from_residuals("free_boundary", [], [], tol,
                                          note="domain has no boundary")
    pts, res = [], []
    for z, n in dom.boundary_samples(samples):
        x = surface.position(z)
        nu = conormal_derivative(surface, z, n)
        r = np.linalg.norm(x)
        xhat = x / r if r > 0 else x
        tangential = nu - (nu @ xhat) * xhat
        pts.append(z)
        res.append(max(abs(r - 1.0), float(np.linalg.norm(tangential))))
    return CheckReport.from_residuals("free_boundary", pts, res, tol)


def boundary_tangent(domain, z):
    """Tangent direction of the boundary through ``z``: ``iz`` on circles, 1 on strip edges."""
    return 1.0 + 0j if domain.kind == "strip" else 1j * z


def hopf_value(surface, z) -> complex:
    """Hopf coefficient at ``z``: closed form when known, oracle otherwise."""
    phi = surface.hopf()
    if phi is not None:
        return complex(phi(z))
    return fd_hopf_oracle(surface, z)


def check_hopf_real_on_boundary(surface, samples: int = 64,
                                tol: float = DEFAULT_TOLERANCES["hopf_boundary"]):
    """``Im(phi(z) t^2)`` along the boundary, ``t`` the boundary tangent.

    Residuals are divided by ``max(1, max |phi t^2|)`` so the test is
    insensitive to the overall size of the surface.
    """
    dom = surface.domain
    if not dom.has_boundary():
        return CheckReport.from_residuals("hopf_boundary", [], [], tol,
                                          note="domain has no boundary")
    pts = [z for z, _ in dom.boundary_samples(samples)]
    vals = np.array([hopf_value(surface, z) * boundary_tangent(dom, z) ** 2 for z in pts])
    scale = max(1.0, float(np.max(np.abs(vals))))
    return CheckReport.from_residuals("hopf_boundary", pts, np.abs(vals.imag) / scale, tol)


def fd_hopf_oracle(surface, z, h: float | None = None) -> complex:
    """``<X_zz, N>`` from a nine-point stencil of positions.

    ``X_zz = (X_uu - X_vv - 2i X_uv)/4``; ``N`` is the surface normal.
    """
    z = complex(z)
    h = h if h is not None else 1e-4 * max(abs(z), 1.0)
    offs = [h, -h, 1j * h, -1j * h, h + 1j * h, h - 1j * h, -h + 1j * h, -h - 1j * h]
    d = surface.increments(z, offs)
    xuu = (d[0] + d[1]) / h ** 2
    xvv = (d[2] + d[3]) / h ** 2
    xuv = (d[4] - d[5] - d[6] + d[7]) / (4 * h ** 2)
    xzz = 0.25 * (xuu - xvv - 2j * xuv)
    return complex(xzz @ surface.normal(z))


@dataclass
class BranchExpansion:
    center: complex
    order: int
    leading: np.ndarray
    isotropy_residual: float
    limit_normal: np.ndarray
    fit_residuals: dict

    def to_dict(self):
        return {"kind": "branch_expansion", "center": self.center, "order": self.order,
                "leading": list(self.leading), "isotropy_residual": self.isotropy_residual,
                "limit_normal": list(self.limit_normal),
                "fit_residuals": {str(k): v for k, v in self.fit_residuals.items()}}


def branch_expansion(surface, p, radius: float = 1e-2, samples: int = 64,
                     max_order: int = 6) -> BranchExpansion:
    """Least-squares fit of ``X_z`` near ``p`` by ``A (z - p)^nu``, ``nu = 1..max_order``.

    Residuals are relative rms misfits. The fit is rejected as ambiguous
    when the runner-up order fits within a factor 2 of the best one.
    """
    p = complex(p)
    w = radius * np.exp(2j * math.pi * np.arange(samples) / samples)
    xz = np.array([surface.xz(p + wk) for wk in w])
    norm = math.sqrt(float(np.sum(np.abs(xz) ** 2)))
    fits = {}
    for nu in range(1, max_order + 1):
        basis = w ** nu
        a = (basis.conj() @ xz) / float(np.sum(np.abs(basis) ** 2))
        miss = xz - np.outer(basis, a)
        fits[nu] = (math.sqrt(float(np.sum(np.abs(miss) ** 2))) / norm if norm else math.inf, a)
    ranked = sorted(fits, key=lambda k: fits[k][0])
    best, second = ranked[0], ranked[1]
    if fits[second][0] <= 2 * fits[best][0]:
        raise FitAmbiguousError(
            f"orders {best} and {second} fit equally well at {p} (no branch point here?)")
    a = fits[best][1]
    alpha, beta = 2 * a.real, -2 * a.imag
    n = np.cross(alpha, beta)
    return BranchExpansion(p, best, a, float(abs(a @ a)), n / np.linalg.norm(n),
                           {k: v[0] for k, v in fits.items()})


def normal_limits(surface, p, radius: float = 1e-6, rays: int = 8) -> np.ndarray:
    """Surface normals at ``p + radius e^{i t}`` along ``rays`` equally spaced rays."""
    return np.array([surface.normal(complex(p) + radius * np.exp(2j * math.pi * k / rays))
                     for k in range(rays)])
