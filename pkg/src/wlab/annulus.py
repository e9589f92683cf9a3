"""Hopf differentials on the canonical annulus ``1/R <= |z| <= R``.

On a free boundary annulus ``z^2 phi(z)`` is a real constant ``C0``; this
module fits that constant, classifies surfaces accordingly and provides the
automorphisms of the annulus.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .checks import DEFAULT_TOLERANCES, fd_hopf_oracle
from .errors import DomainError
from .rational import RationalComplexFunction


class AnnulusClass(str, Enum):
    TOTALLY_GEODESIC = "TotallyGeodesic"
    REGULAR_FREE_OF_UMBILICS = "RegularFreeOfUmbilics"
    NOT_FREE_BOUNDARY_FORM = "NotFreeBoundaryForm"


@dataclass
class HopfFitResult:
    C0: complex
    residual: float
    samples: int
    symbolic: bool
    exact_constant: bool | None = None

    def to_dict(self):
        return {"kind": "hopf_fit", "C0": self.C0, "residual": self.residual,
                "samples": self.samples, "symbolic": self.symbolic,
                "exact_constant": self.exact_constant}


def sample_points(domain, n_angles: int = 32):
    """Two circles at geometrically spaced radii, ``n_angles`` points each."""
    theta = 2 * math.pi * (np.arange(n_angles) + 0.5) / n_angles
    if domain.kind == "annulus":
        radii = (domain.R ** (-1 / 3), domain.R ** (1 / 3))
    elif domain.kind == "disk":
        radii = (0.5 * domain.radius, 0.75 * domain.radius)
    elif domain.kind == "punctured_plane":
        radii = (0.5 ** (1 / 3), 2 ** (1 / 3))
    else:
        # strip: rows at heights -h/3 and h/3
        u = (domain.period or 2 * math.pi) * theta / (2 * math.pi) - math.pi
        h = domain.half_width
        return np.concatenate([u - 1j * h / 3, u + 1j * h / 3])
    return np.concatenate([r * np.exp(1j * theta) for r in radii])


def _annulus_coefficient(domain, z, phi_z):
    """``w^2 phi_w`` in the annulus coordinate.

    Circle charts use ``z`` itself; strip charts use ``w = e^{iz}``, for
    which ``w^2 phi_w = -phi_z``.
    """
    return -phi_z if domain.kind == "strip" else z * z * phi_z


def fit_c0(surface, n_angles: int = 32) -> HopfFitResult:
    """Fit ``phi = C0 / z^2``.

    With a closed-form Hopf coefficient, ``z^2 phi`` is simplified and tested
    for being a constant rational function; the sampled mean and maximal
    deviation are reported either way.
    """
    dom = surface.domain
    pts = sample_points(dom, n_angles)
    phi = surface.hopf()
    exact_constant = None
    if phi is not None:
        if dom.kind == "strip":
            c0_rf = (phi * (-1)).simplify()
        else:
            z = RationalComplexFunction.identity(phi.exact)
            c0_rf = (z * z * phi).simplify()
        if c0_rf.is_constant():
            c0 = complex(c0_rf.constant_value())
            return HopfFitResult(c0, 0.0, len(pts), True, True)
        exact_constant = False
        vals = np.array([_annulus_coefficient(dom, z, complex(phi(z))) for z in pts])
    else:
        vals = np.array([_annulus_coefficient(dom, z, fd_hopf_oracle(surface, z)) for z in pts])
    c0 = complex(np.mean(vals))
    return HopfFitResult(c0, float(np.max(np.abs(vals - c0))), len(pts), phi is not None,
                         exact_constant)


@dataclass
class AnnulusClassification:
    kind: AnnulusClass
    fit: HopfFitResult
    branch_points: list
    hopf_zeros: list

    def to_dict(self):
        return {"kind": "annulus_class", "class": self.kind.value, "fit": self.fit.to_dict(),
                "branch_points": [p for p, _ in self.branch_points],
                "hopf_zeros": self.hopf_zeros}


def classify_annulus(surface, tol: float | None = None) -> AnnulusClassification:
    """Totally geodesic, regular without umbilics, or not of the ``C0/z^2`` form."""
    fit = fit_c0(surface)
    if tol is None:
        tol = DEFAULT_TOLERANCES["fit_symbolic" if fit.symbolic else "fit_sampled"]
    phi = surface.hopf()
    dom = surface.domain
    branch = list(surface.branch_points())
    zeros = []
    if phi is not None and not phi.is_zero():
        zeros = [p for p, _ in phi.zeros() if dom.contains(p)]
    if fit.residual <= tol and abs(fit.C0) <= tol and (phi is None or phi.is_zero()):
        kind = AnnulusClass.TOTALLY_GEODESIC
    elif fit.residual <= tol and abs(fit.C0) > tol:
        kind = AnnulusClass.REGULAR_FREE_OF_UMBILICS
        if branch or zeros:
            raise AssertionError("C0/z^2 form with branch points or umbilics")
    else:
        kind = AnnulusClass.NOT_FREE_BOUNDARY_FORM
    return AnnulusClassification(kind, fit, branch, zeros)


@dataclass(frozen=True)
class AnnulusAutomorphism:
    """``z -> e^{i theta0} z`` (rotation) or ``z -> e^{i theta0}/z`` (inversion)."""

    theta0: float
    kind: str = "rotation"
    R: float = 2.0

    def __post_init__(self):
        if self.kind not in ("rotation", "inversion"):
            raise ValueError("kind is rotation or inversion")
        if not self.R > 1:
            raise ValueError("R must exceed 1")

    @property
    def mobius(self):
        """Coefficients ``(a, b, c, d)`` of ``(az + b)/(cz + d)``."""
        u = cmath.exp(1j * self.theta0)
        return (u, 0, 0, 1) if self.kind == "rotation" else (0, u, 1, 0)

    def compose(self, other: "AnnulusAutomorphism") -> "AnnulusAutomorphism":
        """``self o other``."""
        if self.kind == "rotation":
            kind = other.kind
            t = self.theta0 + other.theta0
        else:
            kind = "rotation" if other.kind == "inversion" else "inversion"
            t = self.theta0 - other.theta0
        return AnnulusAutomorphism(math.remainder(t, 2 * math.pi), kind, self.R)


def apply_automorphism(a: AnnulusAutomorphism, z: complex) -> complex:
    z = complex(z)
    r = abs(z)
    if not (1 / a.R) * (1 - 1e-12) <= r <= a.R * (1 + 1e-12):
        raise DomainError(f"{z} is outside the annulus with R = {a.R}")
    u = cmath.exp(1j * a.theta0)
    return u * z if a.kind == "rotation" else u / z


def pullback_quadratic(phi: RationalComplexFunction, a: AnnulusAutomorphism):
    """Coefficient of ``psi^*(phi dz^2) = phi(psi(z)) psi'(z)^2 dz^2``."""
    psi = RationalComplexFunction.identity(exact=False).compose_mobius(*a.mobius)
    dpsi = psi.derivative()
    return (phi.compose_mobius(*a.mobius) * dpsi * dpsi).simplify()
