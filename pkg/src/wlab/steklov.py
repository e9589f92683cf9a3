"""Steklov spectra of flat cylinders ``[-L, L] x S^1`` and their Moebius quotients.

The canonical annulus ``1/R <= |z| <= R`` is conformal to the cylinder with
``L = log R`` via ``z = e^{s + i theta}``. Harmonic functions separate as
``(a cosh(ks) + b sinh(ks)) e^{ik theta}``, so the Dirichlet-to-Neumann map
splits into 2x2 blocks, one per Fourier mode ``k``. Boundary weights
``rho_1, rho_2`` (circles ``s = -L`` and ``s = L``) enter as
``d_nu u = sigma rho_i u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError, WeightMismatchError

PARITY_ORDER = {"even": 0, "odd": 1, "mixed": 2, "none": 3}


@dataclass(frozen=True)
class CylinderGeometry:
    L: float
    weights: tuple = (1.0, 1.0)

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("half length must be positive")
        w = tuple(float(x) for x in self.weights)
        if len(w) != 2 or min(w) <= 0:
            raise ValueError("need two positive boundary weights")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_annulus(cls, R: float, weights=(1.0, 1.0)):
        return cls(math.log(R), weights)

    @property
    def boundary_length(self) -> float:
        """Weighted length of the boundary: ``2 pi (rho_1 + rho_2)``."""
        return 2 * math.pi * sum(self.weights)


@dataclass(frozen=True)
class SpectrumEntry:
    sigma: float
    mode: int
    parity: str
    multiplicity: int
    vector: tuple = ()

    def to_dict(self):
        return {"sigma": self.sigma, "mode": self.mode, "parity": self.parity,
                "multiplicity": self.multiplicity}


@dataclass
class SteklovSpectrum:
    entries: list
    label: str = "cylinder"
    geometry: dict = field(default_factory=dict)

    def values(self) -> np.ndarray:
        """Eigenvalues repeated according to multiplicity."""
        return np.array([e.sigma for e in self.entries for _ in range(e.multiplicity)])

    def to_dict(self):
        return {"kind": "steklov_spectrum", "label": self.label, "geometry": self.geometry,
                "entries": [e.to_dict() for e in self.entries]}


def _mode_blocks(k: int, L: float):
    """``(t, c)``: Neumann data of the even and odd normalized extensions."""
    if k == 0:
        return 0.0, 1.0 / L
    return k * math.tanh(k * L), k / math.tanh(k * L)


def dtn_mode_matrix(geom: CylinderGeometry, k: int) -> np.ndarray:
    """Weighted Dirichlet-to-Neumann block on boundary values ``(u(-L), u(L))``.

    Unweighted it is ``[[t+c, t-c], [t-c, t+c]]/2`` with ``t = k tanh(kL)``,
    ``c = k coth(kL)`` (``t = 0``, ``c = 1/L`` for ``k = 0``); weights are
    applied symmetrically as ``W^{-1/2} D W^{-1/2}``.
    """
    if k < 0:
        raise ValueError("mode must be nonnegative")
    t, c = _mode_blocks(k, geom.L)
    d = 0.5 * np.array([[t + c, t - c], [t - c, t + c]])
    s = 1.0 / np.sqrt(np.array(geom.weights))
    return d * np.outer(s, s)


def _parity(vec, tol=1e-9):
    a, b = vec
    if abs(a - b) <= tol * max(abs(a), abs(b)):
        return "even"
    if abs(a + b) <= tol * max(abs(a), abs(b)):
        return "odd"
    return "mixed"


def _mode_entries(geom: CylinderGeometry, k: int):
    m = dtn_mode_matrix(geom, k)
    vals, vecs = np.linalg.eigh(m)
    s = 1.0 / np.sqrt(np.array(geom.weights))
    out = []
    for j in range(2):
        x = s * vecs[:, j]  # boundary values of the eigenfunction
        x = x / x[np.argmax(np.abs(x))]
        # constants are exact zero modes; eigh leaves roundoff there
        sigma = 0.0 if k == 0 and j == 0 else float(vals[j])
        out.append(SpectrumEntry(sigma, k, _parity(x), 1 if k == 0 else 2, tuple(x)))
    return out


def _sort_key(e: SpectrumEntry):
    return (e.sigma, e.mode, PARITY_ORDER[e.parity])


def _take(entries, count):
    out, total = [], 0
    for e in entries:
        if total >= count:
            break
        out.append(e)
        total += e.multiplicity
    if total < count:
        raise TruncationError(f"only {total} eigenvalues available; raise max_mode")
    return out


def _truncation_bound(geom: CylinderGeometry, max_mode: int) -> float:
    """Lower bound for every eigenvalue of modes above ``max_mode``."""
    k = max_mode + 1
    return k * math.tanh(k * geom.L) / max(geom.weights)


def steklov_spectrum(geom: CylinderGeometry, max_mode: int = 16, count: int = 10):
    """The lowest ``count`` eigenvalues (with multiplicity) over modes ``0..max_mode``."""
    entries = sorted((e for k in range(max_mode + 1) for e in _mode_entries(geom, k)),
                     key=_sort_key)
    chosen = _take(entries, count)
    if chosen[-1].sigma > _truncation_bound(geom, max_mode):
        raise TruncationError(
            f"modes above {max_mode} may undercut the requested eigenvalues; raise max_mode")
    return SteklovSpectrum(chosen, "cylinder", {"L": geom.L, "weights": list(geom.weights)})


def moebius_spectrum(geom: CylinderGeometry, max_mode: int = 16, count: int = 10):
    """Eigenvalues of eigenfunctions with ``u(-s, theta + pi) = u(s, theta)``.

    Mode ``k`` picks up ``(-1)^k`` from the rotation, so even modes keep the
    ``s``-even branch and odd modes the ``s``-odd one.
    """
    r1, r2 = geom.weights
    if r1 != r2:
        raise WeightMismatchError("the Moebius quotient needs equal boundary weights")
    entries = sorted((e for k in range(max_mode + 1) for e in _mode_entries(geom, k)
                      if e.parity == ("even" if k % 2 == 0 else "odd")), key=_sort_key)
    chosen = _take(entries, count)
    if chosen[-1].sigma > _truncation_bound(geom, max_mode):
        raise TruncationError(
            f"modes above {max_mode} may undercut the requested eigenvalues; raise max_mode")
    return SteklovSpectrum(chosen, "moebius", {"L": geom.L, "weights": list(geom.weights)})


def disk_spectrum(max_mode: int = 16, count: int = 10, radius: float = 1.0):
    """Unit disk scaled by ``radius``: ``0, 1, 1, 2, 2, ...`` over ``radius``."""
    entries = [SpectrumEntry(0.0, 0, "none", 1)]
    entries += [SpectrumEntry(k / radius, k, "none", 2) for k in range(1, max_mode + 1)]
    return SteklovSpectrum(_take(entries, count), "disk", {"radius": radius})


def eigenfunction(geom: CylinderGeometry, entry: SpectrumEntry, phase: float = 0.0):
    """A real eigenfunction ``u(s, theta)`` for a cylinder spectrum entry.

    ``phase`` selects among the ``cos``/``sin`` pair (``0`` and ``pi/2``).
    """
    k, L = entry.mode, geom.L
    x1, x2 = entry.vector
    a, b = 0.5 * (x1 + x2), 0.5 * (x2 - x1)

    def u(s, theta):
        s = np.asarray(s, dtype=float)
        if k == 0:
            radial = a + b * s / L
        else:
            radial = a * np.cosh(k * s) / math.cosh(k * L) + b * np.sinh(k * s) / math.sinh(k * L)
        return radial * np.cos(k * np.asarray(theta) - phase)

    return u


def normalized_eigenvalue(spectrum: SteklovSpectrum, k: int, boundary_length: float) -> float:
    """``sigma_k * boundary_length`` with ``sigma_0 = 0`` and multiplicity counted."""
    vals = spectrum.values()
    if not 0 <= k < len(vals):
        raise IndexError(f"spectrum has {len(vals)} eigenvalues, asked for index {k}")
    return float(vals[k]) * boundary_length


def multiplicity_report(spectrum: SteklovSpectrum, k: int, tol: float = 1e-9) -> int:
    """How many eigenvalues (with multiplicity) lie within ``tol`` of ``sigma_k``."""
    vals = spectrum.values()
    if not 0 <= k < len(vals):
        raise IndexError(f"spectrum has {len(vals)} eigenvalues, asked for index {k}")
    return int(np.sum(np.abs(vals - vals[k]) <= tol))


def spectrum_csv(spectrum: SteklovSpectrum) -> str:
    lines = ["index,sigma,mode,parity,multiplicity"]
    for i, e in enumerate(spectrum.entries):
        lines.append(f"{i},{e.sigma:.17g},{e.mode},{e.parity},{e.multiplicity}")
    return "\n".join(lines) + "\n"
