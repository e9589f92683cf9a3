"""Deck involution of the canonical annulus and the laws a surface must obey
to descend to the Moebius band ``A / T``.

With ``T(z) = -1/conj(z)`` and ``w = conj(z)``, the laws are checked both
numerically and as rational identities in ``w``:

    Gauss map     g(-1/w) * g*(w) = -1
    f             f(-1/w) + w^2 (f g^2)*(w) = 0
    Hopf          phi(-1/w) + w^4 phi*(w) = 0

where ``p*`` conjugates coefficients, so ``p*(conj z) = conj(p(z))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .checks import DEFAULT_TOLERANCES, CheckReport
from .errors import DomainError
from .rational import RationalComplexFunction
from .weierstrass import immerse

# z = -1/w as a Moebius map (a w + b)/(c w + d)
_INVERT = (0, -1, 1, 0)
SAMPLE_CLEARANCE = 0.1
SLIT_MARGIN = 0.05


def deck(z: complex) -> complex:
    """``T(z) = -1/conj(z)``."""
    z = complex(z)
    if z == 0:
        raise DomainError("deck map is undefined at 0")
    return -1.0 / z.conjugate()


@dataclass(frozen=True)
class DeckMap:
    """The fixed-point-free anti-holomorphic involution of ``1/R <= |z| <= R``."""

    def __call__(self, z):
        return deck(z)

    @staticmethod
    def chain_factor(z: complex) -> complex:
        """``d T / d conj(z) = 1/conj(z)^2``."""
        return 1.0 / complex(z).conjugate() ** 2


def deck_samples(R: float, n: int, seed: int = 0, slit: float = math.pi / 2,
                 avoid=(), clearance: float = SAMPLE_CLEARANCE) -> np.ndarray:
    """Random points of the annulus away from the slit rays at ``+-slit``.

    Points whose deck images come within ``clearance`` of ``avoid`` are
    also rejected, so both ``z`` and ``T(z)`` are usable.
    """
    rng = np.random.default_rng(seed)
    out = []
    avoid = [complex(a) for a in avoid]
    while len(out) < n:
        r = math.exp(rng.uniform(-math.log(R), math.log(R)))
        t = rng.uniform(-math.pi, math.pi)
        if min(abs(math.remainder(t - slit, 2 * math.pi)),
               abs(math.remainder(t + slit, 2 * math.pi))) < SLIT_MARGIN:
            continue
        z = r * complex(math.cos(t), math.sin(t))
        tz = deck(z)
        if any(abs(z - a) < clearance or abs(tz - a) < clearance for a in avoid):
            continue
        out.append(z)
    return np.array(out)


def _R(surface, R):
    if R is not None:
        return R
    dom = getattr(surface, "domain", None)
    if dom is None or dom.kind != "annulus":
        raise DomainError("deck laws live on a canonical annulus")
    return dom.R


def check_deck_invariance(surface, samples: int = 100, tol: float = DEFAULT_TOLERANCES["deck"],
                          seed: int = 0):
    """``max |X(T(z)) - X(z)|``, each position from its own contour integral."""
    R = _R(surface, None)
    pts = deck_samples(R, samples, seed, avoid=getattr(surface, "integrand_poles", []))
    res = [float(np.linalg.norm(immerse(surface, deck(z)) - immerse(surface, z))) for z in pts]
    return CheckReport.from_residuals("deck_invariance", pts, res, tol)


def _conj_image(rf: RationalComplexFunction) -> RationalComplexFunction:
    """``rf(-1/w)``."""
    return rf.compose_mobius(*_INVERT)


def gauss_law_identity(g: RationalComplexFunction) -> RationalComplexFunction:
    """``g(-1/w) g*(w) + 1``; the zero function when the law holds."""
    return (_conj_image(g) * g.conj() + 1).simplify()


def f_law_identity(f, fg2) -> RationalComplexFunction:
    w = RationalComplexFunction.identity(f.exact and fg2.exact)
    return (_conj_image(f) + w * w * fg2.conj()).simplify()


def hopf_law_identity(phi: RationalComplexFunction) -> RationalComplexFunction:
    w = RationalComplexFunction.identity(phi.exact)
    return (_conj_image(phi) + w ** 4 * phi.conj()).simplify()


def _symbolic_details(identity: RationalComplexFunction):
    return {"symbolic_residual": float(identity.numerator.max_abs_coeff()),
            "exact_mode": identity.exact}


def _law_samples(surface, samples, seed, extra_avoid=()):
    R = _R(surface, None)
    avoid = list(extra_avoid)
    for h in (surface.g,):
        avoid += [p for p, _ in h.zeros()] + [p for p, _ in h.poles()]
    return deck_samples(R, samples, seed, avoid=avoid)


def _not_applicable(name, tol):
    return CheckReport.from_residuals(name, [], [], tol, note="surface has no Weierstrass data")


def check_gauss_law(surface, samples: int = 100, tol: float = DEFAULT_TOLERANCES["gauss_law"],
                    seed: int = 0):
    """``|g(T(z)) + 1/conj(g(z))|`` at samples, plus the exact identity."""
    if not hasattr(surface, "g"):
        return _not_applicable("gauss_law", tol)
    pts = _law_samples(surface, samples, seed)
    res = [abs(surface.g(deck(z)) + 1.0 / complex(surface.g(z)).conjugate()) for z in pts]
    rep = CheckReport.from_residuals("gauss_law", pts, res, tol,
                                     **_symbolic_details(gauss_law_identity(surface.g)))
    return rep


def check_f_law(surface, samples: int = 100, tol: float = DEFAULT_TOLERANCES["f_law"],
                seed: int = 0):
    """``|f(T(z)) + conj(z^2 f(z) g(z)^2)|`` at samples, plus the exact identity."""
    if not hasattr(surface, "g"):
        return _not_applicable("f_law", tol)
    pts = _law_samples(surface, samples, seed)
    res = [abs(surface.f(deck(z)) + complex(z * z * surface.fg2(z)).conjugate()) for z in pts]
    return CheckReport.from_residuals("f_law", pts, res, tol,
                                      **_symbolic_details(f_law_identity(surface.f, surface.fg2)))


def hopf_law_values(phi: RationalComplexFunction, points) -> np.ndarray:
    """``|phi(T(z)) / conj(z)^4 + conj(phi(z))|``: pullback against ``-conj(Q)``."""
    out = []
    for z in points:
        z = complex(z)
        out.append(abs(complex(phi(deck(z))) * DeckMap.chain_factor(z) ** 2
                       + complex(phi(z)).conjugate()))
    return np.array(out)


def hopf_law_residual(source, samples: int = 100, tol: float = DEFAULT_TOLERANCES["hopf_law"],
                      seed: int = 0, R: float | None = None, points=None):
    """Hopf transformation law for a surface, or for a bare coefficient ``phi``."""
    if isinstance(source, RationalComplexFunction):
        phi = source
        if points is None:
            points = deck_samples(R or 2.0, samples, seed,
                                  avoid=[p for p, _ in phi.poles()])
    else:
        phi = source.hopf()
        if phi is None:
            return _not_applicable("hopf_law", tol)
        if points is None:
            points = _law_samples(source, samples, seed)
    return CheckReport.from_residuals("hopf_law", points, hopf_law_values(phi, points), tol,
                                      **_symbolic_details(hopf_law_identity(phi)))


# ------------------------------------------------------------ certificate

CHAIN = (
    "on a free boundary annulus the Hopf coefficient is C0/z^2 with C0 real",
    "descending to the Moebius band requires T*Q = -conj(Q) for T(z) = -1/conj(z)",
    "T*(C0/z^2 dz^2) = C0/zbar^2 dzbar^2 while -conj(Q) = -conj(C0)/zbar^2 dzbar^2",
    "equality forces C0 + conj(C0) = 0, so a real C0 must be 0",
    "C0 = 0 makes the Hopf differential vanish: the surface is totally geodesic",
    "a totally geodesic free boundary surface lies in a plane, which no Moebius band does",
)


@dataclass
class ImpossibilityCertificate:
    R: float
    C0: complex
    pullback_numerator: complex
    required_numerator: complex
    mismatch_numerator: complex
    c0_real: bool
    consistent: bool
    conclusion: str
    mismatch_samples: list
    measured_max_deviation: float
    chain: tuple = CHAIN
    pullback_coefficient: str = "T*(C0/z^2 dz^2) = C0/zbar^2 dzbar^2"
    required_law: str = "T*Q = -conj(Q) = -conj(C0)/zbar^2 dzbar^2"
    extras: dict = field(default_factory=dict)

    def mismatch(self, z: complex) -> float:
        """``|C0 + conj(C0)| / |z|^2``, equal to ``2|C0|/|z|^2`` for real C0."""
        return abs(self.mismatch_numerator) / abs(complex(z)) ** 2

    def to_dict(self):
        return {"kind": "impossibility_certificate", "R": self.R, "C0": self.C0,
                "c0_real": self.c0_real,
                "pullback_coefficient": self.pullback_coefficient,
                "pullback_numerator": self.pullback_numerator,
                "required_law": self.required_law,
                "required_numerator": self.required_numerator,
                "mismatch_numerator": self.mismatch_numerator,
                "mismatch_samples": [[z, v] for z, v in self.mismatch_samples],
                "measured_max_deviation": self.measured_max_deviation,
                "consistent": self.consistent, "conclusion": self.conclusion,
                "chain": list(self.chain)}


def certificate_points(R: float, n: int = 16) -> np.ndarray:
    """``n`` points with radii geometric from ``1/R`` to ``R`` and staggered angles."""
    j = np.arange(n)
    r = R ** (2 * j / (n - 1) - 1)
    return r * np.exp(1j * (2 * math.pi * j / n + math.pi / n))


def impossibility_certificate(R: float, C0: complex, n: int = 16) -> ImpossibilityCertificate:
    """Pull ``C0/z^2 dz^2`` back by the deck map and compare with the required law."""
    if not R > 1:
        raise DomainError("R must exceed 1")
    C0 = complex(C0)
    pts = certificate_points(R, n)
    mismatch_num = C0 + C0.conjugate()
    z = RationalComplexFunction.identity(exact=False)
    phi = RationalComplexFunction.constant(C0) / (z * z)
    measured = hopf_law_values(phi, pts)
    formula = np.abs(mismatch_num) / np.abs(pts) ** 2
    consistent = abs(C0) <= 1e-14
    if consistent:
        conclusion = ("consistent: C0 = 0, the totally geodesic case, "
                      "which is excluded because the image would be planar")
    else:
        conclusion = "inconsistent unless C0 = 0: C0 must be 0"
    return ImpossibilityCertificate(
        R=float(R), C0=C0, pullback_numerator=C0, required_numerator=-C0.conjugate(),
        mismatch_numerator=mismatch_num, c0_real=abs(C0.imag) <= 1e-14,
        consistent=consistent, conclusion=conclusion,
        mismatch_samples=[(complex(p), float(v)) for p, v in zip(pts, formula)],
        measured_max_deviation=float(np.max(np.abs(measured - formula))),
    )
