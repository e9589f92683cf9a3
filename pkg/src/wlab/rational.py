"""Complex polynomials and rational functions.

Two coefficient modes coexist:

* float mode: coefficients are Python ``complex``;
* exact mode: coefficients are :class:`ExactComplex` (Gaussian rationals),
  used by the catalog surfaces whose data has small integer coefficients.

Mixing an exact and a float operand always yields a float result.
Coefficient lists are stored constant term first.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import ConvergenceError, PoleError

EPS = np.finfo(float).eps
POLE_TOL = 1e-12
CLUSTER_TOL = 1e-6


class ExactComplex:
    """Gaussian rational ``re + i*im`` with :class:`~fractions.Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    @classmethod
    def coerce(cls, x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls(x, 0)
        raise TypeError(f"cannot represent {x!r} exactly")

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __eq__(self, other):
        if _is_exact(other):
            o = ExactComplex.coerce(other)
            return self.re == o.re and self.im == o.im
        if isinstance(other, numbers.Complex):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __abs__(self):
        return math.hypot(float(self.re), float(self.im))

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def conjugate(self):
        return ExactComplex(self.re, -self.im)

    def __add__(self, other):
        if _is_exact(other):
            o = ExactComplex.coerce(other)
            return ExactComplex(self.re + o.re, self.im + o.im)
        if isinstance(other, numbers.Complex):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if _is_exact(other):
            o = ExactComplex.coerce(other)
            return ExactComplex(self.re - o.re, self.im - o.im)
        if isinstance(other, numbers.Complex):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_exact(other):
            o = ExactComplex.coerce(other)
            return ExactComplex(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)
        if isinstance(other, numbers.Complex):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_exact(other):
            o = ExactComplex.coerce(other)
            den = o.re * o.re + o.im * o.im
            if den == 0:
                raise ZeroDivisionError("division by exact zero")
            return ExactComplex((self.re * o.re + self.im * o.im) / den,
                                (self.im * o.re - self.re * o.im) / den)
        if isinstance(other, numbers.Complex):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_exact(other):
            return ExactComplex.coerce(other) / self
        if isinstance(other, numbers.Complex):
            return other / complex(self)
        return NotImplemented


I = ExactComplex(0, 1)


def _is_exact(c) -> bool:
    return isinstance(c, (ExactComplex, int, Fraction)) and not isinstance(c, bool)


def _conj(c):
    return c.conjugate()


class ComplexPoly:
    """Polynomial with complex coefficients, constant term first.

    The zero polynomial has no stored coefficients and reports degree 0.
    """

    __slots__ = ("coeffs", "exact", "__dict__")

    def __init__(self, coeffs=(), exact: bool | None = None):
        cs = list(coeffs)
        if exact is None:
            exact = all(_is_exact(c) for c in cs)
        if exact:
            cs = [ExactComplex.coerce(c) for c in cs]
        else:
            cs = [complex(c) for c in cs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.exact = exact

    # construction helpers
    @classmethod
    def zero(cls, exact=True):
        return cls((), exact=exact)

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1):
        zero = 0 if _is_exact(c) else 0j
        return cls([zero] * k + [c])

    @classmethod
    def from_roots(cls, roots, leading=1):
        p = cls([leading])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def to_float(self) -> "ComplexPoly":
        return self if not self.exact else ComplexPoly(self.coeffs, exact=False)

    @cached_property
    def _high(self) -> np.ndarray:
        # highest degree first, as np.polyval expects
        if not self.coeffs:
            return np.zeros(1, dtype=complex)
        return np.array([complex(c) for c in reversed(self.coeffs)], dtype=complex)

    @cached_property
    def _abs_high(self) -> np.ndarray:
        return np.abs(self._high)

    def __call__(self, z):
        return np.polyval(self._high, z)

    def magnitude_scale(self, z):
        """sum |a_k| |z|^k, the natural size of the terms at ``z``."""
        return np.polyval(self._abs_high, np.abs(z))

    def __repr__(self):
        return f"ComplexPoly({[str(c) if self.exact else c for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c) if self.exact else f"({c.real:g}{c.imag:+g}j)"
            terms.append(cs if k == 0 else f"{cs}*z" if k == 1 else f"{cs}*z^{k}")
        return " + ".join(terms)

    # arithmetic
    def _coerce(self, other) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return other
        if isinstance(other, numbers.Complex) or isinstance(other, ExactComplex):
            return ComplexPoly([other])
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __neg__(self):
        return ComplexPoly([-c for c in self.coeffs], exact=self.exact)

    def _addsub(self, other, sign):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        exact = self.exact and other.exact
        n = max(len(self.coeffs), len(other.coeffs))
        zero = ExactComplex() if exact else 0j
        a = list(self.coeffs) + [zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [zero] * (n - len(other.coeffs))
        out = [x + y if sign > 0 else x - y for x, y in zip(a, b)]
        if not exact:
            # cancellation below the rounding level of the operands is noise
            while out and abs(out[-1]) <= 8 * EPS * max(abs(a[len(out) - 1]), abs(b[len(out) - 1])):
                out.pop()
        return ComplexPoly(out, exact=exact)

    def __add__(self, other):
        return self._addsub(other, 1)

    def __radd__(self, other):
        return self._addsub(other, 1)

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self)._addsub(other, 1)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        exact = self.exact and other.exact
        if not self.coeffs or not other.coeffs:
            return ComplexPoly((), exact=exact)
        if not exact:
            a = np.array([complex(c) for c in self.coeffs])
            b = np.array([complex(c) for c in other.coeffs])
            return ComplexPoly(np.convolve(a, b), exact=False)
        out = [ExactComplex()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return ComplexPoly(out, exact=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = ComplexPoly([1]) if self.exact else ComplexPoly([1.0])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        exact = self.exact and other.exact
        if exact:
            rem = list(self.coeffs)
        else:
            rem = [complex(c) for c in self.coeffs]
        dlead = other.coeffs[-1] if exact else complex(other.coeffs[-1])
        dcs = other.coeffs if exact else [complex(c) for c in other.coeffs]
        dn = len(dcs) - 1
        if len(rem) - 1 < dn:
            return ComplexPoly((), exact=exact), ComplexPoly(rem, exact=exact)
        quot = [None] * (len(rem) - dn)
        for k in range(len(rem) - 1, dn - 1, -1):
            q = rem[k] / dlead
            quot[k - dn] = q
            for j in range(dn + 1):
                rem[k - dn + j] = rem[k - dn + j] - q * dcs[j]
        return ComplexPoly(quot, exact=exact), ComplexPoly(rem[:dn], exact=exact)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly([k * c for k, c in enumerate(self.coeffs)][1:], exact=self.exact)

    def conj(self) -> "ComplexPoly":
        """Polynomial with conjugated coefficients, i.e. ``conj(p(conj z))``."""
        return ComplexPoly([_conj(c) for c in self.coeffs], exact=self.exact)

    def monic(self) -> "ComplexPoly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return ComplexPoly([c / lead for c in self.coeffs], exact=self.exact)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def trailing_zero_order(self) -> int:
        """Multiplicity of the root z = 0 (number of vanishing low coefficients)."""
        k = 0
        while k < len(self.coeffs) and not self.coeffs[k]:
            k += 1
        return k

    def roots(self, tol: float = 1e-10):
        return poly_roots(self, tol)


def poly_gcd(a: ComplexPoly, b: ComplexPoly) -> ComplexPoly:
    """Monic greatest common divisor of two exact polynomials (Euclid)."""
    if not (a.exact and b.exact):
        raise TypeError("exact gcd requires exact coefficients")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else ComplexPoly([1])


def _squarefree_factors(p: ComplexPoly):
    """Yun's algorithm: returns [(factor, multiplicity)] for an exact polynomial."""
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    k = 1
    while not b.is_constant():
        a = poly_gcd(b, d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if not a.is_constant():
            out.append((a, k))
        k += 1
    return out


def _aberth(high: np.ndarray, max_iter: int = 500):
    """Aberth-Ehrlich simultaneous iteration on a polynomial given highest first."""
    a = high / high[0]
    n = len(a) - 1
    da = np.polyder(a)
    # Fujiwara bound on root moduli
    k = np.arange(1, n + 1)
    bound = 2 * np.max(np.abs(a[1:]) ** (1.0 / k))
    radius = max(bound / 2, 1e-3)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    converged = False
    for _ in range(max_iter):
        pz = np.polyval(a, z)
        dz = np.polyval(da, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 1e-8 * radius)
        z = z - w
        if np.all(np.abs(w) <= 4 * EPS * np.maximum(np.abs(z), 1.0)):
            converged = True
            break
    return z, converged


def _newton_polish(high: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    d = np.polyder(high)
    for _ in range(steps):
        dz = np.polyval(d, z)
        ok = np.abs(dz) > 0
        step = np.zeros_like(z)
        step[ok] = np.polyval(high, z[ok]) / dz[ok]
        z = z - step
    return z


def _root_residual_ok(p: ComplexPoly, roots: np.ndarray, tol: float) -> bool:
    if roots.size == 0:
        return True
    res = np.abs(p(roots))
    return bool(np.all(res <= tol * p.magnitude_scale(roots) + 1e-300))


def _raw_roots(p: ComplexPoly, tol: float) -> np.ndarray:
    """All nonzero-polynomial roots of ``p`` (no zero roots), with repetition."""
    high = p.to_float()._high
    if len(high) <= 1:
        return np.zeros(0, dtype=complex)
    if len(high) == 2:
        return np.array([-high[1] / high[0]])
    z, converged = _aberth(high)
    if converged and _root_residual_ok(p, z, tol):
        return z
    z = _newton_polish(high, np.roots(high).astype(complex))
    if _root_residual_ok(p, z, tol):
        return z
    raise ConvergenceError(f"root finder did not reach tolerance {tol:g} for {p}")


def _cluster(roots: np.ndarray, radius: float = CLUSTER_TOL):
    """Single-linkage clustering; returns [(center, count)]."""
    remaining = list(roots)
    out = []
    while remaining:
        group = [remaining.pop(0)]
        grown = True
        while grown:
            grown = False
            for r in list(remaining):
                if any(abs(r - g) <= radius * max(1.0, abs(g)) for g in group):
                    group.append(r)
                    remaining.remove(r)
                    grown = True
        out.append((complex(np.mean(group)), len(group)))
    return out


def _merge_multiple(p: ComplexPoly, clusters, radius: float = 1e-3, tol: float = 1e-10):
    """Join nearby clusters that form one multiple root.

    A perturbed root of multiplicity m splits into m roots spread by about
    eps**(1/m); their centroid is still accurate. A candidate group of total
    size m is accepted only if p and its first m-1 derivatives vanish at the
    refined centroid, relative to the size of their terms.
    """
    derivs = [p]
    for _ in range(p.degree):
        derivs.append(derivs[-1].derivative())
    out = []
    pending = list(clusters)
    while pending:
        c0, m0 = pending.pop(0)
        group = [(c0, m0)] + [(c, m) for c, m in pending
                              if abs(c - c0) <= radius * max(1.0, abs(c0))]
        if len(group) > 1:
            m = sum(k for _, k in group)
            center = _refine_multiple(derivs, sum(c * k for c, k in group) / m, m)
            if all(abs(derivs[j](center)) <= tol * derivs[j].magnitude_scale(center)
                   for j in range(m)):
                for item in group[1:]:
                    pending.remove(item)
                out.append((complex(center), m))
                continue
        if m0 > 1:
            c0 = _refine_multiple(derivs, c0, m0)
        out.append((c0, m0))
    return out


def _refine_multiple(derivs, center, m):
    # the (m-1)-th derivative has a simple root at a true m-fold root
    dm, dm1 = derivs[m - 1], derivs[m]
    for _ in range(8):
        slope = dm1(center)
        if slope == 0:
            break
        center = center - dm(center) / slope
    return complex(center)


def _clean(z: complex, scale: float = 1.0) -> complex:
    # snap roundoff-level real/imaginary parts to zero for readable output
    re, im = z.real, z.imag
    if abs(re) < 1e-14 * max(scale, abs(z)):
        re = 0.0
    if abs(im) < 1e-14 * max(scale, abs(z)):
        im = 0.0
    return complex(re, im)


def poly_roots(p: ComplexPoly, tol: float = 1e-10):
    """Roots of ``p`` with multiplicities.

    Returns a list of ``(root, multiplicity)`` sorted by real then imaginary
    part; multiplicities sum to ``p.degree``. Exact polynomials are first
    split into square-free factors so multiplicities are exact; float
    polynomials infer multiplicity by clustering roots within 1e-6.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    k0 = p.trailing_zero_order()
    q = ComplexPoly(p.coeffs[k0:], exact=p.exact)
    found: list[tuple[complex, int]] = []
    if k0:
        found.append((0j, k0))
    if q.exact and q.degree >= 1:
        for factor, mult in _squarefree_factors(q):
            for r, m in _cluster(_raw_roots(factor, tol)):
                found.append((r, m * mult))
    elif q.degree >= 1:
        found.extend(_merge_multiple(q, _cluster(_raw_roots(q, tol))))
    found = [(_clean(r), m) for r, m in found]
    found.sort(key=lambda rm: (round(rm[0].real, 9), round(rm[0].imag, 9)))
    return found


class RationalComplexFunction:
    """Quotient ``numerator / denominator`` of complex polynomials.

    >>> z = RationalComplexFunction.identity()
    >>> f = (z**4 - 1) / z**4
    >>> f(1)
    0j
    """

    __slots__ = ("numerator", "denominator", "__dict__")

    def __init__(self, numerator, denominator=None):
        num = numerator if isinstance(numerator, ComplexPoly) else ComplexPoly(
            numerator if isinstance(numerator, (list, tuple)) else [numerator])
        if denominator is None:
            den = ComplexPoly([1]) if num.exact else ComplexPoly([1.0])
        else:
            den = denominator if isinstance(denominator, ComplexPoly) else ComplexPoly(
                denominator if isinstance(denominator, (list, tuple)) else [denominator])
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if num.exact != den.exact:
            num, den = num.to_float(), den.to_float()
        self.numerator = num
        self.denominator = den

    @classmethod
    def identity(cls, exact: bool = True):
        return cls(ComplexPoly([0, 1]) if exact else ComplexPoly([0.0, 1.0]))

    @classmethod
    def constant(cls, c):
        return cls(ComplexPoly([c]))

    @classmethod
    def from_coeffs(cls, num, den=(1,)):
        return cls(ComplexPoly(num), ComplexPoly(den))

    @property
    def exact(self) -> bool:
        return self.numerator.exact

    def to_float(self):
        return RationalComplexFunction(self.numerator.to_float(), self.denominator.to_float())

    def __repr__(self):
        return f"RationalComplexFunction(({self.numerator}) / ({self.denominator}))"

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"

    def __call__(self, z):
        return rf_eval(self, z)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_constant(self) -> bool:
        s = self.simplify()
        return s.numerator.is_constant() and s.denominator.is_constant()

    def constant_value(self):
        s = self.simplify()
        if not (s.numerator.is_constant() and s.denominator.is_constant()):
            raise ValueError("not a constant rational function")
        if s.numerator.is_zero():
            return ExactComplex() if s.exact else 0j
        return s.numerator.coeffs[0] / s.denominator.coeffs[0]

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, RationalComplexFunction):
            return other
        if isinstance(other, ComplexPoly):
            return RationalComplexFunction(other)
        if isinstance(other, (numbers.Complex, ExactComplex)):
            return RationalComplexFunction(ComplexPoly([other]))
        return NotImplemented

    def __neg__(self):
        return RationalComplexFunction(-self.numerator, self.denominator)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.denominator == other.denominator:
            return RationalComplexFunction(self.numerator + other.numerator, self.denominator)
        return RationalComplexFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalComplexFunction(self.numerator * other.numerator,
                                       self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalComplexFunction(self.numerator * other.denominator,
                                       self.denominator * other.numerator)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k >= 0:
            return RationalComplexFunction(self.numerator ** k, self.denominator ** k)
        return RationalComplexFunction(self.denominator ** -k, self.numerator ** -k)

    def derivative(self):
        return rf_derivative(self)

    def simplify(self, tol: float = CLUSTER_TOL):
        return rf_simplify(self, tol)

    def conj(self):
        """Coefficient-conjugated function ``z -> conj(r(conj z))``."""
        return RationalComplexFunction(self.numerator.conj(), self.denominator.conj())

    def compose_mobius(self, a, b, c, d):
        """``r((a z + b) / (c z + d))`` as a new rational function."""
        lin_num = ComplexPoly([b, a])
        lin_den = ComplexPoly([d, c])

        def homogenize(p: ComplexPoly, n: int) -> ComplexPoly:
            out = ComplexPoly.zero(exact=lin_num.exact and p.exact)
            for k, coef in enumerate(p.coeffs):
                if coef:
                    out = out + (lin_num ** k) * (lin_den ** (n - k)) * coef
            return out

        n, m = self.numerator.degree, self.denominator.degree
        top = homogenize(self.numerator, n)
        bottom = homogenize(self.denominator, m)
        if m >= n:
            top = top * lin_den ** (m - n)
        else:
            bottom = bottom * lin_den ** (n - m)
        return RationalComplexFunction(top, bottom)

    def identity_residual(self, other) -> float:
        """Largest coefficient of ``n1*d2 - n2*d1``; exactly 0 for an exact identity."""
        other = self._coerce(other)
        diff = self.numerator * other.denominator - other.numerator * self.denominator
        return float(diff.max_abs_coeff())

    def zeros(self, tol: float = 1e-10):
        s = self.simplify()
        return [] if s.numerator.is_zero() or s.numerator.is_constant() else poly_roots(s.numerator, tol)

    def poles(self, tol: float = 1e-10):
        s = self.simplify()
        return [] if s.denominator.is_constant() else poly_roots(s.denominator, tol)


def rf_eval(rf: RationalComplexFunction, z):
    """Evaluate ``rf`` at ``z`` (scalar or array).

    Points where the stored denominator vanishes are retried on the
    simplified form, so removable singularities do not raise.
    """
    num, den = rf.numerator, rf.denominator
    zz = np.asarray(z, dtype=complex)
    d = den(zz)
    bad = np.abs(d) <= POLE_TOL * den.magnitude_scale(zz)
    if np.any(bad):
        s = rf_simplify(rf)
        num, den = s.numerator, s.denominator
        d = den(zz)
        if np.any(np.abs(d) <= POLE_TOL * den.magnitude_scale(zz)):
            raise PoleError(f"{rf} has a pole at {z}")
    out = num(zz) / d
    return complex(out) if np.ndim(out) == 0 else out


def rf_derivative(rf: RationalComplexFunction) -> RationalComplexFunction:
    """Quotient rule ``(n'd - nd') / d^2``, simplified."""
    n, d = rf.numerator, rf.denominator
    if d.is_constant():
        return RationalComplexFunction(n.derivative(), d)
    out = RationalComplexFunction(n.derivative() * d - n * d.derivative(), d * d)
    return rf_simplify(out)


def _float_common_factor(num: ComplexPoly, den: ComplexPoly, tol: float) -> list[complex]:
    nroots = poly_roots(num) if num.degree >= 1 else []
    droots = poly_roots(den) if den.degree >= 1 else []
    common = []
    for r, m in nroots:
        for s, k in droots:
            if abs(r - s) <= tol * max(1.0, abs(r)):
                common.extend([0.5 * (r + s)] * min(m, k))
    return common


def rf_simplify(rf: RationalComplexFunction, tol: float = CLUSTER_TOL) -> RationalComplexFunction:
    """Cancel common factors and make the denominator monic.

    Exact data uses a polynomial gcd; float data matches roots of numerator
    and denominator within ``tol`` and divides the common factor out.
    """
    cached = rf.__dict__.get("_simplified")
    if cached is not None:
        return cached
    num, den = rf.numerator, rf.denominator
    if num.is_zero():
        out = RationalComplexFunction(ComplexPoly.zero(exact=num.exact),
                                      ComplexPoly([1]) if num.exact else ComplexPoly([1.0]))
    elif num.exact:
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        lead = den.leading
        out = RationalComplexFunction(
            ComplexPoly([c / lead for c in num.coeffs], exact=True), den.monic())
    else:
        # zero roots are cancelled structurally, the rest by root matching
        k = min(num.trailing_zero_order(), den.trailing_zero_order())
        num = ComplexPoly(num.coeffs[k:], exact=False)
        den = ComplexPoly(den.coeffs[k:], exact=False)
        common = _float_common_factor(num, den, tol) if num.degree and den.degree else []
        if common:
            c = ComplexPoly.from_roots(common).to_float()
            num, den = num // c, den // c
        lead = den.leading
        out = RationalComplexFunction(
            ComplexPoly([x / lead for x in num.coeffs], exact=False), den.monic())
    rf.__dict__["_simplified"] = out
    out.__dict__["_simplified"] = out
    return out


class BivariatePoly:
    """Polynomial in two independent variables ``(z, w)``.

    Used for real-valued expressions such as the conformal factor, written
    in ``z`` and ``w = conj(z)``. Stored as ``{(i, j): coefficient}``.
    """

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def from_z(cls, p: ComplexPoly):
        return cls({(i, 0): c for i, c in enumerate(p.coeffs)})

    @classmethod
    def from_w(cls, p: ComplexPoly):
        return cls({(0, j): c for j, c in enumerate(p.coeffs)})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return BivariatePoly(out)

    def __neg__(self):
        return BivariatePoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BivariatePoly):
            return BivariatePoly({k: v * other for k, v in self.terms.items()})
        out = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                out[key] = out[key] + a * b if key in out else a * b
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BivariatePoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, z, w):
        return sum(complex(c) * z ** i * w ** j for (i, j), c in self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)
