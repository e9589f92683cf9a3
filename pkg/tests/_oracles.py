"""Independent reference implementations used only by the tests."""

import cmath
import math

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.optimize import brentq
from scipy.sparse.linalg import splu
from scipy.special import ellipj, ellipk


def henneberg_position(z):
    z = complex(z)
    return np.real([(1 - z * z) ** 3 / (6 * z ** 3),
                    1j * (1 + z * z) ** 3 / (6 * z ** 3),
                    (1 - z * z) ** 2 / (2 * z * z)])


def meeks_position(z):
    # term-by-term antiderivatives of (f(1-g^2)/2, i f(1+g^2)/2, f g), f g^2 = 2i(z+1)^2
    z = complex(z)
    a = -1 / z + 1 / z ** 2 - 1 / (3 * z ** 3)  # integral of (z-1)^2/z^4
    b = (z + 1) ** 3 / 3  # integral of (z+1)^2
    return np.real([1j * (a - b), -(a + b) + 7 / 3, 2j * (z + 1 / z)])


def catenoid_position(z, c):
    z = complex(z)
    return np.real([c / 2 * (-1 / z - z), 1j * c / 2 * (z - 1 / z), c * cmath.log(z)])


def henneberg_conformal_factor(z):
    z = complex(z)
    return (1 + abs(z) ** 2) ** 2 * abs(z ** 4 - 1) ** 2 / (4 * abs(z) ** 8)


def meeks_conformal_factor(z):
    z = complex(z)
    return (abs(z - 1) ** 2 + abs(z) ** 4 * abs(z + 1) ** 2) ** 2 / abs(z) ** 8


def central_difference(fun, z, h=1e-6):
    return (fun(z + h) - fun(z - h)) / (2 * h)


# ---------------------------------------------------- ellipse to disk map

def _elliptic_modulus_for_nome(q):
    return brentq(lambda m: math.exp(-math.pi * ellipk(1 - m) / ellipk(m)) - q, 1e-14, 1 - 1e-14)


M_ELLIPSE = _elliptic_modulus_for_nome(math.exp(-4.0))


def _sn(z, m):
    x, y = z.real, z.imag
    s, c, d, _ = ellipj(x, m)
    s1, c1, d1, _ = ellipj(y, 1 - m)
    return (s * d1 + 1j * c * d * s1 * c1) / (c1 ** 2 + m * s ** 2 * s1 ** 2)


def cerezo_position_oracle(z):
    """``F(sin z)`` in closed form: ``sqrt(k) sn(2Kz/pi; k)`` with nome ``e^-4``."""
    m = M_ELLIPSE
    K = ellipk(m)
    return math.sqrt(math.sqrt(m)) * _sn(2 * K * complex(z) / math.pi, m)


# ------------------------------------------------- Steklov by finite differences

def fd_steklov_cylinder(L, n_s=200, n_theta=200, weights=(1.0, 1.0), count=4):
    """Lowest Steklov eigenvalues of ``[-L, L] x S^1`` from a 5-point stiffness matrix.

    Nodes ``s_0 = -L .. s_{n_s-1} = L`` by ``n_theta`` periodic angles; the
    interior is eliminated by a sparse LU (Schur complement).
    """
    hs = 2 * L / (n_s - 1)
    ht = 2 * math.pi / n_theta
    idx = np.arange(n_s * n_theta).reshape(n_s, n_theta)
    rows, cols, vals = [], [], []

    def edge(a, b, w):
        rows.extend([a, b, a, b])
        cols.extend([a, b, b, a])
        vals.extend([w, w, -w, -w])

    for i in range(n_s):
        wt = hs / ht * (0.5 if i in (0, n_s - 1) else 1.0)
        for j in range(n_theta):
            edge(idx[i, j], idx[i, (j + 1) % n_theta], wt)
            if i + 1 < n_s:
                edge(idx[i, j], idx[i + 1, j], ht / hs)
    K = sp.csc_matrix((vals, (rows, cols)), shape=(idx.size, idx.size))
    bnd = np.concatenate([idx[0], idx[-1]])
    inner = idx[1:-1].ravel()
    Kii = K[inner][:, inner].tocsc()
    Kib = K[inner][:, bnd].toarray()
    Kbb = K[bnd][:, bnd].toarray()
    S = Kbb - Kib.T @ splu(Kii).solve(Kib)
    S = 0.5 * (S + S.T)
    mass = np.concatenate([np.full(n_theta, weights[0] * ht), np.full(n_theta, weights[1] * ht)])
    vals = eigh(S, np.diag(mass), eigvals_only=True, subset_by_index=[0, count - 1])
    return np.maximum(vals, 0.0)
