import cmath
import math

import numpy as np
import pytest

from _oracles import M_ELLIPSE, cerezo_position_oracle
from wlab.conformal_map import EllipseDiskMap, conjugate_function, ellipse_radius
from wlab.errors import ConvergenceError

A, B = math.cosh(1.0), math.sinh(1.0)


@pytest.fixture(scope="module")
def F():
    return EllipseDiskMap(A, B, n_points=256)


def test_conjugate_function_of_cosine():
    t = 2 * math.pi * np.arange(64) / 64
    np.testing.assert_allclose(conjugate_function(np.cos(3 * t) + 2), np.sin(3 * t), atol=1e-14)


def test_ellipse_radius_axes():
    assert ellipse_radius(0.0, A, B) == pytest.approx(A)
    assert ellipse_radius(math.pi / 2, A, B) == pytest.approx(B)


def test_converges(F):
    assert F.iterations < 100
    assert F.correction <= 1e-15


def test_normalization(F):
    assert F(0) == 0
    d = F.derivative(0)
    assert abs(d.imag) < 1e-14 and d.real > 0


def test_boundary_goes_to_circle(F):
    t = np.linspace(0, 2 * math.pi, 37)
    w = F(A * np.cos(t) + 1j * B * np.sin(t))
    np.testing.assert_allclose(np.abs(w), 1.0, atol=1e-12)


def test_matches_elliptic_sine(F):
    rng = np.random.default_rng(4)
    for _ in range(30):
        z = rng.uniform(-math.pi, math.pi) + 1j * rng.uniform(-1, 1)
        assert abs(F(cmath.sin(z)) - cerezo_position_oracle(z)) < 1e-10


def test_scale_matches_elliptic_modulus(F):
    # F'(0) = 2K sqrt(k) / pi, so the disk-to-ellipse scale is its inverse
    from scipy.special import ellipk
    expected = math.pi / (2 * ellipk(M_ELLIPSE) * M_ELLIPSE ** 0.25)
    assert F.to_dict()["scale"] == pytest.approx(expected, rel=1e-12)


def test_rejects_bad_axes():
    with pytest.raises(ValueError):
        EllipseDiskMap(1.0, 2.0)


def test_stalled_iteration_raises():
    with pytest.raises(ConvergenceError):
        EllipseDiskMap(A, B, n_points=64, max_iter=2)
