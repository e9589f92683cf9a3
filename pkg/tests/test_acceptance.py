"""One test per acceptance criterion; the terminal summary prints a PASS/FAIL line for each."""

import cmath
import math
import shutil
import subprocess
import sys
import time
from collections import Counter

import numpy as np
import pytest
from scipy.optimize import brentq

from _oracles import fd_steklov_cylinder
from wlab.annulus import fit_c0
from wlab.catalog import catalog_get, critical_parameter
from wlab.checks import (branch_expansion, check_free_boundary, check_hopf_real_on_boundary,
                         fd_hopf_oracle, normal_limits)
from wlab.moebius import (check_deck_invariance, check_f_law, check_gauss_law,
                          hopf_law_residual, impossibility_certificate)
from wlab.rational import I, BivariatePoly, RationalComplexFunction as RF, poly_roots
from wlab.steklov import (CylinderGeometry, disk_spectrum, dtn_mode_matrix, moebius_spectrum,
                          normalized_eigenvalue, steklov_spectrum)
from wlab.weierstrass import (bivariate_identity_residual, branch_points,
                              conformal_factor_symbolic, hopf_coefficient)

RESULTS = {}  # criterion -> list of (part, ok, detail)


def record(n, part, ok, detail):
    RESULTS.setdefault(n, []).append((part, bool(ok), detail))
    print(f"criterion {n} [{part}]: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def summary_lines():
    out = []
    for n in sorted(RESULTS):
        parts = RESULTS[n]
        ok = all(p[1] for p in parts)
        bad = [f"{name}: {detail}" for name, good, detail in parts if not good]
        tail = "; ".join(bad) if bad else "; ".join(f"{name}: {d}" for name, _, d in parts)
        out.append(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {tail}")
    return out


def form(name, **params):
    return catalog_get(name, params or None).form


def annulus_points(surface, n, seed, clearance=0.1, R=2.0):
    avoid = [p for p, _ in branch_points(surface)] + list(surface.integrand_poles)
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        z = math.exp(rng.uniform(-math.log(R), math.log(R))) * cmath.exp(
            1j * rng.uniform(-math.pi, math.pi))
        if all(abs(z - a) >= clearance for a in avoid):
            pts.append(z)
    return pts


# 1 ------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["henneberg", "meeks"])
def test_criterion_1_hopf_oracle_agreement(name):
    s = form(name)
    start = time.perf_counter()
    phi = hopf_coefficient(s).phi
    rel = max(abs(fd_hopf_oracle(s, z) - phi(z)) / abs(phi(z))
              for z in annulus_points(s, 50, seed=2024))
    elapsed = time.perf_counter() - start
    record(1, name, rel <= 1e-5 and elapsed < 5,
           f"max rel {rel:.2e} <= 1e-5, {elapsed:.2f}s < 5s")


# 2 ------------------------------------------------------------------------

def _z_poly():
    return RF.identity(exact=True).numerator


def test_criterion_2_henneberg_closed_forms():
    s = form("henneberg")
    z = _z_poly()
    one = z ** 0
    bz, bw = BivariatePoly.from_z, BivariatePoly.from_w
    # (1 + |z|^2)^2 |z^4 - 1|^2 / (4 |z|^8)
    num = (BivariatePoly.constant(1) + bz(z) * bw(z)) ** 2 * bz(z ** 4 - one) * bw(z ** 4 - one)
    den = bz(z ** 4) * bw(z ** 4) * 4
    lam = bivariate_identity_residual(conformal_factor_symbolic(s), (num, den))
    zz = RF.identity(exact=True)
    hopf = hopf_coefficient(s).phi.identity_residual(-(zz ** 4 - 1) / (2 * zz ** 4))
    got = sorted(branch_points(s), key=lambda t: (round(t[0].real, 8), round(t[0].imag, 8)))
    want = [-1, -1j, 1j, 1]
    root_err = max(abs(p - q) for (p, _), q in zip(got, want)) if len(got) == 4 else math.inf
    record(2, "henneberg", lam == 0 and hopf == 0 and root_err <= 1e-10,
           f"metric residual {lam}, Hopf residual {hopf}, branch set error {root_err:.1e}")


def test_criterion_2_meeks_closed_forms():
    s = form("meeks")
    z = _z_poly()
    one = z ** 0
    bz, bw = BivariatePoly.from_z, BivariatePoly.from_w
    # (|z-1|^2 + |z|^4 |z+1|^2)^2 / |z|^8
    inner = bz(z - one) * bw(z - one) + bz(z ** 2 * (z + one)) * bw(z ** 2 * (z + one))
    lam = bivariate_identity_residual(conformal_factor_symbolic(s),
                                      (inner ** 2, bz(z ** 4) * bw(z ** 4)))
    zz = RF.identity(exact=True)
    phi = hopf_coefficient(s).phi
    hopf = phi.identity_residual(-2 * I * (zz * zz - zz - 1) / zz ** 3)
    roots = sorted(r.real for r, _ in poly_roots(phi.numerator))
    want = [(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2]
    root_err = max(abs(a - b) for a, b in zip(roots, want)) if len(roots) == 2 else math.inf
    record(2, "meeks", lam == 0 and hopf == 0 and root_err <= 1e-10,
           f"metric residual {lam}, Hopf residual {hopf}, umbilic error {root_err:.1e}")


# 3 ------------------------------------------------------------------------

def test_criterion_3_deck_invariance():
    h = check_deck_invariance(form("henneberg"), 100)
    m = check_deck_invariance(form("meeks"), 100)
    c = check_deck_invariance(form("catenoid"), 100)
    record(3, "deck", h.max_residual <= 1e-8 and m.max_residual <= 1e-8 and c.max_residual > 0.1,
           f"henneberg {h.max_residual:.1e}, meeks {m.max_residual:.1e} <= 1e-8; "
           f"catenoid {c.max_residual:.2f} > 0.1")


# 4 ------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["henneberg", "meeks"])
def test_criterion_4_laws_hold(name):
    s = form(name)
    reps = [check_gauss_law(s, 100), check_f_law(s, 100), hopf_law_residual(s, 100)]
    ok = all(r.details["symbolic_residual"] == 0 and r.details["exact_mode"]
             and r.max_residual <= 1e-12 for r in reps)
    record(4, name, ok, ", ".join(f"{r.check_name} {r.details['symbolic_residual']}/"
                                  f"{r.max_residual:.1e}" for r in reps))


def test_criterion_4_catenoid_separates_laws():
    s = form("catenoid")
    g, f = check_gauss_law(s, 100), check_f_law(s, 100)
    record(4, "catenoid", g.passed and not f.passed,
           f"gauss law passes ({g.max_residual:.1e}), f law fails ({f.max_residual:.2f})")


# 5 ------------------------------------------------------------------------

def test_criterion_5_annulus_fit():
    crit = fit_c0(form("critical_catenoid"))
    disk = fit_c0(form("equatorial_disk"))
    neg = [fit_c0(form(n)).residual for n in ("henneberg", "meeks")]
    ok = (crit.exact_constant and crit.residual == 0 and crit.C0.imag == 0
          and disk.C0 == 0 and min(neg) > 0.1)
    record(5, "fit", ok, f"critical C0 = {crit.C0.real:.6f} exact, disk C0 = {disk.C0}, "
                         f"controls {neg[0]:.2f}, {neg[1]:.2f} > 0.1")


# 6 ------------------------------------------------------------------------

def test_criterion_6_certificate():
    start = time.perf_counter()
    worst, concl, zero_ok = 0.0, True, True
    for R in (1.5, 2.0, 4.0):
        for C0 in (1.0, -1.0, 0.37):
            cert = impossibility_certificate(R, C0)
            for z, v in cert.mismatch_samples:
                worst = max(worst, abs(v - 2 * abs(C0) / abs(z) ** 2))
            worst = max(worst, cert.measured_max_deviation)
            concl &= cert.conclusion.startswith("inconsistent unless C0 = 0")
        zc = impossibility_certificate(R, 0.0)
        zero_ok &= all(v == 0 for _, v in zc.mismatch_samples) and zc.measured_max_deviation == 0
    elapsed = time.perf_counter() - start
    record(6, "certificate", worst <= 1e-12 and concl and zero_ok and elapsed < 1,
           f"max deviation {worst:.1e} <= 1e-12, C0 = 0 exact, {elapsed:.3f}s < 1s")


# 7 ------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["critical_catenoid", "equatorial_disk"])
def test_criterion_7_free_boundary_positive(name):
    s = form(name)
    fb, hb = check_free_boundary(s, tol=1e-8), check_hopf_real_on_boundary(s, tol=1e-8)
    record(7, name, fb.passed and hb.passed,
           f"free boundary {fb.max_residual:.1e}, Hopf reality {hb.max_residual:.1e}")


def test_criterion_7_scaled_catenoid_fails_free_boundary():
    fb = check_free_boundary(form("critical_catenoid", scale=2), tol=1e-8)
    record(7, "2x free boundary", not fb.passed, f"residual {fb.max_residual:.2f} fails")


def test_criterion_7_scaled_catenoid_fails_hopf_reality():
    # z^2 phi = -c/2 is real for every catenoid, so this control cannot fail
    hb = check_hopf_real_on_boundary(form("critical_catenoid", scale=2), tol=1e-8)
    record(7, "2x Hopf reality", not hb.passed,
           f"residual {hb.max_residual:.1e}: Hopf differential of a scaled catenoid "
           f"is still real on the boundary")


def test_criterion_7_critical_parameter_stable():
    a, b = critical_parameter(1e-13), critical_parameter(0.5e-13)
    ref = brentq(lambda s: s * math.tanh(s) - 1, 0.5, 2.0, xtol=1e-15)
    record(7, "s0", abs(a - b) <= 1e-10 and abs(a - ref) <= 1e-10,
           f"s0 = {a:.13f}, halving shift {abs(a - b):.1e}, oracle gap {abs(a - ref):.1e}")


# 8 ------------------------------------------------------------------------

def test_criterion_8_branch_expansion():
    s = form("henneberg")
    ex = branch_expansion(s, 1)
    iso = ex.isotropy_residual / float(np.sum(np.abs(ex.leading) ** 2))
    rays = normal_limits(s, 1)
    ray_err = float(np.max(np.abs(rays - ex.limit_normal)))
    phi = hopf_coefficient(s).phi
    hopf_max = max(abs(phi(p)) for p, _ in branch_points(s))
    record(8, "henneberg z=1", ex.order == 1 and iso <= 1e-6 and ray_err <= 1e-4
           and hopf_max <= 1e-10,
           f"nu = {ex.order}, isotropy {iso:.1e}, ray normals {ray_err:.1e}, "
           f"Hopf at branch points {hopf_max:.1e}")


# 9 ------------------------------------------------------------------------

LS = (math.log(1.5), math.log(2.0), math.log(4.0))


def test_criterion_9_mode_formulas():
    worst = 0.0
    for L in LS:
        geom = CylinderGeometry(L)
        for k in range(17):
            vals = np.linalg.eigvalsh(dtn_mode_matrix(geom, k))
            exp = [0.0, 1 / L] if k == 0 else [k * math.tanh(k * L), k / math.tanh(k * L)]
            worst = max(worst, float(np.max(np.abs(vals - exp))))
    record(9, "mode formulas", worst <= 1e-12, f"max error {worst:.1e}")


def test_criterion_9_finite_difference_oracle():
    start = time.perf_counter()
    geom = CylinderGeometry(math.log(2.0))
    ref = fd_steklov_cylinder(geom.L, 200, 200, count=3)
    vals = steklov_spectrum(geom, count=3).values()
    err = max(abs(a - b) / max(abs(b), 1e-12) if b else abs(a) for a, b in zip(ref, vals))
    elapsed = time.perf_counter() - start
    record(9, "FD oracle", err <= 1e-2 and elapsed < 30,
           f"lowest three rel error {err:.1e}, {elapsed:.1f}s < 30s")


def test_criterion_9_moebius_and_disk():
    ok = True
    for L in LS:
        geom = CylinderGeometry(L)
        full = steklov_spectrum(geom, count=40)
        sub = moebius_spectrum(geom, count=10)
        keep = Counter((e.mode, e.parity, e.sigma) for e in full.entries
                       if e.parity == ("even" if e.mode % 2 == 0 else "odd"))
        got = Counter((e.mode, e.parity, e.sigma) for e in sub.entries)
        ok &= all(keep[k] >= v for k, v in got.items())
        ordered = sorted(keep, key=lambda t: t[2])[:len(sub.entries)]
        ok &= [t[2] for t in ordered] == [e.sigma for e in sub.entries]
    disk = normalized_eigenvalue(disk_spectrum(), 1, 2 * math.pi)
    ok &= abs(disk - 2 * math.pi) <= 1e-12
    record(9, "quotient and disk", ok, f"parity filter exact, disk sigma1 bar = {disk:.15f}")


# 10 -----------------------------------------------------------------------

def test_criterion_10_determinism(tmp_path):
    exe = shutil.which("wlab")
    cmd = [exe] if exe else [sys.executable, "-m", "wlab.cli"]
    outs = []
    for _ in range(2):
        proc = subprocess.run(cmd + ["check", "--surface", "meeks", "--suite", "all"],
                              capture_output=True, check=False)
        outs.append(proc.stdout)
    record(10, "meeks check", outs[0] == outs[1] and len(outs[0]) > 0,
           f"{len(outs[0])} bytes, identical: {outs[0] == outs[1]}")
