"""``wlab`` command line.

Exit codes: 0 success, 1 some check failed, 2 usage error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

from . import annulus, catalog, checks, moebius, report, steklov
from .errors import DomainError, FitAmbiguousError, NumericalError, UsageError
from .weierstrass import WeierstrassSurface, conformal_factor

SUITES = ("minimal", "free-boundary", "hopf-boundary", "all")


@dataclass
class RunConfig:
    subcommand: str
    surface: str | None = None
    params: dict = field(default_factory=dict)
    grid: tuple | None = None
    tolerances: dict = field(default_factory=dict)
    output: str | None = None

    def __post_init__(self):
        if self.grid is not None:
            rmin, rmax, nr, nt = self.grid
            if nr < 2 or nt < 2:
                raise UsageError("--grid: counts must be at least 2")
            if not rmin < rmax:
                raise UsageError("--grid: need rmin < rmax")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise UsageError(f"--tol-override: {name} must be positive")

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, checks.DEFAULT_TOLERANCES[name])


def _number(text: str, flag: str):
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"{flag}: cannot parse number {text!r}") from None


def _pairs(items, flag):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"{flag}: expected name=value, got {item!r}")
        out[key] = _number(value, flag)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", choices=catalog.catalog_list())
    common.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="surface parameter, e.g. R=2 or c=1.5")
    common.add_argument("--tol", type=float, help="tolerance for every check in this run")
    common.add_argument("--tol-override", action="append", metavar="CHECK=VALUE",
                        help=f"per-check tolerance; checks: {', '.join(checks.DEFAULT_TOLERANCES)}")
    common.add_argument("--grid", nargs=4, metavar=("RMIN", "RMAX", "NR", "NTHETA"))
    common.add_argument("--output", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(
        prog="wlab",
        description="Weierstrass surfaces, Hopf differentials, Moebius band laws and Steklov "
                    "spectra. Exit codes: 0 success, 1 some check failed, 2 usage error, "
                    "3 numerical error.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list built-in surfaces")
    ev = sub.add_parser("eval", parents=[common], help="position, normal and Hopf value at points")
    ev.add_argument("--z", action="append", required=True, help="chart point, e.g. 0.5+1j")
    ck = sub.add_parser("check", parents=[common], help="run a check suite")
    ck.add_argument("--suite", choices=SUITES, default="all")
    ck.add_argument("--samples", type=int, default=64, help="boundary samples per circle")
    sub.add_parser("hopf", parents=[common], help="Hopf coefficient, umbilics, branch points")
    sub.add_parser("fit-c0", parents=[common], help="fit the C0/z^2 form and classify")
    mv = sub.add_parser("moebius-verify", parents=[common],
                        help="deck invariance and the three transformation laws")
    mv.add_argument("--samples", type=int, default=100)
    mv.add_argument("--seed", type=int, default=0)
    im = sub.add_parser("impossibility", parents=[common], help="certificate for C0/z^2")
    im.add_argument("--R", type=float, default=2.0)
    im.add_argument("--c0", default="1")
    st = sub.add_parser("steklov", parents=[common], help="Steklov spectrum of a flat cylinder")
    size = st.add_mutually_exclusive_group()
    size.add_argument("--L", type=float, help="half length of the cylinder")
    size.add_argument("--R", type=float, help="annulus modulus; L = log R")
    st.add_argument("--weights", nargs=2, type=float, default=(1.0, 1.0))
    st.add_argument("--max-mode", type=int, default=16)
    st.add_argument("--count", type=int, default=10)
    st.add_argument("--quotient", choices=("moebius",))
    st.add_argument("--disk", action="store_true", help="unit disk instead of a cylinder")
    st.add_argument("--csv", help="also write the spectrum as CSV")
    sub.add_parser("mesh", parents=[common], help="export an OBJ mesh (needs --output)")
    return p


def _config(args) -> RunConfig:
    tolerances = {}
    if args.tol is not None:
        tolerances = {k: args.tol for k in checks.DEFAULT_TOLERANCES}
    overrides = _pairs(args.tol_override, "--tol-override")
    for name, value in overrides.items():
        if name not in checks.DEFAULT_TOLERANCES:
            raise UsageError(f"--tol-override: unknown check {name!r}")
        if isinstance(value, complex):
            raise UsageError(f"--tol-override: {name} must be real")
        tolerances[name] = value
    grid = None
    if args.grid:
        try:
            grid = (float(args.grid[0]), float(args.grid[1]), int(args.grid[2]), int(args.grid[3]))
        except ValueError:
            raise UsageError("--grid: expected RMIN RMAX NR NTHETA") from None
    return RunConfig(args.command, args.surface, _pairs(args.param, "--param"), grid,
                     tolerances, args.output)


def _entry(cfg: RunConfig):
    if cfg.surface is None:
        raise UsageError(f"{cfg.subcommand}: --surface is required")
    return catalog.catalog_get(cfg.surface, cfg.params)


def _grid(cfg: RunConfig, domain, default=(20, 20)):
    if cfg.grid is None:
        return domain.grid(*default)
    rmin, rmax, nr, nt = cfg.grid
    return domain.grid(nr, nt, rmin, rmax)


def _cmd_catalog(cfg, args):
    out = []
    for name in catalog.catalog_list():
        e = catalog.catalog_get(name)
        x = e.expected
        out.append({"kind": "catalog_entry", "name": name, "params": e.params,
                    "domain": e.form.domain.to_dict(),
                    "branch_points": [[p, k] for p, k in x.branch_points],
                    "umbilics": None if x.umbilics is None else list(x.umbilics),
                    "deck_invariant": x.deck_invariant, "free_boundary": x.free_boundary,
                    "notes": e.notes})
    return out


def _cmd_eval(cfg, args):
    surf = _entry(cfg).form
    out = []
    for text in args.z:
        z = complex(_number(text, "--z"))
        if not surf.domain.contains(z):
            raise DomainError(f"--z: {z} is outside the domain of {cfg.surface}")
        item = {"kind": "evaluation", "z": z, "position": surf.position(z),
                "normal": surf.normal(z)}
        if isinstance(surf, WeierstrassSurface):
            item["conformal_factor"] = conformal_factor(surf, z)
        item["hopf"] = checks.hopf_value(surf, z)
        out.append(item)
    return out


def _cmd_check(cfg, args):
    surf = _entry(cfg).form
    suite = args.suite
    out = []
    if suite in ("minimal", "all"):
        out.append(checks.check_minimal_immersion(surf, _grid(cfg, surf.domain),
                                                  cfg.tol("minimal")))
    if suite in ("free-boundary", "all"):
        out.append(checks.check_free_boundary(surf, args.samples, cfg.tol("free_boundary")))
    if suite in ("hopf-boundary", "all"):
        out.append(checks.check_hopf_real_on_boundary(surf, args.samples,
                                                      cfg.tol("hopf_boundary")))
    return out


def _cmd_hopf(cfg, args):
    entry = _entry(cfg)
    surf = entry.form
    phi = surf.hopf()
    branch = surf.branch_points()
    item = {"kind": "hopf", "coefficient": None if phi is None else str(phi),
            "branch_points": [[p, k] for p, k in branch]}
    if phi is not None and not phi.is_zero():
        zeros = [p for p, _ in phi.zeros() if surf.domain.contains(p)]
        item["zeros"] = zeros
        item["umbilics"] = [p for p in zeros
                            if all(abs(p - b) > 1e-6 * max(1.0, abs(b)) for b, _ in branch)]
    else:
        item["zeros"] = None
        item["umbilics"] = None
    expansions = []
    for p, _ in branch:
        try:
            expansions.append(checks.branch_expansion(surf, p))
        except FitAmbiguousError as exc:
            expansions.append({"kind": "branch_expansion", "center": p, "error": str(exc)})
    item["branch_expansions"] = expansions
    return [item]


def _cmd_fit(cfg, args):
    surf = _entry(cfg).form
    return [annulus.classify_annulus(surf)]


def _cmd_moebius(cfg, args):
    surf = _entry(cfg).form
    if not isinstance(surf, WeierstrassSurface):
        raise UsageError(f"moebius-verify: {cfg.surface} has no Weierstrass data")
    n, seed = args.samples, args.seed
    return [moebius.check_deck_invariance(surf, n, cfg.tol("deck"), seed),
            moebius.check_gauss_law(surf, n, cfg.tol("gauss_law"), seed),
            moebius.check_f_law(surf, n, cfg.tol("f_law"), seed),
            moebius.hopf_law_residual(surf, n, cfg.tol("hopf_law"), seed)]


def _cmd_impossibility(cfg, args):
    if not args.R > 1:
        raise UsageError("--R must exceed 1")
    return [moebius.impossibility_certificate(args.R, complex(_number(args.c0, "--c0")))]


def _cmd_steklov(cfg, args):
    if args.disk:
        spectrum = steklov.disk_spectrum(args.max_mode, args.count)
        length = 2 * math.pi
    else:
        if args.L is not None:
            L = args.L
        elif args.R is not None:
            if not args.R > 1:
                raise UsageError("--R must exceed 1")
            L = math.log(args.R)
        else:
            L = math.log(2.0)
        if not L > 0 or min(args.weights) <= 0:
            raise UsageError("--L and --weights must be positive")
        geom = steklov.CylinderGeometry(L, tuple(args.weights))
        length = geom.boundary_length
        if args.quotient == "moebius":
            spectrum = steklov.moebius_spectrum(geom, args.max_mode, args.count)
            length = geom.boundary_length / 2
        else:
            spectrum = steklov.steklov_spectrum(geom, args.max_mode, args.count)
    if args.csv:
        with open(args.csv, "w", newline="\n") as fh:
            fh.write(steklov.spectrum_csv(spectrum))
    values = spectrum.values()
    normalized = [steklov.normalized_eigenvalue(spectrum, k, length) for k in range(len(values))]
    out = spectrum.to_dict()
    out["boundary_length"] = length
    out["normalized"] = normalized
    if len(values) > 1:
        out["multiplicity_sigma1"] = steklov.multiplicity_report(spectrum, 1)
    return [out]


def _cmd_mesh(cfg, args):
    if not cfg.output:
        raise UsageError("mesh: --output PATH.obj is required")
    surf = _entry(cfg).form
    grid = _grid(cfg, surf.domain, default=(16, 64))
    count = report.export_mesh(surf, grid, cfg.output)
    cfg.output = None
    return [{"kind": "mesh", "vertices": count, "faces": 2 * (grid.shape[0] - 1) * grid.shape[1]}]


COMMANDS = {
    "catalog": _cmd_catalog,
    "eval": _cmd_eval,
    "check": _cmd_check,
    "hopf": _cmd_hopf,
    "fit-c0": _cmd_fit,
    "moebius-verify": _cmd_moebius,
    "impossibility": _cmd_impossibility,
    "steklov": _cmd_steklov,
    "mesh": _cmd_mesh,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        results = COMMANDS[args.command](cfg, args)
        text = report.render_report(results, cfg.surface)
        if cfg.output:
            with open(cfg.output, "w", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"wlab: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"wlab: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 1 if report.any_failed(results) else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
