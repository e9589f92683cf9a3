"""Deterministic JSON reports, CSV spectra and OBJ meshes."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import BranchPointError

REPORT_VERSION = 1


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, "#.17g")


def encode(obj, indent: int = 0) -> str:
    """JSON text with 17 significant digits for every float.

    Complex numbers become ``{"re": .., "im": ..}``; numpy scalars and arrays
    are unwrapped; objects with ``to_dict`` are encoded through it. Keys keep
    insertion order.
    """
    pad = "  " * (indent + 1)
    end = "  " * indent
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, complex):
        return encode({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + encode(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "value"):  # enums
        return encode(obj.value, indent)
    return encode(complex(obj), indent)


def build_report(results, surface: str | None = None) -> dict:
    doc = {"version": REPORT_VERSION}
    if surface is not None:
        doc["surface"] = surface
    doc["results"] = list(results)
    return doc


def render_report(results, surface: str | None = None) -> str:
    return encode(build_report(results, surface)) + "\n"


def write_report(results, path, surface: str | None = None) -> str:
    text = render_report(results, surface)
    Path(path).write_text(text, newline="\n")
    return text


def any_failed(results) -> bool:
    for r in results:
        d = r.to_dict() if hasattr(r, "to_dict") else r
        if isinstance(d, dict) and d.get("passed") is False:
            return True
    return False


# ------------------------------------------------------------------- mesh

def mesh_positions(surface, grid: np.ndarray, clearance: float = 1e-9) -> np.ndarray:
    branch = [p for p, _ in surface.branch_points()]
    out = np.empty(grid.shape + (3,))
    for idx in np.ndindex(grid.shape):
        z = complex(grid[idx])
        if any(abs(z - p) < clearance for p in branch):
            raise BranchPointError(f"mesh vertex {z} sits on a branch point")
        out[idx] = surface.position(z)
    return out


def mesh_faces(n_r: int, n_theta: int) -> list[tuple[int, int, int]]:
    """Triangles of a grid periodic in its second index, 1-based, one winding."""
    faces = []
    for i in range(n_r - 1):
        for j in range(n_theta):
            jn = (j + 1) % n_theta
            a, b = i * n_theta + j + 1, (i + 1) * n_theta + j + 1
            c, d = (i + 1) * n_theta + jn + 1, i * n_theta + jn + 1
            faces.append((a, b, c))
            faces.append((a, c, d))
    return faces


def obj_text(vertices: np.ndarray, faces) -> str:
    lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in vertices.reshape(-1, 3)]
    lines += [f"f {a} {b} {c}" for a, b, c in faces]
    return "\n".join(lines) + "\n"


def export_mesh(surface, grid: np.ndarray, path) -> int:
    """Write an OBJ mesh of ``surface`` over ``grid``; returns the vertex count."""
    grid = np.asarray(grid)
    verts = mesh_positions(surface, grid)
    Path(path).write_text(obj_text(verts, mesh_faces(*grid.shape)), newline="\n")
    return grid.size
