"""Deterministic mesh and table writers.

OBJ and ASCII PLY carry the tessellated surface with floats printed to nine
significant digits; sweep tables stream to RFC-4180 CSV with grid indices
first, then the swept parameters, then the outputs.  Identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from .mesh import TriangleMesh

__all__ = ["export_mesh", "write_obj", "write_ply", "sweep_csv_rows", "export_sweep_csv"]


def _f9(x: float) -> str:
    return f"{float(x):.9g}"


def write_obj(mesh: TriangleMesh, stream) -> None:
    for v in mesh.vertices:
        stream.write(f"v {_f9(v[0])} {_f9(v[1])} {_f9(v[2])}\n")
    for t in mesh.triangles:
        stream.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")


def write_ply(mesh: TriangleMesh, stream) -> None:
    stream.write("ply\n")
    stream.write("format ascii 1.0\n")
    stream.write(f"element vertex {mesh.n_vertices}\n")
    stream.write("property float x\n")
    stream.write("property float y\n")
    stream.write("property float z\n")
    stream.write(f"element face {mesh.n_triangles}\n")
    stream.write("property list uchar int vertex_indices\n")
    stream.write("end_header\n")
    for v in mesh.vertices:
        stream.write(f"{_f9(v[0])} {_f9(v[1])} {_f9(v[2])}\n")
    for t in mesh.triangles:
        stream.write(f"3 {t[0]} {t[1]} {t[2]}\n")


def export_mesh(mesh: TriangleMesh, format: str, path) -> None:
    """Write the mesh as 'obj' or 'ply' (ascii); failures name the path."""
    writers = {"obj": write_obj, "ply": write_ply}
    if format not in writers:
        raise ValueError(f"unsupported mesh format {format!r} (use obj or ply)")
    try:
        with open(path, "w", newline="") as fh:
            writers[format](mesh, fh)
    except OSError as exc:
        raise OSError(f"cannot write mesh to {path}: {exc}") from exc


def _csv_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def sweep_csv_rows(spec, records):
    """Header plus one row per record, ready for a csv writer.

    Columns: grid indices, swept parameter values, the equilibrium curvature
    triple, morphology class, helix descriptors, curvature diagnostics and
    flags; mechanical sweeps add the solved energy and gradient residual.
    """
    axis_names = [ax.name for ax in spec.axes]
    header = [f"i_{n}" for n in axis_names]
    header += axis_names
    header += [
        "kappa1",
        "kappa2",
        "phi",
        "class",
        "alpha",
        "beta",
        "tau",
        "helix_angle",
        "radius",
        "pitch",
        "chirality",
        "gauss_curvature",
        "mean_curvature",
    ]
    mechanical = spec.mode == "mechanical"
    if mechanical:
        header += ["energy", "gradient_norm"]
    header += ["degenerate", "tubule"]
    yield header
    for rec in records:
        d = rec.descriptors
        row = [str(i) for i in rec.indices]
        row += [_csv_value(rec.params[n]) for n in axis_names]
        row += [
            _csv_value(rec.state.kappa1),
            _csv_value(rec.state.kappa2),
            _csv_value(rec.state.phi),
            rec.morphology.kind.value,
            _csv_value(d.alpha),
            _csv_value(d.beta),
            _csv_value(d.tau),
            _csv_value(d.helix_angle),
            _csv_value(d.radius),
            _csv_value(d.pitch),
            _csv_value(d.chirality),
            _csv_value(rec.morphology.gauss_curvature),
            _csv_value(rec.morphology.mean_curvature),
        ]
        if mechanical:
            row += [_csv_value(rec.solution.energy), _csv_value(rec.solution.gradient_norm)]
        row += [_csv_value(rec.degenerate), _csv_value(rec.tubule)]
        yield row


def export_sweep_csv(spec, records, path_or_stream) -> None:
    """Stream sweep records to CSV; accepts a path or an open text stream."""
    own = isinstance(path_or_stream, (str, bytes)) or hasattr(path_or_stream, "__fspath__")
    if own:
        try:
            fh = open(path_or_stream, "w", newline="")
        except OSError as exc:
            raise OSError(f"cannot write CSV to {path_or_stream}: {exc}") from exc
    else:
        fh = path_or_stream
    try:
        writer = csv.writer(fh)
        for row in sweep_csv_rows(spec, records):
            writer.writerow(row)
    finally:
        if own:
            fh.close()


def csv_text(spec, records) -> str:
    buf = io.StringIO()
    export_sweep_csv(spec, records, buf)
    return buf.getvalue()
