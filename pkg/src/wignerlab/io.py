"""File formats: wfn-v1, wig-v1, sup-v1, gen-v1, opk-v1, CSV and JSON-lines reports.

All writers are deterministic: floats are written with ``repr`` precision
in a fixed key order, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .errors import FormatError
from .grid import PhaseGrid, SampleGrid1D
from .states import OperatorKernel, WaveFunction
from .transforms import WignerFunction

__all__ = [
    "load_json",
    "write_json",
    "save_wavefunction",
    "load_wavefunction",
    "save_wigner",
    "load_wigner",
    "write_wigner_csv",
    "write_field_csv",
    "load_superposition_request",
    "load_generator_file",
    "save_kernel",
    "load_kernel",
    "write_reports",
]


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise FormatError(f"{path} is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path} does not hold a JSON object")
    return data


def write_json(path, data: dict) -> None:
    text = json.dumps(data, indent=None, separators=(",", ":"), allow_nan=False)
    Path(path).write_text(text + "\n")


def _require_format(data: dict, fmt: str, path) -> None:
    if data.get("format") != fmt:
        raise FormatError(f"{path}: expected format {fmt!r}, found {data.get('format')!r}")


def _grid(d, path) -> SampleGrid1D:
    try:
        return SampleGrid1D(float(d["x0"]), float(d["dx"]), int(d["n"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad grid description ({exc})") from exc


def _floats(seq, count: int, what: str, path) -> np.ndarray:
    try:
        arr = np.asarray(seq, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {what} is not numeric") from exc
    if arr.ndim != 1 or arr.size != count:
        raise FormatError(f"{path}: {what} has {arr.size} entries, expected {count}")
    return arr


def _float_list(a) -> list:
    return [float(v) for v in np.asarray(a, dtype=float).ravel()]


def save_wavefunction(path, phi: WaveFunction) -> None:
    write_json(path, {
        "format": "wfn-v1",
        "hbar": float(phi.hbar),
        "grid": phi.grid.to_dict(),
        "re": _float_list(phi.values.real),
        "im": _float_list(phi.values.imag),
    })


def load_wavefunction(path) -> WaveFunction:
    data = load_json(path)
    _require_format(data, "wfn-v1", path)
    grid = _grid(data.get("grid"), path)
    try:
        hbar = float(data["hbar"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: missing hbar") from exc
    re = _floats(data.get("re"), grid.n, "re", path)
    im = _floats(data.get("im", [0.0] * grid.n), grid.n, "im", path)
    return WaveFunction(grid, re + 1j * im, hbar)


def save_wigner(path, W) -> None:
    write_json(path, {
        "format": "wig-v1",
        "hbar": float(W.grid.hbar),
        "qgrid": W.grid.qgrid.to_dict(),
        "pgrid": W.grid.pgrid.to_dict(),
        "values": _float_list(W.values),
    })


def load_wigner(path) -> WignerFunction:
    data = load_json(path)
    _require_format(data, "wig-v1", path)
    qgrid = _grid(data.get("qgrid"), path)
    pgrid = _grid(data.get("pgrid"), path)
    try:
        pg = PhaseGrid(qgrid, pgrid, float(data["hbar"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: inconsistent phase grid ({exc})") from exc
    v = _floats(data.get("values"), pg.n * pg.n, "values", path)
    return WignerFunction(pg, v.reshape(pg.n, pg.n), "loaded")


def write_field_csv(path, field, header: str = "q,p,w") -> None:
    """One ``q,p,value`` row per sample, full double precision, q-major."""
    pg = field.grid
    Q, P = np.meshgrid(pg.q, pg.p, indexing="ij")
    table = np.column_stack([Q.ravel(), P.ravel(), field.values.ravel()])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header=header, comments="")


write_wigner_csv = write_field_csv


def load_superposition_request(path) -> dict:
    """Parse a sup-v1 request; ``w1``/``w2`` paths resolve relative to the request file."""
    data = load_json(path)
    _require_format(data, "sup-v1", path)
    base = Path(path).resolve().parent
    out = {}
    try:
        for key in ("A", "B", "epsilon"):
            out[key] = float(data[key])
        for key in ("x1", "x2"):
            v = data.get(key, "auto")
            out[key] = "auto" if isinstance(v, str) and v.lower() == "auto" else float(v)
        for key in ("w1", "w2"):
            out[key] = base / os.fspath(data[key])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad superposition request ({exc})") from exc
    return out


GENERATOR_KINDS = ("dq", "dp", "rotation", "sparse")


def load_generator_file(path) -> dict:
    """Parse gen-v1: ``{"kind": ..., "entries": [[iq, ip, iq2, ip2, value], ...]}``."""
    data = load_json(path)
    _require_format(data, "gen-v1", path)
    kind = data.get("kind")
    if kind not in GENERATOR_KINDS:
        raise FormatError(f"{path}: kind must be one of {GENERATOR_KINDS}")
    out = {"kind": kind, "order": int(data.get("order", 6))}
    if kind == "sparse":
        rows = data.get("entries")
        try:
            arr = np.asarray(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: entries are not numeric") from exc
        if arr.ndim != 2 or arr.shape[1] != 5:
            raise FormatError(f"{path}: entries must be [iq, ip, iq2, ip2, value] rows")
        idx = arr[:, :4]
        if not np.all(idx == np.round(idx)):
            raise FormatError(f"{path}: entry indices must be integers")
        out["entries"] = (idx.astype(np.int64), arr[:, 4])
    return out


def save_kernel(path, K: OperatorKernel) -> None:
    write_json(path, {
        "format": "opk-v1",
        "hbar": float(K.hbar),
        "grid": K.grid.to_dict(),
        "re": _float_list(K.values.real),
        "im": _float_list(K.values.imag),
    })


def load_kernel(path) -> OperatorKernel:
    data = load_json(path)
    _require_format(data, "opk-v1", path)
    grid = _grid(data.get("grid"), path)
    n2 = grid.n * grid.n
    re = _floats(data.get("re"), n2, "re", path)
    im = _floats(data.get("im"), n2, "im", path)
    return OperatorKernel(grid, (re + 1j * im).reshape(grid.n, grid.n), float(data["hbar"]))


def write_reports(stream, reports) -> None:
    """JSON lines, one per :class:`CheckReport`."""
    for r in reports:
        stream.write(r.to_json() + "\n")
