"""CSV ingestion and output helpers for the command-line interface.

Numeric output uses the shortest round-trip decimal representation, so
files are diff-stable and re-ingesting them loses nothing.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .metrics import MetricSpec, ObjectSample, ValidationError, check_distance_matrix, validate_objects

INGEST_FORMATS = (
    "vectors_csv",
    "quantiles_csv",
    "cdfgrid_csv",
    "compositions_csv",
    "adjacency_dir",
    "distmatrix_csv",
)

_FORMAT_KIND = {
    "vectors_csv": "euclidean",
    "quantiles_csv": "wasserstein1d",
    "cdfgrid_csv": "l2cdf",
    "compositions_csv": "sphere_geodesic",
    "adjacency_dir": "frobenius",
}


def _read_rows(path: Path, has_header: bool) -> List[List[float]]:
    rows: List[List[float]] = []
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, start=1):
                if not row or (lineno == 1 and has_header):
                    continue
                if row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append([float(v) for v in row])
                except ValueError as exc:
                    raise ValidationError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValidationError(f"{path}: rows have inconsistent lengths {sorted(widths)}")
    return rows


def ingest(
    path: str,
    fmt: str,
    has_header: bool = False,
    grid_shape: Optional[Tuple[int, int]] = None,
    cell_area: Optional[float] = None,
):
    """Read one input per its declared format.

    Returns ``(ObjectSample, MetricSpec)`` for object formats and a plain
    distance matrix for ``distmatrix_csv``.  Validation failures carry the
    file, row and offending entry.
    """
    if fmt not in INGEST_FORMATS:
        raise ValidationError(f"unknown format {fmt!r}; expected one of {INGEST_FORMATS}")
    p = Path(path)

    if fmt == "distmatrix_csv":
        rows = _read_rows(p, has_header)
        d = np.asarray(rows, dtype=float)
        try:
            return check_distance_matrix(d, sym_tol=1e-9)
        except ValidationError as exc:
            raise ValidationError(f"{p}: {exc}") from None

    if fmt == "adjacency_dir":
        if not p.is_dir():
            raise ValidationError(f"{p} is not a directory of adjacency CSV files")
        files = sorted(f for f in p.iterdir() if f.suffix.lower() == ".csv")
        if not files:
            raise ValidationError(f"{p}: no CSV files found")
        mats = []
        order = None
        for f in files:
            rows = _read_rows(f, has_header)
            mat = np.asarray(rows, dtype=float)
            if mat.shape[0] != mat.shape[1]:
                raise ValidationError(f"{f}: adjacency matrix must be square, got {mat.shape}")
            if order is None:
                order = mat.shape[0]
            elif mat.shape[0] != order:
                raise ValidationError(f"{f}: order {mat.shape[0]} differs from first file ({order})")
            mats.append(mat)
        spec = MetricSpec("frobenius")
        return validate_objects(spec, np.stack(mats)), spec

    rows = _read_rows(p, has_header)
    arr = np.asarray(rows, dtype=float)

    if fmt == "cdfgrid_csv":
        if grid_shape is None:
            raise ValidationError("cdfgrid_csv needs --grid-shape ROWSxCOLS")
        r, c = grid_shape
        if arr.shape[1] != r * c:
            raise ValidationError(
                f"{p}: rows have {arr.shape[1]} values, grid shape {r}x{c} needs {r * c}"
            )
        arr = arr.reshape(arr.shape[0], r, c)
        spec = MetricSpec("l2cdf", cell_area=cell_area if cell_area is not None else 1.0)
    else:
        spec = MetricSpec(_FORMAT_KIND[fmt])

    try:
        return validate_objects(spec, arr), spec
    except ValidationError as exc:
        raise ValidationError(f"{p}: {exc}") from None


def format_float(v: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(v))


def write_csv(
    path: str,
    rows: Sequence[Sequence[float]],
    header: Optional[Sequence[str]] = None,
    comments: Sequence[str] = (),
) -> None:
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
