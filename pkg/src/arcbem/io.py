"""Binary and CSV export of matrices, residual histories and field grids.

Matrix format ("ABMX"): magic 4s, version uint32, kind uint8 (0 dense real,
1 dense complex, 2 sparse real, 3 sparse complex), rows/cols uint64, then
payload, all little-endian.  Dense payload is row-major float64 (complex as
re/im pairs); sparse payload is CSR indptr (int64), indices (int64), data.

Grid format ("ABGR"): magic, version uint32, nx/ny uint64, bounding box
xmin xmax ymin ymax float64, then row-major complex128 field values.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np
import scipy.sparse as sp

MATRIX_MAGIC = b"ABMX"
GRID_MAGIC = b"ABGR"
FORMAT_VERSION = 1


def write_matrix(path, mat) -> None:
    path = Path(path)
    with path.open("wb") as fh:
        if sp.issparse(mat):
            m = mat.tocsr()
            kind = 3 if np.iscomplexobj(m.data) else 2
            fh.write(MATRIX_MAGIC)
            fh.write(struct.pack("<IBQQ", FORMAT_VERSION, kind, *m.shape))
            fh.write(np.asarray(m.indptr, dtype="<i8").tobytes())
            fh.write(struct.pack("<Q", m.nnz))
            fh.write(np.asarray(m.indices, dtype="<i8").tobytes())
            dt = "<c16" if kind == 3 else "<f8"
            fh.write(np.ascontiguousarray(m.data, dtype=dt).tobytes())
        else:
            arr = np.asarray(mat)
            kind = 1 if np.iscomplexobj(arr) else 0
            fh.write(MATRIX_MAGIC)
            fh.write(struct.pack("<IBQQ", FORMAT_VERSION, kind, *arr.shape))
            dt = "<c16" if kind == 1 else "<f8"
            fh.write(np.ascontiguousarray(arr, dtype=dt).tobytes())


def read_matrix(path):
    path = Path(path)
    with path.open("rb") as fh:
        magic = fh.read(4)
        if magic != MATRIX_MAGIC:
            raise ValueError(f"{path}: not a matrix file (magic {magic!r})")
        version, kind, rows, cols = struct.unpack("<IBQQ", fh.read(21))
        if version != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        if kind in (0, 1):
            dt = "<c16" if kind == 1 else "<f8"
            data = np.frombuffer(fh.read(rows * cols * (16 if kind == 1 else 8)),
                                 dtype=dt)
            return data.reshape(rows, cols).copy()
        indptr = np.frombuffer(fh.read(8 * (rows + 1)), dtype="<i8")
        (nnz,) = struct.unpack("<Q", fh.read(8))
        indices = np.frombuffer(fh.read(8 * nnz), dtype="<i8")
        dt = "<c16" if kind == 3 else "<f8"
        data = np.frombuffer(fh.read(nnz * (16 if kind == 3 else 8)), dtype=dt)
        return sp.csr_matrix((data.copy(), indices.copy(), indptr.copy()),
                             shape=(rows, cols))


def write_matrix_csv(path, mat) -> None:
    """Debug export: plain CSV, complex entries as re+imj strings."""
    arr = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
    np.savetxt(path, arr, delimiter=",", fmt="%s")


def write_grid(path, values: np.ndarray, bbox) -> None:
    path = Path(path)
    values = np.ascontiguousarray(values, dtype="<c16")
    xmin, xmax, ymin, ymax = (float(v) for v in bbox)
    with path.open("wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(struct.pack("<IQQ", FORMAT_VERSION, *values.shape))
        fh.write(struct.pack("<4d", xmin, xmax, ymin, ymax))
        fh.write(values.tobytes())


def read_grid(path):
    path = Path(path)
    with path.open("rb") as fh:
        if fh.read(4) != GRID_MAGIC:
            raise ValueError(f"{path}: not a grid file")
        version, nx, ny = struct.unpack("<IQQ", fh.read(20))
        if version != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        bbox = struct.unpack("<4d", fh.read(32))
        values = np.frombuffer(fh.read(nx * ny * 16), dtype="<c16")
        return values.reshape(nx, ny).copy(), bbox


def write_history_csv(path, report) -> None:
    """Residual history columns: iteration, preconditioned, true (if any)."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "preconditioned_residual", "true_residual"])
        true_hist = report.true_residual_history
        for i, r in enumerate(report.relative_residual_history, start=1):
            row = [i, f"{r:.16e}"]
            row.append(f"{true_hist[i - 1]:.16e}" if true_hist is not None else "")
            writer.writerow(row)


def write_report_json(path, payload: dict) -> None:
    with Path(path).open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_rows_csv(path, header: list, rows: list) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
