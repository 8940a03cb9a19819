"""Readers and writers for matrices, signals and sign observations.

Signals and observations are stored as CSV (one value per line) or as a JSON
envelope ``{"n": .., "values": [..]}`` / ``{"m": .., "signs": [..]}``; the format
is picked from the file extension. Matrices use a small binary layout: the
8-byte magic ``BFCSMAT1``, little-endian u64 rows and cols, then float64
entries in row-major order.
"""
import json
import os
import struct

import numpy as np

MATRIX_MAGIC = b"BFCSMAT1"
_HEADER = struct.Struct("<8sQQ")


def _ext(path):
    ext = os.path.splitext(str(path))[1].lower()
    if ext not in (".csv", ".json"):
        raise ValueError(f"unsupported vector file extension {ext!r} for {path} (use .csv or .json)")
    return ext


def write_matrix(path, A):
    A = np.ascontiguousarray(A, dtype="<f8")
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MATRIX_MAGIC, A.shape[0], A.shape[1]))
        fh.write(A.tobytes(order="C"))


def read_matrix(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated matrix header")
        magic, m, n = _HEADER.unpack(head)
        if magic != MATRIX_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, not a matrix file")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != m * n:
        raise ValueError(f"{path}: header says {m}x{n} but found {data.size} entries")
    A = data.reshape(m, n).astype(np.float64)
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{path}: matrix has non-finite entries")
    return A


def write_signal(path, x):
    x = np.asarray(x, dtype=float)
    if _ext(path) == ".json":
        with open(path, "w") as fh:
            json.dump({"n": int(x.size), "values": [float(v) for v in x]}, fh)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            fh.writelines(f"{float(v)!r}\n" for v in x)


def read_signal(path):
    if _ext(path) == ".json":
        with open(path) as fh:
            doc = json.load(fh)
        x = np.asarray(doc["values"], dtype=float)
        if int(doc.get("n", x.size)) != x.size:
            raise ValueError(f"{path}: n={doc['n']} but {x.size} values")
    else:
        x = np.loadtxt(path, dtype=float, ndmin=1)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{path}: signal has non-finite entries")
    return x


def write_signs(path, y):
    y = np.asarray(y)
    ints = [1 if v > 0 else -1 for v in y]
    if _ext(path) == ".json":
        with open(path, "w") as fh:
            json.dump({"m": len(ints), "signs": ints}, fh)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            fh.writelines(f"{v}\n" for v in ints)


def read_signs(path):
    if _ext(path) == ".json":
        with open(path) as fh:
            doc = json.load(fh)
        y = np.asarray(doc["signs"], dtype=float)
        if int(doc.get("m", y.size)) != y.size:
            raise ValueError(f"{path}: m={doc['m']} but {y.size} signs")
    else:
        y = np.loadtxt(path, dtype=float, ndmin=1)
    if not np.all((y == 1) | (y == -1)):
        raise ValueError(f"{path}: observations must be +1 or -1")
    return y
