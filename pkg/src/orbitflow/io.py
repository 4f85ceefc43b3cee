"""JSON and CSV encodings shared by every module and the command line.

Matrix JSON: {"rows": n, "cols": m, "data": [[re, im], ...]} with data listed
row-major. Floats serialize with Python's shortest round-trip repr; keys are
sorted, so equal objects produce byte-identical output.
"""

import json

import numpy as np

from . import ampli, flagorbit, jacobi
from .errors import LinalgError


def matrix_to_json(A):
    A = np.asarray(A, dtype=complex)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in A.reshape(-1)],
    }


def matrix_from_json(obj):
    for field in ("rows", "cols", "data"):
        if not isinstance(obj, dict) or field not in obj:
            raise LinalgError(f"matrix JSON missing field {field!r}")
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows * cols:
        raise LinalgError(f"matrix JSON field 'data' has {len(data)} entries, expected {rows * cols}")
    try:
        flat = np.array([complex(re, im) for re, im in data])
    except (TypeError, ValueError) as exc:
        raise LinalgError(f"matrix JSON field 'data' must hold [re, im] pairs: {exc}")
    return flat.reshape(rows, cols)


def flag_to_json(V):
    return {"n": int(V.n), "K": [int(k) for k in V.K], "rep": matrix_to_json(V.rep)}


def flag_from_json(obj):
    for field in ("n", "K", "rep"):
        if not isinstance(obj, dict) or field not in obj:
            raise LinalgError(f"flag JSON missing field {field!r}")
    rep = matrix_from_json(obj["rep"])
    return flagorbit.flag_from_matrix(rep, K=obj["K"])


def orbit_to_json(P):
    return {"lambda": [float(x) for x in P.lam], "L": matrix_to_json(P.L)}


def orbit_from_json(obj):
    for field in ("lambda", "L"):
        if not isinstance(obj, dict) or field not in obj:
            raise LinalgError(f"orbit JSON missing field {field!r}")
    return flagorbit.orbit_point(matrix_from_json(obj["L"]), lam=obj["lambda"])


def moser_to_json(d):
    return {"lambda": [float(x) for x in d.lam], "x": [float(x) for x in d.x]}


def moser_from_json(obj):
    for field in ("lambda", "x"):
        if not isinstance(obj, dict) or field not in obj:
            raise LinalgError(f"moser JSON missing field {field!r}")
    return jacobi.moser_data(obj["lambda"], obj["x"])


def zdata_to_json(zd):
    return {"n": int(zd.n), "k": int(zd.k), "m": int(zd.m), "Z": matrix_to_json(zd.Z)}


def zdata_from_json(obj):
    for field in ("n", "k", "m", "Z"):
        if not isinstance(obj, dict) or field not in obj:
            raise LinalgError(f"Z JSON missing field {field!r}")
    Z = matrix_from_json(obj["Z"])
    zd = ampli.make_zdata(Z, obj["k"])
    if zd.n != int(obj["n"]) or zd.m != int(obj["m"]):
        raise LinalgError("Z JSON fields 'n'/'m' are inconsistent with the matrix shape")
    return zd


def verdict_to_json(v):
    out = {"status": v.status, "tol": float(v.tol)}
    if v.witness is not None:
        out["witness"] = {
            "rows": [int(i) for i in v.witness.rows],
            "cols": [int(j) for j in v.witness.cols],
            "value": float(v.witness.value),
        }
    if v.note:
        out["note"] = v.note
    return out


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ": "))


def trajectory_csv_lines(traj):
    """CSV rows: t, then interleaved re/im of L row-major (0-based headers)."""
    n = traj.points[0].L.shape[0]
    header = ["t"]
    for i in range(n):
        for j in range(n):
            header.append(f"L_re[{i}][{j}]")
            header.append(f"L_im[{i}][{j}]")
    yield ",".join(header)
    for t, P in zip(traj.times, traj.points):
        row = [repr(float(t))]
        for z in P.L.reshape(-1):
            row.append(repr(float(z.real)))
            row.append(repr(float(z.imag)))
        yield ",".join(row)


def samples_csv_lines(samples):
    """CSV rows of flattened (k+m) x k representatives, one sample per row."""
    r, k = samples[0].shape
    header = ["idx"]
    for i in range(r):
        for j in range(k):
            header.append(f"V_re[{i}][{j}]")
            header.append(f"V_im[{i}][{j}]")
    yield ",".join(header)
    for idx, S in enumerate(samples):
        row = [str(idx)]
        for z in np.asarray(S, dtype=complex).reshape(-1):
            row.append(repr(float(z.real)))
            row.append(repr(float(z.imag)))
        yield ",".join(row)
