"""Hot inner loops.

Each kernel has two implementations with identical signatures:

* ``*_loop``: explicit loops, compiled with numba when available;
* ``*_np``: vectorised numpy.

The public name (no suffix) is bound at import time to the compiled loop when
``qframe._accel.USE_NUMBA`` is true and to the numpy version otherwise. Both are
kept importable so the benchmark and the parity tests can call either.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "USE_NUMBA",
    "infomorphism_mismatch",
    "restriction_rows",
    "marginalize",
    "bipartition_matrix",
    "IMPLEMENTATIONS",
]


# -- infomorphism fundamental property ---------------------------------------

def infomorphism_mismatch_loop(src_inc, tgt_inc, type_idx, token_idx):
    n_b = token_idx.shape[0]
    n_a = type_idx.shape[0]
    out = np.zeros((n_b, n_a), dtype=np.bool_)
    for b in range(n_b):
        pulled = token_idx[b]
        for a in range(n_a):
            out[b, a] = src_inc[pulled, a] != tgt_inc[b, type_idx[a]]
    return out


def infomorphism_mismatch_np(src_inc, tgt_inc, type_idx, token_idx):
    if token_idx.shape[0] == 0 or type_idx.shape[0] == 0:
        return np.zeros((token_idx.shape[0], type_idx.shape[0]), dtype=np.bool_)
    return src_inc[token_idx, :] != tgt_inc[:, type_idx]


# -- global assignment -> context row index ----------------------------------

def restriction_rows_loop(radices, ctx_obs, ctx_len, ctx_offset):
    """Row index of every global assignment restricted to every context.

    Assignments are enumerated in mixed radix with observable 0 most
    significant (``itertools.product`` order). ``ctx_obs`` is padded with -1.
    """
    n_obs = radices.shape[0]
    n_assign = 1
    for i in range(n_obs):
        n_assign *= radices[i]
    n_ctx = ctx_obs.shape[0]
    out = np.empty((n_ctx, n_assign), dtype=np.int64)
    digits = np.zeros(n_obs, dtype=np.int64)
    for g in range(n_assign):
        rem = g
        for i in range(n_obs - 1, -1, -1):
            digits[i] = rem % radices[i]
            rem //= radices[i]
        for c in range(n_ctx):
            idx = 0
            for j in range(ctx_len[c]):
                o = ctx_obs[c, j]
                idx = idx * radices[o] + digits[o]
            out[c, g] = ctx_offset[c] + idx
    return out


def restriction_rows_np(radices, ctx_obs, ctx_len, ctx_offset):
    n_obs = radices.shape[0]
    n_assign = int(np.prod(radices)) if n_obs else 1
    g = np.arange(n_assign, dtype=np.int64)
    digits = np.empty((n_obs, n_assign), dtype=np.int64)
    rem = g.copy()
    for i in range(n_obs - 1, -1, -1):
        digits[i] = rem % radices[i]
        rem //= radices[i]
    out = np.empty((ctx_obs.shape[0], n_assign), dtype=np.int64)
    for c in range(ctx_obs.shape[0]):
        idx = np.zeros(n_assign, dtype=np.int64)
        for j in range(ctx_len[c]):
            o = ctx_obs[c, j]
            idx = idx * radices[o] + digits[o]
        out[c] = ctx_offset[c] + idx
    return out


# -- marginalisation of a global distribution ---------------------------------

def marginalize_loop(weights, rows, n_rows):
    out = np.zeros(n_rows, dtype=np.float64)
    for c in range(rows.shape[0]):
        for g in range(rows.shape[1]):
            out[rows[c, g]] += weights[g]
    return out


def marginalize_np(weights, rows, n_rows):
    flat = rows.ravel()
    w = np.broadcast_to(weights, rows.shape).ravel()
    return np.bincount(flat, weights=w, minlength=n_rows).astype(np.float64)


# -- Schmidt matrix for a bipartition ----------------------------------------

def bipartition_matrix_loop(psi, dims, keep):
    """Reshape amplitudes into (kept subsystems) x (traced subsystems).

    Row and column indices are mixed-radix in layout order within each side.
    """
    n = dims.shape[0]
    d_keep = 1
    d_rest = 1
    for i in range(n):
        if keep[i]:
            d_keep *= dims[i]
        else:
            d_rest *= dims[i]
    out = np.zeros((d_keep, d_rest), dtype=np.complex128)
    total = psi.shape[0]
    for j in range(total):
        rem = j
        r = 0
        c = 0
        rmul = 1
        cmul = 1
        for i in range(n - 1, -1, -1):
            digit = rem % dims[i]
            rem //= dims[i]
            if keep[i]:
                r += digit * rmul
                rmul *= dims[i]
            else:
                c += digit * cmul
                cmul *= dims[i]
        out[r, c] = psi[j]
    return out


def bipartition_matrix_np(psi, dims, keep):
    n = dims.shape[0]
    kept = [i for i in range(n) if keep[i]]
    rest = [i for i in range(n) if not keep[i]]
    d_keep = int(np.prod(dims[kept])) if kept else 1
    d_rest = int(np.prod(dims[rest])) if rest else 1
    tensor = np.asarray(psi).reshape(tuple(int(d) for d in dims))
    return np.transpose(tensor, kept + rest).reshape(d_keep, d_rest)


_LOOPS = {
    "infomorphism_mismatch": infomorphism_mismatch_loop,
    "restriction_rows": restriction_rows_loop,
    "marginalize": marginalize_loop,
    "bipartition_matrix": bipartition_matrix_loop,
}
_NUMPY = {
    "infomorphism_mismatch": infomorphism_mismatch_np,
    "restriction_rows": restriction_rows_np,
    "marginalize": marginalize_np,
    "bipartition_matrix": bipartition_matrix_np,
}

if USE_NUMBA:
    _JIT = {name: njit(fn) for name, fn in _LOOPS.items()}
    _ACTIVE = _JIT
else:
    _JIT = {}
    _ACTIVE = _NUMPY

# name -> {"numba": fn (absent if disabled), "numpy": fn}
IMPLEMENTATIONS = {
    name: ({"numba": _JIT[name]} if name in _JIT else {}) | {"numpy": _NUMPY[name]}
    for name in _NUMPY
}

infomorphism_mismatch = _ACTIVE["infomorphism_mismatch"]
restriction_rows = _ACTIVE["restriction_rows"]
marginalize = _ACTIVE["marginalize"]
bipartition_matrix = _ACTIVE["bipartition_matrix"]
