"""Numeric inner loops.

Every kernel exists twice: a plain-loop version that numba compiles with
``@njit`` and a vectorised pure-numpy version.  The numba path is used unless
``TORFACET_DISABLE_NUMBA`` is set (or numba is not importable).  Tiny inputs
always take the numpy path so that short CLI runs never pay for the import
and the JIT compile.

All kernels work on ``int64`` arrays.  Integer elimination keeps every entry
below ``2**31`` in absolute value so that ``q * x`` cannot overflow; a kernel
that would exceed the bound reports failure and the caller switches to
arbitrary precision.
"""
from __future__ import annotations

import os

import numpy as np

ENTRY_LIMIT = 1 << 31

# entries below this are handled by numpy even when numba is enabled
NUMBA_MIN_SIZE = int(os.environ.get("TORFACET_NUMBA_MIN_SIZE", "256"))


def _env_disabled() -> bool:
    return os.environ.get("TORFACET_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")


USE_NUMBA = not _env_disabled()


# ---------------------------------------------------------------- loop kernels
# Written in the numba-compatible subset; also runnable as plain Python.

def _snf_diagonal_loops(a):
    a = a.copy()
    nr, nc = a.shape
    n = min(nr, nc)
    diag = np.zeros(n, np.int64)
    t = 0
    while t < n:
        best = 0
        bi = -1
        bj = -1
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i, j])
                if v != 0 and (best == 0 or v < best):
                    best = v
                    bi = i
                    bj = j
            if best == 1:
                break
        if best == 0:
            break
        if bi != t:
            for j in range(nc):
                tmp = a[t, j]
                a[t, j] = a[bi, j]
                a[bi, j] = tmp
        if bj != t:
            for i in range(nr):
                tmp = a[i, t]
                a[i, t] = a[i, bj]
                a[i, bj] = tmp
        while True:
            p = a[t, t]
            clean = True
            for i in range(t + 1, nr):
                if a[i, t] != 0:
                    q = a[i, t] // p
                    for j in range(t, nc):
                        a[i, j] -= q * a[t, j]
                        if abs(a[i, j]) >= ENTRY_LIMIT:
                            return diag[:0], False
                    if a[i, t] != 0:
                        clean = False
            for j in range(t + 1, nc):
                if a[t, j] != 0:
                    q = a[t, j] // p
                    for i in range(t, nr):
                        a[i, j] -= q * a[i, t]
                        if abs(a[i, j]) >= ENTRY_LIMIT:
                            return diag[:0], False
                    if a[t, j] != 0:
                        clean = False
            if not clean:
                # smallest leftover in pivot row/column becomes the new pivot
                best = abs(a[t, t])
                bi = t
                bj = t
                for i in range(t + 1, nr):
                    v = abs(a[i, t])
                    if v != 0 and v < best:
                        best = v
                        bi = i
                        bj = t
                for j in range(t + 1, nc):
                    v = abs(a[t, j])
                    if v != 0 and v < best:
                        best = v
                        bi = t
                        bj = j
                if bi != t:
                    for j in range(nc):
                        tmp = a[t, j]
                        a[t, j] = a[bi, j]
                        a[bi, j] = tmp
                if bj != t:
                    for i in range(nr):
                        tmp = a[i, t]
                        a[i, t] = a[i, bj]
                        a[i, bj] = tmp
                continue
            bad = -1
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i, j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad >= 0:
                for j in range(t, nc):
                    a[t, j] += a[bad, j]
                    if abs(a[t, j]) >= ENTRY_LIMIT:
                        return diag[:0], False
                continue
            break
        diag[t] = abs(a[t, t])
        t += 1
    return diag[:t], True


def _rank_mod_p_loops(a, p):
    a = a % p
    nr, nc = a.shape
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        piv = -1
        for i in range(rank, nr):
            if a[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, nc):
                tmp = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = tmp
        # inverse by extended Euclid
        x = a[rank, col]
        y = p
        s0 = 1
        s1 = 0
        while y != 0:
            q = x // y
            x, y = y, x - q * y
            s0, s1 = s1, s0 - q * s1
        inv = s0 % p
        for j in range(col, nc):
            a[rank, j] = (a[rank, j] * inv) % p
        for i in range(rank + 1, nr):
            f = a[i, col]
            if f != 0:
                for j in range(col, nc):
                    a[i, j] = (a[i, j] - f * a[rank, j]) % p
        rank += 1
    return rank


def _face_table_loops(facet_masks, m):
    n = 1 << m
    face = np.zeros(n, np.bool_)
    for f in facet_masks:
        face[f] = True
    for b in range(m):
        bit = 1 << b
        for s in range(n):
            if (s & bit) != 0 and face[s]:
                face[s ^ bit] = True
    return face


# --------------------------------------------------------------- numpy kernels

def _snf_diagonal_numpy(a):
    a = np.array(a, dtype=np.int64, copy=True)
    nr, nc = a.shape
    n = min(nr, nc)
    diag = []
    t = 0
    while t < n:
        sub = np.abs(a[t:, t:])
        nz = sub != 0
        if not nz.any():
            break
        flat = np.where(nz, sub, np.iinfo(np.int64).max).argmin()
        bi, bj = divmod(int(flat), nc - t)
        a[[t, t + bi]] = a[[t + bi, t]]
        a[:, [t, t + bj]] = a[:, [t + bj, t]]
        while True:
            p = a[t, t]
            q = a[t + 1:, t] // p
            a[t + 1:, t:] -= np.outer(q, a[t, t:])
            q = a[t, t + 1:] // p
            a[t:, t + 1:] -= np.outer(a[t:, t], q)
            if a.size and np.abs(a).max() >= ENTRY_LIMIT:
                return np.zeros(0, np.int64), False
            col = a[t + 1:, t]
            row = a[t, t + 1:]
            if col.any() or row.any():
                cand = np.concatenate(([abs(p)], np.abs(col), np.abs(row)))
                cand = np.where(cand == 0, np.iinfo(np.int64).max, cand)
                k = int(cand.argmin())
                if 1 <= k <= len(col):
                    i = t + k
                    a[[t, i]] = a[[i, t]]
                elif k > len(col):
                    j = t + k - len(col)
                    a[:, [t, j]] = a[:, [j, t]]
                continue
            rest = a[t + 1:, t + 1:] % p
            bad = np.nonzero(rest.any(axis=1))[0]
            if len(bad):
                a[t, t:] += a[t + 1 + bad[0], t:]
                continue
            break
        diag.append(abs(int(a[t, t])))
        t += 1
    return np.array(diag, dtype=np.int64), True


def _rank_mod_p_numpy(a, p):
    a = np.array(a, dtype=np.int64) % p
    nr, nc = a.shape
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if len(nz) == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, col]), -1, p)) % p
        below = a[rank + 1:, col].copy()
        a[rank + 1:] = (a[rank + 1:] - np.outer(below, a[rank])) % p
        rank += 1
    return rank


def _face_table_numpy(facet_masks, m):
    n = 1 << m
    face = np.zeros(n, dtype=bool)
    face[np.asarray(facet_masks, dtype=np.int64)] = True
    idx = np.arange(n, dtype=np.int64)
    for b in range(m):
        bit = 1 << b
        has = idx[(idx & bit) != 0]
        face[has ^ bit] |= face[has]
    return face


# ------------------------------------------------------------------ dispatch

_jitted: dict = {}


def _jit(name):
    fn = _jitted.get(name)
    if fn is None:
        from numba import njit

        src = {
            "snf": _snf_diagonal_loops,
            "rank": _rank_mod_p_loops,
            "faces": _face_table_loops,
        }[name]
        fn = _jitted[name] = njit(cache=True, nogil=True)(src)
    return fn


def _numba_ok(size: int) -> bool:
    global USE_NUMBA
    if not USE_NUMBA or size < NUMBA_MIN_SIZE:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False
        return False
    return True


def snf_diagonal(a: np.ndarray) -> tuple[np.ndarray, bool]:
    """Nonzero Smith invariant factors of an int64 matrix, ascending.

    Returns ``(diag, ok)``; ``ok`` is False when the int64 bound was hit.
    """
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros(0, np.int64), True
    if _numba_ok(a.size):
        return _jit("snf")(a)
    return _snf_diagonal_numpy(a)


def rank_mod_p(a: np.ndarray, p: int) -> int:
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    if _numba_ok(a.size):
        return int(_jit("rank")(a, np.int64(p)))
    return _rank_mod_p_numpy(a, p)


def face_table(facet_masks, m: int) -> np.ndarray:
    """Boolean table over all ``2**m`` vertex subsets: True for faces."""
    masks = np.asarray(list(facet_masks), dtype=np.int64)
    if _numba_ok(1 << m):
        return _jit("faces")(masks, m)
    return _face_table_numpy(masks, m)


# explicit per-path entry points for the benchmark and the parity tests
def snf_diagonal_numba(a):
    return _jit("snf")(np.ascontiguousarray(a, dtype=np.int64))


def rank_mod_p_numba(a, p):
    return int(_jit("rank")(np.ascontiguousarray(a, dtype=np.int64), np.int64(p)))


def face_table_numba(facet_masks, m):
    return _jit("faces")(np.asarray(list(facet_masks), dtype=np.int64), m)


snf_diagonal_numpy = _snf_diagonal_numpy
rank_mod_p_numpy = _rank_mod_p_numpy
face_table_numpy = _face_table_numpy
