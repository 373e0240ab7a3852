"""Hot numeric kernels.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy version
with identical results.  The numba path is used by default; set
``MONOCOH_DISABLE_NUMBA=1`` in the environment to force the numpy path (the
flag is read once, at import time).
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("MONOCOH_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None
BACKEND = "numba" if (HAVE_NUMBA and not _DISABLED) else "numpy"


# ---------------------------------------------------------------------------
# subsets with every indegree <= 1

def indeg_le_one_masks_numpy(src: np.ndarray, tgt: np.ndarray, n_vertices: int) -> np.ndarray:
    m = len(tgt)
    masks = np.arange(1 << m, dtype=np.int64)
    counts = np.zeros((n_vertices, masks.size), dtype=np.int8)
    for e in range(m):
        counts[tgt[e]] += ((masks >> e) & 1).astype(np.int8)
    keep = np.all(counts <= 1, axis=0) if n_vertices else np.ones(masks.size, dtype=bool)
    return masks[keep]


def _indeg_le_one_masks_loop(src, tgt, n_vertices):
    m = tgt.shape[0]
    total = 1 << m
    out = np.empty(total, dtype=np.int64)
    seen = np.zeros(max(n_vertices, 1), dtype=np.int64)
    stamp = 0
    k = 0
    for mask in range(total):
        stamp += 1
        ok = True
        for e in range(m):
            if (mask >> e) & 1:
                t = tgt[e]
                if seen[t] == stamp:
                    ok = False
                    break
                seen[t] = stamp
        if ok:
            out[k] = mask
            k += 1
    return out[:k]


# ---------------------------------------------------------------------------
# tensor-factor merge: digits (a_0..a_{k-1}) -> a_i * a_j at slot i, slot j dropped

def merge_block_numpy(alpha: int, k: int, i: int, j: int, table: np.ndarray):
    """Sparse entries ``(src, dst, val)`` of the merge map on ``A^{(x)k}``.

    Codes are mixed radix with the first factor most significant.
    """
    n = alpha ** k
    codes = np.arange(n, dtype=np.int64)
    powers = alpha ** np.arange(k - 1, -1, -1, dtype=np.int64)
    digits = (codes[:, None] // powers[None, :]) % alpha
    keep = [t for t in range(k) if t != j]
    new_powers = alpha ** np.arange(k - 2, -1, -1, dtype=np.int64)
    slot = keep.index(i)
    rest = np.delete(digits, j, axis=1)
    srcs, dsts, vals = [], [], []
    di, dj = digits[:, i], digits[:, j]
    for c in range(alpha):
        v = table[di, dj, c]
        nz = v != 0
        if not nz.any():
            continue
        d = rest[nz].copy()
        d[:, slot] = c
        srcs.append(codes[nz])
        dsts.append(d @ new_powers if k > 1 else np.zeros(int(nz.sum()), dtype=np.int64))
        vals.append(v[nz])
    if not srcs:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    src = np.concatenate(srcs)
    order = np.argsort(src, kind="stable")
    return src[order], np.concatenate(dsts)[order], np.concatenate(vals)[order].astype(np.int64)


def _merge_block_loop(alpha, k, i, j, table):
    n = alpha ** k
    cap = n * alpha
    src = np.empty(cap, dtype=np.int64)
    dst = np.empty(cap, dtype=np.int64)
    val = np.empty(cap, dtype=np.int64)
    digits = np.empty(k, dtype=np.int64)
    cnt = 0
    for code in range(n):
        rem = code
        for t in range(k - 1, -1, -1):
            digits[t] = rem % alpha
            rem //= alpha
        a = digits[i]
        b = digits[j]
        for c in range(alpha):
            v = table[a, b, c]
            if v == 0:
                continue
            out = 0
            for t in range(k):
                if t == j:
                    continue
                d = c if t == i else digits[t]
                out = out * alpha + d
            src[cnt] = code
            dst[cnt] = out
            val[cnt] = v
            cnt += 1
    return src[:cnt], dst[:cnt], val[:cnt]


# ---------------------------------------------------------------------------
# dense rank over F_p, p < 2**31 so products fit in int64

def rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        below = m[r + 1:, c].copy()
        sel = np.nonzero(below)[0]
        if sel.size:
            m[r + 1 + sel] = (m[r + 1 + sel] - below[sel, None] * m[r][None, :]) % p
        r += 1
    return int(r)


def _rank_mod_p_loop(a, p):
    m = a.copy()
    rows, cols = m.shape
    for x in range(rows):
        for y in range(cols):
            m[x, y] %= p
            if m[x, y] < 0:
                m[x, y] += p
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for x in range(r, rows):
            if m[x, c] != 0:
                piv = x
                break
        if piv < 0:
            continue
        if piv != r:
            for y in range(cols):
                tmp = m[r, y]
                m[r, y] = m[piv, y]
                m[piv, y] = tmp
        # modular inverse by Fermat
        base = m[r, c]
        e = p - 2
        inv = 1
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for y in range(c, cols):
            m[r, y] = (m[r, y] * inv) % p
        for x in range(r + 1, rows):
            f = m[x, c]
            if f != 0:
                for y in range(c, cols):
                    m[x, y] = (m[x, y] - f * m[r, y]) % p
        r += 1
    return r


if HAVE_NUMBA:
    _indeg_le_one_masks_nb = njit(cache=True)(_indeg_le_one_masks_loop)
    _merge_block_nb = njit(cache=True)(_merge_block_loop)
    _rank_mod_p_nb = njit(cache=True)(_rank_mod_p_loop)

    def indeg_le_one_masks_numba(src, tgt, n_vertices):
        return _indeg_le_one_masks_nb(np.asarray(src, dtype=np.int64), np.asarray(tgt, dtype=np.int64), int(n_vertices))

    def merge_block_numba(alpha, k, i, j, table):
        return _merge_block_nb(int(alpha), int(k), int(i), int(j), np.ascontiguousarray(table, dtype=np.int64))

    def rank_mod_p_numba(a, p):
        return int(_rank_mod_p_nb(np.array(a, dtype=np.int64), np.int64(p)))


if BACKEND == "numba":
    indeg_le_one_masks = indeg_le_one_masks_numba
    merge_block = merge_block_numba
    rank_mod_p_dense = rank_mod_p_numba
else:
    indeg_le_one_masks = indeg_le_one_masks_numpy
    merge_block = merge_block_numpy
    rank_mod_p_dense = rank_mod_p_numpy
