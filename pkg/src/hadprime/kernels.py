"""Numba kernels for codeword enumeration.

Message-space scans work on packed redundancy rows: GF(2) words hold 63
coordinates per int64 (bit-parallel XOR), GF(3)/GF(5) words hold 15 nibble
lanes per int64 with carry-free modular correction, keeping the top nibble
clear so signed arithmetic never overflows.  The Brouwer-Zimmermann scans
enumerate combinations with the leading coefficient normalized to 1, i.e.
one codeword per scalar class.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_LANES = 15  # nibble lanes per packed word

_NIB_LO = 0x0111111111111111
_NIB_HI = 0x0888888888888888
_GE3 = 0x0555555555555555  # lane + 5 >= 8  iff  lane >= 3
_GE5 = 0x0333333333333333  # lane + 3 >= 8  iff  lane >= 5


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    x = x + (x >> 8)
    x = x + (x >> 16)
    x = x + (x >> 32)
    return x & 0x7F


@njit(cache=True, inline="always")
def _nib_add(x, y, gec, s1):
    """Lane-wise sum mod q; gec/s1 select the q=3 or q=5 correction."""
    z = x + y
    t = (z + gec) & _NIB_HI
    return z - ((t >> s1) + (t >> 3))


@njit(cache=True, inline="always")
def _nib_weight(z):
    u = (z | (z >> 1) | (z >> 2)) & _NIB_LO
    return _popcount(u)


def pack_binary_rows(rows: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows (k, n) into (1, k, W) int64 words of 63 bits each."""
    k, n = rows.shape
    w = max(1, -(-n // 63))
    out = np.zeros((1, k, w), dtype=np.int64)
    for i in range(k):
        for j in range(n):
            if rows[i, j]:
                out[0, i, j // 63] |= 1 << (j % 63)
    return out


def pack_nibble_rows(rows: np.ndarray, q: int) -> np.ndarray:
    """Pack residue rows (k, n) into (q-1, k, W) nibble words; plane c-1 holds c*row."""
    k, n = rows.shape
    w = max(1, -(-n // _LANES))
    out = np.zeros((q - 1, k, w), dtype=np.int64)
    for c in range(1, q):
        scaled = (rows * c) % q
        for i in range(k):
            for j in range(n):
                v = int(scaled[i, j])
                if v:
                    out[c - 1, i, j // _LANES] |= v << (4 * (j % _LANES))
    return out


@njit(cache=True)
def _scan_binary_from(rows, r, i1, k, w, target, out2):
    """DFS over r-subsets starting at i1; returns min(r + red weight).

    When target >= 0 also counts leaves with r + red weight == target into
    out2[0].
    """
    idx = np.empty(r, np.int64)
    part = np.zeros((r + 1) * w, np.int64)
    best = np.int64(1 << 40)
    cnt = np.int64(0)
    idx[0] = i1
    for t in range(w):
        part[w + t] = part[t] ^ rows[0, i1, t]
    d = 0
    while d >= 0:
        if d == r - 1:
            base = (d + 1) * w
            wt = np.int64(r)
            for t in range(w):
                wt += _popcount(part[base + t])
            if wt < best:
                best = wt
            if wt == target:
                cnt += 1
            while d >= 0:
                if d == 0:
                    d = -1
                    break
                if idx[d] + 1 <= k - (r - 1 - d):
                    idx[d] += 1
                    pb = d * w
                    for t in range(w):
                        part[pb + w + t] = part[pb + t] ^ rows[0, idx[d], t]
                    break
                d -= 1
        else:
            nd = d + 1
            idx[nd] = idx[d] + 1
            pb = nd * w
            for t in range(w):
                part[pb + t] = part[pb - w + t] ^ rows[0, idx[nd], t]
            d = nd
    out2[0] = cnt
    return best


@njit(cache=True)
def _scan_nibble_from(rows, r, i1, k, w, qm1, gec, s1, target, out2):
    """DFS over r-subsets and coefficient patterns (first coefficient 1)."""
    idx = np.empty(r, np.int64)
    ci = np.empty(r, np.int64)
    part = np.zeros((r + 1) * w, np.int64)
    best = np.int64(1 << 40)
    cnt = np.int64(0)
    idx[0] = i1
    ci[0] = 0
    for t in range(w):
        part[w + t] = _nib_add(part[t], rows[0, i1, t], gec, s1)
    d = 0
    while d >= 0:
        if d == r - 1:
            base = (d + 1) * w
            wt = np.int64(r)
            for t in range(w):
                wt += _nib_weight(part[base + t])
            if wt < best:
                best = wt
            if wt == target:
                cnt += 1
            while d >= 0:
                if d > 0 and ci[d] < qm1 - 1:
                    ci[d] += 1
                    pb = d * w
                    for t in range(w):
                        part[pb + w + t] = _nib_add(part[pb + t], rows[ci[d], idx[d], t], gec, s1)
                    break
                if d == 0:
                    d = -1
                    break
                if idx[d] + 1 <= k - (r - 1 - d):
                    idx[d] += 1
                    ci[d] = 0
                    pb = d * w
                    for t in range(w):
                        part[pb + w + t] = _nib_add(part[pb + t], rows[0, idx[d], t], gec, s1)
                    break
                d -= 1
        else:
            nd = d + 1
            idx[nd] = idx[d] + 1
            ci[nd] = 0
            pb = nd * w
            for t in range(w):
                part[pb + t] = _nib_add(part[pb - w + t], rows[0, idx[nd], t], gec, s1)
            d = nd
    out2[0] = cnt
    return best


@njit(cache=True, parallel=True)
def scan_binary(rows, r, target):
    k = rows.shape[1]
    w = rows.shape[2]
    top = k - r + 1
    mins = np.empty(top, np.int64)
    cnts = np.empty(top, np.int64)
    for i1 in prange(top):
        out2 = np.zeros(1, np.int64)
        mins[i1] = _scan_binary_from(rows, r, i1, k, w, target, out2)
        cnts[i1] = out2[0]
    return mins.min(), cnts.sum()


@njit(cache=True, parallel=True)
def scan_nibble(rows, r, q, target):
    k = rows.shape[1]
    w = rows.shape[2]
    gec = _GE3 if q == 3 else _GE5
    s1 = 2 if q == 3 else 1
    top = k - r + 1
    mins = np.empty(top, np.int64)
    cnts = np.empty(top, np.int64)
    for i1 in prange(top):
        out2 = np.zeros(1, np.int64)
        mins[i1] = _scan_nibble_from(rows, r, i1, k, w, q - 1, gec, s1, target, out2)
        cnts[i1] = out2[0]
    return mins.min(), cnts.sum()


def scan_information_weight(packed: np.ndarray, r: int, q: int, target: int = -1):
    """Scan all information-weight-r scalar classes for one information set.

    Returns (minimum of r + redundancy weight, number of classes whose full
    weight equals `target`).
    """
    if r < 1 or r > packed.shape[1]:
        raise ValueError("information weight out of range")
    if q == 2:
        return scan_binary(packed, r, target)
    return scan_nibble(packed, r, q, target)


@njit(cache=True)
def weight_distribution_scan(gen, q):
    """Exact weight distribution by odometer scan of all q^k messages."""
    k, n = gen.shape
    dist = np.zeros(n + 1, np.int64)
    dist[0] = 1
    m = np.zeros(k, np.int64)
    cw = np.zeros(n, np.int64)
    total = 1
    for _ in range(k):
        total *= q
    for _ in range(total - 1):
        i = 0
        while True:
            for j in range(n):
                v = cw[j] + gen[i, j]
                if v >= q:
                    v -= q
                cw[j] = v
            m[i] += 1
            if m[i] == q:
                m[i] = 0
                i += 1
            else:
                break
        wt = 0
        for j in range(n):
            if cw[j] != 0:
                wt += 1
        dist[wt] += 1
    return dist
