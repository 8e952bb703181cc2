"""Exact linear algebra over the prime fields GF(2), GF(3) and GF(5).

Matrices are dense numpy integer arrays holding residues in [0, q).  All
reductions are deterministic: pivots are chosen leftmost-first, and within a
column the smallest row index wins, so reduced forms (and therefore code
equality tests) are reproducible across runs and platforms.
"""

from __future__ import annotations

import numpy as np

SUPPORTED_FIELDS = (2, 3, 5)

# multiplicative inverse tables, _INV[q][x] for x in 1..q-1
_INV = {q: {x: pow(x, q - 2, q) for x in range(1, q)} for q in SUPPORTED_FIELDS}


def _check_field(q: int) -> None:
    if q not in SUPPORTED_FIELDS:
        raise ValueError(f"unsupported field GF({q}); supported fields: GF(2), GF(3), GF(5)")


class GFMatrix:
    """A rows x cols matrix of residues modulo q, q in {2, 3, 5}."""

    __slots__ = ("q", "a")

    def __init__(self, q: int, entries) -> None:
        _check_field(q)
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("expected a 2-d matrix with at least one row and column")
        if ((a < 0) | (a >= q)).any():
            raise ValueError(f"entries must be residues in [0, {q})")
        self.q = q
        self.a = a
        self.a.setflags(write=False)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GFMatrix):
            return NotImplemented
        return self.q == other.q and self.a.shape == other.a.shape and bool((self.a == other.a).all())

    def __repr__(self) -> str:
        return f"GFMatrix(q={self.q}, shape={self.a.shape})"


def _rref_array(q: int, a: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form of `a` mod q; returns (reduced, rank, pivot cols)."""
    r = (a % q).astype(np.int64)
    nrows, ncols = r.shape
    pivots: list[int] = []
    pr = 0
    for c in range(ncols):
        if pr == nrows:
            break
        nz = np.nonzero(r[pr:, c])[0]
        if nz.size == 0:
            continue
        i = pr + int(nz[0])
        if i != pr:
            r[[pr, i]] = r[[i, pr]]
        v = int(r[pr, c])
        if v != 1:
            r[pr] = (r[pr] * _INV[q][v]) % q
        col = r[:, c].copy()
        col[pr] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            r[hit] = (r[hit] - np.outer(col[hit], r[pr])) % q
        pivots.append(c)
        pr += 1
    return r, pr, pivots


def rref(m: GFMatrix) -> tuple[GFMatrix, int, tuple[int, ...]]:
    """Reduced row echelon form over GF(q).

    Returns (reduced matrix, rank, pivot column indices).  The row space is
    preserved and the result is idempotent: rref(rref(m)) == rref(m).
    """
    r, rank, pivots = _rref_array(m.q, m.a)
    return GFMatrix(m.q, r), rank, tuple(pivots)


class LinearCode:
    """An [n, k] linear code over GF(q), held as a reduced echelon generator.

    The stored generator has exactly k = rank rows, so two codes are equal
    iff their (q, generator) pairs are equal.
    """

    __slots__ = ("q", "gen", "pivots")

    def __init__(self, q: int, rows) -> None:
        _check_field(q)
        a = np.atleast_2d(np.asarray(rows, dtype=np.int64)) % q
        if a.ndim != 2 or a.shape[1] < 1:
            raise ValueError("generator must have at least one column")
        red, rank, pivots = _rref_array(q, a)
        self.q = q
        self.gen = red[:rank].copy()
        self.gen.setflags(write=False)
        self.pivots = tuple(pivots)

    @property
    def n(self) -> int:
        return self.gen.shape[1]

    @property
    def k(self) -> int:
        return self.gen.shape[0]

    def generator_matrix(self) -> GFMatrix:
        if self.k == 0:
            raise ValueError("zero-dimensional code has no generator rows")
        return GFMatrix(self.q, self.gen)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (
            self.q == other.q
            and self.gen.shape == other.gen.shape
            and bool((self.gen == other.gen).all())
        )

    def __repr__(self) -> str:
        return f"LinearCode(q={self.q}, n={self.n}, k={self.k})"


def dual_code(c: LinearCode) -> LinearCode:
    """The dual code under the standard inner product mod q; dimension n - k."""
    n, k, q = c.n, c.k, c.q
    if k == 0:
        return LinearCode(q, np.eye(n, dtype=np.int64))
    free = [j for j in range(n) if j not in set(c.pivots)]
    d = np.zeros((n - k, n), dtype=np.int64)
    for row, f in enumerate(free):
        d[row, f] = 1
        for i, pcol in enumerate(c.pivots):
            d[row, pcol] = (-int(c.gen[i, f])) % q
    if n - k == 0:
        # dual of the full space: the zero code, carried as an empty generator
        code = LinearCode.__new__(LinearCode)
        code.q = q
        code.gen = np.zeros((0, n), dtype=np.int64)
        code.gen.setflags(write=False)
        code.pivots = ()
        return code
    return LinearCode(q, d)


def is_self_dual(c: LinearCode) -> bool:
    """True iff 2k = n and the generator is self-orthogonal mod q."""
    if 2 * c.k != c.n:
        return False
    gram = (c.gen @ c.gen.T) % c.q
    return not gram.any()


def is_doubly_even(c: LinearCode) -> bool:
    """True iff every codeword of the binary code c has weight divisible by 4.

    Uses the generator characterization: all generator rows have weight = 0
    (mod 4) and all pairwise row intersections are even.  This is equivalent
    to the property holding on the whole span.
    """
    if c.q != 2:
        raise ValueError("doubly-even is defined for binary codes only")
    gram = c.gen @ c.gen.T  # integer overlaps, no reduction
    diag = np.diag(gram)
    if (diag % 4).any():
        return False
    off = gram - np.diag(diag)
    return not (off % 2).any()
