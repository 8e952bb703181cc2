"""Incidence matrices, Hadamard matrices and the transforms between them.

Builds the (2p+1) x (2p+1) design incidence matrix from a circulant
quadruple, the bordered (2p+2) x (2p+2) sign matrix it induces, Paley sign
matrices of both types, and the complement / dual / derived / point-block
transforms.  Every constructor verifies the defining identity of its output
in exact integer arithmetic.
"""

from __future__ import annotations

import numpy as np

from .circulant import CirculantQuadruple, CyclicSupport, is_odd_prime


class VerificationError(ValueError):
    """A defining identity failed; the message names the violated condition."""


# ---------------------------------------------------------------------------
# domain types


class Design:
    """A block-by-point 0/1 incidence matrix with optional declared parameters."""

    __slots__ = ("v", "b", "incidence", "params")

    def __init__(self, incidence, params: tuple[int, int, int, int] | None = None) -> None:
        a = np.asarray(incidence, dtype=np.int8)
        if a.ndim != 2:
            raise ValueError("incidence must be a 2-d 0/1 matrix")
        if ((a != 0) & (a != 1)).any():
            raise ValueError("incidence entries must be 0 or 1")
        self.incidence = a
        self.incidence.setflags(write=False)
        self.b, self.v = a.shape
        self.params = params  # (t, v, k, lambda) when declared

    def blocks(self) -> list[tuple[int, ...]]:
        return [tuple(np.nonzero(row)[0]) for row in self.incidence]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Design):
            return NotImplemented
        return self.incidence.shape == other.incidence.shape and bool(
            (self.incidence == other.incidence).all()
        )

    def __repr__(self) -> str:
        tag = f", params={self.params}" if self.params else ""
        return f"Design(v={self.v}, b={self.b}{tag})"


class SignMatrix:
    """A square matrix over {+1, -1}; Hadamard-ness is checked separately."""

    __slots__ = ("n", "entries")

    def __init__(self, entries) -> None:
        a = np.asarray(entries, dtype=np.int8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("sign matrix must be square")
        if ((a != 1) & (a != -1)).any():
            raise ValueError("entries must be +1 or -1")
        self.entries = a
        self.entries.setflags(write=False)
        self.n = a.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return self.n == other.n and bool((self.entries == other.entries).all())

    def __repr__(self) -> str:
        return f"SignMatrix(n={self.n})"


# ---------------------------------------------------------------------------
# circulant building blocks


def circulant_matrix(s: CyclicSupport) -> np.ndarray:
    """p x p 0/1 circulant whose row i is the indicator of S + i."""
    p = s.p
    m = np.zeros((p, p), dtype=np.int8)
    idx = np.asarray(s.elements, dtype=np.int64)
    for i in range(p):
        m[i, (idx + i) % p] = 1
    return m


def incidence_matrix(q: CirculantQuadruple) -> Design:
    """The (2p+1) x (2p+1) Hadamard 2-design incidence matrix of a quadruple.

    Layout: rows [M | N | 1-column], then [P | J-Q | 0-column], then the
    final row (1..1 | 0..0 | 0).  Declared parameters 2-(2p+1, p, (p-1)/2).
    """
    q.validate()
    p = q.p
    n = 2 * p + 1
    a = np.zeros((n, n), dtype=np.int8)
    a[:p, :p] = circulant_matrix(q.sm)
    a[:p, p : 2 * p] = circulant_matrix(q.sn)
    a[:p, 2 * p] = 1
    a[p : 2 * p, :p] = circulant_matrix(q.sp)
    a[p : 2 * p, p : 2 * p] = 1 - circulant_matrix(q.sq)
    a[2 * p, :p] = 1
    d = Design(a, params=(2, n, p, (p - 1) // 2))
    verify_t_design(d, 2)
    return d


def hadamard_from_quadruple(q: CirculantQuadruple) -> SignMatrix:
    """The (2p+2) x (2p+2) sign matrix obtained by bordering the incidence matrix.

    The exponent matrix is the all-ones border around A, and the sign matrix
    is (-1)^entry, so the border row and column are all -1.
    """
    a = incidence_matrix(q).incidence
    n = a.shape[0] + 1
    b = np.ones((n, n), dtype=np.int8)
    b[1:, 1:] = a
    h = SignMatrix(1 - 2 * b.astype(np.int8))
    if not verify_hadamard(h):
        raise VerificationError("bordered sign matrix is not Hadamard")
    return h


# ---------------------------------------------------------------------------
# verification


def verify_hadamard(h: SignMatrix) -> bool:
    """True iff H H^T = n I over the integers."""
    m = h.entries.astype(np.int64)
    return bool((m @ m.T == h.n * np.eye(h.n, dtype=np.int64)).all())


def _coverage_counts(a: np.ndarray, t: int) -> np.ndarray:
    """Exact t-subset coverage counts for t <= 3, vectorized."""
    a64 = a.astype(np.int64)
    if t == 1:
        return a64.sum(axis=0)
    if t == 2:
        return a64.T @ a64
    if t == 3:
        v = a.shape[1]
        out = np.empty((v, v, v), dtype=np.int64)
        for i in range(v):
            masked = a64 * a64[:, i : i + 1]
            out[i] = masked.T @ a64
        return out
    raise ValueError("direct coverage supported for t <= 3")


def verify_t_design(d: Design, t: int) -> tuple[int, int]:
    """Return (k, lambda) of the t-design, or raise VerificationError.

    The error names a violating t-subset (or reports a non-constant block
    size).  For t <= 3 the check is exhaustive over all t-subsets.
    """
    if t < 1 or t > d.v:
        raise ValueError(f"t must lie in [1, v], got {t}")
    sizes = d.incidence.sum(axis=1)
    k = int(sizes[0]) if d.b else 0
    if (sizes != k).any():
        bad = int(np.nonzero(sizes != k)[0][0])
        raise VerificationError(f"non-constant block size: block {bad} has {int(sizes[bad])} points, block 0 has {k}")
    if t > 3:
        # small designs only; exhaustive subset scan
        import itertools

        lam = None
        cols = d.incidence.astype(np.int64)
        for subset in itertools.combinations(range(d.v), t):
            cov = int((cols[:, subset].min(axis=1) == 1).sum())
            if lam is None:
                lam = cov
            elif cov != lam:
                raise VerificationError(f"t-subset {subset} lies in {cov} blocks, expected {lam}")
        return k, int(lam)
    counts = _coverage_counts(d.incidence, t)
    if t == 1:
        lam = int(counts[0])
        if (counts != lam).any():
            bad = int(np.nonzero(counts != lam)[0][0])
            raise VerificationError(f"point ({bad},) lies in {int(counts[bad])} blocks, expected {lam}")
        return k, lam
    if t == 2:
        iu = np.triu_indices(d.v, k=1)
        vals = counts[iu]
        lam = int(vals[0])
        if (vals != lam).any():
            j = int(np.nonzero(vals != lam)[0][0])
            pair = (int(iu[0][j]), int(iu[1][j]))
            raise VerificationError(f"pair {pair} lies in {int(vals[j])} blocks, expected {lam}")
        return k, lam
    # t == 3
    v = d.v
    lam = None
    for i in range(v):
        sub = counts[i]
        iu = np.triu_indices(v, k=1)
        mask = (iu[0] > i) & (iu[1] > i)
        vals = sub[iu[0][mask], iu[1][mask]]
        if vals.size == 0:
            continue
        if lam is None:
            lam = int(vals[0])
        if (vals != lam).any():
            j = int(np.nonzero(vals != lam)[0][0])
            triple = (i, int(iu[0][mask][j]), int(iu[1][mask][j]))
            raise VerificationError(f"triple {triple} lies in {int(vals[j])} blocks, expected {lam}")
    return k, int(lam)


# ---------------------------------------------------------------------------
# transforms


def complement_design(d: Design) -> Design:
    params = None
    if d.params and d.params[0] == 2:
        t, v, k, lam = d.params
        r = lam * (v - 1) // (k - 1)
        params = (2, v, v - k, d.b - 2 * r + lam)
    return Design(1 - d.incidence, params=params)


def dual_design(d: Design) -> Design:
    if d.v != d.b:
        raise ValueError("dual is defined for symmetric designs only")
    return Design(d.incidence.T.copy(), params=d.params)


def derived_design(d: Design, point: int) -> Design:
    """Blocks through the point, restricted to the remaining points."""
    if not 0 <= point < d.v:
        raise ValueError(f"point index out of range: {point}")
    rows = d.incidence[:, point] == 1
    keep = np.ones(d.v, dtype=bool)
    keep[point] = False
    params = None
    if d.params:
        t, v, k, lam = d.params
        if t >= 2:
            params = (t - 1, v - 1, k - 1, lam)
    return Design(d.incidence[rows][:, keep], params=params)


def hadamard_3_design(h: SignMatrix) -> Design:
    """The 3-(n, n/2, n/4 - 1) design carried by a Hadamard matrix.

    Columns are negated so row 0 becomes all +1 (this fixes the point
    identification), then rows so column 0 becomes all +1 (harmless: both a
    row's +1-support and its complement appear as blocks).  Points are all n
    columns; blocks are the +1-supports of rows 1..n-1 and their complements.
    The distinguished point is column 0: deriving there recovers the design
    the matrix was built from, up to isomorphism.
    """
    if not verify_hadamard(h):
        raise VerificationError("input sign matrix is not Hadamard")
    if h.n < 8 or h.n % 4:
        raise ValueError("order must be a multiple of 4 and at least 8")
    m = h.entries.astype(np.int8).copy()
    m *= m[0]  # column normalization
    m *= m[:, :1]  # row normalization
    n = h.n
    sup = (m[1:] == 1).astype(np.int8)
    blocks = np.vstack([sup, 1 - sup])
    d = Design(blocks, params=(3, n, n // 2, n // 4 - 1))
    k, lam = verify_t_design(d, 3)
    if (k, lam) != (n // 2, n // 4 - 1):
        raise VerificationError(f"expected a 3-({n}, {n // 2}, {n // 4 - 1}) design, got k={k}, lambda={lam}")
    return d


# ---------------------------------------------------------------------------
# Paley constructions


def _quadratic_character(q: int) -> np.ndarray:
    """chi over Z_q with chi(0) = 0, as an int8 vector of length q."""
    chi = -np.ones(q, dtype=np.int8)
    chi[0] = 0
    for x in range(1, q):
        chi[(x * x) % q] = 1
    return chi


def _jacobsthal(q: int) -> np.ndarray:
    chi = _quadratic_character(q)
    idx = (np.arange(q)[None, :] - np.arange(q)[:, None]) % q
    return chi[idx]


def paley_type_I(q: int) -> SignMatrix:
    """Order q+1 Paley sign matrix for a prime q = 3 (mod 4)."""
    if not is_odd_prime(q) or q % 4 != 3:
        raise ValueError(f"type I requires a prime q = 3 (mod 4), got {q}")
    n = q + 1
    h = np.empty((n, n), dtype=np.int8)
    h[0, :] = 1
    h[1:, 0] = -1
    h[1:, 1:] = _jacobsthal(q)
    h[np.arange(1, n), np.arange(1, n)] = 1
    out = SignMatrix(h)
    if not verify_hadamard(out):
        raise VerificationError("Paley type I construction failed verification")
    return out


def paley_type_II(q: int) -> SignMatrix:
    """Order 2(q+1) Paley sign matrix for a prime q = 1 (mod 4)."""
    if not is_odd_prime(q) or q % 4 != 1:
        raise ValueError(f"type II requires a prime q = 1 (mod 4), got {q}")
    m = q + 1
    s = np.zeros((m, m), dtype=np.int64)
    s[0, 1:] = 1
    s[1:, 0] = 1
    s[1:, 1:] = _jacobsthal(q)
    a = np.array([[1, 1], [1, -1]], dtype=np.int64)
    b = np.array([[1, -1], [-1, -1]], dtype=np.int64)
    h = np.kron(s, a) + np.kron(np.eye(m, dtype=np.int64), b)
    out = SignMatrix(h.astype(np.int8))
    if not verify_hadamard(out):
        raise VerificationError("Paley type II construction failed verification")
    return out


# ---------------------------------------------------------------------------
# file formats
#
#   sign matrix: first line `H n`, then n lines of n characters from {+, -}
#   design:      first line `D v b k`, then b lines of v characters from {0, 1}


def format_sign_matrix(h: SignMatrix) -> str:
    lines = [f"H {h.n}"]
    for row in h.entries:
        lines.append("".join("+" if x == 1 else "-" for x in row))
    return "\n".join(lines) + "\n"


def parse_sign_matrix(text: str) -> SignMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 2 or head[0] != "H":
        raise ValueError(f"expected header 'H n', got {lines[0]!r}")
    n = int(head[1])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], 1):
        ln = ln.strip()
        if len(ln) != n or set(ln) - {"+", "-"}:
            raise ValueError(f"row {i}: expected {n} characters from {{+,-}}")
        rows.append([1 if ch == "+" else -1 for ch in ln])
    return SignMatrix(rows)


def format_design(d: Design) -> str:
    k = int(d.incidence[0].sum()) if d.b else 0
    lines = [f"D {d.v} {d.b} {k}"]
    for row in d.incidence:
        lines.append("".join("1" if x else "0" for x in row))
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> Design:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 4 or head[0] != "D":
        raise ValueError(f"expected header 'D v b k', got {lines[0]!r}")
    v, b, k = int(head[1]), int(head[2]), int(head[3])
    if len(lines) != b + 1:
        raise ValueError(f"expected {b} block rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], 1):
        ln = ln.strip()
        if len(ln) != v or set(ln) - {"0", "1"}:
            raise ValueError(f"row {i}: expected {v} characters from {{0,1}}")
        row = [1 if ch == "1" else 0 for ch in ln]
        if sum(row) != k:
            raise VerificationError(f"row {i}: block size {sum(row)} differs from declared k={k}")
        rows.append(row)
    return Design(rows)


def write_sign_matrix(path, h: SignMatrix) -> None:
    with open(path, "w") as fh:
        fh.write(format_sign_matrix(h))


def read_sign_matrix(path) -> SignMatrix:
    with open(path) as fh:
        return parse_sign_matrix(fh.read())


def write_design(path, d: Design) -> None:
    with open(path, "w") as fh:
        fh.write(format_design(d))


def read_design(path) -> Design:
    with open(path) as fh:
        return parse_design(fh.read())
