"""Search for circulant quadruples over Z_p by periodic autocorrelation.

A candidate design is encoded by four supports (S_M, S_N, S_P, S_Q), each a
subset of Z_p of size (p-1)/2 giving the first row of a circulant 0/1 matrix.
The quadruple is admissible when

  * paf(S_X, j) + paf(S_Y, j) = (p-3)/2 for the pairs (M,N), (P,Q), (M,P),
    (N,Q) and every shift j = 1..p-1, and
  * the cross-correlation vectors of (S_M, S_P) and (S_N, S_Q) agree.

Supports are 0-based (residues 0..p-1); published data using 1..p is shifted
down by one at parse time.  Internally supports are bitmasks, and the search
joins compatible autocorrelation classes through hash tables keyed by
(cyclic classes of) cross-correlation vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, int(p**0.5) + 1, 2))


# ---------------------------------------------------------------------------
# supports


@dataclass(frozen=True)
class CyclicSupport:
    """A subset of Z_p, kept as a strictly increasing residue tuple."""

    p: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"p={self.p} is not an odd prime")
        elems = tuple(self.elements)
        if any(not (0 <= x < self.p) for x in elems):
            raise ValueError(f"residues must lie in [0, {self.p})")
        if any(a >= b for a, b in zip(elems, elems[1:])):
            raise ValueError("residues must be strictly increasing")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_mask(cls, p: int, mask: int) -> "CyclicSupport":
        return cls(p, tuple(x for x in range(p) if (mask >> x) & 1))

    @property
    def mask(self) -> int:
        m = 0
        for x in self.elements:
            m |= 1 << x
        return m

    @property
    def size(self) -> int:
        return len(self.elements)

    def translate(self, t: int) -> "CyclicSupport":
        return CyclicSupport(self.p, tuple(sorted((x + t) % self.p for x in self.elements)))

    def multiply(self, a: int) -> "CyclicSupport":
        if a % self.p == 0:
            raise ValueError("multiplier must be a unit of Z_p")
        return CyclicSupport(self.p, tuple(sorted((x * a) % self.p for x in self.elements)))


def _rotl(mask: int, j: int, p: int) -> int:
    """Bitmask of S + j given the bitmask of S."""
    j %= p
    full = (1 << p) - 1
    return ((mask << j) | (mask >> (p - j))) & full if j else mask


def _paf_mask(mask: int, p: int, j: int) -> int:
    return (mask & _rotl(mask, j, p)).bit_count()


def _cross_mask(m1: int, m2: int, p: int, j: int) -> int:
    return (m1 & _rotl(m2, j, p)).bit_count()


def _paf_vector(mask: int, p: int) -> tuple[int, ...]:
    # paf(s, j) = paf(s, p - j), so shifts 1..(p-1)/2 carry everything
    return tuple(_paf_mask(mask, p, j) for j in range(1, (p - 1) // 2 + 1))


def _cross_vector(m1: int, m2: int, p: int) -> tuple[int, ...]:
    return tuple(_cross_mask(m1, m2, p, j) for j in range(p))


def _min_rotation(mask: int, p: int) -> tuple[int, int]:
    """(smallest rotated mask, shift t achieving it); unique for 0 < |S| < p."""
    best, bt = mask, 0
    for t in range(1, p):
        r = _rotl(mask, t, p)
        if r < best:
            best, bt = r, t
    return best, bt


def paf(s: CyclicSupport, j: int) -> int:
    """Periodic autocorrelation |{x in S : x + j in S}| = |S & (S + j)|."""
    if not 0 <= j < s.p:
        raise ValueError(f"shift must lie in [0, {s.p})")
    return _paf_mask(s.mask, s.p, j)


def cross_correlation(s: CyclicSupport, t: CyclicSupport, j: int) -> int:
    """|S & (T + j)|, the (0, j) entry of circulant(S) . circulant(T)^T."""
    if s.p != t.p:
        raise ValueError("supports must live over the same Z_p")
    if not 0 <= j < s.p:
        raise ValueError(f"shift must lie in [0, {s.p})")
    return _cross_mask(s.mask, t.mask, s.p, j)


def check_pair(s1: CyclicSupport, s2: CyclicSupport) -> bool:
    """Pairwise autocorrelation condition: paf sums equal (p-3)/2 at every shift.

    The shift-0 entry is automatic from the support sizes, so only j = 1..p-1
    are tested.
    """
    if s1.p != s2.p:
        raise ValueError("supports must live over the same Z_p")
    p = s1.p
    half = (p - 1) // 2
    if s1.size != half or s2.size != half:
        raise ValueError(f"both supports must have size (p-1)/2 = {half}")
    want = (p - 3) // 2
    m1, m2 = s1.mask, s2.mask
    return all(_paf_mask(m1, p, j) + _paf_mask(m2, p, j) == want for j in range(1, half + 1))


def check_cross(
    sm: CyclicSupport, sn: CyclicSupport, sp: CyclicSupport, sq: CyclicSupport
) -> bool:
    """Cross-correlation condition: the (M,P) and (N,Q) vectors agree at all shifts."""
    p = sm.p
    if any(s.p != p for s in (sn, sp, sq)):
        raise ValueError("supports must live over the same Z_p")
    a, b, c, d = sm.mask, sn.mask, sp.mask, sq.mask
    return all(_cross_mask(a, c, p, j) == _cross_mask(b, d, p, j) for j in range(p))


@dataclass(frozen=True)
class CirculantQuadruple:
    """Supports (S_M, S_N, S_P, S_Q) of one candidate design.

    Construction checks well-formedness only (common p, support sizes);
    call validate() to enforce the autocorrelation and cross-correlation
    conditions.  The search and the parser only hand out validated objects.
    """

    p: int
    sm: CyclicSupport
    sn: CyclicSupport
    sp: CyclicSupport
    sq: CyclicSupport

    def __post_init__(self):
        half = (self.p - 1) // 2
        for name, s in (("sm", self.sm), ("sn", self.sn), ("sp", self.sp), ("sq", self.sq)):
            if s.p != self.p:
                raise ValueError(f"{name} lives over Z_{s.p}, expected Z_{self.p}")
            if s.size != half:
                raise ValueError(f"{name} has size {s.size}, expected (p-1)/2 = {half}")

    def supports(self) -> tuple[CyclicSupport, CyclicSupport, CyclicSupport, CyclicSupport]:
        return (self.sm, self.sn, self.sp, self.sq)

    def validate(self) -> None:
        """Raise ValueError naming the first violated defining condition."""
        for name, (a, b) in (
            ("autocorrelation condition on (S_M, S_N)", (self.sm, self.sn)),
            ("autocorrelation condition on (S_P, S_Q)", (self.sp, self.sq)),
            ("autocorrelation condition on (S_M, S_P)", (self.sm, self.sp)),
            ("autocorrelation condition on (S_N, S_Q)", (self.sn, self.sq)),
        ):
            if not check_pair(a, b):
                raise ValueError(f"{name} fails")
        if not check_cross(self.sm, self.sn, self.sp, self.sq):
            raise ValueError("cross-correlation condition on (S_M, S_P) vs (S_N, S_Q) fails")

    def sort_key(self):
        return (self.sm.elements, self.sn.elements, self.sp.elements, self.sq.elements)


# ---------------------------------------------------------------------------
# file format: one quadruple per line, `p: s_M | s_N | s_P | s_Q`


def format_quadruple(q: CirculantQuadruple) -> str:
    parts = " | ".join(" ".join(str(x) for x in s.elements) for s in q.supports())
    return f"{q.p}: {parts}"


def parse_quadruple_line(line: str, one_based: bool | None = None) -> CirculantQuadruple:
    """Parse one quadruple line; validates the defining conditions.

    one_based=None autodetects: a residue equal to p forces the 1..p
    convention of published support tables, which is then shifted to 0..p-1.
    """
    head, _, rest = line.partition(":")
    try:
        p = int(head.strip())
    except ValueError:
        raise ValueError(f"bad quadruple line, expected 'p: ...': {line!r}") from None
    groups = [g.split() for g in rest.split("|")]
    if len(groups) != 4:
        raise ValueError(f"expected 4 supports separated by '|', got {len(groups)}")
    values = [[int(tok) for tok in g] for g in groups]
    flat = [x for g in values for x in g]
    if one_based is None:
        one_based = any(x == p for x in flat)
    if one_based:
        values = [[x - 1 for x in g] for g in values]
    supports = [CyclicSupport(p, tuple(sorted(g))) for g in values]
    quad = CirculantQuadruple(p, *supports)
    quad.validate()
    return quad


def write_quadruples(path, quads: Iterable[CirculantQuadruple]) -> None:
    with open(path, "w") as fh:
        for q in quads:
            fh.write(format_quadruple(q) + "\n")


def read_quadruples(path, one_based: bool | None = None) -> list[CirculantQuadruple]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                out.append(parse_quadruple_line(line, one_based=one_based))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# reduction policies


@dataclass(frozen=True)
class ReductionPolicy:
    """Which solution-preserving symmetries prune the raw enumeration.

    Generators: simultaneous translation of (S_M, S_N), of (S_P, S_Q), of
    (S_M, S_P), of (S_N, S_Q), and a common multiplier a in Z_p^* on all four
    supports.  Every generator maps solutions to solutions and designs to
    isomorphic designs, so class counts never depend on the policy; that is
    revalidated against the unreduced run for small p in the test suite.
    """

    translate_mn: bool = False
    translate_pq: bool = False
    translate_mp: bool = False
    translate_nq: bool = False
    multiplier: bool = False

    @classmethod
    def none(cls) -> "ReductionPolicy":
        return cls()

    @classmethod
    def full(cls) -> "ReductionPolicy":
        return cls(True, True, True, True, True)

    @classmethod
    def translations(cls) -> "ReductionPolicy":
        return cls(True, True, True, True, False)

    @property
    def is_none(self) -> bool:
        return not (
            self.translate_mn
            or self.translate_pq
            or self.translate_mp
            or self.translate_nq
            or self.multiplier
        )

    @property
    def all_translations(self) -> bool:
        return self.translate_mn and self.translate_pq and self.translate_mp and self.translate_nq

    @property
    def translation_vectors(self) -> tuple[tuple[int, int, int, int], ...]:
        vecs = []
        if self.translate_mn:
            vecs.append((1, 1, 0, 0))
        if self.translate_pq:
            vecs.append((0, 0, 1, 1))
        if self.translate_mp:
            vecs.append((1, 0, 1, 0))
        if self.translate_nq:
            vecs.append((0, 1, 0, 1))
        return tuple(vecs)


def _canonical_cross_rotation(vec: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Lexicographically least cyclic rotation of vec and the shift reaching it.

    vec is never constant here (its entries sum to ((p-1)/2)^2, which p does
    not divide), so the minimizing shift is unique.
    """
    p = len(vec)
    best, bs = vec, 0
    for s in range(1, p):
        r = vec[s:] + vec[:s]
        if r < best:
            best, bs = r, s
    return best, bs


def _classes_by_paf(p: int) -> dict[tuple[int, ...], list[int]]:
    half = (p - 1) // 2
    by_paf: dict[tuple[int, ...], list[int]] = {}
    for combo in itertools.combinations(range(p), half):
        mask = 0
        for x in combo:
            mask |= 1 << x
        by_paf.setdefault(_paf_vector(mask, p), []).append(mask)
    return by_paf


def _translation_normalize(
    p: int, masks: tuple[int, int, int, int]
) -> tuple[int, int, int, int]:
    """Unique orbit representative under the full translation subgroup.

    The subgroup translates (sm, sn, sp, sq) by (a, b, c, b + c - a); choosing
    a, b, c to send sm, sn, sp to their least rotations fixes the
    representative.
    """
    sm, sn, sp, sq = masks
    rm, a = _min_rotation(sm, p)
    rn, b = _min_rotation(sn, p)
    rp, c = _min_rotation(sp, p)
    rq = _rotl(sq, (b + c - a) % p, p)
    return rm, rn, rp, rq


def _multiplier_image(p: int, masks: tuple[int, int, int, int], a: int) -> tuple[int, int, int, int]:
    out = []
    for m in masks:
        im = 0
        for x in range(p):
            if (m >> x) & 1:
                im |= 1 << ((x * a) % p)
        out.append(im)
    return tuple(out)


def _mask_key(p: int, masks: tuple[int, int, int, int]):
    return tuple(tuple(x for x in range(p) if (m >> x) & 1) for m in masks)


def _is_full_canonical(p: int, masks: tuple[int, int, int, int]) -> bool:
    """masks (already translation-normalized) minimal over multiplier images."""
    key = _mask_key(p, masks)
    for a in range(2, p):
        img = _translation_normalize(p, _multiplier_image(p, masks, a))
        if _mask_key(p, img) < key:
            return False
    return True


def _generic_orbit_minimal(p: int, masks: tuple[int, int, int, int], policy: ReductionPolicy) -> bool:
    """Orbit-minimality under an arbitrary generator subset (small p only)."""
    vecs = policy.translation_vectors
    # span of the enabled translation vectors inside Z_p^4
    span = {(0, 0, 0, 0)}
    for v in vecs:
        new = set()
        for base in span:
            for t in range(p):
                new.add(tuple((base[i] + t * v[i]) % p for i in range(4)))
        span = new
    mults = range(1, p) if policy.multiplier else (1,)
    key = _mask_key(p, masks)
    for a in mults:
        img = _multiplier_image(p, masks, a) if a != 1 else masks
        for shift in span:
            cand = tuple(_rotl(img[i], shift[i], p) for i in range(4))
            if _mask_key(p, cand) < key:
                return False
    return True


def _raw_solutions(p: int, by_paf) -> Iterator[tuple[int, int, int, int]]:
    """All admissible quadruples (no reduction), as bitmask 4-tuples."""
    want = (p - 3) // 2
    target = (want,) * ((p - 1) // 2)
    for vec in sorted(by_paf):
        partner = tuple(want - x for x in vec)
        if min(partner) < 0 or partner not in by_paf:
            continue
        cls_v = by_paf[vec]       # holds sm and sq
        cls_w = by_paf[partner]   # holds sn and sp
        assert tuple(a + b for a, b in zip(vec, partner)) == target
        buckets: dict[tuple[int, ...], list[tuple[int, int]]] = {}
        for sn in cls_w:
            for sq in cls_v:
                buckets.setdefault(_cross_vector(sn, sq, p), []).append((sn, sq))
        for sm in cls_v:
            for sp in cls_w:
                cv = _cross_vector(sm, sp, p)
                for sn, sq in buckets.get(cv, ()):
                    yield (sm, sn, sp, sq)


def _translation_reduced_solutions(p: int, by_paf) -> Iterator[tuple[int, int, int, int]]:
    """One solution per orbit of the full translation subgroup.

    sm, sn, sp run over least-rotation representatives; sq is recovered from
    the cyclic match of the cross-correlation vectors, whose minimizing
    rotation is unique because the vectors are never constant.
    """
    want = (p - 3) // 2
    reps = {vec: [m for m in masks if _min_rotation(m, p)[0] == m] for vec, masks in by_paf.items()}
    for vec in sorted(by_paf):
        partner = tuple(want - x for x in vec)
        if min(partner) < 0 or partner not in by_paf:
            continue
        reps_v, reps_w = reps[vec], reps[partner]
        buckets: dict[tuple[int, ...], list[tuple[int, int, int]]] = {}
        for sn in reps_w:
            for sq in reps_v:
                canon, shift = _canonical_cross_rotation(_cross_vector(sn, sq, p))
                buckets.setdefault(canon, []).append((sn, sq, shift))
        for sm in reps_v:
            for sp in reps_w:
                canon, su = _canonical_cross_rotation(_cross_vector(sm, sp, p))
                for sn, sq_rep, sv in buckets.get(canon, ()):
                    t = (sv - su) % p
                    yield (sm, sn, sp, _rotl(sq_rep, t, p))


def enumerate_quadruple_masks(
    p: int, reduction: ReductionPolicy | None = None
) -> list[tuple[int, int, int, int]]:
    """Admissible quadruples as bitmask 4-tuples, sorted lexicographically."""
    if not is_odd_prime(p) or p <= 3:
        raise ValueError(f"p must be an odd prime greater than 3, got {p}")
    policy = reduction if reduction is not None else ReductionPolicy.none()
    by_paf = _classes_by_paf(p)
    if policy.is_none:
        found = list(_raw_solutions(p, by_paf))
    elif policy.all_translations:
        found = list(_translation_reduced_solutions(p, by_paf))
        if policy.multiplier:
            found = [m for m in found if _is_full_canonical(p, m)]
    else:
        # partial policies: honest but slow; intended for validation at small p
        found = [m for m in _raw_solutions(p, by_paf) if _generic_orbit_minimal(p, m, policy)]
    found.sort(key=lambda masks: _mask_key(p, masks))
    return found


def enumerate_quadruples(
    p: int, reduction: ReductionPolicy | None = None
) -> Iterator[CirculantQuadruple]:
    """Stream the admissible quadruples for p, modulo the given reductions.

    With reduction None (or ReductionPolicy.none()) the stream is the complete
    raw solution set.  Order is deterministic: lexicographic by the four
    support tuples.
    """
    for masks in enumerate_quadruple_masks(p, reduction):
        yield CirculantQuadruple(p, *(CyclicSupport.from_mask(p, m) for m in masks))


def partitioned_quadruple_masks(
    p: int, reduction: ReductionPolicy | None, parts: int
) -> list[list[tuple[int, int, int, int]]]:
    """Deterministic partition of the solution list by outer S_M candidate.

    The union over parts equals enumerate_quadruple_masks(p, reduction)
    regardless of `parts`; used to fan the search out to worker processes.
    """
    sols = enumerate_quadruple_masks(p, reduction)
    parts = max(1, parts)
    groups: dict[int, list[tuple[int, int, int, int]]] = {}
    order: list[int] = []
    for masks in sols:
        if masks[0] not in groups:
            groups[masks[0]] = []
            order.append(masks[0])
        groups[masks[0]].append(masks)
    chunks: list[list[tuple[int, int, int, int]]] = [[] for _ in range(parts)]
    for i, sm in enumerate(order):
        chunks[i % parts].extend(groups[sm])
    return chunks
