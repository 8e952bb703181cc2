"""Search -> construct -> canonize -> analyze orchestration.

classify(p) enumerates the admissible circulant quadruples, builds the
design for each, deduplicates up to isomorphism through canonical
fingerprints, then builds one sign matrix per design class and deduplicates
those up to monomial equivalence.  Both stages seed the canonizer with the
order-p shift automorphism every constructed object carries.  Results are
deterministic: class representatives are chosen by least serialization and
classes are ordered by fingerprint, independent of worker count.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .canon import (
    canonical_form,
    design_to_colored_graph,
    hadamard_to_colored_graph,
    sign_kernel_order,
)
from .circulant import (
    CirculantQuadruple,
    CyclicSupport,
    ReductionPolicy,
    format_quadruple,
    partitioned_quadruple_masks,
    read_quadruples,
)
from .construct import (
    Design,
    SignMatrix,
    VerificationError,
    format_design,
    format_sign_matrix,
    hadamard_3_design,
    hadamard_from_quadruple,
    incidence_matrix,
    parse_design,
    parse_sign_matrix,
    verify_hadamard,
    verify_t_design,
)
from . import codes as codes_mod

# published classification counts (designs, matrices) for odd primes p
KNOWN_CLASS_COUNTS = {
    3: (1, 1),
    5: (1, 1),
    7: (3, 3),
    11: (5, 4),
    13: (7, 4),
    17: (21, 11),
    19: (33, 18),
    23: (109, 56),
    29: (531, 266),
    31: (826, 414),
}


def _design_shift_automorphism(p: int) -> tuple[int, ...]:
    """Order-p automorphism of the incidence graph of any emitted design."""
    v = 2 * p + 1

    def shift(x: int) -> int:
        if x < p:
            return (x + 1) % p
        if x < 2 * p:
            return p + (x - p + 1) % p
        return x

    perm = [0] * (2 * v)
    for pt in range(v):
        perm[pt] = shift(pt)
        perm[v + pt] = v + shift(pt)
    return tuple(perm)


def _matrix_shift_automorphism(p: int) -> tuple[int, ...]:
    """Order-p automorphism of the signed row/column graph of the bordered matrix."""
    n = 2 * p + 2

    def shift(i: int) -> int:
        if i == 0 or i == n - 1:
            return i
        if i <= p:
            return 1 + (i % p)
        return p + 1 + ((i - p) % p)

    perm = [0] * (4 * n)
    for i in range(n):
        si = shift(i)
        perm[i] = si
        perm[n + i] = n + si
        perm[2 * n + i] = 2 * n + si
        perm[3 * n + i] = 3 * n + si
    return tuple(perm)


def _three_design_shift_automorphism(p: int) -> tuple[int, ...]:
    """The same order-p shift acting on the point/block 3-design of the matrix.

    Points are the n = 2p+2 columns; blocks are the row supports of rows
    1..n-1 followed by their complements, indexed in row order.
    """
    n = 2 * p + 2

    def shift(i: int) -> int:
        if i == 0 or i == n - 1:
            return i
        if i <= p:
            return 1 + (i % p)
        return p + 1 + ((i - p) % p)

    perm = [0] * (n + 2 * (n - 1))
    for j in range(n):
        perm[j] = shift(j)
    for i in range(1, n):
        si = shift(i)
        perm[n + (i - 1)] = n + (si - 1)
        perm[n + (n - 1) + (i - 1)] = n + (n - 1) + (si - 1)
    return tuple(perm)


@dataclass(frozen=True)
class ClassRep:
    """One isomorphism/equivalence class: representative plus certificate facts."""

    kind: str  # "design" | "matrix"
    p: int
    index: int
    fingerprint: bytes
    aut_order: int
    serial: str
    quad: CirculantQuadruple

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.fingerprint).hexdigest()

    def design(self) -> Design:
        return parse_design(self.serial)

    def matrix(self) -> SignMatrix:
        return parse_sign_matrix(self.serial)


@dataclass
class ClassificationResult:
    p: int
    reduction: str
    solution_count: int
    designs: list[ClassRep] = field(default_factory=list)
    matrices: list[ClassRep] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.designs), len(self.matrices)


def _canonize_design_chunk(args):
    p, chunk = args
    seed = _design_shift_automorphism(p)
    out = []
    for masks in chunk:
        quad = CirculantQuadruple(p, *(CyclicSupport.from_mask(p, m) for m in masks))
        design = incidence_matrix(quad)
        cert = canonical_form(design_to_colored_graph(design), known_automorphisms=(seed,))
        out.append((cert.fingerprint, cert.aut_order, format_design(design), masks))
    return out


def _canonize_matrix_chunk(args):
    """Matrix classes via the point/block 3-design: equivalence classes of
    sign matrices correspond to isomorphism classes of their 3-designs (the
    matrix is reconstructible from the design up to monomial transforms), and
    |Aut(H)| factors as |Aut(3-design)| x |sign kernel|.  This route is
    cross-checked against the signed row/column graph in the test suite.
    """
    p, chunk = args
    seed = _three_design_shift_automorphism(p)
    out = []
    for masks in chunk:
        quad = CirculantQuadruple(p, *(CyclicSupport.from_mask(p, m) for m in masks))
        h = hadamard_from_quadruple(quad)
        d3 = hadamard_3_design(h)
        cert = canonical_form(design_to_colored_graph(d3), known_automorphisms=(seed,))
        aut = cert.aut_order * sign_kernel_order(h)
        out.append((cert.fingerprint, aut, format_sign_matrix(h), masks))
    return out


def _merge_classes(records) -> dict[bytes, tuple[int, str, tuple]]:
    classes: dict[bytes, tuple[int, str, tuple]] = {}
    for fingerprint, aut, serial, masks in records:
        cur = classes.get(fingerprint)
        if cur is None or serial < cur[1]:
            classes[fingerprint] = (aut, serial, masks)
        elif cur is not None and cur[0] != aut:
            raise AssertionError("same fingerprint, different automorphism group order")
    return classes


def _run_chunks(worker, p, chunks, jobs):
    args = [(p, chunk) for chunk in chunks if chunk]
    if jobs <= 1 or len(args) <= 1:
        for a in args:
            yield from worker(a)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(worker, args):
            yield from part


def classify(
    p: int,
    reduction: ReductionPolicy | None = None,
    jobs: int = 1,
    progress=None,
) -> ClassificationResult:
    """Classify the Hadamard 2-designs and sign matrices for one prime p.

    Returns class representatives sorted by fingerprint.  The result is
    independent of `jobs`; `reduction` defaults to the full symmetry policy
    (class counts are policy-independent, revalidated in the test suite).
    """
    if p < 5:
        raise ValueError("classification needs an odd prime p >= 5")
    policy = reduction if reduction is not None else ReductionPolicy.full()
    t0 = time.monotonic()
    chunks = partitioned_quadruple_masks(p, policy, max(1, jobs) * 4)
    nsol = sum(len(c) for c in chunks)
    t1 = time.monotonic()
    if progress:
        progress(f"p={p}: {nsol} solutions after reduction ({t1 - t0:.1f}s)")

    design_classes = _merge_classes(_run_chunks(_canonize_design_chunk, p, chunks, jobs))
    t2 = time.monotonic()
    if progress:
        progress(f"p={p}: {len(design_classes)} design classes ({t2 - t1:.1f}s)")

    designs = []
    for i, (fp, (aut, serial, masks)) in enumerate(sorted(design_classes.items()), 1):
        quad = CirculantQuadruple(p, *(CyclicSupport.from_mask(p, m) for m in masks))
        designs.append(ClassRep("design", p, i, fp, aut, serial, quad))

    nchunks = max(1, jobs) * 4
    quad_masks = [tuple(s.mask for s in rep.quad.supports()) for rep in designs]
    matrix_chunks = [quad_masks[j::nchunks] for j in range(nchunks)]
    matrix_classes = _merge_classes(_run_chunks(_canonize_matrix_chunk, p, matrix_chunks, jobs))
    t3 = time.monotonic()
    if progress:
        progress(f"p={p}: {len(matrix_classes)} matrix classes ({t3 - t2:.1f}s)")

    matrices = []
    for i, (fp, (aut, serial, masks)) in enumerate(sorted(matrix_classes.items()), 1):
        quad = CirculantQuadruple(p, *(CyclicSupport.from_mask(p, m) for m in masks))
        matrices.append(ClassRep("matrix", p, i, fp, aut, serial, quad))

    return ClassificationResult(
        p=p,
        reduction="none" if policy.is_none else ("full" if policy == ReductionPolicy.full() else "custom"),
        solution_count=nsol,
        designs=designs,
        matrices=matrices,
        timings={"search": t1 - t0, "designs": t2 - t1, "matrices": t3 - t2},
    )


# ---------------------------------------------------------------------------
# persistence


def manifest_lines(result: ClassificationResult) -> list[str]:
    lines = []
    for rep in result.designs:
        lines.append(
            f"design {rep.p} {rep.index} {rep.digest} {rep.aut_order} designs/d{rep.p}_{rep.index:04d}.design"
        )
    for rep in result.matrices:
        lines.append(
            f"matrix {rep.p} {rep.index} {rep.digest} {rep.aut_order} matrices/h{rep.p}_{rep.index:04d}.hadamard"
        )
    return sorted(lines, key=lambda ln: ln.split()[3])


def save_result(result: ClassificationResult, outdir: str) -> None:
    os.makedirs(os.path.join(outdir, "designs"), exist_ok=True)
    os.makedirs(os.path.join(outdir, "matrices"), exist_ok=True)
    for rep in result.designs:
        path = os.path.join(outdir, "designs", f"d{rep.p}_{rep.index:04d}.design")
        with open(path, "w") as fh:
            fh.write(rep.serial)
    for rep in result.matrices:
        path = os.path.join(outdir, "matrices", f"h{rep.p}_{rep.index:04d}.hadamard")
        with open(path, "w") as fh:
            fh.write(rep.serial)
    with open(os.path.join(outdir, "quadruples.quads"), "w") as fh:
        for rep in result.designs:
            fh.write(format_quadruple(rep.quad) + "\n")
    with open(os.path.join(outdir, "manifest.txt"), "w") as fh:
        fh.write("\n".join(manifest_lines(result)) + "\n")
    with open(os.path.join(outdir, "summary.txt"), "w") as fh:
        nd, nm = result.counts
        fh.write(f"p {result.p} designs {nd} matrices {nm} solutions {result.solution_count}\n")


# ---------------------------------------------------------------------------
# ingestion


def ingest(path: str, one_based: bool | None = None) -> list:
    """Parse and verify a design / sign-matrix / quadruple file.

    Returns the list of verified objects (design and matrix files hold one,
    quadruple files one per line).  Verification failures raise with the
    violated identity named.
    """
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("H"):
        h = parse_sign_matrix(text)
        if not verify_hadamard(h):
            raise VerificationError(f"{path}: sign matrix fails the orthogonality identity")
        return [h]
    if stripped.startswith("D"):
        d = parse_design(text)
        if d.v == d.b:
            verify_t_design(d, 2)
        return [d]
    return read_quadruples(path, one_based=one_based)


# ---------------------------------------------------------------------------
# analysis reports


def _aut_histogram(items: list[tuple[str, int]]) -> list[str]:
    hist: dict[tuple[str, int], int] = {}
    for kind, order in items:
        hist[(kind, order)] = hist.get((kind, order), 0) + 1
    lines = []
    for (kind, order), cnt in sorted(hist.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
        lines.append(f"AUT\t{kind}\t{order}\t{cnt}")
    return lines


def analyze(
    sources: list[tuple[str, object]],
    which: tuple[str, ...] = ("c3",),
    counts: tuple[int, ...] = (),
    count_guard: int = codes_mod.COUNT_LEAF_GUARD,
    with_aut: bool = True,
) -> list[str]:
    """Report rows for the requested code families of ingested objects.

    Row format (tab-separated):
        source-id  field  n  k  d  extremality  [w:count ...]
    followed by AUT histogram rows when with_aut is set.
    """
    rows: list[str] = []
    aut_items: list[tuple[str, int]] = []
    for source_id, obj in sources:
        built: list[tuple[str, object]] = []
        if isinstance(obj, SignMatrix):
            if "c3" in which:
                built.append(("3", codes_mod.code_from_sign_matrix(obj, 3)))
            if "c5" in which:
                built.append(("5", codes_mod.code_from_sign_matrix(obj, 5)))
            if with_aut:
                aut_items.append(("matrix", hadamard_aut_order(obj)))
        elif isinstance(obj, Design):
            if "c2" in which:
                built.append(("2", codes_mod.code_C2(obj)))
            if "c2prime" in which:
                built.append(("2'", codes_mod.code_C2prime(obj)))
            if with_aut:
                cert = canonical_form(design_to_colored_graph(obj))
                aut_items.append(("design", cert.aut_order))
        else:
            raise TypeError(f"{source_id}: cannot analyze {type(obj).__name__}")
        for field_tag, code in built:
            facts = codes_mod.analyze_code(code, counts=())
            cells = [
                source_id,
                field_tag,
                str(facts["n"]),
                str(facts["k"]),
                "-" if facts["d"] is None else str(facts["d"]),
                facts["extremality"] or "-",
            ]
            tail = []
            for w in counts:
                try:
                    tail.append(f"{w}:{codes_mod.count_words_of_weight(code, w, max_leaves=count_guard)}")
                except ValueError as exc:
                    tail.append(f"{w}:guard({exc})")
            rows.append("\t".join(cells + tail))
    if with_aut:
        rows.extend(_aut_histogram(aut_items))
    return rows
