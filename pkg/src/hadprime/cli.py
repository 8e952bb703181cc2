"""Command line interface: classify / analyze / verify / canon."""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

from .canon import canonical_form, design_to_colored_graph, hadamard_to_colored_graph
from .circulant import ReductionPolicy
from .construct import Design, SignMatrix, incidence_matrix
from . import pipeline


def _cmd_classify(args) -> int:
    policy = ReductionPolicy.none() if args.reduce == "none" else ReductionPolicy.full()
    result = pipeline.classify(args.p, policy, jobs=args.jobs, progress=print)
    nd, nm = result.counts
    print(f"p={args.p}: {nd} design classes, {nm} matrix classes "
          f"({result.solution_count} solutions, reduction={result.reduction})")
    if args.outdir:
        pipeline.save_result(result, args.outdir)
        print(f"wrote {args.outdir}/manifest.txt")
    return 0


def _ingest_all(paths, one_based):
    sources = []
    for path in paths:
        objs = pipeline.ingest(path, one_based=one_based)
        base = os.path.basename(path)
        for i, obj in enumerate(objs):
            tag = base if len(objs) == 1 else f"{base}#{i + 1}"
            sources.append((tag, obj))
    return sources


def _cmd_analyze(args) -> int:
    which = tuple(tok.strip() for tok in args.codes.split(",") if tok.strip())
    known = {"c2", "c3", "c5", "c2prime"}
    bad = set(which) - known
    if bad:
        print(f"unknown code families: {sorted(bad)}", file=sys.stderr)
        return 2
    counts = tuple(int(tok) for tok in args.counts.split(",") if tok.strip()) if args.counts else ()
    sources = _ingest_all(args.files, args.one_based)
    for row in pipeline.analyze(sources, which=which, counts=counts, with_aut=not args.no_aut):
        print(row)
    return 0


def _cmd_verify(args) -> int:
    failures = 0
    for path in args.files:
        try:
            objs = pipeline.ingest(path, one_based=args.one_based)
        except Exception as exc:
            print(f"FAIL {path}: {exc}")
            failures += 1
            continue
        print(f"OK {path} ({len(objs)} object{'s' if len(objs) != 1 else ''})")
    return 1 if failures else 0


def _file_sha256(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _cmd_canon(args) -> int:
    cache: dict[str, tuple[str, int]] = {}
    if args.cache and os.path.exists(args.cache):
        with open(args.cache) as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 3:
                    cache[parts[0]] = (parts[1], int(parts[2]))
    new_entries = []
    failures = 0
    for path in args.files:
        key = _file_sha256(path)
        if key in cache:
            digest, order = cache[key]
            print(f"{digest} {order} {path}")
            continue
        try:
            objs = pipeline.ingest(path, one_based=args.one_based)
        except Exception as exc:
            print(f"FAIL {path}: {exc}")
            failures += 1
            continue
        for i, obj in enumerate(objs):
            if isinstance(obj, SignMatrix):
                cert = canonical_form(hadamard_to_colored_graph(obj))
            elif isinstance(obj, Design):
                cert = canonical_form(design_to_colored_graph(obj))
            else:
                cert = canonical_form(design_to_colored_graph(incidence_matrix(obj)))
            tag = path if len(objs) == 1 else f"{path}#{i + 1}"
            print(f"{cert.digest} {cert.aut_order} {tag}")
            if len(objs) == 1:
                new_entries.append((key, cert.digest, cert.aut_order))
    if args.cache and new_entries:
        with open(args.cache, "a") as fh:
            for key, digest, order in new_entries:
                fh.write(f"{key} {digest} {order}\n")
    return 1 if failures else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="hadprime")
    sub = ap.add_subparsers(dest="command", required=True)

    p_cls = sub.add_parser("classify", help="classify designs and matrices for one prime")
    p_cls.add_argument("-p", type=int, required=True, help="odd prime >= 5")
    p_cls.add_argument("--reduce", choices=["none", "full"], default="full")
    p_cls.add_argument("--jobs", type=int, default=1)
    p_cls.add_argument("-o", "--outdir", default=None)
    p_cls.set_defaults(func=_cmd_classify)

    p_an = sub.add_parser("analyze", help="code analysis of design / matrix files")
    p_an.add_argument("--codes", default="c3", help="comma list from c2,c3,c5,c2prime")
    p_an.add_argument("--counts", default="", help="comma list of weights to count exactly")
    p_an.add_argument("--one-based", action="store_true", help="supports in files use residues 1..p")
    p_an.add_argument("--no-aut", action="store_true", help="skip automorphism group histogram")
    p_an.add_argument("files", nargs="+")
    p_an.set_defaults(func=_cmd_analyze)

    p_ver = sub.add_parser("verify", help="verify design / matrix / quadruple files")
    p_ver.add_argument("--one-based", action="store_true")
    p_ver.add_argument("files", nargs="+")
    p_ver.set_defaults(func=_cmd_verify)

    p_can = sub.add_parser("canon", help="print canonical digest and |Aut| per object")
    p_can.add_argument("--cache", default=os.environ.get("HADPRIME_CACHE"), help="certificate cache file")
    p_can.add_argument("--one-based", action="store_true")
    p_can.add_argument("files", nargs="+")
    p_can.set_defaults(func=_cmd_canon)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
