"""Permutation utilities and exact group order via Schreier-Sims.

Permutations act on 0..n-1 and are stored as tuples mapping i -> perm[i].
The stabilizer chain keeps, per level, every strong generator fixing the
base prefix (a generator inserted at level l is recorded at all levels
<= l); levels are re-closed to a fixpoint whenever their generator set or
orbit grows.  Orders are exact Python integers.
"""

from __future__ import annotations


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose(a, b) -> tuple[int, ...]:
    """The permutation applying b first, then a."""
    return tuple(a[b[i]] for i in range(len(a)))


def inverse(a) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


def _is_identity(a) -> bool:
    return all(a[i] == i for i in range(len(a)))


class StabilizerChain:
    """Stabilizer chain of the group generated by the supplied permutations."""

    def __init__(self, n: int, generators) -> None:
        self.n = n
        self.base: list[int] = []
        self.sgens: list[list[tuple[int, ...]]] = []
        self.seen: list[set[tuple[int, ...]]] = []
        self.trans: list[dict[int, tuple[int, ...]]] = []
        for g in generators:
            g = tuple(g)
            if len(g) != n or sorted(g) != list(range(n)):
                raise ValueError("generators must be permutations of range(n)")
            self._sift_in(g, 0)

    def _rebuild(self, j: int) -> None:
        ident = identity(self.n)
        t = {self.base[j]: ident}
        frontier = [self.base[j]]
        gens = self.sgens[j]
        while frontier:
            nxt = []
            for pt in frontier:
                u = t[pt]
                for g in gens:
                    img = g[pt]
                    if img not in t:
                        t[img] = compose(g, u)
                        nxt.append(img)
            frontier = nxt
        self.trans[j] = t

    def _add_at(self, level: int, g: tuple[int, ...]) -> None:
        if level == len(self.base):
            self.base.append(next(i for i in range(self.n) if g[i] != i))
            self.sgens.append([])
            self.seen.append(set())
            self.trans.append({})
        if g in self.seen[level]:
            return
        # g fixes base[:level], so it belongs to every level up to `level`
        for j in range(level + 1):
            if g not in self.seen[j]:
                self.seen[j].add(g)
                self.sgens[j].append(g)
        for j in range(level, -1, -1):
            self._close(j)

    def _close(self, j: int) -> None:
        while True:
            self._rebuild(j)
            size = (len(self.sgens[j]), len(self.trans[j]))
            for pt in list(self.trans[j]):
                u = self.trans[j][pt]
                for g in list(self.sgens[j]):
                    rep = self.trans[j].get(g[pt])
                    if rep is None:
                        continue  # orbit grew mid-pass; next sweep rebuilds
                    s = compose(inverse(rep), compose(g, u))
                    if not _is_identity(s):
                        self._sift_in(s, j + 1)
            if (len(self.sgens[j]), len(self.trans[j])) == size:
                return

    def _sift_in(self, g: tuple[int, ...], level: int) -> None:
        if _is_identity(g):
            return
        i = level
        while i < len(self.base):
            rep = self.trans[i].get(g[self.base[i]])
            if rep is None:
                self._add_at(i, g)
                return
            g = compose(inverse(rep), g)
            if _is_identity(g):
                return
            i += 1
        self._add_at(len(self.base), g)

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def contains(self, perm) -> bool:
        g = tuple(perm)
        if _is_identity(g):
            return True
        i = 0
        while i < len(self.base):
            rep = self.trans[i].get(g[self.base[i]])
            if rep is None:
                return False
            g = compose(inverse(rep), g)
            if _is_identity(g):
                return True
            i += 1
        return False


def group_order(n: int, generators) -> int:
    """Order of the permutation group on n points generated by `generators`."""
    gens = [g for g in generators if not _is_identity(g)]
    if not gens:
        return 1
    return StabilizerChain(n, gens).order()
