"""Matroids on {0, ..., n} given by their bases, with subsets as bitmasks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    EmptyBases,
    ExchangeAxiomViolation,
    LoopColumn,
    LoopDetected,
    NotFullRank,
    ParameterOutOfRange,
    UnequalCardinality,
)
from .exactalg import Matrix, PrimeField, bareiss_det, det_mod_p, integer_rows, rank_det_kernel

MAX_ELEMENTS = 16


def mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements(m: int) -> tuple[int, ...]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def subset_key(m: int) -> tuple[int, tuple[int, ...]]:
    """Canonical order on subsets: by size, then lexicographically."""
    e = elements(m)
    return (len(e), e)


def popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class Flat:
    elements: int
    rank: int

    def __iter__(self):
        return iter(elements(self.elements))


@dataclass(frozen=True)
class FlatLattice:
    flats_by_rank: tuple[tuple[Flat, ...], ...]

    def __iter__(self):
        for layer in self.flats_by_rank:
            yield from layer

    def __len__(self):
        return sum(len(layer) for layer in self.flats_by_rank)

    def proper_nonempty(self) -> list[Flat]:
        return [f for layer in self.flats_by_rank[1:-1] for f in layer]


@dataclass(frozen=True)
class ComponentPartition:
    components: tuple[int, ...]

    def __len__(self):
        return len(self.components)


@dataclass(frozen=True, eq=False)
class Matroid:
    n_elements: int
    rank: int
    bases: frozenset[int]

    def __eq__(self, other):
        return (
            isinstance(other, Matroid)
            and self.n_elements == other.n_elements
            and self.bases == other.bases
        )

    def __hash__(self):
        return hash((self.n_elements, self.bases))

    def __repr__(self):
        return f"Matroid(n_elements={self.n_elements}, rank={self.rank}, bases={len(self.bases)})"

    @property
    def ground(self) -> int:
        return (1 << self.n_elements) - 1

    @cached_property
    def _rank_table(self) -> list[int]:
        # independent sets are the subsets of bases; rank by dynamic programming
        size = 1 << self.n_elements
        indep = bytearray(size)
        for b in self.bases:
            indep[b] = 1
        for s in range(size - 1, 0, -1):
            if indep[s]:
                t = s
                while t:
                    low = t & -t
                    indep[s ^ low] = 1
                    t ^= low
        table = [0] * size
        for s in range(1, size):
            if indep[s]:
                table[s] = popcount(s)
            else:
                best = 0
                t = s
                while t:
                    low = t & -t
                    r = table[s ^ low]
                    if r > best:
                        best = r
                    t ^= low
                table[s] = best
        return table

    def rank_of(self, subset) -> int:
        return self._rank_table[_as_mask(subset)]

    def is_independent(self, subset) -> bool:
        m = _as_mask(subset)
        return self._rank_table[m] == popcount(m)

    def closure_of(self, subset) -> Flat:
        m = _as_mask(subset)
        r = self._rank_table[m]
        out = m
        for e in range(self.n_elements):
            bit = 1 << e
            if not m & bit and self._rank_table[m | bit] == r:
                out |= bit
        return Flat(out, r)

    def lex_least_basis(self) -> int:
        return min(self.bases, key=elements)

    def sorted_bases(self) -> list[tuple[int, ...]]:
        return sorted(elements(b) for b in self.bases)

    def nonbases(self) -> list[tuple[int, ...]]:
        return [
            c for c in combinations(range(self.n_elements), self.rank) if mask(c) not in self.bases
        ]


def _as_mask(subset) -> int:
    if isinstance(subset, int):
        return subset
    if isinstance(subset, Flat):
        return subset.elements
    return mask(subset)


def matroid_from_bases(n_elements: int, bases: Iterable[Iterable[int]]) -> Matroid:
    """Build a matroid from an explicit list of bases, checking every axiom."""
    if not 1 <= n_elements <= MAX_ELEMENTS:
        raise ParameterOutOfRange(f"n_elements={n_elements} not in [1, {MAX_ELEMENTS}]")
    masks = set()
    for b in bases:
        b = tuple(b)
        if any(not (0 <= e < n_elements) for e in b) or len(set(b)) != len(b):
            raise ParameterOutOfRange(f"basis {b} is not a subset of 0..{n_elements - 1}")
        masks.add(mask(b))
    if not masks:
        raise EmptyBases()
    sizes = {popcount(b) for b in masks}
    if len(sizes) != 1:
        raise UnequalCardinality(sizes)
    union = 0
    for b in masks:
        union |= b
    for e in range(n_elements):
        if not union >> e & 1:
            raise LoopDetected(e)
    for b1 in sorted(masks, key=elements):
        for b2 in sorted(masks, key=elements):
            if b1 == b2:
                continue
            for x in elements(b1 & ~b2):
                if not any((b1 ^ (1 << x)) | (1 << y) in masks for y in elements(b2 & ~b1)):
                    raise ExchangeAxiomViolation(elements(b1), elements(b2), x)
    return Matroid(n_elements, sizes.pop(), frozenset(masks))


def matroid_from_nonbases(n_elements: int, rank: int, nonbases: Iterable[Iterable[int]]) -> Matroid:
    if not 0 <= rank <= n_elements:
        raise ParameterOutOfRange(f"rank={rank} not in [0, {n_elements}]")
    bad = {mask(c) for c in nonbases}
    return matroid_from_bases(
        n_elements, [c for c in combinations(range(n_elements), rank) if mask(c) not in bad]
    )


def flats(M: Matroid) -> FlatLattice:
    """All flats, layer by layer: closures of one-element extensions of the layer below."""
    layers: list[list[Flat]] = [[M.closure_of(0)]]
    for _ in range(M.rank):
        seen: dict[int, Flat] = {}
        for f in layers[-1]:
            for e in range(M.n_elements):
                if not f.elements >> e & 1:
                    g = M.closure_of(f.elements | 1 << e)
                    seen.setdefault(g.elements, g)
        layers.append(sorted(seen.values(), key=lambda f: elements(f.elements)))
    return FlatLattice(tuple(tuple(layer) for layer in layers))


def circuits(M: Matroid) -> list[int]:
    """All minimal dependent sets, as bitmasks, sorted by size then lexicographically."""
    table = M._rank_table
    found = []
    for m in range(1, 1 << M.n_elements):
        k = popcount(m)
        if k > M.rank + 1 or table[m] == k:
            continue
        if all(table[m ^ (1 << e)] == k - 1 for e in elements(m)):
            found.append(m)
    found.sort(key=subset_key)
    return found


def connected_components(M: Matroid) -> ComponentPartition:
    parent = list(range(M.n_elements))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in circuits(M):
        es = elements(c)
        for e in es[1:]:
            a, b = find(es[0]), find(e)
            if a != b:
                parent[max(a, b)] = min(a, b)
    blocks: dict[int, int] = {}
    for e in range(M.n_elements):
        blocks[find(e)] = blocks.get(find(e), 0) | 1 << e
    return ComponentPartition(tuple(sorted(blocks.values(), key=lambda b: elements(b)[0])))


# --- standard matroids ----------------------------------------------------

def uniform(r: int, m: int) -> Matroid:
    if not (0 <= r <= m <= MAX_ELEMENTS) or m < 1:
        raise ParameterOutOfRange(f"uniform({r}, {m})")
    if r == 0:
        raise LoopDetected(0)
    return Matroid(m, r, frozenset(mask(c) for c in combinations(range(m), r)))


def boolean(m: int) -> Matroid:
    """The free matroid: every subset independent, every subset a flat."""
    return uniform(m, m)


# element i is the nonzero vector of F_2^3 with binary expansion i + 1
FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))
# the line {011, 101, 110}; independent in every characteristic but 2
NON_FANO_RESTORED = (2, 4, 5)


def fano() -> Matroid:
    return matroid_from_nonbases(7, 3, FANO_LINES)


def non_fano() -> Matroid:
    return matroid_from_nonbases(7, 3, [l for l in FANO_LINES if l != NON_FANO_RESTORED])


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    n = M1.n_elements + M2.n_elements
    if n > MAX_ELEMENTS:
        raise ParameterOutOfRange(f"direct sum has {n} > {MAX_ELEMENTS} elements")
    shift = M1.n_elements
    return Matroid(
        n, M1.rank + M2.rank, frozenset(b1 | b2 << shift for b1 in M1.bases for b2 in M2.bases)
    )


def zoo() -> dict[str, Matroid]:
    """The fixture matroids used throughout the test suite and by ``zoo emit``."""
    return {
        "u23": uniform(2, 3),
        "u24": uniform(2, 4),
        "boolean3": boolean(3),
        "boolean4": boolean(4),
        "fano": fano(),
        "non_fano": non_fano(),
        "u23_u23": direct_sum(uniform(2, 3), uniform(2, 3)),
    }


# --- column matroid -------------------------------------------------------

def maximal_minor(A: Matrix, cols: Sequence[int]) -> int:
    """Determinant of the square submatrix on ``cols`` (an int over F_p, Fraction over Q)."""
    sub = [[r[c] for c in cols] for r in A.rows]
    if isinstance(A.field, PrimeField):
        return det_mod_p(sub, A.field.p)
    return rank_det_kernel(A.columns(cols)).det


def column_matroid(A: Matrix) -> Matroid:
    """The matroid whose bases are the column sets with nonzero maximal minor."""
    rank = rank_det_kernel(A).rank
    if rank != A.nrows:
        raise NotFullRank(rank, A.nrows)
    for j in range(A.ncols):
        if all(x == 0 for x in A.column(j)):
            raise LoopColumn(j)
    if A.ncols > MAX_ELEMENTS:
        raise ParameterOutOfRange(f"{A.ncols} columns > {MAX_ELEMENTS}")
    if isinstance(A.field, PrimeField):
        p = A.field.p
        rows = A.rows
        det = lambda cols: det_mod_p([[r[c] for c in cols] for r in rows], p)
    else:
        ints = integer_rows(A.rows)
        det = lambda cols: bareiss_det([[r[c] for c in cols] for r in ints])
    bases = frozenset(mask(c) for c in combinations(range(A.ncols), A.nrows) if det(c) != 0)
    return Matroid(A.ncols, A.nrows, bases)


def rank_of(M: Matroid, subset) -> int:
    return M.rank_of(subset)


def closure_of(M: Matroid, subset) -> Flat:
    return M.closure_of(subset)
