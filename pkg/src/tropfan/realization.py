"""Realizations of matroids over prime fields.

Two independent routes to the same numbers:

* :func:`search_realizations` walks gauge-fixed matrices (a basis frame set
  to the identity, remaining columns projective) and reduces the hits to
  orbit representatives under the leftover diagonal torus.  Its length is
  the number of F_q-points of the realization space R_M.
* :func:`count_tropical_realizations` enumerates every (d+1)-dimensional
  subspace of F_q^{n+1} by its reduced row echelon form and counts those
  whose column matroid is M; each such subspace is the closure of exactly
  one tropical realization of the matroid fan.

:func:`verify_torsor_count` compares the two through the torus of rank
#M - c(M).
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional

from .errors import (
    DimensionMismatch,
    EnumerationTooLarge,
    LoopColumn,
    NoBasis,
    NotFullRank,
    ParameterOutOfRange,
    SearchTooLarge,
)
from .exactalg import GF, Matrix, PrimeField, det_mod_p, rank_det_kernel, rank_mod_p, rref
from .matroid import Matroid, column_matroid, connected_components, elements, mask, maximal_minor

SEARCH_LIMIT = 10**8
ENUMERATION_LIMIT = 10**7
MAX_SEARCH_PRIME = 13


def work_limit(default: int, override: Optional[int] = None) -> int:
    """Explicit override, else $TROPFAN_MAX_WORK, else the built-in default."""
    if override is not None:
        return override
    env = os.environ.get("TROPFAN_MAX_WORK")
    return int(env) if env else default


@dataclass(frozen=True, eq=False)
class RealizationMatrix(Matrix):
    """A (d+1) x (n+1) matrix whose columns are the sections s_0, ..., s_n."""

    def __post_init__(self):
        rank = rank_det_kernel(self).rank
        if rank != self.nrows:
            raise NotFullRank(rank, self.nrows)
        for j in range(self.ncols):
            if all(x == 0 for x in self.column(j)):
                raise LoopColumn(j)

    def __eq__(self, other):
        return isinstance(other, Matrix) and (self.field, self.rows) == (other.field, other.rows)

    def __hash__(self):
        return hash((self.field, self.rows))

    @classmethod
    def of(cls, field, entries) -> "RealizationMatrix":
        m = Matrix.from_rows(field, entries)
        return cls(m.field, m.rows, m.ncols)


@dataclass(frozen=True)
class GammaCheck:
    ok: bool
    failing_subset: Optional[tuple[int, ...]] = None

    def __bool__(self):
        return self.ok


def _check_shape(M: Matroid, A: Matrix):
    if A.shape != (M.rank, M.n_elements):
        raise DimensionMismatch(
            f"matrix is {A.nrows}x{A.ncols}, matroid needs {M.rank}x{M.n_elements}"
        )


def is_gamma_point(M: Matroid, A: Matrix) -> GammaCheck:
    """Every maximal minor is nonzero exactly on the bases of M."""
    _check_shape(M, A)
    for cols in combinations(range(M.n_elements), M.rank):
        if (maximal_minor(A, cols) != 0) != (mask(cols) in M.bases):
            return GammaCheck(False, cols)
    return GammaCheck(True)


# --- gauge fixing ----------------------------------------------------------

@dataclass(frozen=True)
class GaugeClass:
    base_basis: tuple[int, ...]
    matrix: RealizationMatrix

    def sort_key(self):
        return self.matrix.rows


def projective_points(p: int, dim: int) -> list[tuple[int, ...]]:
    """Representatives of P^{dim-1}(F_p) with first nonzero entry 1, in lex order."""
    pts = []
    for lead in range(dim):
        for tail in product(range(p), repeat=dim - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return sorted(pts)


def _normalize_column(col, p):
    lead = next(x for x in col if x)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in col)


def _torus_canonical(B: tuple[int, ...], columns: list[tuple[int, ...]], p: int) -> tuple[tuple[int, ...], ...]:
    """Least row-major matrix over the residual row-scaling torus.

    ``columns`` already has the identity on B and normalized other columns.
    Scaling row i by t_i and rescaling column b_i by 1/t_i keeps the frame;
    the other columns are renormalized.  t_0 = 1 accounts for PGL scalars.
    """
    r = len(columns[0])
    others = [j for j in range(len(columns)) if j not in B]
    best = None
    for tail in product(range(1, p), repeat=r - 1):
        t = (1,) + tail
        cols = list(columns)
        for j in others:
            cols[j] = _normalize_column(tuple(t[i] * columns[j][i] % p for i in range(r)), p)
        rows = tuple(zip(*cols))
        if best is None or rows < best:
            best = rows
    return best


def gauge_class(M: Matroid, A: Matrix) -> GaugeClass:
    """Canonical representative of A's orbit under PGL_{d+1} x G_m^{n+1}."""
    if not isinstance(A.field, PrimeField):
        raise ParameterOutOfRange("gauge classes are defined over prime fields only")
    _check_shape(M, A)
    p = A.field.p
    B = elements(M.lex_least_basis())
    frame = A.columns(B)
    if det_mod_p(frame.rows, p) == 0:
        raise NoBasis(f"columns {B} of the matrix are dependent")
    r = M.rank
    aug = [list(frame.rows[i]) + [int(i == j) for j in range(r)] for i in range(r)]
    inv_rows = [row[r:] for row in rref(A.field, aug)[0]]
    inv = Matrix(A.field, tuple(tuple(row) for row in inv_rows), r)
    fixed = inv @ A
    cols = [fixed.column(j) for j in range(A.ncols)]
    for j in range(A.ncols):
        if j not in B:
            if not any(cols[j]):
                raise LoopColumn(j)
            cols[j] = _normalize_column(cols[j], p)
    rows = _torus_canonical(B, cols, p)
    return GaugeClass(B, RealizationMatrix(A.field, rows, A.ncols))


def search_realizations(M: Matroid, p: int, mode: str = "all_classes",
                        max_work: Optional[int] = None) -> list[GaugeClass]:
    """Depth-first search over gauge-fixed matrices realizing M over F_p.

    The lexicographically least basis is fixed to the identity and every other
    column ranges over projective representatives.  A partial assignment is
    cut as soon as a fully assigned (d+1)-subset disagrees with M about being
    a basis.  ``mode="first"`` stops at the first hit.
    """
    if mode not in ("first", "all_classes"):
        raise ValueError(f"unknown mode {mode!r}")
    field = GF(p)
    if p > MAX_SEARCH_PRIME:
        raise ParameterOutOfRange(f"p={p} exceeds {MAX_SEARCH_PRIME}")
    if not M.bases:
        raise NoBasis("matroid has no basis")
    r = M.rank
    n1 = M.n_elements
    B = elements(M.lex_least_basis())
    others = [j for j in range(n1) if j not in B]
    points = projective_points(p, r)
    estimate = len(points) ** len(others)
    limit = work_limit(SEARCH_LIMIT, max_work)
    if estimate > limit:
        raise SearchTooLarge(estimate, limit)

    columns: list[Optional[tuple[int, ...]]] = [None] * n1
    for i, b in enumerate(B):
        columns[b] = tuple(int(k == i) for k in range(r))
    # subsets that become fully determined when each non-basis column is placed
    checks = []
    placed = set(B)
    for j in others:
        placed.add(j)
        new = [
            (cols, mask(cols) in M.bases)
            for cols in combinations(sorted(placed), r)
            if j in cols
        ]
        checks.append(new)

    hits: set[tuple] = set()
    result: list[GaugeClass] = []

    def consistent(level) -> bool:
        for cols, is_basis in checks[level]:
            det = det_mod_p([[columns[c][i] for c in cols] for i in range(r)], p)
            if (det != 0) != is_basis:
                return False
        return True

    def dfs(level) -> bool:
        if level == len(others):
            rows = _torus_canonical(B, columns, p)
            if rows not in hits:
                hits.add(rows)
                result.append(GaugeClass(B, RealizationMatrix(field, rows, n1)))
            return mode == "first"
        j = others[level]
        for pt in points:
            columns[j] = pt
            if consistent(level) and dfs(level + 1):
                return True
        columns[j] = None
        return False

    dfs(0)
    result.sort(key=GaugeClass.sort_key)
    return result


# --- tropical realizations as subspaces ------------------------------------

def gaussian_binomial(n: int, k: int, q: int) -> int:
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_subspaces(n: int, k: int, q: int, pivot_filter=None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every k-dimensional subspace of F_q^n, once, as its RREF basis rows."""
    for pivots in combinations(range(n), k):
        if pivot_filter is not None and not pivot_filter(pivots):
            continue
        pivot_set = set(pivots)
        free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n) if j not in pivot_set]
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            yield tuple(tuple(r) for r in rows)


def _has_matroid(rows, M: Matroid, q: int) -> bool:
    r = M.rank
    for cols in combinations(range(M.n_elements), r):
        det = det_mod_p([[row[c] for c in cols] for row in rows], q)
        if (det != 0) != (mask(cols) in M.bases):
            return False
    return True


def tropical_realizations(M: Matroid, q: int, max_work: Optional[int] = None) -> Iterator[RealizationMatrix]:
    """The subspaces of F_q^{n+1} with column matroid M, as RREF matrices."""
    GF(q)
    total = gaussian_binomial(M.n_elements, M.rank, q)
    limit = work_limit(ENUMERATION_LIMIT, max_work)
    if total > limit:
        raise EnumerationTooLarge(total, limit)
    # the pivot columns carry an identity block, so they must form a basis
    is_basis = lambda pivots: mask(pivots) in M.bases
    for rows in rref_subspaces(M.n_elements, M.rank, q, is_basis):
        if _has_matroid(rows, M, q):
            yield RealizationMatrix(GF(q), rows, M.n_elements)


def count_tropical_realizations(M: Matroid, q: int, max_work: Optional[int] = None) -> int:
    return sum(1 for _ in tropical_realizations(M, q, max_work))


@dataclass(frozen=True)
class TorsorCheck:
    q: int
    lhs: int
    classes: int
    torus_rank: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def verify_torsor_count(M: Matroid, q: int, max_work: Optional[int] = None) -> TorsorCheck:
    """#subspaces with matroid M  ==  #classes * (q - 1)^(#M - c(M))."""
    lhs = count_tropical_realizations(M, q, max_work)
    classes = len(search_realizations(M, q, "all_classes", max_work))
    torus_rank = M.n_elements - len(connected_components(M))
    return TorsorCheck(q, lhs, classes, torus_rank, classes * (q - 1) ** torus_rank)


# --- hyperplane arrangements ----------------------------------------------

EXHAUSTIVE_ELEMENTS = 11


def _rank(A: Matrix, cols) -> int:
    if not cols:
        return 0
    if isinstance(A.field, PrimeField):
        return rank_mod_p([[r[c] for c in cols] for r in A.rows], A.field.p)
    return rank_det_kernel(A.columns(cols)).rank


def arrangement_check(A: Matrix, M: Matroid, samples: int = 500, seed: int = 0) -> bool:
    """Codimension of every intersection of hyperplanes H_i, i in S, equals rank_M(S).

    Exhaustive over all subsets for up to 11 elements, else ``samples``
    seeded random subsets; cross-checked against column-matroid equality.
    """
    _check_shape(M, A)
    rank = rank_det_kernel(A).rank
    if rank != A.nrows:
        raise NotFullRank(rank, A.nrows)
    n1 = M.n_elements
    if n1 <= EXHAUSTIVE_ELEMENTS:
        subsets = range(1 << n1)
        exhaustive = True
    else:
        rng = random.Random(seed)
        subsets = [rng.getrandbits(n1) for _ in range(samples)]
        exhaustive = False
    ranks_ok = all(_rank(A, elements(s)) == M.rank_of(s) for s in subsets)
    try:
        same = column_matroid(A) == M
    except LoopColumn:
        same = False
    if exhaustive:
        assert ranks_ok == same, "rank condition and column matroid disagree"
    elif same:
        assert ranks_ok, "column matroid agrees but a sampled rank does not"
    return ranks_ok and same
