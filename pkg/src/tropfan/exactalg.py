"""Exact linear algebra over Q, Z and prime fields F_p.

Elements of Q are :class:`fractions.Fraction`; elements of F_p are plain
ints in ``range(p)``.  A field object carries the arithmetic that differs
between the two (reduction and inversion); everything else is ordinary
Python operators, so a single elimination routine serves both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .errors import DependentGenerators

Scalar = Union[int, Fraction]


class RationalField:
    name = "Q"
    characteristic = 0

    def __call__(self, x) -> Fraction:
        return x if type(x) is Fraction else Fraction(x)

    def reduce(self, x):
        return x

    def inv(self, x: Fraction) -> Fraction:
        return 1 / x

    def elements(self):
        raise TypeError("Q is infinite")

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    def __init__(self, p: int):
        if not _is_prime(p) or p > 2**31:
            raise ValueError(f"{p} is not a prime <= 2^31")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)

    def elements(self):
        return range(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


Field = Union[RationalField, PrimeField]
QQ = RationalField()


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for f in range(2, math.isqrt(p) + 1):
        if p % f == 0:
            return False
    return True


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix over a single exact field."""

    field: Field
    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable], ncols: Optional[int] = None):
        rows = tuple(tuple(field(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(field, rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, tuple(tuple(r[j] for j in idx) for r in self.rows), len(idx))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        f = self.field
        cols = list(zip(*other.rows))
        rows = tuple(
            tuple(f.reduce(sum(a * b for a, b in zip(r, c))) for c in cols) for r in self.rows
        )
        return Matrix(f, rows, other.ncols)

    def rank(self) -> int:
        return rank_det_kernel(self).rank


@dataclass(frozen=True)
class Elimination:
    rank: int
    det: Optional[Scalar]
    kernel: tuple[tuple, ...]


def rref(field: Field, rows: Sequence[Sequence]) -> tuple[list[list], list[int], object]:
    """Reduced row echelon form.  Returns (rows, pivot columns, det factor).

    The det factor is the determinant of the leading square block when the
    input is square, accumulated from the row swaps and pivot scalings.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    det = field(1)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            det = field.reduce(-det)
        pv = m[r][c]
        det = field.reduce(det * pv)
        inv = field.inv(pv)
        m[r] = [field.reduce(x * inv) for x in m[r]]
        prow = m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.reduce(a - f * b) for a, b in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return m, pivots, det


def _kernel_from_rref(field: Field, m, pivots, ncols) -> tuple[tuple, ...]:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [field(0)] * ncols
        v[fc] = field(1)
        for row, pc in zip(m, pivots):
            v[pc] = field.reduce(-row[fc])
        basis.append(tuple(v))
    return tuple(_normalize_first(field, v) for v in basis)


def _normalize_first(field: Field, v):
    lead = next(x for x in v if x != 0)
    inv = field.inv(lead)
    return tuple(field.reduce(x * inv) for x in v)


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        akk = m[k][k]
        for i in range(k + 1, n):
            aik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * m[n - 1][n - 1]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free rank of an integer matrix."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        arc = m[r][c]
        for i in range(r + 1, nrows):
            aic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, ncols):
                row_i[j] = (row_i[j] * arc - aic * row_r[j]) // prev
            row_i[c] = 0
        prev = arc
        r += 1
    return r


def integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def rank_det_kernel(A: Matrix) -> Elimination:
    """Exact rank, determinant (square input only) and normalized right kernel.

    Over Q the rank and determinant use fraction-free elimination on the
    row-scaled integer matrix; the kernel comes from the rational RREF.
    """
    f = A.field
    m, pivots, det_factor = rref(f, A.rows)
    kernel = _kernel_from_rref(f, m, pivots, A.ncols)
    det = None
    if isinstance(f, RationalField):
        ints = integer_rows(A.rows)
        rank = bareiss_rank(ints) if A.rows else 0
        assert rank == len(pivots)
        if A.nrows == A.ncols:
            scale = Fraction(1)
            for r, ir in zip(A.rows, ints):
                nz = next((k for k, x in enumerate(r) if x != 0), None)
                if nz is not None:
                    scale *= Fraction(ir[nz]) / r[nz]
            det = Fraction(bareiss_det(ints)) / scale
    else:
        rank = len(pivots)
        if A.nrows == A.ncols:
            det = det_factor if rank == A.nrows else 0
    return Elimination(rank, det, kernel)


def det_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a small square matrix over F_p (entries already reduced)."""
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        pv = m[c][c] % p
        det = det * pv % p
        inv = pow(pv, -1, p)
        for i in range(c + 1, n):
            f = m[i][c] * inv % p
            if f:
                ri, rc = m[i], m[c]
                for j in range(c, n):
                    ri[j] = (ri[j] - f * rc[j]) % p
    return det % p


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(GF(p), rows)[1]) if rows else 0


# --- cone solvers ---------------------------------------------------------

class LinearSolver:
    """Solves sum(lam_i * g_i) = v for linearly independent integer generators.

    Picks a set of coordinates on which the generator matrix is invertible
    and keeps that inverse; each solve is then a small matrix-vector product
    followed by an exact check on the remaining coordinates.
    """

    def __init__(self, generators: Sequence[Sequence[int]]):
        self.generators = [tuple(g) for g in generators]
        k = len(self.generators)
        self.k = k
        self.dim = len(self.generators[0]) if k else None
        if k == 0:
            self.pivots, self.inverse = [], []
            return
        # columns of G are the generators; row-reduce G^T to find pivot coords
        _, piv, _ = rref(QQ, [[Fraction(x) for x in g] for g in self.generators])
        if len(piv) < k:
            raise DependentGenerators(len(piv), k)
        self.pivots = piv
        square = [[Fraction(self.generators[j][i]) for j in range(k)] for i in piv]
        aug = [row + [Fraction(int(i == r)) for i in range(k)] for r, row in enumerate(square)]
        red, _, _ = rref(QQ, aug)
        self.inverse = [row[k:] for row in red]

    def solve(self, v: Sequence[int]) -> Optional[tuple[Fraction, ...]]:
        if self.k == 0:
            return () if all(x == 0 for x in v) else None
        vp = [v[i] for i in self.pivots]
        lam = tuple(sum((a * b for a, b in zip(row, vp)), Fraction(0)) for row in self.inverse)
        for i in range(len(v)):
            if sum(l * g[i] for l, g in zip(lam, self.generators)) != v[i]:
                return None
        return lam


def solve_nonneg(generators: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[tuple[Fraction, ...]]:
    """The unique nonnegative rational coefficients expressing v, or None."""
    lam = LinearSolver(generators).solve(v)
    if lam is None or any(x < 0 for x in lam):
        return None
    return lam


def nonneg_combination(generators: Sequence[Sequence], v: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Some lam >= 0 with sum(lam_i * g_i) = v, for arbitrary generators.

    Phase-one simplex in exact arithmetic with Bland's rule, so it always
    terminates.  Returns None when v is outside the cone.
    """
    k = len(generators)
    m = len(v)
    rows = []
    for i in range(m):
        row = [Fraction(generators[j][i]) for j in range(k)]
        rhs = Fraction(v[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        rows.append(row + [Fraction(int(i == a)) for a in range(m)] + [rhs])
    ncol = k + m
    basis = [k + i for i in range(m)]
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [-sum(rows[i][j] for i in range(m)) for j in range(k)] + [Fraction(0)] * m
    cost.append(-sum(rows[i][-1] for i in range(m)))
    while True:
        enter = next((j for j in range(ncol) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction; cannot occur in phase one
            break
        r = best[1]
        pv = rows[r][enter]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        f = cost[enter]
        cost = [a - f * b for a, b in zip(cost, rows[r])]
        basis[r] = enter
    if cost[-1] != 0:
        return None
    lam = [Fraction(0)] * k
    for i, b in enumerate(basis):
        if b < k:
            lam[b] = rows[i][-1]
    return tuple(lam)


# --- lattices -------------------------------------------------------------

def lattice_index(vectors: Sequence[Sequence[int]], ambient_rank: int) -> int:
    """gcd of the maximal minors of the matrix with the given rows.

    Vectors of length ``ambient_rank + 1`` are read as representatives in
    Z^{n+1}/(1,...,1): they are shifted to last coordinate 0 and the last
    coordinate dropped, identifying the quotient with Z^n.  Returns 0 when
    the rows are dependent and 1 when they span a saturated sublattice.
    """
    rows = []
    for vec in vectors:
        vec = list(vec)
        if len(vec) == ambient_rank + 1:
            vec = [x - vec[-1] for x in vec[:-1]]
        elif len(vec) != ambient_rank:
            raise ValueError(f"vector length {len(vec)} does not fit ambient rank {ambient_rank}")
        rows.append(vec)
    k = len(rows)
    if k == 0:
        return 1
    if k > ambient_rank:
        return 0
    g = 0
    for cols in combinations(range(ambient_rank), k):
        d = bareiss_det([[r[c] for c in cols] for r in rows])
        g = math.gcd(g, d)
        if g == 1:
            break
    return g


def primitive(v: Sequence[Scalar]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)
