"""Weighted simplicial fans in N_R = R^{n+1} / (1, ..., 1).

Vectors of N are stored by their canonical representative, the one whose
last coordinate is zero.  Dropping that coordinate identifies N with Z^n,
so primitivity, spans and lattice indices can be computed on the
representatives directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import NotPure, NotSimplicial
from .exactalg import (
    QQ,
    LinearSolver,
    Matrix,
    lattice_index,
    nonneg_combination,
    primitive,
    rank_det_kernel,
)


@dataclass(frozen=True, order=True)
class QuotientVector:
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.coords and self.coords[-1] != 0:
            raise ValueError("not in canonical form; use QuotientVector.of")

    @classmethod
    def of(cls, representative: Iterable[int]) -> "QuotientVector":
        rep = tuple(representative)
        return cls(tuple(x - rep[-1] for x in rep))

    @classmethod
    def indicator(cls, n_elements: int, subset_mask: int) -> "QuotientVector":
        return cls.of((subset_mask >> i) & 1 for i in range(n_elements))

    def __add__(self, other):
        return QuotientVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuotientVector(tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        return QuotientVector(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __len__(self):
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def primitive(self) -> "QuotientVector":
        return QuotientVector(primitive(self.coords))


@dataclass(frozen=True, order=True)
class Cone:
    ray_indices: tuple[int, ...]

    def __len__(self):
        return len(self.ray_indices)

    def faces(self):
        for k in range(len(self.ray_indices) + 1):
            for sub in combinations(self.ray_indices, k):
                yield Cone(sub)


@dataclass(frozen=True, eq=False)
class WeightedFan:
    """A fan given by its rays and its maximal cones with weights.

    Maximal cones are kept exactly as supplied (duplicates included) so that
    :func:`fan_validate` can report malformed input; all lower cones are
    reconstructed as faces.
    """

    ambient_rank: int
    rays: tuple[QuotientVector, ...]
    maximal_cones: tuple[Cone, ...]
    weights: tuple[int, ...]

    @classmethod
    def from_maximal(cls, ambient_rank: int, rays: Sequence, cones: Sequence, weights: Optional[Sequence[int]] = None):
        rays = tuple(r if isinstance(r, QuotientVector) else QuotientVector.of(r) for r in rays)
        cones = tuple(c if isinstance(c, Cone) else Cone(tuple(sorted(c))) for c in cones)
        weights = tuple(weights) if weights is not None else (1,) * len(cones)
        if len(weights) != len(cones):
            raise ValueError("one weight per maximal cone")
        return cls(ambient_rank, rays, cones, weights)

    @property
    def dimension(self) -> int:
        return max((len(c) for c in self.maximal_cones), default=-1)

    @cached_property
    def cones_by_dim(self) -> tuple[tuple[Cone, ...], ...]:
        seen: set[Cone] = set()
        for c in self.maximal_cones:
            seen.update(c.faces())
        layers = [[] for _ in range(self.dimension + 1)]
        for c in seen:
            layers[len(c)].append(c)
        return tuple(tuple(sorted(layer)) for layer in layers)

    def weight(self, cone: Cone) -> int:
        return self.weights[self.maximal_cones.index(cone)]

    def generators(self, cone: Cone) -> list[tuple[int, ...]]:
        return [self.rays[i].coords for i in cone.ray_indices]

    @cached_property
    def _solvers(self) -> dict[Cone, LinearSolver]:
        return {}

    def solver(self, cone: Cone) -> LinearSolver:
        s = self._solvers.get(cone)
        if s is None:
            s = self._solvers[cone] = LinearSolver(self.generators(cone))
        return s

    def sorted_maximal(self) -> list[Cone]:
        return sorted(set(self.maximal_cones))

    def with_weights(self, weights: Sequence[int]) -> "WeightedFan":
        return WeightedFan(self.ambient_rank, self.rays, self.maximal_cones, tuple(weights))


def _as_vector(v) -> tuple[int, ...]:
    if isinstance(v, QuotientVector):
        return v.coords
    return QuotientVector.of(v).coords


def _span_rank(vectors) -> int:
    if not vectors:
        return 0
    return rank_det_kernel(Matrix.from_rows(QQ, vectors)).rank


# --- validation -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    cones: tuple
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    checked_pairs: int = 0

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, kind, cones=(), detail=""):
        self.violations.append(Violation(kind, tuple(cones), detail))


def fan_validate(F: WeightedFan, check_fan_property: bool = True) -> ValidationReport:
    """Check every WeightedFan invariant; each violation carries a witness."""
    rep = ValidationReport()
    n = F.ambient_rank
    for i, r in enumerate(F.rays):
        if len(r) != n + 1:
            rep.add("ray-length", [(i,)], f"ray {i} has length {len(r)}, expected {n + 1}")
        elif r.is_zero():
            rep.add("zero-ray", [(i,)])
        elif r.primitive() != r:
            rep.add("non-primitive-ray", [(i,)], str(r.coords))
    seen_rays: dict[QuotientVector, int] = {}
    for i, r in enumerate(F.rays):
        if r in seen_rays:
            rep.add("duplicate-ray", [(seen_rays[r],), (i,)])
        else:
            seen_rays[r] = i
    if not F.maximal_cones:
        rep.add("empty-fan")
        return rep
    structural_ok = True
    for c in F.maximal_cones:
        idx = c.ray_indices
        if any(not 0 <= i < len(F.rays) for i in idx) or len(set(idx)) != len(idx):
            rep.add("bad-ray-index", [idx])
            structural_ok = False
    for w, c in zip(F.weights, F.maximal_cones):
        if not (isinstance(w, int) and w >= 1):
            rep.add("weight", [c.ray_indices], f"weight {w} is not a positive integer")
    if not structural_ok or any(v.kind == "ray-length" for v in rep.violations):
        return rep

    first: dict[Cone, int] = {}
    for k, c in enumerate(F.maximal_cones):
        if c in first:
            rep.add("duplicate-cone", [c.ray_indices, c.ray_indices], f"listed at {first[c]} and {k}")
        else:
            first[c] = k
    cones = list(first)
    dims = {len(c) for c in cones}
    if len(dims) > 1:
        lo = min(cones, key=len)
        hi = max(cones, key=len)
        rep.add("not-pure", [lo.ray_indices, hi.ray_indices], f"dimensions {sorted(dims)}")
    sets = [set(c.ray_indices) for c in cones]
    for a, b in combinations(range(len(cones)), 2):
        if sets[a] < sets[b] or sets[b] < sets[a]:
            rep.add("face-listed-as-maximal", [cones[a].ray_indices, cones[b].ray_indices])

    simplicial = []
    for c in cones:
        gens = F.generators(c)
        if _span_rank(gens) < len(gens):
            rep.add("not-simplicial", [c.ray_indices], "rays are linearly dependent")
        else:
            simplicial.append(c)

    if check_fan_property:
        for a, b in combinations(simplicial, 2):
            rep.checked_pairs += 1
            if not _meet_in_common_face(F, a, b):
                rep.add("fan-property", [a.ray_indices, b.ray_indices],
                        "cones intersect beyond their common face")
    return rep


def _meet_in_common_face(F: WeightedFan, a: Cone, b: Cone) -> bool:
    # Feasible iff some x in a ∩ b uses a ray outside the common face with
    # positive weight: sum a_i g_i - sum b_j h_j + sum l_k r_k = 0, with
    # a, b >= 0 summing to 1 and l free (split into +/-).
    common = sorted(set(a.ray_indices) & set(b.ray_indices))
    only_a = [i for i in a.ray_indices if i not in common]
    only_b = [i for i in b.ray_indices if i not in common]
    if not only_a and not only_b:
        return True
    gens = []
    for i in only_a:
        gens.append(F.rays[i].coords + (1,))
    for i in only_b:
        gens.append(tuple(-x for x in F.rays[i].coords) + (1,))
    for i in common:
        gens.append(F.rays[i].coords + (0,))
        gens.append(tuple(-x for x in F.rays[i].coords) + (0,))
    target = (0,) * (F.ambient_rank + 1) + (1,)
    return nonneg_combination(gens, target) is None


# --- membership -----------------------------------------------------------

def cone_coefficients(F: WeightedFan, c: Cone, v) -> Optional[tuple[Fraction, ...]]:
    return F.solver(c).solve(_as_vector(v))


def cone_contains(F: WeightedFan, c: Cone, v, relative_interior: bool = False) -> bool:
    lam = cone_coefficients(F, c, v)
    if lam is None:
        return False
    if relative_interior:
        return all(x > 0 for x in lam)
    return all(x >= 0 for x in lam)


def support_contains(F: WeightedFan, v) -> Optional[Cone]:
    """Least maximal cone (by ray indices) containing v, or None outside |F|."""
    vec = _as_vector(v)
    for c in F.sorted_maximal():
        if cone_contains(F, c, vec):
            return c
    return None


# --- balancing ------------------------------------------------------------

@dataclass
class BalancingFailure:
    tau: tuple[int, ...]
    residual: tuple[Fraction, ...]


@dataclass
class BalancingReport:
    checked: int
    failures: list[BalancingFailure]

    @property
    def balanced(self) -> bool:
        return not self.failures


def _require_pure_simplicial(F: WeightedFan):
    cones = F.sorted_maximal()
    if len({len(c) for c in cones}) > 1:
        raise NotPure("maximal cones of differing dimension")
    for c in cones:
        gens = F.generators(c)
        if _span_rank(gens) < len(gens):
            raise NotSimplicial(f"cone {c.ray_indices} has dependent rays")


def check_balancing(F: WeightedFan) -> BalancingReport:
    """Minkowski-weight condition around every codimension-one cone.

    For tau ⊂ sigma with extra ray r, the image of r in the rank-one lattice
    (N ∩ span sigma)/(N ∩ span tau) is m times its generator u_{sigma/tau},
    with m = index(sigma)/index(tau).  So u_{sigma/tau} ≡ r/m modulo span tau,
    and the rational vector sum_sigma w(sigma) r_sigma / m_sigma lies in
    span_Q(tau) exactly when any choice of integer lifts does.
    """
    _require_pure_simplicial(F)
    d = F.dimension
    n = F.ambient_rank
    if d <= 0:
        return BalancingReport(0, [])
    index_cache: dict[tuple, int] = {}

    def index(ray_ids):
        if ray_ids not in index_cache:
            index_cache[ray_ids] = lattice_index([F.rays[i].coords for i in ray_ids], n)
        return index_cache[ray_ids]

    around: dict[tuple, list[tuple[int, int]]] = {}
    for c, w in zip(F.maximal_cones, F.weights):
        for extra in c.ray_indices:
            tau = tuple(i for i in c.ray_indices if i != extra)
            around.setdefault(tau, []).append((extra, w, c.ray_indices))
    failures = []
    for tau in sorted(around):
        total = [Fraction(0)] * (n + 1)
        g_tau = index(tau)
        for extra, w, sigma in around[tau]:
            scale = Fraction(w * g_tau, index(sigma))
            for k, x in enumerate(F.rays[extra].coords):
                total[k] += scale * x
        tau_gens = [F.rays[i].coords for i in tau]
        if _span_rank(tau_gens + [tuple(total)]) != len(tau_gens):
            failures.append(BalancingFailure(tau, tuple(total)))
    return BalancingReport(len(around), failures)


# --- lineality ------------------------------------------------------------

def lineality(F: WeightedFan) -> list[QuotientVector]:
    """Primitive basis of the intersection of the linear spans of all maximal cones."""
    n = F.ambient_rank
    cones = F.sorted_maximal()
    if not cones:
        raise ValueError("fan has no maximal cone")
    annihilators: list[tuple] = []
    for c in cones:
        gens = F.generators(c)
        if gens:
            ann = rank_det_kernel(Matrix.from_rows(QQ, gens)).kernel
        else:
            ann = tuple(tuple(Fraction(int(i == j)) for i in range(n + 1)) for j in range(n + 1))
        annihilators.extend(ann)
    # every representative has last coordinate 0
    annihilators.append(tuple(Fraction(int(i == n)) for i in range(n + 1)))
    basis = rank_det_kernel(Matrix.from_rows(QQ, annihilators)).kernel
    return [QuotientVector(primitive(v)) for v in basis]

