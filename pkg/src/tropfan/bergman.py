"""Matroid (Bergman) fans, the circuit membership test, component lineality
and the degree-one projection onto the Boolean fan of a basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Union

from .errors import DependentGenerators, NotABasis, RankZero
from .exactalg import LinearSolver, lattice_index, nonneg_combination
from .fan import Cone, QuotientVector, WeightedFan
from .matroid import Matroid, circuits, connected_components, elements, flats, mask


@dataclass(frozen=True)
class FlagChain:
    flats: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.flats, self.flats[1:]):
            if a & ~b or a == b:
                raise ValueError("flag must be strictly increasing")


def proper_flats(M: Matroid) -> list[int]:
    """Proper nonempty flats in ray order: by rank, then lexicographically."""
    return [f.elements for f in flats(M).proper_nonempty()]


def full_flags(M: Matroid) -> list[FlagChain]:
    lattice = flats(M)
    d = M.rank - 1
    layers = [[f.elements for f in layer] for layer in lattice.flats_by_rank]
    out = []

    def extend(chain, r):
        if r > d:
            out.append(FlagChain(tuple(chain)))
            return
        last = chain[-1] if chain else 0
        for g in layers[r]:
            if g & last == last:
                chain.append(g)
                extend(chain, r + 1)
                chain.pop()

    extend([], 1)
    return out


def bergman_fan(M: Matroid) -> WeightedFan:
    """The fine subdivision of the Bergman fan: rays e_F over proper nonempty
    flats, one unit-weight maximal cone per full flag."""
    if M.rank == 0:
        raise RankZero()
    ray_flats = proper_flats(M)
    ray_of = {f: i for i, f in enumerate(ray_flats)}
    rays = [QuotientVector.indicator(M.n_elements, f) for f in ray_flats]
    cones = sorted(Cone(tuple(sorted(ray_of[f] for f in flag.flats))) for flag in full_flags(M))
    return WeightedFan(M.n_elements - 1, tuple(rays), tuple(cones), (1,) * len(cones))


def circuit_membership(M: Matroid, v) -> bool:
    """True iff on every circuit the minimum coordinate of v is attained twice."""
    coords = v.coords if isinstance(v, QuotientVector) else tuple(v)
    for c in circuits(M):
        vals = [coords[i] for i in elements(c)]
        if vals.count(min(vals)) < 2:
            return False
    return True


@dataclass(frozen=True)
class LinealityLattice:
    component_vectors: tuple[QuotientVector, ...]
    basis: tuple[QuotientVector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def component_lattice(M: Matroid) -> LinealityLattice:
    comps = connected_components(M).components
    vecs = tuple(QuotientVector.indicator(M.n_elements, c) for c in comps)
    total = vecs[0]
    for v in vecs[1:]:
        total = total + v
    assert total.is_zero(), "component indicators must sum to the relation vector"
    return LinealityLattice(vecs, vecs[:-1])


# --- degree one ------------------------------------------------------------

@dataclass
class ConeCheck:
    subsets: tuple[tuple[int, ...], ...]
    predicted_flats: tuple[tuple[int, ...], ...]
    predicted_cone: tuple[int, ...]
    preimages: list[tuple[int, ...]]
    injective: bool
    unimodular: bool

    @property
    def ok(self) -> bool:
        return self.preimages == [self.predicted_cone] and self.injective and self.unimodular


@dataclass
class DegreeOneReport:
    basis: tuple[int, ...]
    permutation: tuple[int, ...]
    checks: list[ConeCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def cones_checked(self) -> int:
        return len(self.checks)


def _contains(gens, v) -> bool:
    try:
        lam = LinearSolver(gens).solve(v)
        return lam is not None and all(x >= 0 for x in lam)
    except DependentGenerators:
        return nonneg_combination(gens, v) is not None


def verify_degree_one(M: Matroid, basis: Union[str, Iterable[int], None] = "auto") -> DegreeOneReport:
    """Check that projecting Δ_M onto the Boolean fan of a basis has degree one.

    The basis is moved to the front of the labeling (the permutation is
    recorded).  For each full flag S_1 ⊂ ... ⊂ S_d of the basis, the sum of
    the Boolean cone's rays is used as an interior witness: exactly one
    maximal cone of Δ_M may project onto it, that cone must be the one of
    the flag of closures cl(S_i), the projection must be injective on it,
    and its projected rays must be a lattice basis.
    """
    if basis is None or basis == "auto":
        B = elements(M.lex_least_basis())
    else:
        B = tuple(sorted(basis))
        if mask(B) not in M.bases:
            raise NotABasis(B)
    others = tuple(e for e in range(M.n_elements) if e not in B)
    report = DegreeOneReport(B, B + others)
    d = M.rank - 1
    fan = bergman_fan(M)
    ray_flats = proper_flats(M)
    ray_of = {f: i for i, f in enumerate(ray_flats)}

    def project(v: QuotientVector) -> tuple[int, ...]:
        return QuotientVector.of(v.coords[b] for b in B).coords

    projected = {c: [project(fan.rays[i]) for i in c.ray_indices] for c in fan.sorted_maximal()}

    for perm in permutations(range(d + 1)):
        subsets = tuple(tuple(sorted(perm[: i + 1])) for i in range(d))
        boolean_rays = [QuotientVector.of(int(k in s) for k in range(d + 1)) for s in subsets]
        witness = [sum(r.coords[k] for r in boolean_rays) for k in range(d + 1)]
        flag = [M.closure_of(mask(B[k] for k in s)).elements for s in subsets]
        predicted = Cone(tuple(sorted(ray_of[f] for f in flag)))
        pre = [c.ray_indices for c, gens in projected.items() if _contains(gens, witness)]
        gens = projected.get(predicted)
        injective = gens is not None
        if gens:
            try:
                LinearSolver(gens)
            except DependentGenerators:
                injective = False
        unimodular = injective and lattice_index(gens, d) == 1
        report.checks.append(ConeCheck(
            subsets=tuple(tuple(B[k] for k in s) for s in subsets),
            predicted_flats=tuple(elements(f) for f in flag),
            predicted_cone=predicted.ray_indices,
            preimages=pre,
            injective=injective,
            unimodular=unimodular,
        ))
    return report
