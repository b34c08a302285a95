import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropfan.bergman import (
    FlagChain,
    bergman_fan,
    circuit_membership,
    component_lattice,
    full_flags,
    proper_flats,
    verify_degree_one,
)
from tropfan.errors import NotABasis, RankZero
from tropfan.fan import QuotientVector, lineality, support_contains
from tropfan.matroid import (
    Matroid,
    boolean,
    connected_components,
    direct_sum,
    elements,
    fano,
    uniform,
)

import oracles
from conftest import ZOO_NAMES
from test_fan import q_rank

CONE_COUNTS = {"u23": 3, "u24": 4, "boolean3": 6, "boolean4": 24, "fano": 21,
               "non_fano": 24, "u23_u23": 54}


class TestConstruction:
    def test_u23(self):
        F = bergman_fan(uniform(2, 3))
        assert len(F.rays) == 3 and len(F.maximal_cones) == 3 and F.dimension == 1

    def test_fano(self):
        F = bergman_fan(fano())
        assert (F.ambient_rank, F.dimension, len(F.rays), len(F.maximal_cones)) == (6, 2, 14, 21)
        assert set(F.weights) == {1}

    def test_boolean3(self):
        F = bergman_fan(boolean(3))
        assert len(F.rays) == 6 and len(F.maximal_cones) == 6

    def test_rank_one_is_zero_cone(self):
        F = bergman_fan(uniform(1, 3))
        assert F.rays == () and len(F.maximal_cones) == 1 and F.dimension == 0

    def test_rank_zero(self):
        M = Matroid(2, 0, frozenset({0}))
        with pytest.raises(RankZero):
            bergman_fan(M)

    def test_ray_order(self):
        assert proper_flats(uniform(2, 3)) == [0b001, 0b010, 0b100]
        assert [len(elements(f)) for f in proper_flats(fano())] == [1] * 7 + [3] * 7

    def test_flag_chain_strict(self):
        with pytest.raises(ValueError):
            FlagChain((0b011, 0b001))

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_cone_count_matches_chain_oracle(self, zoo, name):
        M = zoo[name]
        chains = oracles.maximal_chains(M.sorted_bases(), M.n_elements)
        assert len(full_flags(M)) == len(chains) == CONE_COUNTS[name]
        got = {tuple(frozenset(elements(f)) for f in flag.flats) for flag in full_flags(M)}
        assert got == chains

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_cones_sorted(self, zoo, name):
        F = bergman_fan(zoo[name])
        assert list(F.maximal_cones) == F.sorted_maximal()


class TestCircuitMembership:
    def test_boolean_vacuous(self):
        assert circuit_membership(boolean(4), (3, -1, 7, 0))

    def test_u23(self):
        assert circuit_membership(uniform(2, 3), (1, 0, 0))
        assert not circuit_membership(uniform(2, 3), (2, 1, 0))

    def test_accepts_quotient_vector(self):
        assert circuit_membership(uniform(2, 3), QuotientVector.of((1, 0, 0)))

    @given(st.lists(st.integers(-5, 5), min_size=4, max_size=4), st.integers(-10, 10))
    def test_shift_invariant(self, v, t):
        M = uniform(2, 4)
        assert circuit_membership(M, v) == circuit_membership(M, [x + t for x in v])

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_equivalent_to_support(self, zoo, name):
        M = zoo[name]
        F = bergman_fan(M)
        rng = random.Random(f"support-{name}")
        for _ in range(200):
            v = QuotientVector.of([rng.randint(-5, 5) for _ in range(M.n_elements)])
            assert circuit_membership(M, v) == (support_contains(F, v) is not None)

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_points_near_the_support(self, zoo, name):
        # random vectors seldom hit a low-dimensional support, so also test
        # points of the fan and single-coordinate perturbations of them
        M = zoo[name]
        F = bergman_fan(M)
        rng = random.Random(f"near-{name}")
        inside = outside = 0
        for _ in range(100):
            c = rng.choice(F.maximal_cones)
            v = QuotientVector.of([0] * M.n_elements)
            for i in c.ray_indices:
                v = v + F.rays[i] * rng.randint(0, 3)
            assert circuit_membership(M, v)
            w = list(v.coords)
            w[rng.randrange(M.n_elements)] += rng.choice([-1, 1])
            member = circuit_membership(M, w)
            assert member == (support_contains(F, w) is not None)
            inside, outside = inside + member, outside + (not member)
        if M.rank < M.n_elements - len(connected_components(M)) + 1:
            assert outside > 0

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_translation_by_component_lattice(self, zoo, name):
        M = zoo[name]
        L = component_lattice(M)
        rng = random.Random(f"translate-{name}")
        for _ in range(100):
            v = QuotientVector.of([rng.randint(-5, 5) for _ in range(M.n_elements)])
            shift = QuotientVector.of([0] * M.n_elements)
            for b in L.basis:
                shift = shift + b * rng.randint(-4, 4)
            assert circuit_membership(M, v + shift) == circuit_membership(M, v)


class TestComponentLattice:
    def test_fano(self):
        assert component_lattice(fano()).rank == 0

    def test_two_summands(self):
        L = component_lattice(direct_sum(uniform(2, 3), uniform(2, 3)))
        assert L.basis == (QuotientVector.indicator(6, 0b000111),)

    def test_boolean3(self):
        assert component_lattice(boolean(3)).rank == 2

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_matches_lineality(self, zoo, name):
        M = zoo[name]
        L = component_lattice(M)
        lin = [v.coords for v in lineality(bergman_fan(M))]
        comp = [v.coords for v in L.basis]
        c = len(connected_components(M))
        assert len(lin) == L.rank == c - 1
        assert q_rank(lin + comp) == q_rank(lin) == q_rank(comp)


class TestDegreeOne:
    def test_u23(self):
        rep = verify_degree_one(uniform(2, 3), [0, 1])
        assert rep.passed and rep.cones_checked == 2

    def test_boolean3_identity(self):
        rep = verify_degree_one(boolean(3), [0, 1, 2])
        assert rep.passed and rep.permutation == (0, 1, 2)
        for chk in rep.checks:
            assert chk.predicted_flats == chk.subsets

    def test_fano_every_basis(self):
        M = fano()
        for B in M.sorted_bases():
            rep = verify_degree_one(M, B)
            assert rep.passed and rep.cones_checked == 6, B

    def test_preimage_oracle_u23(self):
        # only the rays e_0 and e_1 project onto the Boolean rays of {0, 1}
        rep = verify_degree_one(uniform(2, 3), [0, 1])
        assert sorted(chk.preimages for chk in rep.checks) == [[(0,)], [(1,)]]

    def test_auto_uses_lex_least(self):
        rep = verify_degree_one(direct_sum(uniform(2, 3), uniform(2, 3)))
        assert rep.basis == (0, 1, 3, 4) and rep.passed
        assert rep.permutation == (0, 1, 3, 4, 2, 5)

    def test_not_a_basis(self):
        with pytest.raises(NotABasis):
            verify_degree_one(fano(), [0, 1, 2])

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_zoo(self, zoo, name):
        assert verify_degree_one(zoo[name]).passed
