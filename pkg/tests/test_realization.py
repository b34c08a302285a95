import random

import pytest

from tropfan.errors import (
    DimensionMismatch,
    EnumerationTooLarge,
    LoopColumn,
    NotFullRank,
    ParameterOutOfRange,
    SearchTooLarge,
)
from tropfan.exactalg import GF, QQ, Matrix
from tropfan.matroid import (
    circuits,
    column_matroid,
    fano,
    matroid_from_nonbases,
    non_fano,
    uniform,
)
from tropfan.realization import (
    RealizationMatrix,
    arrangement_check,
    count_tropical_realizations,
    gauge_class,
    gaussian_binomial,
    is_gamma_point,
    projective_points,
    search_realizations,
    tropical_realizations,
    verify_torsor_count,
)

import oracles
from conftest import ZOO_NAMES
from test_matroid import FANO_F2

# a prime over which each zoo matroid is realizable
REALIZING_PRIME = {"u23": 3, "u24": 3, "boolean3": 2, "boolean4": 2, "fano": 2,
                   "non_fano": 3, "u23_u23": 3}


def random_invertible(rng, r, p):
    while True:
        g = [[rng.randrange(p) for _ in range(r)] for _ in range(r)]
        if oracles.det(g, p):
            return Matrix.from_rows(GF(p), g)


class TestRealizationMatrix:
    def test_rejects_rank_deficient(self):
        with pytest.raises(NotFullRank):
            RealizationMatrix.of(GF(2), [[1, 1], [1, 1]])

    def test_rejects_zero_column(self):
        with pytest.raises(LoopColumn):
            RealizationMatrix.of(QQ, [[1, 0, 0], [0, 1, 0]])

    def test_equal_to_plain_matrix(self):
        A = RealizationMatrix.of(GF(3), [[1, 0, 1], [0, 1, 2]])
        assert A == Matrix.from_rows(GF(3), [[1, 0, 1], [0, 1, 2]])


class TestGammaPoint:
    def test_fano_over_f2(self):
        assert is_gamma_point(fano(), Matrix.from_rows(GF(2), FANO_F2))

    def test_fano_entries_over_f3(self):
        chk = is_gamma_point(fano(), Matrix.from_rows(GF(3), FANO_F2))
        assert not chk
        # the first disagreeing triple is a Fano line with nonzero minor mod 3
        assert chk.failing_subset == (2, 4, 5)
        rows = [[r[j] for j in chk.failing_subset] for r in FANO_F2]
        assert oracles.det(rows, 3) != 0

    def test_u23_over_q(self):
        assert is_gamma_point(uniform(2, 3), Matrix.from_rows(QQ, [[1, 0, 1], [0, 1, 1]]))

    def test_shape(self):
        with pytest.raises(DimensionMismatch):
            is_gamma_point(fano(), Matrix.from_rows(GF(2), [[1, 0, 1], [0, 1, 1]]))


class TestSearch:
    def test_projective_points(self):
        assert projective_points(3, 2) == [(0, 1), (1, 0), (1, 1), (1, 2)]
        assert len(projective_points(5, 3)) == 31

    def test_fano_p2_matches_unpruned_oracle(self):
        M = fano()
        frame = (0, 1, 3)
        leaves, good = oracles.exhaustive_gauge_leaves(M.sorted_bases(), 7, 3, 2, frame)
        assert leaves == 2401 and len(good) == 1
        (cls,) = search_realizations(M, 2)
        assert cls.base_basis == frame
        assert cls.matrix.rows == good[0]

    @pytest.mark.parametrize("p", [3, 5])
    def test_fano_odd(self, p):
        assert search_realizations(fano(), p) == []

    @pytest.mark.parametrize("p, expected", [(2, 0), (3, 1)])
    def test_non_fano(self, p, expected):
        assert len(search_realizations(non_fano(), p)) == expected

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_u24_matches_p1_orbits(self, p):
        expected = oracles.p1_orbits(p, 4) if p > 2 else 0
        assert len(search_realizations(uniform(2, 4), p)) == expected

    def test_mode_first(self):
        assert len(search_realizations(uniform(2, 4), 7, mode="first")) == 1
        assert search_realizations(fano(), 3, mode="first") == []

    def test_sorted_output(self):
        classes = search_realizations(uniform(2, 4), 7)
        keys = [c.sort_key() for c in classes]
        assert keys == sorted(keys) and len(set(keys)) == len(keys)

    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_round_trip(self, zoo, name):
        M = zoo[name]
        for cls in search_realizations(M, REALIZING_PRIME[name]):
            assert is_gamma_point(M, cls.matrix)
            assert column_matroid(cls.matrix) == M
            assert gauge_class(M, cls.matrix) == cls

    def test_bad_arguments(self):
        with pytest.raises(ParameterOutOfRange):
            search_realizations(uniform(2, 3), 17)
        with pytest.raises(ValueError):
            search_realizations(uniform(2, 3), 4)
        with pytest.raises(ValueError):
            search_realizations(uniform(2, 3), 3, mode="every")


class TestGaugeSoundness:
    @pytest.mark.parametrize("name", ZOO_NAMES)
    def test_invariant_under_group_action(self, zoo, name):
        M = zoo[name]
        p = REALIZING_PRIME[name]
        (base, *_) = search_realizations(M, p, mode="first")
        A = base.matrix
        rng = random.Random(name)
        for _ in range(100):
            g = random_invertible(rng, M.rank, p)
            B = g @ A
            scales = [rng.randrange(1, p) for _ in range(M.n_elements)]
            B = Matrix.from_rows(GF(p), [[x * s for x, s in zip(r, scales)] for r in B.rows])
            assert gauge_class(M, B) == base

    def test_distinct_orbits_stay_distinct(self):
        classes = search_realizations(uniform(2, 4), 5)
        assert len({gauge_class(uniform(2, 4), c.matrix) for c in classes}) == 3


class TestCounts:
    def test_gaussian_binomial(self):
        assert gaussian_binomial(4, 2, 3) == 130
        assert gaussian_binomial(7, 3, 2) == 11811
        assert gaussian_binomial(3, 5, 2) == 0

    def test_rref_enumeration_is_complete(self):
        from tropfan.realization import rref_subspaces
        assert sum(1 for _ in rref_subspaces(4, 2, 3)) == 130

    @pytest.mark.parametrize("q", [2, 3, 5, 7])
    def test_u23(self, q):
        assert count_tropical_realizations(uniform(2, 3), q) == (q - 1) ** 2

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_u24(self, q):
        assert count_tropical_realizations(uniform(2, 4), q) == (q - 2) * (q - 1) ** 3

    def test_fano_matches_f2_subspace_oracle(self):
        total, hits = oracles.f2_subspaces_with_matroid(
            7, 3, {frozenset(b) for b in fano().sorted_bases()}
        )
        assert total == 11811
        assert count_tropical_realizations(fano(), 2) == hits == 1

    def test_circuits_of_counted_subspaces(self):
        M = uniform(2, 4)
        for A in tropical_realizations(M, 5):
            assert circuits(column_matroid(A)) == circuits(M)


class TestTorsor:
    @pytest.mark.parametrize("q, count", [(2, 1), (3, 4), (5, 16)])
    def test_u23(self, q, count):
        chk = verify_torsor_count(uniform(2, 3), q)
        assert chk.passed and chk.lhs == chk.rhs == count and chk.torus_rank == 2

    @pytest.mark.parametrize("q, classes, count", [(3, 1, 8), (5, 3, 192)])
    def test_u24(self, q, classes, count):
        chk = verify_torsor_count(uniform(2, 4), q)
        assert (chk.lhs, chk.classes, chk.rhs) == (count, classes, count)

    def test_fano(self):
        chk = verify_torsor_count(fano(), 2)
        assert (chk.lhs, chk.classes, chk.torus_rank, chk.rhs) == (1, 1, 6, 1)

    @pytest.mark.parametrize("name", ["boolean3", "u23_u23", "non_fano"])
    def test_zoo(self, zoo, name):
        assert verify_torsor_count(zoo[name], 3).passed


class TestGuards:
    def test_search_too_large(self):
        with pytest.raises(SearchTooLarge) as exc:
            search_realizations(fano(), 13)
        assert exc.value.estimate == 183 ** 4

    def test_enumeration_too_large(self):
        with pytest.raises(EnumerationTooLarge) as exc:
            count_tropical_realizations(fano(), 7)
        assert exc.value.estimate == gaussian_binomial(7, 3, 7)

    def test_explicit_limit(self):
        with pytest.raises(EnumerationTooLarge):
            count_tropical_realizations(uniform(2, 4), 3, max_work=100)
        assert count_tropical_realizations(uniform(2, 4), 3, max_work=130) == 8

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("TROPFAN_MAX_WORK", "10")
        with pytest.raises(SearchTooLarge):
            search_realizations(uniform(2, 4), 5)
        assert len(search_realizations(uniform(2, 3), 3)) == 1
        monkeypatch.delenv("TROPFAN_MAX_WORK")
        with pytest.raises(SearchTooLarge):
            search_realizations(uniform(2, 4), 5, max_work=10)


class TestArrangement:
    def test_fano_matrix(self):
        A = Matrix.from_rows(GF(2), FANO_F2)
        assert arrangement_check(A, fano())
        assert not arrangement_check(A, non_fano())

    def test_u23_over_q(self):
        assert arrangement_check(Matrix.from_rows(QQ, [[1, 0, 1], [0, 1, 1]]), uniform(2, 3))

    def test_not_full_rank(self):
        with pytest.raises(NotFullRank):
            arrangement_check(Matrix.from_rows(QQ, [[1, 1, 1], [2, 2, 2]]), uniform(2, 3))

    def test_sampled_branch(self):
        # moment curve columns (1, a, a^2): every 3x3 minor is a Vandermonde determinant
        M = uniform(3, 12)
        A = Matrix.from_rows(GF(13), [[a ** k % 13 for a in range(12)] for k in range(3)])
        assert arrangement_check(A, M, samples=200, seed=1)
        collinear = matroid_from_nonbases(12, 3, [(0, 1, 2)])
        assert not arrangement_check(A, collinear, samples=50, seed=1)
