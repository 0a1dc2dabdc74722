from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weylcycles.errors import PreconditionError, ResourceCapError
from weylcycles.lattice import DivisorClass, Space
from weylcycles.oracle import (InterpolationProblem, condition_matrix, dimension_table, divisor_dimension,
                               general_points, multiplicity_vectors, oracle_dimension, rank_mod_p)


class TestProblem:
    def test_from_divisor_drops_zeros(self):
        p = InterpolationProblem.from_divisor(DivisorClass(Space(3, 4), 2, (1, 0, 1, 0)))
        assert p.m == (1, 1)

    @pytest.mark.parametrize("kw", [dict(n=0, d=1, m=()), dict(n=2, d=-1, m=()), dict(n=2, d=2, m=(0,)),
                                    dict(n=2, d=5, m=(), prime=5), dict(n=2, d=1, m=(), prime=2**31 + 11)])
    def test_invalid(self, kw):
        with pytest.raises(PreconditionError):
            InterpolationProblem(**kw)

    def test_negative_multiplicity_rejected(self):
        with pytest.raises(PreconditionError):
            InterpolationProblem.from_divisor(DivisorClass(Space(2, 1), 1, (-1,)))

    def test_counts(self):
        p = InterpolationProblem(3, 4, (2, 3))
        assert p.monomial_count == 35
        assert p.condition_count == 4 + 10


class TestRank:
    def test_identity(self):
        assert rank_mod_p(np.eye(5, dtype=np.int64), 101) == 5

    def test_dependent_rows(self):
        A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=np.int64)
        assert rank_mod_p(A, 101) == 2

    def test_rank_drops_mod_p(self):
        A = np.array([[1, 1], [1, 8]], dtype=np.int64)
        assert rank_mod_p(A, 7) == 1
        assert rank_mod_p(A, 11) == 2

    @given(st.lists(st.lists(st.integers(0, 50), min_size=4, max_size=4), min_size=1, max_size=6))
    @settings(max_examples=50)
    def test_matches_float_rank_on_small_ints(self, rows):
        A = np.array(rows, dtype=np.int64)
        # over a large prime small integer matrices keep their rational rank
        assert rank_mod_p(A, 2147483647) == np.linalg.matrix_rank(A.astype(float))


class TestPoints:
    def test_deterministic(self):
        assert general_points(3, 7, 5, 101) == general_points(3, 7, 5, 101)

    def test_seed_changes_extra_points(self):
        assert general_points(3, 7, 5, 2147483647) != general_points(3, 7, 6, 2147483647)

    def test_matrix_shape(self):
        p = InterpolationProblem(2, 3, (2, 1))
        assert condition_matrix(p, 0).shape == (4, 10)


class TestDimension:
    @pytest.mark.parametrize("n,d,m,dim", [
        (2, 2, (1,) * 5, 1),
        (2, 4, (2,) * 5, 1),   # double conic, virtual dimension 0
        (2, 3, (1,) * 9, 1),
        (3, 4, (2,) * 9, 1),   # square of the quadric, virtual dimension -1
        (3, 2, (1,) * 9, 1),
        (2, 2, (3,), 0),
    ])
    def test_known(self, n, d, m, dim):
        r = oracle_dimension(InterpolationProblem(n, d, m))
        assert r.dimension == dim and r.stable

    def test_negative_degree(self):
        assert divisor_dimension(DivisorClass(Space(2, 1), -1, (0,))).dimension == 0

    def test_no_points(self):
        assert oracle_dimension(InterpolationProblem(3, 2, ())).dimension == 10

    @given(st.integers(1, 3), st.integers(0, 4), st.lists(st.integers(1, 3), max_size=3))
    @settings(max_examples=30, deadline=None)
    def test_at_most_n_plus_one_points_expected(self, n, d, m):
        # up to n+1 coordinate points impose independent conditions when d >= sum bound
        if len(m) > n + 1:
            return
        r = oracle_dimension(InterpolationProblem(n, d, tuple(m)))
        assert r.dimension >= comb(n + d, n) - sum(comb(n + min(x - 1, d), n) for x in m)

    def test_cell_cap(self):
        with pytest.raises(ResourceCapError):
            oracle_dimension(InterpolationProblem(3, 10, (3,) * 9), cell_cap=100)


class TestTable:
    def test_vectors_up_to_permutation(self):
        vecs = list(multiplicity_vectors(3, 1, 2))
        assert vecs == [(2, 2, 2), (2, 2, 1), (2, 1, 1), (1, 1, 1)]

    def test_small_grid_matches(self):
        rows = dimension_table(Space(2, 4), 4, 2)
        assert rows and all(r.match for r in rows)
        assert all(r.stable for r in rows)

    def test_parallel_same_rows(self):
        a = dimension_table(Space(2, 3), 3, 2)
        b = dimension_table(Space(2, 3), 3, 2, jobs=2)
        assert a == b

    def test_bad_grid(self):
        with pytest.raises(PreconditionError):
            dimension_table(Space(2, 3), 1, 0)

    def test_row_json(self):
        row = dimension_table(Space(2, 2), 2, 2, d_min=2)[0]
        obj = row.to_json()
        assert obj["expected"] == row.expected and obj["match"] is True
