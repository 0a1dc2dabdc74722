import itertools

import pytest
from hypothesis import given, settings, strategies as st

from weylcycles.cones import (RationalCone, c_It, ck_generators, ck_seeds, cone_contains, cone_equal, dk_curve_list,
                              dk_inequality_cone, dual_cone, is_extremal, nullspace, primitive, rank,
                              table1_orbit_count, verify_strong_duality)
from weylcycles.errors import (DimensionMismatchError, PreconditionError, ResourceCapError,
                               UnsupportedSpaceError)
from weylcycles.lattice import CurveClass, DivisorClass, Space


def plain(gens, dim=None):
    dim = dim or len(gens[0])
    return RationalCone(dim, tuple(map(tuple, gens)))


class TestLinearAlgebra:
    def test_primitive(self):
        assert primitive((4, -6, 0)) == (2, -3, 0)
        with pytest.raises(PreconditionError):
            primitive((0, 0))

    def test_rank(self):
        assert rank([(1, 2, 3), (2, 4, 6), (0, 0, 1)]) == 2

    def test_nullspace(self):
        ns = nullspace([(1, 1, 0)], 3)
        assert len(ns) == 2
        assert all(v[0] + v[1] == 0 for v in ns)


class TestRationalCone:
    def test_generators_normalised(self):
        C = plain([(2, 0), (0, 3), (1, 0), (0, 0)])
        assert C.generators == ((0, 1), (1, 0))

    def test_bad_length(self):
        with pytest.raises(DimensionMismatchError):
            RationalCone(2, ((1, 0, 0),))

    def test_bad_kind(self):
        with pytest.raises(PreconditionError):
            RationalCone(2, ((1, 0),), "weird")

    def test_orthant_self_dual(self):
        C = plain([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert cone_equal(C.dual, C)

    def test_square_pyramid(self):
        C = plain([(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)])
        D = C.dual
        assert set(D.generators) == {(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)}

    def test_redundant_generator_not_extremal(self):
        C = plain([(1, 0), (0, 1), (1, 1)])
        assert is_extremal(C, (1, 0)) and not is_extremal(C, (1, 1))

    def test_half_plane_lineality(self):
        C = plain([(1, 0), (-1, 0), (0, 1)])
        assert set(C.dual.generators) == {(0, 1)}

    def test_line_dual(self):
        C = plain([(1, 0), (-1, 0)])
        D = C.dual
        assert set(D.generators) == {(0, 1), (0, -1)}

    def test_divisor_curve_pairing(self):
        X = Space(2, 1)
        eff = RationalCone.from_classes([DivisorClass.exceptional(X, 1), DivisorClass(X, 1, (1,))])
        nef_curves = eff.dual
        assert nef_curves.kind == "curve"
        assert set(nef_curves.generators) == {CurveClass.line(X).vector, CurveClass.through(X, 1, (1,)).vector}

    def test_contains_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            cone_contains(plain([(1, 0)]), (1, 0, 0))

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            dual_cone(plain([(1,) * 12]), dim_cap=10)

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=7))
    @settings(max_examples=60, deadline=None)
    def test_biduality(self, gens):
        C = plain(gens, 3)
        if not C.generators:
            return
        assert cone_equal(C.dual.dual, C)

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=8),
           st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_generators_contained_and_dual_nonnegative(self, gens, v):
        C = plain(gens, 4)
        if not C.generators:
            return
        for g in C.generators:
            assert cone_contains(C, g)
            assert all(C.pair(g, h) >= 0 for h in C.dual.generators)
        if cone_contains(C, v):
            assert all(C.pair(v, h) >= 0 for h in C.dual.generators)


class TestMovingCones:
    def test_seeds_k0(self):
        X = Space(3, 6)
        assert ck_seeds(X, 0)[0] == CurveClass.line(X)

    def test_seed_range(self):
        with pytest.raises(PreconditionError):
            ck_seeds(Space(3, 6), 3)

    def test_x48_k3_special_seeds(self):
        seeds = ck_seeds(Space(4, 8), 3)
        assert CurveClass.through(Space(4, 8), 1, (1, 2)) in seeds

    @pytest.mark.parametrize("n,s,k", [(n, s, k) for n in (3, 4) for s in range(n + 1, n + 4) for k in range(1, n)])
    def test_table1_orbit_counts(self, n, s, k):
        report, _ = ck_generators(Space(n, s), k, extremal_flags=False)
        assert report.orbit_count == table1_orbit_count(n, s, k)

    def test_x48_counts(self):
        report, C = ck_generators(Space(4, 8), 1, extremal_flags=False)
        assert len(C.generators) == 2400

    def test_non_mds_requires_bound(self):
        with pytest.raises(UnsupportedSpaceError):
            ck_generators(Space(3, 9), 0)

    def test_dim_cap(self):
        with pytest.raises(ResourceCapError):
            ck_generators(Space(5, 10), 0, degree_bound=5)

    def test_extremal_flags(self):
        report, C = ck_generators(Space(3, 5), 1)
        assert report.extremal and all(report.extremal.values())
        assert report.to_json()["orbit_count"] == report.orbit_count

    def test_c_It(self):
        X = Space(3, 6)
        assert c_It(X, 0, 2, ()) == CurveClass(X, 7, (2,) * 6)


class TestDkCone:
    def test_curve_list_includes_secant_class(self):
        X = Space(3, 6)
        assert CurveClass(X, 7, (2,) * 6) in dk_curve_list(X, 0)

    def test_e_i_only_for_positive_k(self):
        X = Space(3, 6)
        assert CurveClass.exceptional(X, 1) not in dk_curve_list(X, 0)
        assert CurveClass.exceptional(X, 1) in dk_curve_list(X, 1)

    def test_unsupported(self):
        with pytest.raises(UnsupportedSpaceError):
            dk_curve_list(Space(3, 5), 0)
        with pytest.raises(UnsupportedSpaceError):
            dk_inequality_cone(Space(3, 5), 0)

    def test_k0_is_effective_cone(self):
        X = Space(3, 6)
        D0 = dk_inequality_cone(X, 0)
        assert cone_contains(D0, DivisorClass.exceptional(X, 1).vector)
        assert not cone_contains(D0, DivisorClass(X, 1, (2, 0, 0, 0, 0, 0)).vector)


class TestStrongDuality:
    @pytest.mark.parametrize("n,k", [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (4, 3)])
    def test_s_n_plus_3(self, n, k):
        rep = verify_strong_duality(Space(n, n + 3), k)
        assert rep.equal, rep.to_json()

    def test_x37_k0(self):
        assert verify_strong_duality(Space(3, 7), 0).equal

    def test_non_mds(self):
        with pytest.raises(UnsupportedSpaceError):
            verify_strong_duality(Space(3, 9), 0)
