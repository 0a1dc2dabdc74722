import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from weylcycles.cycles import (CycleDegrees, Join, binom, check_witness, classify_weyl_planes, curve_decomposition,
                               intersection_bookkeeping, intersection_decomposition, is_orthogonal, join_cycle_degrees,
                               joins_of_dimension, kappa, kappa_weyl, sweeping_curve, weyl_cycle_witness, weyl_divisor)
from weylcycles.errors import InvalidJoinError, NotOrthogonalError, PreconditionError
from weylcycles.lattice import CurveClass, DivisorClass, Space, anticanonical_curve, anticanonical_divisor, intersect
from weylcycles.weyl import apply_word


def secant_joins(n):
    X = Space(n, n + 3)
    return [J for r in range(0, n) for J in joins_of_dimension(X, r)] if n else []


class TestBinom:
    @pytest.mark.parametrize("a,b,v", [(5, 0, 1), (-3, 0, 1), (4, -1, 0), (2, 3, 0), (6, 2, 15)])
    def test_conventions(self, a, b, v):
        assert binom(a, b) == v


class TestJoin:
    def test_dimension(self):
        assert Join(Space(5, 8), (1, 2), 1).r == 3
        assert Join(Space(4, 7), (1, 2, 3, 4), 0).is_divisor
        assert not Join(Space(4, 7), (1, 2, 3), 0).is_divisor

    @pytest.mark.parametrize("I,t,s", [((), 0, 8), ((1, 1), 0, 8), ((1,), -1, 8), ((1,), 1, 7), ((1, 2, 3, 4), 1, 8), ((9,), 0, 8)])
    def test_invalid(self, I, t, s):
        with pytest.raises(InvalidJoinError):
            Join(Space(5, s), I, t)

    def test_json_roundtrip(self):
        X = Space(5, 8)
        J = Join(X, (3, 1), 1)
        assert J.I == (1, 3)
        assert Join.from_json(X, J.to_json()) == J


class TestWeylDivisor:
    def test_hyperplane_through_points(self):
        X = Space(3, 6)
        assert weyl_divisor(X, (1, 2, 3), 0) == DivisorClass(X, 1, (1, 1, 1, 0, 0, 0))

    def test_secant_divisor(self):
        # quadric cone over the twisted cubic with vertex at p1
        X = Space(3, 6)
        assert weyl_divisor(X, (1,), 1) == DivisorClass(X, 2, (2, 1, 1, 1, 1, 1))

    def test_size_check(self):
        with pytest.raises(InvalidJoinError):
            weyl_divisor(Space(3, 6), (1, 2), 0)

    def test_divisor_class_requires_dim(self):
        with pytest.raises(InvalidJoinError):
            Join(Space(3, 6), (1, 2), 0).divisor_class()

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_all_are_minus_one_like(self, n):
        X = Space(n, n + 3)
        for J in joins_of_dimension(X, n - 1):
            D = J.divisor_class()
            c = sweeping_curve(J)
            assert intersect(D, c) == -1
            # same pairing with F as E_1, since F is Weyl invariant
            assert intersect(D, anticanonical_curve(X)) == intersect(DivisorClass.exceptional(X, 1), anticanonical_curve(X))


class TestSweepingCurve:
    def test_linear(self):
        X = Space(4, 7)
        assert sweeping_curve(Join(X, (1, 2, 3), 0)) == CurveClass.through(X, 2, (1, 2, 3))

    def test_secant_line(self):
        X = Space(3, 6)
        assert sweeping_curve(Join(X, (), 1)) == CurveClass(X, 3, (1,) * 6)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_anticanonical_degree(self, n):
        # -K . c is constant on each r, equal to its value on an r-plane through r+1 points
        X = Space(n, n + 3)
        for r in range(1, n):
            for J in joins_of_dimension(X, r):
                assert intersect(anticanonical_divisor(X), sweeping_curve(J)) == (n + 1) * r - (n - 1) * (r + 1)


class TestKappa:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_closed_form_matches_pairing(self, n):
        X = Space(n, n + 3)
        divisors = joins_of_dimension(X, n - 1)
        for W in divisors:
            D = W.divisor_class()
            for V in secant_joins(n):
                assert kappa_weyl(W, V) == kappa(V, D) == -intersect(D, sweeping_curve(V))

    def test_self_kappa(self):
        X = Space(4, 7)
        W = Join(X, (1, 2, 3, 4), 0)
        assert kappa(W, W.divisor_class()) == 1

    def test_space_mismatch(self):
        with pytest.raises(PreconditionError):
            kappa(Join(Space(3, 6), (1,), 0), DivisorClass.hyperplane(Space(3, 5)))


class TestIntersection:
    def _pairs(self, n):
        X = Space(n, n + 3)
        for W in joins_of_dimension(X, n - 1):
            for V in secant_joins(n):
                if V.r >= 1 and is_orthogonal(V, W.divisor_class()):
                    yield W, V

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_components_have_right_dimension(self, n):
        for W, V in self._pairs(n):
            for J in intersection_decomposition(W, V):
                assert J.r == V.r - 1

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_bookkeeping_matches_sum(self, n):
        count = 0
        for W, V in self._pairs(n):
            comps = intersection_decomposition(W, V)
            total = CycleDegrees(V.r - 1, 0, (0,) * (n + 3))
            for J in comps:
                total = total + join_cycle_degrees(J)
            assert total == intersection_bookkeeping(W, V)
            count += 1
        assert count > 0

    def test_not_orthogonal(self):
        X = Space(3, 6)
        W = Join(X, (1, 2, 3), 0)
        with pytest.raises(NotOrthogonalError):
            intersection_decomposition(W, Join(X, (1, 2), 0))

    def test_secant_line_meets_hyperplane(self):
        X = Space(3, 6)
        W = Join(X, (1, 2, 4), 0)
        comps = intersection_decomposition(W, Join(X, (), 1))
        assert comps == [Join(X, (1,), 0), Join(X, (2,), 0), Join(X, (4,), 0)]
        assert intersection_decomposition(W, Join(X, (3, 4), 0)) == [Join(X, (4,), 0)]


class TestCurveDecomposition:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_pieces_are_zero_weyl_lines(self, n):
        X = Space(n, n + 3)
        K = anticanonical_divisor(X)
        joins = secant_joins(n)
        checked = 0
        for V, W in itertools.product(joins, joins):
            try:
                cW, pieces = curve_decomposition(V, W)
            except PreconditionError:
                continue
            checked += 1
            assert cW == sweeping_curve(W)
            for p in pieces:
                assert intersect(K, p) == 2
                assert p.delta in (1, n)
        assert checked > 0

    def test_unreachable(self):
        X = Space(3, 6)
        with pytest.raises(PreconditionError):
            curve_decomposition(Join(X, (1,), 0), Join(X, (2,), 0))


class TestWitness:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_all_joins(self, n):
        for V in secant_joins(n):
            w = weyl_cycle_witness(V)
            assert check_witness(w)
            assert len(w.divisors) == n + 1 - 2 * V.t - len(V.I)
            assert sorted(w.relabeling) == list(range(1, n + 4))

    def test_broken_witness_detected(self):
        X = Space(3, 6)
        w = weyl_cycle_witness(Join(X, (1,), 0))
        bad = type(w)(w.join, w.divisors + (DivisorClass.hyperplane(X),), w.relabeling)
        assert not check_witness(bad)


class TestClassify:
    @pytest.mark.parametrize("n,s,r,count", [
        (3, 6, 1, 15 + 1), (3, 6, 2, 20 + 6 + 6),
        (4, 7, 2, 42), (4, 7, 3, 64),
        (2, 5, 1, 16),
    ])
    def test_counts(self, n, s, r, count):
        planes = classify_weyl_planes(Space(n, s), r)
        assert len(planes) == count

    @pytest.mark.parametrize("n,s", [(3, 4), (3, 5), (4, 5), (4, 6), (5, 7), (5, 8)])
    def test_cross_check_runs(self, n, s):
        for r in range(1, n):
            planes = classify_weyl_planes(Space(n, s), r)
            assert all(p.provenance == "closed-form" for p in planes)

    def test_witness_words(self):
        for p in classify_weyl_planes(Space(4, 7), 2):
            assert apply_word(p.seed, p.witness) == p.sweeping_curve
            assert p.join is not None and sweeping_curve(p.join) == p.sweeping_curve

    def test_large_s_uses_bfs(self):
        planes = classify_weyl_planes(Space(3, 7), 1)
        assert planes and all(p.provenance == "orbit-bfs" for p in planes)

    def test_r_range(self):
        with pytest.raises(PreconditionError):
            classify_weyl_planes(Space(3, 6), 3)

    def test_json(self):
        p = classify_weyl_planes(Space(3, 6), 1)[-1]
        obj = p.to_json()
        assert obj["curve"] == list(p.sweeping_curve.vector) and "join" in obj
