"""Tests for exact vertex enumeration, decomposition, and cross-checks."""

from fractions import Fraction

import pytest

from blockstoch.errors import (
    ConditionsViolatedError,
    InstanceTooLargeError,
    NotStochasticError,
)
from blockstoch.family import WeightFunction, build_family
from blockstoch.oracle import (
    cross_validate,
    decompose,
    enumerate_vertices,
    is_vertex,
    sup_block_norm,
    support_width,
)

F = Fraction
HALF = F(1, 2)


def matrix_family(m):
    rows = [[m * r + c + 1 for c in range(m)] for r in range(m)]
    cols = [[m * r + c + 1 for r in range(m)] for c in range(m)]
    return build_family(rows + cols)


class TestEnumerateVertices:
    def test_single_segment(self):
        fam = build_family([[1, 2]])
        vertices = enumerate_vertices(fam)
        assert {v.items() for v in vertices} == {
            ((1, F(1)),),
            ((2, F(1)),),
        }

    def test_odd_cycle_has_single_half_vertex(self):
        fam = build_family([[1, 2], [2, 3], [3, 1]])
        vertices = enumerate_vertices(fam)
        assert len(vertices) == 1
        assert dict(vertices[0].items()) == {1: HALF, 2: HALF, 3: HALF}

    def test_two_by_two_matrix(self):
        fam = matrix_family(2)
        vertices = enumerate_vertices(fam)
        assert len(vertices) == 2
        assert all(v.zero_one for v in vertices)

    def test_empty_polytope(self):
        rows = [[1, 2, 3], [4, 5, 6]]
        cols = [[1, 4], [2, 5], [3, 6]]
        fam = build_family(rows + cols)
        assert enumerate_vertices(fam) == ()

    def test_budget_exhaustion(self):
        fam = matrix_family(3)
        with pytest.raises(InstanceTooLargeError):
            enumerate_vertices(fam, budget=4)

    def test_jobs_do_not_change_output(self):
        fam = matrix_family(3)
        serial = enumerate_vertices(fam, jobs=1)
        parallel = enumerate_vertices(fam, jobs=2)
        assert serial == parallel

    def test_deterministic_order(self):
        fam = matrix_family(3)
        assert enumerate_vertices(fam) == enumerate_vertices(fam)


class TestIsVertex:
    def test_vertex_recognized(self):
        fam = build_family([[1, 2], [2, 3], [3, 1]])
        w = WeightFunction({1: HALF, 2: HALF, 3: HALF})
        assert is_vertex(fam, w)

    def test_interior_point_rejected(self):
        fam = build_family([[1, 2]])
        assert not is_vertex(fam, WeightFunction({1: F(1, 3), 2: F(2, 3)}))

    def test_non_member_rejected(self):
        fam = build_family([[1, 2]])
        with pytest.raises(NotStochasticError):
            is_vertex(fam, WeightFunction({1: F(2)}))


class TestDecompose:
    def test_vertex_decomposes_to_itself(self):
        fam = build_family([[1, 2], [2, 3], [3, 1]])
        w = WeightFunction({1: HALF, 2: HALF, 3: HALF})
        combo = decompose(fam, w)
        assert len(combo.terms) == 1
        assert combo.terms[0][0] == F(1)
        assert combo.terms[0][1] == w

    def test_segment_midpoint(self):
        fam = build_family([[1, 2]])
        w = WeightFunction({1: HALF, 2: HALF})
        combo = decompose(fam, w)
        assert sorted(c for c, _ in combo.terms) == [HALF, HALF]
        assert combo.combined() == w

    def test_matrix_mixture(self):
        fam = matrix_family(3)
        w = WeightFunction({g: F(1, 3) for g in fam.ground})
        combo = decompose(fam, w)
        assert combo.combined() == w
        assert sum((c for c, _ in combo.terms), F(0)) == 1
        assert all(c > 0 for c, _ in combo.terms)
        assert all(is_vertex(fam, v) for _, v in combo.terms)

    def test_coefficients_sorted_descending(self):
        fam = build_family([[1, 2]])
        w = WeightFunction({1: F(1, 4), 2: F(3, 4)})
        combo = decompose(fam, w)
        coefs = [c for c, _ in combo.terms]
        assert coefs == sorted(coefs, reverse=True)

    def test_non_member_rejected(self):
        fam = build_family([[1, 2], [2, 3], [3, 1]])
        w = WeightFunction({1: HALF, 2: HALF, 3: F(3, 4)})
        with pytest.raises(NotStochasticError, match="block 2 sums to 5/4"):
            decompose(fam, w)


class TestCrossValidate:
    def test_matrix_family_agrees(self):
        report = cross_validate(matrix_family(3), samples=5, seed=7)
        assert report.ok
        assert report.vertex_count == 6
        assert report.samples_checked == 5

    def test_single_vertex_family(self):
        fam = build_family([[1, 2], [2, 3], [3, 1]])
        report = cross_validate(fam, samples=5, seed=0)
        assert report.ok
        assert report.vertex_count == 1

    def test_high_multiplicity_rejected(self):
        fam = build_family([[0, 1, 2], [0, 2, 3], [0, 3, 4]])
        with pytest.raises(ConditionsViolatedError):
            cross_validate(fam)


class TestNorms:
    def test_sup_block_norm(self):
        fam = build_family([[1, 2], [3, 4]])
        w = WeightFunction({1: F(1, 4), 2: F(-1, 4), 3: F(1, 8)})
        assert sup_block_norm(fam, w) == HALF

    def test_support_width(self):
        fam = build_family([[1, 2, 3], [3, 4]])
        assert support_width(fam, WeightFunction({1: F(1), 2: F(1)})) == 2
        assert support_width(fam, WeightFunction({4: F(1)})) == 1
        assert support_width(fam, WeightFunction.zero()) == 0
