import numpy as np
import pytest

from tklab.errors import ContainmentError, DimensionMismatch
from tklab.hardy_core import CoeffVec, inner_product, reproducing_column
from tklab.operators import build_toeplitz
from tklab.subspaces import (Subspace, full_space, intersect, is_contained,
                             nullspace, ortho_complement_within, project,
                             span_of, subspace_equal, vanishing_at_zero_space,
                             zero_at_origin_slice, zero_space)
from tklab.symbols import LaurentMatrixSymbol, symbol_adjoint

from conftest import rand_coeffvec, unit


def span_monomials(m, N, pairs):
    return span_of([CoeffVec.monomial(m, N, c, d) for c, d in pairs])


class TestNullspace:
    def test_zero_matrix_full_ambient(self):
        ns = nullspace(np.zeros((4, 6)), (2, 3))
        assert ns.dim == 6
        assert ns.sigma_gap.ratio == 0.0

    def test_identity_trivial(self):
        ns = nullspace(np.eye(6), (2, 3))
        assert ns.dim == 0

    def test_backward_shift_kernel_is_constants(self):
        # P(zbar f) = 0 iff f constant; the oracle is the hand computation
        comp = build_toeplitz(symbol_adjoint(LaurentMatrixSymbol.shift(1)), 4)
        ns = nullspace(comp.matrix, (1, 4))
        assert ns.dim == 1
        vec = ns.basis_vectors()[0]
        assert abs(abs(vec.coeffs[0, 0]) - 1.0) < 1e-12
        assert np.allclose(vec.coeffs[0, 1:], 0)

    def test_sigma_gap_reported(self, rng):
        A = np.diag([1.0, 1.0, 1e-14])
        ns = nullspace(A, (1, 3))
        assert ns.dim == 1
        assert ns.sigma_gap.zero_side == pytest.approx(1e-14)
        assert ns.sigma_gap.signal_side == pytest.approx(1.0)
        assert ns.sigma_gap.ratio < 1e-3


class TestSpan:
    def test_duplicates_collapse(self):
        e1 = CoeffVec.monomial(2, 3, 0, 0)
        assert span_of([e1, e1]).dim == 1

    def test_independent_pair(self):
        assert span_monomials(2, 3, [(0, 0), (1, 0)]).dim == 2

    def test_noise_collapses_at_tolerance(self):
        a = CoeffVec([[1.0, 0.0]])
        b = CoeffVec([[1.0, 1e-14]])
        assert span_of([a, b], tol_rel=1e-10).dim == 1

    def test_all_zero_input(self):
        assert span_of([CoeffVec.zeros(2, 3)]).dim == 0

    def test_empty_rejected(self):
        with pytest.raises(DimensionMismatch):
            span_of([])

    def test_floor_suppresses_noise_directions(self):
        tiny = CoeffVec([[1e-12, 0.0]])
        assert span_of([tiny], floor=1e-8).dim == 0
        assert span_of([tiny]).dim == 1


class TestComplementAndIntersection:
    def test_complement_of_self_is_zero(self):
        M = span_monomials(1, 3, [(0, 0), (0, 1)])
        assert ortho_complement_within(M, M).dim == 0

    def test_complement_of_zero_is_m(self):
        M = span_monomials(1, 3, [(0, 0), (0, 1)])
        out = ortho_complement_within(M, zero_space(1, 3))
        ok, _ = subspace_equal(out, M)
        assert ok

    def test_monomial_complement(self):
        M = span_monomials(1, 4, [(0, 0), (0, 1)])
        A = span_monomials(1, 4, [(0, 1)])
        out = ortho_complement_within(M, A)
        ok, _ = subspace_equal(out, span_monomials(1, 4, [(0, 0)]))
        assert ok

    def test_not_contained_raises(self):
        M = span_monomials(1, 4, [(0, 0)])
        A = span_monomials(1, 4, [(0, 1)])
        with pytest.raises(ContainmentError):
            ortho_complement_within(M, A)

    def test_intersection_examples(self):
        m, N = 1, 4
        e = lambda d: (0, d)
        A = span_monomials(m, N, [e(0), e(1)])
        B = span_monomials(m, N, [e(1), e(2)])
        mid = intersect(A, B)
        ok, _ = subspace_equal(mid, span_monomials(m, N, [e(1)]))
        assert ok
        assert intersect(span_monomials(m, N, [e(0)]),
                         span_monomials(m, N, [e(1)])).dim == 0
        self_int = intersect(A, A)
        ok, _ = subspace_equal(self_int, A)
        assert ok

    def test_intersection_contained_in_both(self, rng):
        m, N = 2, 5
        A = span_of([rand_coeffvec(rng, m, N, 4) for _ in range(4)])
        B = span_of([rand_coeffvec(rng, m, N, 4) for _ in range(4)])
        mid = intersect(A, B)
        ok_a, _ = is_contained(mid, A, 1e-8)
        ok_b, _ = is_contained(mid, B, 1e-8)
        assert ok_a and ok_b


class TestProjection:
    def test_member_fixed(self, rng):
        M = span_of([rand_coeffvec(rng, 2, 4, 3) for _ in range(3)])
        F = M.basis_vectors()[0]
        assert (project(F, M) - F).norm() < 1e-12

    def test_orthogonal_killed(self):
        M = span_monomials(2, 3, [(0, 0)])
        F = CoeffVec.monomial(2, 3, 1, 0)
        assert project(F, M).norm() < 1e-14

    def test_reproducing_column_projection_formula(self, rng):
        # project the evaluation columns onto the complement of one unit
        # vector: the closed form has entries -conj(g_i(0)) g_t + delta
        m, N = 3, 6
        G = unit(rand_coeffvec(rng, m, N, 4))
        M = span_of([G]).perp()
        for i in range(m):
            col = reproducing_column(m, N, i)
            got = project(col, M)
            expected = col - complex(np.conj(G.coeffs[i, 0])) * G
            assert (got - expected).norm() < 1e-12

    def test_idempotent(self, rng):
        M = span_of([rand_coeffvec(rng, 2, 5, 4) for _ in range(3)])
        F = rand_coeffvec(rng, 2, 5, 5)
        once = project(F, M)
        twice = project(once, M)
        assert (once - twice).norm() < 1e-12
        # residual is orthogonal to M
        resid = F - once
        for b in M.basis_vectors():
            assert abs(inner_product(resid, b)) < 1e-10


class TestContainment:
    def test_reflexive(self, rng):
        A = span_of([rand_coeffvec(rng, 2, 4, 3) for _ in range(2)])
        ok, resid = is_contained(A, A, 1e-10)
        assert ok and resid < 1e-12

    def test_disjoint_lines(self):
        a = span_monomials(2, 3, [(0, 0)])
        b = span_monomials(2, 3, [(1, 0)])
        ok, resid = is_contained(a, b, 1e-8)
        assert not ok and resid == pytest.approx(1.0)

    def test_tolerance_semantics(self):
        eps = 1e-12
        tilted = span_of([CoeffVec([[1.0, eps], [0, 0]])])
        target = span_monomials(2, 2, [(0, 0)])
        ok, _ = is_contained(tilted, target, 1e-8)
        assert ok

    def test_grassmann_triangle(self, rng):
        # two containments at tolerance compose at twice the tolerance
        m, N, tol = 2, 5, 1e-8
        C = span_of([rand_coeffvec(rng, m, N, 4) for _ in range(6)])
        B_vecs = [project(rand_coeffvec(rng, m, N, 4), C) for _ in range(4)]
        B = span_of(B_vecs)
        A_vecs = [project(rand_coeffvec(rng, m, N, 4), B) for _ in range(2)]
        A = span_of(A_vecs)
        ok_ab, _ = is_contained(A, B, tol)
        ok_bc, _ = is_contained(B, C, tol)
        ok_ac, _ = is_contained(A, C, 2 * tol)
        assert ok_ab and ok_bc and ok_ac


class TestSliceAndAmbient:
    def test_slice_examples(self):
        M = span_monomials(1, 3, [(0, 0), (0, 1)])
        sl = zero_at_origin_slice(M)
        ok, _ = subspace_equal(sl, span_monomials(1, 3, [(0, 1)]))
        assert ok

        M2 = span_monomials(1, 4, [(0, 2)])
        ok, _ = subspace_equal(zero_at_origin_slice(M2), M2)
        assert ok

        M3 = span_of([CoeffVec([[1.0, 1.0]])])  # 1 + z
        assert zero_at_origin_slice(M3).dim == 0

    def test_slice_members_vanish_and_belong(self, rng):
        M = span_of([rand_coeffvec(rng, 2, 5, 5) for _ in range(5)])
        sl = zero_at_origin_slice(M)
        for F in sl.basis_vectors():
            assert np.linalg.norm(F.coeffs[:, 0]) < 1e-10
        ok, _ = is_contained(sl, M, 1e-10)
        assert ok

    def test_dimension_split(self, rng):
        m, N = 2, 4
        M = span_of([rand_coeffvec(rng, m, N, 4) for _ in range(3)])
        assert M.dim + M.perp().dim == m * N

    def test_vanishing_space(self):
        V = vanishing_at_zero_space(2, 4)
        assert V.dim == 6
        for F in V.basis_vectors():
            assert np.linalg.norm(F.coeffs[:, 0]) == 0

    def test_report_json(self, rng):
        M = span_of([rand_coeffvec(rng, 1, 3, 2)])
        payload = M.report_json()
        assert payload["dim"] == 1
        assert len(payload["sigma_gap"]) == 2
        assert len(payload["basis"]) == 1

    def test_basis_orthonormality_enforced(self):
        bad = np.ones((4, 2), dtype=complex)
        with pytest.raises(ValueError):
            Subspace(2, 2, bad, 0.0)

    def test_full_space(self):
        assert full_space(2, 3).dim == 6
