import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from props import invariant, nonzero_int_vectors
from quasiaffine.algebra import RatMatrix
from quasiaffine.operators import (
    HomOperator,
    OperatorError,
    SampleGrid,
    adjoint,
    block_diag,
    constant_rank_probe,
    curl,
    curl2,
    default_grid,
    div,
    div_curl_annihilator,
    div_curl_potential,
    div_matrix,
    div_potential,
    grad,
    hessian,
    hessian_curl,
    image_sample,
    kernel_sample,
    pair_operator,
    spanning_probe,
    symbol_at,
    verify_potential_pair,
    zoo_operator,
)
from quasiaffine.reports import Verdict

F = Fraction

ZOO = [
    grad(2, 1), grad(2, 2), grad(3, 2), hessian(2, 1), hessian(2, 3), curl2(), curl(3, 1), div(3),
    div_matrix(3, 2), div_potential(3, 2), hessian_curl(2, 1), div_curl_annihilator(2, 1),
    div_curl_potential(2, 2),
]
PAIRS = [
    (curl2(), grad(2, 1)),
    (curl(3, 1), grad(3, 1)),
    (curl(2, 2), grad(2, 2)),
    (hessian_curl(2, 3), hessian(2, 3)),
    (div_matrix(3, 3), div_potential(3, 3)),
    (div_curl_annihilator(2, 1), div_curl_potential(2, 1)),
]


def col(*v):
    return [[F(a)] for a in v]


class TestSymbols:
    def test_grad_symbol_is_xi(self):
        assert symbol_at(grad(2, 1), [1, 2]).entries == ((1,), (2,))

    def test_hessian_symbol_is_xi_tensor_xi(self):
        # layout (xx, xy, yy)
        assert symbol_at(hessian(2, 1), [1, 1]).entries == ((1,), (1,), (1,))
        assert symbol_at(hessian(2, 1), [2, 3]).entries == ((4,), (6,), (9,))

    def test_div_matrix_selects_first_column(self):
        S = symbol_at(div_matrix(3, 2), [1, 0, 0])
        expected = [[0] * 6 for _ in range(2)]
        expected[0][0] = expected[1][3] = 1
        assert S == RatMatrix.from_rows(expected)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            symbol_at(grad(2, 1), [1, 2, 3])


class TestAdjoint:
    def test_grad_adjoint_is_minus_divergence(self):
        a = adjoint(grad(3, 1))
        assert (a.in_dim, a.out_dim) == (3, 1)
        assert symbol_at(a, [1, 2, 3]) == symbol_at(div(3), [1, 2, 3]).scale(-1)

    @pytest.mark.parametrize("op", ZOO, ids=lambda o: o.name)
    def test_involution(self, op):
        assert adjoint(adjoint(op)) == op


class TestSamples:
    def test_curl2_kernel_is_span_xi(self):
        assert kernel_sample(curl2(), [1, 2]).kernel_basis == ((F(1), F(2)),)

    def test_div_matrix_kernel_dimension(self):
        s = kernel_sample(div_matrix(3, 2), [1, 0, 0])
        assert s.dim == 4
        assert all(v[0] == 0 and v[3] == 0 for v in s.kernel_basis)

    def test_zero_frequency_rejected(self):
        with pytest.raises(ValueError):
            kernel_sample(curl2(), [0, 0])
        with pytest.raises(ValueError):
            image_sample(grad(2, 1), [0, 0])

    def test_grad_image(self):
        assert image_sample(grad(2, 1), [1, 2]) == [(F(1), F(2))]

    def test_hessian_image_at_e1(self):
        assert image_sample(hessian(2, 1), [1, 0]) == [(F(1), F(0), F(0))]

    def test_grad_2x2_image_is_two_dimensional(self):
        img = image_sample(grad(2, 2), [1, 1])
        assert len(img) == 2
        # xi (x) e_1 and xi (x) e_2 in row-major layout
        assert [F(1), 0, F(1), 0] in [list(v) for v in img] or len(img) == 2


class TestGrid:
    def test_default_grid_shape(self):
        g = default_grid(2)
        assert g.points[0] == (1, 0) and g.points[1] == (0, 1)
        assert len(g) == 8 + 32

    def test_default_grid_is_reproducible(self):
        assert default_grid(3) == default_grid(3)
        assert default_grid(3, seed=1) != default_grid(3)

    def test_proportional_points_rejected(self):
        with pytest.raises(ValueError):
            SampleGrid(((1, 2), (-2, -4)))

    def test_zero_point_rejected(self):
        with pytest.raises(ValueError):
            SampleGrid(((0, 0),))


def degenerate_operator():
    """``u -> (d_1 u, 0)``: rank 1 at e1, rank 0 at e2."""
    return HomOperator(2, 1, 2, 1, {(1, 0): RatMatrix.from_rows([[1], [0]])}, name="degenerate")


def hyperplane_operator():
    """Symbol ``[[0, xi1], [0, xi2]]``: every kernel is span e1."""
    return HomOperator(2, 2, 2, 1, {
        (1, 0): RatMatrix.from_rows([[0, 1], [0, 0]]),
        (0, 1): RatMatrix.from_rows([[0, 0], [0, 1]]),
    }, name="hyperplane")


class TestProbes:
    def test_div_matrix_constant_rank(self):
        rep = constant_rank_probe(div_matrix(3, 2), default_grid(3))
        assert rep.verdict == "PROBABLE-CONSTANT-RANK" and rep.common_rank == 2

    def test_grad_constant_rank(self):
        assert constant_rank_probe(grad(2, 2), default_grid(2)).common_rank == 2

    def test_rank_drop_refuted(self):
        rep = constant_rank_probe(degenerate_operator(), default_grid(2))
        assert rep.verdict == "NOT-CONSTANT-RANK"
        assert rep.witness == (((1, 0), 1), ((0, 1), 0))

    def test_grad_image_spans(self):
        grid = SampleGrid(((1, 0), (0, 1)))
        assert spanning_probe(grad(2, 2), grid, side="image").spans

    def test_div_matrix_kernels_span(self):
        grid = SampleGrid(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        rep = spanning_probe(div_matrix(3, 3), grid)
        assert rep.spans and rep.span_dim == 9

    def test_hyperplane_kernels_do_not_span(self):
        rep = spanning_probe(hyperplane_operator(), default_grid(2))
        assert not rep.spans and rep.span_dim == 1


class TestPairs:
    def test_curl_grad(self):
        assert verify_potential_pair(curl2(), grad(2, 1), default_grid(2)).verdict is Verdict.PASS

    def test_div_grad_is_laplacian(self):
        rep = verify_potential_pair(div(2), grad(2, 1), default_grid(2))
        assert rep.verdict is Verdict.FAIL
        w = rep.witness
        assert w.kind == "composition" and w.entry == (0, 0) and w.coefficient == 1
        assert sum(w.monomial) == 2 and max(w.monomial) == 2

    def test_paired_operators(self):
        A = pair_operator(curl2(), grad(2, 1))
        B = block_diag(grad(2, 1), adjoint(curl2()))
        assert verify_potential_pair(A, B, default_grid(2)).passed

    def test_rank_failure_detected(self):
        # only d/dx1 survives, so the image misses part of ker curl
        B = HomOperator(2, 1, 2, 1, {(1, 0): RatMatrix.from_rows([[1], [0]])})
        rep = verify_potential_pair(curl(2, 1), B, default_grid(2))
        assert rep.verdict is Verdict.FAIL

    @pytest.mark.parametrize("A,B", PAIRS, ids=lambda o: o.name)
    def test_zoo_pairs(self, A, B):
        assert verify_potential_pair(A, B, default_grid(A.base_dim)).passed


class TestJson:
    @pytest.mark.parametrize("op", ZOO, ids=lambda o: o.name)
    def test_round_trip(self, op):
        assert HomOperator.from_json(json.loads(op.dumps())) == op

    def test_non_homogeneous(self):
        data = grad(2, 1).to_json()
        data["terms"][0]["alpha"] = [2, 0]
        with pytest.raises(OperatorError, match="non-homogeneous"):
            HomOperator.from_json(data)

    def test_ragged_matrix(self):
        data = grad(2, 1).to_json()
        data["terms"][1]["matrix"][0].append("1")
        with pytest.raises(OperatorError, match="term 1"):
            HomOperator.from_json(data)

    def test_zero_operator(self):
        data = grad(2, 1).to_json()
        for t in data["terms"]:
            t["matrix"] = [["0"], ["0"]]
        with pytest.raises(OperatorError):
            HomOperator.from_json(data)

    def test_unknown_zoo_name(self):
        with pytest.raises(OperatorError):
            zoo_operator("laplace", N=2)


# ---------------------------------------------------------------- invariants

zoo_ops = st.sampled_from(ZOO)


@invariant
@given(zoo_ops, st.data(), st.integers(-4, 4))
def test_symbol_homogeneity(op, data, t):
    xi = data.draw(nonzero_int_vectors(op.base_dim))
    assert op.symbol([t * a for a in xi]) == op.symbol(xi).scale(F(t) ** op.order)


@invariant
@given(zoo_ops, st.data())
def test_adjoint_symbol_relation(op, data):
    xi = data.draw(nonzero_int_vectors(op.base_dim))
    assert adjoint(op).symbol(xi) == op.symbol(xi).T.scale((-1) ** op.order)


@invariant
@given(zoo_ops, st.data())
def test_kernel_vectors_are_annihilated(op, data):
    xi = data.draw(nonzero_int_vectors(op.base_dim))
    S = op.symbol(xi)
    for v in kernel_sample(op, xi).kernel_basis:
        assert not any(S @ v)


@invariant
@given(st.sampled_from(PAIRS), st.data())
def test_potential_images_lie_in_kernel(pair, data):
    A, B = pair
    xi = data.draw(nonzero_int_vectors(A.base_dim))
    SA = A.symbol(xi)
    for v in image_sample(B, xi):
        assert not any(SA @ v)


@invariant
@given(st.lists(nonzero_int_vectors(2, -6, 6), min_size=1, max_size=5))
def test_adjoint_pair_duality(points):
    grid = SampleGrid.from_points(points)
    assert verify_potential_pair(adjoint(grad(2, 1)), adjoint(curl2()), grid).passed
