import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from props import field_family, integrands, invariant, mixed_2x2_integrands, polys, rat_vectors, rationals, torus_invariant
from quasiaffine import kernels
from quasiaffine.algebra import RatMatrix, SparsePoly
from quasiaffine.integrands import PolyIntegrand, bco_l, det, dot, homogeneous_parts, norm_squared
from quasiaffine.operators import (
    SampleGrid,
    curl2,
    default_grid,
    div_curl_annihilator,
    div_curl_potential,
    div_potential,
    grad,
    hessian,
)
from quasiaffine.quasiaffinity import (
    CheckConfig,
    DegreeWarning,
    lambda_affine_check,
    quadratic_integrand,
    quadratic_vanishing_basis,
    quasiaffine_check,
    quasiaffine_necessary_from_a,
    witness_value,
)
from quasiaffine.operators import normalize_direction
from quasiaffine.reports import CheckReport, DimensionError, Verdict

F = Fraction
PASS, FAIL = Verdict.PASS, Verdict.FAIL


class TestQuasiaffineCheck:
    def test_det_grad(self):
        rep = quasiaffine_check(det(2), grad(2, 2))
        assert rep.verdict is PASS and rep.checked_orders == [2]

    def test_bco_fails_at_order_three(self):
        B = hessian(2, 3)
        rep = quasiaffine_check(bco_l(), B)
        assert rep.verdict is FAIL
        w = rep.witness
        assert w.r == 3 and w.kind == "potential"
        dirs = {normalize_direction([int(a) for a in xi]) for xi in w.frequencies}
        assert dirs == {(1, 0), (0, 1), (1, 1)}
        eta = tuple(sum(l * xi[c] for l, xi in zip(w.lambdas, w.frequencies[:-1])) for c in range(2))
        assert eta == w.frequencies[-1]
        assert witness_value(bco_l(), B, w) == w.value != 0

    def test_norm_squared_fails_at_order_two(self):
        rep = quasiaffine_check(norm_squared(4), grad(2, 2))
        assert rep.verdict is FAIL and rep.witness.r == 2

    def test_dot_under_div_curl_potential(self):
        assert quasiaffine_check(dot(2), div_curl_potential(2, 1)).passed
        assert quasiaffine_check(dot(4), div_curl_potential(2, 2)).passed

    def test_affine_passes_immediately(self):
        f = PolyIntegrand(4, SparsePoly.variable(4, 0) * 3 + 1)
        rep = quasiaffine_check(f, grad(2, 2))
        assert rep.passed and "affine" in rep.certificate[0]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            quasiaffine_check(det(2), grad(3, 2))

    def test_degree_warning(self):
        x = SparsePoly.variable(4, 0)
        f = PolyIntegrand(4, x**5)
        with pytest.warns(DegreeWarning):
            rep = quasiaffine_check(f, grad(2, 2))
        assert rep.verdict is FAIL

    def test_ceiling_gives_inconclusive(self):
        rep = quasiaffine_check(bco_l(), hessian(2, 3), CheckConfig(max_evals=100))
        assert rep.verdict is Verdict.INCONCLUSIVE
        assert any("ceiling" in c for c in rep.certificate)

    def test_randomized_mode(self):
        cfg = CheckConfig(mode="randomized", trials=5)
        assert quasiaffine_check(det(2), grad(2, 2), cfg).verdict is Verdict.PROBABLE_PASS
        rep = quasiaffine_check(bco_l(), hessian(2, 3), cfg)
        assert rep.verdict is FAIL and witness_value(bco_l(), hessian(2, 3), rep.witness) == rep.witness.value

    def test_backends_and_threads_agree(self, monkeypatch):
        base = quasiaffine_check(bco_l(), hessian(2, 3)).dumps()
        assert quasiaffine_check(bco_l(), hessian(2, 3), CheckConfig(workers=3)).dumps() == base
        monkeypatch.setattr(kernels, "BACKEND", "python")
        assert quasiaffine_check(bco_l(), hessian(2, 3)).dumps() == base

    def test_report_round_trip(self):
        rep = quasiaffine_check(bco_l(), hessian(2, 3))
        assert CheckReport.from_json(rep.to_json()).dumps() == rep.dumps()


class TestLambdaAffine:
    def test_bco_is_cone_affine(self):
        assert lambda_affine_check(bco_l(), hessian(2, 3)).passed

    def test_det(self):
        assert lambda_affine_check(det(2), grad(2, 2)).passed

    def test_norm_squared(self):
        rep = lambda_affine_check(norm_squared(4), grad(2, 2))
        assert rep.verdict is FAIL
        assert witness_value(norm_squared(4), grad(2, 2), rep.witness) == rep.witness.value != 0

    def test_randomized(self):
        cfg = CheckConfig(mode="randomized", trials=3)
        assert lambda_affine_check(bco_l(), hessian(2, 3), cfg).verdict is Verdict.PROBABLE_PASS


class TestFromAnnihilator:
    def test_dot_pairing(self):
        rep = quasiaffine_necessary_from_a(dot(2), div_curl_annihilator(2, 1), default_grid(2))
        assert rep.verdict is Verdict.NECESSARY_CONDITIONS_HOLD

    def test_norm_squared_curl(self):
        rep = quasiaffine_necessary_from_a(norm_squared(2), curl2(), default_grid(2))
        assert rep.verdict is FAIL and rep.witness.r == 2
        assert witness_value(norm_squared(2), curl2(), rep.witness) == rep.witness.value

    def test_affine_vacuous(self):
        f = PolyIntegrand(2, SparsePoly.variable(2, 1) - 4)
        assert quasiaffine_necessary_from_a(f, curl2(), default_grid(2)).verdict is Verdict.NECESSARY_CONDITIONS_HOLD

    def test_bco_refuted_from_annihilator_side(self):
        from quasiaffine.operators import hessian_curl

        rep = quasiaffine_necessary_from_a(bco_l(), hessian_curl(2, 3), default_grid(2))
        assert rep.verdict is FAIL and rep.witness.r == 3


class TestQuadBasis:
    def test_grad_gives_det(self):
        qb = quadratic_vanishing_basis(grad(2, 2), default_grid(2))
        det_form = RatMatrix.from_rows([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
        assert qb.forms == [det_form] and qb.definitive

    def test_divergence_cone_is_rigid(self):
        assert quadratic_vanishing_basis(div_potential(3, 3), default_grid(3)).forms == []

    def test_pairing_contains_dot(self):
        qb = quadratic_vanishing_basis(div_curl_potential(2, 1), default_grid(2))
        Q = quadratic_integrand(RatMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]))
        assert Q.poly == dot(2).poly * 2
        from quasiaffine.algebra import span_basis

        flat = [[a for row in q.entries for a in row] for q in qb.forms]
        target = [F(1, 2) * a for row in ([0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]) for a in row]
        assert len(span_basis(flat + [target], 16)) == len(flat)

    def test_small_grid_rejects_spurious_forms(self):
        qb = quadratic_vanishing_basis(grad(2, 2), SampleGrid(((1, 0),)))
        assert qb.rejected and not qb.definitive
        assert all(lambda_affine_check(quadratic_integrand(Q), grad(2, 2)).passed for Q in qb.forms)


# ---------------------------------------------------------------- invariants

B22 = grad(2, 2)
FIRST_ORDER = [grad(2, 2), grad(2, 1), div_potential(2, 1), div_curl_potential(2, 1)]
ORACLE_FAMILY = field_family(2, 2, 4, 6, seed=7)
ORACLE_ENRICHED = field_family(2, 2, 4, 40, seed=8, enriched=True)


@invariant
@given(mixed_2x2_integrands())
def test_fail_witnesses_reproduce(f):
    rep = quasiaffine_check(f, B22)
    if rep.verdict is FAIL:
        assert witness_value(f, B22, rep.witness) == rep.witness.value != 0


@invariant
@given(st.sampled_from([(4, grad(2, 2)), (3, hessian(2, 1)), (6, grad(3, 2))]), st.data())
def test_quasiaffine_implies_cone_affine(case, data):
    d, B = case
    f = data.draw(integrands(d, max_degree=3, max_terms=4))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeWarning)
        if quasiaffine_check(f, B).passed:
            assert lambda_affine_check(f, B).passed


@invariant
@given(st.sampled_from(FIRST_ORDER), st.data())
def test_first_order_collapse(B, data):
    f = PolyIntegrand(B.out_dim, data.draw(polys(B.out_dim, 2, 5)))
    if B.out_dim == 4 and data.draw(st.booleans()):
        f = PolyIntegrand(4, f.poly + det(2).poly)
    assert quasiaffine_check(f, B).verdict == lambda_affine_check(f, B).verdict


@invariant
@given(mixed_2x2_integrands())
def test_homogeneous_grading(f):
    whole = quasiaffine_check(f, B22).passed
    assert whole == all(quasiaffine_check(p, B22).passed for p in homogeneous_parts(f))


@invariant
@given(mixed_2x2_integrands(), rationals.filter(bool), rat_vectors(4))
def test_scale_and_shift_invariance(f, c, shift):
    v = quasiaffine_check(f, B22).verdict
    assert quasiaffine_check(f.scaled(c), B22).verdict == v
    assert quasiaffine_check(f.shifted(shift), B22).verdict == v


@invariant
@given(mixed_2x2_integrands())
def test_torus_oracle_agreement(f):
    passed = quasiaffine_check(f, B22).passed
    invariant_on_family, _ = torus_invariant(f, B22, ORACLE_FAMILY)
    if passed:
        assert invariant_on_family
    else:
        assert not torus_invariant(f, B22, ORACLE_FAMILY + ORACLE_ENRICHED)[0]
