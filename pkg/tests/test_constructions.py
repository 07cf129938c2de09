"""Fixture catalog, prolongation lift calculus, products and restrictions."""

import pytest

from algebroids.algebroid import bracket, validate_structure
from algebroids.connections import cov_deriv, hermitian_check
from algebroids.constructions import (
    CATALOG_NAMES,
    direct_product,
    fixture,
    fixture_names,
    projector_restriction,
)
from algebroids.jstruct import EndoField
from algebroids.scalars import Chart


def test_fixture_catalog():
    assert fixture_names() == CATALOG_NAMES + ["heis_broken"]
    with pytest.raises(KeyError):
        fixture("no_such_fixture")


def test_composite_fixture_syntax():
    fx = fixture("product(flat_r2, heis_j)")
    assert fx.product is not None
    assert fx.algebroid.rank == 6
    assert fx.J is not None and fx.g is not None
    assert validate_structure(fx.algebroid).valid
    fx = fixture("prolong(heis_j)")
    assert fx.prolongation is not None
    assert fx.algebroid.rank == 8
    sq = fx.J.compose(fx.J) + EndoField.identity(fx.algebroid)
    assert sq.is_structurally_zero()


def test_function_lifts(cache):
    p = cache.prolongation("flat_r2")
    fv = p.function_vertical_lift("x1 * x2")
    assert (fv - p.chart.scalar("x1 * x2")).normalize().is_structurally_zero()
    # with the identity anchor, x1^c is the first fibre coordinate
    fc = p.function_complete_lift("x1")
    assert (fc - p.chart.scalar(p.y[0])).normalize().is_structurally_zero()


def test_lift_bracket_laws(cache):
    p = cache.prolongation("heis_j")
    assert all(res.is_structurally_zero()
               for _, res in p.lift_law_residuals)


def test_complete_lift_endo_laws(cache):
    p = cache.prolongation("heis_j")
    fx = cache.fx("heis_j")
    Jc = p.complete_lift_endo(fx.J)
    sq = Jc.compose(Jc) + EndoField.identity(p.algebroid)
    assert sq.is_structurally_zero()
    # J^c of a vertical lift is the vertical lift of the image
    for a in range(fx.algebroid.rank):
        ea = fx.algebroid.frame_section(a)
        res = Jc.apply(p.vertical_lift(ea)) - p.vertical_lift(fx.J.apply(ea))
        assert res.normalized().is_structurally_zero()


def test_complete_lift_metric_flat(cache):
    p = cache.prolongation("flat_r2")
    g = cache.fx("flat_r2").g
    G = p.complete_lift_metric(g)
    r = p.r
    for a in range(r):
        for b in range(r):
            assert G[a][b].normalize().is_structurally_zero()
            assert G[r + a][r + b].normalize().is_structurally_zero()
            want = 1 if a == b else 0
            assert (G[a][r + b] - want).normalize().is_structurally_zero()


def test_sasaki_metric_and_adapted_structure(cache):
    p = cache.prolongation("flat_r2")
    fx = cache.fx("flat_r2")
    conn = cache.lc("flat_r2")
    gL = p.sasaki_metric(fx.g, conn)
    # flat base: the horizontal correction vanishes and g_L is the identity
    for a in range(2 * p.r):
        for b in range(2 * p.r):
            want = 1 if a == b else 0
            assert (gL.entry(a, b) - want).normalize().is_structurally_zero()
    JL = p.adapted_complex_structure(conn)
    sq = JL.compose(JL) + EndoField.identity(p.algebroid)
    assert sq.is_structurally_zero()
    assert hermitian_check(gL, JL).ok


def test_complete_lift_connection_laws(cache):
    p = cache.prolongation("heis_j")
    base = cache.fx("heis_j").algebroid
    conn = cache.lc("heis_j")
    Dc = p.complete_lift_connection(conn)
    for a in range(base.rank):
        for b in range(base.rank):
            ea, eb = base.frame_section(a), base.frame_section(b)
            nab = cov_deriv(conn, ea, eb)
            # D^c over a complete lift sends vertical lifts to vertical lifts
            res = cov_deriv(Dc, p.complete_lift(ea), p.vertical_lift(eb)) \
                - p.vertical_lift(nab)
            assert res.normalized().is_structurally_zero()
            # vertical directions are flat among themselves
            res = cov_deriv(Dc, p.vertical_lift(ea), p.vertical_lift(eb))
            assert res.normalized().is_structurally_zero()


def test_direct_product_blocks(cache):
    f1 = cache.fx("flat_r2")
    f2 = cache.fx("heis_j")
    prod = direct_product(f1.algebroid, f2.algebroid,
                          f1.J, f2.J, f1.g, f2.g)
    assert validate_structure(prod.algebroid).valid
    # the second factor's bracket survives injection: [e1, e2] = 2 e3
    e1 = f2.algebroid.frame_section(0)
    e2 = f2.algebroid.frame_section(1)
    br = bracket(prod.inject2(e1), prod.inject2(e2))
    want = prod.inject2(f2.algebroid.frame_section(2).scale(2))
    assert (br - want).normalized().is_structurally_zero()
    # J acts blockwise
    s = f1.algebroid.frame_section(0)
    res = prod.J.apply(prod.inject1(s)) - prod.inject1(f1.J.apply(s))
    assert res.normalized().is_structurally_zero()


def test_projector_restriction_requires_idempotent():
    chart = Chart("p", ["x1"])
    with pytest.raises(ValueError):
        projector_restriction(chart, [[1, 0]], [[1, 1], [0, 1]],
                              [[1], [0]])


def test_projector_restriction_identity():
    chart = Chart("triv", ["x1", "x2"])
    eye = [[1, 0], [0, 1]]
    res = projector_restriction(chart, eye, eye, eye,
                                ambient_J=[[0, -1], [1, 0]])
    assert res.validation.valid
    assert res.flat
    assert res.J_commutes
    assert all(r.is_structurally_zero()
               for _, r in res.anchor_morphism_residuals)
    # identity projector on the trivial bundle reproduces the tangent data
    assert all((res.algebroid.anchor[a][i] - eye[a][i]).normalize()
               .is_structurally_zero() for a in range(2) for i in range(2))


def test_sphere_restriction_fixture(cache):
    fx = cache.fx("s3_projector")
    res = fx.restriction
    assert res.validation.valid
    assert res.flat
    assert res.J_commutes is False
    assert cache.nijenhuis("s3_projector").is_structurally_zero()
