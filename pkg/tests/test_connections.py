"""Connections, Levi-Civita, curvature and Kahler reports."""

import pytest
import sympy as sp

from algebroids.algebroid import Algebroid
from algebroids.connections import (
    Metric,
    almost_complex_check,
    curvature_components,
    fundamental_form,
    hermitian_check,
    holomorphic_sectional,
    kahler_complex_curvature,
    kahler_report,
    levi_civita,
    metric_compat_check,
    orthonormal_adapted_frame,
    riemann4,
    torsion,
)
from algebroids.eforms import evaluate
from algebroids.scalars import Chart


def test_metric_symmetry_and_degeneracy():
    chart = Chart("m", ["x1"])
    A = Algebroid(chart, 2, [[1], [0]], {})
    with pytest.raises(ValueError):
        Metric(A, [[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        Metric(A, [[1, 1], [1, 1]])


def test_levi_civita_flat_is_trivial(cache):
    conn = cache.lc("flat_r4")
    assert all(conn.gamma[c][a][b].is_structurally_zero()
               for c in range(4) for a in range(4) for b in range(4))


def test_levi_civita_heis_coefficient(cache):
    # constant structure [e1,e2] = 2 e3 with the identity metric
    conn = cache.lc("heis_j")
    assert (conn.gamma[2][0][1] - 1).normalize().is_structurally_zero()
    assert (conn.gamma[2][1][0] + 1).normalize().is_structurally_zero()
    assert torsion(conn)[2][0][1].is_structurally_zero()


def test_levi_civita_warped_coefficient(cache):
    conn = cache.lc("warped_r4")
    chart = cache.fx("warped_r4").algebroid.chart
    want = chart.scalar("x3 / (1 + x3^2)")
    assert (conn.gamma[0][2][0] - want).normalize().is_structurally_zero()


def test_metric_compatibility_report(cache):
    fx = cache.fx("conformal_sphere_chart")
    conn = cache.lc("conformal_sphere_chart")
    assert metric_compat_check(conn, fx.g).ok


def test_hermitian_and_fundamental_form(cache):
    fx = cache.fx("warped_r4")
    assert hermitian_check(fx.g, fx.J).ok
    phi = fundamental_form(fx.g, fx.J)
    chart = fx.algebroid.chart
    want = chart.scalar("1 + x3^2")
    assert (phi[(0, 1)] - want).normalize().is_structurally_zero()
    assert (phi[(2, 3)] - 1).normalize().is_structurally_zero()
    val = evaluate(phi, [fx.algebroid.frame_section(0),
                         fx.algebroid.frame_section(1)])
    assert (val - want).normalize().is_structurally_zero()


def test_kahler_report_statuses(cache):
    flat = cache.fx("flat_r2")
    assert kahler_report(flat.algebroid, flat.J, flat.g).status == "kahler"
    warped = cache.fx("warped_r4")
    rep = kahler_report(warped.algebroid, warped.J, warped.g)
    assert rep.status == "hermitian-non-kahler"
    assert rep.equivalence_holds and rep.vii5_ok
    heis = cache.fx("heis_j")
    assert kahler_report(heis.algebroid, heis.J, heis.g).status \
        == "non-integrable"


def test_curvature_antisymmetry_and_flatness(cache):
    R = curvature_components(cache.lc("flat_r4"))
    assert all(R[d][a][b][c].is_structurally_zero()
               for d in range(4) for a in range(4)
               for b in range(4) for c in range(4))
    R = curvature_components(cache.lc("conformal_sphere_chart"))
    for d in range(2):
        for c in range(2):
            res = (R[d][0][1][c] + R[d][1][0][c]).normalize()
            assert res.is_structurally_zero()


def test_riemann4_symmetries(cache):
    fx = cache.fx("conformal_sphere_chart")
    conn = cache.lc("conformal_sphere_chart")
    A = fx.algebroid
    e1, e2 = A.frame_section(0), A.frame_section(1)
    r = riemann4(fx.g, conn, e1, e2, e1, e2)
    assert not r.is_structurally_zero()
    swap = riemann4(fx.g, conn, e1, e2, e2, e1)
    assert (r + swap).normalize().is_structurally_zero()


def test_holomorphic_sectional_degenerate_plane(cache):
    fx = cache.fx("flat_r2")
    conn = cache.lc("flat_r2")
    with pytest.raises(ZeroDivisionError):
        holomorphic_sectional(fx.g, conn, fx.J, fx.algebroid.zero_section())


def test_complex_frame_levi_civita_cross_check(cache):
    for name in ("flat_r2", "heis_j"):
        connF = cache.lc_complex(name)
        assert connF.formula_vs_transform == []


def test_kahler_complex_curvature_families(cache):
    fx = cache.fx("conformal_sphere_chart")
    connF = cache.lc_complex("conformal_sphere_chart")
    rep = kahler_complex_curvature(connF, cache.frame(
        "conformal_sphere_chart"))
    assert rep.ok


def test_orthonormal_adapted_frame_exact(cache):
    fx = cache.fx("conformal_sphere_chart")
    frame = orthonormal_adapted_frame(fx.algebroid, fx.J, fx.g)
    assert frame is not None
    for x in range(2):
        for y in range(2):
            want = 1 if x == y else 0
            val = (fx.g.value(frame[x], frame[y]) - want).normalize()
            assert val.is_structurally_zero()


def test_levi_civita_almost_complex_only_when_kahler(cache):
    flat = cache.fx("flat_r2")
    assert almost_complex_check(cache.lc("flat_r2"), flat.J).ok
    warped = cache.fx("warped_r4")
    assert not almost_complex_check(cache.lc("warped_r4"), warped.J).ok
