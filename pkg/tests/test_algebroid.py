"""Algebroid structure data, sections, brackets and validation."""

import pytest

from algebroids.algebroid import (
    Algebroid,
    Section,
    VectorField,
    anchor_push,
    bracket,
    jacobiator,
    validate_structure,
    vf_bracket,
)
from algebroids.scalars import Chart


@pytest.fixture
def tangent_r2():
    chart = Chart("r2", ["x1", "x2"])
    return Algebroid(chart, 2, [[1, 0], [0, 1]], {})


def test_bracket_table_antisymmetrized():
    chart = Chart("pt", ["t"])
    A = Algebroid(chart, 3, [[0], [0], [0]], {(0, 1, 2): "t"})
    assert (A.C[2][0][1] - chart.scalar("t")).is_structurally_zero()
    assert (A.C[2][1][0] + chart.scalar("t")).is_structurally_zero()


def test_vf_bracket_coordinate_fields():
    chart = Chart("r2", ["x1", "x2"])
    v1 = VectorField(chart, ["x1", "0"])
    v2 = VectorField(chart, ["0", "1"])
    br = vf_bracket(v1, v2)
    assert all(c.normalize().is_structurally_zero() for c in br.components)
    v3 = VectorField(chart, ["x2", "0"])
    br = vf_bracket(v2, v3)  # [d/dx2, x2 d/dx1] = d/dx1
    assert (br.components[0] - 1).normalize().is_structurally_zero()
    assert br.components[1].normalize().is_structurally_zero()


def test_bracket_leibniz_rule(tangent_r2):
    A = tangent_r2
    chart = A.chart
    s1 = A.section(["1", "x2"])
    s2 = A.section(["x1", "1"])
    f = chart.scalar("x1 * x2")
    lhs = bracket(s1, s2.scale(f))
    rhs = bracket(s1, s2).scale(f) + s2.scale(anchor_push(s1).apply(f))
    assert (lhs - rhs).normalized().is_structurally_zero()


def test_bracket_antisymmetry(tangent_r2):
    s1 = tangent_r2.section(["x2^2", "1"])
    s2 = tangent_r2.section(["1", "x1"])
    res = bracket(s1, s2) + bracket(s2, s1)
    assert res.normalized().is_structurally_zero()


def test_validate_tangent_algebroid(tangent_r2):
    rep = validate_structure(tangent_r2)
    assert rep.valid
    assert rep.failures() == []


def test_validate_broken_jacobi():
    chart = Chart("broken", ["x1"])
    A = Algebroid(chart, 4, [[0]] * 4, {(0, 1, 2): 1, (0, 2, 0): 1})
    rep = validate_structure(A)
    assert not rep.valid
    assert rep.anchor_morphism_ok and rep.antisymmetry_ok
    assert not rep.jacobi_ok
    res = rep.jacobi_residual(0, 1, 2)
    assert [str(r) for r in res] == ["0", "0", "-1", "0"]
    # jacobiator agrees with the tabulated residual
    jac = jacobiator(A.frame_section(0), A.frame_section(1),
                     A.frame_section(2))
    assert (jac.components[2] + 1).normalize().is_structurally_zero()


def test_anchor_morphism_failure_detected():
    chart = Chart("bad", ["x1"])
    # [e1, e2] = 0 but the anchors do not commute
    A = Algebroid(chart, 2, [["1"], ["x1"]], {})
    rep = validate_structure(A)
    assert not rep.anchor_morphism_ok


def test_section_arithmetic_and_chart_guard(tangent_r2):
    other = Algebroid(Chart("o", ["y"]), 1, [[1]], {})
    s = tangent_r2.section(["1", "0"])
    with pytest.raises(Exception):
        s + Section(other, ["1"])
    assert (s - s).is_structurally_zero()
    assert (s.scale(3).components[0] - 3).normalize().is_structurally_zero()
