"""Lie algebroid structure data over a single chart.

An algebroid is declared by its chart, rank, anchor components rho^i_a and
bracket structure functions C^c_ab.  The structure equations checked by
``validate_structure`` are

    rho^j_a d_j rho^i_b - rho^j_b d_j rho^i_a = rho^i_c C^c_ab     (anchor)
    C^c_ab = -C^c_ba                                               (antisymmetry)
    sum_cyclic(a,b,c) (rho^i_a d_i C^d_bc + C^e_ab C^d_ce) = 0     (Jacobi)

Sections are frame-component tuples of Scalars; the bracket is the unique
Leibniz extension of the frame brackets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from algebroids.scalars import Chart, ChartError, Scalar, random_point

__all__ = [
    "Algebroid",
    "Section",
    "VectorField",
    "ValidationReport",
    "ResidualEntry",
    "validate_structure",
    "anchor_push",
    "vf_bracket",
]


class VectorField:
    """Vector field on the chart, the image side of the anchor."""

    def __init__(self, chart: Chart, components: Sequence):
        self.chart = chart
        self.components = tuple(chart.scalar(c) for c in components)
        if len(self.components) != chart.dim:
            raise ChartError("component count does not match chart dimension")

    def apply(self, f: Scalar) -> Scalar:
        """Derivation action on a scalar: sum_i X^i df/dx^i."""
        f = self.chart.scalar(f)
        out = self.chart.zero
        for comp, coord in zip(self.components, self.chart.coords):
            out = out + comp * f.diff(coord)
        return out

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.chart, [a + b for a, b in zip(self.components, other.components)]
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.chart, [a - b for a, b in zip(self.components, other.components)]
        )

    def is_structurally_zero(self) -> bool:
        return all(c.is_structurally_zero() for c in self.components)

    def __repr__(self):
        return f"VectorField({[str(c) for c in self.components]})"


def vf_bracket(v1: VectorField, v2: VectorField) -> VectorField:
    """Ordinary Lie bracket of vector fields on the chart."""
    chart = v1.chart
    comps = []
    for i, coord_i in enumerate(chart.coords):
        acc = chart.zero
        for v1j, v2j, coord_j in zip(v1.components, v2.components, chart.coords):
            acc = acc + v1j * v2.components[i].diff(coord_j)
            acc = acc - v2j * v1.components[i].diff(coord_j)
        comps.append(acc)
    return VectorField(chart, comps)


class Algebroid:
    """Chart + rank + anchor rho^i_a + structure functions C^c_ab.

    The bracket table may be given sparsely as {(a, b, c): scalar} with
    a < b entries only; it is antisymmetrized at construction.  Index
    convention throughout is 0-based.
    """

    def __init__(
        self,
        chart: Chart,
        rank: int,
        anchor: Sequence[Sequence],
        bracket: dict | Sequence,
        frame_labels: Optional[Sequence[str]] = None,
    ):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.chart = chart
        self.rank = rank
        self.anchor = tuple(
            tuple(chart.scalar(anchor[a][i]) for i in range(chart.dim))
            for a in range(rank)
        )
        self.C = self._build_bracket(bracket)
        if frame_labels is None:
            frame_labels = [f"e{a + 1}" for a in range(rank)]
        if len(frame_labels) != rank:
            raise ValueError("frame label count does not match rank")
        self.frame_labels = tuple(frame_labels)

    def _build_bracket(self, bracket):
        zero = self.chart.zero
        table = [[[zero for _ in range(self.rank)] for _ in range(self.rank)]
                 for _ in range(self.rank)]
        if isinstance(bracket, dict):
            for (a, b, c), value in bracket.items():
                value = self.chart.scalar(value)
                # antisymmetrize: the (a,b) entry wins, (b,a) gets the sign
                table[c][a][b] = table[c][a][b] + value
                table[c][b][a] = table[c][b][a] - value
        else:
            for c in range(self.rank):
                for a in range(self.rank):
                    for b in range(self.rank):
                        table[c][a][b] = self.chart.scalar(bracket[c][a][b])
        return tuple(tuple(tuple(row) for row in layer) for layer in table)

    # C[c][a][b] is C^c_ab

    def frame_section(self, a: int) -> "Section":
        comps = [self.chart.zero] * self.rank
        comps[a] = self.chart.one
        return Section(self, comps)

    @property
    def frame(self) -> List["Section"]:
        return [self.frame_section(a) for a in range(self.rank)]

    def section(self, components: Sequence) -> "Section":
        return Section(self, components)

    def zero_section(self) -> "Section":
        return Section(self, [self.chart.zero] * self.rank)

    def anchor_vf(self, a: int) -> VectorField:
        return VectorField(self.chart, list(self.anchor[a]))

    def generic_anchor_rank(self, seed: int = 42) -> int:
        """Rank of the anchor matrix at one random rational point.

        A diagnostic only; rank can drop on special loci, so this is a
        generic value, never a global claim.
        """
        import random

        rng = random.Random(seed)
        point = random_point(self.chart, rng)
        rows = []
        for a in range(self.rank):
            rows.append([self.anchor[a][i].eval(point).to_sympy()
                         if hasattr(self.anchor[a][i].eval(point), "to_sympy")
                         else self.anchor[a][i].eval(point)
                         for i in range(self.chart.dim)])
        if self.chart.dim == 0:
            return 0
        return sp.Matrix(rows).rank()

    def __repr__(self):
        return (f"Algebroid(rank={self.rank}, chart={self.chart.name!r}, "
                f"n={self.chart.dim})")


class Section:
    """Section of the algebroid: component Scalars over the frame."""

    def __init__(self, algebroid: Algebroid, components: Sequence):
        self.algebroid = algebroid
        self.components = tuple(
            algebroid.chart.scalar(c) for c in components
        )
        if len(self.components) != algebroid.rank:
            raise ChartError("component count does not match rank")

    @property
    def chart(self) -> Chart:
        return self.algebroid.chart

    def __add__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(
            self.algebroid,
            [a + b for a, b in zip(self.components, other.components)],
        )

    def __sub__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(
            self.algebroid,
            [a - b for a, b in zip(self.components, other.components)],
        )

    def __neg__(self) -> "Section":
        return Section(self.algebroid, [-c for c in self.components])

    def scale(self, f) -> "Section":
        f = self.chart.scalar(f)
        return Section(self.algebroid, [f * c for c in self.components])

    def __rmul__(self, f) -> "Section":
        return self.scale(f)

    def conjugate(self) -> "Section":
        return Section(self.algebroid, [c.conjugate() for c in self.components])

    def is_structurally_zero(self) -> bool:
        return all(c.is_structurally_zero() for c in self.components)

    def normalized(self) -> "Section":
        return Section(self.algebroid, [c.normalize() for c in self.components])

    def _check(self, other: "Section"):
        if other.algebroid is not self.algebroid:
            raise ChartError("sections belong to different algebroids")

    def __repr__(self):
        return f"Section({[str(c) for c in self.components]})"


def anchor_push(s: Section) -> VectorField:
    """Pushforward rho(s) = s^a rho^i_a d/dx^i."""
    A = s.algebroid
    comps = []
    for i in range(A.chart.dim):
        acc = A.chart.zero
        for a in range(A.rank):
            acc = acc + s.components[a] * A.anchor[a][i]
        comps.append(acc)
    return VectorField(A.chart, comps)


def bracket(s1: Section, s2: Section) -> Section:
    """Section bracket: the Leibniz extension of the frame brackets.

    [s1, s2]^c = s1^a s2^b C^c_ab + rho(s1)(s2^c) - rho(s2)(s1^c)
    """
    A = s1.algebroid
    s1._check(s2)
    v1 = anchor_push(s1)
    v2 = anchor_push(s2)
    comps = []
    for c in range(A.rank):
        acc = v1.apply(s2.components[c]) - v2.apply(s1.components[c])
        for a in range(A.rank):
            for b in range(A.rank):
                acc = acc + s1.components[a] * s2.components[b] * A.C[c][a][b]
        comps.append(acc)
    return Section(A, comps)


def jacobiator(s1: Section, s2: Section, s3: Section) -> Section:
    """[[s1,s2],s3] + [[s2,s3],s1] + [[s3,s1],s2]."""
    return (
        bracket(bracket(s1, s2), s3)
        + bracket(bracket(s2, s3), s1)
        + bracket(bracket(s3, s1), s2)
    ).normalized()


@dataclass
class ResidualEntry:
    indices: Tuple[int, ...]
    residual: Scalar

    @property
    def ok(self) -> bool:
        return self.residual.is_structurally_zero()


@dataclass
class ValidationReport:
    """Residuals of the three structure equations, normalized."""

    anchor_morphism: List[ResidualEntry] = field(default_factory=list)
    antisymmetry: List[ResidualEntry] = field(default_factory=list)
    jacobi: List[ResidualEntry] = field(default_factory=list)

    @property
    def anchor_morphism_ok(self) -> bool:
        return all(e.ok for e in self.anchor_morphism)

    @property
    def antisymmetry_ok(self) -> bool:
        return all(e.ok for e in self.antisymmetry)

    @property
    def jacobi_ok(self) -> bool:
        return all(e.ok for e in self.jacobi)

    @property
    def valid(self) -> bool:
        return self.anchor_morphism_ok and self.antisymmetry_ok and self.jacobi_ok

    def failures(self) -> List[ResidualEntry]:
        out = []
        for group in (self.anchor_morphism, self.antisymmetry, self.jacobi):
            out.extend(e for e in group if not e.ok)
        return out

    def jacobi_residual(self, a: int, b: int, c: int) -> List[Scalar]:
        """Residual components over d for the triple (a,b,c)."""
        return [e.residual for e in self.jacobi if e.indices[:3] == (a, b, c)]


def validate_structure(A: Algebroid) -> ValidationReport:
    """Check the structure equations; residuals are recorded, not thrown."""
    report = ValidationReport()
    n, m = A.chart.dim, A.rank

    for a in range(m):
        for b in range(a + 1, m):
            for i in range(n):
                lhs = A.chart.zero
                for j in range(n):
                    coord = A.chart.coords[j]
                    lhs = lhs + A.anchor[a][j] * A.anchor[b][i].diff(coord)
                    lhs = lhs - A.anchor[b][j] * A.anchor[a][i].diff(coord)
                rhs = A.chart.zero
                for c in range(m):
                    rhs = rhs + A.anchor[c][i] * A.C[c][a][b]
                report.anchor_morphism.append(
                    ResidualEntry((a, b, i), (lhs - rhs).normalize())
                )

    for c in range(m):
        for a in range(m):
            for b in range(a, m):
                res = (A.C[c][a][b] + A.C[c][b][a]).normalize()
                report.antisymmetry.append(ResidualEntry((a, b, c), res))

    for a in range(m):
        for b in range(a + 1, m):
            for c in range(b + 1, m):
                for d in range(m):
                    acc = A.chart.zero
                    for (p, q, r) in ((a, b, c), (b, c, a), (c, a, b)):
                        for i in range(A.chart.dim):
                            coord = A.chart.coords[i]
                            acc = acc + A.anchor[p][i] * A.C[d][q][r].diff(coord)
                        for e in range(m):
                            acc = acc + A.C[e][p][q] * A.C[d][e][r]
                    report.jacobi.append(ResidualEntry((a, b, c, d), acc.normalize()))

    return report
