"""Skew-symmetric forms on a Lie algebroid and the differential d_E.

Components are stored on strictly increasing multi-indices over the active
frame.  The wedge product is the shuffle sum without factorial prefactors,
so e^1 ^ e^2 evaluated on (e_1, e_2) gives 1.  The differential is

    (d_E w)(s_0..s_p) = sum_i (-1)^i rho(s_i) w(..no i..)
                      + sum_{i<j} (-1)^{i+j} w([s_i,s_j], ..no i,j..)

with no normalization factor, so d_E of a function f is the 1-form
s -> rho(s)f.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from algebroids.algebroid import Algebroid, Section, anchor_push, bracket
from algebroids.scalars import Chart, ChartError, Scalar

__all__ = ["EForm", "wedge", "d_E", "evaluate"]


def _sort_index(idx: Tuple[int, ...]):
    """Sort a multi-index; return (sorted tuple, permutation sign) or None
    when an index repeats."""
    if len(set(idx)) != len(idx):
        return None
    pairs = sorted(range(len(idx)), key=lambda k: idx[k])
    # count inversions of the sorting permutation
    sign = 1
    perm = list(pairs)
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return tuple(idx[k] for k in pairs), sign


class EForm:
    """Degree-p antisymmetric form with Scalar components.

    The frame size defaults to the algebroid rank; a complex frame doubles
    it and supplies its own structure functions for d_E.
    """

    def __init__(
        self,
        algebroid: Algebroid,
        degree: int,
        components: Dict[Tuple[int, ...], object] | None = None,
        frame_size: int | None = None,
        frame_tag: str = "real",
    ):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.algebroid = algebroid
        self.degree = degree
        self.frame_size = algebroid.rank if frame_size is None else frame_size
        self.frame_tag = frame_tag
        # degree above the frame size is allowed and denotes the zero form
        # (no strictly increasing multi-index exists), so d_E of a
        # top-degree form has a representation
        self.components: Dict[Tuple[int, ...], Scalar] = {}
        if components:
            for idx, value in components.items():
                self[tuple(idx)] = value

    @property
    def chart(self) -> Chart:
        return self.algebroid.chart

    def __setitem__(self, idx: Tuple[int, ...], value):
        if len(idx) != self.degree:
            raise ValueError("index length does not match degree")
        value = self.chart.scalar(value)
        if self.degree == 0:
            self.components[()] = value
            return
        sorted_sign = _sort_index(idx)
        if sorted_sign is None:
            if not value.is_structurally_zero():
                raise ValueError("repeated index with nonzero component")
            return
        key, sign = sorted_sign
        self.components[key] = value if sign > 0 else -value

    def __getitem__(self, idx: Tuple[int, ...]) -> Scalar:
        if len(idx) != self.degree:
            raise ValueError("index length does not match degree")
        if self.degree == 0:
            return self.components.get((), self.chart.zero)
        sorted_sign = _sort_index(tuple(idx))
        if sorted_sign is None:
            return self.chart.zero
        key, sign = sorted_sign
        comp = self.components.get(key, self.chart.zero)
        return comp if sign > 0 else -comp

    def keys(self):
        return combinations(range(self.frame_size), self.degree)

    def _compatible(self, other: "EForm"):
        if (other.algebroid is not self.algebroid
                or other.frame_size != self.frame_size
                or other.frame_tag != self.frame_tag):
            raise ChartError("forms live over different frames")

    def __add__(self, other: "EForm") -> "EForm":
        self._compatible(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = EForm(self.algebroid, self.degree,
                    frame_size=self.frame_size, frame_tag=self.frame_tag)
        for key in set(self.components) | set(other.components):
            out.components[key] = (self.components.get(key, self.chart.zero)
                                   + other.components.get(key, self.chart.zero))
        return out

    def __sub__(self, other: "EForm") -> "EForm":
        return self + (-other)

    def __neg__(self) -> "EForm":
        out = EForm(self.algebroid, self.degree,
                    frame_size=self.frame_size, frame_tag=self.frame_tag)
        for key, val in self.components.items():
            out.components[key] = -val
        return out

    def scale(self, f) -> "EForm":
        f = self.chart.scalar(f)
        out = EForm(self.algebroid, self.degree,
                    frame_size=self.frame_size, frame_tag=self.frame_tag)
        for key, val in self.components.items():
            out.components[key] = f * val
        return out

    def __rmul__(self, f) -> "EForm":
        return self.scale(f)

    def normalized(self) -> "EForm":
        out = EForm(self.algebroid, self.degree,
                    frame_size=self.frame_size, frame_tag=self.frame_tag)
        for key, val in self.components.items():
            norm = val.normalize()
            if not norm.is_structurally_zero():
                out.components[key] = norm
        return out

    def is_structurally_zero(self) -> bool:
        return all(v.is_structurally_zero() for v in self.components.values())

    def conjugate(self) -> "EForm":
        out = EForm(self.algebroid, self.degree,
                    frame_size=self.frame_size, frame_tag=self.frame_tag)
        for key, val in self.components.items():
            out.components[key] = val.conjugate()
        return out

    def __repr__(self):
        parts = {k: str(v) for k, v in self.normalized().components.items()}
        return f"EForm(degree={self.degree}, {parts})"


def wedge(w: EForm, e: EForm) -> EForm:
    """Shuffle-sum wedge product without factorial prefactors."""
    w._compatible(e)
    p, q = w.degree, e.degree
    out = EForm(w.algebroid, p + q, frame_size=w.frame_size,
                frame_tag=w.frame_tag)
    zero = w.chart.zero
    for idx in combinations(range(w.frame_size), p + q):
        acc = zero
        positions = list(range(p + q))
        for wpos in combinations(positions, p):
            epos = [k for k in positions if k not in wpos]
            # sign of the shuffle moving wpos to the front
            sign = 1
            for rank_in_w, k in enumerate(wpos):
                sign *= (-1) ** (k - rank_in_w)
            widx = tuple(idx[k] for k in wpos)
            eidx = tuple(idx[k] for k in epos)
            term = w[widx] * e[eidx]
            acc = acc + (term if sign > 0 else -term)
        if not acc.is_structurally_zero():
            out.components[idx] = acc.normalize()
    return out


def evaluate(w: EForm, sections: Sequence[Section]) -> Scalar:
    """Full antisymmetric multilinear evaluation on component tuples."""
    if len(sections) != w.degree:
        raise ValueError("section count does not match degree")
    if w.degree == 0:
        return w[()]
    chart = w.chart
    acc = chart.zero
    comp_lists = [s.components for s in sections]
    for key, value in w.components.items():
        # sum over permutations of the increasing index onto the slots
        from itertools import permutations

        for perm in permutations(range(w.degree)):
            sign = 1
            seq = [key[perm[k]] for k in range(w.degree)]
            # parity of perm
            for a in range(w.degree):
                for b in range(a + 1, w.degree):
                    if perm[a] > perm[b]:
                        sign = -sign
            term = value
            for slot in range(w.degree):
                term = term * comp_lists[slot][seq[slot]]
            acc = acc + (term if sign > 0 else -term)
    return acc


def d_E(w: EForm, frame=None) -> EForm:
    """Chevalley-Eilenberg differential over the active frame.

    For the real frame, anchors and structure functions come straight from
    the algebroid.  A complex frame (from jstruct) passes itself through
    ``frame`` and supplies its own anchors and structure functions via the
    algebroid it induces; callers normally use ComplexFrame.d_E instead.
    """
    A = w.algebroid
    m = w.frame_size
    p = w.degree
    out = EForm(A, p + 1, frame_size=m, frame_tag=w.frame_tag)
    chart = A.chart

    def rho_apply(a: int, f: Scalar) -> Scalar:
        acc = chart.zero
        for i in range(chart.dim):
            acc = acc + A.anchor[a][i] * f.diff(chart.coords[i])
        return acc

    for idx in combinations(range(m), p + 1):
        acc = chart.zero
        for i in range(p + 1):
            rest = idx[:i] + idx[i + 1:]
            term = rho_apply(idx[i], w[rest])
            acc = acc + (term if i % 2 == 0 else -term)
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                rest = tuple(idx[k] for k in range(p + 1) if k not in (i, j))
                for c in range(m):
                    coeff = A.C[c][idx[i]][idx[j]]
                    if coeff.is_structurally_zero():
                        continue
                    term = coeff * w[(c,) + rest]
                    acc = acc + (term if (i + j) % 2 == 0 else -term)
        norm = acc.normalize()
        if not norm.is_structurally_zero():
            out.components[idx] = norm
    return out
