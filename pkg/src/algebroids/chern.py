"""Chern forms of the +i eigenbundle from an almost complex connection.

Over an adapted real frame (u_1..u_m, Ju_1..Ju_m) the operator J R of an
almost complex connection (so J R = R J) has the block matrix

    [[ R, -R* ],
     [ R*,  R ]]

with R^b_a and R^{b*}_a degree-2 forms, extracted by expanding
(J R)(., .) u_a in the adapted frame.  The curvature matrix of the
restricted connection on the +i eigenbundle is

    Phi^b_a = R^{b*}_a - i R^b_a,      i Phi = R + i R*

and the Chern form of order k is the real part of trace((i Phi)^k), equal
to (1/2) trace(block^k) when the connection is metric compatible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import sympy as sp

from algebroids.algebroid import Algebroid, Section
from algebroids.connections import (
    Connection,
    almost_complex_check,
    curvature_operator,
)
from algebroids.eforms import EForm, d_E, wedge
from algebroids.jstruct import (
    ComplexFrame,
    EndoField,
    IntegrabilityError,
    adapted_complex_frame,
)
from algebroids.scalars import Scalar

__all__ = [
    "BlockCurvature",
    "ChernReport",
    "block_curvature",
    "iphi",
    "chern_form",
]


def _real_generators(F: ComplexFrame) -> List[Section]:
    """The real sections u_a with f_a = u_a - i J u_a."""
    A = F.algebroid
    half = sp.Rational(1, 2)
    out = []
    for a in range(F.m):
        f = F.sections[a]
        fbar = F.sections[a + F.m]
        out.append(Section(A, [
            ((f.components[b] + fbar.components[b]) * half).normalize()
            for b in range(A.rank)
        ]))
    return out


@dataclass
class BlockCurvature:
    """R^b_a and R^{b*}_a as degree-2 forms over the real frame.

    ``R[a][b]`` holds R^b_a (lower index first); likewise ``Rstar``.
    ``block()`` assembles the 2m x 2m matrix [[R, -R*],[R*, R]].
    """

    algebroid: Algebroid
    m: int
    R: tuple
    Rstar: tuple
    frame: List[Section]
    F: ComplexFrame

    def block(self):
        m = self.m
        rows = []
        for a in range(m):
            rows.append([self.R[a][b] for b in range(m)]
                        + [-self.Rstar[a][b] for b in range(m)])
        for a in range(m):
            rows.append([self.Rstar[a][b] for b in range(m)]
                        + [self.R[a][b] for b in range(m)])
        return rows

    def iphi_matrix(self):
        """i Phi = R + i R* entrywise."""
        i = sp.I
        return [[self.R[a][b] + self.Rstar[a][b].scale(i)
                 for b in range(self.m)] for a in range(self.m)]

    def phi_matrix(self):
        """Phi^b_a = R^{b*}_a - i R^b_a entrywise."""
        i = sp.I
        return [[self.Rstar[a][b] - self.R[a][b].scale(i)
                 for b in range(self.m)] for a in range(self.m)]


def block_curvature(conn: Connection, J: EndoField,
                    F: Optional[ComplexFrame] = None) -> BlockCurvature:
    """Extract R^b_a, R^{b*}_a by expanding (J R)(e_p, e_q) u_a.

    Requires an almost complex connection; the commutation J R = R J and
    the displayed block pattern on (J R) u_{a*} are re-verified.
    """
    A = conn.algebroid
    if not almost_complex_check(conn, J).ok:
        raise IntegrabilityError("connection is not almost complex (nabla J != 0)")
    if F is None:
        F = adapted_complex_frame(A, J)
    m = F.m
    chart = A.chart
    us = _real_generators(F)
    frame = us + [J.apply(u) for u in us]

    # inverse of the adapted-frame change matrix (columns = adapted sections)
    P = sp.Matrix([[frame[mu].components[b].norm_expr for mu in range(2 * m)]
                   for b in range(A.rank)])
    Pinv = P.inv()

    def expand(s: Section) -> List[Scalar]:
        col = Pinv * sp.Matrix([c.norm_expr for c in s.components])
        return [chart.scalar(sp.cancel(sp.together(col[mu])))
                for mu in range(2 * m)]

    Rmat = [[EForm(A, 2) for _ in range(m)] for _ in range(m)]
    Rstar = [[EForm(A, 2) for _ in range(m)] for _ in range(m)]
    real_frame = A.frame
    for p in range(A.rank):
        for q in range(p + 1, A.rank):
            rop = [curvature_operator(conn, real_frame[p], real_frame[q],
                                      frame[mu]) for mu in range(2 * m)]
            # J R = R J on the adapted frame
            for a in range(m):
                res = J.apply(rop[a]) - rop[m + a]
                if not res.normalized().is_structurally_zero():
                    raise RuntimeError("J R != R J despite nabla J = 0")
            for a in range(m):
                coeffs = expand(J.apply(rop[a]))
                for b in range(m):
                    Rmat[a][b][(p, q)] = coeffs[b]
                    Rstar[a][b][(p, q)] = coeffs[m + b]
                # displayed pattern on the starred basis vector
                star = expand(J.apply(rop[m + a]))
                for b in range(m):
                    res1 = (star[b] + coeffs[m + b]).normalize()
                    res2 = (star[m + b] - coeffs[b]).normalize()
                    if not (res1.is_structurally_zero()
                            and res2.is_structurally_zero()):
                        raise RuntimeError("block pattern of J R failed")
    Rmat = tuple(tuple(e.normalized() for e in row) for row in Rmat)
    Rstar = tuple(tuple(e.normalized() for e in row) for row in Rstar)
    return BlockCurvature(A, m, Rmat, Rstar, frame, F)


def iphi(bc: BlockCurvature, conn: Connection):
    """Phi^b_a = R^{b*}_a - i R^b_a, cross-checked against the curvature of
    the restricted connection on the +i eigenbundle in the complex frame.

    A structural disagreement means an internal inconsistency and raises.
    """
    A = bc.algebroid
    F = bc.F
    m = bc.m
    phi = bc.phi_matrix()
    real_frame = A.frame
    for p in range(A.rank):
        for q in range(p + 1, A.rank):
            for a in range(m):
                rf = curvature_operator(conn, real_frame[p], real_frame[q],
                                        F.sections[a])
                coeffs = F.expand(rf)
                for b in range(m):
                    res = (coeffs[b] - phi[a][b][(p, q)]).normalize()
                    if not res.is_structurally_zero():
                        raise RuntimeError(
                            "restricted-connection curvature disagrees with "
                            f"R* - iR at ({a},{b},{p},{q})")
                for b in range(m, 2 * m):
                    if not coeffs[b].is_structurally_zero():
                        raise RuntimeError(
                            "restricted connection leaks out of the +i "
                            "eigenbundle")
    return phi


def _mat_wedge(M1, M2):
    n = len(M1)
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = None
            for c in range(n):
                term = wedge(M1[a][c], M2[c][b])
                acc = term if acc is None else acc + term
            row.append(acc.normalized())
        out.append(row)
    return out


def _mat_power(M, k):
    out = M
    for _ in range(k - 1):
        out = _mat_wedge(out, M)
    return out


def _trace(M) -> EForm:
    acc = M[0][0]
    for a in range(1, len(M)):
        acc = acc + M[a][a]
    return acc.normalized()


def _real_imag(w: EForm):
    re = EForm(w.algebroid, w.degree, frame_size=w.frame_size,
               frame_tag=w.frame_tag)
    im = EForm(w.algebroid, w.degree, frame_size=w.frame_size,
               frame_tag=w.frame_tag)
    for key, val in w.components.items():
        re.components[key] = val.real_part().normalize()
        im.components[key] = val.imag_part().normalize()
    return re.normalized(), im.normalized()


@dataclass
class ChernReport:
    """Chern form of order k with both construction routes compared.

    ``form`` is the Chern form itself (real part of trace((iPhi)^k)).
    ``factor`` is the empirical proportionality constant between
    Re trace((iPhi)^k) and trace(block^k) (expected 1/2); None when both
    traces vanish.
    """

    order: int
    source: str
    form: EForm
    iphi_trace: EForm = None
    block_trace: EForm = None
    imag_part: EForm = None
    equal: bool = None
    factor: Scalar = None
    closed: bool = None
    imag_zero: bool = None
    imag_closed: bool = None


def chern_form(bc: BlockCurvature, k: int, source: str = "both") -> ChernReport:
    """Chern form of order k from the iPhi trace, the half block trace,
    or both (compared).

    Matrix powers use the wedge product entrywise; the entries have even
    degree, so they commute and the power is unambiguous.  2k above the
    rank gives the zero form by degree.
    """
    if k < 1:
        raise ValueError("order must be at least 1")
    if source not in ("iphi", "block", "both"):
        raise ValueError("source must be iphi, block or both")
    A = bc.algebroid
    half = sp.Rational(1, 2)

    t_iphi = re = im = None
    if source in ("iphi", "both"):
        t_iphi = _trace(_mat_power(bc.iphi_matrix(), k))
        re, im = _real_imag(t_iphi)
    t_block = None
    if source in ("block", "both"):
        t_block = _trace(_mat_power(bc.block(), k)).normalized()

    if source == "iphi":
        form = re
    elif source == "block":
        form = t_block.scale(half).normalized()
    else:
        form = re

    report = ChernReport(order=k, source=source, form=form,
                         iphi_trace=t_iphi, block_trace=t_block)
    report.closed = d_E(form).normalized().is_structurally_zero()
    if im is not None:
        report.imag_part = im
        report.imag_zero = im.is_structurally_zero()
        report.imag_closed = d_E(im).normalized().is_structurally_zero()
    if source == "both":
        # empirical factor between Re trace((iPhi)^k) and trace(block^k)
        factor = None
        for key in t_block.keys():
            denom = t_block[key]
            if not denom.is_structurally_zero():
                factor = (re[key] / denom).normalize()
                break
        equal = True
        for key in t_block.keys():
            want = t_block[key] * half
            if not (re[key] - want).normalize().is_structurally_zero():
                equal = False
        report.equal = equal
        report.factor = factor
    return report
