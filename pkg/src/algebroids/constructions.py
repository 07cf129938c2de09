"""Constructed algebroids and the built-in fixture catalog.

Three factories produce new algebroids from old:

* ``prolong``: the prolongation of an algebroid of rank r over a chart
  (x) lives over the chart (x, y^1..y^r) with frame (X_a, V_a), anchor
  rho'(X_a) = rho_a, rho'(V_a) = d/dy^a and structure functions
  [X_a, X_b] = C^c_ab X_c.  The vertical/complete lifts of functions and
  sections, the complete lifts of endomorphisms and metrics, the Sasaki
  metric and the complete-lift connection are all provided; the three
  lift bracket laws are re-verified at construction time and any
  inconsistency raises instead of being patched.
* ``direct_product``: block anchor and structure functions over the
  concatenated chart, with block complex structure and metric.
* ``projector_restriction``: given anchor data rho0 on a chart, an
  idempotent ambient projector Pi and a lift L with rho0 L generically
  the identity on chart vector fields, the restriction has anchor
  rho0 Pi and bracket coefficients C^c_ab = L(vf_bracket(rho_a, rho_b)).

The fixture catalog exposes the named examples used throughout the test
suite, plus the syntax ``prolong(<name>)`` and ``product(<a>,<b>)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from algebroids.algebroid import (
    Algebroid,
    Section,
    ValidationReport,
    VectorField,
    bracket,
    validate_structure,
    vf_bracket,
)
from algebroids.connections import Connection, Metric, cov_deriv, levi_civita
from algebroids.jstruct import EndoField, almost_complex_structure
from algebroids.scalars import Chart, Scalar

__all__ = [
    "Prolongation",
    "ProductAlgebroid",
    "ProjectorRestriction",
    "Fixture",
    "prolong",
    "direct_product",
    "projector_restriction",
    "fixture",
    "fixture_names",
    "CATALOG_NAMES",
]


def _relift(chart: Chart, s: Scalar) -> Scalar:
    """Re-express a scalar on a chart containing the same coordinates."""
    return chart.scalar(s.expr)


def _mat_mul(A, B, chart: Chart):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = chart.zero
            for t in range(k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc.normalize())
        out.append(row)
    return out


class Prolongation:
    """Prolongation of a Lie algebroid with its lift calculus."""

    def __init__(self, base: Algebroid):
        self.base = base
        n = base.chart.dim
        r = base.rank
        self.n = n
        self.r = r
        existing = {c.name for c in base.chart.coords}
        prefix = "y"
        while any(f"{prefix}{a + 1}" in existing for a in range(r)):
            prefix += "y"
        names = [c.name for c in base.chart.coords] \
            + [f"{prefix}{a + 1}" for a in range(r)]
        chart = Chart(f"{base.chart.name}_prolong", names)
        self.chart = chart
        self.y = [chart.coord(f"{prefix}{a + 1}") for a in range(r)]

        anchor = []
        for a in range(r):
            anchor.append([_relift(chart, base.anchor[a][i]) for i in range(n)]
                          + [chart.zero] * r)
        for a in range(r):
            row = [chart.zero] * (n + r)
            row[n + a] = chart.one
            anchor.append(row)

        cdict = {}
        for a in range(r):
            for b in range(a + 1, r):
                for c in range(r):
                    val = base.C[c][a][b]
                    if not val.is_structurally_zero():
                        cdict[(a, b, c)] = _relift(chart, val)
        labels = [f"X{a + 1}" for a in range(r)] + [f"V{a + 1}" for a in range(r)]
        self.algebroid = Algebroid(chart, 2 * r, anchor, cdict,
                                   frame_labels=labels)

        self.lift_law_residuals = self._check_lift_laws()
        bad = [key for key, res in self.lift_law_residuals
               if not res.is_structurally_zero()]
        if bad:
            raise RuntimeError(
                f"lift bracket laws inconsistent with the structure "
                f"equations at {bad[:3]}")

    # ---- lifts -----------------------------------------------------------

    def function_vertical_lift(self, f) -> Scalar:
        return _relift(self.chart, self.base.chart.scalar(f))

    def function_complete_lift(self, f) -> Scalar:
        """f^c = sum_a y^a rho(e_a) f."""
        f = self.base.chart.scalar(f)
        acc = self.chart.zero
        for a in range(self.r):
            df = self.base.anchor_vf(a).apply(f)
            acc = acc + self.chart.scalar(self.y[a]) * _relift(self.chart, df)
        return acc.normalize()

    def vertical_lift(self, s: Section) -> Section:
        comps = [self.chart.zero] * self.r \
            + [_relift(self.chart, c) for c in s.components]
        return Section(self.algebroid, comps)

    def complete_lift(self, s: Section) -> Section:
        """s^c = s^a X_a + (rho(e_f)(s^a) - C^a_{bf} s^b) y^f V_a."""
        base = self.base
        comps = [_relift(self.chart, c) for c in s.components]
        vert = []
        for a in range(self.r):
            acc = self.chart.zero
            for f in range(self.r):
                term = base.anchor_vf(f).apply(s.components[a])
                for b in range(self.r):
                    term = term - base.C[a][b][f] * s.components[b]
                acc = acc + self.chart.scalar(self.y[f]) \
                    * _relift(self.chart, term)
            vert.append(acc.normalize())
        return Section(self.algebroid, comps + vert)

    def horizontal_lift(self, s: Section, conn: Connection) -> Section:
        """s^h = s^a H_a with H_a = X_a - Gamma^b_{af} y^f V_b."""
        comps = [_relift(self.chart, c) for c in s.components]
        vert = []
        for b in range(self.r):
            acc = self.chart.zero
            for a in range(self.r):
                for f in range(self.r):
                    acc = acc - comps[a] * self.chart.scalar(self.y[f]) \
                        * _relift(self.chart, conn.gamma[b][a][f])
            vert.append(acc.normalize())
        return Section(self.algebroid, comps + vert)

    def _check_lift_laws(self):
        out = []
        base = self.base
        for a in range(self.r):
            for b in range(self.r):
                ea, eb = base.frame_section(a), base.frame_section(b)
                base_br = Section(base, [base.C[c][a][b]
                                         for c in range(self.r)])
                r1 = bracket(self.vertical_lift(ea), self.vertical_lift(eb))
                r2 = (bracket(self.complete_lift(ea), self.vertical_lift(eb))
                      - self.vertical_lift(base_br))
                r3 = (bracket(self.complete_lift(ea), self.complete_lift(eb))
                      - self.complete_lift(base_br))
                for c, res in enumerate(r1.normalized().components):
                    out.append((("vv", a, b, c), res))
                for c, res in enumerate(r2.normalized().components):
                    out.append((("cv", a, b, c), res))
                for c, res in enumerate(r3.normalized().components):
                    out.append((("cc", a, b, c), res))
        return out

    # ---- lifted structures ----------------------------------------------

    def complete_lift_endo(self, J: EndoField) -> EndoField:
        """J^c with J^c(s^v) = (Js)^v and J^c(s^c) = (Js)^c."""
        base = self.base
        r = self.r
        A = self.algebroid
        cols = []
        for a in range(r):
            jea = Section(base, [J.entry(b, a) for b in range(r)])
            col = self.complete_lift(jea).components
            col = list(col)
            # X_a = e_a^c + C^b_{af} y^f V_b, and J^c V_b = (J e_b)^v
            for f in range(r):
                yf = self.chart.scalar(self.y[f])
                for b in range(r):
                    cf = _relift(self.chart, base.C[b][a][f])
                    if cf.is_structurally_zero():
                        continue
                    for d in range(r):
                        col[r + d] = col[r + d] + yf * cf \
                            * _relift(self.chart, J.entry(d, b))
            cols.append([c.normalize() for c in col])
        for a in range(r):
            col = [self.chart.zero] * (2 * r)
            for b in range(r):
                col[r + b] = _relift(self.chart, J.entry(b, a))
            cols.append(col)
        matrix = [[cols[mu][lam] for mu in range(2 * r)]
                  for lam in range(2 * r)]
        return EndoField(A, matrix)

    def complete_lift_metric(self, g: Metric):
        """g^c as a (possibly degenerate) symmetric matrix of Scalars.

        g^c(X_a, X_b) = y^f rho(e_f) g_ab + C^d_{af} y^f g_db
                        + C^e_{bf} y^f g_ae,
        g^c(X_a, V_b) = g_ab, g^c(V_a, V_b) = 0.
        """
        base = self.base
        r = self.r
        zero = self.chart.zero
        G = [[zero] * (2 * r) for _ in range(2 * r)]
        for a in range(r):
            for b in range(r):
                acc = self.function_complete_lift(g.entry(a, b))
                for f in range(r):
                    yf = self.chart.scalar(self.y[f])
                    for d in range(r):
                        acc = acc + yf * _relift(self.chart, base.C[d][a][f]) \
                            * _relift(self.chart, g.entry(d, b))
                        acc = acc + yf * _relift(self.chart, base.C[d][b][f]) \
                            * _relift(self.chart, g.entry(a, d))
                G[a][b] = acc.normalize()
                gab = _relift(self.chart, g.entry(a, b))
                G[a][r + b] = gab
                G[r + a][b] = gab
        return G

    def sasaki_metric(self, g: Metric, conn: Optional[Connection] = None
                      ) -> Metric:
        """g_L(H,H) = g_L(V,V) = g, g_L(H,V) = 0 over the (X, V) frame."""
        if conn is None:
            conn = levi_civita(self.base, g)
        r = self.r
        chart = self.chart

        def gam(b, a, f):
            return _relift(chart, conn.gamma[b][a][f])

        def gv(a, b):
            return _relift(chart, g.entry(a, b))

        # X_a = H_a + Gamma^b_{af} y^f V_b
        w = [[sum((self.chart.scalar(self.y[f]) * gam(b, a, f)
                   for f in range(r)), chart.zero) for b in range(r)]
             for a in range(r)]
        G = [[chart.zero] * (2 * r) for _ in range(2 * r)]
        for a in range(r):
            for b in range(r):
                acc = gv(a, b)
                for c in range(r):
                    for d in range(r):
                        acc = acc + w[a][c] * w[b][d] * gv(c, d)
                G[a][b] = acc.normalize()
                cross = chart.zero
                for c in range(r):
                    cross = cross + w[a][c] * gv(c, b)
                G[a][r + b] = cross.normalize()
                G[r + b][a] = G[a][r + b]
                G[r + a][r + b] = gv(a, b)
        return Metric(self.algebroid, G)

    def adapted_complex_structure(self, conn: Connection) -> EndoField:
        """J_L with J_L(V_a) = H_a and J_L(H_a) = -V_a."""
        r = self.r
        chart = self.chart

        def gam(b, a, f):
            return _relift(chart, conn.gamma[b][a][f])

        w = [[sum((self.chart.scalar(self.y[f]) * gam(b, a, f)
                   for f in range(r)), chart.zero) for b in range(r)]
             for a in range(r)]
        cols = []
        for a in range(r):
            # J_L X_a = J_L H_a + w[a][b] J_L V_b = -V_a + w[a][b] H_b
            col = [chart.zero] * (2 * r)
            col[r + a] = -chart.one
            for b in range(r):
                col[b] = col[b] + w[a][b]
                for d in range(r):
                    col[r + d] = col[r + d] - w[a][b] * w[b][d]
            cols.append([c.normalize() for c in col])
        for a in range(r):
            # J_L V_a = H_a = X_a - w[a][b] V_b
            col = [chart.zero] * (2 * r)
            col[a] = chart.one
            for b in range(r):
                col[r + b] = col[r + b] - w[a][b]
            cols.append([c.normalize() for c in col])
        matrix = [[cols[mu][lam] for mu in range(2 * r)]
                  for lam in range(2 * r)]
        return EndoField(self.algebroid, matrix)

    def complete_lift_connection(self, conn: Connection) -> Connection:
        """D^c with D^c_{s^c} t^c = (D_s t)^c, D^c_{s^c} t^v =
        D^c_{s^v} t^c = (D_s t)^v and D^c_{s^v} t^v = 0.

        The coefficients are assembled in the lift frame (e^c_a, e^v_a)
        and transformed to the (X, V) frame.
        """
        base = self.base
        r = self.r
        chart = self.chart
        A = self.algebroid
        two_r = 2 * r
        zero = chart.zero

        def gam(d, a, b):
            return _relift(chart, conn.gamma[d][a][b])

        gamma_u = [[[zero] * two_r for _ in range(two_r)]
                   for _ in range(two_r)]
        for a in range(r):
            for b in range(r):
                for d in range(r):
                    gamma_u[d][a][b] = gam(d, a, b)
                    gamma_u[r + d][a][b] = self.function_complete_lift(
                        conn.gamma[d][a][b])
                    gamma_u[r + d][a][r + b] = gam(d, a, b)
                    gamma_u[r + d][r + a][b] = gam(d, a, b)

        # frame change: X_a = u_a + C^b_{af} y^f u_{r+b}, V_a = u_{r+a}
        Q = [[zero] * two_r for _ in range(two_r)]
        for a in range(r):
            Q[a][a] = chart.one
            Q[r + a][r + a] = chart.one
            for b in range(r):
                acc = zero
                for f in range(r):
                    acc = acc + self.chart.scalar(self.y[f]) \
                        * _relift(chart, base.C[b][a][f])
                Q[r + b][a] = acc.normalize()
        Qs = sp.Matrix([[Q[i][j].norm_expr for j in range(two_r)]
                        for i in range(two_r)])
        Qinv = Qs.inv()

        # anchors of the lift frame
        def rho_u(kappa: int) -> VectorField:
            comps = [zero] * chart.dim
            if kappa < r:
                for i in range(self.n):
                    comps[i] = _relift(chart, base.anchor[kappa][i])
                for b in range(r):
                    acc = zero
                    for f in range(r):
                        acc = acc - self.chart.scalar(self.y[f]) \
                            * _relift(chart, base.C[b][kappa][f])
                    comps[self.n + b] = acc
            else:
                comps[self.n + (kappa - r)] = chart.one
            return VectorField(chart, comps)

        rhos = [rho_u(k) for k in range(two_r)]
        gamma_new = [[[zero] * two_r for _ in range(two_r)]
                     for _ in range(two_r)]
        for mu in range(two_r):
            for nu in range(two_r):
                # D_{N_mu} N_nu expanded over the lift frame
                tu = [zero] * two_r
                for kappa in range(two_r):
                    qk = Q[kappa][mu]
                    if qk.is_structurally_zero():
                        continue
                    for sig in range(two_r):
                        qs = Q[sig][nu]
                        dq = rhos[kappa].apply(qs)
                        tu[sig] = tu[sig] + qk * dq
                        if qs.is_structurally_zero():
                            continue
                        for lam in range(two_r):
                            gl = gamma_u[lam][kappa][sig]
                            if gl.is_structurally_zero():
                                continue
                            tu[lam] = tu[lam] + qk * qs * gl
                col = Qinv * sp.Matrix([t.norm_expr for t in tu])
                for tau in range(two_r):
                    gamma_new[tau][mu][nu] = chart.scalar(
                        sp.cancel(sp.together(col[tau])))
        return Connection(A, gamma_new)


def prolong(base: Algebroid) -> Prolongation:
    return Prolongation(base)


# ---------------------------------------------------------------------------


@dataclass
class ProductAlgebroid:
    """Direct product with block anchor, bracket, J and metric."""

    A1: Algebroid
    A2: Algebroid
    algebroid: Algebroid
    J: Optional[EndoField]
    g: Optional[Metric]
    rename: dict

    def inject1(self, s: Section) -> Section:
        chart = self.algebroid.chart
        comps = [chart.scalar(c.expr) for c in s.components] \
            + [chart.zero] * self.A2.rank
        return Section(self.algebroid, comps)

    def inject2(self, s: Section) -> Section:
        chart = self.algebroid.chart
        comps = [chart.zero] * self.A1.rank \
            + [chart.scalar(c.expr.subs(self.rename, simultaneous=True))
               for c in s.components]
        return Section(self.algebroid, comps)


def direct_product(A1: Algebroid, A2: Algebroid,
                   J1: Optional[EndoField] = None,
                   J2: Optional[EndoField] = None,
                   g1: Optional[Metric] = None,
                   g2: Optional[Metric] = None) -> ProductAlgebroid:
    """Block algebroid over the concatenated chart; the second factor's
    coordinates are renamed to stay distinct."""
    d1, d2 = A1.chart.dim, A2.chart.dim
    r1, r2 = A1.rank, A2.rank
    names = [c.name for c in A1.chart.coords]
    new2 = []
    for j in range(d2):
        cand = f"x{d1 + j + 1}"
        while cand in names or cand in new2:
            cand = cand + "_"
        new2.append(cand)
    chart = Chart(f"{A1.chart.name}_x_{A2.chart.name}", names + new2)
    rename = {A2.chart.coords[j]: chart.coord(new2[j]) for j in range(d2)}

    def lift1(s: Scalar) -> Scalar:
        return chart.scalar(s.expr)

    def lift2(s: Scalar) -> Scalar:
        return chart.scalar(s.expr.subs(rename, simultaneous=True))

    anchor = []
    for a in range(r1):
        anchor.append([lift1(A1.anchor[a][i]) for i in range(d1)]
                      + [chart.zero] * d2)
    for a in range(r2):
        anchor.append([chart.zero] * d1
                      + [lift2(A2.anchor[a][i]) for i in range(d2)])
    cdict = {}
    for a in range(r1):
        for b in range(a + 1, r1):
            for c in range(r1):
                if not A1.C[c][a][b].is_structurally_zero():
                    cdict[(a, b, c)] = lift1(A1.C[c][a][b])
    for a in range(r2):
        for b in range(a + 1, r2):
            for c in range(r2):
                if not A2.C[c][a][b].is_structurally_zero():
                    cdict[(r1 + a, r1 + b, r1 + c)] = lift2(A2.C[c][a][b])
    A = Algebroid(chart, r1 + r2, anchor, cdict)

    J = None
    if J1 is not None and J2 is not None:
        rows = [[chart.zero] * (r1 + r2) for _ in range(r1 + r2)]
        for b in range(r1):
            for a in range(r1):
                rows[b][a] = lift1(J1.entry(b, a))
        for b in range(r2):
            for a in range(r2):
                rows[r1 + b][r1 + a] = lift2(J2.entry(b, a))
        J = almost_complex_structure(A, rows)
    g = None
    if g1 is not None and g2 is not None:
        rows = [[chart.zero] * (r1 + r2) for _ in range(r1 + r2)]
        for a in range(r1):
            for b in range(r1):
                rows[a][b] = lift1(g1.entry(a, b))
        for a in range(r2):
            for b in range(r2):
                rows[r1 + a][r1 + b] = lift2(g2.entry(a, b))
        g = Metric(A, rows)
    return ProductAlgebroid(A1, A2, A, J, g, rename)


# ---------------------------------------------------------------------------


@dataclass
class ProjectorRestriction:
    """Restriction of ambient anchored data through an idempotent Pi."""

    chart: Chart
    ambient_rank: int
    Pi: list
    algebroid: Algebroid
    validation: ValidationReport
    anchor_morphism_residuals: list
    flatness_residuals: list
    J: Optional[EndoField]
    J_commutes: Optional[bool]

    @property
    def flat(self) -> bool:
        return all(all(r.is_structurally_zero() for r in comps)
                   for _, comps in self.flatness_residuals)


def projector_restriction(chart: Chart, rho0, Pi, lift,
                          ambient_J=None) -> ProjectorRestriction:
    """Restrict the trivial ambient bundle through the projector Pi.

    ``rho0`` is chart.dim x rank (the ambient anchor), ``Pi`` is
    rank x rank and must be idempotent, ``lift`` is rank x chart.dim and
    maps chart vector fields back to sections.  The restriction has
    anchor rho0 Pi and bracket coefficients C^c_ab =
    lift(vf_bracket(rho_a, rho_b))^c; the flatness residual
    (I - Pi)[Pi e_a, Pi e_b] is recorded for every frame pair.
    """
    rank = len(Pi)
    rho0 = [[chart.scalar(v) for v in row] for row in rho0]
    Pi = [[chart.scalar(v) for v in row] for row in Pi]
    lift = [[chart.scalar(v) for v in row] for row in lift]
    # idempotency
    Pi2 = _mat_mul(Pi, Pi, chart)
    for i in range(rank):
        for j in range(rank):
            if not (Pi2[i][j] - Pi[i][j]).normalize().is_structurally_zero():
                raise ValueError("projector is not idempotent")

    anchor = []
    for a in range(rank):
        row = []
        for i in range(chart.dim):
            acc = chart.zero
            for j in range(rank):
                acc = acc + rho0[i][j] * Pi[j][a]
            row.append(acc.normalize())
        anchor.append(row)
    rho_vfs = [VectorField(chart, anchor[a]) for a in range(rank)]

    cdict = {}
    brs = {}
    for a in range(rank):
        for b in range(a + 1, rank):
            br = vf_bracket(rho_vfs[a], rho_vfs[b])
            brs[(a, b)] = br
            for c in range(rank):
                acc = chart.zero
                for i in range(chart.dim):
                    acc = acc + lift[c][i] * br.components[i]
                acc = acc.normalize()
                if not acc.is_structurally_zero():
                    cdict[(a, b, c)] = acc
    A = Algebroid(chart, rank, anchor, cdict)
    validation = validate_structure(A)

    # anchor morphism of the derived bracket against the chart bracket
    morphism = []
    for (a, b), br in brs.items():
        for i in range(chart.dim):
            acc = -br.components[i]
            for c in range(rank):
                acc = acc + A.C[c][a][b] * A.anchor[c][i]
            morphism.append(((a, b, i), acc.normalize()))

    # flatness: (I - Pi) [Pi e_a, Pi e_b] with constant ambient extensions
    flatness = []
    for a in range(rank):
        for b in range(a + 1, rank):
            amb = []
            for c in range(rank):
                val = rho_vfs[a].apply(Pi[c][b]) - rho_vfs[b].apply(Pi[c][a])
                amb.append(val)
            res = []
            for c in range(rank):
                acc = amb[c]
                for d in range(rank):
                    acc = acc - Pi[c][d] * amb[d]
                res.append(acc.normalize())
            flatness.append(((a, b), res))

    J = None
    commutes = None
    if ambient_J is not None:
        J = almost_complex_structure(A, ambient_J)
        commutes = True
        PiJ = _mat_mul(Pi, [[J.entry(i, j) for j in range(rank)]
                            for i in range(rank)], chart)
        JPi = _mat_mul([[J.entry(i, j) for j in range(rank)]
                        for i in range(rank)], Pi, chart)
        for i in range(rank):
            for j in range(rank):
                if not (PiJ[i][j] - JPi[i][j]).normalize() \
                        .is_structurally_zero():
                    commutes = False
    return ProjectorRestriction(chart, rank, Pi, A, validation, morphism,
                                flatness, J, commutes)


# ---------------------------------------------------------------------------
# fixture catalog


@dataclass
class Fixture:
    name: str
    algebroid: Algebroid
    J: Optional[EndoField] = None
    g: Optional[Metric] = None
    restriction: Optional[ProjectorRestriction] = None
    prolongation: Optional[Prolongation] = None
    product: Optional[ProductAlgebroid] = None


def _flat_r2() -> Fixture:
    chart = Chart("flat_r2", ["x1", "x2"])
    A = Algebroid(chart, 2, [[1, 0], [0, 1]], {})
    J = almost_complex_structure(A, [[0, -1], [1, 0]])
    g = Metric(A, [[1, 0], [0, 1]])
    return Fixture("flat_r2", A, J, g)


def _flat_r4() -> Fixture:
    chart = Chart("flat_r4", ["x1", "x2", "x3", "x4"])
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    A = Algebroid(chart, 4, eye, {})
    J = almost_complex_structure(A, [[0, -1, 0, 0], [1, 0, 0, 0],
                                     [0, 0, 0, -1], [0, 0, 1, 0]])
    g = Metric(A, eye)
    return Fixture("flat_r4", A, J, g)


def _heis_j() -> Fixture:
    chart = Chart("heis_j", ["x1"])
    A = Algebroid(chart, 4, [[0], [0], [0], [0]], {(0, 1, 2): 2})
    J = almost_complex_structure(A, [[0, 0, -1, 0], [0, 0, 0, -1],
                                     [1, 0, 0, 0], [0, 1, 0, 0]])
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    g = Metric(A, eye)
    return Fixture("heis_j", A, J, g)


def _heis_broken() -> Fixture:
    chart = Chart("heis_broken", ["x1"])
    A = Algebroid(chart, 4, [[0], [0], [0], [0]],
                  {(0, 1, 2): 1, (0, 2, 0): 1})
    return Fixture("heis_broken", A)


def _warped_r4() -> Fixture:
    chart = Chart("warped_r4", ["x1", "x2", "x3", "x4"])
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    A = Algebroid(chart, 4, eye, {})
    J = almost_complex_structure(A, [[0, 1, 0, 0], [-1, 0, 0, 0],
                                     [0, 0, 0, 1], [0, 0, -1, 0]])
    w = "1 + x3^2"
    g = Metric(A, [[w, 0, 0, 0], [0, w, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    return Fixture("warped_r4", A, J, g)


def _conformal_sphere_chart() -> Fixture:
    chart = Chart("conformal_sphere_chart", ["x1", "x2"])
    A = Algebroid(chart, 2, [[1, 0], [0, 1]], {})
    J = almost_complex_structure(A, [[0, -1], [1, 0]])
    lam = "4 / (1 + x1^2 + x2^2)^2"
    g = Metric(A, [[lam, 0], [0, lam]])
    return Fixture("conformal_sphere_chart", A, J, g)


def _s3_projector() -> Fixture:
    chart = Chart("s3_projector", ["u1", "u2", "u3"])
    u = list(chart.coords)
    q = 1 + u[0] ** 2 + u[1] ** 2 + u[2] ** 2
    n = sp.Matrix([2 * u[0], 2 * u[1], 2 * u[2], q - 2]) / q
    Pi = sp.eye(4) - n * n.T
    P = n.jacobian(sp.Matrix(u))            # 4 x 3 lift
    # Jacobian of the stereographic chart map at n(u)
    rho0 = sp.zeros(3, 4)
    for i in range(3):
        rho0[i, i] = q / 2
        rho0[i, 3] = u[i] * q / 2
    Jmat = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    restriction = projector_restriction(
        chart,
        [[sp.cancel(rho0[i, j]) for j in range(4)] for i in range(3)],
        [[sp.cancel(Pi[i, j]) for j in range(4)] for i in range(4)],
        [[sp.cancel(P[i, j]) for j in range(3)] for i in range(4)],
        ambient_J=Jmat,
    )
    A = restriction.algebroid
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    g = Metric(A, eye)
    return Fixture("s3_projector", A, restriction.J, g,
                   restriction=restriction)


CATALOG_NAMES = ["flat_r2", "flat_r4", "heis_j", "warped_r4",
                 "conformal_sphere_chart", "s3_projector"]

_BUILDERS = {
    "flat_r2": _flat_r2,
    "flat_r4": _flat_r4,
    "heis_j": _heis_j,
    "heis_broken": _heis_broken,
    "warped_r4": _warped_r4,
    "conformal_sphere_chart": _conformal_sphere_chart,
    "s3_projector": _s3_projector,
}


def fixture_names() -> List[str]:
    return CATALOG_NAMES + ["heis_broken"]


def fixture(name: str) -> Fixture:
    """Catalog lookup; supports prolong(<name>) and product(<a>,<b>)."""
    name = name.strip()
    if name.startswith("prolong(") and name.endswith(")"):
        base = fixture(name[len("prolong("):-1])
        p = prolong(base.algebroid)
        J = p.complete_lift_endo(base.J) if base.J is not None else None
        return Fixture(name, p.algebroid, J=J, prolongation=p)
    if name.startswith("product(") and name.endswith(")"):
        inner = name[len("product("):-1]
        parts = _split_product_args(inner)
        if len(parts) != 2:
            raise KeyError(f"product takes two fixture names: {name!r}")
        f1, f2 = fixture(parts[0]), fixture(parts[1])
        prod = direct_product(f1.algebroid, f2.algebroid,
                              f1.J, f2.J, f1.g, f2.g)
        return Fixture(name, prod.algebroid, J=prod.J, g=prod.g,
                       product=prod)
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}") from None


def _split_product_args(inner: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    parts.append("".join(cur).strip())
    return parts
