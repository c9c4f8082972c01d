"""Infinitesimal integral deformations of an integral map-germ.

A ``DeformationField`` over f holds components (phi_1..phi_n, xi_1..xi_n, s)
in the source variables: the candidate velocity of a deformation of f.  It
is a genuine infinitesimal *integral* deformation when the pullback of the
lifted contact form vanishes, equivalently

    d(e(v)) + sum xi_i d(p_i o f) - sum phi_i d(q_i o f) = 0,

with generating function e(v) = s - sum (p_i o f) xi_i.  That identity is
checked exactly within cap and cached as a certificate.

Jet-level spaces: for jets of degree <= r the membership identity is only
visible in its 1-form coefficients of degree < r, and the one-shot solve at
the slice order over-counts (a jet can satisfy the visible equations without
extending).  ``vi_basis(f, r)`` therefore solves the system at an escalating
working order R and projects to degree <= r, stopping when the projected
dimension repeats: the chain is monotone decreasing and bounded below by the
genuine jet image, so two equal consecutive values pin it.  The same
construction drives ``rf_truncated(f, r)`` (function jets h with dh inside
the truncated module spanned by the differentials of f's components) and the
kernel slices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .contact import contact_hamiltonian
from .errors import (CapShortfallError, UncertifiedFieldError,
                     VariableMismatchError)
from .forms import DiffForm, FieldAlongMap
from .integral_maps import IntegralMap
from .linalg import Echelon, JetSubspace, Row, SolutionSpace, row_from_fractions
from .ring import TruncatedPoly, monomials_upto


class DeformationField:
    """Vector field along an integral map, in (phi, xi, s) fiber layout."""

    def __init__(self, base: IntegralMap, components: Sequence[TruncatedPoly]):
        if len(components) != 2 * base.n + 1:
            raise VariableMismatchError("expected 2n+1 fiber components")
        for comp in components:
            base.source.check_poly(comp)
        self.base = base
        self.components = tuple(components)
        self.cap = min(min(c.cap for c in components), base.cap)
        self._violation = None
        self._checked = False

    def phi(self, i: int) -> TruncatedPoly:
        return self.components[i]

    def xi(self, i: int) -> TruncatedPoly:
        return self.components[self.base.n + i]

    @property
    def s(self) -> TruncatedPoly:
        return self.components[2 * self.base.n]

    def as_field(self) -> FieldAlongMap:
        return FieldAlongMap(self.base.as_map(), self.components)

    def __add__(self, other: "DeformationField") -> "DeformationField":
        if other.base is not self.base and other.base != self.base:
            raise VariableMismatchError("fields along different maps")
        return DeformationField(self.base, [a + b for a, b in
                                            zip(self.components, other.components)])

    def scale(self, c) -> "DeformationField":
        return DeformationField(self.base, [p.scale(c) for p in self.components])

    # -- certificate -----------------------------------------------------------

    def lifted_form_pullback(self) -> DiffForm:
        """v* of the tangent lift of the contact form, as a source 1-form."""
        f = self.base
        alpha = f.target.alpha(self.cap + 1)
        lifted = alpha.tangent_lift()
        return self.as_field().pullback_from_tangent(lifted, active=f.active)

    def violation(self):
        """None for a certified member of the deformation space; otherwise
        the lowest-degree offending term of the pulled-back lifted form."""
        if not self._checked:
            pulled = self.lifted_form_pullback()
            self._violation = None if pulled.is_zero() else pulled.lowest_term()
            self._checked = True
        return self._violation

    def is_integral_deformation(self) -> bool:
        return self.violation() is None

    def require_certified(self, what: str):
        if not self.is_integral_deformation():
            raise UncertifiedFieldError(
                f"{what} requires a certified integral deformation; "
                f"violation {self.violation()}")

    # -- generating function -----------------------------------------------------

    def generating_function(self) -> TruncatedPoly:
        """e(v) = i_v alpha = s - sum (p_i o f) xi_i."""
        f = self.base
        e = self.s
        for i in range(f.n):
            e = e - f.p_component(i) * self.xi(i)
        return e

    def __repr__(self):
        names = self.base.source.names
        labels = ([f"phi{i + 1}" for i in range(self.base.n)]
                  + [f"xi{i + 1}" for i in range(self.base.n)] + ["s"])
        body = "; ".join(f"{l} = {c.render(names)}"
                         for l, c in zip(labels, self.components))
        return f"DeformationField({body})"


def interior_with_alpha(v: DeformationField) -> TruncatedPoly:
    """i_v alpha computed through the forms layer (cross-check route)."""
    f = v.base
    return v.as_field().interior(f.target.alpha(v.cap + 1),
                                 active=f.active).coefficient(())


def tf_apply(f: IntegralMap, xi: Sequence[TruncatedPoly]) -> DeformationField:
    """Push a source vector field through the differential of f."""
    if len(xi) != f.n:
        raise VariableMismatchError("source field needs n components")
    comps = []
    for c in range(2 * f.n + 1):
        total = None
        for j in range(f.n):
            term = xi[j] * f.components[c].partial(j)
            total = term if total is None else total + term
        comps.append(total)
    return DeformationField(f, comps)


def wf_apply(f: IntegralMap, H: TruncatedPoly) -> DeformationField:
    """Evaluate the contact Hamiltonian field of H along f."""
    XH = contact_hamiltonian(f.target, H)
    comps = [f.pullback_function(c) for c in XH.components]
    return DeformationField(f, comps)


def reeb_along(f: IntegralMap, cap: Optional[int] = None) -> DeformationField:
    cap = f.cap if cap is None else cap
    comps = [f.source.zero(cap) for _ in range(2 * f.n)]
    comps.append(f.source.const(1, cap))
    return DeformationField(f, comps)


def module_mult(H: TruncatedPoly, v: DeformationField) -> DeformationField:
    """The module multiplication H * v = f*H v + e(v) (X_H - H R) o f.

    Requires a certified v; the result is certified again (and the
    construction guarantees it within cap).
    """
    v.require_certified("module multiplication")
    f = v.base
    f.target.chart.check_poly(H)
    fH = f.pullback_function(H)
    e = v.generating_function()
    cc = f.target
    XH = contact_hamiltonian(cc, H)
    # X_H - H R only changes the dr slot
    correction = list(XH.components)
    correction[cc.r_index] = correction[cc.r_index] - H.truncate(
        min(H.cap, correction[cc.r_index].cap))
    comps = []
    for c in range(2 * f.n + 1):
        comps.append(fH * v.components[c] + e * f.pullback_function(correction[c]))
    out = DeformationField(f, comps)
    out.require_certified("module multiplication result")
    return out


# -- jet ambient and linear systems ---------------------------------------------


class DeformAmbient:
    """Coordinates on the space of component jets of degree <= order.

    Column index is monomial-major with graded ascending monomials, so the
    largest column of a vector is its highest-degree coefficient; the
    elimination pivots on those.
    """

    def __init__(self, f: IntegralMap, order: int):
        if f.params:
            raise VariableMismatchError("jet spaces need a parameter-free germ")
        self.f = f
        self.order = order
        self.ncomps = 2 * f.n + 1
        self.monomials = monomials_upto(f.source.dim, order)
        self.mono_pos = {m: i for i, m in enumerate(self.monomials)}
        self.dim = self.ncomps * len(self.monomials)

    def column(self, comp: int, mono: Tuple[int, ...]) -> int:
        return self.mono_pos[mono] * self.ncomps + comp

    def field_to_row(self, v: DeformationField) -> Row:
        """Truncate the field to the jet order and vectorize."""
        entries: Dict[int, Fraction] = {}
        for c, poly in enumerate(v.components):
            for mono, coeff in poly.terms.items():
                if sum(mono) <= self.order:
                    entries[self.column(c, mono)] = coeff
        return row_from_fractions(entries)

    def row_to_field(self, row: Row) -> DeformationField:
        polys = []
        for c in range(self.ncomps):
            terms = {}
            for col, val in row.items():
                if col % self.ncomps == c:
                    terms[self.monomials[col // self.ncomps]] = Fraction(val)
            polys.append(TruncatedPoly(self.f.source.dim, self.order,
                                       self.f.source.kinds, terms))
        return DeformationField(self.f, polys)


class PolyAmbient:
    """Coordinates on the space of function jets of degree <= order."""

    def __init__(self, nvars: int, order: int, kinds=None):
        self.nvars = nvars
        self.order = order
        self.kinds = kinds
        self.monomials = monomials_upto(nvars, order)
        self.mono_pos = {m: i for i, m in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def poly_to_row(self, h: TruncatedPoly) -> Row:
        entries = {self.mono_pos[m]: c for m, c in h.terms.items()
                   if sum(m) <= self.order}
        return row_from_fractions(entries)

    def row_to_poly(self, row: Row, kinds) -> TruncatedPoly:
        terms = {self.monomials[col]: Fraction(val) for col, val in row.items()}
        return TruncatedPoly(self.nvars, self.order, kinds, terms)


def _vi_constraint_rows(f: IntegralMap, order: int, ambient: DeformAmbient):
    """Sparse rows of the membership system: for v of jet degree <= order,
    the coefficients of degree < order of

        d(s) - sum (p_i o f) d(xi_i) - sum phi_i d(q_i o f)

    must vanish.  Equations are indexed by (dx_j, monomial mu)."""
    n = f.n
    nv = f.source.dim
    cap_needed = order + 1
    if f.cap < cap_needed:
        raise CapShortfallError(
            f"jet system at order {order} needs cap >= {cap_needed}, f has {f.cap}")
    eq_index: Dict[Tuple[int, Tuple[int, ...]], Dict[int, Fraction]] = {}

    def eq(j, mu) -> Dict[int, Fraction]:
        got = eq_index.get((j, mu))
        if got is None:
            got = {}
            eq_index[(j, mu)] = got
        return got

    def scatter(j, mu, col, value):
        if sum(mu) <= order - 1:
            row = eq(j, mu)
            row[col] = row.get(col, Fraction(0)) + value

    s_slot = 2 * n
    p_terms = [list(f.p_component(i).terms.items()) for i in range(n)]
    dq = [[f.q_component(i).partial(j) for j in range(n)] for i in range(n)]
    for pos, m in enumerate(ambient.monomials):
        # d(s): sum_j m_j x^{m - e_j} dx_j
        col = ambient.column(s_slot, m)
        for j in range(n):
            if m[j]:
                mu = m[:j] + (m[j] - 1,) + m[j + 1:]
                scatter(j, mu, col, Fraction(m[j]))
        # -(p_i o f) d(xi_i)
        for i in range(n):
            col = ambient.column(n + i, m)
            for j in range(n):
                if not m[j]:
                    continue
                base = m[:j] + (m[j] - 1,) + m[j + 1:]
                for pmono, pcoeff in p_terms[i]:
                    mu = tuple(a + b for a, b in zip(base, pmono))
                    scatter(j, mu, col, -pcoeff * m[j])
        # -phi_i d(q_i o f)
        for i in range(n):
            col = ambient.column(i, m)
            for j in range(n):
                for qmono, qcoeff in dq[i][j].terms.items():
                    mu = tuple(a + b for a, b in zip(m, qmono))
                    scatter(j, mu, col, -qcoeff)
    return [row_from_fractions(r) for r in eq_index.values() if r]


def _e_vanishing_rows(f: IntegralMap, order: int, ambient: DeformAmbient):
    """Rows forcing the generating function e(v) = s - sum (p_i o f) xi_i to
    vanish in all coefficients of degree <= order."""
    n = f.n
    eq_index: Dict[Tuple[int, ...], Dict[int, Fraction]] = {}

    def scatter(mu, col, value):
        if sum(mu) <= order:
            row = eq_index.setdefault(mu, {})
            row[col] = row.get(col, Fraction(0)) + value

    for m in ambient.monomials:
        scatter(m, ambient.column(2 * n, m), Fraction(1))
        for i in range(n):
            col = ambient.column(n + i, m)
            for pmono, pcoeff in f.p_component(i).terms.items():
                mu = tuple(a + b for a, b in zip(m, pmono))
                scatter(mu, col, -pcoeff)
    return [row_from_fractions(r) for r in eq_index.values() if r]


def _slice_rows(f: IntegralMap, order: int, ambient: DeformAmbient, variant: str,
                e_degree: Optional[int] = None):
    rows = _vi_constraint_rows(f, order, ambient)
    if variant == "generating_kernel":
        rows.extend(_e_vanishing_rows(
            f, order if e_degree is None else e_degree, ambient))
    elif variant == "projection_kernel":
        for c in range(2 * f.n):
            for m in ambient.monomials:
                rows.append({ambient.column(c, m): 1})
    elif variant != "full":
        raise ValueError(f"unknown slice variant {variant!r}")
    return rows


@dataclass
class SliceData:
    """Dimension data of a projected jet slice of the deformation space."""
    order: int
    working_order: int
    stabilized: bool
    dim: int
    variant: str


def _projected_slice_dim(f: IntegralMap, order: int, working_order: int,
                         variant: str, e_degree: Optional[int] = None) -> int:
    """dim of the projection to degree <= order of the solution space of the
    membership system at the working order, by rank arithmetic: no basis is
    ever materialized."""
    ambient = DeformAmbient(f, working_order)
    ech = Echelon()
    for row in _slice_rows(f, working_order, ambient, variant, e_degree):
        ech.insert(row)
    rank_constraints = ech.rank
    for pos, m in enumerate(ambient.monomials):
        if sum(m) <= order:
            for c in range(ambient.ncomps):
                ech.insert({pos * ambient.ncomps + c: 1})
    return ech.rank - rank_constraints


def deformation_slice(f: IntegralMap, order: int, variant: str = "full",
                      max_working_order: Optional[int] = None,
                      e_degree: Optional[int] = None) -> SliceData:
    """Projected jet slice of the deformation space at the given order.

    The membership system is linear only on jets of a fixed degree, and its
    one-shot solution at the slice order over-counts: jets may satisfy the
    visible equations without extending to higher order.  The slice is
    therefore computed at an increasing working order and projected down,
    stopping when the projected dimension repeats (monotone decreasing, so
    two equal consecutive values pin it) or the cap is exhausted.
    """
    if max_working_order is None:
        max_working_order = f.cap - 1
    if max_working_order < order:
        raise CapShortfallError(
            f"slice at order {order} needs cap >= {order + 1}, f has {f.cap}")
    R = order
    prev = _projected_slice_dim(f, order, R, variant, e_degree)
    stabilized = False
    while R < max_working_order:
        nxt = _projected_slice_dim(f, order, R + 1, variant, e_degree)
        R += 1
        if nxt == prev:
            stabilized = True
            break
        prev = nxt
    return SliceData(order, R, stabilized, prev, variant)


def materialize_slice(f: IntegralMap, order: int, working_order: int,
                      variant: str = "full",
                      e_degree: Optional[int] = None) -> JetSubspace:
    """Reduced basis, in order-r jet coordinates, of the projected slice."""
    amb_high = DeformAmbient(f, working_order)
    amb_low = DeformAmbient(f, order)
    rows = _slice_rows(f, working_order, amb_high, variant, e_degree)
    sol = SolutionSpace(rows, amb_high.dim)
    keep: Dict[int, int] = {}
    for pos, m in enumerate(amb_high.monomials):
        if sum(m) <= order:
            for c in range(amb_high.ncomps):
                keep[pos * amb_high.ncomps + c] = amb_low.column(c, m)
    out = JetSubspace(amb_low.dim)
    for vec in sol.basis_iter():
        out.insert({keep[c]: v for c, v in vec.items() if c in keep})
    return out


def vi_basis(f: IntegralMap, order: int,
             working_order: Optional[int] = None) -> JetSubspace:
    """Reduced basis of the jet slice of the deformation space at the given
    order (stabilized projection from the working order)."""
    if working_order is None:
        working_order = deformation_slice(f, order).working_order
    return materialize_slice(f, order, working_order)


def kernel_slice(f: IntegralMap, order: int,
                 working_order: Optional[int] = None,
                 truncated: bool = False) -> JetSubspace:
    """Jet slice of the deformations with vanishing generating function.

    ``truncated=True`` only kills the coefficients of e up to the slice
    order (the kernel of the truncated generating-function map on the
    slice); the default kills e through the working order, the jet image
    of the genuine kernel.
    """
    e_degree = order if truncated else None
    if working_order is None:
        working_order = deformation_slice(
            f, order, "generating_kernel", e_degree=e_degree).working_order
    return materialize_slice(f, order, working_order, "generating_kernel",
                             e_degree=e_degree)


def projection_kernel_slice(f: IntegralMap, order: int,
                            working_order: Optional[int] = None) -> JetSubspace:
    """Jet slice of the members killed by forgetting the Reeb direction
    (phi = xi = 0).  Generated by constants times the Reeb field along f."""
    if working_order is None:
        working_order = deformation_slice(f, order, "projection_kernel").working_order
    return materialize_slice(f, order, working_order, "projection_kernel")


# -- function-side slice ------------------------------------------------------------


def _rf_system(f: IntegralMap, order: int):
    """Constraint rows for jets h with dh = sum a_c d(f_c) below the order.

    Columns: the h block (monomials of degree <= order) first, then one
    coefficient block per component (degree <= order - 1)."""
    nv = f.source.dim
    h_amb = PolyAmbient(nv, order)
    a_amb = PolyAmbient(nv, max(order - 1, 0))
    ncomps = 2 * f.n + 1
    a_offset = h_amb.dim
    ncols = h_amb.dim + ncomps * a_amb.dim
    eq_index: Dict[Tuple[int, Tuple[int, ...]], Dict[int, Fraction]] = {}

    def scatter(j, mu, col, value):
        if sum(mu) <= order - 1:
            row = eq_index.setdefault((j, mu), {})
            row[col] = row.get(col, Fraction(0)) + value

    for pos, m in enumerate(h_amb.monomials):
        for j in range(f.n):
            if m[j]:
                mu = m[:j] + (m[j] - 1,) + m[j + 1:]
                scatter(j, mu, pos, Fraction(m[j]))
    dcomps = [[f.components[c].partial(j) for j in range(f.n)]
              for c in range(ncomps)]
    for c in range(ncomps):
        for apos, am in enumerate(a_amb.monomials):
            col = a_offset + c * a_amb.dim + apos
            for j in range(f.n):
                for dmono, dcoeff in dcomps[c][j].terms.items():
                    mu = tuple(x + y for x, y in zip(am, dmono))
                    scatter(j, mu, col, -dcoeff)
    rows = [row_from_fractions(r) for r in eq_index.values() if r]
    return rows, ncols, h_amb


def _rf_projected_dim(f: IntegralMap, order: int, working_order: int) -> int:
    rows, ncols, h_amb = _rf_system(f, working_order)
    ech = Echelon()
    for row in rows:
        ech.insert(row)
    rank_constraints = ech.rank
    for pos, m in enumerate(h_amb.monomials):
        if sum(m) <= order:
            ech.insert({pos: 1})
    return ech.rank - rank_constraints


def rf_truncated(f: IntegralMap, order: int,
                 working_order: Optional[int] = None) -> JetSubspace:
    """Jets h of degree <= order with dh inside the truncated module spanned
    by the differentials of f's components (projected from a stabilized
    working order, as for the deformation slice)."""
    if f.cap < order + 1:
        raise CapShortfallError(
            f"rf system at order {order} needs cap >= {order + 1}, f has {f.cap}")
    if working_order is None:
        R = order
        prev = _rf_projected_dim(f, order, R)
        while R < f.cap - 1:
            nxt = _rf_projected_dim(f, order, R + 1)
            R += 1
            if nxt == prev:
                break
            prev = nxt
        working_order = R
    rows, ncols, h_amb_high = _rf_system(f, working_order)
    sol = SolutionSpace(rows, ncols)
    h_amb = PolyAmbient(f.source.dim, order)
    keep = {}
    for pos, m in enumerate(h_amb_high.monomials):
        if sum(m) <= order:
            keep[pos] = h_amb.mono_pos[m]
    out = JetSubspace(h_amb.dim)
    for vec in sol.basis_iter():
        out.insert({keep[c]: v for c, v in vec.items() if c in keep})
    return out


def generating_function_image(f: IntegralMap, order: int,
                              slice_space: Optional[JetSubspace] = None) -> JetSubspace:
    """Span of truncated generating functions of the jet slice."""
    if slice_space is None:
        slice_space = vi_basis(f, order)
    ambient = DeformAmbient(f, order)
    h_amb = PolyAmbient(f.source.dim, order)
    out = JetSubspace(h_amb.dim)
    for row in slice_space.basis_rows():
        v = ambient.row_to_field(row)
        e = v.generating_function()
        out.insert(h_amb.poly_to_row(e))
    return out
