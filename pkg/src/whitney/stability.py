"""Jet-level stability verdicts for integral map-germs.

Every check here is a finite, exact linear-algebra computation on truncated
jets, and every verdict is qualified by the jet order r and the cap used:
"fail" means a strictly positive deficiency at this order, "inconclusive"
means the cap was too small to stabilize the answer.  The jet slice of the
deformation space is an outer approximation (see ``deformations.vi_basis``),
which the reports record as a caveat.

Checks provided:

* contact / Legendre infinitesimal stability at order r: the jet slice of
  deformations must be filled by pushforwards of source fields plus contact
  (resp. fibration-lowerable) Hamiltonian fields along f;
* generation of the fiber quotient of the pullback algebra by the classes
  of 1 and the p-components, at a fixed order and in the stabilized form;
* the conclusive order: the smallest r such that every pullback-algebra
  element of vanishing r-jet is a pullback from the (n+2)-nd power of the
  target maximal ideal;
* umbrella type classification by local multiplicity, gated on the contact
  verdict;
* the additive extension of two integral unfoldings in graph form over the
  joined parameter space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .deformations import (DeformAmbient, PolyAmbient, SliceData,
                           _slice_rows, deformation_slice, materialize_slice)
from .errors import CapShortfallError, VariableMismatchError
from .forms import source_chart
from .integral_maps import IntegralMap, complete_from_uv
from .linalg import Echelon, JetSubspace, SolutionSpace, row_from_fractions
from .ring import INF, TruncatedPoly, monomials_upto

OUTER_APPROX_CAVEAT = (
    "jet slice is the projection of the membership system solved at the "
    "working order; an outer approximation of the genuine jet image, pinned "
    "when two consecutive working orders agree")


# -- reports ----------------------------------------------------------------------


@dataclass
class StabilityReport:
    germ: str
    mode: str
    order: int
    cap: int
    verdict: str                      # pass | fail | inconclusive
    dims: Dict[str, int] = field(default_factory=dict)
    sub_verdicts: Dict[str, str] = field(default_factory=dict)
    generator_bounds: Dict[str, int] = field(default_factory=dict)
    witnesses: List[str] = field(default_factory=list)
    caveats: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_doc(self) -> dict:
        return {
            "germ": self.germ,
            "mode": self.mode,
            "order": self.order,
            "cap": self.cap,
            "verdict": self.verdict,
            "dims": dict(sorted(self.dims.items())),
            "sub_verdicts": dict(sorted(self.sub_verdicts.items())),
            "generator_bounds": dict(sorted(self.generator_bounds.items())),
            "witnesses": list(self.witnesses),
            "caveats": list(self.caveats),
        }

    def render_text(self) -> str:
        lines = [f"germ: {self.germ}",
                 f"mode: {self.mode}",
                 f"order: {self.order}",
                 f"cap: {self.cap}",
                 f"verdict: {self.verdict}"]
        for key, val in sorted(self.dims.items()):
            lines.append(f"dim {key}: {val}")
        for key, val in sorted(self.sub_verdicts.items()):
            lines.append(f"{key}: {val}")
        for key, val in sorted(self.generator_bounds.items()):
            lines.append(f"bound {key}: {val}")
        for w in self.witnesses:
            lines.append(f"cokernel witness: {w}")
        for c in self.caveats:
            lines.append(f"caveat: {c}")
        return "\n".join(lines)


def _germ_label(f: IntegralMap) -> str:
    return f"{f.provenance}[n={f.n}]"


# -- pullback algebra spans ----------------------------------------------------------


_product_cache: Dict[Tuple, List] = {}


def pullback_products(f: IntegralMap, degree: int):
    """All distinct products of components truncated at ``degree``.

    Returns (n_factors, n_base_factors, poly) triples, where base factors
    count q- and r-components (pullbacks from the fibration base).  Zero
    truncations are pruned together with their whole multiplicative cone.
    """
    key = (f, degree)
    got = _product_cache.get(key)
    if got is not None:
        return got
    if f.cap < degree:
        raise CapShortfallError(
            f"products to degree {degree} need cap >= {degree}, f has {f.cap}")
    comps = [c.truncate(degree) if c.cap > degree else c for c in f.components]
    usable = [i for i, c in enumerate(comps) if not c.is_zero()]
    one = f.source.const(1, degree)
    out = [(0, 0, one)]

    def rec(slot: int, nfac: int, base_fac: int, prod: TruncatedPoly):
        for pos in range(slot, len(usable)):
            i = usable[pos]
            nxt = prod * comps[i]
            if nxt.is_zero():
                continue
            nb = base_fac + (1 if i >= f.n else 0)
            out.append((nfac + 1, nb, nxt))
            rec(pos, nfac + 1, nb, nxt)

    rec(0, 0, 0, one)
    _product_cache[key] = out
    return out


_span_cache: Dict[Tuple, JetSubspace] = {}


def _algebra_span(f: IntegralMap, degree: int, min_factors: int = 0,
                  min_base_factors: int = 0) -> JetSubspace:
    key = (f, degree, min_factors, min_base_factors)
    got = _span_cache.get(key)
    if got is not None:
        return got
    amb = PolyAmbient(f.source.dim, degree)
    sub = JetSubspace(amb.dim)
    for nfac, base_fac, poly in pullback_products(f, degree):
        if nfac >= min_factors and base_fac >= min_base_factors:
            sub.insert(amb.poly_to_row(poly))
    _span_cache[key] = sub
    return sub


def pullback_algebra_span(f: IntegralMap, degree: int) -> JetSubspace:
    """Truncation of the pullback algebra of target functions."""
    return _algebra_span(f, degree)


def pullback_power_span(f: IntegralMap, degree: int, k: int) -> JetSubspace:
    """Truncation of the pullbacks from the k-th power of the target
    maximal ideal."""
    return _algebra_span(f, degree, min_factors=k)


def base_ideal_span(f: IntegralMap, degree: int) -> JetSubspace:
    """Truncation of (base functions vanishing at 0) * pullback algebra,
    the fibration base acting through q o f and r o f."""
    return _algebra_span(f, degree, min_base_factors=1)


def _p_class_span(f: IntegralMap, degree: int) -> JetSubspace:
    amb = PolyAmbient(f.source.dim, degree)
    sub = JetSubspace(amb.dim)
    sub.insert(amb.poly_to_row(f.source.const(1, degree)))
    for i in range(f.n):
        sub.insert(amb.poly_to_row(f.p_component(i)))
    return sub


# -- local multiplicity --------------------------------------------------------------


def _multiplicity_at(f: IntegralMap, degree: int) -> int:
    amb = PolyAmbient(f.source.dim, degree)
    ech = Echelon()
    for comp in f.components:
        if comp.is_zero():
            continue
        for m in amb.monomials:
            shifted = {}
            for mono, coeff in comp.terms.items():
                new = tuple(a + b for a, b in zip(mono, m))
                if sum(new) <= degree:
                    shifted[amb.mono_pos[new]] = coeff
            if shifted:
                ech.insert(row_from_fractions(shifted))
    return amb.dim - ech.rank


def local_multiplicity(f: IntegralMap, degree: Optional[int] = None):
    """dim of source functions modulo the ideal of the components, at jet
    scale, with a cap+1 stabilization flag."""
    degree = f.cap if degree is None else degree
    if degree < 2:
        raise CapShortfallError("multiplicity needs degree >= 2")
    low = _multiplicity_at(f, degree - 1)
    high = _multiplicity_at(f, degree)
    return high, low == high


# -- contact / Legendre infinitesimal stability ----------------------------------------


def _tf_rows(f: IntegralMap, order: int, ambient: DeformAmbient):
    """Rows of pushforwards of monomial source fields, truncated."""
    rows = []
    dcomps = [[f.components[c].partial(j) for j in range(f.n)]
              for c in range(2 * f.n + 1)]
    for j in range(f.n):
        for m in monomials_upto(f.source.dim, order):
            entries: Dict[int, Fraction] = {}
            for c in range(2 * f.n + 1):
                for mono, coeff in dcomps[c][j].terms.items():
                    new = tuple(a + b for a, b in zip(mono, m))
                    if sum(new) <= order:
                        col = ambient.column(c, new)
                        entries[col] = entries.get(col, Fraction(0)) + coeff
            if entries:
                rows.append(row_from_fractions(entries))
    return rows


def _hamiltonian_exponents(f: IntegralMap, order: int, legendre: bool):
    """Exponent vectors of monomial Hamiltonians that can contribute to the
    jet slice at this order.

    A monomial of target exponent e composes along f with source order
    sum e_i ord_i, and each slot of its Hamiltonian field divides out at
    most one variable; exponents whose every slot lands above the jet order
    are pruned.  Components pulled back to zero may appear with exponent at
    most one (only the divided slot can survive).  The total degree is also
    bounded by order + 2.
    """
    ncomps = 2 * f.n + 1
    orders = []
    for c in f.components:
        o = c.order()
        orders.append(None if o == INF else int(o))
    finite = [o for o in orders if o is not None]
    maxord = max(finite) if finite else 1
    budget = order + maxord
    result = []

    def rec(slot: int, e: List[int], weighted: int, total: int):
        if slot == ncomps:
            if any(e):
                result.append(tuple(e))
            return
        if legendre and slot < f.n:
            # affine in p: at most one p factor overall
            limit = 1 - sum(e[:slot])
        else:
            limit = None
        k = 0
        while True:
            if limit is not None and k > limit:
                break
            if total + k > order + 2:
                break
            w = orders[slot]
            if w is None:
                if k > 1:
                    break
                extra = 0
            else:
                extra = w * k
                if weighted + extra > budget:
                    break
            e[slot] = k
            rec(slot + 1, e, weighted + extra, total + k)
            e[slot] = 0
            k += 1

    rec(0, [0] * ncomps, 0, 0)
    return result


def _composed_monomials(f: IntegralMap, order: int):
    """DP table: target exponent tuple -> product of component powers,
    truncated at the jet order; zero entries pruned."""
    table: Dict[Tuple[int, ...], TruncatedPoly] = {}
    one = f.source.const(1, order)
    zero_key = (0,) * (2 * f.n + 1)
    table[zero_key] = one
    comps = [c.truncate(order) if c.cap > order else c for c in f.components]

    def get(e: Tuple[int, ...]) -> Optional[TruncatedPoly]:
        got = table.get(e)
        if got is not None:
            return got if not got.is_zero() else None
        if e == zero_key:
            return one
        # reduce along the first positive slot
        for i, k in enumerate(e):
            if k:
                prev = get(e[:i] + (k - 1,) + e[i + 1:])
                if prev is None:
                    val = None
                else:
                    val = prev * comps[i]
                    if val.is_zero():
                        val = None
                table[e] = val if val is not None else f.source.zero(order)
                return val
        return None

    return get


def _wf_rows(f: IntegralMap, order: int, ambient: DeformAmbient, legendre: bool):
    """Rows of Hamiltonian fields along f for monomial Hamiltonians.

    Components of the field of H = w^e along f, written with the composed
    monomial table M:
      phi_i slot: e_{q_i} M(e - u_{q_i}) + e_r M(e - u_r + u_{p_i})
      xi_i  slot: -e_{p_i} M(e - u_{p_i})
      r    slot: (1 - sum_i e_{p_i}) M(e)
    """
    n = f.n
    ncomps = 2 * n + 1
    r_slot = 2 * n
    M = _composed_monomials(f, order)
    rows = []
    amb_col = ambient.column

    def add_poly(entries, comp_slot, poly, factor):
        if poly is None or factor == 0:
            return
        for mono, coeff in poly.terms.items():
            col = amb_col(comp_slot, mono)
            entries[col] = entries.get(col, Fraction(0)) + coeff * factor

    for e in _hamiltonian_exponents(f, order, legendre):
        entries: Dict[int, Fraction] = {}
        e_r = e[r_slot]
        p_total = sum(e[:n])
        # phi_i slots
        for i in range(n):
            if e[n + i]:
                reduced = list(e)
                reduced[n + i] -= 1
                add_poly(entries, i, M(tuple(reduced)), Fraction(e[n + i]))
            if e_r:
                shifted = list(e)
                shifted[r_slot] -= 1
                shifted[i] += 1
                add_poly(entries, i, M(tuple(shifted)), Fraction(e_r))
        # xi_i slots
        for i in range(n):
            if e[i]:
                reduced = list(e)
                reduced[i] -= 1
                add_poly(entries, n + i, M(tuple(reduced)), Fraction(-e[i]))
        # r slot
        if p_total != 1:
            add_poly(entries, r_slot, M(e), Fraction(1 - p_total))
        if entries:
            rows.append(row_from_fractions(entries))
    # the constant Hamiltonian H = 1 contributes the Reeb field along f
    rows.append({amb_col(r_slot, (0,) * f.source.dim): 1})
    return rows


def _stability_check(f: IntegralMap, order: int, legendre: bool,
                     germ_label: Optional[str] = None) -> StabilityReport:
    if f.params:
        raise VariableMismatchError("stability checks need a parameter-free germ")
    if f.cap < order + 1:
        raise CapShortfallError(
            f"stability check at order {order} needs cap >= {order + 1}")
    ambient = DeformAmbient(f, order)
    outer = SolutionSpace(_slice_rows(f, order, ambient, "full"), ambient.dim)
    tf_rows = _tf_rows(f, order, ambient)
    wf_rows = _wf_rows(f, order, ambient, legendre)
    # structural guard: every generator satisfies the membership equations
    for row in tf_rows + wf_rows:
        if not outer.satisfies(row):
            raise AssertionError("generator escaped the jet slice; cap too small?")
    tf_span = JetSubspace.from_rows(ambient.dim, (dict(r) for r in tf_rows))
    wf_span = JetSubspace.from_rows(ambient.dim, (dict(r) for r in wf_rows))
    total = JetSubspace(ambient.dim)
    for row in tf_rows + wf_rows:
        total.insert(dict(row))
    if outer.dim == total.dim:
        # the one-shot slice already agrees with the span: projection can
        # only sit between them, so the verdict is pinched to pass
        slice_data = SliceData(order, order, True, outer.dim, "full")
    else:
        slice_data = deformation_slice(f, order)
    deficiency = slice_data.dim - total.dim
    if deficiency == 0:
        verdict = "pass"
    elif slice_data.stabilized:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    witnesses = []
    if verdict == "fail":
        seen = Echelon()
        found = 0
        materialized = materialize_slice(f, order, slice_data.working_order)
        for vec in materialized.basis_rows():
            residual = total.residual(vec)
            if residual and seen.insert(residual):
                witnesses.append(ambient.row_to_field(vec))
                found += 1
                if found == deficiency:
                    break
    mode = "legendre" if legendre else "contact"
    report = StabilityReport(
        germ=germ_label or _germ_label(f),
        mode=mode,
        order=order,
        cap=f.cap,
        verdict=verdict,
        dims={
            "deformation_slice": slice_data.dim,
            "pushforward_span": tf_span.dim,
            "hamiltonian_span": wf_span.dim,
            "combined_span": total.dim,
            "deficiency": deficiency,
        },
        sub_verdicts={
            "slice_stabilized": "yes" if slice_data.stabilized else "no",
        },
        generator_bounds={
            "source_field_degree": order,
            "hamiltonian_degree": order + 2,
            "slice_working_order": slice_data.working_order,
        },
        witnesses=[repr(w) for w in witnesses],
        caveats=[OUTER_APPROX_CAVEAT],
    )
    if legendre:
        report.sub_verdicts["hamiltonians"] = "affine in p (lowerable through the fibration)"
    return report


def check_contact_stability(f: IntegralMap, order: int) -> StabilityReport:
    """Jet-order test of infinitesimal contact stability: the deformation
    slice must equal the span of pushforwards and Hamiltonian fields."""
    return _stability_check(f, order, legendre=False)


def check_legendre_stability(f: IntegralMap, order: int) -> StabilityReport:
    """Same with Hamiltonians restricted to those affine in p, the fields
    lowerable through the fibration (p, q, r) -> (q, r)."""
    return _stability_check(f, order, legendre=True)


# -- fiber generation conditions ----------------------------------------------------


def check_fiber_generation(f: IntegralMap, order: int,
                           contact_report: Optional[StabilityReport] = None
                           ) -> StabilityReport:
    """Order-r generation condition on the fiber quotient of the pullback
    algebra (CLI mode "a2r").

    The quotient of the truncated pullback algebra by (base ideal) *
    (pullback algebra) + (elements of vanishing (r+1)-jet) must be generated
    by the classes of 1 and the p-components, and f must pass the umbrella
    gate (the contact check at the same order): both clauses of the
    condition.
    """
    degree = order + 1
    if f.cap < degree:
        raise CapShortfallError(
            f"fiber generation at order {order} needs cap >= {degree}")
    algebra = pullback_algebra_span(f, degree)
    denominator = base_ideal_span(f, degree)
    quotient_dim = algebra.dim - denominator.dim
    generated = denominator.sum(_p_class_span(f, degree)).contains_subspace(algebra)
    if contact_report is None:
        contact_report = check_contact_stability(f, order)
    gate = contact_report.verdict
    if gate == "inconclusive":
        verdict = "inconclusive"
    else:
        verdict = "pass" if (generated and gate == "pass") else "fail"
    report = StabilityReport(
        germ=_germ_label(f),
        mode="a2r",
        order=order,
        cap=f.cap,
        verdict=verdict,
        dims={
            "algebra_slice": algebra.dim,
            "denominator": denominator.dim,
            "fiber_quotient": quotient_dim,
        },
        sub_verdicts={
            "generated_by_1_and_p": "pass" if generated else "fail",
            "umbrella_gate": gate,
        },
        caveats=["umbrella gate decided by the contact check at the same order"],
    )
    return report


@dataclass
class FiberQuotient:
    dim: int
    generated: bool
    stabilized: bool
    degree: int


def fiber_quotient(f: IntegralMap, degree: Optional[int] = None) -> FiberQuotient:
    """Dimension of the stabilized fiber quotient and its generation verdict
    (raw algebra facts; the stability condition additionally needs the
    umbrella gate)."""
    degree = f.cap if degree is None else degree
    if degree < 2:
        raise CapShortfallError("fiber quotient needs degree >= 2")
    mult, mult_stable = local_multiplicity(f, degree)
    dims = []
    gens = []
    for d in (degree - 1, degree):
        algebra = pullback_algebra_span(f, d)
        denominator = base_ideal_span(f, d)
        dims.append(algebra.dim - denominator.dim)
        gens.append(denominator.sum(_p_class_span(f, d)).contains_subspace(algebra))
    return FiberQuotient(dim=dims[1], generated=gens[1],
                         stabilized=(dims[0] == dims[1] and gens[0] == gens[1]
                                     and mult_stable),
                         degree=degree)


def check_generation_stable(f: IntegralMap, order: int,
                            contact_report: Optional[StabilityReport] = None
                            ) -> StabilityReport:
    """Stabilized generation condition (CLI mode behind "a2r"'s big brother):
    same clauses with the quotient computed at the working cap and required
    to be cap-stable."""
    fq = fiber_quotient(f)
    if contact_report is None:
        contact_report = check_contact_stability(f, order)
    gate = contact_report.verdict
    if not fq.stabilized or gate == "inconclusive":
        verdict = "inconclusive"
    else:
        verdict = "pass" if (fq.generated and gate == "pass") else "fail"
    return StabilityReport(
        germ=_germ_label(f),
        mode="a_prime",
        order=order,
        cap=f.cap,
        verdict=verdict,
        dims={"fiber_quotient": fq.dim},
        sub_verdicts={
            "generated_by_1_and_p": "pass" if fq.generated else "fail",
            "stabilized": "yes" if fq.stabilized else "no",
            "umbrella_gate": gate,
        },
    )


# -- conclusive order -----------------------------------------------------------------


@dataclass
class ConclusiveOrder:
    value: Optional[int]
    stable: bool
    degree: int
    search_cap: int

    @property
    def conclusive(self) -> bool:
        return self.value is not None and self.stable


def _order_slice(f: IntegralMap, degree: int, min_order: int) -> JetSubspace:
    """Subspace of the truncated pullback algebra of elements of vanishing
    (min_order-1)-jet."""
    algebra = pullback_algebra_span(f, degree)
    amb = PolyAmbient(f.source.dim, degree)
    high = JetSubspace(amb.dim)
    for pos, m in enumerate(amb.monomials):
        if sum(m) >= min_order:
            high.insert({pos: 1})
    return algebra.intersection(high)


def _inclusion_order_at(f: IntegralMap, degree: int, search_cap: int) -> Optional[int]:
    target = pullback_power_span(f, degree, f.n + 2)
    for r in range(search_cap + 1):
        inside = _order_slice(f, degree, r + 1)
        if target.contains_subspace(inside):
            return r
    return None


def compute_conclusive_order(f: IntegralMap, search_cap: Optional[int] = None
                             ) -> ConclusiveOrder:
    """Smallest r with: every truncated pullback-algebra element of order
    >= r+1 lies among pullbacks from the (n+2)-nd target ideal power.

    Computed at working degree cap-1 and re-checked at cap; reported as
    inconclusive when not found below the search cap or unstable under the
    cap increase.
    """
    degree = f.cap - 1
    if degree < 2:
        raise CapShortfallError("conclusive order needs cap >= 3")
    if search_cap is None:
        search_cap = degree - 1
    search_cap = min(search_cap, degree - 1)
    low = _inclusion_order_at(f, degree, search_cap)
    high = _inclusion_order_at(f, degree + 1, search_cap)
    return ConclusiveOrder(
        value=low if (low is not None and low == high) else None,
        stable=(low is not None and low == high),
        degree=degree,
        search_cap=search_cap,
    )


def default_order(f: IntegralMap, search_cap: Optional[int] = None):
    """max(ceil(n/2) + 1, conclusive order); falls back to the first term
    with a caveat when the conclusive order is not reachable at this cap."""
    base = math.ceil(Fraction(f.n, 2)) + 1
    co = compute_conclusive_order(f, search_cap)
    if co.conclusive:
        return max(base, co.value), None
    return base, ("conclusive order not reached below search cap "
                  f"{co.search_cap} at degree {co.degree}; using the "
                  "dimension-based default")


def singular_locus_evidence(f: IntegralMap):
    """Jet-level evidence that the singular locus has codimension >= 2.

    For an immersion the locus is empty.  For n = 1 a singular point has
    codimension one, so the evidence fails.  Otherwise the 2x2 minors of
    the source Jacobian must contain two equations with independent linear
    parts at the origin.
    """
    if f.corank() == 0:
        return True, "immersion: singular locus empty"
    if f.n == 1:
        return False, "singular point of a curve has codimension one"
    ech = Echelon()
    for minor in f.singular_locus_minors():
        linear = minor.homogeneous_part(1)
        if linear.is_zero():
            continue
        ech.insert(row_from_fractions(
            {i: linear.coefficient(tuple(1 if j == i else 0
                                         for j in range(f.source.dim)))
             for i in range(f.source.dim)}))
        if ech.rank >= 2:
            return True, "two minors with independent linear parts"
    return False, "minor ideal linear parts have rank < 2 at this jet"


def ca_evidence_report(f: IntegralMap, order: int) -> StabilityReport:
    """Evidence report for the closure condition: the chain-rule closure of
    the pullback algebra adds nothing at this order, and the singular locus
    looks codimension >= 2 at jet level.

    The analytic half of the genuine condition (a complex representative
    whose singular locus has codimension >= 2) is not decidable from jets,
    so the verdict is labeled evidence, never the condition itself.
    """
    from .deformations import rf_truncated
    closure = rf_truncated(f, order)
    algebra = pullback_algebra_span(f, order)
    closure_equal = closure.equals(algebra)
    codim_ok, codim_note = singular_locus_evidence(f)
    return StabilityReport(
        germ=_germ_label(f),
        mode="ca-evidence",
        order=order,
        cap=f.cap,
        verdict="pass" if (closure_equal and codim_ok) else "fail",
        dims={
            "chain_rule_closure": closure.dim,
            "pullback_algebra": algebra.dim,
        },
        sub_verdicts={
            "closure_equals_algebra": "pass" if closure_equal else "fail",
            "codimension_two_evidence": "pass" if codim_ok else "fail",
            "codimension_note": codim_note,
        },
        caveats=["evidence only: the analytic clause of the closure "
                 "condition is not decidable at jet level"],
    )


# -- umbrella classification ------------------------------------------------------------


@dataclass
class Classification:
    type_k: Optional[int]
    multiplicity: Optional[int]
    stabilized: bool
    verdict: str                      # type k | not-an-umbrella | inconclusive
    contact_report: StabilityReport

    def to_doc(self) -> dict:
        return {
            "verdict": self.verdict,
            "type": self.type_k,
            "multiplicity": self.multiplicity,
            "multiplicity_stabilized": self.stabilized,
            "contact": self.contact_report.to_doc(),
        }


def classify_umbrella(f: IntegralMap, order: int,
                      contact_report: Optional[StabilityReport] = None
                      ) -> Classification:
    """Type k = local multiplicity - 1, gated on the contact verdict at the
    given order; germs failing the gate are not umbrellas at this order."""
    if contact_report is None:
        contact_report = check_contact_stability(f, order)
    if contact_report.verdict != "pass":
        return Classification(None, None, False, "not-an-umbrella",
                              contact_report)
    mult, stable = local_multiplicity(f)
    if not stable:
        return Classification(None, mult, False, "inconclusive", contact_report)
    return Classification(mult - 1, mult, True, f"type {mult - 1}", contact_report)


# -- unfolding extension -------------------------------------------------------------------


def _graph_data(F: IntegralMap) -> Tuple[TruncatedPoly, TruncatedPoly]:
    """Extract (u, v) from an unfolding in graph form (q_i = x_i, i < n)."""
    for i in range(F.n - 1):
        expected = F.source.var(i, F.q_component(i).cap)
        if not F.q_component(i).same_jet(expected):
            raise VariableMismatchError(
                "unfolding is not in graph form: q_%d != x_%d" % (i + 1, i + 1))
    return F.q_component(F.n - 1), F.p_component(F.n - 1)


def extend_unfoldings(F: IntegralMap, Fprime: IntegralMap) -> IntegralMap:
    """Extend two integral unfoldings of one germ over the joined parameters.

    Both inputs must be in graph form over disjoint parameter lists and
    restrict to the same germ at parameter zero.  The extension adds the
    graph data (U + U' - u, V + V' - v) and re-completes, with derivatives
    and integrals in the source variables only, so the restrictions to
    either parameter axis recover the inputs exactly.
    """
    if F.n != Fprime.n:
        raise VariableMismatchError("unfoldings of germs of different dimension")
    n = F.n
    if set(F.params) & set(Fprime.params):
        raise VariableMismatchError("parameter names must be disjoint")
    U, V = _graph_data(F)
    Up, Vp = _graph_data(Fprime)
    base = F.restrict_params([Fraction(0)] * len(F.params))
    base_p = Fprime.restrict_params([Fraction(0)] * len(Fprime.params))
    if base != base_p:
        raise VariableMismatchError("unfoldings disagree at parameter zero")
    params = F.params + Fprime.params
    chart = source_chart(n, params, names=F.source.names[:n])
    nv = chart.dim

    def embed(poly: TruncatedPoly, param_names) -> TruncatedPoly:
        index_map = list(range(n)) + [n + params.index(p) for p in param_names]
        return poly.extend(nv, chart.kinds, index_map)

    u0, v0 = _graph_data(base)
    u0e = embed(u0, ())
    Ue, Ve = embed(U, F.params), embed(V, F.params)
    Upe, Vpe = embed(Up, Fprime.params), embed(Vp, Fprime.params)
    v0e = embed(v0, ())
    U_tilde = Ue + Upe - u0e
    V_tilde = Ve + Vpe - v0e
    return complete_from_uv(n, U_tilde, V_tilde, params=params,
                            provenance="extended_unfolding", source=chart)
