"""The standard contact chart, Reeb field and contact Hamiltonian fields.

Everything is phrased on the Darboux chart (p1..pn, q1..qn, r) with contact
form alpha = dr - sum p_i dq_i; general contact manifolds are handled by the
caller supplying Darboux coordinates.  The Legendre fibration is fixed as
(p, q, r) -> (q, r).
"""

from __future__ import annotations

from typing import Sequence

from .forms import DiffForm, FieldAlongMap, MapBetweenCharts, darboux_chart
from .ring import TruncatedPoly


class ContactChart:
    """Standard contact space of dimension 2n+1 with its Darboux data."""

    def __init__(self, n: int):
        self.n = n
        self.chart = darboux_chart(n)

    # variable index helpers: components ordered p1..pn, q1..qn, r
    def p_index(self, i: int) -> int:
        return i

    def q_index(self, i: int) -> int:
        return self.n + i

    @property
    def r_index(self) -> int:
        return 2 * self.n

    def alpha(self, cap: int) -> DiffForm:
        """The contact form dr - sum p_i dq_i."""
        coeffs = {(self.r_index,): self.chart.const(1, cap)}
        for i in range(self.n):
            coeffs[(self.q_index(i),)] = -self.chart.var(self.p_index(i), cap)
        return DiffForm(self.chart, 1, coeffs)

    def d_alpha(self, cap: int) -> DiffForm:
        return self.alpha(cap + 1).exterior_derivative()

    def nondegeneracy_certificate(self, cap: int) -> bool:
        """alpha wedge (d alpha)^n is a nonzero top form."""
        a = self.alpha(cap)
        da = self.d_alpha(cap)
        top = a
        for _ in range(self.n):
            top = top.wedge(da)
        return not top.is_zero()

    def identity_map(self, cap: int) -> MapBetweenCharts:
        return MapBetweenCharts.identity(self.chart, cap)

    def field(self, components: Sequence[TruncatedPoly], cap: int) -> FieldAlongMap:
        """A vector field on the chart, as a field along the identity."""
        return FieldAlongMap(self.identity_map(cap), components)


def reeb(cc: ContactChart, cap: int) -> FieldAlongMap:
    """The Reeb field d/dr: i_R alpha = 1 and i_R dalpha = 0."""
    comps = [cc.chart.zero(cap) for _ in range(cc.chart.dim)]
    comps[cc.r_index] = cc.chart.const(1, cap)
    return cc.field(comps, cap)


def contact_hamiltonian(cc: ContactChart, H: TruncatedPoly) -> FieldAlongMap:
    """The contact vector field X_H with i_{X_H} alpha = H.

    Components on the Darboux chart:
      dp_i slot:  dH/dq_i + p_i dH/dr
      dq_i slot:  -dH/dp_i
      dr  slot:   H - sum p_i dH/dp_i
    """
    cc.chart.check_poly(H)
    n = cc.n
    cap = H.cap - 1
    comps = []
    H_r = H.partial(cc.r_index)
    for i in range(n):
        comps.append(H.partial(cc.q_index(i))
                     + cc.chart.var(cc.p_index(i), cap + 1) * H_r)
    for i in range(n):
        comps.append(-H.partial(cc.p_index(i)))
    r_comp = H.truncate(cap) if H.cap > cap else H
    for i in range(n):
        r_comp = r_comp - cc.chart.var(cc.p_index(i), cap + 1) * H.partial(cc.p_index(i))
    comps.append(r_comp)
    return cc.field(comps, cap)


def hamiltonian_of(cc: ContactChart, X: FieldAlongMap) -> TruncatedPoly:
    """i_X alpha; left inverse of contact_hamiltonian."""
    cap = min(p.cap for p in X.components)
    return X.interior(cc.alpha(cap + 1)).coefficient(())


def reeb_derivative(cc: ContactChart, H: TruncatedPoly) -> TruncatedPoly:
    """R(H) = dH/dr on the standard chart."""
    return H.partial(cc.r_index)


def is_legendre_hamiltonian(cc: ContactChart, H: TruncatedPoly) -> bool:
    """True iff H is affine in the p variables, i.e. X_H is lowerable
    through the fibration (p, q, r) -> (q, r)."""
    cc.chart.check_poly(H)
    n = cc.n
    return all(sum(mono[:n]) <= 1 for mono in H.terms)


def scaled_reeb(cc: ContactChart, lam: TruncatedPoly) -> FieldAlongMap:
    """Reeb field of the rescaled contact form lam * alpha (unit lam).

    Derived from the defining identities i_R' (lam alpha) = 1 and
    i_R' d(lam alpha) = 0: write R' = (1/lam) d/dr + Y with Y in ker alpha;
    matching coefficients mod alpha gives
      Y_q_i = lam_p_i / lam^2,  Y_p_i = -(lam_q_i + p_i lam_r) / lam^2,
      Y_r = sum p_i Y_q_i.
    """
    cc.chart.check_poly(lam)
    if lam.constant_term() == 0:
        raise ZeroDivisionError("contact form rescaling must be a unit")
    n = cc.n
    inv2 = (lam * lam).inverse()
    lam_r = lam.partial(cc.r_index)
    y_q = [lam.partial(cc.p_index(i)) * inv2 for i in range(n)]
    y_p = [-(lam.partial(cc.q_index(i))
             + cc.chart.var(cc.p_index(i), lam.cap) * lam_r) * inv2
           for i in range(n)]
    cap = min(p.cap for p in y_q + y_p)
    y_r = cc.chart.zero(cap)
    for i in range(n):
        y_r = y_r + cc.chart.var(cc.p_index(i), cap) * y_q[i]
    y_r = y_r + lam.inverse()
    return cc.field(y_p + y_q + [y_r], cap)


def scaled_contact_hamiltonian(cc: ContactChart, lam: TruncatedPoly,
                               H: TruncatedPoly) -> FieldAlongMap:
    """X'_H for the rescaled form lam * alpha (unit lam).

    Again from the defining identities: X' = (H/lam) d/dr + Z, Z in ker
    alpha, with i_Z dalpha = (H/lam^2) dlam - (1/lam) dH mod alpha.
    """
    cc.chart.check_poly(lam)
    cc.chart.check_poly(H)
    if lam.constant_term() == 0:
        raise ZeroDivisionError("contact form rescaling must be a unit")
    n = cc.n
    inv = lam.inverse()
    inv2 = (lam * lam).inverse()
    # gamma = (H/lam^2) dlam - (1/lam) dH with dr reduced via dr -> sum p dq
    def gamma_coeff(j: int) -> TruncatedPoly:
        return H * inv2 * lam.partial(j) - inv * H.partial(j)

    g_r = gamma_coeff(cc.r_index)
    z_q = []
    z_p = []
    for i in range(n):
        pvar_cap = min(g_r.cap + 1, lam.cap, H.cap)
        p_i = cc.chart.var(cc.p_index(i), pvar_cap)
        z_q.append(gamma_coeff(cc.p_index(i)))
        z_p.append(-(gamma_coeff(cc.q_index(i)) + p_i * g_r))
    cap = min(p.cap for p in z_q + z_p)
    z_r = cc.chart.zero(cap)
    for i in range(n):
        z_r = z_r + cc.chart.var(cc.p_index(i), cap) * z_q[i]
    z_r = z_r + H * inv
    return cc.field(z_p + z_q + [z_r], cap)
