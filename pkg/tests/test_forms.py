"""Exterior calculus: d, wedge, pullback, interior/Lie along maps, tangent lift."""

import random
from fractions import Fraction

import pytest

from whitney.contact import ContactChart
from whitney.errors import ChartMismatchError
from whitney.forms import (DiffForm, FieldAlongMap, MapBetweenCharts,
                           darboux_chart, source_chart)
from whitney.ring import TruncatedPoly, monomials_upto

rng = random.Random(20260811)


def rand_poly(chart, cap, maxdeg=3, nterms=4):
    monos = monomials_upto(chart.dim, maxdeg)
    terms = {}
    for _ in range(nterms):
        m = rng.choice(monos)
        c = Fraction(rng.randint(-4, 4))
        if c:
            terms[m] = c
    return TruncatedPoly(chart.dim, cap, chart.kinds, terms)


def rand_form(chart, degree, cap, maxdeg=3):
    idx_pool = []

    def build(prefix, start):
        if len(prefix) == degree:
            idx_pool.append(tuple(prefix))
            return
        for i in range(start, chart.dim):
            build(prefix + [i], i + 1)

    build([], 0)
    coeffs = {}
    for idx in rng.sample(idx_pool, min(3, len(idx_pool))):
        coeffs[idx] = rand_poly(chart, cap, maxdeg)
    return DiffForm(chart, degree, coeffs)


def rand_map(src, dst, cap, maxdeg=3):
    comps = []
    for _ in range(dst.dim):
        poly = rand_poly(src, cap, maxdeg)
        comps.append(poly - poly.constant_term())
    return MapBetweenCharts(src, dst, comps)


def rand_field(base_map, cap, maxdeg=3):
    return FieldAlongMap(base_map,
                         [rand_poly(base_map.source, cap, maxdeg)
                          for _ in range(base_map.target.dim)])


# -- exterior derivative and wedge -----------------------------------------------------


def test_d_of_function():
    cc = ContactChart(1)
    pq = cc.chart.parse("p1*q1", 6)
    d = DiffForm.function(pq, cc.chart).exterior_derivative()
    assert d.coefficient((0,)).render(cc.chart.names) == "q1"
    assert d.coefficient((1,)).render(cc.chart.names) == "p1"


def test_d_of_contact_form_is_darboux():
    cc = ContactChart(2)
    da = cc.d_alpha(6)
    # d(dr - sum p_i dq_i) = -sum dp_i ^ dq_i
    for i in range(2):
        assert da.coefficient((cc.p_index(i), cc.q_index(i))).constant_term() == -1
    assert len(da.coeffs) == 2


def test_d_squared_zero():
    ch = darboux_chart(2)
    for _ in range(10):
        w = rand_form(ch, rng.choice([0, 1, 2]), 7)
        assert w.exterior_derivative().exterior_derivative().is_zero()


def test_wedge_anticommutes():
    ch = darboux_chart(1)
    dp = DiffForm.d_var(ch, 0, 6)
    dq = DiffForm.d_var(ch, 1, 6)
    assert dp.wedge(dq).same_form(dq.wedge(dp).scale(-1))
    for _ in range(5):
        w = rand_form(ch, 1, 6)
        assert w.wedge(w).is_zero()


def test_wedge_function_factor():
    ch = darboux_chart(1)
    p = ch.var(0, 6)
    form = DiffForm(ch, 1, {(1,): p})     # p dq
    dr = DiffForm.d_var(ch, 2, 6)
    assert form.wedge(dr).coefficient((1, 2)).same_jet(p)


def test_nondegeneracy_certificate():
    for n in (1, 2, 3):
        assert ContactChart(n).nondegeneracy_certificate(4)


# -- pullbacks ----------------------------------------------------------------------------


def test_pullback_kills_contact_form_on_cusp():
    cc = ContactChart(1)
    src = source_chart(1, names=["t"])
    t = src.var(0, 8)
    f = MapBetweenCharts(src, cc.chart, [t ** 3 * Fraction(5, 2), t ** 2, t ** 5])
    assert f.pullback(cc.alpha(8)).is_zero()


def test_pullback_along_identity():
    ch = darboux_chart(1)
    ident = MapBetweenCharts.identity(ch, 6)
    for _ in range(5):
        w = rand_form(ch, rng.choice([0, 1, 2]), 6)
        assert ident.pullback(w).same_form(w)


def test_pullback_of_dq2_along_f21():
    from whitney.integral_maps import owu_normal_form
    f = owu_normal_form(2, 1, cap=8)
    cc = f.target
    dq2 = DiffForm.d_var(cc.chart, cc.q_index(1), 8)
    pulled = f.pullback(dq2)
    # q2 o f = x2^2/2, so f*(dq2) = x2 dx2
    assert pulled.coefficient((1,)).render(f.source.names) == "x2"
    assert pulled.coefficient((0,)).is_zero()


def test_pullback_commutes_with_d():
    cc = ContactChart(1)
    src = source_chart(2)
    for _ in range(8):
        f = rand_map(src, cc.chart, 7)
        w = rand_form(cc.chart, 1, 7)
        lhs = f.pullback(w).exterior_derivative()
        rhs = f.pullback(w.exterior_derivative())
        assert lhs.same_form(rhs)


# -- interior product and Lie derivative along maps ------------------------------------------


def test_interior_of_reeb_along_map():
    from tests_support import cusp25_map
    cc, f = cusp25_map()
    R_along = FieldAlongMap(f, [f.source.zero(8), f.source.zero(8),
                                f.source.const(1, 8)])
    value = R_along.interior(cc.alpha(8))
    assert value.coefficient(()).same_jet(f.source.const(1, 7))


def test_interior_additive():
    cc = ContactChart(2)
    src = source_chart(2)
    f = rand_map(src, cc.chart, 7)
    a = cc.alpha(7)
    for _ in range(10):
        v1 = rand_field(f, 7)
        v2 = rand_field(f, 7)
        lhs = (v1 + v2).interior(a)
        rhs = v1.interior(a) + v2.interior(a)
        assert lhs.same_form(rhs)


def test_interior_zero_field():
    cc = ContactChart(1)
    src = source_chart(1)
    f = rand_map(src, cc.chart, 6)
    zero = FieldAlongMap(f, [src.zero(6)] * 3)
    assert zero.interior(cc.alpha(6)).is_zero()


def test_interior_rejects_functions():
    cc = ContactChart(1)
    src = source_chart(1)
    f = rand_map(src, cc.chart, 6)
    v = rand_field(f, 6)
    with pytest.raises(ChartMismatchError):
        v.interior(DiffForm.function(cc.chart.const(1, 6), cc.chart))


def test_lie_of_hamiltonian_with_reeb_killed_hamiltonian():
    # H = p1 has R(H) = 0, so L_{X_H o f} alpha = f*(R(H) alpha) = 0
    from whitney.contact import contact_hamiltonian
    from tests_support import cusp25_map
    cc, f = cusp25_map()
    H = cc.chart.var(0, 8)
    XH = contact_hamiltonian(cc, H)
    along = FieldAlongMap(f, [f.pullback_function(c) for c in XH.components])
    assert along.lie(cc.alpha(8)).is_zero()


def test_lie_leibniz_rule():
    cc = ContactChart(1)
    src = source_chart(1)
    fmap = rand_map(src, cc.chart, 8)
    for _ in range(6):
        v = rand_field(fmap, 8, maxdeg=2)
        a = rand_form(cc.chart, 1, 8, maxdeg=2)
        b = rand_form(cc.chart, 1, 8, maxdeg=2)
        lhs = v.lie(a.wedge(b))
        rhs = v.lie(a).wedge(fmap.pullback(b)) + fmap.pullback(a).wedge(v.lie(b))
        assert lhs.same_form(rhs)


def test_interior_shuffle_rule():
    cc = ContactChart(1)
    src = source_chart(1)
    fmap = rand_map(src, cc.chart, 8)
    for _ in range(6):
        v = rand_field(fmap, 8, maxdeg=2)
        a = rand_form(cc.chart, 1, 8, maxdeg=2)
        b = rand_form(cc.chart, 1, 8, maxdeg=2)
        lhs = v.interior(a.wedge(b))
        rhs = (v.interior(a).wedge(fmap.pullback(b))
               - fmap.pullback(a).wedge(v.interior(b)))
        assert lhs.same_form(rhs)


def test_pushforward_pullback_identities():
    # i_{w o f} a' = f*(i_w a') for a field w on the target, and
    # i_{f_* v} a = i_v (f* a) for a source field v
    cc = ContactChart(1)
    src = source_chart(2)
    for _ in range(8):
        f = rand_map(src, cc.chart, 7)
        a = rand_form(cc.chart, 1, 7, maxdeg=2)
        # target field w, pulled back along f
        w_comps = [rand_poly(cc.chart, 7, maxdeg=2) for _ in range(3)]
        w_on_chart = FieldAlongMap(MapBetweenCharts.identity(cc.chart, 7), w_comps)
        w_along = FieldAlongMap(f, [f.pullback_function(c) for c in w_comps])
        lhs = w_along.interior(a)
        rhs = f.pullback(w_on_chart.interior(a))
        assert lhs.same_form(rhs)
        # Lie version
        lhs = w_along.lie(a)
        rhs = f.pullback(w_on_chart.lie(a))
        assert lhs.same_form(rhs)
        # source field pushed forward
        xi = [rand_poly(src, 7, maxdeg=2) for _ in range(src.dim)]
        push = FieldAlongMap(f, [
            sum((xi[j] * f.components[c].partial(j) for j in range(1, src.dim)),
                xi[0] * f.components[c].partial(0))
            for c in range(3)])
        fa = f.pullback(a)
        xi_field = FieldAlongMap(MapBetweenCharts.identity(src, 7), xi)
        assert push.interior(a).same_form(xi_field.interior(fa))


# -- tangent lift --------------------------------------------------------------------------


def test_tangent_lift_of_contact_form():
    cc = ContactChart(1)
    lifted = cc.alpha(8).tangent_lift()
    t = cc.chart.tangent()
    assert t.names == ("p1", "q1", "r", "phi1", "xi1", "s")
    # alpha~ = d(s - p xi) + xi dp - phi dq = ds - p dxi - phi dq
    assert lifted.coefficient((5,)).constant_term() == 1
    assert lifted.coefficient((4,)).render(t.names) == "-p1"
    assert lifted.coefficient((1,)).render(t.names) == "-phi1"
    assert len(lifted.coeffs) == 3


def test_tangent_lift_zero_and_function():
    cc = ContactChart(1)
    zero = DiffForm.zero(cc.chart, 1)
    assert zero.tangent_lift().is_zero()
    r = cc.chart.var(cc.r_index, 6)
    lifted = DiffForm.function(r, cc.chart).tangent_lift()
    t = cc.chart.tangent()
    assert lifted.coefficient(()).render(t.names) == "s"


def test_tangent_lift_commutes_with_d():
    ch = darboux_chart(1)
    for deg in (0, 1, 2):
        for _ in range(6):
            w = rand_form(ch, deg, 7)
            assert w.tangent_lift().exterior_derivative().same_form(
                w.exterior_derivative().tangent_lift())


def test_tangent_lift_additive():
    ch = darboux_chart(1)
    for _ in range(6):
        a = rand_form(ch, 1, 7)
        b = rand_form(ch, 1, 7)
        assert (a + b).tangent_lift().same_form(a.tangent_lift() + b.tangent_lift())


def test_field_pullback_of_lift_is_lie_derivative():
    # the defining property of the lift, checked across degrees 0..2 with
    # more than 20 random (field, form) pairs
    cc = ContactChart(1)
    src = source_chart(2)
    checked = 0
    for degree in (0, 1, 2):
        for _ in range(8):
            f = rand_map(src, cc.chart, 8)
            v = rand_field(f, 8, maxdeg=2)
            w = rand_form(cc.chart, degree, 8, maxdeg=2)
            lhs = v.pullback_from_tangent(w.tangent_lift())
            rhs = v.lie(w)
            assert lhs.same_form(rhs)
            checked += 1
    assert checked >= 20


def test_field_pullback_additive_in_field():
    cc = ContactChart(1)
    src = source_chart(1)
    f = rand_map(src, cc.chart, 8)
    lifted = cc.alpha(8).tangent_lift()
    for _ in range(10):
        v1 = rand_field(f, 8, maxdeg=2)
        v2 = rand_field(f, 8, maxdeg=2)
        lhs = (v1 + v2).pullback_from_tangent(lifted)
        rhs = (v1.pullback_from_tangent(lifted)
               + v2.pullback_from_tangent(lifted))
        assert lhs.same_form(rhs)
