"""Integral map construction, completion, normal forms, isotropic round trips."""

import random
from fractions import Fraction

import pytest

from whitney.errors import CompletionError, CorankError, NotIntegralError
from whitney.forms import source_chart
from whitney.integral_maps import (IntegralMap, check_integral, complete_from_uv,
                                   integrality_violation, lift_isotropic,
                                   owu_normal_form, project_isotropic)

from conftest import cusp23_lift, cusp25_lift, five_space_germ

rng = random.Random(424242)


# -- integrality certificates ----------------------------------------------------------


def test_corpus_certificates(germ_corpus):
    for name, germ in germ_corpus.items():
        assert integrality_violation(germ) is None, name
        assert germ.cap == 10, name


def test_five_space_identity_reproduced():
    # d(r o f) - sum (p_i o f) d(q_i o f) vanishes identically for the
    # five-space front: the deformed cusp's defining relation
    f = five_space_germ(cap=10)
    assert integrality_violation(f) is None


def test_cusp23_certificate():
    assert integrality_violation(cusp23_lift()) is None


def test_non_integral_line_reports_degree_one():
    ch = source_chart(1, names=["t"])
    t = ch.var(0, 6)
    result = check_integral(1, [t, t, t])
    assert not result["ok"]
    assert result["violation"]["total_degree"] == 1


def test_constructor_rejects_non_integral():
    ch = source_chart(1, names=["t"])
    t = ch.var(0, 6)
    with pytest.raises(NotIntegralError):
        IntegralMap(1, [t, t, t], source=ch)


def test_constructor_rejects_nonvanishing():
    ch = source_chart(1, names=["t"])
    t = ch.var(0, 6)
    with pytest.raises(NotIntegralError):
        IntegralMap(1, [ch.zero(6), t + 1, ch.zero(6)], source=ch)


# -- corank ---------------------------------------------------------------------------


def test_corank_values(germ_corpus):
    assert germ_corpus["f_1_0"].corank() == 0
    assert germ_corpus["f_2_0"].corank() == 0
    assert germ_corpus["f_2_1"].corank() == 1
    assert germ_corpus["cusp25_lift"].corank() == 1
    assert germ_corpus["five_space"].corank() == 1


def test_corank_two_rejected():
    # q = (x1^2, x2^2), p = 0, r = 0 is integral with two kernel directions
    ch = source_chart(2)
    x1, x2 = ch.var(0, 6), ch.var(1, 6)
    z = ch.zero(6)
    with pytest.raises(CorankError):
        IntegralMap(2, [z, z, x1 ** 2, x2 ** 2, z], source=ch)


# -- completion ------------------------------------------------------------------------


def test_completion_example():
    ch = source_chart(2)
    x1, x2 = ch.var(0, 8), ch.var(1, 8)
    f = complete_from_uv(2, x2 ** 2 * Fraction(1, 2), x1 * x2)
    names = ch.names
    assert f.p_component(0).render(names) == "1/3*x2^3"
    assert f.r_component.render(names) == "1/3*x1*x2^3"
    assert integrality_violation(f) is None


def test_completion_flat_section():
    ch = source_chart(2)
    f = complete_from_uv(2, ch.var(1, 6), ch.zero(6))
    assert f.p_component(0).is_zero()
    assert f.r_component.is_zero()


def test_completion_boundary_residual():
    ch = source_chart(2)
    x1, x2 = ch.var(0, 6), ch.var(1, 6)
    with pytest.raises(CompletionError) as err:
        complete_from_uv(2, x1, 1 + x2)
    assert err.value.residuals
    # residual v(x',0) du/dx1(x',0) = 1
    index, res = err.value.residuals[0]
    assert index == 0
    assert res.constant_term() == 1


def test_completion_random_pairs_integral():
    ch = source_chart(2)
    from whitney.ring import monomials_upto, TruncatedPoly
    monos = [m for m in monomials_upto(2, 4) if sum(m) >= 1]
    for _ in range(10):
        # boundary compatibility holds when v is divisible by x2
        u_terms = {m: Fraction(rng.randint(-3, 3)) for m in rng.sample(monos, 3)}
        v_terms = {}
        for m in rng.sample(monos, 3):
            v_terms[(m[0], m[1] + 1)] = Fraction(rng.randint(-3, 3))
        u = TruncatedPoly(2, 8, ch.kinds, u_terms)
        v = TruncatedPoly(2, 8, ch.kinds, v_terms)
        f = complete_from_uv(2, u, v)
        assert integrality_violation(f) is None


# -- normal forms -----------------------------------------------------------------------


def test_normal_form_f21_exact():
    f = owu_normal_form(2, 1, cap=10)
    names = f.source.names
    assert f.q_component(0).render(names) == "x1"
    assert f.q_component(1).render(names) == "1/2*x2^2"
    assert f.p_component(0).render(names) == "1/3*x2^3"
    assert f.p_component(1).render(names) == "x1*x2"
    assert f.r_component.render(names) == "1/3*x1*x2^3"


def test_normal_form_flat_line():
    f = owu_normal_form(1, 0, cap=6)
    assert f.q_component(0).render(f.source.names) == "x1"
    assert f.p_component(0).is_zero()
    assert f.r_component.is_zero()


def test_normal_form_graph_data():
    # u and v carry the advertised monomials for (n, k) = (4, 2)
    f = owu_normal_form(4, 2, cap=9)
    names = f.source.names
    assert f.q_component(3).render(names) == "x1*x4 + 1/6*x4^3"
    assert f.p_component(3).render(names) == "x3*x4 + 1/2*x2*x4^2"


def test_normal_form_range_errors():
    with pytest.raises(ValueError):
        owu_normal_form(1, 1)
    with pytest.raises(ValueError):
        owu_normal_form(3, 2)
    with pytest.raises(ValueError):
        owu_normal_form(2, -1)


def test_normal_form_corank(germ_corpus):
    assert germ_corpus["f_3_1"].corank() == 1
    assert germ_corpus["f_4_2"].corank() == 1


def test_singular_locus_minor_criterion():
    # for k >= 1 the Jacobian minors vanish on a codimension-2 jet locus:
    # the ideal of 2x2 minors contains two equations with independent
    # linear parts
    from whitney.stability import singular_locus_evidence
    for n, k in ((2, 1), (3, 1), (4, 2)):
        f = owu_normal_form(n, k, cap=8)
        ok, note = singular_locus_evidence(f)
        assert ok, (n, k, note)


def test_immersion_has_no_singular_locus():
    f = owu_normal_form(3, 0, cap=6)
    minors = f.singular_locus_minors()
    # an immersion's minors ideal contains a unit (some minor has a
    # nonzero constant term)
    assert any(m.constant_term() != 0 for m in minors)


# -- isotropic correspondence ----------------------------------------------------------------


def test_project_f21():
    f = owu_normal_form(2, 1, cap=10)
    g = project_isotropic(f)
    names = f.source.names
    assert g.p_components[0].render(names) == "1/3*x2^3"
    assert g.q_components[1].render(names) == "1/2*x2^2"
    assert g.e.render(names) == "1/3*x1*x2^3"


def test_project_cusp():
    g = project_isotropic(cusp25_lift())
    assert g.e.render(("t",)) == "t^5"


def test_project_flat_line():
    g = project_isotropic(owu_normal_form(1, 0, cap=6))
    assert g.e.is_zero()
    assert all(c.is_zero() for c in g.p_components)


def test_lift_cusp():
    ch = source_chart(1, names=["t"])
    t = ch.var(0, 10)
    f = lift_isotropic(1, [t ** 3 * Fraction(5, 2)], [t ** 2], source=ch)
    assert f.r_component.render(("t",)) == "t^5"


def test_lift_remark_curve():
    # q = t^3, p = t^7 + lam t^8 lifts with r = 3/10 t^10 + 3/11 lam t^11;
    # at lam = 1 both coefficients are exact rationals
    ch = source_chart(1, names=["t"])
    t = ch.var(0, 12)
    f = lift_isotropic(1, [t ** 7 + t ** 8], [t ** 3], source=ch)
    assert f.r_component.coefficient((10,)) == Fraction(3, 10)
    assert f.r_component.coefficient((11,)) == Fraction(3, 11)
    assert f.r_component.render(("t",)) == "3/10*t^10 + 3/11*t^11"


def test_round_trips(germ_corpus):
    for name in ("f_2_1", "f_3_1", "cusp25_lift", "f_1_0"):
        f = germ_corpus[name]
        g = project_isotropic(f)
        back = lift_isotropic(f.n, g.p_components, g.q_components,
                              source=f.source)
        assert all(a.same_jet(b) for a, b in zip(back.components, f.components)), name


def test_lift_then_project_identity():
    ch = source_chart(2)
    f = owu_normal_form(2, 1, cap=10)
    g = project_isotropic(f)
    lifted = lift_isotropic(2, g.p_components, g.q_components, source=f.source)
    g2 = project_isotropic(lifted)
    assert all(a.same_jet(b) for a, b in zip(g2.p_components, g.p_components))
    assert g2.e.same_jet(g.e)


def test_lift_rejects_non_isotropic():
    from whitney.errors import WhitneyError
    ch = source_chart(2)
    x1, x2 = ch.var(0, 6), ch.var(1, 6)
    # g*(dp^dq) != 0: p = x2, q = x1 gives dp^dq = dx2^dx1 != 0
    with pytest.raises(WhitneyError):
        lift_isotropic(2, [x2, ch.zero(6)], [x1, x2], source=ch)
