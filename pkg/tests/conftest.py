"""Shared germ corpus for the test suite."""

from fractions import Fraction

import pytest

from whitney.forms import source_chart
from whitney.integral_maps import IntegralMap, owu_normal_form


def cusp23_lift(cap=10):
    """Planar (2,3)-cusp front lifted to the Legendre immersion."""
    ch = source_chart(1, names=["t"])
    t = ch.var(0, cap)
    return IntegralMap(1, [t * Fraction(3, 2), t ** 2, t ** 3], source=ch,
                       provenance="cusp23_lift")


def cusp25_lift(cap=10):
    """Planar (2,5)-cusp tangent lift: integral but not an immersion."""
    ch = source_chart(1, names=["t"])
    t = ch.var(0, cap)
    return IntegralMap(1, [t ** 3 * Fraction(5, 2), t ** 2, t ** 5], source=ch,
                       provenance="cusp25_lift")


def five_space_germ(cap=10):
    """Front of the deformed (2,5)-cusp in 5-space: the stable projection of
    the type-1 umbrella, components in the (t, lam) source chart."""
    ch = source_chart(2, names=["t", "lam"])
    t = ch.var(0, cap)
    lam = ch.var(1, cap)
    return IntegralMap(
        2,
        [t ** 3 * Fraction(5, 2) + lam * t * Fraction(3, 2), t ** 3,
         t ** 2, lam, t ** 5 + lam * t ** 3],
        source=ch, provenance="five_space")


def corpus(cap=10):
    return {
        "cusp23_lift": cusp23_lift(cap),
        "cusp25_lift": cusp25_lift(cap),
        "five_space": five_space_germ(cap),
        "f_1_0": owu_normal_form(1, 0, cap=cap),
        "f_2_0": owu_normal_form(2, 0, cap=cap),
        "f_2_1": owu_normal_form(2, 1, cap=cap),
        "f_3_1": owu_normal_form(3, 1, cap=cap),
        "f_4_2": owu_normal_form(4, 2, cap=cap),
    }


@pytest.fixture(scope="session")
def germ_corpus():
    return corpus(cap=10)


@pytest.fixture(scope="session")
def f21():
    return owu_normal_form(2, 1, cap=10)


@pytest.fixture(scope="session")
def cusp25():
    return cusp25_lift(cap=10)


@pytest.fixture(scope="session")
def flat_line():
    return owu_normal_form(1, 0, cap=8)
