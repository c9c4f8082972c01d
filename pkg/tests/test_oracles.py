"""Cross-checks of the jet solvers against the independent brute-force
implementations in oracles.py (separately coded, no shared solver)."""

import pytest

from whitney.deformations import deformation_slice, rf_truncated
from whitney.stability import compute_conclusive_order, fiber_quotient

import oracles

# per-germ jet orders keeping the dense oracle runs fast; all <= 5
ORACLE_ORDERS = {
    "cusp23_lift": 5,
    "cusp25_lift": 5,
    "f_1_0": 5,
    "f_2_0": 4,
    "f_2_1": 4,
    "five_space": 4,
    "f_3_1": 3,
    "f_4_2": 2,
}


def bare_components(f):
    return [dict(c.terms) for c in f.components]


@pytest.mark.parametrize("name", sorted(ORACLE_ORDERS))
def test_vi_dimension_matches_oracle(germ_corpus, name):
    f = germ_corpus[name]
    order = ORACLE_ORDERS[name]
    max_working = min(f.cap - 1, order + 4)
    lib = deformation_slice(f, order, max_working_order=max_working)
    dim, stab = oracles.oracle_vi_dim(bare_components(f), f.n, f.source.dim,
                                      order, max_working)
    assert (lib.dim, lib.stabilized) == (dim, stab), name


@pytest.mark.parametrize("name", sorted(ORACLE_ORDERS))
def test_rf_dimension_matches_oracle(germ_corpus, name):
    f = germ_corpus[name]
    order = ORACLE_ORDERS[name]
    lib = rf_truncated(f, order)
    dim, _ = oracles.oracle_rf_dim(bare_components(f), f.n, f.source.dim,
                                   order, f.cap - 1)
    assert lib.dim == dim, name


@pytest.mark.parametrize("name", sorted(ORACLE_ORDERS))
def test_fiber_quotient_matches_oracle(germ_corpus, name):
    f = germ_corpus[name]
    lib = fiber_quotient(f)
    dims = []
    gens = []
    for degree in (f.cap - 1, f.cap):
        dim, gen = oracles.oracle_fiber_quotient(
            bare_components(f), f.n, f.source.dim, degree)
        dims.append(dim)
        gens.append(gen)
    assert lib.dim == dims[1], name
    assert lib.generated == gens[1], name
    # stabilization flag also covers the multiplicity check, so it can only
    # be stricter than bare dimension agreement
    if lib.stabilized:
        assert dims[0] == dims[1] and gens[0] == gens[1], name


@pytest.mark.parametrize("name", sorted(ORACLE_ORDERS))
def test_conclusive_order_matches_oracle(germ_corpus, name):
    f = germ_corpus[name]
    search_cap = 5
    lib = compute_conclusive_order(f, search_cap=search_cap)
    low = oracles.oracle_conclusive_order(bare_components(f), f.n,
                                          f.source.dim, f.cap - 1, search_cap)
    high = oracles.oracle_conclusive_order(bare_components(f), f.n,
                                           f.source.dim, f.cap, search_cap)
    oracle_value = low if (low is not None and low == high) else None
    assert lib.value == oracle_value, name
