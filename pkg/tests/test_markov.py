import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from cogrowthkit.algebra import make_family, opposite
from cogrowthkit.cayley import ball
from cogrowthkit.cogrowth import CogrowthTable, gamma_rate
from cogrowthkit.errors import UsageError
from cogrowthkit.markov import (
    apply,
    norm_lower_bound,
    operator_report,
    power_iteration_vectors,
    random_vectors,
    rayleigh_quotient,
    spectral_radius_lower_bound,
    verify_walk_identity,
    walk_norm_squared,
    walk_vector,
)

from conftest import acbc, builtin_engines
from oracles import histogram

ACBC_BOUND = math.sqrt(5) / 3


def test_walk_vector_examples():
    z, X = make_family("integer_lattice", dim=1, gens=[1, -1])
    assert walk_vector(z, X, 1).support == {(1,): Fraction(1, 2), (-1,): Fraction(1, 2)}
    e, Y = make_family("bicyclic")
    w = walk_vector(e, Y, 2).support
    assert {e.canonical(s): p for s, p in w.items()} == {
        "1": Fraction(1, 4), "bb": Fraction(1, 4), "cb": Fraction(1, 4), "cc": Fraction(1, 4)}
    f, F = make_family("free", rank=2)
    assert sorted(walk_vector(f, F, 2).support.values()) == [Fraction(1, 4)] * 4


def test_walk_vector_sums_to_one(builtin):
    name, engine, gens = builtin
    table = CogrowthTable(engine, gens, 6)
    for n in range(1, 7):
        w = walk_vector(engine, gens, n, table=table)
        assert sum(w.support.values()) == 1
        assert all(p > 0 for p in w.support.values())


def test_walk_vector_matches_repeated_apply(builtin):
    name, engine, gens = builtin
    v = {engine.identity: Fraction(1)}
    for n in range(1, 6):
        v = apply(engine, gens, v)
        assert v == walk_vector(engine, gens, n).support


def test_walk_identity_free_first_step():
    f, X = make_family("free", rank=2)
    t = CogrowthTable(f, X, 1)
    assert t.gamma_prime()[2] == 2
    assert walk_norm_squared(t, 1) == Fraction(1, 2) == Fraction(2, 4)


def test_walk_identity_all_builtins(builtin):
    name, engine, gens = builtin
    res = verify_walk_identity(engine, gens, 10)
    assert res.passed, res.witness
    assert res.checked == 10


def test_row_stochastic(builtin):
    name, engine, gens = builtin
    b = ball(engine, gens, 3)
    for i in range(len(b)):
        if b.edges[i]:
            row = apply(engine, gens, {b.elements[i]: Fraction(1)})
            assert sum(row.values()) == 1


def test_rayleigh_examples():
    e, X = acbc()
    a, b = X.targets[0], X.targets[1]
    q = rayleigh_quotient(e, X, {a: 1, b: -1})
    assert q == pytest.approx(math.sqrt(2) / 3, rel=1e-12)
    assert q <= ACBC_BOUND
    f, F = make_family("free", rank=2)
    assert rayleigh_quotient(f, F, {f.identity: 1}) == pytest.approx(1 / math.sqrt(2), rel=1e-12)


def test_rayleigh_zero_vector_rejected():
    f, F = make_family("free", rank=2)
    with pytest.raises(UsageError):
        rayleigh_quotient(f, F, {f.identity: 0})
    with pytest.raises(UsageError):
        rayleigh_quotient(f, F, {})


def test_rayleigh_scale_invariance(builtin):
    name, engine, gens = builtin
    b = ball(engine, gens, 2)
    for s in b.elements:
        assert rayleigh_quotient(engine, gens, {s: 1}) == rayleigh_quotient(engine, gens, {s: 2})
    for v in random_vectors(engine, gens, 2, 10, seed=3):
        scaled = {s: -3.5 * a for s, a in v.items()}
        assert rayleigh_quotient(engine, gens, scaled) == pytest.approx(rayleigh_quotient(engine, gens, v), rel=1e-12)


def test_norm_lower_bound_lattice():
    z, X = make_family("integer_lattice", dim=1, gens=[1, -1])
    assert norm_lower_bound(z, X, 10, 10).value >= 0.95


def test_norm_lower_bound_free_at_most_one():
    f, X = make_family("free", rank=2)
    nb = norm_lower_bound(f, X, 6, 20)
    assert all(q <= 1 + 1e-9 for q in nb.walk_quotients + nb.power_quotients)
    assert nb.value >= 1 / math.sqrt(2) - 1e-12


def test_norm_lower_bound_acbc_quotients_below_bound():
    e, X = acbc()
    nb = norm_lower_bound(e, X, 6, 20)
    assert all(q <= ACBC_BOUND + 1e-9 for q in nb.walk_quotients + nb.power_quotients)
    assert len(nb.power_quotients) == 20


def test_norm_lower_bound_is_achieved_by_a_vector():
    e, X = acbc()
    nb = norm_lower_bound(e, X, 4, 10)
    vecs = power_iteration_vectors(e, X, 4, 10)
    assert max(rayleigh_quotient(e, X, v) for v in vecs) == pytest.approx(max(nb.power_quotients), rel=1e-12)


def test_norm_lower_bound_needs_radius():
    f, X = make_family("free", rank=2)
    with pytest.raises(UsageError):
        norm_lower_bound(f, X, 0, 5)


def test_acbc_random_rayleigh_quotients():
    e, X = acbc()
    vecs = random_vectors(e, X, 6, 1000, seed=2024) + power_iteration_vectors(e, X, 6, 20)
    assert len(vecs) == 1020
    assert max(rayleigh_quotient(e, X, v) for v in vecs) <= ACBC_BOUND + 1e-9


@pytest.mark.parametrize("name", ["free2", "free3", "freecomm2", "z_sym", "z_asym", "z2", "bicyclic", "c3"])
def test_cancellative_bound(name):
    engine, gens = builtin_engines()[name]
    vecs = random_vectors(engine, gens, 5, 1000, seed=11)
    assert max(rayleigh_quotient(engine, gens, v) for v in vecs) <= 1 + 1e-9


def test_random_vectors_reproducible():
    e, X = acbc()
    assert random_vectors(e, X, 4, 20, seed=5) == random_vectors(e, X, 4, 20, seed=5)
    assert random_vectors(e, X, 4, 20, seed=5) != random_vectors(e, X, 4, 20, seed=6)
    assert all(1 <= len(v) <= 50 for v in random_vectors(e, X, 6, 200, seed=1))


@settings(max_examples=200)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=30))
def test_square_of_sum_inequality(values):
    assert sum(values) ** 2 <= len(values) * sum(x * x for x in values)


@settings(max_examples=100)
@given(st.lists(st.fractions(min_value=-100, max_value=100), min_size=1, max_size=20))
def test_square_of_sum_inequality_rationals(values):
    assert sum(values) ** 2 <= len(values) * sum(x * x for x in values)


def test_spectral_lower_bound_examples():
    f, X = make_family("free", rank=2)
    assert spectral_radius_lower_bound(f, X, 10) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    z, Y = make_family("integer_lattice", dim=1, gens=[1, -1])
    value = spectral_radius_lower_bound(z, Y, 10)
    assert value == pytest.approx(comb(20, 10) ** (1 / 20) / 2, rel=1e-12)
    assert value == pytest.approx(0.9168, abs=1e-4)


def test_spectral_lower_bound_bicyclic_against_enumeration():
    e, X = make_family("bicyclic")
    value = spectral_radius_lower_bound(e, X, 12)
    # independent: enumerate all 2^n words and square the histogram
    best = max(math.log(sum(c * c for c in histogram(e, X, n).values())) / (2 * n) for n in range(1, 13))
    assert value == pytest.approx(math.exp(best) / 2, rel=1e-12)
    assert 0.5 < value <= 1


def test_spectral_identity_links_modules(builtin):
    name, engine, gens = builtin
    table = CogrowthTable(engine, gens, 8)
    value = spectral_radius_lower_bound(table=table)
    assert value * len(gens) == pytest.approx(gamma_rate(table=table).value, rel=1e-12)


def test_opposite_free_walks_agree():
    f, X = make_family("free", rank=2)
    fo, Xo = opposite(f, X)
    a = operator_report(f, X, 8)
    b = operator_report(fo, Xo, 8)
    assert a.walk_norms_squared == b.walk_norms_squared
    assert a.spectral_radius_lower_bound == b.spectral_radius_lower_bound


def test_operator_report_contents():
    e, X = acbc()
    rep = operator_report(e, X, 6, rayleigh_samples=200, seed=1)
    assert rep.walk_identity.passed
    assert rep.rayleigh_max <= ACBC_BOUND + 1e-9
    assert rep.indegree.max_indegree[2] == 2
    assert set(rep.walk_norms) == set(range(1, 7))


def test_apply_keeps_floats_and_rationals_apart():
    f, X = make_family("free", rank=2)
    exact = apply(f, X, {f.identity: 1})
    assert all(isinstance(a, Fraction) for a in exact.values())
    approx = apply(f, X, {f.identity: 1.0})
    assert all(isinstance(a, float) for a in approx.values())


def test_left_walk_acbc_within_cancellative_bound():
    """Left multiplication is injective in ac = bc, so the left walk obeys the cancellative bound."""
    e, X = acbc()
    eo, Xo = opposite(e, X)
    vecs = random_vectors(eo, Xo, 4, 300, seed=0)
    assert max(rayleigh_quotient(eo, Xo, v) for v in vecs) <= 1 + 1e-9
