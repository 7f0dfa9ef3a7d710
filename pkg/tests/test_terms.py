"""Canonical term representation: smart constructors, measures, renaming."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccspi.terms import (
    NIL,
    Act,
    Nil,
    Par,
    Prefix,
    Sum,
    Var,
    canonicalize,
    contribution,
    csum,
    fresh_names,
    instantiate,
    is_ground,
    names,
    par,
    parallel_components,
    prefixes,
    size,
    sort_key,
    substitute,
    variables,
    weight,
)

A = Prefix("a")
B = Prefix("b")
COA = Prefix("a", co=True)

a0 = Act(A, NIL)
b0 = Act(B, NIL)


def prefix_st():
    return st.builds(Prefix, st.sampled_from("ab"), st.booleans())


def term_st(with_vars=False):
    base = st.just(NIL)
    if with_vars:
        base = base | st.builds(Var, st.sampled_from(["X", "Y"]))
    return st.recursive(
        base,
        lambda kids: st.one_of(
            st.builds(Act, prefix_st(), kids),
            st.lists(kids, min_size=2, max_size=3).map(lambda xs: Par(tuple(xs))),
        ),
        max_leaves=6,
    ).map(canonicalize)


def test_prefix_polarity():
    assert str(A) == "a"
    assert str(COA) == "'a"
    assert A.complement() == COA
    assert COA.complement() == A
    assert A != COA


def test_par_flattens_and_sorts():
    assert par([b0, a0]) == par([a0, b0])
    assert par([a0, par([b0, NIL])]) == par([a0, b0])
    assert par([]) == NIL
    assert par([a0]) == a0
    assert par([NIL, NIL]) == NIL


def test_par_keeps_multiplicity():
    t = par([a0, a0])
    assert isinstance(t, Par)
    assert t.parts == (a0, a0)


def test_csum_is_a_set():
    assert csum([a0, a0]) == a0
    assert csum([b0, a0]) == csum([a0, b0, a0])
    assert csum([]) == NIL
    s = csum([a0, b0])
    assert isinstance(s, Sum)
    assert s.parts == (a0, b0)


def test_csum_rejects_unguarded_summands():
    with pytest.raises(ValueError, match="summands must be prefixed"):
        csum([a0, par([a0, b0])])
    with pytest.raises(ValueError, match="summands must be prefixed"):
        csum([Var("X")])


def test_parallel_components():
    assert parallel_components(NIL) == ()
    assert parallel_components(a0) == (a0,)
    assert parallel_components(par([a0, b0])) == (a0, b0)


@given(term_st(with_vars=True))
def test_canonicalize_idempotent(t):
    assert canonicalize(t) == t


@given(term_st(), term_st(), term_st())
def test_par_associative_commutative(x, y, z):
    assert par([x, par([y, z])]) == par([par([x, y]), z]) == par([z, y, x])


def test_size_and_weight():
    assert size(NIL) == 0
    assert size(Act(A, Act(B, NIL))) == 2
    assert size(par([a0, a0, b0])) == 3
    # weight sums nesting depths, so it drops when prefixes move up
    assert weight(Act(A, Act(A, Act(A, NIL)))) == 6
    assert weight(par([a0, a0, a0])) == 3


def test_size_undefined_on_open_terms():
    with pytest.raises(ValueError):
        size(Var("X"))
    with pytest.raises(ValueError):
        contribution(par([a0, Var("X")]), A)


def test_contribution_counts_headed_components():
    t = par([Act(A, b0), a0, Act(B, NIL)])
    assert contribution(t, A) == 3
    assert contribution(t, B) == 1
    assert contribution(t, COA) == 0
    assert contribution(NIL, A) == 0
    assert contribution(Act(COA, a0), COA) == 2


def test_name_queries():
    t = par([Act(A, Var("X")), Act(Prefix("b", co=True), NIL)])
    assert prefixes(t) == frozenset({A, Prefix("b", co=True)})
    assert names(t) == frozenset({"a", "b"})
    assert variables(t) == frozenset({"X"})
    assert not is_ground(t)
    assert is_ground(instantiate(t, {"X": NIL}))


def test_substitute_renames_and_recanonicalizes():
    assert substitute(Act(A, NIL), {"a": "c"}) == Act(Prefix("c"), NIL)
    assert substitute(Act(COA, NIL), {"a": "c"}) == Act(Prefix("c", co=True), NIL)
    # a collapse can merge summands
    s = csum([Act(A, NIL), Act(B, NIL)])
    assert substitute(s, {"b": "a"}) == a0
    assert substitute(a0, {}) == a0


def test_instantiate():
    t = par([Var("X"), Act(A, Var("X"))])
    got = instantiate(t, {"X": b0})
    assert got == par([b0, Act(A, b0)])
    assert instantiate(Var("X"), {}) == Var("X")
    with pytest.raises(ValueError, match="not covered"):
        instantiate(Var("X"), {}, require_ground=True)


@given(term_st(with_vars=True), st.sampled_from(["a", "b"]), st.sampled_from(["a", "b", "c"]))
def test_substitute_preserves_size_shape(t, frm, to):
    u = substitute(t, {frm: to})
    assert variables(u) == variables(t)
    if is_ground(t):
        assert size(u) == size(t)


@given(term_st())
def test_canonical_components_are_sorted(t):
    comps = parallel_components(t)
    assert tuple(sorted(comps, key=sort_key)) == comps


def test_fresh_names_skip_taken():
    assert fresh_names({"a", "b"}, 2) == ["c", "d"]
    got = fresh_names(set("abcdefghijklmnopqrstuvwxyz"), 1)
    assert got == ["aa"]
    assert fresh_names(set(), 0) == []
