"""The distribution-law rewrite system and the normal-form decision
procedure, cross-checked against the partition-refinement oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ccspi.lts import bisimilar_oracle
from ccspi.rewrite import (
    decide_bisim,
    decide_extensional,
    is_prime,
    is_prime_bruteforce,
    normalize,
    normalize_open,
    normalize_steps,
    prime_decompose,
    rewrite_candidates,
    rewrite_step,
)
from ccspi.syntax import parse_ccs
from ccspi.terms import (
    NIL,
    Act,
    Prefix,
    Var,
    canonicalize,
    csum,
    instantiate,
    par,
    weight,
)


def term_st(with_vars=False):
    base = st.just(NIL)
    if with_vars:
        base = base | st.builds(Var, st.sampled_from(["X", "Y"]))
    return st.recursive(
        base,
        lambda kids: st.one_of(
            st.builds(Act, st.builds(Prefix, st.sampled_from("ab"), st.booleans()), kids),
            st.lists(kids, min_size=2, max_size=3).map(par),
        ),
        max_leaves=6,
    ).map(canonicalize)


def test_rewrite_step_basic():
    assert rewrite_step(parse_ccs("a.a.0")) == parse_ccs("a.0 | a.0")
    assert rewrite_step(parse_ccs("a.b.0")) is None
    assert rewrite_step(NIL) is None
    assert rewrite_step(Var("X")) is None


def test_rewrite_rejects_sums():
    with pytest.raises(ValueError, match="sum-free"):
        rewrite_step(csum([parse_ccs("a.0"), parse_ccs("b.0")]))
    with pytest.raises(ValueError, match="sum-free"):
        rewrite_candidates(csum([parse_ccs("a.0"), parse_ccs("b.0")]))


def test_normalize_ladder():
    nf, steps = normalize_steps(parse_ccs("a.a.a.0"))
    assert nf == parse_ccs("a.0 | a.0 | a.0")
    assert steps == 2
    nf, steps = normalize_steps(parse_ccs("a.(b.0 | a.b.0)"))
    assert nf == parse_ccs("a.b.0 | a.b.0")
    assert steps == 1


def test_normalize_fixed_points():
    for src in ["0", "a.b.0", "a.0 | b.0", "'a.0"]:
        t = parse_ccs(src)
        assert normalize(t) == t


def test_normalize_open_redex():
    # the law fires with a variable continuation: a.(X | a.X) = a.X | a.X
    assert normalize_open(parse_ccs("a.(X | a.X)")) == parse_ccs("a.X | a.X")
    assert normalize_open(Var("X")) == Var("X")


@given(term_st(with_vars=True))
def test_normalize_idempotent(t):
    assert normalize(normalize(t)) == normalize(t)


@given(term_st(with_vars=True))
@settings(max_examples=60)
def test_all_reduction_paths_join(t):
    # local confluence observed on the full candidate set
    for u in rewrite_candidates(t):
        assert weight(u) < weight(t)
        assert normalize(u) == normalize(t)


@given(term_st())
def test_normal_form_decides_bisimilarity(p):
    # dual route: syntactic normal forms versus the semantic oracle
    q = rewrite_step(p)
    if q is not None:
        assert decide_bisim(p, q)
        assert bisimilar_oracle(p, q)


@given(term_st(), term_st())
@settings(max_examples=60)
def test_decide_bisim_matches_oracle(p, q):
    assert decide_bisim(p, q) == bisimilar_oracle(p, q)


def test_distribution_law_shape():
    # eta.(P | (eta.P)^k) contracts to (eta.P)^(k+1)
    eta = Prefix("a")
    for p_src in ["0", "b.0", "a.0 | b.0"]:
        p = parse_ccs(p_src)
        for k in (1, 2):
            red = Act(eta, par([p] + [Act(eta, p)] * k))
            assert normalize(red) == par([Act(eta, p)] * (k + 1))


def test_prime_decompose():
    assert prime_decompose(parse_ccs("a.a.0")) == (parse_ccs("a.0"), parse_ccs("a.0"))
    assert prime_decompose(NIL) == ()
    assert is_prime(parse_ccs("a.b.0"))
    assert not is_prime(parse_ccs("a.0 | b.0"))
    assert not is_prime(NIL)
    with pytest.raises(ValueError, match="open"):
        prime_decompose(Var("X"))


def test_prime_bruteforce_agrees():
    from ccspi.generate import ccs_terms_upto, prefix_alphabet

    for t in ccs_terms_upto(3, prefix_alphabet(("a", "b"))):
        assert is_prime_bruteforce(t) == is_prime(t), t


def test_prime_bruteforce_bound():
    with pytest.raises(ValueError, match="bound"):
        is_prime_bruteforce(parse_ccs("a.a.a.a.0"), size_bound=3)


def test_decide_extensional():
    assert decide_extensional(parse_ccs("X | a.0"), parse_ccs("a.0 | X"))
    assert not decide_extensional(parse_ccs("X | a.0"), parse_ccs("X | b.0"))
    assert not decide_extensional(parse_ccs("X"), parse_ccs("X | X"))
    assert decide_extensional(parse_ccs("a.(X | a.X)"), parse_ccs("a.X | a.X"))


@given(term_st(with_vars=True))
@settings(max_examples=60)
def test_normalization_commutes_with_instantiation(t):
    # instantiating variables with fresh distinct prefixes neither creates
    # nor destroys redexes
    from ccspi.terms import fresh_names, names, variables

    vs = sorted(variables(t))
    supply = fresh_names(names(t), len(vs))
    inst = {v: Act(Prefix(n), NIL) for v, n in zip(vs, supply)}
    assert instantiate(normalize_open(t), inst) == normalize(instantiate(t, inst))
