"""Enumerators and random generators.  The enumeration counts are
cross-checked against an independent multiset-counting recurrence."""

import random
from collections import Counter
from math import comb

from ccspi.generate import (
    all_substitutions,
    ccs_plus_terms_upto,
    ccs_terms_of_size,
    ccs_terms_upto,
    pi_terms_upto,
    prefix_alphabet,
    random_ccs_open,
    random_pi,
)
from ccspi.pi import dangling, pi_canonicalize, pi_size
from ccspi.terms import Prefix, canonicalize, is_ground, size, variables


def _partitions(n, max_part=None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _micro_counts(n_prefixes, upto):
    """Terms of each exact size: a term is 0, a prefixed term, or a parallel
    multiset of >= 2 prefixed terms.  Multisets with repetition."""
    pref = {0: 0}
    total = {0: 1}
    for n in range(1, upto + 1):
        pref[n] = n_prefixes * total[n - 1]
        c = pref[n]
        for parts in _partitions(n):
            if len(parts) < 2:
                continue
            prod = 1
            for sz, mult in Counter(parts).items():
                prod *= comb(pref[sz] + mult - 1, mult)
            c += prod
        total[n] = c
    return total


def _plus_counts(n_prefixes, upto):
    """Same skeleton with guarded terms: prefixed, or a sum of >= 2 distinct
    prefixed terms (sets, not multisets)."""
    pref = {0: 0}
    guarded = {0: 0}
    total = {0: 1}
    for n in range(1, upto + 1):
        pref[n] = n_prefixes * total[n - 1]
        g = pref[n]
        for parts in _partitions(n):
            if len(parts) < 2:
                continue
            prod = 1
            for sz, mult in Counter(parts).items():
                prod *= comb(pref[sz], mult)
            g += prod
        guarded[n] = g
        c = g
        for parts in _partitions(n):
            if len(parts) < 2:
                continue
            prod = 1
            for sz, mult in Counter(parts).items():
                prod *= comb(guarded[sz] + mult - 1, mult)
            c += prod
        total[n] = c
    return total


ALPHABET = prefix_alphabet(("a", "b"))


def test_prefix_alphabet():
    assert ALPHABET == (
        Prefix("a"),
        Prefix("a", co=True),
        Prefix("b"),
        Prefix("b", co=True),
    )


def test_micro_counts_match_recurrence():
    expected = _micro_counts(len(ALPHABET), 5)
    for n in range(5):
        assert len(ccs_terms_of_size(n, ALPHABET)) == expected[n]
    # frozen values: 1, 4, 26, 188, 1499, 12628
    assert [expected[n] for n in range(6)] == [1, 4, 26, 188, 1499, 12628]
    assert len(ccs_terms_upto(4, ALPHABET)) == sum(expected[n] for n in range(5))
    assert len(ccs_terms_of_size(5, ALPHABET)) == 12628


def test_plus_counts_match_recurrence():
    expected = _plus_counts(len(ALPHABET), 3)
    got = ccs_plus_terms_upto(3, ALPHABET)
    assert len(got) == sum(expected[n] for n in range(4)) == 341


def test_enumerations_are_canonical_and_deterministic():
    terms = ccs_terms_upto(3, ALPHABET)
    assert terms == ccs_terms_upto(3, ALPHABET)
    assert len(set(terms)) == len(terms)
    assert all(canonicalize(t) == t and is_ground(t) for t in terms)
    sizes = [size(t) for t in terms]
    assert sizes == sorted(sizes)  # smallest first


def test_pi_enumeration_tiny_hand_counts():
    # over a single free name: 0, a(x).0, a<a>.0
    assert len(pi_terms_upto(1, 0, ("a",))) == 3
    # a restriction binding nothing is dropped, so only 0 remains
    assert len(pi_terms_upto(0, 1, ("a",))) == 1
    # adds p(x).0, p<a>.0, p<p>.0, a<p>.0 under one restriction
    assert len(pi_terms_upto(1, 1, ("a",))) == 7


def test_pi_enumeration_properties():
    terms = pi_terms_upto(2, 1, ("a", "b"))
    assert len(terms) == len(set(terms)) == 335  # regression pin
    for t in terms:
        assert dangling(t) == frozenset()
        assert pi_canonicalize(t) == t
        assert pi_size(t) <= 2
    sizes = [pi_size(t) for t in terms]
    assert sizes == sorted(sizes)


def test_random_ccs_open_bounds():
    rng = random.Random(5)
    for _ in range(200):
        t = random_ccs_open(rng, 4, ("X", "Y"))
        assert canonicalize(t) == t
        assert variables(t) <= {"X", "Y"}


def test_random_pi_bounds():
    rng = random.Random(6)
    for _ in range(200):
        t = random_pi(rng, 4, 2, ("a", "b"))
        assert pi_canonicalize(t) == t
        assert dangling(t) == frozenset()
        assert pi_size(t) <= 4


def test_random_generators_deterministic():
    a = [random_pi(random.Random(1), 4, 1, ("a", "b")) for _ in range(5)]
    b = [random_pi(random.Random(1), 4, 1, ("a", "b")) for _ in range(5)]
    assert a == b


def test_all_substitutions():
    subs = all_substitutions(("a", "b"), ("a", "b"))
    assert len(subs) == 4
    assert {"a": "a", "b": "a"} in subs
    assert all(set(s.keys()) == {"a", "b"} for s in subs)
