"""Bounded enumeration and seeded random generation of canonical terms.

Enumerators build every canonical term within a size bound exactly once
(up to final set-deduplication) and return them in a deterministic order:
ascending size, then the canonical term order.  Sizes count prefix
occurrences.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from .terms import NIL, Act, Prefix, Sum, Term, Var, csum, par, size, sort_key
from .pi import (
    PI_NIL,
    BoundName,
    FreeName,
    NameRef,
    PiInput,
    PiNu,
    PiOutput,
    PiPar,
    PiTerm,
    dangling,
    pi_nu,
    pi_par,
    pi_size,
    pi_sort_key,
)


def prefix_alphabet(names: tuple[str, ...]) -> tuple[Prefix, ...]:
    """Both polarities of each name, sorted."""
    return tuple(sorted(Prefix(n, co) for n in names for co in (False, True)))


def _partitions(n: int, max_parts: int | None = None, least: int = 1) -> list[tuple[int, ...]]:
    """Additive partitions of n into parts >= least, non-increasing order."""
    out: list[tuple[int, ...]] = []

    def go(remaining: int, cap: int, acc: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(acc)
            return
        if max_parts is not None and len(acc) == max_parts:
            return
        for part in range(min(cap, remaining), least - 1, -1):
            go(remaining - part, part, acc + (part,))

    go(n, n, ())
    return out


@lru_cache(maxsize=None)
def ccs_prefixed_of_size(n: int, alphabet: tuple[Prefix, ...]) -> tuple[Term, ...]:
    if n == 0:
        return ()
    return tuple(
        sorted(
            (Act(p, t) for p in alphabet for t in ccs_terms_of_size(n - 1, alphabet)),
            key=sort_key,
        )
    )


@lru_cache(maxsize=None)
def ccs_terms_of_size(n: int, alphabet: tuple[Prefix, ...]) -> tuple[Term, ...]:
    """All canonical sum-free ground terms with exactly n prefixes."""
    if n == 0:
        return (NIL,)
    found: set[Term] = set(ccs_prefixed_of_size(n, alphabet))
    for parts in _partitions(n):
        if len(parts) < 2:
            continue
        pools = [ccs_prefixed_of_size(k, alphabet) for k in parts]
        for combo in product(*pools):
            found.add(par(combo))
    return tuple(sorted(found, key=sort_key))


def ccs_terms_upto(n: int, alphabet: tuple[Prefix, ...]) -> list[Term]:
    out: list[Term] = []
    for k in range(n + 1):
        out.extend(ccs_terms_of_size(k, alphabet))
    return out


@lru_cache(maxsize=None)
def ccs_plus_guarded_of_size(n: int, alphabet: tuple[Prefix, ...]) -> tuple[Term, ...]:
    """Prefixed terms and sums of >= 2 distinct prefixed terms (idempotence
    collapses duplicate summands, which would change the size)."""
    if n == 0:
        return ()
    found: set[Term] = set(
        Act(p, t) for p in alphabet for t in ccs_plus_terms_of_size(n - 1, alphabet)
    )
    for parts in _partitions(n):
        if len(parts) < 2:
            continue
        pools = [ccs_plus_guarded_prefixed(k, alphabet) for k in parts]
        for combo in product(*pools):
            t = csum(combo)
            if isinstance(t, Sum) and size(t) == n:
                found.add(t)
    return tuple(sorted(found, key=sort_key))


@lru_cache(maxsize=None)
def ccs_plus_guarded_prefixed(n: int, alphabet: tuple[Prefix, ...]) -> tuple[Term, ...]:
    if n == 0:
        return ()
    return tuple(
        sorted(
            (Act(p, t) for p in alphabet for t in ccs_plus_terms_of_size(n - 1, alphabet)),
            key=sort_key,
        )
    )


@lru_cache(maxsize=None)
def ccs_plus_terms_of_size(n: int, alphabet: tuple[Prefix, ...]) -> tuple[Term, ...]:
    """All canonical guarded-sum terms with exactly n prefixes."""
    if n == 0:
        return (NIL,)
    found: set[Term] = set(ccs_plus_guarded_of_size(n, alphabet))
    for parts in _partitions(n):
        if len(parts) < 2:
            continue
        pools = [ccs_plus_guarded_of_size(k, alphabet) for k in parts]
        for combo in product(*pools):
            found.add(par(combo))
    return tuple(sorted(found, key=sort_key))


def ccs_plus_terms_upto(n: int, alphabet: tuple[Prefix, ...]) -> list[Term]:
    out: list[Term] = []
    for k in range(n + 1):
        out.extend(ccs_plus_terms_of_size(k, alphabet))
    return out


# --------------------------------------------------------------------------
# pi terms


@lru_cache(maxsize=None)
def _pi_cells(prefix_count: int, nu_count: int, frees: tuple[str, ...], depth: int):
    """Canonical pi terms with exactly the given prefix and restriction
    counts, under `depth` enclosing binders (all of which may be referenced).
    Returns (all_terms, non_par_terms); the latter are legal Par components."""
    channels: tuple[NameRef, ...] = tuple(FreeName(n) for n in frees) + tuple(
        BoundName(k) for k in range(depth)
    )
    comps: set[PiTerm] = set()
    if prefix_count > 0:
        for body in _pi_all(prefix_count - 1, nu_count, frees, depth + 1):
            for c in channels:
                comps.add(PiInput(c, body))
        for body in _pi_all(prefix_count - 1, nu_count, frees, depth):
            for c in channels:
                for payload in channels:
                    comps.add(PiOutput(c, payload, body))
    if nu_count > 0:
        for body in _pi_all(prefix_count, nu_count - 1, frees, depth + 1):
            if 0 in dangling(body):
                comps.add(PiNu(body))
    terms: set[PiTerm] = set(comps)
    if prefix_count + nu_count == 0:
        terms.add(PI_NIL)
    splits: list[list[tuple[int, int]]] = []

    def split_budgets(p_left: int, v_left: int, acc: list[tuple[int, int]]) -> None:
        if len(acc) >= 2 and p_left == 0 and v_left == 0:
            splits.append(list(acc))
        for dp in range(p_left + 1):
            for dv in range(v_left + 1):
                if dp + dv == 0:
                    continue
                cell = (dp, dv)
                if acc and cell > acc[-1]:
                    continue  # non-increasing budget tuples avoid some dups
                split_budgets(p_left - dp, v_left - dv, acc + [cell])

    split_budgets(prefix_count, nu_count, [])
    for budgets in splits:
        pools = [_pi_cells(dp, dv, frees, depth)[1] for dp, dv in budgets]
        for combo in product(*pools):
            t = PiPar(tuple(sorted(combo, key=pi_sort_key)))
            if pi_size(t) == prefix_count:
                terms.add(t)
    return tuple(sorted(terms, key=pi_sort_key)), tuple(sorted(comps, key=pi_sort_key))


def _pi_all(prefix_count: int, nu_count: int, frees: tuple[str, ...], depth: int):
    return _pi_cells(prefix_count, nu_count, frees, depth)[0]


def pi_terms_upto(max_prefixes: int, max_nus: int, frees: tuple[str, ...]) -> list[PiTerm]:
    """All closed canonical terms with at most the given numbers of prefixes
    and restrictions, free names drawn from frees."""
    found: set[PiTerm] = set()
    for p in range(max_prefixes + 1):
        for v in range(max_nus + 1):
            found.update(_pi_all(p, v, frees, 0))
    return sorted(found, key=lambda t: (pi_size(t), pi_sort_key(t)))


# --------------------------------------------------------------------------
# random generation (seeded)


def random_ccs_open(rng: random.Random, max_size: int, var_names: tuple[str, ...],
                    names: tuple[str, ...] = ("a", "b", "c")) -> Term:
    """A canonical, possibly open, sum-free term with at most max_size
    prefixes."""
    alphabet = prefix_alphabet(names)

    def go(budget: int) -> Term:
        choices = ["nil", "var"]
        if budget >= 1:
            choices += ["act"] * 3
        if budget >= 2:
            choices += ["par"] * 2
        match rng.choice(choices):
            case "nil":
                return NIL
            case "var":
                return Var(rng.choice(var_names))
            case "act":
                return Act(rng.choice(alphabet), go(budget - 1))
            case _:
                k = rng.randint(1, budget - 1)
                return par((go(k), go(budget - k)))

    return go(max_size)


def random_pi(rng: random.Random, max_prefixes: int, max_nus: int,
              frees: tuple[str, ...]) -> PiTerm:
    """A closed canonical pi term within the prefix/restriction budgets."""

    def go(p_budget: int, v_budget: int, depth: int) -> PiTerm:
        channels: list[NameRef] = [FreeName(n) for n in frees] + [
            BoundName(k) for k in range(depth)
        ]
        choices = ["nil"]
        if p_budget >= 1:
            choices += ["input", "output"] * 3
        if v_budget >= 1:
            choices += ["nu"] * 2
        if p_budget >= 2:
            choices += ["par"] * 2
        match rng.choice(choices):
            case "nil":
                return PI_NIL
            case "input":
                return PiInput(rng.choice(channels), go(p_budget - 1, v_budget, depth + 1))
            case "output":
                return PiOutput(
                    rng.choice(channels), rng.choice(channels), go(p_budget - 1, v_budget, depth)
                )
            case "nu":
                # pi_nu drops an unused binder and fixes up the indices
                return pi_nu(go(p_budget, v_budget - 1, depth + 1))
            case _:
                k = rng.randint(1, p_budget - 1)
                v = rng.randint(0, v_budget)
                return pi_par((go(k, v, depth), go(p_budget - k, v_budget - v, depth)))

    return go(max_prefixes, max_nus, 0)


def all_substitutions(domain: tuple[str, ...], targets: tuple[str, ...]) -> list[dict[str, str]]:
    """Every map from domain into targets."""
    out = []
    for image in product(targets, repeat=len(domain)):
        out.append(dict(zip(domain, image)))
    return out
