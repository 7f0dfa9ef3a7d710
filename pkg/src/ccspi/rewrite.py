"""The distribution law as a rewrite system, and the induced decision
procedure for strong bisimilarity of (possibly open) sum-free CCS terms.

A redex is a subterm of shape eta.(P | (eta.P)^k) with k >= 1; it rewrites
to (eta.P)^(k+1).  The rewrite system terminates (the summed nesting depth
of prefixes strictly decreases) and is confluent, so normal forms are
unique; two ground terms are bisimilar iff their normal forms are equal.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .lts import bisimilar_oracle
from .terms import (
    NIL,
    Act,
    Nil,
    Par,
    Prefix,
    Sum,
    Term,
    Var,
    act,
    canonicalize,
    fresh_names,
    instantiate,
    is_ground,
    names,
    par,
    parallel_components,
    prefixes,
    size,
    sort_key,
    variables,
)


def _redex_contractions(prefix: Prefix, cont: Term) -> list[Term]:
    """All ways the node prefix.cont matches eta.(P | (eta.P)^k), each giving
    the contractum (eta.P)^(k+1).  Ordered by (component, k) for determinism."""
    comps = parallel_components(cont)
    counts = Counter(comps)
    out: list[Term] = []
    for e in sorted(counts, key=sort_key):
        if not (isinstance(e, Act) and e.prefix == prefix):
            continue
        for k in range(1, counts[e] + 1):
            remainder: list[Term] = []
            for c, m in counts.items():
                m_left = m - k if c == e else m
                remainder.extend([c] * m_left)
            if par(remainder) == e.cont:
                out.append(par([e] * (k + 1)))
    return out


def rewrite_step(t: Term) -> Term | None:
    """Contract the innermost-leftmost redex (components in canonical order),
    or return None if t is a normal form.  Variables are inert leaves."""
    match t:
        case Nil() | Var():
            return None
        case Sum():
            raise ValueError("the distribution law applies to sum-free terms only")
        case Act(prefix=p, cont=c):
            r = rewrite_step(c)
            if r is not None:
                return Act(p, r)
            contracta = _redex_contractions(p, c)
            return contracta[0] if contracta else None
        case Par(parts=ps):
            for i, part in enumerate(ps):
                r = rewrite_step(part)
                if r is not None:
                    return par(ps[:i] + (r,) + ps[i + 1 :])
            return None
    raise TypeError(f"not a term: {t!r}")


def rewrite_candidates(t: Term) -> frozenset[Term]:
    """Every one-step reduct of t (all redex positions and matches), for
    exploring the full reduction graph."""
    out: set[Term] = set()
    match t:
        case Act(prefix=p, cont=c):
            for r in rewrite_candidates(c):
                out.add(Act(p, r))
            out.update(_redex_contractions(p, c))
        case Par(parts=ps):
            for i, part in enumerate(ps):
                for r in rewrite_candidates(part):
                    out.add(par(ps[:i] + (r,) + ps[i + 1 :]))
        case Sum():
            raise ValueError("the distribution law applies to sum-free terms only")
        case _:
            pass
    return frozenset(out)


def normalize_steps(t: Term) -> tuple[Term, int]:
    u = canonicalize(t)
    steps = 0
    while True:
        r = rewrite_step(u)
        if r is None:
            return u, steps
        u = r
        steps += 1


@lru_cache(maxsize=None)
def normalize(t: Term) -> Term:
    """The unique normal form of a (possibly open) sum-free term."""
    return normalize_steps(t)[0]


def normalize_open(t: Term) -> Term:
    """Alias of normalize making the open-term use explicit: variables never
    head a redex but may appear inside matched continuations."""
    return normalize(t)


def decide_bisim(p: Term, q: Term) -> bool:
    """Strong bisimilarity of ground sum-free terms, decided by comparing
    distribution-law normal forms."""
    return normalize(canonicalize(p)) == normalize(canonicalize(q))


# --------------------------------------------------------------------------
# prime decomposition


def prime_decompose(p: Term) -> tuple[Term, ...]:
    """The multiset (sorted tuple) of prime components of p's normal form.
    Every prefixed normal form is prime, and the decomposition is unique."""
    if not is_ground(p):
        raise ValueError("prime decomposition undefined on open terms")
    return parallel_components(normalize(canonicalize(p)))


def is_prime(p: Term) -> bool:
    return len(prime_decompose(p)) == 1


def is_prime_bruteforce(p: Term, *, size_bound: int = 6, equivalence=None) -> bool:
    """Primality via the definition: p is prime iff p is not bisimilar to 0
    and every split p ~ q | r has a trivial side.  Candidate q, r range over
    terms built from p's own prefixes with sizes summing to size(p); that is
    exhaustive, since bisimilar terms have equal size and every prefix of a
    sum-free term eventually fires.
    """
    from .generate import ccs_terms_of_size

    p = canonicalize(p)
    if not is_ground(p):
        raise ValueError("prime decomposition undefined on open terms")
    equiv = equivalence if equivalence is not None else bisimilar_oracle
    n = size(p)
    if n > size_bound:
        raise ValueError("brute-force bound exceeded")
    if n == 0:
        return False
    alphabet = tuple(sorted(prefixes(p)))
    for k in range(1, n // 2 + 1):
        for q in ccs_terms_of_size(k, alphabet):
            for r in ccs_terms_of_size(n - k, alphabet):
                if equiv(p, par((q, r))):
                    return False
    return True


# --------------------------------------------------------------------------
# open terms: extensional equality


def decide_extensional(m: Term, n: Term) -> bool:
    """Equality of open terms under every closing substitution.  Decided by
    instantiating each variable with a.0 for fresh distinct names a and
    comparing normal forms of the ground instances."""
    m, n = canonicalize(m), canonicalize(n)
    vs = sorted(variables(m) | variables(n))
    fresh = fresh_names(names(m) | names(n), len(vs))
    inst = {v: act(Prefix(f), NIL) for v, f in zip(vs, fresh)}
    gm = instantiate(m, inst, require_ground=True)
    gn = instantiate(n, inst, require_ground=True)
    return decide_bisim(gm, gn)
