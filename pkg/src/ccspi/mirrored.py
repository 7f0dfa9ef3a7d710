"""Mirrored dependencies: two distinct prefixes firing in either order with
the second occurrence nested under the first, ending in equivalent states.

Sum-free CCS admits no mirrored dependency: a component headed by one
prefix cannot also contribute the other prefix's size at the top level
(the contribution measure is preserved by bisimilarity but differs between
the two sides).  With guarded sums the diagram shape becomes satisfiable,
for instance by a.'b.0 + 'b.a.0, which is why strong bisimilarity stops
being substitution closed there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .distributed import strong_bisim_plus
from .generate import ccs_plus_terms_upto, ccs_terms_upto, prefix_alphabet
from .lts import Tau, transitions
from .rewrite import decide_bisim
from .terms import NIL, Act, Par, Prefix, Sum, Term, canonicalize, par, sort_key, substitute

Equivalence = Callable[[Term, Term], bool]


def _default_equiv(calculus: str) -> Equivalence:
    if calculus == "ccs":
        return decide_bisim
    if calculus == "ccs+":
        return strong_bisim_plus
    raise ValueError(f"unknown calculus: {calculus}")


@dataclass(frozen=True)
class MdWitness:
    """A parallel-shape candidate: s -eta1-> s1, t -eta2-> t1 and
    eta2.s | t1 | r is equivalent to s1 | eta1.t | r."""

    eta1: Prefix
    eta2: Prefix
    s: Term
    s1: Term
    t: Term
    t1: Term
    r: Term
    calculus: str = "ccs"


def check_md(w: MdWitness, *, equivalence: Equivalence | None = None) -> bool:
    """Validate the candidate shape, then decide whether it is an actual
    mirrored dependency."""
    if w.eta1 == w.eta2:
        raise ValueError("not a candidate MD")
    if (w.eta1, w.s1) not in transitions(w.s):
        raise ValueError("not a candidate MD")
    if (w.eta2, w.t1) not in transitions(w.t):
        raise ValueError("not a candidate MD")
    equiv = equivalence or _default_equiv(w.calculus)
    left = par((Act(w.eta2, w.s), w.t1, w.r))
    right = par((w.s1, Act(w.eta1, w.t), w.r))
    return equiv(left, right)


def search_md_parallel_shape(
    size_bound: int,
    names: tuple[str, ...],
    *,
    equivalence: Equivalence | None = None,
) -> MdWitness | None:
    """Exhaustive search for a sum-free mirrored dependency with per-component
    size bound.  The parallel context r is fixed to 0: normal forms compose
    componentwise under parallel, so the two sides are bisimilar with some r
    iff they are bisimilar with r = 0 (cancellation).
    """
    equiv = equivalence or decide_bisim
    pool = ccs_terms_upto(size_bound, prefix_alphabet(names))
    moves: list[tuple[Prefix, Term, Term]] = []
    for s in pool:
        visible = [(a, s1) for a, s1 in transitions(s) if not isinstance(a, Tau)]
        for a, s1 in sorted(visible, key=lambda e: (e[0], sort_key(e[1]))):
            moves.append((a, s, s1))
    for eta1, s, s1 in moves:
        for eta2, t, t1 in moves:
            if eta1 == eta2:
                continue
            w = MdWitness(eta1, eta2, s, s1, t, t1, NIL)
            left = par((Act(eta2, s), t1))
            right = par((s1, Act(eta1, t)))
            if equiv(left, right):
                return w
    return None


def md_contribution_bounds(w: MdWitness) -> tuple[int, int]:
    """The contribution of eta1 on both sides of a sum-free candidate with
    r = 0; no MD exists because the left value stays below the right one."""
    from .terms import contribution, size

    left = par((Act(w.eta2, w.s), w.t1))
    right = par((w.s1, Act(w.eta1, w.t)))
    return contribution(left, w.eta1), contribution(right, w.eta1)


# --------------------------------------------------------------------------
# diagram shape: two-step firings in both orders, tracked by occurrence


@dataclass(frozen=True)
class DiagramMdWitness:
    calculus: str
    q: Term
    eta1: Prefix
    eta2: Prefix
    end_first: Term  # after eta1 then eta2 (second fired under the first)
    end_second: Term  # after eta2 then eta1 (second fired under the first)


def _label_term(t: Term, counter: list[int]):
    """Mirror of the canonical term with a unique id on every prefix node:
    ('act', id, prefix, cont) / ('par'|'sum', children) / ('nil',)."""
    match t:
        case Act(prefix=p, cont=c):
            node_id = counter[0]
            counter[0] += 1
            return ("act", node_id, p, _label_term(c, counter))
        case Par(parts=ps):
            return ("par", tuple(_label_term(p, counter) for p in ps))
        case Sum(parts=ps):
            return ("sum", tuple(_label_term(p, counter) for p in ps))
        case _:
            return ("nil",)


def _prefix_ids(lt) -> frozenset[int]:
    match lt:
        case ("act", node_id, _, cont):
            return _prefix_ids(cont) | {node_id}
        case ("par", children) | ("sum", children):
            return frozenset().union(*(_prefix_ids(c) for c in children)) if children else frozenset()
        case _:
            return frozenset()


def _under_map(lt, acc: dict) -> None:
    """For each prefix occurrence, the ids nested inside its continuation."""
    match lt:
        case ("act", node_id, _, cont):
            acc[node_id] = _prefix_ids(cont)
            _under_map(cont, acc)
        case ("par", children) | ("sum", children):
            for c in children:
                _under_map(c, acc)


def _ltransitions(lt) -> list[tuple[Prefix, int, object]]:
    """Visible firings of a labelled term, keeping all other ids intact."""
    match lt:
        case ("act", node_id, p, cont):
            return [(p, node_id, cont)]
        case ("sum", children):
            out = []
            for c in children:
                out.extend(_ltransitions(c))
            return out
        case ("par", children):
            out = []
            for i, c in enumerate(children):
                rest = children[:i] + children[i + 1 :]
                for p, node_id, res in _ltransitions(c):
                    out.append((p, node_id, ("par", rest + (res,))))
            return out
        case _:
            return []


def _strip(lt) -> Term:
    match lt:
        case ("act", _, p, cont):
            return Act(p, _strip(cont))
        case ("par", children):
            return par(_strip(c) for c in children)
        case ("sum", children):
            from .terms import csum

            return csum(_strip(c) for c in children)
        case _:
            return NIL


def diagram_md_at(
    calculus: str,
    q: Term,
    *,
    equivalence: Equivalence | None = None,
) -> DiagramMdWitness | None:
    """Whether q itself admits a diagram-shape MD: two-step firings
    q -eta1-> . -eta2-> and q -eta2-> . -eta1->, each second prefix occurring
    syntactically under the first fired prefix, with equivalent end states."""
    equiv = equivalence or _default_equiv(calculus)
    q = canonicalize(q)
    lt = _label_term(q, [0])
    under: dict[int, frozenset[int]] = {}
    _under_map(lt, under)
    seqs: list[tuple[Prefix, Prefix, Term]] = []
    for p1, id1, lt1 in _ltransitions(lt):
        for p2, id2, lt2 in _ltransitions(lt1):
            if id2 in under[id1]:
                seqs.append((p1, p2, canonicalize(_strip(lt2))))
    for eta1, eta2, end1 in seqs:
        if eta1 == eta2:
            continue
        for b1, b2, end2 in seqs:
            if b1 == eta2 and b2 == eta1 and equiv(end1, end2):
                return DiagramMdWitness(calculus, q, eta1, eta2, end1, end2)
    return None


def search_md_diagram(
    calculus: str,
    size_bound: int,
    names: tuple[str, ...],
    *,
    equivalence: Equivalence | None = None,
) -> DiagramMdWitness | None:
    """First term (smallest first) within the bound admitting a diagram MD."""
    alphabet = prefix_alphabet(names)
    pool = (
        ccs_terms_upto(size_bound, alphabet)
        if calculus == "ccs"
        else ccs_plus_terms_upto(size_bound, alphabet)
    )
    for q in pool:
        w = diagram_md_at(calculus, q, equivalence=equivalence)
        if w is not None:
            return w
    return None


def check_substitution_closure(
    p: Term,
    q: Term,
    sigma: Mapping[str, str],
    equivalence: str = "strong",
) -> bool:
    """Whether sigma preserves the chosen equivalence of p and q (vacuously
    true when p and q are not equivalent to begin with)."""
    from .distributed import dsim

    if equivalence == "strong":
        equiv: Equivalence = strong_bisim_plus
    elif equivalence == "distributed":
        equiv = dsim
    else:
        raise ValueError(f"unknown equivalence: {equivalence}")
    p, q = canonicalize(p), canonicalize(q)
    if not equiv(p, q):
        return True
    return equiv(substitute(p, sigma), substitute(q, sigma))
