"""Erasing pi-calculus terms to sum-free CCS relative to a pair of
observed channels.

Relative to distinct names (a, b): inputs on a keep their continuation
under the CCS prefix a, outputs on b keep theirs under the coaction 'b,
every other prefix erases to 0, and restrictions are dropped.  The erased
term therefore uses only the prefixes a and 'b, so it can never step by
tau.  Erasure turns ground-bisimilar pi terms into bisimilar CCS terms,
which transfers CCS non-bisimilarity results back into the pi-calculus.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lts import transitions
from .rewrite import decide_bisim
from .terms import NIL, Act, Prefix, Term, par
from .pi import (
    BoundOutAct,
    FreeName,
    FreeOutAct,
    InputAct,
    PiInput,
    PiNil,
    PiNu,
    PiOutput,
    PiPar,
    PiTerm,
    free_names,
    fresh_marker,
    ground_bisim,
    late_transitions,
    open_binder,
    pi_canonicalize,
)


@dataclass(frozen=True)
class ErasureContext:
    input_name: str
    output_name: str

    def __post_init__(self) -> None:
        if self.input_name == self.output_name:
            raise ValueError("erasure needs two distinct observed names")


def erase(p: PiTerm, ctx: ErasureContext) -> Term:
    """The CCS erasure of p relative to ctx; canonical output.  A restricted
    channel is positionally bound, so it never matches the observed free
    names, and payloads are ignored entirely."""
    match p:
        case PiNil():
            return NIL
        case PiInput(chan=c, body=b):
            if c == FreeName(ctx.input_name):
                return Act(Prefix(ctx.input_name), erase(b, ctx))
            return NIL
        case PiOutput(chan=c, body=b):
            if c == FreeName(ctx.output_name):
                return Act(Prefix(ctx.output_name, co=True), erase(b, ctx))
            return NIL
        case PiPar(parts=ps):
            return par(erase(q, ctx) for q in ps)
        case PiNu(body=b):
            return erase(b, ctx)
    raise TypeError(f"not a pi term: {p!r}")


def check_erasure_transitions(p: PiTerm, ctx: ErasureContext) -> bool:
    """One-step correspondence between p and erase(p):

    - every input of p on ctx.input_name has a matching a-transition of the
      erasure, and every output on ctx.output_name (free or bound) has a
      matching 'b-transition, with erased targets;
    - conversely, every transition of the erasure is the image of such a
      pi transition;
    - the erasure never steps by tau (it only has prefixes a and 'b).
    """
    p = pi_canonicalize(p)
    ec = erase(p, ctx)
    ccs_ts = transitions(ec)
    a_pref = Prefix(ctx.input_name)
    b_pref = Prefix(ctx.output_name, co=True)
    z = fresh_marker(free_names(p))

    fwd_a: set[Term] = set()
    fwd_b: set[Term] = set()
    for action, res in late_transitions(p):
        match action:
            case InputAct(chan=c) if c == ctx.input_name:
                fwd_a.add(erase(open_binder(res, z), ctx))
            case FreeOutAct(chan=c) if c == ctx.output_name:
                fwd_b.add(erase(res, ctx))
            case BoundOutAct(chan=c) if c == ctx.output_name:
                fwd_b.add(erase(open_binder(res, z), ctx))

    for tgt in fwd_a:
        if (a_pref, tgt) not in ccs_ts:
            return False
    for tgt in fwd_b:
        if (b_pref, tgt) not in ccs_ts:
            return False

    for action, tgt in ccs_ts:
        if action == a_pref:
            if tgt not in fwd_a:
                return False
        elif action == b_pref:
            if tgt not in fwd_b:
                return False
        else:
            return False  # tau or a foreign prefix: must be impossible
    return True


def transfer_check(p: PiTerm, q: PiTerm, ctx: ErasureContext) -> bool:
    """Given ground-bisimilar p and q, decide bisimilarity of the erasures
    (which must hold; the suite asserts the result).  Raises if the premise
    fails."""
    p, q = pi_canonicalize(p), pi_canonicalize(q)
    if not ground_bisim(p, q):
        raise ValueError("transfer premise violated")
    return decide_bisim(erase(p, ctx), erase(q, ctx))
