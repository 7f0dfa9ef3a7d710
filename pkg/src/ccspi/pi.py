"""A finite, sum-free pi-calculus fragment: canonical terms, the late
transition semantics, and ground / late / early strong bisimilarity.

Binders are represented positionally (de Bruijn indices), so alpha-equivalent
terms are literally equal and substitution is capture-avoiding by
construction.  Free names stay as names.  Terms are kept canonical: parallel
composition is a flattened sorted multiset without Nil components, and a
restriction whose name never occurs is dropped.

Transition residuals for input and bound-output actions are returned as
bodies with the transmitted name still abstracted (dangling index 0); the
bisimulation games decide how to instantiate them.  Instantiation names for
the games are drawn from a reserved namespace ("#0", "#1", ...) disjoint
from source-level names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Mapping


@dataclass(frozen=True, order=True)
class FreeName:
    name: str


@dataclass(frozen=True, order=True)
class BoundName:
    index: int


NameRef = FreeName | BoundName


class PiTerm:
    __slots__ = ()


@dataclass(frozen=True, eq=False, repr=False)
class PiNil(PiTerm):
    def __eq__(self, other: object) -> bool:
        return isinstance(other, PiNil)

    def __hash__(self) -> int:
        return hash((10,))

    def __repr__(self) -> str:
        return "PiNil()"


PI_NIL = PiNil()


@dataclass(frozen=True, eq=False, repr=False)
class PiInput(PiTerm):
    chan: NameRef
    body: PiTerm  # binds index 0
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((11, self.chan, self.body)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, PiInput)
            and self._h == other._h
            and self.chan == other.chan
            and self.body == other.body
        )

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"PiInput({self.chan!r}, {self.body!r})"


@dataclass(frozen=True, eq=False, repr=False)
class PiOutput(PiTerm):
    chan: NameRef
    payload: NameRef
    body: PiTerm
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((12, self.chan, self.payload, self.body)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, PiOutput)
            and self._h == other._h
            and self.chan == other.chan
            and self.payload == other.payload
            and self.body == other.body
        )

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"PiOutput({self.chan!r}, {self.payload!r}, {self.body!r})"


@dataclass(frozen=True, eq=False, repr=False)
class PiPar(PiTerm):
    parts: tuple[PiTerm, ...]
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((13,) + tuple(hash(p) for p in self.parts)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, PiPar) and self._h == other._h and self.parts == other.parts

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"PiPar({list(self.parts)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class PiNu(PiTerm):
    body: PiTerm  # binds index 0
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((14, self.body)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, PiNu) and self._h == other._h and self.body == other.body

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"PiNu({self.body!r})"


# --------------------------------------------------------------------------
# ordering, traversal, canonical construction


def _ref_key(r: NameRef) -> tuple:
    if isinstance(r, FreeName):
        return (0, r.name, 0)
    return (1, "", r.index)


@lru_cache(maxsize=None)
def pi_sort_key(t: PiTerm) -> tuple:
    match t:
        case PiNil():
            return (0,)
        case PiInput(chan=c, body=b):
            return (1, _ref_key(c), pi_sort_key(b))
        case PiOutput(chan=c, payload=p, body=b):
            return (2, _ref_key(c), _ref_key(p), pi_sort_key(b))
        case PiPar(parts=ps):
            return (3, tuple(pi_sort_key(p) for p in ps))
        case PiNu(body=b):
            return (4, pi_sort_key(b))
    raise TypeError(f"not a pi term: {t!r}")


def _map_refs(t: PiTerm, fn: Callable[[NameRef, int], NameRef], depth: int = 0) -> PiTerm:
    """Rebuild t applying fn to every name reference; fn receives the number
    of binders between the reference and the top of t.  Canonical output."""
    match t:
        case PiNil():
            return t
        case PiInput(chan=c, body=b):
            return PiInput(fn(c, depth), _map_refs(b, fn, depth + 1))
        case PiOutput(chan=c, payload=p, body=b):
            return PiOutput(fn(c, depth), fn(p, depth), _map_refs(b, fn, depth))
        case PiPar(parts=ps):
            return pi_par(_map_refs(p, fn, depth) for p in ps)
        case PiNu(body=b):
            return pi_nu(_map_refs(b, fn, depth + 1))
    raise TypeError(f"not a pi term: {t!r}")


def dangling(t: PiTerm, depth: int = 0) -> frozenset[int]:
    """Indices referenced in t but not bound inside it, counted from t's top."""
    out: set[int] = set()

    def refs(u: PiTerm, d: int) -> None:
        match u:
            case PiNil():
                return
            case PiInput(chan=c, body=b):
                _note(c, d)
                refs(b, d + 1)
            case PiOutput(chan=c, payload=p, body=b):
                _note(c, d)
                _note(p, d)
                refs(b, d)
            case PiPar(parts=ps):
                for p in ps:
                    refs(p, d)
            case PiNu(body=b):
                refs(b, d + 1)

    def _note(r: NameRef, d: int) -> None:
        if isinstance(r, BoundName) and r.index >= d:
            out.add(r.index - d)

    refs(t, depth)
    return frozenset(out)


@lru_cache(maxsize=None)
def free_names(t: PiTerm) -> frozenset[str]:
    def ref(r: NameRef) -> frozenset[str]:
        return frozenset((r.name,)) if isinstance(r, FreeName) else frozenset()

    match t:
        case PiNil():
            return frozenset()
        case PiInput(chan=c, body=b):
            return ref(c) | free_names(b)
        case PiOutput(chan=c, payload=p, body=b):
            return ref(c) | ref(p) | free_names(b)
        case PiPar(parts=ps):
            return frozenset().union(*(free_names(p) for p in ps)) if ps else frozenset()
        case PiNu(body=b):
            return free_names(b)
    raise TypeError(f"not a pi term: {t!r}")


def pi_size(t: PiTerm) -> int:
    """Number of prefix occurrences."""
    match t:
        case PiNil():
            return 0
        case PiInput(body=b) | PiOutput(body=b) | PiNu(body=b):
            return (0 if isinstance(t, PiNu) else 1) + pi_size(b)
        case PiPar(parts=ps):
            return sum(pi_size(p) for p in ps)
    raise TypeError(f"not a pi term: {t!r}")


def pi_par(parts: Iterable[PiTerm]) -> PiTerm:
    items: list[PiTerm] = []
    for p in parts:
        if isinstance(p, PiNil):
            continue
        if isinstance(p, PiPar):
            items.extend(p.parts)
        else:
            items.append(p)
    if not items:
        return PI_NIL
    if len(items) == 1:
        return items[0]
    items.sort(key=pi_sort_key)
    return PiPar(tuple(items))


def _shift_dangling(t: PiTerm, amount: int) -> PiTerm:
    if amount == 0:
        return t

    def fn(r: NameRef, d: int) -> NameRef:
        if isinstance(r, BoundName) and r.index >= d:
            return BoundName(r.index + amount)
        return r

    return _map_refs(t, fn)


def pi_nu(body: PiTerm) -> PiTerm:
    """Restriction constructor; a binder that is never referenced is dropped
    (nu p)P = P when p is not free in P, and in particular (nu p)0 = 0."""
    if 0 in dangling(body):
        return PiNu(body)

    def fn(r: NameRef, d: int) -> NameRef:
        if isinstance(r, BoundName) and r.index > d:
            return BoundName(r.index - 1)
        return r

    return _map_refs(body, fn)


def pi_canonicalize(t: PiTerm) -> PiTerm:
    match t:
        case PiNil():
            return t
        case PiInput(chan=c, body=b):
            return PiInput(c, pi_canonicalize(b))
        case PiOutput(chan=c, payload=p, body=b):
            return PiOutput(c, p, pi_canonicalize(b))
        case PiPar(parts=ps):
            return pi_par(pi_canonicalize(p) for p in ps)
        case PiNu(body=b):
            return pi_nu(pi_canonicalize(b))
    raise TypeError(f"not a pi term: {t!r}")


def open_binder(t: PiTerm, name: str) -> PiTerm:
    """Instantiate dangling index 0 with a free name (shifting the rest)."""

    def fn(r: NameRef, d: int) -> NameRef:
        if isinstance(r, BoundName):
            if r.index == d:
                return FreeName(name)
            if r.index > d:
                return BoundName(r.index - 1)
        return r

    return _map_refs(t, fn)


def close_binder(t: PiTerm, name: str) -> PiTerm:
    """Abstract a free name into dangling index 0 (shifting the rest up)."""

    def fn(r: NameRef, d: int) -> NameRef:
        if isinstance(r, FreeName) and r.name == name:
            return BoundName(d)
        if isinstance(r, BoundName) and r.index >= d:
            return BoundName(r.index + 1)
        return r

    return _map_refs(t, fn)


def pi_substitute(t: PiTerm, sigma: Mapping[str, str]) -> PiTerm:
    """Apply a free-name substitution; capture is impossible since bound
    names are positional.  Result canonical (components may reorder)."""

    def fn(r: NameRef, d: int) -> NameRef:
        if isinstance(r, FreeName) and r.name in sigma:
            return FreeName(sigma[r.name])
        return r

    return _map_refs(t, fn)


def fresh_marker(avoid: frozenset[str] | set[str]) -> str:
    k = 0
    while f"#{k}" in avoid:
        k += 1
    return f"#{k}"


# --------------------------------------------------------------------------
# late transition semantics


@dataclass(frozen=True, order=True)
class InputAct:
    chan: str

    def __str__(self) -> str:
        return f"{self.chan}(.)"


@dataclass(frozen=True, order=True)
class FreeOutAct:
    chan: str
    payload: str

    def __str__(self) -> str:
        return f"'{self.chan}<{self.payload}>"


@dataclass(frozen=True, order=True)
class BoundOutAct:
    chan: str

    def __str__(self) -> str:
        return f"'{self.chan}(.)"


@dataclass(frozen=True, order=True)
class PiTauAct:
    def __str__(self) -> str:
        return "tau"


PI_TAU = PiTauAct()

PiAction = InputAct | FreeOutAct | BoundOutAct | PiTauAct


@lru_cache(maxsize=None)
def late_transitions(t: PiTerm) -> frozenset[tuple[PiAction, PiTerm]]:
    """Late-instantiation transitions of a closed canonical term.

    Residuals of InputAct and BoundOutAct are open at index 0 (the received
    or extruded name); FreeOutAct and tau residuals are closed."""
    match t:
        case PiNil():
            return frozenset()
        case PiInput(chan=FreeName(name=a), body=b):
            return frozenset(((InputAct(a), b),))
        case PiOutput(chan=FreeName(name=a), payload=FreeName(name=c), body=b):
            return frozenset(((FreeOutAct(a, c), b),))
        case PiPar(parts=ps):
            out: set[tuple[PiAction, PiTerm]] = set()
            part_ts = [late_transitions(p) for p in ps]
            for i, ts in enumerate(part_ts):
                rest = ps[:i] + ps[i + 1 :]
                for a, res in ts:
                    out.add((a, pi_par((res,) + rest)))
            for i in range(len(ps)):
                for j in range(len(ps)):
                    if i == j:
                        continue
                    rest = tuple(p for k, p in enumerate(ps) if k not in (i, j))
                    for ai, ri in part_ts[i]:
                        if not isinstance(ai, InputAct):
                            continue
                        for aj, rj in part_ts[j]:
                            if isinstance(aj, FreeOutAct) and aj.chan == ai.chan:
                                out.add((PI_TAU, pi_par((open_binder(ri, aj.payload), rj) + rest)))
                            elif isinstance(aj, BoundOutAct) and aj.chan == ai.chan:
                                out.add((PI_TAU, pi_nu(pi_par((ri, rj) + rest))))
            return frozenset(out)
        case PiNu(body=b):
            m = fresh_marker(free_names(b))
            out = set()
            for a, res in late_transitions(open_binder(b, m)):
                match a:
                    case InputAct(chan=c) | BoundOutAct(chan=c):
                        if c != m:
                            out.add((a, pi_nu(close_binder(res, m))))
                    case FreeOutAct(chan=c, payload=pay):
                        if c == m:
                            continue
                        if pay == m:
                            out.add((BoundOutAct(c), close_binder(res, m)))
                        else:
                            out.add((a, pi_nu(close_binder(res, m))))
                    case PiTauAct():
                        out.add((a, pi_nu(close_binder(res, m))))
            return frozenset(out)
    raise TypeError(f"transitions need a closed canonical term: {t!r}")


# --------------------------------------------------------------------------
# bisimilarity games

_BISIM_MEMO: dict[tuple[PiTerm, PiTerm, str], bool] = {}


def clear_bisim_memo() -> None:
    """Drop the shared game cache; long enumeration runs call this between
    batches to bound memory."""
    _BISIM_MEMO.clear()


def _labels(ts: frozenset[tuple[PiAction, PiTerm]]) -> frozenset[PiAction]:
    return frozenset(a for a, _ in ts)


def _grouped(ts: frozenset[tuple[PiAction, PiTerm]]) -> dict[PiAction, list[PiTerm]]:
    g: dict[PiAction, list[PiTerm]] = {}
    for a, res in ts:
        g.setdefault(a, []).append(res)
    return g


def _pi_bisim(p: PiTerm, q: PiTerm, mode: str) -> bool:
    if p == q:
        return True
    if pi_sort_key(q) < pi_sort_key(p):
        p, q = q, p
    key = (p, q, mode)
    cached = _BISIM_MEMO.get(key)
    if cached is not None:
        return cached

    tp, tq = late_transitions(p), late_transitions(q)
    if _labels(tp) != _labels(tq):
        _BISIM_MEMO[key] = False
        return False

    fresh = fresh_marker(free_names(p) | free_names(q))
    inst_names = sorted(free_names(p) | free_names(q)) + [fresh]
    gp, gq = _grouped(tp), _grouped(tq)

    def match_all(challenger: dict, responder: dict) -> bool:
        for a, residuals in challenger.items():
            cands = responder[a]
            for res in residuals:
                if isinstance(a, (FreeOutAct, PiTauAct)):
                    if not any(_pi_bisim(res, r2, mode) for r2 in cands):
                        return False
                elif isinstance(a, BoundOutAct):
                    opened = open_binder(res, fresh)
                    if not any(_pi_bisim(opened, open_binder(r2, fresh), mode) for r2 in cands):
                        return False
                else:  # InputAct
                    if mode == "ground":
                        opened = open_binder(res, fresh)
                        if not any(
                            _pi_bisim(opened, open_binder(r2, fresh), mode) for r2 in cands
                        ):
                            return False
                    elif mode == "late":
                        if not any(
                            all(
                                _pi_bisim(open_binder(res, n), open_binder(r2, n), mode)
                                for n in inst_names
                            )
                            for r2 in cands
                        ):
                            return False
                    else:  # early
                        for n in inst_names:
                            opened = open_binder(res, n)
                            if not any(
                                _pi_bisim(opened, open_binder(r2, n), mode) for r2 in cands
                            ):
                                return False
        return True

    result = match_all(gp, gq) and match_all(gq, gp)
    _BISIM_MEMO[key] = result
    return result


def ground_bisim(p: PiTerm, q: PiTerm) -> bool:
    """Strong ground bisimilarity: inputs and bound outputs are instantiated
    with one canonical fresh name (the least reserved name free in neither
    state)."""
    return _pi_bisim(pi_canonicalize(p), pi_canonicalize(q), "ground")


def late_bisim(p: PiTerm, q: PiTerm) -> bool:
    """Strong late bisimilarity: one responder continuation must work for
    every instantiation name in fn(p) | fn(q) plus a fresh one."""
    return _pi_bisim(pi_canonicalize(p), pi_canonicalize(q), "late")


def early_bisim(p: PiTerm, q: PiTerm) -> bool:
    """Strong early bisimilarity: the responder may pick a continuation per
    instantiation name."""
    return _pi_bisim(pi_canonicalize(p), pi_canonicalize(q), "early")


# --------------------------------------------------------------------------
# structural congruence

_MAX_BINDER_BLOCK = 8


def _nu_block(k: int, core: PiTerm) -> PiTerm:
    """Wrap k binders around core in a canonical way: drop unused binders,
    then order the block to minimise the body's sort key."""
    used = sorted(i for i in dangling(core) if i < k)
    m = len(used)
    if m != k:
        pos = {old: new for new, old in enumerate(used)}
        drop = k - m

        def fn(r: NameRef, d: int) -> NameRef:
            if isinstance(r, BoundName) and r.index >= d:
                idx = r.index - d
                if idx < k:
                    return BoundName(pos[idx] + d)
                return BoundName(r.index - drop)
            return r

        core = _map_refs(core, fn)
    if m == 0:
        return core
    if m > 1:
        if m > _MAX_BINDER_BLOCK:
            raise ValueError("restriction block too large to canonicalise")
        best = None
        for perm in permutations(range(m)):

            def fn(r: NameRef, d: int, perm=perm) -> NameRef:
                if isinstance(r, BoundName) and r.index >= d and r.index - d < m:
                    return BoundName(perm[r.index - d] + d)
                return r

            cand = _map_refs(core, fn)
            if best is None or pi_sort_key(cand) < pi_sort_key(best):
                best = cand
        core = best
    for _ in range(m):
        core = PiNu(core)
    return core


def _extrusion_normal(t: PiTerm) -> PiTerm:
    """Hoist restrictions as far out as scope extrusion allows (never across
    a prefix), then canonicalise each binder block."""
    match t:
        case PiNil():
            return t
        case PiInput(chan=c, body=b):
            return PiInput(c, _extrusion_normal(b))
        case PiOutput(chan=c, payload=p, body=b):
            return PiOutput(c, p, _extrusion_normal(b))
        case PiNu(body=b):
            inner = _extrusion_normal(b)
            k = 1
            while isinstance(inner, PiNu):
                inner = inner.body
                k += 1
            return _nu_block(k, inner)
        case PiPar(parts=ps):
            work = [_extrusion_normal(p) for p in ps]
            out: list[PiTerm] = []
            k = 0
            while work:
                item = work.pop(0)
                if isinstance(item, PiNu):
                    out = [_shift_dangling(x, 1) for x in out]
                    work = [_shift_dangling(x, 1) for x in work]
                    k += 1
                    work.insert(0, item.body)
                elif isinstance(item, PiPar):
                    work = list(item.parts) + work
                elif isinstance(item, PiNil):
                    continue
                else:
                    out.append(item)
            return _nu_block(k, pi_par(out))
    raise TypeError(f"not a pi term: {t!r}")


def pi_struct_congr(p: PiTerm, q: PiTerm) -> bool:
    """Structural congruence: alpha (built into the representation), the
    parallel monoid laws, restriction reordering, vacuous-restriction
    elimination and scope extrusion."""
    return _extrusion_normal(pi_canonicalize(p)) == _extrusion_normal(pi_canonicalize(q))


# --------------------------------------------------------------------------
# behaviour of transitions under substitutions that identify names


@dataclass(frozen=True)
class ClassifiedTransition:
    action: PiAction
    residual: PiTerm
    case: str | None  # "1", "2a", "2b", "2c", or None when unexplained


def classify_transitions(p: PiTerm, sigma: Mapping[str, str]) -> list[ClassifiedTransition]:
    """Explain each transition of p.sigma in terms of p's own transitions.

    Visible transitions arise from a p-transition whose label maps to the
    observed one (case 1).  A tau either comes from a tau of p (2a) or from
    an output/input pair offered concurrently by p on channels that sigma
    identifies: free output (2b) or bound output (2c), with the reconstructed
    residual ground-bisimilar to the observed one.
    """
    p = pi_canonicalize(p)
    ps = pi_substitute(p, sigma)
    tp = late_transitions(p)
    out: list[ClassifiedTransition] = []

    def subst_action(a: PiAction) -> PiAction:
        match a:
            case InputAct(chan=c):
                return InputAct(sigma.get(c, c))
            case FreeOutAct(chan=c, payload=v):
                return FreeOutAct(sigma.get(c, c), sigma.get(v, v))
            case BoundOutAct(chan=c):
                return BoundOutAct(sigma.get(c, c))
        return a

    for act_s, res_s in sorted(late_transitions(ps), key=lambda e: (str(e[0]), pi_sort_key(e[1]))):
        tag: str | None = None
        if not isinstance(act_s, PiTauAct):
            for a, res in tp:
                if subst_action(a) == act_s and pi_substitute(res, sigma) == res_s:
                    tag = "1"
                    break
        else:
            for a, res in tp:
                if isinstance(a, PiTauAct) and pi_substitute(res, sigma) == res_s:
                    tag = "2a"
                    break
            if tag is None:
                tag = _match_created_tau(p, tp, sigma, res_s)
        out.append(ClassifiedTransition(act_s, res_s, tag))
    return out


def _match_created_tau(
    p: PiTerm,
    tp: frozenset[tuple[PiAction, PiTerm]],
    sigma: Mapping[str, str],
    res_s: PiTerm,
) -> str | None:
    def identified(a: str, b: str) -> bool:
        return sigma.get(a, a) == sigma.get(b, b)

    for a, res in tp:
        if isinstance(a, FreeOutAct):
            for a2, res2 in late_transitions(res):
                if isinstance(a2, InputAct) and identified(a2.chan, a.chan):
                    cand = pi_substitute(open_binder(res2, a.payload), sigma)
                    if ground_bisim(cand, res_s):
                        return "2b"
    for a, res in tp:
        if isinstance(a, BoundOutAct):
            m = fresh_marker(free_names(res) | set(sigma) | set(sigma.values()))
            mid = open_binder(res, m)
            for a2, res2 in late_transitions(mid):
                if isinstance(a2, InputAct) and identified(a2.chan, a.chan):
                    cand = pi_substitute(pi_nu(close_binder(open_binder(res2, m), m)), sigma)
                    if ground_bisim(cand, res_s):
                        return "2c"
    return None
