"""Process terms for microCCS and its extension with guarded sums.

Terms are immutable trees kept in a canonical form that quotients out
structural congruence: parallel composition is a flattened, sorted
multiset with Nil components removed, and sums are flattened, sorted
*sets* (idempotence) of prefixed terms.  Two canonical terms denote
structurally congruent processes iff they are equal.

Open terms may contain process variables (written uppercase); these are
opaque leaves that can stand in parallel contexts and under prefixes but
never head a transition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

Name = str  # channel names: lowercase identifiers, compared by equality


@dataclass(frozen=True, order=True)
class Prefix:
    """An action prefix: a name with a polarity ('a denotes the coaction)."""

    name: Name
    co: bool = False

    def complement(self) -> Prefix:
        return Prefix(self.name, not self.co)

    def __str__(self) -> str:
        return ("'" if self.co else "") + self.name


class Term:
    """Base class for CCS terms; concrete nodes carry a cached hash."""

    __slots__ = ()


@dataclass(frozen=True, eq=False, repr=False)
class Nil(Term):
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Nil)

    def __hash__(self) -> int:
        return hash((0,))

    def __repr__(self) -> str:
        return "Nil()"


NIL = Nil()


@dataclass(frozen=True, eq=False, repr=False)
class Act(Term):
    prefix: Prefix
    cont: Term
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((1, self.prefix, self.cont)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Act)
            and self._h == other._h
            and self.prefix == other.prefix
            and self.cont == other.cont
        )

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"Act({self.prefix}, {self.cont!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Par(Term):
    parts: tuple[Term, ...]
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((2,) + tuple(hash(p) for p in self.parts)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Par) and self._h == other._h and self.parts == other.parts

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"Par({list(self.parts)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Sum(Term):
    parts: tuple[Term, ...]
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((3,) + tuple(hash(p) for p in self.parts)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Sum) and self._h == other._h and self.parts == other.parts

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"Sum({list(self.parts)!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    ident: str

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Var) and self.ident == other.ident

    def __hash__(self) -> int:
        return hash((4, self.ident))

    def __repr__(self) -> str:
        return f"Var({self.ident})"


# --------------------------------------------------------------------------
# canonical ordering


@lru_cache(maxsize=None)
def sort_key(t: Term) -> tuple:
    """Total order on canonical terms: constructor tag, then prefix data,
    then recursive component keys.  Tags keep mixed comparisons well typed."""
    match t:
        case Nil():
            return (0,)
        case Act(prefix=p, cont=c):
            return (1, p.name, p.co, sort_key(c))
        case Par(parts=ps):
            return (2, tuple(sort_key(p) for p in ps))
        case Sum(parts=ps):
            return (3, tuple(sort_key(p) for p in ps))
        case Var(ident=v):
            return (4, v)
    raise TypeError(f"not a term: {t!r}")


# --------------------------------------------------------------------------
# smart constructors: arguments must already be canonical


def act(prefix: Prefix, cont: Term) -> Term:
    return Act(prefix, cont)


def par(parts: Iterable[Term]) -> Term:
    items: list[Term] = []
    for p in parts:
        if isinstance(p, Nil):
            continue
        if isinstance(p, Par):
            items.extend(p.parts)
        else:
            items.append(p)
    if not items:
        return NIL
    if len(items) == 1:
        return items[0]
    items.sort(key=sort_key)
    return Par(tuple(items))


def csum(parts: Iterable[Term]) -> Term:
    items: set[Term] = set()
    for p in parts:
        if isinstance(p, Nil):
            continue
        if isinstance(p, Sum):
            items.update(p.parts)
            continue
        if not isinstance(p, Act):
            raise ValueError("summands must be prefixed")
        items.add(p)
    if not items:
        return NIL
    ordered = sorted(items, key=sort_key)
    if len(ordered) == 1:
        return ordered[0]
    return Sum(tuple(ordered))


def canonicalize(t: Term) -> Term:
    """Rebuild an arbitrary term tree in canonical form (idempotent)."""
    match t:
        case Nil() | Var():
            return t
        case Act(prefix=p, cont=c):
            return Act(p, canonicalize(c))
        case Par(parts=ps):
            return par(canonicalize(p) for p in ps)
        case Sum(parts=ps):
            return csum(canonicalize(p) for p in ps)
    raise TypeError(f"not a term: {t!r}")


def parallel_components(t: Term) -> tuple[Term, ...]:
    """The canonical parallel decomposition of t: empty for Nil, the
    component tuple for a Par, and a singleton otherwise."""
    match t:
        case Nil():
            return ()
        case Par(parts=ps):
            return ps
        case _:
            return (t,)


# --------------------------------------------------------------------------
# measures and name tooling


def is_ground(t: Term) -> bool:
    match t:
        case Var():
            return False
        case Act(cont=c):
            return is_ground(c)
        case Par(parts=ps) | Sum(parts=ps):
            return all(is_ground(p) for p in ps)
        case _:
            return True


def variables(t: Term) -> frozenset[str]:
    match t:
        case Var(ident=v):
            return frozenset((v,))
        case Act(cont=c):
            return variables(c)
        case Par(parts=ps) | Sum(parts=ps):
            return frozenset().union(*(variables(p) for p in ps)) if ps else frozenset()
        case _:
            return frozenset()


def prefixes(t: Term) -> frozenset[Prefix]:
    """All prefixes occurring anywhere in t (with polarity)."""
    match t:
        case Act(prefix=p, cont=c):
            return prefixes(c) | {p}
        case Par(parts=ps) | Sum(parts=ps):
            return frozenset().union(*(prefixes(p) for p in ps)) if ps else frozenset()
        case _:
            return frozenset()


def names(t: Term) -> frozenset[Name]:
    return frozenset(p.name for p in prefixes(t))


def size(t: Term) -> int:
    """Number of prefix occurrences.  Undefined on open terms: a variable
    could be instantiated with processes of any size."""
    match t:
        case Nil():
            return 0
        case Act(cont=c):
            return 1 + size(c)
        case Par(parts=ps) | Sum(parts=ps):
            return sum(size(p) for p in ps)
        case Var():
            raise ValueError("size undefined on open terms")
    raise TypeError(f"not a term: {t!r}")


def weight(t: Term, depth: int = 1) -> int:
    """Sum of nesting depths of all prefix occurrences (head prefix at
    depth 1).  Each distribution-law step strictly decreases it, so it
    bounds rewrite sequence length."""
    match t:
        case Act(cont=c):
            return depth + weight(c, depth + 1)
        case Par(parts=ps) | Sum(parts=ps):
            return sum(weight(p, depth) for p in ps)
        case _:
            return 0


def contribution(t: Term, eta: Prefix) -> int:
    """Size contributed to t by parallel components headed by eta:
    a component eta.P counts size(eta.P), other prefixed components count 0,
    parallel compositions add up."""
    match t:
        case Nil():
            return 0
        case Act(prefix=p):
            return size(t) if p == eta else 0
        case Par(parts=ps):
            return sum(contribution(p, eta) for p in ps)
        case Var():
            raise ValueError("contribution undefined on open terms")
    raise TypeError(f"contribution undefined here: {t!r}")


def substitute(t: Term, sigma: Mapping[Name, Name]) -> Term:
    """Rename prefix names via sigma (polarity preserved); canonical result.
    Names outside sigma's domain are left unchanged."""

    def go(u: Term) -> Term:
        match u:
            case Nil() | Var():
                return u
            case Act(prefix=p, cont=c):
                return Act(Prefix(sigma.get(p.name, p.name), p.co), go(c))
            case Par(parts=ps):
                return par(go(p) for p in ps)
            case Sum(parts=ps):
                return csum(go(p) for p in ps)
        raise TypeError(f"not a term: {u!r}")

    return go(t)


def instantiate(t: Term, mapping: Mapping[str, Term], *, require_ground: bool = False) -> Term:
    """Replace process variables by terms; canonical result.  With
    require_ground, leftover variables raise instead of being kept."""

    def go(u: Term) -> Term:
        match u:
            case Var(ident=v):
                if v in mapping:
                    return canonicalize(mapping[v])
                if require_ground:
                    raise ValueError(f"variable {v} not covered by the instantiation")
                return u
            case Nil():
                return u
            case Act(prefix=p, cont=c):
                return Act(p, go(c))
            case Par(parts=ps):
                return par(go(p) for p in ps)
            case Sum(parts=ps):
                return csum(go(p) for p in ps)
        raise TypeError(f"not a term: {u!r}")

    return go(t)


def has_sum(t: Term) -> bool:
    match t:
        case Sum():
            return True
        case Act(cont=c):
            return has_sum(c)
        case Par(parts=ps):
            return any(has_sum(p) for p in ps)
        case _:
            return False


def fresh_names(avoid: Iterable[Name], count: int) -> list[Name]:
    """Deterministic supply of names a, b, ..., z, aa, ab, ... skipping
    the avoided set."""
    taken = set(avoid)
    out: list[Name] = []
    letters = "abcdefghijklmnopqrstuvwxyz"
    width = 1
    while len(out) < count:
        for tup in product(letters, repeat=width):
            cand = "".join(tup)
            if cand not in taken:
                taken.add(cand)
                out.append(cand)
                if len(out) == count:
                    break
        width += 1
    return out
