"""Named property suites: each one checks a law of the calculi over an
exhaustive enumeration or a seeded random sample and reports the evidence.

The registry at the bottom maps stable suite names to functions so the CLI
and the acceptance tests share a single evidence path.  Default bounds are
the desk-scale ones the acceptance run uses.
"""

from __future__ import annotations

import inspect
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .distributed import d_reachable, dsim, dsim_blocks, perfect_matching, strong_bisim_plus
from .erasure import ErasureContext, check_erasure_transitions, erase, transfer_check
from .generate import (
    all_substitutions,
    ccs_plus_terms_upto,
    ccs_terms_upto,
    pi_terms_upto,
    prefix_alphabet,
    random_ccs_open,
    random_pi,
)
from .lts import bisimilar_oracle, refine_partition, transitions
from .mirrored import diagram_md_at, search_md_diagram, search_md_parallel_shape
from .pi import (
    FreeOutAct,
    PiTauAct,
    PiTerm,
    classify_transitions,
    clear_bisim_memo,
    early_bisim,
    free_names,
    ground_bisim,
    late_bisim,
    late_transitions,
    pi_sort_key,
    pi_substitute,
)
from .rewrite import decide_bisim, normalize, normalize_open, prime_decompose, rewrite_candidates
from .syntax import parse_ccs_plus, print_ccs, print_pi
from .terms import (
    NIL,
    Act,
    Par,
    Prefix,
    Term,
    contribution,
    fresh_names,
    instantiate,
    names,
    par,
    parallel_components,
    size,
    substitute,
    variables,
    weight,
)


@dataclass
class SuiteReport:
    name: str
    checked: int
    elapsed: float
    failures: list[str] = field(default_factory=list)
    notes: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        line = f"{verdict} {self.name}: checked={self.checked} elapsed={self.elapsed:.1f}s"
        if self.notes:
            line += f" ({self.notes})"
        return line


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CCSPI_WORKERS", "1")))
    except ValueError:
        return 1


def _map_work(fn: Callable, items: list) -> list:
    """Order-preserving map, sharded over threads when CCSPI_WORKERS > 1."""
    n = _worker_count()
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------
# 1. normal-form decision versus the partition-refinement oracle


def nf_oracle_agreement(
    size_bound: int = 4,
    name_pool: tuple[str, ...] = ("a", "b"),
    sample: int = 500,
    seed: int = 0,
) -> SuiteReport:
    """Over every canonical sum-free term within the size bound, the normal
    form procedure and the oracle agree on every pair.

    The universe is closed under transitions, so one global refinement gives
    the oracle verdict for all pairs at once: agreement holds iff terms share
    a block exactly when they share a normal form.  A seeded sample of pairs
    additionally runs both deciders directly.
    """
    t0 = time.time()
    universe = ccs_terms_upto(size_bound, prefix_alphabet(name_pool))
    blocks = refine_partition(universe)
    failures: list[str] = []
    nf_to_block: dict[Term, int] = {}
    block_to_nf: dict[int, Term] = {}
    first_of_nf: dict[Term, Term] = {}
    first_of_block: dict[int, Term] = {}
    for t in universe:
        nf, b = normalize(t), blocks[t]
        if nf_to_block.setdefault(nf, b) != b:
            failures.append(
                f"normal forms equal, oracle differs: {print_ccs(first_of_nf[nf])} vs {print_ccs(t)}"
            )
        if block_to_nf.setdefault(b, nf) != nf:
            failures.append(
                f"oracle equal, normal forms differ: {print_ccs(first_of_block[b])} vs {print_ccs(t)}"
            )
        first_of_nf.setdefault(nf, t)
        first_of_block.setdefault(b, t)
    rng = random.Random(seed)
    for _ in range(sample):
        p, q = rng.choice(universe), rng.choice(universe)
        want = blocks[p] == blocks[q]
        if decide_bisim(p, q) != want or bisimilar_oracle(p, q) != want:
            failures.append(f"direct decider mismatch: {print_ccs(p)} vs {print_ccs(q)}")
    n = len(universe)
    return SuiteReport(
        "nf-oracle-agreement",
        checked=n * (n - 1) // 2 + sample,
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes=f"{n} terms, {len(block_to_nf)} classes = {len(nf_to_block)} normal forms",
    )


# --------------------------------------------------------------------------
# 2. the prefix-absorption ladder a.(a.0^n) ~ a.0^(n+1)


def replication_ladder(n_max: int = 10) -> SuiteReport:
    t0 = time.time()
    failures: list[str] = []
    a0 = Act(Prefix("a"), NIL)
    for n in range(1, n_max + 1):
        ladder = Act(Prefix("a"), par([a0] * n))
        target = par([a0] * (n + 1))
        if not decide_bisim(ladder, target):
            failures.append(f"n={n}: ladder not bisimilar to the {n + 1}-fold product")
        comps = prime_decompose(ladder)
        if len(comps) != n + 1 or any(c != a0 for c in comps):
            failures.append(f"n={n}: decomposition {[print_ccs(c) for c in comps]}")
    return SuiteReport(
        "replication-ladder",
        checked=n_max,
        elapsed=time.time() - t0,
        failures=failures,
    )


# --------------------------------------------------------------------------
# 3. confluence and termination of the distribution-law rewrite


def confluence_termination(
    size_bound: int = 4, name_pool: tuple[str, ...] = ("a", "b")
) -> SuiteReport:
    """Explore the full reduction graph of every term in the universe: all
    maximal rewrite sequences end in one normal form, and every single step
    strictly decreases the nesting weight (so no sequence outlives it)."""
    t0 = time.time()
    universe = ccs_terms_upto(size_bound, prefix_alphabet(name_pool))
    failures: list[str] = []
    edges = 0
    for t in universe:
        seen = {t}
        todo = [t]
        irreducible: set[Term] = set()
        while todo:
            u = todo.pop()
            cands = rewrite_candidates(u)
            if not cands:
                irreducible.add(u)
            for v in cands:
                edges += 1
                if weight(v) >= weight(u):
                    failures.append(f"weight not decreasing: {print_ccs(u)} -> {print_ccs(v)}")
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        if len(irreducible) != 1:
            failures.append(f"{print_ccs(t)}: {len(irreducible)} distinct normal forms")
        elif next(iter(irreducible)) != normalize(t):
            failures.append(f"{print_ccs(t)}: strategy disagrees with reduction graph")
    return SuiteReport(
        "confluence-termination",
        checked=len(universe),
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes=f"{edges} rewrite steps explored",
    )


# --------------------------------------------------------------------------
# 4. cancellation of parallel contexts


def cancellation(size_bound: int = 5, name_pool: tuple[str, ...] = ("a", "b")) -> SuiteReport:
    """p|r ~ q|r implies p ~ q, exhaustively over all triples with both
    composites within the size bound.

    One refinement over the full universe gives every oracle verdict.  For
    each r, mapping the block of x to the block of x|r over all x must be
    well defined (parallel composition is a congruence) and injective (no
    cancellation violation); a violating triple would be recorded with the
    stored block representatives.
    """
    t0 = time.time()
    universe = ccs_terms_upto(size_bound, prefix_alphabet(name_pool))
    blocks = refine_partition(universe)
    by_size: dict[int, list[Term]] = {}
    for t in universe:
        by_size.setdefault(size(t), []).append(t)
    failures: list[str] = []
    checked = 0
    for r in universe:
        budget = size_bound - size(r)
        img_of_block: dict[int, int] = {}
        rep_of_block: dict[int, Term] = {}
        for n in range(budget + 1):
            for x in by_size[n]:
                checked += 1
                img = blocks[par((x, r))]
                b = blocks[x]
                rep_of_block.setdefault(b, x)
                if img_of_block.setdefault(b, img) != img:
                    failures.append(
                        f"congruence anomaly at r={print_ccs(r)}: "
                        f"{print_ccs(rep_of_block[b])} vs {print_ccs(x)}"
                    )
        rev: dict[int, int] = {}
        for b, img in img_of_block.items():
            if img in rev:
                failures.append(
                    f"cancellation violated at r={print_ccs(r)}: "
                    f"{print_ccs(rep_of_block[rev[img]])} vs {print_ccs(rep_of_block[b])}"
                )
            rev[img] = b
    return SuiteReport(
        "cancellation",
        checked=checked,
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes=f"{len(universe)} terms as r",
    )


# --------------------------------------------------------------------------
# 5. bisimilar terms contribute equally at every prefix


def contribution_invariance(
    size_bound: int = 4, name_pool: tuple[str, ...] = ("a", "b")
) -> SuiteReport:
    t0 = time.time()
    alphabet = prefix_alphabet(name_pool)
    universe = ccs_terms_upto(size_bound, alphabet)
    blocks = refine_partition(universe)
    groups: dict[int, list[Term]] = {}
    for t in universe:
        groups.setdefault(blocks[t], []).append(t)
    failures: list[str] = []
    pairs = 0
    for members in groups.values():
        pairs += len(members) * (len(members) - 1) // 2
        profiles = {tuple(contribution(t, eta) for eta in alphabet) for t in members}
        if len(profiles) > 1:
            failures.append(
                "contribution differs inside a bisimilarity class: "
                + ", ".join(print_ccs(t) for t in members[:4])
            )
    return SuiteReport(
        "contribution-invariance",
        checked=pairs,
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes=f"{len(groups)} classes",
    )


# --------------------------------------------------------------------------
# 6. no mirrored dependency in the sum-free calculus


def no_md_sumfree(
    component_size: int = 3,
    diagram_size: int = 4,
    name_pool: tuple[str, ...] = ("a", "b"),
) -> SuiteReport:
    t0 = time.time()
    failures: list[str] = []
    w = search_md_parallel_shape(component_size, name_pool)
    if w is not None:
        failures.append(f"parallel-shape witness: {w}")
    d = search_md_diagram("ccs", diagram_size, name_pool)
    if d is not None:
        failures.append(f"diagram witness: {print_ccs(d.q)}")
    n_par = len(ccs_terms_upto(component_size, prefix_alphabet(name_pool)))
    n_diag = len(ccs_terms_upto(diagram_size, prefix_alphabet(name_pool)))
    return SuiteReport(
        "no-md-sumfree",
        checked=n_par + n_diag,
        elapsed=time.time() - t0,
        failures=failures,
        notes=f"{n_par} component terms (all move pairs), {n_diag} diagram terms",
    )


# --------------------------------------------------------------------------
# 7. sums break substitution closure and introduce mirrored dependencies


def md_with_sums(diagram_size: int = 4, name_pool: tuple[str, ...] = ("a", "b")) -> SuiteReport:
    t0 = time.time()
    failures: list[str] = []
    left = parse_ccs_plus("a.0 | 'b.0")
    right = parse_ccs_plus("a.'b.0 + 'b.a.0")
    if not strong_bisim_plus(left, right):
        failures.append("expansion pair not strongly bisimilar")
    collapse = {"a": "p", "b": "p"}
    if strong_bisim_plus(substitute(left, collapse), substitute(right, collapse)):
        failures.append("expansion pair still bisimilar after identifying the names")
    w = search_md_diagram("ccs+", diagram_size, name_pool)
    if w is None:
        failures.append("no diagram witness found with sums")
    else:
        if size(w.q) > 4:
            failures.append(f"witness larger than the known one: {print_ccs(w.q)}")
        if w.eta1 == w.eta2:
            failures.append("witness prefixes not distinct")
        if not strong_bisim_plus(w.end_first, w.end_second):
            failures.append("witness end states not bisimilar")
        if not _two_step(w.q, w.eta1, w.eta2, w.end_first) or not _two_step(
            w.q, w.eta2, w.eta1, w.end_second
        ):
            failures.append("witness end states not two-step reachable")
    if diagram_md_at("ccs+", right) is None:
        failures.append("the known sum witness does not validate")
    return SuiteReport(
        "md-with-sums",
        checked=4,
        elapsed=time.time() - t0,
        failures=failures,
        notes="" if w is None else f"witness q = {print_ccs(w.q)}",
    )


def _two_step(q: Term, a1: Prefix, a2: Prefix, end: Term) -> bool:
    for b1, mid in transitions(q):
        if b1 == a1:
            for b2, e in transitions(mid):
                if b2 == a2 and e == end:
                    return True
    return False


# --------------------------------------------------------------------------
# 8. distributed bisimilarity decides canonical-form equality


def dsim_canonical(size_bound: int = 3, name_pool: tuple[str, ...] = ("a", "b")) -> SuiteReport:
    """dsim holds between universe terms exactly when they are the same
    canonical form; the related pairs (all reflexive, as the first part
    establishes) stay related under every substitution over the names."""
    t0 = time.time()
    universe = ccs_plus_terms_upto(size_bound, prefix_alphabet(name_pool))
    blocks = dsim_blocks(d_reachable(universe))
    groups: dict[int, list[Term]] = {}
    for t in universe:
        groups.setdefault(blocks[t], []).append(t)
    failures: list[str] = []
    for members in groups.values():
        if len(members) > 1:
            failures.append(
                "distinct canonical forms dsim-related: "
                + " vs ".join(print_ccs(t) for t in members[:2])
            )
    sigmas = all_substitutions(name_pool, name_pool)
    checked = len(universe) * (len(universe) - 1) // 2
    for t in universe:
        for sg in sigmas:
            u = substitute(t, sg)
            checked += 1
            if not dsim(u, u):
                failures.append(f"substitution broke a related pair: {print_ccs(t)} under {sg}")
    return SuiteReport(
        "dsim-canonical",
        checked=checked,
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes=f"{len(universe)} terms, {len(groups)} dsim classes",
    )


# --------------------------------------------------------------------------
# 9. dsim-related parallel products decompose componentwise


def dsim_separation(size_bound: int = 3, name_pool: tuple[str, ...] = ("a", "b")) -> SuiteReport:
    """Every dsim-related pair of parallel products admits a perfect
    dsim-matching of their components (with suite 8's result the related
    pairs are the reflexive ones; the matching still has to cope with
    repeated components)."""
    t0 = time.time()
    universe = ccs_plus_terms_upto(size_bound, prefix_alphabet(name_pool))
    blocks = dsim_blocks(d_reachable(universe))
    failures: list[str] = []
    checked = 0
    for t in universe:
        if not isinstance(t, Par):
            continue
        comps = parallel_components(t)
        checked += 1
        m = perfect_matching(comps, comps, lambda x, y: blocks[x] == blocks[y])
        if m is None:
            failures.append(f"no component matching for {print_ccs(t)}")
    return SuiteReport(
        "dsim-separation",
        checked=checked,
        elapsed=time.time() - t0,
        failures=failures[:10],
    )


# --------------------------------------------------------------------------
# 10. erasure transition correspondence on random terms


def erasure_random(
    count: int = 1000,
    max_prefixes: int = 6,
    max_nus: int = 2,
    frees: tuple[str, ...] = ("a", "b", "c"),
    observed: tuple[str, str] = ("a", "b"),
    seed: int = 20250825,
) -> SuiteReport:
    t0 = time.time()
    ctx = ErasureContext(*observed)
    rng = random.Random(seed)
    terms = [random_pi(rng, max_prefixes, max_nus, frees) for _ in range(count)]
    results = _map_work(lambda p: check_erasure_transitions(p, ctx), terms)
    failures = [
        f"correspondence failed: {print_pi(p)}" for p, ok in zip(terms, results) if not ok
    ]
    return SuiteReport(
        "erasure-random",
        checked=count,
        elapsed=time.time() - t0,
        failures=failures[:10],
    )


# --------------------------------------------------------------------------
# 11. transfer, substitution closure, and mode coincidence over the pi universe


@lru_cache(maxsize=None)
def _coarse_key(t: PiTerm) -> frozenset:
    """A key equal on bisimilar terms: free-output and tau residuals are
    closed states whose matched partners must be bisimilar, so their keys
    agree by induction; input and bound-output actions contribute the label
    only (their residuals depend on the instantiation discipline)."""
    parts = set()
    for a, res in late_transitions(t):
        if isinstance(a, (FreeOutAct, PiTauAct)):
            parts.add((a, _coarse_key(res)))
        else:
            parts.add((a, None))
    return frozenset(parts)


def pi_congruence(
    max_prefixes: int = 3,
    max_nus: int = 1,
    frees: tuple[str, ...] = ("a", "b"),
    pair_sample: int = 2000,
    cross_sample: int = 300,
    seed: int = 7,
) -> SuiteReport:
    """Over the enumerated pi universe: ground-bisimilar pairs transfer to
    bisimilar erasures, stay ground-bisimilar under every substitution over
    the free names, and the ground, late, and early verdicts coincide on all
    pairs.

    Terms are grouped by a bisimilarity-invariant key, so pairs in different
    groups are inequivalent in all three modes at once (their initial labels
    cannot be matched); inside a group each mode's partition is built by
    probing class representatives with the real game, and coincidence on all
    pairs follows from the three partitions being identical.  Seeded samples
    rerun the literal per-pair checks on top.
    """
    t0 = time.time()
    universe = pi_terms_upto(max_prefixes, max_nus, frees)
    ctx = ErasureContext(frees[0], frees[1])
    sigmas = all_substitutions(frees, frees)
    buckets: dict[frozenset, list[PiTerm]] = {}
    for t in universe:
        buckets.setdefault(_coarse_key(t), []).append(t)

    failures: list[str] = []
    checked = 0
    bis_pairs = 0
    sample_pairs: list[tuple[PiTerm, PiTerm]] = []
    n_classes = 0
    for key in sorted(buckets, key=lambda k: len(buckets[k])):
        members = buckets[key]
        assignments: dict[str, list[int]] = {}
        for mode, rel in (("ground", ground_bisim), ("late", late_bisim), ("early", early_bisim)):
            reps: list[PiTerm] = []
            assign: list[int] = []
            for t in members:
                for i, r in enumerate(reps):
                    checked += 1
                    if rel(t, r):
                        assign.append(i)
                        break
                else:
                    assign.append(len(reps))
                    reps.append(t)
            assignments[mode] = assign
        if not (assignments["ground"] == assignments["late"] == assignments["early"]):
            for t, g, l, e in zip(
                members, assignments["ground"], assignments["late"], assignments["early"]
            ):
                if not (g == l == e):
                    failures.append(f"mode partitions disagree near {print_pi(t)}")
                    break
        classes: dict[int, list[PiTerm]] = {}
        for t, i in zip(members, assignments["ground"]):
            classes.setdefault(i, []).append(t)
        n_classes += len(classes)
        for cls in classes.values():
            bis_pairs += len(cls) * (len(cls) - 1) // 2
            if len(cls) > 1 and len(sample_pairs) < pair_sample:
                sample_pairs.extend(zip(cls, cls[1:]))
            erased = {normalize(erase(t, ctx)) for t in cls}
            checked += len(cls)
            if len(erased) > 1:
                failures.append(
                    "erasures not bisimilar inside a ground class: "
                    + ", ".join(print_pi(t) for t in cls[:2])
                )
            for sg in sigmas:
                images = sorted({pi_substitute(t, sg) for t in cls}, key=pi_sort_key)
                checked += len(images)
                for img in images[1:]:
                    if not ground_bisim(images[0], img):
                        failures.append(
                            f"substitution {sg} broke a ground class near {print_pi(cls[0])}"
                        )
                        break
        clear_bisim_memo()

    rng = random.Random(seed)
    for _ in range(cross_sample):
        p, q = rng.choice(universe), rng.choice(universe)
        g, l, e = ground_bisim(p, q), late_bisim(p, q), early_bisim(p, q)
        checked += 1
        if not (g == l == e):
            failures.append(f"modes disagree: {print_pi(p)} vs {print_pi(q)}")
    for p, q in sample_pairs[:pair_sample]:
        checked += 1
        if not transfer_check(p, q, ctx):
            failures.append(f"transfer failed: {print_pi(p)} vs {print_pi(q)}")
    clear_bisim_memo()
    return SuiteReport(
        "pi-congruence",
        checked=checked,
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes=(
            f"{len(universe)} terms, {len(buckets)} groups, {n_classes} ground classes, "
            f"{bis_pairs} bisimilar pairs covered"
        ),
    )


# --------------------------------------------------------------------------
# 12. normalization of open terms commutes with fresh instantiation


def open_normalization(
    count: int = 500,
    max_size: int = 5,
    max_vars: int = 3,
    seed: int = 11,
) -> SuiteReport:
    t0 = time.time()
    rng = random.Random(seed)
    var_pool = ("X", "Y", "Z", "W")[:max_vars] if max_vars <= 4 else tuple(
        f"X{i}" for i in range(max_vars)
    )
    failures: list[str] = []
    for _ in range(count):
        t = random_ccs_open(rng, max_size, var_pool)
        vs = sorted(variables(t))
        mapping = {
            v: Act(Prefix(n), NIL) for v, n in zip(vs, fresh_names(names(t), len(vs)))
        }
        lhs = instantiate(normalize_open(t), mapping)
        rhs = normalize(instantiate(t, mapping))
        if lhs != rhs:
            failures.append(f"instantiation does not commute on {t!r}")
    return SuiteReport(
        "open-normalization",
        checked=count,
        elapsed=time.time() - t0,
        failures=failures[:10],
    )


# --------------------------------------------------------------------------
# 13. transitions of substituted pi terms are fully classified


def pi_subst_cases(
    count: int = 1000,
    max_prefixes: int = 4,
    max_nus: int = 1,
    frees: tuple[str, ...] = ("a", "b", "c"),
    seed: int = 13,
) -> SuiteReport:
    """Random (p, sigma) with sigma identifying two free names of p: every
    transition of p.sigma is assigned one explanation case (visible image,
    tau image, or a communication created by the identification)."""
    t0 = time.time()
    rng = random.Random(seed)
    tasks = []
    for _ in range(count):
        while True:
            p = random_pi(rng, max_prefixes, max_nus, frees)
            fn = sorted(free_names(p))
            if len(fn) >= 2:
                break
        kept, dropped = rng.sample(fn, 2)
        tasks.append((p, {dropped: kept}))
    results = _map_work(lambda job: classify_transitions(job[0], job[1]), tasks)
    failures: list[str] = []
    case_counts: dict[str, int] = {}
    n_transitions = 0
    for (p, sg), classified in zip(tasks, results):
        for c in classified:
            n_transitions += 1
            key = c.case or "none"
            case_counts[key] = case_counts.get(key, 0) + 1
            if c.case is None:
                failures.append(f"unexplained transition of {print_pi(p)} under {sg}")
    clear_bisim_memo()
    return SuiteReport(
        "pi-subst-cases",
        checked=n_transitions,
        elapsed=time.time() - t0,
        failures=failures[:10],
        notes="cases " + ", ".join(f"{k}={v}" for k, v in sorted(case_counts.items())),
    )


# --------------------------------------------------------------------------
# registry


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "nf-oracle-agreement": nf_oracle_agreement,
    "replication-ladder": replication_ladder,
    "confluence-termination": confluence_termination,
    "cancellation": cancellation,
    "contribution-invariance": contribution_invariance,
    "no-md-sumfree": no_md_sumfree,
    "md-with-sums": md_with_sums,
    "dsim-canonical": dsim_canonical,
    "dsim-separation": dsim_separation,
    "erasure-random": erasure_random,
    "pi-congruence": pi_congruence,
    "open-normalization": open_normalization,
    "pi-subst-cases": pi_subst_cases,
}


def run_suite(name: str, **overrides) -> SuiteReport:
    fn = SUITES.get(name)
    if fn is None:
        known = ", ".join(sorted(SUITES))
        raise KeyError(f"unknown suite {name!r}; known suites: {known}")
    params = inspect.signature(fn).parameters
    kwargs = {k: v for k, v in overrides.items() if k in params and v is not None}
    return fn(**kwargs)
