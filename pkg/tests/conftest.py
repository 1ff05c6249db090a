"""Shared helpers: independent brute-force oracles used to cross-check
the package's solvers and classifiers.  Everything here reimplements
the checked behavior from scratch on purpose."""

from __future__ import annotations

import itertools

import pytest

from poalign.orders import DagOrder, LinearOrder, MarkerSet


def closure_pairs(markers: list[str], relation: set[tuple[str, str]]) -> frozenset | None:
    """Transitive closure of a relation; None when it is cyclic or
    asymmetric."""
    closed = set(relation)
    changed = True
    while changed:
        changed = False
        for a, b in list(closed):
            for c, d in list(closed):
                if b == c and (a, d) not in closed:
                    closed.add((a, d))
                    changed = True
    for a, b in closed:
        if a == b or (b, a) in closed:
            return None
    return frozenset(closed)


def posets_with_sorted_extension(n: int) -> list[frozenset]:
    """All distinct posets over markers a, b, ... that admit the sorted
    marker order as a linear extension (covers every isomorphism class)."""
    markers = [chr(ord("a") + i) for i in range(n)]
    pairs = [(markers[i], markers[j]) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        closed = closure_pairs(markers, rel)
        if closed is not None and closed not in seen:
            seen.add(closed)
            out.append(closed)
    return out


def all_labeled_posets(n: int) -> list[frozenset]:
    """Every strict partial order on n labeled markers (small n only)."""
    markers = [chr(ord("a") + i) for i in range(n)]
    pairs = [(a, b) for a in markers for b in markers if a != b]
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        closed = closure_pairs(markers, rel)
        if closed is not None and closed not in seen:
            seen.add(closed)
            out.append(closed)
    return out


def dag_of(markers: list[str], closed: frozenset) -> DagOrder:
    return DagOrder(closed, markers=MarkerSet(markers))


# ---------------------------------------------------------- family oracles

def brute_is_linear(markers: list[str], closed: frozenset) -> bool:
    return all((a, b) in closed or (b, a) in closed
               for a in markers for b in markers if a != b)


def _ordered_partitions(items: list[str]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for split in _ordered_partitions(rest):
        for i, bucket in enumerate(split):
            yield split[:i] + [bucket | {first}] + split[i + 1:]
        for i in range(len(split) + 1):
            yield split[:i] + [{first}] + split[i:]


def brute_is_weak(markers: list[str], closed: frozenset) -> bool:
    """Exhaustive search for an ordered bucket partition realizing the
    relation."""
    for split in _ordered_partitions(markers):
        level = {m: i for i, bucket in enumerate(split) for m in bucket}
        realized = {(a, b) for a in markers for b in markers
                    if a != b and level[a] < level[b]}
        if realized == set(closed):
            return True
    return False


def _event_sequences(markers: list[str]):
    """All endpoint orders with each left endpoint before its right
    endpoint and all 2n endpoints distinct."""
    events = [("L", m) for m in markers] + [("R", m) for m in markers]
    for seq in itertools.permutations(events):
        pos = {e: i for i, e in enumerate(seq)}
        if all(pos[("L", m)] < pos[("R", m)] for m in markers):
            yield pos


def brute_is_interval(markers: list[str], closed: frozenset) -> bool:
    """Exhaustive search over endpoint orderings for an interval
    realization."""
    for pos in _event_sequences(markers):
        realized = {(a, b) for a in markers for b in markers
                    if a != b and pos[("R", a)] < pos[("L", b)]}
        if realized == set(closed):
            return True
    return False


def brute_is_semiorder(markers: list[str], closed: frozenset) -> bool:
    """Like the interval search, restricted to proper realizations
    (no interval strictly inside another), which characterizes
    same-length realizability."""
    for pos in _event_sequences(markers):
        realized = {(a, b) for a in markers for b in markers
                    if a != b and pos[("R", a)] < pos[("L", b)]}
        if realized != set(closed):
            continue
        proper = all(not (pos[("L", a)] < pos[("L", b)] and pos[("R", b)] < pos[("R", a)])
                     for a in markers for b in markers if a != b)
        if proper:
            return True
    return False


# ------------------------------------------------------ alignment oracles

def brute_extensions(order) -> list[tuple[str, ...]]:
    """All linear extensions by direct backtracking on ``precedes``."""
    markers = sorted(order.markers)
    preds = {m: {x for x in markers if x != m and order.precedes(x, m)}
             for m in markers}
    out: list[tuple[str, ...]] = []
    chosen: list[str] = []
    used: set[str] = set()

    def rec():
        if len(chosen) == len(markers):
            out.append(tuple(chosen))
            return
        for m in markers:
            if m not in used and preds[m] <= used:
                used.add(m)
                chosen.append(m)
                rec()
                chosen.pop()
                used.discard(m)

    rec()
    return out


def count_adj_raw(p1: tuple[str, ...], p2: tuple[str, ...]) -> int:
    nxt = {a: b for a, b in zip(p2, p2[1:])}
    return sum(1 for a, b in zip(p1, p1[1:]) if nxt.get(a) == b)


def brute_best_alignment(gamma, pi) -> int:
    """Pure double enumeration over both orders' extensions."""
    best = -1
    for ge in brute_extensions(gamma):
        for pe in brute_extensions(pi):
            best = max(best, count_adj_raw(ge, pe))
    return best


@pytest.fixture
def fig1_graph():
    from poalign.mis3 import Graph
    return Graph(6, ((1, 2), (2, 3), (3, 4), (1, 4), (1, 5),
                     (2, 6), (3, 6), (4, 5), (5, 6)))


@pytest.fixture
def fig2_sat():
    from poalign.sat32 import normalize_sat32
    return normalize_sat32([((1, True), (2, True)),
                            ((1, True), (2, False)),
                            ((1, False), (2, False))])
