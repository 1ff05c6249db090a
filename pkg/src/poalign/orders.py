"""Order representations over a shared marker set.

The four concrete representations form a hierarchy by expressive power:
every linear order is a weak order, every weak order is a semiorder,
every semiorder is an interval order, and every interval order is a
partial order.  ``classify`` returns the finest family an order value
belongs to, using forbidden-pattern checks (2+2, 3+1, transitivity of
incomparability).

All order values are immutable after construction; concurrent reads are
safe.  ``enumerate_linear_extensions`` returns a fresh generator per
call, so callers never share cursor state.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapExceededError,
    FamilyMismatchError,
    MarkerSetMismatchError,
    ValidationError,
)

_MARKER_ID = re.compile(r"[A-Za-z0-9_+^-]+\Z")

DEFAULT_CAP = 10**6


class MarkerSet:
    """Ordered collection of distinct marker ids.

    The order of the markers fixes serialization only; it carries no
    order-theoretic meaning.
    """

    __slots__ = ("_markers", "_ids")

    def __init__(self, markers: Iterable[str]):
        self._markers = tuple(markers)
        for m in self._markers:
            if not isinstance(m, str) or not _MARKER_ID.match(m):
                raise ValidationError(f"invalid marker id: {m!r}")
        self._ids = frozenset(self._markers)
        if len(self._ids) != len(self._markers):
            raise ValidationError("duplicate marker id in marker set")

    @property
    def markers(self) -> tuple[str, ...]:
        return self._markers

    @property
    def ids(self) -> frozenset[str]:
        return self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self._markers)

    def __len__(self) -> int:
        return len(self._markers)

    def __contains__(self, m: object) -> bool:
        return m in self._ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MarkerSet) and self._markers == other._markers

    def __hash__(self) -> int:
        return hash(self._markers)

    def __repr__(self) -> str:
        return f"MarkerSet({list(self._markers)!r})"


class OrderFamily(str, Enum):
    """The finest family an order belongs to."""

    LINEAR = "linear"
    WEAK = "weak"
    SEMIORDER = "semiorder"
    INTERVAL = "interval"
    PARTIAL = "partial"


class Order:
    """Common interface of all order representations."""

    markers: MarkerSet

    def precedes(self, a: str, b: str) -> bool:
        """True iff ``a`` strictly precedes ``b`` in this order."""
        raise NotImplementedError

    def _require(self, *ms: str) -> None:
        for m in ms:
            if m not in self.markers:
                raise ValidationError(f"unknown marker: {m!r}")


def _make_markers(markers, derived: Iterable[str]) -> MarkerSet:
    if markers is None:
        return MarkerSet(derived)
    if not isinstance(markers, MarkerSet):
        markers = MarkerSet(markers)
    return markers


class LinearOrder(Order):
    """Total order represented by a permutation of the marker set."""

    __slots__ = ("markers", "perm", "_pos", "_mask_cache")

    def __init__(self, perm: Iterable[str], markers: MarkerSet | None = None):
        self.perm = tuple(perm)
        self.markers = _make_markers(markers, self.perm)
        if len(self.perm) != len(self.markers) or set(self.perm) != self.markers.ids:
            raise ValidationError("perm is not a permutation of the marker set")
        self._pos = {m: i for i, m in enumerate(self.perm)}

    def precedes(self, a: str, b: str) -> bool:
        self._require(a, b)
        return self._pos[a] < self._pos[b]

    def position(self, m: str) -> int:
        self._require(m)
        return self._pos[m]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearOrder) and self.perm == other.perm

    def __hash__(self) -> int:
        return hash(self.perm)

    def __repr__(self) -> str:
        return f"LinearOrder({list(self.perm)!r})"


class WeakOrder(Order):
    """Ordered buckets of mutually incomparable markers."""

    __slots__ = ("markers", "buckets", "_bucket_index", "_mask_cache")

    def __init__(self, buckets: Iterable[Iterable[str]], markers: MarkerSet | None = None):
        self.buckets = tuple(frozenset(b) for b in buckets)
        flat: list[str] = []
        for b in self.buckets:
            if not b:
                raise ValidationError("weak order buckets must be nonempty")
            flat.extend(sorted(b))
        self.markers = _make_markers(markers, flat)
        if len(flat) != len(self.markers) or set(flat) != self.markers.ids:
            raise ValidationError("buckets do not partition the marker set")
        self._bucket_index = {}
        for i, b in enumerate(self.buckets):
            for m in b:
                self._bucket_index[m] = i

    def precedes(self, a: str, b: str) -> bool:
        self._require(a, b)
        return self._bucket_index[a] < self._bucket_index[b]

    def bucket_of(self, m: str) -> int:
        self._require(m)
        return self._bucket_index[m]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeakOrder) and self.buckets == other.buckets

    def __hash__(self) -> int:
        return hash(self.buckets)

    def __repr__(self) -> str:
        return f"WeakOrder({[sorted(b) for b in self.buckets]!r})"


class IntervalOrder(Order):
    """Order induced by open integer intervals: a precedes b iff
    right(a) <= left(b)."""

    __slots__ = ("markers", "intervals", "_mask_cache")

    def __init__(self, intervals: Mapping[str, tuple[int, int]],
                 markers: MarkerSet | None = None):
        self.intervals = {m: (int(l), int(r)) for m, (l, r) in intervals.items()}
        self.markers = _make_markers(markers, self.intervals.keys())
        if set(self.intervals) != self.markers.ids:
            raise ValidationError("interval map does not cover the marker set")
        for m, (l, r) in self.intervals.items():
            if l >= r:
                raise ValidationError(f"interval for {m!r} must have left < right")

    def precedes(self, a: str, b: str) -> bool:
        self._require(a, b)
        return self.intervals[a][1] <= self.intervals[b][0]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalOrder) and self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"IntervalOrder({self.intervals!r})"


class DagOrder(Order):
    """Partial order given by any acyclic generating relation.

    The transitive closure is computed once at construction and cached;
    ``precedes`` answers on the closure.
    """

    __slots__ = ("markers", "relation", "_succ", "_mask_cache")

    def __init__(self, relation: Iterable[tuple[str, str]],
                 markers: MarkerSet | None = None):
        self.relation = frozenset((a, b) for a, b in relation)
        seen: list[str] = []
        have = set()
        for a, b in sorted(self.relation):
            for m in (a, b):
                if m not in have:
                    have.add(m)
                    seen.append(m)
        self.markers = _make_markers(markers, seen)
        for a, b in self.relation:
            if a not in self.markers or b not in self.markers:
                raise ValidationError(f"relation mentions unknown marker: {(a, b)!r}")
            if a == b:
                raise ValidationError(f"relation is not irreflexive: {a!r}")
        direct: dict[str, list[str]] = {m: [] for m in self.markers}
        for a, b in self.relation:
            direct[a].append(b)
        succ: dict[str, frozenset[str]] = {}
        for m in self.markers:
            reach: set[str] = set()
            stack = list(direct[m])
            while stack:
                x = stack.pop()
                if x in reach:
                    continue
                reach.add(x)
                stack.extend(direct[x])
            if m in reach:
                raise ValidationError(f"relation contains a cycle through {m!r}")
            succ[m] = frozenset(reach)
        self._succ = succ

    def precedes(self, a: str, b: str) -> bool:
        self._require(a, b)
        return b in self._succ[a]

    def successors(self, a: str) -> frozenset[str]:
        self._require(a)
        return self._succ[a]

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, DagOrder)
                and self.markers.ids == other.markers.ids
                and self._succ == other._succ)

    def __repr__(self) -> str:
        return f"DagOrder({sorted(self.relation)!r})"


def precedes(order: Order, a: str, b: str) -> bool:
    """True iff ``a`` strictly precedes ``b`` in ``order``."""
    return order.precedes(a, b)


def same_marker_ids(x: Order | MarkerSet, y: Order | MarkerSet) -> bool:
    ix = x.ids if isinstance(x, MarkerSet) else x.markers.ids
    iy = y.ids if isinstance(y, MarkerSet) else y.markers.ids
    return ix == iy


def _require_same_markers(x, y) -> None:
    if not same_marker_ids(x, y):
        raise MarkerSetMismatchError("values are over different marker sets")


def is_linear_extension(perm: LinearOrder, order: Order) -> bool:
    """True iff every related pair of ``order`` keeps its relative order
    in ``perm``."""
    _require_same_markers(perm, order)
    if isinstance(order, LinearOrder):
        return perm.perm == order.perm
    if isinstance(order, WeakOrder):
        last = -1
        for m in perm.perm:
            i = order.bucket_of(m)
            if i < last:
                return False
            last = i
        return True
    if isinstance(order, IntervalOrder):
        max_left = None
        for m in perm.perm:
            l, r = order.intervals[m]
            if max_left is not None and r <= max_left:
                return False
            if max_left is None or l > max_left:
                max_left = l
        return True
    if isinstance(order, DagOrder):
        pos = {m: i for i, m in enumerate(perm.perm)}
        for a in order.markers:
            pa = pos[a]
            for b in order.successors(a):
                if pa >= pos[b]:
                    return False
        return True
    pos = {m: i for i, m in enumerate(perm.perm)}
    ms = order.markers.markers
    for a in ms:
        for b in ms:
            if a != b and order.precedes(a, b) and pos[a] >= pos[b]:
                return False
    return True


def _pred_masks(order: Order) -> tuple[list[str], list[int]]:
    """Markers sorted by id plus, per marker, the bitmask of its strict
    predecessors (on the transitive closure).  Cached on the order,
    which is immutable."""
    cached = getattr(order, "_mask_cache", None)
    if cached is not None:
        return cached
    ids = sorted(order.markers)
    index = {m: i for i, m in enumerate(ids)}
    masks = [0] * len(ids)
    for a in ids:
        for b in ids:
            if a != b and order.precedes(a, b):
                masks[index[b]] |= 1 << index[a]
    order._mask_cache = (ids, masks)
    return ids, masks


def enumerate_linear_extensions(order: Order, cap: int = DEFAULT_CAP) -> Iterator[LinearOrder]:
    """Yield every linear extension of ``order`` exactly once.

    Branching is in ascending marker id, so the extensions come out in
    lexicographic order of their id sequences.  Raises
    ``CapExceededError`` when a (cap+1)-th extension would be produced.
    """
    if cap < 1:
        raise ValidationError("cap must be >= 1")

    def run() -> Iterator[LinearOrder]:
        ids, masks = _pred_masks(order)
        n = len(ids)
        ms = order.markers
        full = (1 << n) - 1
        produced = 0
        prefix: list[str] = []

        def rec(placed: int) -> Iterator[LinearOrder]:
            nonlocal produced
            if placed == full:
                produced += 1
                if produced > cap:
                    raise CapExceededError(
                        f"more than {cap} linear extensions", count=cap)
                yield LinearOrder(tuple(prefix), markers=ms)
                return
            for i in range(n):
                bit = 1 << i
                if not placed & bit and masks[i] & ~placed == 0:
                    prefix.append(ids[i])
                    yield from rec(placed | bit)
                    prefix.pop()

        if n == 0:
            yield LinearOrder((), markers=ms)
            return
        yield from rec(0)

    return run()


def count_linear_extensions(order: Order, cap: int = DEFAULT_CAP) -> int:
    """Exact number of linear extensions, via memoization over down-sets.

    Raises ``CapExceededError`` when more than ``cap`` distinct down-sets
    are visited.
    """
    ids, masks = _pred_masks(order)
    n = len(ids)
    full = (1 << n) - 1
    memo: dict[int, int] = {}

    def count(placed: int) -> int:
        if placed == full:
            return 1
        hit = memo.get(placed)
        if hit is not None:
            return hit
        if len(memo) >= cap:
            raise CapExceededError(
                f"more than {cap} states while counting extensions", count=cap)
        total = 0
        for i in range(n):
            bit = 1 << i
            if not placed & bit and masks[i] & ~placed == 0:
                total += count(placed | bit)
        memo[placed] = total
        return total

    return count(0)


def random_extension(order: Order, rng: random.Random) -> LinearOrder:
    """Seeded random linear extension.

    Weak (and linear) orders get an in-bucket shuffle; everything else a
    random topological sort.  Deterministic for a given rng state.
    """
    if isinstance(order, LinearOrder):
        return order
    if isinstance(order, WeakOrder):
        out: list[str] = []
        for b in order.buckets:
            members = sorted(b)
            rng.shuffle(members)
            out.extend(members)
        return LinearOrder(tuple(out), markers=order.markers)
    ids, masks = _pred_masks(order)
    n = len(ids)
    placed = 0
    out = []
    for _ in range(n):
        avail = [i for i in range(n)
                 if not placed & (1 << i) and masks[i] & ~placed == 0]
        i = rng.choice(avail)
        placed |= 1 << i
        out.append(ids[i])
    return LinearOrder(tuple(out), markers=order.markers)


def _comparability(order: Order) -> tuple[list[str], list[list[bool]]]:
    ids = list(order.markers)
    n = len(ids)
    lt = [[False] * n for _ in range(n)]
    for i, a in enumerate(ids):
        for j, b in enumerate(ids):
            if i != j and order.precedes(a, b):
                lt[i][j] = True
    return ids, lt


def classify(order: Order) -> OrderFamily:
    """Finest family of ``order``: linear, weak, semiorder, interval, or
    partial, per the forbidden-pattern characterizations."""
    ids, lt = _comparability(order)
    n = len(ids)
    if n <= 1:
        return OrderFamily.LINEAR

    def incomp(i: int, j: int) -> bool:
        return not lt[i][j] and not lt[j][i]

    if all(lt[i][j] or lt[j][i] for i in range(n) for j in range(i + 1, n)):
        return OrderFamily.LINEAR

    def incomp_transitive() -> bool:
        for i in range(n):
            for j in range(n):
                if i == j or not incomp(i, j):
                    continue
                for k in range(n):
                    if k not in (i, j) and incomp(j, k) and not incomp(i, k):
                        return False
        return True

    if incomp_transitive():
        return OrderFamily.WEAK

    pairs = [(i, j) for i in range(n) for j in range(n) if lt[i][j]]
    for a, b in pairs:
        for c, d in pairs:
            if not lt[a][d] and not lt[c][b]:
                return OrderFamily.PARTIAL

    # 2+2-free; a 3+1 separates semiorders from general interval orders
    for x in range(n):
        for y in range(n):
            if not lt[x][y]:
                continue
            for z in range(n):
                if not lt[y][z]:
                    continue
                for w in range(n):
                    if w in (x, y, z):
                        continue
                    if incomp(w, x) and incomp(w, y) and incomp(w, z):
                        return OrderFamily.INTERVAL
    return OrderFamily.SEMIORDER


def to_weak(order: Order) -> WeakOrder:
    """Rebuild a linear or weak order value as a WeakOrder.

    Buckets are the incomparability classes, ordered consistently with
    the input; the round trip preserves ``precedes`` on all pairs.
    """
    fam = family_of(order)
    if fam not in (OrderFamily.LINEAR, OrderFamily.WEAK):
        raise FamilyMismatchError(f"not a weak order (classified {fam.value})")
    if isinstance(order, WeakOrder):
        return order
    ids = list(order.markers)
    npred = {m: sum(1 for x in ids if x != m and order.precedes(x, m)) for m in ids}
    levels = sorted(set(npred.values()))
    buckets = [frozenset(m for m in ids if npred[m] == lv) for lv in levels]
    return WeakOrder(buckets, markers=order.markers)


def family_of(order: Order) -> OrderFamily:
    """Finest family, with O(n) fast paths for the typed representations."""
    if isinstance(order, LinearOrder):
        return OrderFamily.LINEAR
    if isinstance(order, WeakOrder):
        if all(len(b) == 1 for b in order.buckets):
            return OrderFamily.LINEAR
        return OrderFamily.WEAK
    return classify(order)


def to_interval_representation(order: Order) -> IntervalOrder:
    """Canonical integer-endpoint open-interval realization.

    left(x) is the rank of x's strict predecessor set among the distinct
    predecessor sets (by inclusion); right(x) is one plus the rank of
    x's strict successor set among the distinct successor sets, largest
    first.  The induced precedence equals the input order on all pairs;
    inputs with an induced 2+2 are rejected.
    """
    fam = family_of(order)
    if fam == OrderFamily.PARTIAL:
        raise FamilyMismatchError("order contains an induced 2+2; not an interval order")
    ids = list(order.markers)
    pred = {m: frozenset(x for x in ids if x != m and order.precedes(x, m)) for m in ids}
    succ = {m: frozenset(x for x in ids if x != m and order.precedes(m, x)) for m in ids}
    def chain_key(s: frozenset[str]) -> tuple[int, tuple[str, ...]]:
        return (len(s), tuple(sorted(s)))

    pred_rank = {s: k for k, s in enumerate(sorted(set(pred.values()), key=chain_key))}
    succ_rank = {s: k for k, s in enumerate(
        sorted(set(succ.values()), key=chain_key, reverse=True))}
    intervals = {}
    for m in ids:
        left = pred_rank[pred[m]]
        right = succ_rank[succ[m]] + 1
        if left >= right:
            raise AssertionError("canonical realization produced an empty interval")
        intervals[m] = (left, right)
    result = IntervalOrder(intervals, markers=order.markers)
    for a in ids:
        for b in ids:
            if a != b and result.precedes(a, b) != order.precedes(a, b):
                raise AssertionError("canonical realization does not round-trip")
    return result


def count_adjacencies(p1: LinearOrder, p2: LinearOrder) -> int:
    """Number of ordered pairs appearing consecutively, in the same
    order, in both permutations."""
    return len(adjacency_set(p1, p2))


def adjacency_set(p1: LinearOrder, p2: LinearOrder) -> frozenset[tuple[str, str]]:
    """The exact set of pairs counted by ``count_adjacencies``."""
    _require_same_markers(p1, p2)
    succ2 = {a: b for a, b in zip(p2.perm, p2.perm[1:])}
    return frozenset((a, b) for a, b in zip(p1.perm, p1.perm[1:])
                     if succ2.get(a) == b)


def count_breakpoints(p1: LinearOrder, p2: LinearOrder) -> int:
    """|markers| - 1 - adjacencies; symmetric in its arguments and
    requires a nonempty marker set."""
    _require_same_markers(p1, p2)
    if len(p1.markers) == 0:
        raise ValidationError("breakpoints are undefined on an empty marker set")
    return len(p1.markers) - 1 - count_adjacencies(p1, p2)
