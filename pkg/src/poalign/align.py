"""Optimal alignment of two orders: exact block DP for a (linear, weak)
pair, and an exact oracle for every other class pair.

The DP splits each bucket of the weak order into maximal runs that are
contiguous in the linear order ("blocks").  A block can always be kept
together, in its linear-order internal order, without losing adjacencies;
adjacencies inside a block are then free, no adjacency can join two
blocks of the same bucket (maximality), and at most one adjacency can
cross each bucket boundary.  The table entry ``(i, b)`` holds the best
achievable count for buckets ``0..i`` given that ``b`` is ordered last
in bucket ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapExceededError, MarkerSetMismatchError, ValidationError
from .orders import (
    DEFAULT_CAP,
    LinearOrder,
    MarkerSet,
    Order,
    OrderFamily,
    WeakOrder,
    adjacency_set,
    count_adjacencies,
    count_linear_extensions,
    enumerate_linear_extensions,
    family_of,
    is_linear_extension,
    same_marker_ids,
    to_weak,
)


@dataclass(frozen=True)
class AlignmentInstance:
    """A pair of orders over one marker set."""

    markers: MarkerSet
    gamma: Order
    pi: Order

    def __post_init__(self):
        if not (same_marker_ids(self.gamma, self.markers)
                and same_marker_ids(self.pi, self.markers)):
            raise MarkerSetMismatchError("orders are not over the instance marker set")


@dataclass(frozen=True)
class AlignmentSolution:
    """A pair of linear extensions with their adjacency and breakpoint
    counts."""

    gamma_ext: LinearOrder
    pi_ext: LinearOrder
    n_adj: int
    n_brk: int

    def __post_init__(self):
        n = len(self.gamma_ext.markers)
        if n and self.n_adj + self.n_brk != n - 1:
            raise ValidationError("n_adj + n_brk must equal |markers| - 1")

    @classmethod
    def from_extensions(cls, gamma_ext: LinearOrder, pi_ext: LinearOrder) -> "AlignmentSolution":
        n_adj = count_adjacencies(gamma_ext, pi_ext)
        n = len(gamma_ext.markers)
        return cls(gamma_ext, pi_ext, n_adj, max(n - 1, 0) - n_adj)


def check_feasible(instance: AlignmentInstance, sol: AlignmentSolution) -> None:
    """Raise unless ``sol`` is a pair of valid extensions of ``instance``
    with consistent counts."""
    if not same_marker_ids(sol.gamma_ext, instance.markers):
        raise MarkerSetMismatchError("solution is over a different marker set")
    if not is_linear_extension(sol.gamma_ext, instance.gamma):
        raise ValidationError("gamma_ext does not extend the first order")
    if not is_linear_extension(sol.pi_ext, instance.pi):
        raise ValidationError("pi_ext does not extend the second order")
    if sol.n_adj != count_adjacencies(sol.gamma_ext, sol.pi_ext):
        raise ValidationError("recorded n_adj does not match the extensions")


@dataclass(frozen=True)
class Block:
    """Maximal run of one bucket that is contiguous in the linear order."""

    markers: tuple[str, ...]
    start: int
    end: int  # inclusive position in the linear order


@dataclass(frozen=True)
class BlockPartition:
    """Per bucket, its blocks in ascending start position."""

    buckets: tuple[tuple[Block, ...], ...]

    def internal(self, i: int) -> int:
        """Adjacencies guaranteed inside bucket ``i``'s blocks."""
        return self._internal()[i]

    def _internal(self) -> tuple[int, ...]:
        cached = self.__dict__.get("_internal_cache")
        if cached is None:
            cached = tuple(sum(len(b.markers) - 1 for b in blocks)
                           for blocks in self.buckets)
            object.__setattr__(self, "_internal_cache", cached)
        return cached

    def start_index(self, i: int) -> dict[int, int]:
        """Per bucket, map from a block's start position to its index."""
        cached = self.__dict__.get("_start_cache")
        if cached is None:
            cached = tuple({blk.start: idx for idx, blk in enumerate(blocks)}
                           for blocks in self.buckets)
            object.__setattr__(self, "_start_cache", cached)
        return cached[i]


@dataclass
class DpEntry:
    value: int
    prev: int | None = None        # index of the last block chosen in bucket i-1
    first: int | None = None       # index of the block ordered first in bucket i


@dataclass
class DpTable:
    """Entries ``(bucket, block index) -> DpEntry`` plus back-pointers."""

    entries: dict[tuple[int, int], DpEntry] = field(default_factory=dict)

    def value(self, i: int, b: int) -> int:
        return self.entries[(i, b)].value


def partition_blocks(pi: WeakOrder, gamma: LinearOrder) -> BlockPartition:
    """Split every bucket of ``pi`` into maximal gamma-contiguous runs."""
    if not same_marker_ids(pi, gamma):
        raise MarkerSetMismatchError("orders are over different marker sets")
    perm = gamma.perm
    at = {m: i for i, m in enumerate(perm)}
    buckets = []
    for members in pi.buckets:
        positions = sorted(at[m] for m in members)
        blocks = []
        run_start = positions[0]
        prev = positions[0]
        for p in positions[1:]:
            if p == prev + 1:
                prev = p
                continue
            blocks.append(Block(perm[run_start:prev + 1], run_start, prev))
            run_start = prev = p
        blocks.append(Block(perm[run_start:prev + 1], run_start, prev))
        buckets.append(tuple(blocks))
    return BlockPartition(tuple(buckets))


def dp_recurrence(i: int, b: int, table: DpTable, partition: BlockPartition) -> int:
    """Fill and return the table entry for block ``b`` of bucket ``i``.

    The entry is ``internal(i)`` plus the best predecessor total, where a
    predecessor block b' of bucket i-1 contributes one extra adjacency
    iff some block of bucket i may be ordered first (any block other
    than b, or b itself when it is the only block) and starts right
    after b' in the linear order.  Requires bucket ``i－1`` to be filled.
    """
    blocks = partition.buckets[i]
    base = partition.internal(i)
    if i == 0:
        table.entries[(0, b)] = DpEntry(base)
        return base
    start_at = partition.start_index(i)
    single = len(blocks) == 1
    best_total = best_prev = best_first = None
    # predecessors are scanned by ascending start, so ties keep the
    # smallest start position
    for p, prev_blk in enumerate(partition.buckets[i - 1]):
        total = table.value(i - 1, p)
        f = start_at.get(prev_blk.end + 1)
        connected = f is not None and (f != b or single)
        if connected:
            total += 1
        if best_total is None or total > best_total:
            best_total, best_prev = total, p
            best_first = f if connected else None
    value = base + best_total
    table.entries[(i, b)] = DpEntry(value, best_prev, best_first)
    return value


def dp_align_linear_weak(gamma: LinearOrder, pi: WeakOrder) -> AlignmentSolution:
    """Exact maximum-adjacency alignment of a linear order with a weak
    order, in time linear in the number of block pairs per boundary."""
    if not same_marker_ids(gamma, pi):
        raise MarkerSetMismatchError("orders are over different marker sets")
    if len(gamma.markers) == 0:
        raise ValidationError("alignment requires a nonempty marker set")
    partition = partition_blocks(pi, gamma)
    table = DpTable()
    k = len(partition.buckets)
    for i in range(k):
        for b in range(len(partition.buckets[i])):
            dp_recurrence(i, b, table, partition)
    last_bucket = partition.buckets[k - 1]
    best_b = 0
    for b in range(1, len(last_bucket)):
        if table.value(k - 1, b) > table.value(k - 1, best_b):
            best_b = b
    n_adj = table.value(k - 1, best_b)

    # walk the back-pointers, then emit each bucket as
    # [connecting first block] + middles by ascending start + [last block]
    choice: list[tuple[int, int | None]] = [None] * k  # (last, first) per bucket
    b = best_b
    for i in range(k - 1, -1, -1):
        entry = table.entries[(i, b)]
        choice[i] = (b, entry.first)
        b = entry.prev if entry.prev is not None else 0
    out: list[str] = []
    for i in range(k):
        last, first = choice[i]
        blocks = partition.buckets[i]
        order = []
        if first is not None and first != last:
            order.append(first)
        order.extend(idx for idx in range(len(blocks))
                     if idx != last and idx != first)
        order.append(last)
        for idx in order:
            out.extend(blocks[idx].markers)
    pi_ext = LinearOrder(tuple(out), markers=gamma.markers)
    sol = AlignmentSolution.from_extensions(gamma, pi_ext)
    assert sol.n_adj == n_adj, "DP value disagrees with the reconstruction"
    return sol


def _linearize(order: Order, cap: int) -> LinearOrder:
    """The unique extension of an order whose finest family is linear."""
    if isinstance(order, LinearOrder):
        return order
    if isinstance(order, WeakOrder):
        out = []
        for b in order.buckets:
            out.extend(sorted(b))
        return LinearOrder(tuple(out), markers=order.markers)
    return next(iter(enumerate_linear_extensions(order, cap=max(cap, 1))))


def _best_extension_against(order: Order, fixed: LinearOrder, cap: int) -> tuple[int, LinearOrder]:
    """Exact maximum adjacencies between ``fixed`` and any extension of
    ``order``, plus the lexicographically smallest optimal extension.

    Dynamic program over (down-set, last element) states; the state
    count is bounded by ``cap``.
    """
    ids = sorted(order.markers)
    index = {m: i for i, m in enumerate(ids)}
    n = len(ids)
    masks = [0] * n
    for a in ids:
        for b in ids:
            if a != b and order.precedes(a, b):
                masks[index[b]] |= 1 << index[a]
    nxt = [-1] * n  # successor position in the fixed permutation
    for a, b in zip(fixed.perm, fixed.perm[1:]):
        nxt[index[a]] = index[b]
    full = (1 << n) - 1
    memo: dict[tuple[int, int], int] = {}

    def best(placed: int, last: int) -> int:
        if placed == full:
            return 0
        key = (placed, last)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(memo) >= cap:
            raise CapExceededError(
                f"more than {cap} solver states", count=cap)
        top = 0
        for i in range(n):
            bit = 1 << i
            if not placed & bit and masks[i] & ~placed == 0:
                gain = 1 if nxt[last] == i else 0
                cand = gain + best(placed | bit, i)
                if cand > top:
                    top = cand
        memo[key] = top
        return top

    if n == 0:
        return 0, LinearOrder((), markers=order.markers)
    nxt.append(-1)  # sentinel "nothing placed yet"
    total = best(0, n)
    out: list[str] = []
    placed, last = 0, n
    remaining = total
    while placed != full:
        for i in range(n):
            bit = 1 << i
            if not placed & bit and masks[i] & ~placed == 0:
                gain = 1 if nxt[last] == i else 0
                if gain + best(placed | bit, i) == remaining:
                    out.append(ids[i])
                    placed |= bit
                    last = i
                    remaining -= gain
                    break
        else:
            raise AssertionError("reconstruction failed to advance")
    return total, LinearOrder(tuple(out), markers=order.markers)


def _candidate_key(sol: AlignmentSolution) -> tuple[int, tuple[str, ...], tuple[str, ...]]:
    return (-sol.n_adj, sol.gamma_ext.perm, sol.pi_ext.perm)


def oracle_align(instance: AlignmentInstance, cap: int = DEFAULT_CAP) -> AlignmentSolution:
    """Globally optimal alignment for any pair of order families.

    When one side is linear and the other is linear or weak, the block
    DP answers directly.  Otherwise the side with fewer linear
    extensions is enumerated (ties favor gamma) and the partner side is
    solved exactly per enumerated extension: by the block DP when the
    partner is weak, else by a DP over (down-set, last-element) states.
    Ties between optima go to the lexicographically smallest
    (gamma_ext, pi_ext) pair among the candidates.  ``cap`` bounds both
    enumerated extensions and solver states; exceeding it raises
    ``CapExceededError`` with the best solution so far attached.
    """
    if cap < 1:
        raise ValidationError("cap must be >= 1")
    if len(instance.markers) == 0:
        raise ValidationError("alignment requires a nonempty marker set")
    gamma, pi = instance.gamma, instance.pi
    fg, fp = family_of(gamma), family_of(pi)
    weakish = (OrderFamily.LINEAR, OrderFamily.WEAK)

    if fg == OrderFamily.LINEAR and fp in weakish:
        return dp_align_linear_weak(_linearize(gamma, cap), to_weak(pi))
    if fp == OrderFamily.LINEAR and fg == OrderFamily.WEAK:
        sol = dp_align_linear_weak(_linearize(pi, cap), to_weak(gamma))
        return AlignmentSolution(sol.pi_ext, sol.gamma_ext, sol.n_adj, sol.n_brk)

    def bucket_product(order: Order) -> int:
        total = 1
        for b in to_weak(order).buckets:
            for x in range(2, len(b) + 1):
                total *= x
        return total

    best: AlignmentSolution | None = None

    def consider(sol: AlignmentSolution) -> None:
        nonlocal best
        if best is None or _candidate_key(sol) < _candidate_key(best):
            best = sol

    def run_enumeration(enum_side: Order, enum_is_gamma: bool, solve) -> AlignmentSolution:
        nonlocal best
        try:
            for ext in enumerate_linear_extensions(enum_side, cap=cap):
                adj_ext = solve(ext)
                if enum_is_gamma:
                    consider(AlignmentSolution.from_extensions(ext, adj_ext))
                else:
                    consider(AlignmentSolution.from_extensions(adj_ext, ext))
        except CapExceededError as err:
            raise CapExceededError(str(err), count=err.count, best=best) from None
        assert best is not None
        return best

    def ext_count(order: Order, fam: OrderFamily) -> int | None:
        if fam in weakish:
            return bucket_product(order)
        try:
            return count_linear_extensions(order, cap=cap)
        except CapExceededError:
            return None  # effectively unbounded

    count_g, count_p = ext_count(gamma, fg), ext_count(pi, fp)
    if count_g is None and count_p is None:
        raise CapExceededError(f"both sides exceed {cap} extensions", count=cap)
    enum_gamma = count_p is None or (count_g is not None and count_g <= count_p)
    enum_side, partner, partner_fam = ((gamma, pi, fp) if enum_gamma
                                       else (pi, gamma, fg))
    if partner_fam in weakish:
        weak_partner = to_weak(partner)

        def solve(ext: LinearOrder) -> LinearOrder:
            return dp_align_linear_weak(ext, weak_partner).pi_ext
    else:
        def solve(ext: LinearOrder) -> LinearOrder:
            return _best_extension_against(partner, ext, cap)[1]

    return run_enumeration(enum_side, enum_gamma, solve)
