"""Reduction from 3-occurrence MAX-2SAT to the alignment of two weak
orders with buckets of at most two markers.

Every variable contributes a 12-marker gadget (seven chain markers
p..v, two selection pairs a+/b+ and a-/b-, one dummy d); every clause
contributes two literal-marker pairs (e, f) and a separation marker z.
An assignment satisfying k clauses maps to a solution with 4n + k
adjacencies and back: three chain adjacencies plus one selection
adjacency per variable, and one literal adjacency per satisfied clause.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .align import AlignmentInstance, AlignmentSolution, check_feasible
from .errors import (
    DuplicateVariableError,
    OccurrenceCountError,
    PolarityError,
    ValidationError,
)
from .orders import LinearOrder, WeakOrder, adjacency_set

Literal = tuple[int, bool]  # (variable, is_positive)

CHAIN = ("p", "q", "r", "s", "t", "u", "v")


@dataclass(frozen=True)
class Occurrence:
    """One literal slot of a variable: where it sits and its polarity."""

    clause: int    # 1-based clause id
    position: int  # 1 or 2 within the clause
    positive: bool


@dataclass(frozen=True)
class Sat32Instance:
    """Normalized 3-occurrence 2SAT instance.

    Each variable occurs in exactly three different clauses with mixed
    polarity; its slots are ordered so the first is positive and the
    third negative.  Each clause joins two literals of two different
    variables.
    """

    n: int
    clauses: tuple[tuple[Literal, Literal], ...]
    slots: dict[int, tuple[Occurrence, Occurrence, Occurrence]]

    @property
    def m(self) -> int:
        return len(self.clauses)


def normalize_sat32(clauses: list[tuple[Literal, Literal]], n: int | None = None
                    ) -> Sat32Instance:
    """Validate raw clauses and order every variable's literals so the
    first is positive and the third negative (same-polarity slots keep
    clause order)."""
    variables = sorted({v for c in clauses for v, _ in c})
    if n is None:
        n = max(variables, default=0)
    for c in clauses:
        if len({v for v, _ in c}) != 2:
            raise DuplicateVariableError(f"clause {c!r} must use two different variables")
        for v, _ in c:
            if not 1 <= v <= n:
                raise ValidationError(f"variable {v} out of range 1..{n}")
    occ: dict[int, list[Occurrence]] = {v: [] for v in range(1, n + 1)}
    for j, c in enumerate(clauses, 1):
        for h, (v, pos) in enumerate(c, 1):
            occ[v].append(Occurrence(j, h, pos))
    slots = {}
    for v in range(1, n + 1):
        if len(occ[v]) != 3:
            raise OccurrenceCountError(
                f"variable {v} occurs {len(occ[v])} times, expected 3")
        if len({o.clause for o in occ[v]}) != 3:
            raise OccurrenceCountError(
                f"variable {v} must occur in 3 different clauses")
        npos = sum(1 for o in occ[v] if o.positive)
        if npos not in (1, 2):
            raise PolarityError(
                f"variable {v} needs mixed polarity (2+1 or 1+2 literals)")
        ordered = ([o for o in occ[v] if o.positive]
                   + [o for o in occ[v] if not o.positive])
        slots[v] = tuple(ordered)
    if 3 * n != 2 * len(clauses):
        raise OccurrenceCountError(
            f"occurrence counting requires 3n = 2m, got n={n} m={len(clauses)}")
    return Sat32Instance(n, tuple(clauses), slots)


@dataclass(frozen=True)
class Sat32Certificate:
    """Marker names, gadget bucket layouts, and the literal-to-marker
    association of a reduced instance."""

    sat: Sat32Instance
    chain_markers: dict[int, dict[str, str]]          # i -> {"p": "p1", ...}
    select_markers: dict[int, dict[str, str]]         # i -> {"a+":..., "b+":..., "a-":..., "b-":...}
    dummy_markers: dict[int, str]                     # i -> d_i
    literal_markers: dict[tuple[int, int], tuple[str, str]]  # (clause, position) -> (e, f)
    sep_markers: dict[int, str]                       # j -> z_j
    clause_buckets: dict[int, tuple[frozenset, frozenset]]   # per clause, 2 buckets
    variable_buckets: dict[int, tuple[frozenset, ...]]       # per variable, 8 buckets
    selection_buckets: dict[int, tuple[frozenset, ...]]      # per variable, 9 buckets

    def gamma(self) -> WeakOrder:
        buckets: list[frozenset] = []
        for j in range(1, self.sat.m + 1):
            buckets.extend(self.clause_buckets[j])
            buckets.append(frozenset({self.sep_markers[j]}))
        for i in range(1, self.sat.n + 1):
            buckets.extend(self.variable_buckets[i])
        return WeakOrder(buckets)

    def pi(self) -> WeakOrder:
        buckets: list[frozenset] = []
        for i in range(1, self.sat.n + 1):
            buckets.extend(self.selection_buckets[i])
        for j in range(1, self.sat.m + 1):
            buckets.append(frozenset({self.sep_markers[j]}))
        return WeakOrder(buckets)


def reduce_sat32(sat: Sat32Instance) -> tuple[AlignmentInstance, Sat32Certificate]:
    """Compile a normalized instance into a (weak, weak) alignment
    instance whose buckets hold at most two markers."""
    chain_markers = {i: {c: f"{c}{i}" for c in CHAIN} for i in range(1, sat.n + 1)}
    select_markers = {i: {"a+": f"a{i}+", "b+": f"b{i}+", "a-": f"a{i}-", "b-": f"b{i}-"}
                      for i in range(1, sat.n + 1)}
    dummy_markers = {i: f"d{i}" for i in range(1, sat.n + 1)}
    literal_markers = {}
    sep_markers = {}
    clause_buckets = {}
    for j in range(1, sat.m + 1):
        for h in (1, 2):
            literal_markers[(j, h)] = (f"e{j}^{h}", f"f{j}^{h}")
        sep_markers[j] = f"z{j}"
        clause_buckets[j] = (
            frozenset({literal_markers[(j, 1)][0], literal_markers[(j, 2)][0]}),
            frozenset({literal_markers[(j, 1)][1], literal_markers[(j, 2)][1]}),
        )

    variable_buckets = {}
    selection_buckets = {}
    for i in range(1, sat.n + 1):
        cm, sm = chain_markers[i], select_markers[i]
        variable_buckets[i] = (
            frozenset({cm["p"], sm["a+"]}),
            frozenset({cm["q"], sm["b+"]}),
            frozenset({cm["r"]}),
            frozenset({cm["s"]}),
            frozenset({cm["t"]}),
            frozenset({cm["u"], sm["a-"]}),
            frozenset({cm["v"], sm["b-"]}),
            frozenset({dummy_markers[i]}),
        )
        first, second, third = sat.slots[i]
        e1, f1 = literal_markers[(first.clause, first.position)]
        e3, f3 = literal_markers[(third.clause, third.position)]
        e2, f2 = literal_markers[(second.clause, second.position)]
        if second.positive:
            mid = ({cm["r"], e2}, {cm["s"], f2}, {cm["t"], dummy_markers[i]})
        else:
            mid = ({cm["r"], dummy_markers[i]}, {cm["s"], e2}, {cm["t"], f2})
        selection_buckets[i] = (
            frozenset({cm["p"], e1}),
            frozenset({cm["q"], f1}),
            frozenset(mid[0]),
            frozenset(mid[1]),
            frozenset(mid[2]),
            frozenset({cm["u"], e3}),
            frozenset({cm["v"], f3}),
            frozenset({sm["a+"], sm["a-"]}),
            frozenset({sm["b+"], sm["b-"]}),
        )

    cert = Sat32Certificate(sat, chain_markers, select_markers, dummy_markers,
                            literal_markers, sep_markers, clause_buckets,
                            variable_buckets, selection_buckets)
    gamma = cert.gamma()
    pi = cert.pi()
    instance = AlignmentInstance(gamma.markers, gamma, pi)
    return instance, cert


def _instance_of(cert: Sat32Certificate) -> AlignmentInstance:
    gamma = cert.gamma()
    return AlignmentInstance(gamma.markers, gamma, cert.pi())


class _BucketOrders:
    """Per-bucket first/last constraints, turned into concrete orders."""

    def __init__(self, order: WeakOrder):
        self.order = order
        self.bucket_of = {m: i for i, b in enumerate(order.buckets) for m in b}
        self.first: dict[int, str] = {}
        self.last: dict[int, str] = {}

    def mark_last(self, m: str) -> None:
        i = self.bucket_of[m]
        if self.first.get(i) == m or self.last.get(i, m) != m:
            raise AssertionError(f"conflicting order constraints in bucket {i}")
        self.last[i] = m

    def mark_first(self, m: str) -> None:
        i = self.bucket_of[m]
        if self.last.get(i) == m or self.first.get(i, m) != m:
            raise AssertionError(f"conflicting order constraints in bucket {i}")
        self.first[i] = m

    def linearize(self, fallback=None) -> LinearOrder:
        """Concatenate buckets, ordering each per its constraints;
        unconstrained buckets use ``fallback(bucket_index)`` or
        ascending marker id."""
        out: list[str] = []
        for i, b in enumerate(self.order.buckets):
            members = sorted(b)
            if len(members) == 2:
                x, y = members
                if self.last.get(i) == x or self.first.get(i) == y:
                    members = [y, x]
                elif i not in self.last and i not in self.first and fallback is not None:
                    got = fallback(i)
                    if got is not None:
                        members = list(got)
            out.extend(members)
        return LinearOrder(tuple(out), markers=self.order.markers)


def _realize(gamma_orders: _BucketOrders, pi_orders: _BucketOrders,
             x: str, y: str) -> None:
    """Constrain both orders so that (x, y) becomes an adjacency."""
    gamma_orders.mark_last(x)
    gamma_orders.mark_first(y)
    pi_orders.mark_last(x)
    pi_orders.mark_first(y)


def _target_pairs(cert: Sat32Certificate, i: int, value: bool) -> list[tuple[str, str]]:
    """The four selection/chain adjacencies realized for variable i."""
    cm, sm = cert.chain_markers[i], cert.select_markers[i]
    if value:
        return [(sm["a+"], sm["b+"]), (cm["q"], cm["r"]),
                (cm["s"], cm["t"]), (cm["u"], cm["v"])]
    return [(sm["a-"], sm["b-"]), (cm["p"], cm["q"]),
            (cm["r"], cm["s"]), (cm["t"], cm["u"])]


def _claimable_slots(sat: Sat32Instance, i: int, value: bool) -> list[Occurrence]:
    """Literal slots of variable i made true by its value, in gadget
    order: the dedicated slot first, then the middle slot."""
    first, second, third = sat.slots[i]
    if value:
        out = [first]
        if second.positive:
            out.append(second)
    else:
        out = [third]
        if not second.positive:
            out.append(second)
    return out


def solution_from_assignment(cert: Sat32Certificate,
                             assignment: dict[int, bool]) -> AlignmentSolution:
    """Build a solution with 4n + k adjacencies from an assignment
    satisfying k clauses.

    Variables are processed in ascending index; each satisfied clause's
    literal buckets are claimed by the first variable that can realize a
    true literal in it.  Leftover two-marker buckets fall back to
    ascending marker id.
    """
    sat = cert.sat
    if set(assignment) != set(range(1, sat.n + 1)):
        raise ValidationError("assignment must cover every variable exactly")
    gamma_orders = _BucketOrders(cert.gamma())
    pi_orders = _BucketOrders(cert.pi())
    claimed: set[int] = set()
    for i in range(1, sat.n + 1):
        for x, y in _target_pairs(cert, i, assignment[i]):
            _realize(gamma_orders, pi_orders, x, y)
        for slot in _claimable_slots(sat, i, assignment[i]):
            if slot.clause in claimed:
                continue
            claimed.add(slot.clause)
            e, f = cert.literal_markers[(slot.clause, slot.position)]
            _realize(gamma_orders, pi_orders, e, f)
    sol = AlignmentSolution.from_extensions(gamma_orders.linearize(),
                                            pi_orders.linearize())
    check_feasible(_instance_of(cert), sol)
    k = satisfied_count(sat, assignment)
    if sol.n_adj < 4 * sat.n + k:
        raise AssertionError("constructed solution fell short of 4n + k adjacencies")
    return sol


def satisfied_count(sat: Sat32Instance, assignment: dict[int, bool]) -> int:
    return sum(1 for c in sat.clauses
               if any(assignment[v] == pos for v, pos in c))


def _realized_slots(cert: Sat32Certificate, adj: frozenset) -> dict[int, set[int]]:
    """Per variable, the slot indices (0..2) whose literal pair is an
    adjacency."""
    out: dict[int, set[int]] = {i: set() for i in range(1, cert.sat.n + 1)}
    for i in range(1, cert.sat.n + 1):
        for g, slot in enumerate(cert.sat.slots[i]):
            if cert.literal_markers[(slot.clause, slot.position)] in adj:
                out[i].add(g)
    return out


def extract_assignment(cert: Sat32Certificate,
                       sol: AlignmentSolution) -> dict[int, bool]:
    """Map a feasible solution to an assignment satisfying at least
    n_adj - 4n clauses.

    Every variable gadget is rewritten to realize exactly four
    selection/chain adjacencies.  A variable whose realized literals mix
    polarities keeps the ones matching its middle slot's polarity; a
    consistent variable keeps all of its realized literals.  The value
    is then read off the realized selection pair.  Rewrites never touch
    clause buckets and never decrease the adjacency count.
    """
    sat = cert.sat
    instance = _instance_of(cert)
    check_feasible(instance, sol)
    before = sol.n_adj
    adj = adjacency_set(sol.gamma_ext, sol.pi_ext)
    realized = _realized_slots(cert, adj)

    gamma_orders = _BucketOrders(cert.gamma())
    pi_orders = _BucketOrders(cert.pi())
    gamma_current = _current_bucket_orders(gamma_orders, sol.gamma_ext)
    pi_current = _current_bucket_orders(pi_orders, sol.pi_ext)

    assignment: dict[int, bool] = {}
    for i in range(1, sat.n + 1):
        slots = sat.slots[i]
        got = realized[i]
        has_pos = any(slots[g].positive for g in got)
        has_neg = any(not slots[g].positive for g in got)
        if has_pos and has_neg:
            value = slots[1].positive
        elif has_neg:
            value = False
        else:
            value = True
        assignment[i] = value
        for x, y in _target_pairs(cert, i, value):
            _realize(gamma_orders, pi_orders, x, y)
        kept = {g for g in got if slots[g].positive == value}
        for g in kept:
            slot = slots[g]
            e, f = cert.literal_markers[(slot.clause, slot.position)]
            # clause buckets already realize this literal; only the
            # gadget side needs to keep e last and f first
            pi_orders.mark_last(e)
            pi_orders.mark_first(f)

    gamma_ext = gamma_orders.linearize(fallback=gamma_current)
    pi_ext = pi_orders.linearize(fallback=pi_current)
    repaired = AlignmentSolution.from_extensions(gamma_ext, pi_ext)
    check_feasible(instance, repaired)
    if repaired.n_adj < before:
        raise AssertionError("rewrite decreased the adjacency count")
    _check_selection_count(cert, repaired, assignment)
    if satisfied_count(sat, assignment) < before - 4 * sat.n:
        raise AssertionError("extraction fell short of n_adj - 4n clauses")
    return assignment


def _current_bucket_orders(orders: _BucketOrders, ext: LinearOrder):
    """Fallback that reproduces the input solution's bucket orderings."""
    pos = {m: k for k, m in enumerate(ext.perm)}
    current = {}
    for i, b in enumerate(orders.order.buckets):
        current[i] = tuple(sorted(b, key=pos.get))
    return lambda i: current.get(i)


def _check_selection_count(cert: Sat32Certificate, sol: AlignmentSolution,
                           assignment: dict[int, bool]) -> None:
    adj = adjacency_set(sol.gamma_ext, sol.pi_ext)
    for i in range(1, cert.sat.n + 1):
        want = set(_target_pairs(cert, i, assignment[i]))
        cm, sm = cert.chain_markers[i], cert.select_markers[i]
        candidates = {(sm["a+"], sm["b+"]), (sm["a-"], sm["b-"])}
        candidates.update((cm[x], cm[y]) for x, y in zip(CHAIN, CHAIN[1:]))
        got = candidates & adj
        if got != want:
            raise AssertionError(
                f"variable {i} realizes {sorted(got)} instead of the canonical four")
