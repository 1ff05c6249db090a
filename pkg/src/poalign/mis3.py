"""Reduction from maximum independent set in degree-3 graphs to the
alignment of a linear order with an interval order.

For a graph with n vertices and m edges the reduced instance has
3n + 4m markers: vertex markers u_i, v_i, selection markers p_j, q_j,
an edge marker e_j per edge, and n + m separation markers z_h.  The
linear side lays the markers out as

    u1 v1 z1 u2 v2 z2 ... un vn zn  p1 e1 q1 z_{n+1} ... pm em qm z_{n+m}

and the interval side is induced by the occurrence positions of every
marker in a doubled master sequence.  Independent sets map to solutions
with m + k adjacencies and back.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .align import AlignmentInstance, AlignmentSolution, check_feasible
from .errors import DegreeError, ValidationError
from .orders import IntervalOrder, LinearOrder, MarkerSet, adjacency_set


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n with 1-based edge ids."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("graph needs at least one vertex")
        seen = set()
        for l, r in self.edges:
            if not (1 <= l < r <= self.n):
                raise ValidationError(f"bad edge ({l}, {r}): need 1 <= l < r <= n")
            if (l, r) in seen:
                raise ValidationError(f"duplicate edge ({l}, {r})")
            seen.add((l, r))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return sum(1 for l, r in self.edges if i in (l, r))

    def max_degree(self) -> int:
        deg = Counter()
        for l, r in self.edges:
            deg[l] += 1
            deg[r] += 1
        return max(deg.values(), default=0)

    def neighbors(self, i: int) -> frozenset[int]:
        out = set()
        for l, r in self.edges:
            if l == i:
                out.add(r)
            elif r == i:
                out.add(l)
        return frozenset(out)


@dataclass(frozen=True)
class Incidence:
    """Edge ids incident to one vertex, split by endpoint role and in
    ascending edge id."""

    lower: tuple[int, ...]  # edges where the vertex is the smaller endpoint
    upper: tuple[int, ...]  # edges where the vertex is the larger endpoint


def vertex_incidence(g: Graph) -> dict[int, Incidence]:
    lower = {i: [] for i in range(1, g.n + 1)}
    upper = {i: [] for i in range(1, g.n + 1)}
    for j, (l, r) in enumerate(g.edges, 1):
        lower[l].append(j)
        upper[r].append(j)
    return {i: Incidence(tuple(lower[i]), tuple(upper[i])) for i in range(1, g.n + 1)}


def is_independent(g: Graph, vs: frozenset[int] | set[int]) -> bool:
    return all(not (l in vs and r in vs) for l, r in g.edges)


@dataclass(frozen=True)
class Mis3Certificate:
    """Everything needed to map solutions of the reduced instance back
    to independent sets without re-running the reduction."""

    graph: Graph
    vertex_markers: dict[int, tuple[str, str]]       # i -> (u_i, v_i)
    edge_markers: dict[int, tuple[str, str, str]]    # j -> (p_j, q_j, e_j)
    sep_markers: dict[int, str]                      # h -> z_h
    base_sequence: tuple[str, ...]                   # every p/q/e twice, rest once
    doubled_sequence: tuple[str, ...]                # every marker exactly twice
    intervals: dict[str, tuple[int, int]]            # 1-based occurrence positions
    sections: dict[int, tuple[str, ...]]             # per-vertex slice of the base sequence

    def gamma(self) -> LinearOrder:
        g = self.graph
        perm: list[str] = []
        for i in range(1, g.n + 1):
            u, v = self.vertex_markers[i]
            perm += [u, v, self.sep_markers[i]]
        for j in range(1, g.m + 1):
            p, q, e = self.edge_markers[j]
            perm += [p, e, q, self.sep_markers[g.n + j]]
        return LinearOrder(tuple(perm))

    def pi(self) -> IntervalOrder:
        return IntervalOrder(self.intervals)


def reduce_mis3(g: Graph, allow_degree_violation: bool = False
                ) -> tuple[AlignmentInstance, Mis3Certificate]:
    """Compile a graph into a (linear, interval) alignment instance.

    The degree bound 3 is required for the stated approximation
    constants; ``allow_degree_violation`` lifts the check but voids
    those bounds.
    """
    if not allow_degree_violation and g.max_degree() > 3:
        raise DegreeError(f"max degree {g.max_degree()} exceeds 3")
    inc = vertex_incidence(g)
    vertex_markers = {i: (f"u{i}", f"v{i}") for i in range(1, g.n + 1)}
    edge_markers = {j: (f"p{j}", f"q{j}", f"e{j}") for j in range(1, g.m + 1)}
    sep_markers = {h: f"z{h}" for h in range(1, g.n + g.m + 1)}

    sections: dict[int, tuple[str, ...]] = {}
    base: list[str] = [sep_markers[h] for h in range(1, g.n + g.m + 1)]
    for i in range(1, g.n + 1):
        u, v = vertex_markers[i]
        sec: list[str] = [f"q{j}" for j in inc[i].lower]
        sec.append(u)
        for j in inc[i].upper:
            sec += [f"p{j}", f"e{j}"]
        for j in inc[i].lower:
            sec += [f"e{j}", f"q{j}"]
        sec.append(v)
        sec += [f"p{j}" for j in inc[i].upper]
        sections[i] = tuple(sec)
        base.extend(sec)

    occurrences = Counter(base)
    doubled: list[str] = []
    for x in base:
        doubled.append(x)
        if occurrences[x] == 1:
            doubled.append(x)
    positions: dict[str, list[int]] = {}
    for idx, x in enumerate(doubled, 1):
        positions.setdefault(x, []).append(idx)
    intervals = {x: (p[0], p[1]) for x, p in positions.items()}

    cert = Mis3Certificate(g, vertex_markers, edge_markers, sep_markers,
                           tuple(base), tuple(doubled), intervals, sections)
    gamma = cert.gamma()
    pi = cert.pi()
    instance = AlignmentInstance(gamma.markers, gamma, pi)
    return instance, cert


def _instance_of(cert: Mis3Certificate) -> AlignmentInstance:
    gamma = cert.gamma()
    return AlignmentInstance(gamma.markers, gamma, cert.pi())


def solution_from_independent_set(cert: Mis3Certificate,
                                  vs: frozenset[int] | set[int]) -> AlignmentSolution:
    """Build a solution with at least m + |vs| adjacencies from an
    independent set.

    Per edge j = (a, b): when a is selected, drop the later occurrences
    of q_j and p_j plus the occurrence of e_j that sits between u_a and
    v_a; otherwise drop the earlier occurrences of q_j and p_j plus the
    occurrence of e_j that sits between u_b and v_b.  The surviving
    subsequence of the master sequence is a linear extension of the
    interval side.
    """
    vs = frozenset(vs)
    g = cert.graph
    for i in vs:
        if not 1 <= i <= g.n:
            raise ValidationError(f"unknown vertex {i}")
    if not is_independent(g, vs):
        raise ValidationError("vertex set is not independent")

    # per marker, which occurrence (1st or 2nd) to drop
    drop: dict[str, int] = {}
    for j, (a, b) in enumerate(g.edges, 1):
        p, q, e = cert.edge_markers[j]
        if a in vs:
            drop[e] = 1   # the copy between u_a and v_a comes first
            drop[q] = 2
            drop[p] = 2
        else:
            drop[q] = 1
            drop[p] = 1
            drop[e] = 2   # the copy between u_b and v_b comes second
    seen = Counter()
    out: list[str] = []
    for x in cert.base_sequence:
        seen[x] += 1
        if drop.get(x) == seen[x]:
            continue
        out.append(x)
    pi_ext = LinearOrder(tuple(out))
    sol = AlignmentSolution.from_extensions(cert.gamma(), pi_ext)
    check_feasible(_instance_of(cert), sol)
    if sol.n_adj < g.m + len(vs):
        raise AssertionError("constructed solution fell short of m + k adjacencies")
    return sol


def extract_independent_set(cert: Mis3Certificate,
                            sol: AlignmentSolution) -> frozenset[int]:
    """Map a feasible solution back to an independent set of size at
    least n_adj - m.

    While two selected vertex pairs are joined by an edge j, the markers
    e_j and q_j are moved to sit between u_a and v_a for the smaller
    endpoint a, trading the adjacency u_a v_a for e_j q_j.  Each edge is
    repaired at most once, in ascending edge id; repairs never decrease
    the adjacency count.
    """
    g = cert.graph
    instance = _instance_of(cert)
    check_feasible(instance, sol)
    gamma = sol.gamma_ext
    seq = list(sol.pi_ext.perm)
    before = sol.n_adj

    def vertex_adjacent(i: int, adj) -> bool:
        return cert.vertex_markers[i] in adj

    for j, (a, b) in enumerate(g.edges, 1):
        adj = adjacency_set(gamma, LinearOrder(tuple(seq), markers=gamma.markers))
        if not (vertex_adjacent(a, adj) and vertex_adjacent(b, adj)):
            continue
        p, q, e = cert.edge_markers[j]
        seq.remove(e)
        seq.remove(q)
        at = seq.index(cert.vertex_markers[a][0]) + 1
        seq[at:at] = [e, q]

    pi_ext = LinearOrder(tuple(seq), markers=gamma.markers)
    repaired = AlignmentSolution.from_extensions(gamma, pi_ext)
    check_feasible(instance, repaired)
    if repaired.n_adj < before:
        raise AssertionError("repair decreased the adjacency count")
    adj = adjacency_set(gamma, pi_ext)
    result = frozenset(i for i in range(1, g.n + 1)
                       if cert.vertex_markers[i] in adj)
    if not is_independent(g, result):
        raise AssertionError("extraction produced a non-independent set")
    if len(result) < before - g.m:
        raise AssertionError("extraction fell short of n_adj - m vertices")
    return result
