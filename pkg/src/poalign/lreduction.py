"""Empirical checks of the approximation-preserving reduction
inequalities, plus the small exact/greedy oracles they need.

For a reduction f with extraction g and constants (alpha, beta), the
two checked inequalities are

    (1)  opt(f(x)) <= alpha * opt(x)
    (2)  |opt(x) - val(g(y))| <= beta * |opt(f(x)) - val(y)|

where (2) must hold for every feasible solution y of f(x).  Inequality
(1) is checked exactly against brute-force optima; (2) on seeded random
feasible solutions plus the optimum itself.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .align import AlignmentSolution, oracle_align
from .errors import DegreeError, SizeExceededError, ValidationError
from .mis3 import Graph, extract_independent_set, reduce_mis3
from .orders import DEFAULT_CAP, random_extension
from .sat32 import (
    Sat32Instance,
    extract_assignment,
    reduce_sat32,
    satisfied_count,
)

KINDS = ("mis3-maxadj", "mis3-minbrk", "sat32-maxadj", "sat32-minbrk")

ALPHA = {
    "mis3-maxadj": 7,
    "mis3-minbrk": 29,
    "sat32-maxadj": 9,
    "sat32-minbrk": 30,
}
BETA = 1


def greedy_mis(g: Graph) -> frozenset[int]:
    """Independent set of size at least ceil(n/4): repeatedly take the
    smallest remaining vertex and discard its (at most 3) neighbors."""
    if g.max_degree() > 3:
        raise DegreeError(f"max degree {g.max_degree()} exceeds 3")
    remaining = set(range(1, g.n + 1))
    chosen = []
    for i in range(1, g.n + 1):
        if i in remaining:
            chosen.append(i)
            remaining.discard(i)
            remaining -= g.neighbors(i)
    return frozenset(chosen)


def brute_mis(g: Graph) -> int:
    """Exact maximum independent set size by subset search with
    pruning; limited to 25 vertices."""
    if g.n > 25:
        raise SizeExceededError(f"{g.n} vertices exceed the enumeration bound 25")
    nbr = [0] * (g.n + 1)
    for l, r in g.edges:
        nbr[l] |= 1 << r
        nbr[r] |= 1 << l

    best = 0

    def search(candidates: int, size: int) -> None:
        nonlocal best
        if size + candidates.bit_count() <= best:
            return
        if candidates == 0:
            best = max(best, size)
            return
        v = candidates.bit_length() - 1
        bit = 1 << v
        search(candidates & ~bit & ~nbr[v], size + 1)
        search(candidates & ~bit, size)

    search(sum(1 << i for i in range(1, g.n + 1)), 0)
    return best


def naive_assignment(sat: Sat32Instance) -> dict[int, bool]:
    """All-true assignment; satisfies every clause with a positive
    literal, hence at least half of all clauses."""
    return {i: True for i in range(1, sat.n + 1)}


def brute_maxsat(sat: Sat32Instance) -> int:
    """Exact maximum number of satisfiable clauses over all 2^n
    assignments; limited to 20 variables."""
    if sat.n > 20:
        raise SizeExceededError(f"{sat.n} variables exceed the enumeration bound 20")
    best = 0
    for bits in range(1 << sat.n):
        asg = {i: bool(bits >> (i - 1) & 1) for i in range(1, sat.n + 1)}
        best = max(best, satisfied_count(sat, asg))
    return best


@dataclass(frozen=True)
class Violation:
    digest: str
    inequality: str
    lhs: int
    rhs: int


@dataclass
class LRedReport:
    """Recorded checks of inequalities (1) and (2) for one instance."""

    kind: str
    alpha: int
    beta: int
    opt_source: int
    opt_target: int
    checked_solutions: int
    samples: list[tuple[str, int, int, int, int]] = field(default_factory=list)
    # samples hold (digest, val_y, val_gy, lhs, rhs)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def eq1(self) -> tuple[int, int]:
        return self.opt_target, self.alpha * self.opt_source

    def render(self) -> list[str]:
        lhs, rhs = self.eq1()
        lines = [f"CHECK eq1 lhs={lhs} rhs={rhs} "
                 f"{'PASS' if lhs <= rhs else 'FAIL'}"]
        for digest, val_y, val_gy, l2, r2 in self.samples:
            lines.append(
                f"CHECK eq2 digest={digest} val_y={val_y} val_gy={val_gy} "
                f"lhs={l2} rhs={r2} {'PASS' if l2 <= r2 else 'FAIL'}")
        return lines


def _digest(sol: AlignmentSolution) -> str:
    text = " ".join(sol.gamma_ext.perm) + "|" + " ".join(sol.pi_ext.perm)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def verify_lreduction(kind: str, x, samples: int = 100, seed: int = 0,
                      cap: int = DEFAULT_CAP) -> LRedReport:
    """Run both inequality checks for one source instance.

    ``x`` is a Graph for the mis3 kinds and a Sat32Instance for the
    sat32 kinds.  Sampled solutions are drawn by seeded in-bucket
    shuffles or random topological sorts, and the exact optimum is
    always included as a sample.
    """
    if kind not in KINDS:
        raise ValidationError(f"unknown kind {kind!r}; expected one of {KINDS}")
    alpha = ALPHA[kind]
    minbrk = kind.endswith("minbrk")
    rng = random.Random(seed)

    if kind.startswith("mis3"):
        if not isinstance(x, Graph):
            raise ValidationError("mis3 kinds need a Graph input")
        instance, cert = reduce_mis3(x)
        opt_source = brute_mis(x)
        extract = lambda sol: len(extract_independent_set(cert, sol))
    else:
        if not isinstance(x, Sat32Instance):
            raise ValidationError("sat32 kinds need a Sat32Instance input")
        instance, cert = reduce_sat32(x)
        opt_source = brute_maxsat(x)
        extract = lambda sol: satisfied_count(x, extract_assignment(cert, sol))

    opt_sol = oracle_align(instance, cap=cap)
    total = len(instance.markers)

    def value(sol: AlignmentSolution) -> int:
        return sol.n_brk if minbrk else sol.n_adj

    opt_target = value(opt_sol)
    report = LRedReport(kind, alpha, BETA, opt_source, opt_target, samples + 1)
    lhs1, rhs1 = report.eq1()
    if lhs1 > rhs1:
        report.violations.append(Violation("opt", "eq1", lhs1, rhs1))

    pool = [opt_sol]
    for _ in range(samples):
        ge = random_extension(instance.gamma, rng)
        pe = random_extension(instance.pi, rng)
        pool.append(AlignmentSolution.from_extensions(ge, pe))
    for sol in pool:
        val_y = value(sol)
        val_gy = extract(sol)
        lhs2 = abs(opt_source - val_gy)
        rhs2 = BETA * abs(opt_target - val_y)
        report.samples.append((_digest(sol), val_y, val_gy, lhs2, rhs2))
        if lhs2 > rhs2:
            report.violations.append(Violation(_digest(sol), "eq2", lhs2, rhs2))
    report.violations.sort(key=lambda v: v.digest)
    return report
