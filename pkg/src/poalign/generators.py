"""Seeded random generators for graphs, SAT instances, and alignment
instances.  Identical configuration always yields identical output."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .align import AlignmentInstance
from .errors import ValidationError
from .mis3 import Graph
from .orders import (
    DagOrder,
    IntervalOrder,
    LinearOrder,
    MarkerSet,
    Order,
    WeakOrder,
)
from .sat32 import Literal, Sat32Instance, normalize_sat32

FAMILIES = ("linear", "weak", "semiorder", "interval", "partial")


@dataclass(frozen=True)
class GeneratorConfig:
    """Size and shape parameters for one generated value."""

    seed: int
    n: int
    m: int | None = None                       # graphs: edge count
    families: tuple[str, str] = ("linear", "weak")
    bucket_max: int = 3


def gen_graph(config: GeneratorConfig) -> Graph:
    """Random simple graph with maximum degree 3, by edge sampling with
    rejection."""
    if config.n < 1:
        raise ValidationError("graphs need at least one vertex")
    rng = random.Random(config.seed)
    cap_m = min(3 * config.n // 2, config.n * (config.n - 1) // 2)
    m = config.m if config.m is not None else rng.randint(0, cap_m)
    if m > cap_m:
        raise ValidationError(f"cannot fit {m} edges with degree <= 3 on {config.n} vertices")
    for _ in range(200):
        edges: set[tuple[int, int]] = set()
        degree = [0] * (config.n + 1)
        while len(edges) < m:
            candidates = [(u, v)
                          for u in range(1, config.n + 1) if degree[u] < 3
                          for v in range(u + 1, config.n + 1) if degree[v] < 3
                          if (u, v) not in edges]
            if not candidates:
                break  # dead end, restart
            e = rng.choice(candidates)
            edges.add(e)
            degree[e[0]] += 1
            degree[e[1]] += 1
        if len(edges) == m:
            return Graph(config.n, tuple(sorted(edges)))
    raise ValidationError(
        f"could not place {m} degree-3 edges on {config.n} vertices")


def gen_sat32(config: GeneratorConfig) -> Sat32Instance:
    """Random 3-occurrence 2SAT instance over n variables (n must be
    even; there are exactly m = 3n/2 clauses)."""
    n = config.n
    if n % 2:
        raise ValidationError("3n = 2m requires an even variable count")
    rng = random.Random(config.seed)
    m = 3 * n // 2
    slots = [v for v in range(1, n + 1) for _ in range(3)]
    for _ in range(1000):
        rng.shuffle(slots)
        pairs = [(slots[2 * j], slots[2 * j + 1]) for j in range(m)]
        if all(a != b for a, b in pairs):
            break
    else:
        raise ValidationError("could not distribute variable occurrences over clauses")
    polarity: dict[int, list[bool]] = {}
    for v in range(1, n + 1):
        pattern = rng.choice([[True, True, False], [True, False, False]])
        polarity[v] = pattern
    used: dict[int, int] = {v: 0 for v in range(1, n + 1)}
    clauses: list[tuple[Literal, Literal]] = []
    for a, b in pairs:
        lits = []
        for v in (a, b):
            lits.append((v, polarity[v][used[v]]))
            used[v] += 1
        clauses.append((lits[0], lits[1]))
    return normalize_sat32(clauses, n=n)


def _random_order(family: str, markers: MarkerSet, rng: random.Random,
                  bucket_max: int) -> Order:
    ids = list(markers)
    n = len(ids)
    if family == "linear":
        perm = ids[:]
        rng.shuffle(perm)
        return LinearOrder(tuple(perm), markers=markers)
    if family == "weak":
        perm = ids[:]
        rng.shuffle(perm)
        buckets = []
        while perm:
            k = rng.randint(1, min(bucket_max, len(perm)))
            buckets.append(perm[:k])
            perm = perm[k:]
        return WeakOrder(buckets, markers=markers)
    if family == "interval":
        iv = {}
        for m in ids:
            left = rng.randint(0, 2 * n)
            iv[m] = (left, left + rng.randint(1, 4))
        return IntervalOrder(iv, markers=markers)
    if family == "semiorder":
        iv = {}
        for m in ids:
            left = rng.randint(0, 2 * n)
            iv[m] = (left, left + 3)  # equal lengths keep it a semiorder
        return IntervalOrder(iv, markers=markers)
    if family == "partial":
        rank = ids[:]
        rng.shuffle(rank)
        position = {m: i for i, m in enumerate(rank)}
        relation = [(a, b) for a in ids for b in ids
                    if position[a] < position[b] and rng.random() < 0.3]
        return DagOrder(relation, markers=markers)
    raise ValidationError(f"unknown family {family!r}; expected one of {FAMILIES}")


def gen_instance(config: GeneratorConfig) -> AlignmentInstance:
    """Random alignment instance with one order per requested family."""
    if config.n < 1:
        raise ValidationError("instances need at least one marker")
    rng = random.Random(config.seed)
    markers = MarkerSet([f"m{i}" for i in range(1, config.n + 1)])
    gamma = _random_order(config.families[0], markers, rng, config.bucket_max)
    pi = _random_order(config.families[1], markers, rng, config.bucket_max)
    return AlignmentInstance(markers, gamma, pi)
