"""Block DP and oracle: spec examples, brute-force equivalence, and
feasibility invariants."""

import random

import pytest

from conftest import brute_best_alignment, brute_extensions, count_adj_raw
from poalign.align import (
    AlignmentInstance,
    AlignmentSolution,
    DpTable,
    dp_align_linear_weak,
    dp_recurrence,
    oracle_align,
    partition_blocks,
)
from poalign.errors import CapExceededError, MarkerSetMismatchError, ValidationError
from poalign.orders import (
    DagOrder,
    IntervalOrder,
    LinearOrder,
    MarkerSet,
    WeakOrder,
    count_adjacencies,
    is_linear_extension,
)


def random_linear_weak(rng, max_n=8, max_bucket=3):
    n = rng.randint(1, max_n)
    ms = [f"m{i}" for i in range(n)]
    perm = ms[:]
    rng.shuffle(perm)
    gamma = LinearOrder(perm)
    rest = ms[:]
    rng.shuffle(rest)
    buckets = []
    while rest:
        k = rng.randint(1, min(max_bucket, len(rest)))
        buckets.append(rest[:k])
        rest = rest[k:]
    return gamma, WeakOrder(buckets, markers=gamma.markers)


class TestPartitionBlocks:
    def test_contiguous_bucket_is_one_block(self):
        g = LinearOrder("abcd")
        part = partition_blocks(WeakOrder([{"a", "b"}, {"c", "d"}]), g)
        assert [b.markers for b in part.buckets[0]] == [("a", "b")]

    def test_non_contiguous_bucket_splits(self):
        g = LinearOrder("abcd")
        part = partition_blocks(WeakOrder([{"a", "c"}, {"b", "d"}]), g)
        assert [b.markers for b in part.buckets[0]] == [("a",), ("c",)]

    def test_whole_string(self):
        g = LinearOrder("abcd")
        part = partition_blocks(WeakOrder([{"a", "b", "c", "d"}]), g)
        assert [b.markers for b in part.buckets[0]] == [("a", "b", "c", "d")]
        assert part.internal(0) == 3

    def test_block_order_matches_gamma_substring(self):
        g = LinearOrder("dcba")
        part = partition_blocks(WeakOrder([{"a", "b", "c", "d"}]), g)
        assert part.buckets[0][0].markers == ("d", "c", "b", "a")

    def test_mismatch(self):
        with pytest.raises(MarkerSetMismatchError):
            partition_blocks(WeakOrder([{"a"}]), LinearOrder("ab"))

    def test_maximality(self):
        rng = random.Random(2)
        for _ in range(50):
            gamma, pi = random_linear_weak(rng)
            part = partition_blocks(pi, gamma)
            for blocks in part.buckets:
                starts = {b.start for b in blocks}
                for b in blocks:
                    assert b.end + 1 not in starts, "two blocks are gamma-consecutive"


class TestDpRecurrence:
    def test_single_bucket_single_block(self):
        g = LinearOrder("abcd")
        part = partition_blocks(WeakOrder([{"a", "b", "c", "d"}]), g)
        table = DpTable()
        assert dp_recurrence(0, 0, table, part) == 3

    def test_connected_transition(self):
        g = LinearOrder("abcd")
        part = partition_blocks(WeakOrder([{"a", "b"}, {"c", "d"}]), g)
        table = DpTable()
        dp_recurrence(0, 0, table, part)
        assert dp_recurrence(1, 0, table, part) == 3

    def test_split_buckets(self):
        g = LinearOrder("abcd")
        part = partition_blocks(WeakOrder([{"b", "d"}, {"a", "c"}]), g)
        table = DpTable()
        for b in range(len(part.buckets[0])):
            dp_recurrence(0, b, table, part)
        vals = [dp_recurrence(1, b, table, part)
                for b in range(len(part.buckets[1]))]
        assert max(vals) == 1


class TestDpAlign:
    def test_spec_examples(self):
        g = LinearOrder("abcd")
        assert dp_align_linear_weak(g, WeakOrder([{"a", "b"}, {"c", "d"}])).n_adj == 3
        assert dp_align_linear_weak(g, WeakOrder([{"b", "d"}, {"a", "c"}])).n_adj == 1
        assert dp_align_linear_weak(LinearOrder("abc"),
                                    WeakOrder([{"a", "b", "c"}])).n_adj == 2

    def test_reconstruction_is_deterministic_and_feasible(self):
        g = LinearOrder("abcd")
        pi = WeakOrder([{"b", "d"}, {"a", "c"}])
        sol = dp_align_linear_weak(g, pi)
        assert sol.pi_ext.perm == ("d", "b", "c", "a")
        assert is_linear_extension(sol.pi_ext, pi)
        assert sol.gamma_ext is g

    def test_matches_double_enumeration_on_200_instances(self):
        rng = random.Random(20260810)
        for _ in range(200):
            gamma, pi = random_linear_weak(rng)
            sol = dp_align_linear_weak(gamma, pi)
            assert is_linear_extension(sol.pi_ext, pi)
            assert sol.n_adj + sol.n_brk == len(gamma.markers) - 1
            assert sol.n_adj == brute_best_alignment(gamma, pi)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            dp_align_linear_weak(LinearOrder(()), WeakOrder([]))

    def test_no_within_bucket_adjacency_across_blocks(self):
        # any block-by-block ordering realizes no adjacency joining two
        # blocks of the same bucket
        import itertools
        rng = random.Random(8)
        for _ in range(30):
            gamma, pi = random_linear_weak(rng, max_n=6)
            part = partition_blocks(pi, gamma)
            for bucket_idx, blocks in enumerate(part.buckets):
                if len(blocks) > 4:
                    continue
                for order in itertools.permutations(range(len(blocks))):
                    seq = []
                    for other_idx, other_blocks in enumerate(part.buckets):
                        if other_idx == bucket_idx:
                            for i in order:
                                seq.extend(blocks[i].markers)
                        else:
                            for b in other_blocks:
                                seq.extend(b.markers)
                    ext = LinearOrder(tuple(seq), markers=gamma.markers)
                    pairs = set(zip(seq, seq[1:]))
                    block_of = {}
                    for i, b in enumerate(blocks):
                        for m in b.markers:
                            block_of[m] = i
                    for a, b in pairs & set(zip(gamma.perm, gamma.perm[1:])):
                        if a in block_of and b in block_of:
                            assert block_of[a] == block_of[b]


class TestOracle:
    def test_both_linear(self):
        inst = AlignmentInstance(MarkerSet("abc"), LinearOrder("abc"),
                                 LinearOrder("bac", markers=MarkerSet("abc")))
        sol = oracle_align(inst)
        assert sol.n_adj == count_adjacencies(inst.gamma, inst.pi)

    def test_dag_example(self):
        pi = DagOrder([("a", "c")], markers=MarkerSet("abc"))
        inst = AlignmentInstance(MarkerSet("abc"), LinearOrder("abc"), pi)
        sol = oracle_align(inst)
        assert sol.n_adj == 2
        assert sol.pi_ext.perm == ("a", "b", "c")

    def test_matches_brute_on_mixed_families(self):
        rng = random.Random(99)
        for _ in range(40):
            n = rng.randint(1, 6)
            ms = MarkerSet([f"m{i}" for i in range(n)])
            iv = {m: (rng.randint(0, 6), 0) for m in ms}
            iv = {m: (l, l + rng.randint(1, 3)) for m, (l, _) in iv.items()}
            pi = IntervalOrder(iv, markers=ms)
            rel = [(a, b) for a in ms for b in ms if a < b and rng.random() < 0.4]
            gamma = DagOrder(rel, markers=ms)
            inst = AlignmentInstance(ms, gamma, pi)
            sol = oracle_align(inst)
            assert is_linear_extension(sol.gamma_ext, gamma)
            assert is_linear_extension(sol.pi_ext, pi)
            assert sol.n_adj == brute_best_alignment(gamma, pi)
            assert sol.n_adj + sol.n_brk == n - 1

    def test_weak_weak_matches_brute(self):
        rng = random.Random(41)
        for _ in range(30):
            _, a = random_linear_weak(rng, max_n=6)
            _, b = random_linear_weak(rng, max_n=6)
            if a.markers.ids != b.markers.ids:
                continue
            inst = AlignmentInstance(a.markers, a, b)
            assert oracle_align(inst).n_adj == brute_best_alignment(a, b)

    def test_deterministic(self):
        rng = random.Random(17)
        gamma, pi = random_linear_weak(rng, max_n=7)
        iv_pi = DagOrder([(a, b) for a in gamma.markers for b in gamma.markers
                          if a != b and pi.precedes(a, b)], markers=gamma.markers)
        inst = AlignmentInstance(gamma.markers, iv_pi,
                                 DagOrder([], markers=gamma.markers))
        s1 = oracle_align(inst, cap=10**6)
        s2 = oracle_align(inst, cap=10**6)
        assert s1 == s2

    def test_lexicographic_tie_break(self):
        # an antichain against itself: every pair of identical
        # permutations is optimal, the lex-smallest pair must win
        ms = MarkerSet("abc")
        inst = AlignmentInstance(ms, DagOrder([], markers=ms),
                                 DagOrder([], markers=ms))
        sol = oracle_align(inst)
        assert sol.gamma_ext.perm == ("a", "b", "c")
        assert sol.pi_ext.perm == ("a", "b", "c")
        assert sol.n_adj == 2

    def test_cap_exceeded_carries_best(self):
        ms = MarkerSet([f"m{i}" for i in range(6)])
        inst = AlignmentInstance(ms, DagOrder([], markers=ms),
                                 DagOrder([], markers=ms))
        with pytest.raises(CapExceededError) as err:
            oracle_align(inst, cap=10)
        assert err.value.best is None or isinstance(err.value.best, AlignmentSolution)

    def test_monotone_under_isolated_marker(self):
        rng = random.Random(4)
        for _ in range(20):
            n = rng.randint(1, 5)
            ms = [f"m{i}" for i in range(n)]
            rel_g = [(a, b) for a in ms for b in ms if a < b and rng.random() < 0.4]
            rel_p = [(a, b) for a in ms for b in ms if a < b and rng.random() < 0.4]
            base = MarkerSet(ms)
            inst = AlignmentInstance(base, DagOrder(rel_g, markers=base),
                                     DagOrder(rel_p, markers=base))
            bigger = MarkerSet(ms + ["zz"])
            inst2 = AlignmentInstance(bigger, DagOrder(rel_g, markers=bigger),
                                      DagOrder(rel_p, markers=bigger))
            assert oracle_align(inst2).n_adj >= oracle_align(inst).n_adj
