"""Seeded generators: determinism and structural validity."""

import pytest

from poalign.errors import ValidationError
from poalign.generators import GeneratorConfig, gen_graph, gen_instance, gen_sat32
from poalign.orders import (
    DagOrder,
    IntervalOrder,
    LinearOrder,
    OrderFamily,
    WeakOrder,
    classify,
)
from poalign.sat32 import normalize_sat32


class TestGraph:
    def test_deterministic(self):
        c = GeneratorConfig(seed=42, n=9)
        assert gen_graph(c) == gen_graph(c)

    def test_degree_bound(self):
        for seed in range(50):
            g = gen_graph(GeneratorConfig(seed=seed, n=3 + seed % 8))
            assert g.max_degree() <= 3

    def test_explicit_m_including_cubic(self):
        g = gen_graph(GeneratorConfig(seed=0, n=8, m=12))
        assert g.m == 12 and g.max_degree() <= 3

    def test_infeasible_m(self):
        with pytest.raises(ValidationError):
            gen_graph(GeneratorConfig(seed=0, n=4, m=7))


class TestSat:
    def test_deterministic(self):
        c = GeneratorConfig(seed=5, n=6)
        assert gen_sat32(c) == gen_sat32(c)

    def test_valid_instances(self):
        for seed in range(50):
            sat = gen_sat32(GeneratorConfig(seed=seed, n=2 + 2 * (seed % 5)))
            # re-normalization must accept its own output unchanged
            again = normalize_sat32(list(sat.clauses), n=sat.n)
            assert again == sat
            assert 3 * sat.n == 2 * sat.m

    def test_odd_n_rejected(self):
        with pytest.raises(ValidationError):
            gen_sat32(GeneratorConfig(seed=0, n=3))


class TestInstances:
    def test_deterministic(self):
        c = GeneratorConfig(seed=9, n=6, families=("interval", "partial"))
        a, b = gen_instance(c), gen_instance(c)
        assert a.gamma == b.gamma and a.pi == b.pi

    def test_requested_families(self):
        hierarchy = {
            "linear": {OrderFamily.LINEAR},
            "weak": {OrderFamily.LINEAR, OrderFamily.WEAK},
            "semiorder": {OrderFamily.LINEAR, OrderFamily.WEAK,
                          OrderFamily.SEMIORDER},
            "interval": {OrderFamily.LINEAR, OrderFamily.WEAK,
                         OrderFamily.SEMIORDER, OrderFamily.INTERVAL},
            "partial": set(OrderFamily),
        }
        types = {"linear": LinearOrder, "weak": WeakOrder,
                 "semiorder": IntervalOrder, "interval": IntervalOrder,
                 "partial": DagOrder}
        for fam, allowed in hierarchy.items():
            for seed in range(10):
                inst = gen_instance(GeneratorConfig(seed=seed, n=5,
                                                    families=(fam, "linear")))
                assert isinstance(inst.gamma, types[fam])
                assert classify(inst.gamma) in allowed

    def test_bucket_bound(self):
        inst = gen_instance(GeneratorConfig(seed=1, n=12,
                                            families=("weak", "weak"),
                                            bucket_max=2))
        assert all(len(b) <= 2 for b in inst.gamma.buckets)

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            gen_instance(GeneratorConfig(seed=0, n=3, families=("linear", "total")))
