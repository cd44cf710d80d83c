import math

import pytest

from conftest import random_tumor_instance
from oddcycles.blowups import BlowupSpec, build_blowup
from oddcycles.graphs import generate_planar
from oddcycles.pipeline import degree_partition, reduce


def test_degree_partition_thresholds():
    g, emb = generate_planar(20, 1, 0.2)
    tg, audit = degree_partition(g, emb, 2)
    assert audit.d == math.ceil(20 ** 0.2)
    assert audit.D == math.ceil(20 ** 0.4)
    assert set(audit.B) | set(audit.S) == set(g.vertices())
    # every surviving low-degree vertex has at most two anchor neighbors
    for s in tg.S:
        assert sum(1 for u in tg.graph.neighbors(s) if u in tg.B) <= 2


def test_degree_partition_may_take_everything():
    """At desk scale d is tiny, so B can swallow the whole graph; the
    report must say so rather than invent a measure."""
    g, emb = generate_planar(12, 0, 0.0)
    rep = reduce(g, emb, 2)
    if not rep.tumor_sizes:
        assert rep.measure is None and rep.bound == 0.0
    assert rep.chain_ok


def test_reduce_blowup_uniform_measure():
    tg = build_blowup(BlowupSpec(3, 3))
    rep = reduce(tg.graph, tg.embedding, 3, B=tg.B)
    assert rep.measure is not None
    assert all(abs(p - 1 / 3) < 1e-12 for p in rep.measure.mass.values())
    assert abs(rep.coefficient - 2 / 9) < 1e-12
    assert abs(rep.bound - 384.0) < 1e-9
    assert rep.final_good.total == 108
    assert rep.bound >= rep.final_good.total
    assert rep.chain_ok and rep.ss_bound_ok and rep.bb_bound_ok


def test_reduce_chain_accounting_random():
    for seed in (0, 3, 8):
        tg = random_tumor_instance(seed, 8, 16)
        for m in (2, 3):
            rep = reduce(tg.graph, tg.embedding, m, B=tg.B)
            assert rep.chain_ok and rep.ss_bound_ok and rep.bb_bound_ok
            assert rep.total_cycles <= (
                rep.final_good.total + rep.audited_losses + rep.bad_after_partition
            )


def test_reduce_report_serializes():
    tg = build_blowup(BlowupSpec(2, 3))
    rep = reduce(tg.graph, tg.embedding, 2, B=tg.B)
    d = rep.to_dict()
    assert d["m"] == 2 and "partition" in d and len(d["stages"]) == 3
    assert d["measure"] is not None


def test_reduce_rejects_small_m():
    tg = build_blowup(BlowupSpec(2, 2))
    with pytest.raises(ValueError):
        reduce(tg.graph, tg.embedding, 1, B=tg.B)
