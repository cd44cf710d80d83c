"""End-to-end reduction: planar graph -> benign tumor graph -> edge measure.

``degree_partition`` splits vertices by degree thresholds d = ceil(n^(1/5))
and D = ceil(n^(2/5)) and deletes the few edges that keep the low-degree
side from satisfying the two-anchor condition.  ``reduce`` runs the full
chain (partition, cleaning stages, measure extraction) with every loss
recounted exactly, and certifies two inequalities on the benign result:

    #good cycles with an S,S pair  <=  coef_S(mu) * n^m
    #good cycles with a B,B pair   <=  beta(mu; P_{m+1}) * n^m

where mu(xy) = |S_xy| / sum |S_zw| and coef_S is 2*sum mu(e)^2 for m = 2
and 2m * beta(mu; C_m) otherwise.  These checks run in exact rational
arithmetic.  On tiny inputs the partition may put every vertex in B; the
measure is then undefined and the report says so rather than pretending.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .counting import count_cycles
from .errors import InvariantViolationError
from .graphs import Edge, Embedding, Graph
from .measures import EdgeMeasure, measure_to_dict, objective
from .tumor import (
    GoodCensus,
    StageAudit,
    TumorGraph,
    good_census,
    make_tumor,
    stage1,
    stage2,
    stage3,
)


@dataclass(frozen=True)
class PartitionAudit:
    d: int
    D: int
    B: tuple[int, ...]
    S: tuple[int, ...]
    removed_high: tuple[Edge, ...]  # S' to the deg >= D part of B
    removed_low: tuple[Edge, ...]   # S'' to the deg < D part of B
    cycles_lost_exact: int

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "B": list(self.B),
            "S": list(self.S),
            "removed_high": [list(e) for e in self.removed_high],
            "removed_low": [list(e) for e in self.removed_low],
            "cycles_lost_exact": self.cycles_lost_exact,
        }


def degree_partition(
    g: Graph, emb: Optional[Embedding], m: int
) -> tuple[TumorGraph, PartitionAudit]:
    """Split by degree and delete edges until every low-degree vertex has at
    most two high-degree neighbors.  The exact (2m+1)-cycle loss is recounted.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    n = g.n()
    d = math.ceil(n ** 0.2)
    D = math.ceil(n ** 0.4)
    B = {v for v in g.vertices() if g.degree(v) >= d}
    S = set(g.vertices()) - B
    before = count_cycles(g, 2 * m + 1)

    big = {v for v in B if g.degree(v) >= D}
    removed_high = sorted(
        (s, b) if s < b else (b, s)
        for s in S
        if sum(1 for u in g.neighbors(s) if u in big) >= 3
        for b in g.neighbors(s)
        if b in big
    )
    g1 = g.remove_edges(removed_high) if removed_high else g
    removed_low = sorted(
        (s, b) if s < b else (b, s)
        for s in S
        if sum(1 for u in g1.neighbors(s) if u in B) >= 3
        for b in g1.neighbors(s)
        if b in B and b not in big
    )
    g2 = g1.remove_edges(removed_low) if removed_low else g1
    lost = before - count_cycles(g2, 2 * m + 1)
    emb2 = emb.restrict(g2) if emb is not None else None
    tg = make_tumor(g2, emb2, B)
    audit = PartitionAudit(
        d=d,
        D=D,
        B=tuple(sorted(B)),
        S=tuple(sorted(S)),
        removed_high=tuple(removed_high),
        removed_low=tuple(removed_low),
        cycles_lost_exact=lost,
    )
    return tg, audit


@dataclass(frozen=True)
class BoundReport:
    m: int
    n: int
    total_cycles: int          # all (2m+1)-cycles of the input
    bad_after_partition: int   # non-good cycles right after the partition
    partition: PartitionAudit
    stages: tuple[StageAudit, ...]
    final_good: GoodCensus
    tumor_sizes: dict[str, int]
    measure: Optional[EdgeMeasure]
    coefficient: Optional[float]       # full objective at the measure
    coefficient_ss: Optional[float]
    coefficient_bb: Optional[float]
    bound: float                       # coefficient * n^m (0 if no tumors)
    chain_ok: bool
    ss_bound_ok: bool
    bb_bound_ok: bool

    @property
    def audited_losses(self) -> int:
        return self.partition.cycles_lost_exact + sum(
            a.good_through_removed for a in self.stages
        )

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "total_cycles": self.total_cycles,
            "bad_after_partition": self.bad_after_partition,
            "partition": self.partition.to_dict(),
            "stages": [a.to_dict() for a in self.stages],
            "final_good_ss": self.final_good.ss_form,
            "final_good_bb": self.final_good.bb_form,
            "tumor_sizes": self.tumor_sizes,
            "measure": None if self.measure is None else measure_to_dict(self.measure),
            "coefficient": self.coefficient,
            "coefficient_ss": self.coefficient_ss,
            "coefficient_bb": self.coefficient_bb,
            "bound": self.bound,
            "chain_ok": self.chain_ok,
            "ss_bound_ok": self.ss_bound_ok,
            "bb_bound_ok": self.bb_bound_ok,
        }


def _exact_betas(
    sizes: dict[frozenset[int], int], m: int
) -> tuple[Fraction, Fraction]:
    """(coef_S, coef_B) at the normalized tumor-size measure, exactly.

    coef_S = 2 * sum mu(e)^2 for m = 2, else 2m * beta(mu; C_m);
    coef_B = beta(mu; P_{m+1}).  Enumeration runs over the support only.
    """
    total = sum(sizes.values())
    mu = {pair: Fraction(c, total) for pair, c in sizes.items()}
    verts = sorted({v for pair in mu for v in pair})
    adj = {v: [u for u in verts if u != v and frozenset((u, v)) in mu] for v in verts}

    if m == 2:
        coef_s = 2 * sum(p * p for p in mu.values())
    else:
        coef_s = Fraction(0)
        # cycles of length m inside the support
        def cyc(path: list[int], prod: Fraction):
            nonlocal coef_s
            u = path[-1]
            if len(path) == m:
                a = path[0]
                if a in adj[u] and path[1] < u:
                    coef_s += prod * mu[frozenset((u, a))]
                return
            for w in adj[u]:
                if w > path[0] and w not in path:
                    cyc(path + [w], prod * mu[frozenset((u, w))])

        for a in verts:
            for w in adj[a]:
                if w > a:
                    cyc([a, w], mu[frozenset((a, w))])
        coef_s *= 2 * m

    coef_b = Fraction(0)

    def pth(path: list[int], prod: Fraction):
        nonlocal coef_b
        if len(path) == m + 1:
            if path[0] < path[-1]:
                coef_b += prod
            return
        for w in adj[path[-1]]:
            if w not in path:
                pth(path + [w], prod * mu[frozenset((path[-1], w))])

    for a in verts:
        pth([a], Fraction(1))
    return coef_s, coef_b


def reduce(
    g: Graph,
    emb: Optional[Embedding],
    m: int,
    B: Optional[Iterable[int]] = None,
    mode: str = "test",
) -> BoundReport:
    """Run the whole chain and certify its accounting.

    With B given, the degree partition is skipped and the supplied anchor
    set is used directly (no partition loss).  The chain inequality checked
    is:  total cycles of the input  <=  good cycles of the benign output
    + all audited exact losses + the bad-cycle count after partition."""
    n = g.n()
    k = 2 * m + 1
    total = count_cycles(g, k)

    if B is None:
        tg1, paudit = degree_partition(g, emb, m)
    else:
        tg1 = make_tumor(g, emb, B)
        paudit = PartitionAudit(
            d=0,
            D=0,
            B=tuple(sorted(tg1.B)),
            S=tuple(sorted(tg1.S)),
            removed_high=(),
            removed_low=(),
            cycles_lost_exact=0,
        )

    total1 = count_cycles(tg1.graph, k)
    good1 = good_census(tg1, m).total
    bad1 = total1 - good1

    s1, a1 = stage1(tg1, m, mode)
    s2, a2 = stage2(s1, m, mode)
    s3, a3 = stage3(s2, m, mode)
    stages = (a1, a2, a3)
    final = good_census(s3, m)

    sizes = {pair: len(members) for pair, members in s3.tumors.items()}
    tumor_sizes = {"-".join(map(str, sorted(p))): c for p, c in sorted(sizes.items(), key=lambda kv: sorted(kv[0]))}

    audited = paudit.cycles_lost_exact + sum(a.good_through_removed for a in stages)
    chain_ok = total <= final.total + audited + bad1
    if not chain_ok:
        raise InvariantViolationError(
            f"chain accounting failed: {total} > {final.total} + {audited} + {bad1}"
        )

    if not sizes:
        return BoundReport(
            m=m, n=n, total_cycles=total, bad_after_partition=bad1,
            partition=paudit, stages=stages, final_good=final,
            tumor_sizes=tumor_sizes, measure=None, coefficient=None,
            coefficient_ss=None, coefficient_bb=None, bound=0.0,
            chain_ok=chain_ok, ss_bound_ok=final.ss_form == 0,
            bb_bound_ok=final.bb_form == 0,
        )

    coef_s, coef_b = _exact_betas(sizes, m)
    nm = Fraction(n) ** m
    ss_ok = Fraction(final.ss_form) <= coef_s * nm
    bb_ok = Fraction(final.bb_form) <= coef_b * nm
    if not (ss_ok and bb_ok):
        raise InvariantViolationError("a benign-form bound failed")

    # the reported measure uses anchors relabeled 0..|B'|-1 in ascending order
    banchors = sorted(s3.B)
    relabel = {b: i for i, b in enumerate(banchors)}
    total_sz = sum(sizes.values())
    mu = EdgeMeasure(
        len(banchors),
        {
            tuple(sorted(relabel[v] for v in pair)): c / total_sz
            for pair, c in sizes.items()
        },
    )
    coefficient = objective(mu, m)
    return BoundReport(
        m=m, n=n, total_cycles=total, bad_after_partition=bad1,
        partition=paudit, stages=stages, final_good=final,
        tumor_sizes=tumor_sizes, measure=mu, coefficient=coefficient,
        coefficient_ss=float(coef_s), coefficient_bb=float(coef_b),
        bound=coefficient * n ** m, chain_ok=chain_ok,
        ss_bound_ok=bool(ss_ok), bb_bound_ok=bool(bb_ok),
    )
