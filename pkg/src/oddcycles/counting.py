"""Exact counting of labeled-free path and cycle copies by backtracking.

Copies are unlabeled subgraphs.  Every enumeration charges one unit of a
node budget per partial extension and raises ``BudgetExceededError`` when
the budget runs out (default 10**9, overridable via the ODDCYCLE_BUDGET
environment variable or an explicit argument).

Closed forms used as oracles in the tests:
    #P_k(K_n) = n! / (2 (n-k)!)        for k >= 2
    #C_k(K_n) = n! / (2 k (n-k)!)      for k >= 3
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import BudgetExceededError
from .graphs import Graph

DEFAULT_BUDGET = 10**9


def resolve_budget(budget: Optional[int] = None) -> int:
    if budget is not None:
        if budget <= 0:
            raise ValueError("budget must be positive")
        return budget
    env = os.environ.get("ODDCYCLE_BUDGET")
    if env is not None:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"ODDCYCLE_BUDGET is not an integer: {env!r}") from exc
        if value <= 0:
            raise ValueError("ODDCYCLE_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


class _Ticker:
    __slots__ = ("left", "budget")

    def __init__(self, budget: int):
        self.left = budget
        self.budget = budget

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError(self.budget)


@dataclass(frozen=True)
class Pattern:
    kind: str  # "path" | "cycle"
    k: int     # number of vertices

    def __post_init__(self):
        if self.kind not in ("path", "cycle"):
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "cycle" and self.k < 3:
            raise ValueError("cycles need at least 3 vertices")
        if self.kind == "path" and self.k < 0:
            raise ValueError("path length cannot be negative")

    @staticmethod
    def parse(text: str) -> "Pattern":
        """Parse 'C7' or 'P4' style names (vertex counts)."""
        t = text.strip().upper()
        if len(t) < 2 or t[0] not in "CP" or not t[1:].isdigit():
            raise ValueError(f"cannot parse pattern {text!r}")
        return Pattern("cycle" if t[0] == "C" else "path", int(t[1:]))


def _cycles_anchored(
    adj: dict[int, tuple[int, ...]],
    anchor: int,
    k: int,
    tick: Callable[[], None],
    visit: Optional[Callable[[tuple[int, ...]], None]],
) -> int:
    """Count cycle copies of length k whose minimum vertex is the anchor.

    The canonical traversal direction is the one whose second vertex is
    smaller than its last, so each copy is seen exactly once.
    """
    nbrs_a = [w for w in adj[anchor] if w > anchor]
    if len(nbrs_a) < 2:
        return 0
    anchor_adj = set(nbrs_a)
    path = [anchor]
    onpath = {anchor}
    count = 0

    def rec(u: int, depth: int) -> None:
        # `depth` vertices lie on the path, the last being u
        nonlocal count
        if depth == k:
            if u in anchor_adj and path[1] < u:
                count += 1
                if visit is not None:
                    visit(tuple(path))
            return
        for w in adj[u]:
            if w > anchor and w not in onpath:
                tick()
                path.append(w)
                onpath.add(w)
                rec(w, depth + 1)
                path.pop()
                onpath.discard(w)

    for w in nbrs_a:
        tick()
        path.append(w)
        onpath.add(w)
        rec(w, 2)
        path.pop()
        onpath.discard(w)
    return count


def _paths_from(
    adj: dict[int, tuple[int, ...]],
    start: int,
    k: int,
    tick: Callable[[], None],
    visit: Optional[Callable[[tuple[int, ...]], None]],
) -> int:
    """Count path copies on k vertices starting at `start` with the smaller
    endpoint first (its canonical orientation)."""
    path = [start]
    onpath = {start}
    count = 0

    def rec(u: int, depth: int) -> None:
        nonlocal count
        if depth == k:
            if path[0] < path[-1]:
                count += 1
                if visit is not None:
                    visit(tuple(path))
            return
        for w in adj[u]:
            if w not in onpath:
                tick()
                path.append(w)
                onpath.add(w)
                rec(w, depth + 1)
                path.pop()
                onpath.discard(w)

    rec(start, 1)
    return count


def for_each_copy(
    g: Graph,
    pattern: Pattern,
    visitor: Optional[Callable[[tuple[int, ...]], None]] = None,
    budget: Optional[int] = None,
) -> int:
    """Visit each unlabeled copy of the pattern once, in canonical vertex
    order, and return the total.  Exceptions from the visitor propagate."""
    tick = _Ticker(resolve_budget(budget)).tick
    adj = dict(g.adj)
    if pattern.kind == "path":
        if pattern.k == 0:
            if visitor is not None:
                visitor(())
            return 1
        if pattern.k == 1:
            for v in adj:
                tick()
                if visitor is not None:
                    visitor((v,))
            return len(adj)
        return sum(_paths_from(adj, s, pattern.k, tick, visitor) for s in adj)
    return sum(_cycles_anchored(adj, a, pattern.k, tick, visitor) for a in adj)


def _count_chunk(args) -> int:
    adj, kind, k, anchors, budget = args
    tick = _Ticker(budget).tick
    if kind == "cycle":
        return sum(_cycles_anchored(adj, a, k, tick, None) for a in anchors)
    return sum(_paths_from(adj, s, k, tick, None) for s in anchors)


def _count(g: Graph, pattern: Pattern, budget: Optional[int], workers: int) -> int:
    if workers <= 1 or pattern.k <= 1 or g.n() < 2:
        return for_each_copy(g, pattern, None, budget)
    resolved = resolve_budget(budget)
    verts = list(g.vertices())
    chunks = [verts[i::workers] for i in range(workers) if verts[i::workers]]
    adj = dict(g.adj)
    jobs = [(adj, pattern.kind, pattern.k, chunk, resolved) for chunk in chunks]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        return sum(pool.map(_count_chunk, jobs))


def count_paths(
    g: Graph, k: int, budget: Optional[int] = None, workers: int = 1
) -> int:
    """Number of unlabeled paths on k vertices (P_0 counts once, P_1 = n)."""
    return _count(g, Pattern("path", k), budget, workers)


def count_cycles(
    g: Graph, k: int, budget: Optional[int] = None, workers: int = 1
) -> int:
    """Number of unlabeled cycles on k >= 3 vertices."""
    return _count(g, Pattern("cycle", k), budget, workers)


def count_pattern(
    g: Graph, pattern: Pattern, budget: Optional[int] = None, workers: int = 1
) -> int:
    return _count(g, pattern, budget, workers)
