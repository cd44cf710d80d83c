"""Two-colored planar graphs with bounded attachment, and their cleaning.

A *tumor graph* is a graph with a distinguished vertex set B such that every
vertex of S = V - B has at most two neighbors inside B.  S splits into
clusters by B-neighborhood: S_empty (no B-neighbor), S_x (exactly {x}) and
S_xy (exactly {x,y}); the two-anchor clusters are called tumors.

A *good* odd cycle on 2m+1 vertices is one whose cyclic B/S color sequence
has exactly one monochromatic consecutive pair (B,B or S,S); all other
consecutive pairs alternate.  The cleaning stages below rearrange a tumor
graph into *benign* form -- every S-S edge inside a single tumor -- without
ever decreasing the number of good cycles except through explicitly audited
deletions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .counting import Pattern, for_each_copy, resolve_budget, _Ticker
from .errors import (
    InvariantViolationError,
    NotATumorGraphError,
)
from .graphs import Edge, Embedding, Graph, contract_uncontract, validate_embedding, _norm_edge


class TumorGraph:
    """Graph + optional embedding + anchor set B, with cluster structure."""

    __slots__ = ("graph", "embedding", "B", "S", "clusters", "tumors", "singles", "empties")

    def __init__(self, graph: Graph, embedding: Optional[Embedding], B: Iterable[int]):
        self.graph = graph
        self.embedding = embedding
        self.B = frozenset(int(b) for b in B)
        for b in self.B:
            if not graph.has_vertex(b):
                raise ValueError(f"B contains unknown vertex {b}")
        self.S = frozenset(graph.vertices()) - self.B
        clusters: dict[int, frozenset[int]] = {}
        for s in self.S:
            anchors = frozenset(u for u in graph.neighbors(s) if u in self.B)
            if len(anchors) > 2:
                raise NotATumorGraphError(
                    f"vertex {s} has {len(anchors)} neighbors in B"
                )
            clusters[s] = anchors
        self.clusters = clusters
        tumors: dict[frozenset[int], set[int]] = {}
        singles: dict[int, set[int]] = {}
        empties: set[int] = set()
        for s, anchors in clusters.items():
            if len(anchors) == 2:
                tumors.setdefault(anchors, set()).add(s)
            elif len(anchors) == 1:
                singles.setdefault(next(iter(anchors)), set()).add(s)
            else:
                empties.add(s)
        self.tumors = {p: frozenset(ss) for p, ss in tumors.items()}
        self.singles = {x: frozenset(ss) for x, ss in singles.items()}
        self.empties = frozenset(empties)

    def tumor_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for members in self.tumors.values():
            out |= members
        return frozenset(out)

    def single_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for members in self.singles.values():
            out |= members
        return frozenset(out)

    def pair_of(self, s: int) -> frozenset[int]:
        return self.clusters[s]

    def is_b(self, v: int) -> bool:
        return v in self.B


def make_tumor(g: Graph, emb: Optional[Embedding], B: Iterable[int]) -> TumorGraph:
    """Build and validate a tumor graph.

    Beyond the defining degree condition, two consequences of planarity are
    checked rather than assumed: every vertex outside {x,y} has at most two
    neighbors inside the tumor S_xy, and at most four edges run between any
    two distinct tumors.
    """
    tg = TumorGraph(g, emb, B)
    for pair, members in tg.tumors.items():
        for z in g.vertices():
            if z in pair or z in members:
                continue
            deg_in = sum(1 for u in g.neighbors(z) if u in members)
            if deg_in > 2:
                raise InvariantViolationError(
                    f"vertex {z} has {deg_in} neighbors in one tumor"
                )
    pairs = sorted(tg.tumors, key=sorted)
    for i, p in enumerate(pairs):
        for q in pairs[i + 1:]:
            cross = sum(
                1
                for a in tg.tumors[p]
                for b in g.neighbors(a)
                if b in tg.tumors[q]
            )
            if cross > 4:
                raise InvariantViolationError(
                    f"{cross} edges between tumors {sorted(p)} and {sorted(q)}"
                )
    return tg


def is_benign(tg: TumorGraph) -> bool:
    """True iff every S-S edge lies inside one tumor."""
    for s in tg.S:
        pair_s = tg.clusters[s]
        for u in tg.graph.neighbors(s):
            if u in tg.B or u < s:
                continue
            if len(pair_s) != 2 or tg.clusters[u] != pair_s:
                return False
    return True


# ---------------------------------------------------------------------------
# good-cycle enumeration
# ---------------------------------------------------------------------------

def _enum_good_cycles(
    tg: TumorGraph,
    m: int,
    visit: Callable[[tuple[int, ...], str], None],
    budget: Optional[int] = None,
) -> int:
    """Enumerate unlabeled (2m+1)-cycles with exactly one monochromatic
    consecutive pair.  Partial paths with two such pairs are pruned.  The
    visitor receives the canonical vertex tuple and the defect kind
    ('SS' or 'BB').  Returns the count."""
    if m < 2:
        raise ValueError("need m >= 2")
    k = 2 * m + 1
    tick = _Ticker(resolve_budget(budget)).tick
    adj = dict(tg.graph.adj)
    is_b = {v: v in tg.B for v in adj}
    count = 0
    for anchor in adj:
        nbrs_a = [w for w in adj[anchor] if w > anchor]
        if len(nbrs_a) < 2:
            continue
        anchor_adj = set(nbrs_a)
        path = [anchor]
        onpath = {anchor}
        ca = is_b[anchor]

        def rec(u: int, depth: int, defects: int) -> None:
            nonlocal count
            cu = is_b[u]
            if depth == k:
                if u in anchor_adj and path[1] < u:
                    total = defects + (1 if cu == ca else 0)
                    if total == 1:
                        count += 1
                        kind = "SS" if _defect_kind(path, is_b) else "BB"
                        visit(tuple(path), kind)
                return
            for w in adj[u]:
                if w > anchor and w not in onpath:
                    d2 = defects + (1 if is_b[w] == cu else 0)
                    if d2 > 1:
                        continue
                    tick()
                    path.append(w)
                    onpath.add(w)
                    rec(w, depth + 1, d2)
                    path.pop()
                    onpath.discard(w)

        for w in nbrs_a:
            tick()
            path.append(w)
            onpath.add(w)
            rec(w, 2, 1 if is_b[w] == ca else 0)
            path.pop()
            onpath.discard(w)
    return count


def _defect_kind(path: Sequence[int], is_b: dict[int, bool]) -> bool:
    """True if the unique monochromatic pair of the cycle is S,S."""
    k = len(path)
    for i in range(k):
        a, b = path[i], path[(i + 1) % k]
        if is_b[a] == is_b[b]:
            return not is_b[a]
    raise InvariantViolationError("good cycle without a monochromatic pair")


def count_good_cycles(tg: TumorGraph, m: int, budget: Optional[int] = None) -> int:
    """Number of good (2m+1)-cycles."""
    return _enum_good_cycles(tg, m, lambda cyc, kind: None, budget)


@dataclass(frozen=True)
class GoodCensus:
    ss_form: int  # good cycles whose monochromatic pair lies in S
    bb_form: int  # good cycles whose monochromatic pair lies in B

    @property
    def total(self) -> int:
        return self.ss_form + self.bb_form


def good_census(tg: TumorGraph, m: int, budget: Optional[int] = None) -> GoodCensus:
    tally = {"SS": 0, "BB": 0}

    def visit(cyc, kind):
        tally[kind] += 1

    _enum_good_cycles(tg, m, visit, budget)
    return GoodCensus(tally["SS"], tally["BB"])


def count_good_using(
    tg: TumorGraph,
    m: int,
    edges: Iterable[Sequence[int]] = (),
    vertices: Iterable[int] = (),
    budget: Optional[int] = None,
) -> int:
    """Good cycles meeting at least one of the given edges or vertices."""
    target_e = {_norm_edge(u, v) for u, v in edges}
    target_v = set(vertices)
    hit = 0

    def visit(cyc, kind):
        nonlocal hit
        if target_v and any(v in target_v for v in cyc):
            hit += 1
            return
        if target_e:
            k = len(cyc)
            for i in range(k):
                if _norm_edge(cyc[i], cyc[(i + 1) % k]) in target_e:
                    hit += 1
                    return

    _enum_good_cycles(tg, m, visit, budget)
    return hit


# ---------------------------------------------------------------------------
# bad-cycle pattern census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleCensus:
    m: int
    total: int
    good: int
    t_sss: int      # three consecutive S
    t_2ss: int      # at least two S,S pairs (contains t_sss)
    t_bbb: int      # three consecutive B
    t_bbss: int     # B,B,S,S consecutive in some orientation
    t_1bb1ss: int   # at least one B,B pair and at least one S,S pair
    t_2bb: int      # at least two B,B pairs (contains t_bbb)
    all_covered: bool  # every non-good cycle fell into >= 1 class

    @property
    def bad(self) -> int:
        return self.total - self.good


def classify_bad_cycles(tg: TumorGraph, m: int, budget: Optional[int] = None) -> CycleCensus:
    """Full census of (2m+1)-cycles by color pattern.

    Every cycle of odd length has at least one monochromatic pair; those with
    exactly one are good, and each of the rest lands in at least one of the
    pattern classes (this coverage is recorded, not assumed).
    """
    if m < 2:
        raise ValueError("need m >= 2")
    is_b = {v: v in tg.B for v in tg.graph.vertices()}
    k = 2 * m + 1
    stats = dict(total=0, good=0, t_sss=0, t_2ss=0, t_bbb=0, t_bbss=0, t_1bb1ss=0, t_2bb=0)
    covered = True

    def visit(cyc: tuple[int, ...]) -> None:
        nonlocal covered
        c = [is_b[v] for v in cyc]
        ss = sum(1 for i in range(k) if not c[i] and not c[(i + 1) % k])
        bb = sum(1 for i in range(k) if c[i] and c[(i + 1) % k])
        stats["total"] += 1
        if ss + bb == 1:
            stats["good"] += 1
            return
        in_any = False
        if any(not c[i] and not c[(i + 1) % k] and not c[(i + 2) % k] for i in range(k)):
            stats["t_sss"] += 1
            in_any = True
        if ss >= 2:
            stats["t_2ss"] += 1
            in_any = True
        if any(c[i] and c[(i + 1) % k] and c[(i + 2) % k] for i in range(k)):
            stats["t_bbb"] += 1
            in_any = True
        fwd = any(
            c[i] and c[(i + 1) % k] and not c[(i + 2) % k] and not c[(i + 3) % k]
            for i in range(k)
        )
        rev = any(
            c[i] and c[(i - 1) % k] and not c[(i - 2) % k] and not c[(i - 3) % k]
            for i in range(k)
        )
        if fwd or rev:
            stats["t_bbss"] += 1
            in_any = True
        if ss >= 1 and bb >= 1:
            stats["t_1bb1ss"] += 1
            in_any = True
        if bb >= 2:
            stats["t_2bb"] += 1
            in_any = True
        covered = covered and in_any

    for_each_copy(tg.graph, Pattern("cycle", k), visit, budget)
    return CycleCensus(m=m, all_covered=covered, **stats)


# ---------------------------------------------------------------------------
# separation: make the tumor-incidence graph on B a matching
# ---------------------------------------------------------------------------

def _tumor_incidence(tg: TumorGraph) -> dict[int, set[int]]:
    """Auxiliary graph on B: x ~ y iff the tumor S_xy is nonempty."""
    t: dict[int, set[int]] = {b: set() for b in tg.B}
    for pair in tg.tumors:
        x, y = sorted(pair)
        t[x].add(y)
        t[y].add(x)
    return t


def _is_cyclic_interval(positions: set[int], length: int) -> bool:
    """True iff the position set is a nonempty proper contiguous arc of Z_length."""
    if not positions or len(positions) >= length:
        return False
    boundaries = sum(1 for i in positions if (i + 1) % length not in positions)
    return boundaries == 1


def separate(tg: TumorGraph) -> tuple[TumorGraph, dict[int, tuple[int, ...]]]:
    """Split high-incidence anchors until the tumor-incidence graph on B is a
    matching plus isolated vertices.

    Each step picks the anchor x of maximum incidence degree (smallest label
    on ties), finds a partner y whose tumor members form a proper contiguous
    arc of x's rotation (guaranteed to exist in a planar embedding; smallest
    such y is used) and hands that arc to a fresh vertex x'.  Returns the
    separated tumor graph and a map from each original anchor to the set of
    vertices it was split into.  |B'| <= 2 * (#incidence edges) + #isolated.
    """
    if tg.embedding is None:
        raise ValueError("separation needs an embedding")
    g, emb = tg.graph, tg.embedding
    B = set(tg.B)
    origin = {b: [b] for b in tg.B}
    owner = {b: b for b in tg.B}
    cur = TumorGraph(g, emb, B)
    inc0 = _tumor_incidence(cur)
    edges0 = sum(len(v) for v in inc0.values()) // 2
    iso0 = sum(1 for v in inc0.values() if not v)
    guard = 2 * edges0 + iso0 + len(B) + 4

    for _ in range(guard + 1):
        inc = _tumor_incidence(cur)
        deg = {b: len(inc[b]) for b in cur.B}
        worst = max(deg.values(), default=0)
        if worst <= 1:
            break
        x = min(b for b in cur.B if deg[b] == worst)
        rot_x = emb.rot(x)
        tlist = [
            s
            for s in rot_x
            if s in cur.S and len(cur.clusters[s]) == 2 and x in cur.clusters[s]
        ]
        L = len(tlist)
        chosen = None
        for y in sorted(inc[x]):
            pair = frozenset((x, y))
            pos = {i for i, s in enumerate(tlist) if cur.clusters[s] == pair}
            if _is_cyclic_interval(pos, L):
                chosen = (y, pos)
                break
        if chosen is None:
            raise InvariantViolationError(
                f"no tumor of anchor {x} forms a contiguous arc of its rotation"
            )
        y, pos = chosen
        # walk the interval in cyclic order: start just after a boundary
        start = next(i for i in pos if (i - 1) % L not in pos)
        ordered = [tlist[(start + j) % L] for j in range(len(pos))]
        # the moved arc runs in x's full rotation from the first to the last
        # interval member (anything interleaved moves along with it)
        i0 = rot_x.index(ordered[0])
        i1 = rot_x.index(ordered[-1])
        span = (i1 - i0) % len(rot_x) + 1
        arc = [rot_x[(i0 + j) % len(rot_x)] for j in range(span)]
        if len(arc) >= len(rot_x):
            raise InvariantViolationError("split arc would consume the whole rotation")

        xp = max(g.vertices()) + 1
        rotation = {v: list(emb.rot(v)) for v in g.vertices()}
        arc_set = set(arc)
        rotation[x] = [v for v in rotation[x] if v not in arc_set]
        rotation[xp] = arc
        for a in arc:
            rotation[a] = [xp if b == x else b for b in rotation[a]]
        g = Graph(rotation)
        emb = Embedding(rotation)
        if not validate_embedding(g, emb).planar:
            raise InvariantViolationError("separation split broke planarity")
        B.add(xp)
        root = owner[x]
        owner[xp] = root
        origin[root].append(xp)
        cur = TumorGraph(g, emb, B)
    else:
        raise InvariantViolationError("separation failed to terminate")

    inc = _tumor_incidence(cur)
    if any(len(v) > 1 for v in inc.values()):
        raise InvariantViolationError("separation left an anchor with two tumors")
    if len(cur.B) > 2 * edges0 + iso0:
        raise InvariantViolationError("separation exceeded its size bound")
    return make_tumor(g, emb, B), {b: tuple(sorted(vs)) for b, vs in origin.items()}


# ---------------------------------------------------------------------------
# cleaning stages
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StageAudit:
    stage: str
    removed_edges: tuple[Edge, ...]
    removed_vertices: tuple[int, ...]
    promoted_vertices: tuple[int, ...]
    rewrites: tuple[tuple[int, int, int, int], ...]
    good_before: int
    good_after: int
    good_through_removed: int

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "removed_edges": [list(e) for e in self.removed_edges],
            "removed_vertices": list(self.removed_vertices),
            "promoted_vertices": list(self.promoted_vertices),
            "rewrites": [list(r) for r in self.rewrites],
            "good_before": self.good_before,
            "good_after": self.good_after,
            "good_through_removed": self.good_through_removed,
        }


def _need_embedding(tg: TumorGraph) -> Embedding:
    if tg.embedding is None:
        raise ValueError("cleaning stages need an embedding")
    return tg.embedding


def _check_mode(mode: str) -> bool:
    if mode not in ("test", "fast"):
        raise ValueError("mode must be 'test' or 'fast'")
    return mode == "test"


def is_stage1(tg: TumorGraph) -> bool:
    """No empty-cluster vertices, and the one-anchor vertices independent."""
    if tg.empties:
        return False
    sing = tg.single_vertices()
    return not any(u in sing for s in sing for u in tg.graph.neighbors(s))


def is_stage2(tg: TumorGraph) -> bool:
    """Stage-1 plus: no edges between distinct tumors, and every one-anchor
    vertex has at most one tumor neighbor, in a tumor avoiding its anchor."""
    if not is_stage1(tg):
        return False
    tv = tg.tumor_vertices()
    for s in tv:
        for u in tg.graph.neighbors(s):
            if u in tv and u > s and tg.clusters[u] != tg.clusters[s]:
                return False
    for x, members in tg.singles.items():
        for s in members:
            tn = [u for u in tg.graph.neighbors(s) if u in tv]
            if len(tn) > 1:
                return False
            if tn and x in tg.clusters[tn[0]]:
                return False
    return True


def _delete_edges_audited(
    tg: TumorGraph, m: int, edges: list[Edge], testing: bool
) -> tuple[TumorGraph, int]:
    """Remove edges, returning the new tumor graph and the exact number of
    good cycles that passed through them."""
    if not edges:
        return tg, 0
    loss = count_good_using(tg, m, edges=edges)
    g2 = tg.graph.remove_edges(edges)
    emb2 = tg.embedding.restrict(g2) if tg.embedding is not None else None
    tg2 = make_tumor(g2, emb2, tg.B)
    if testing:
        before = count_good_cycles(tg, m)
        after = count_good_cycles(tg2, m)
        if after != before - loss:
            raise InvariantViolationError(
                f"edge deletion accounting broke: {before} - {loss} != {after}"
            )
    return tg2, loss


def _rewrite(
    tg: TumorGraph, m: int, path: tuple[int, int, int, int], testing: bool
) -> TumorGraph:
    """Apply one contraction+split along path and rebuild the tumor graph,
    asserting (in test mode) that the good-cycle count did not drop."""
    emb = _need_embedding(tg)
    before = count_good_cycles(tg, m) if testing else None
    g2, emb2 = contract_uncontract(tg.graph, emb, path)
    tg2 = make_tumor(g2, emb2, tg.B)
    if testing:
        after = count_good_cycles(tg2, m)
        if after < before:
            raise InvariantViolationError(
                f"rewrite {path} dropped good cycles {before} -> {after}"
            )
    return tg2


def stage1(
    tg: TumorGraph, m: int, mode: str = "test"
) -> tuple[TumorGraph, StageAudit]:
    """Delete anchorless vertices and edges inside one single-anchor cluster
    (no good cycle passes through either), then rewrite edges between
    distinct single-anchor clusters until those clusters are independent."""
    testing = _check_mode(mode)
    _need_embedding(tg)
    good_before = count_good_cycles(tg, m)

    removed_vertices = tuple(sorted(tg.empties))
    removed_edges: list[Edge] = []
    for x, members in sorted(tg.singles.items()):
        for s in sorted(members):
            for u in tg.graph.neighbors(s):
                if u > s and u in members:
                    removed_edges.append((s, u))
    loss = count_good_using(tg, m, edges=removed_edges, vertices=removed_vertices)
    if loss != 0:
        raise InvariantViolationError("a good cycle met supposedly inert material")
    g2 = tg.graph.remove_edges(removed_edges).remove_vertices(removed_vertices)
    emb2 = tg.embedding.restrict(g2)
    cur = make_tumor(g2, emb2, tg.B)
    if testing and count_good_cycles(cur, m) != good_before:
        raise InvariantViolationError("inert deletion changed the good count")

    rewrites: list[tuple[int, int, int, int]] = []
    while True:
        sing = cur.single_vertices()
        cand = None
        for u, v in sorted(cur.graph.edges()):
            if u in sing and v in sing and cur.clusters[u] != cur.clusters[v]:
                cand = (u, v)
                break
        if cand is None:
            break
        u, v = cand
        x = next(iter(cur.clusters[u]))
        y = next(iter(cur.clusters[v]))
        n_sing = len(sing)
        cur = _rewrite(cur, m, (x, u, v, y), testing)
        rewrites.append((x, u, v, y))
        if len(cur.single_vertices()) != n_sing - 2:
            raise InvariantViolationError("stage 1 rewrite did not shrink the singles")

    if not is_stage1(cur):
        raise InvariantViolationError("stage 1 postcondition failed")
    audit = StageAudit(
        stage="stage1",
        removed_edges=tuple(removed_edges),
        removed_vertices=removed_vertices,
        promoted_vertices=(),
        rewrites=tuple(rewrites),
        good_before=good_before,
        good_after=count_good_cycles(cur, m),
        good_through_removed=0,
    )
    return cur, audit


def stage2(
    tg: TumorGraph, m: int, mode: str = "test"
) -> tuple[TumorGraph, StageAudit]:
    """Detach over-attached single-anchor vertices from the tumors, rewrite
    single-to-own-tumor edges, then delete the (few) edges between distinct
    tumors.  Requires a stage-1 input."""
    testing = _check_mode(mode)
    _need_embedding(tg)
    if not is_stage1(tg):
        raise ValueError("stage 2 needs a stage-1 input")
    good_before = count_good_cycles(tg, m)
    tv = tg.tumor_vertices()

    bad_set: set[int] = set()
    for x, members in tg.singles.items():
        for s in members:
            tn = [u for u in tg.graph.neighbors(s) if u in tv]
            if len(tn) >= 3:
                bad_set.add(s)
                continue
            pairs = {tg.clusters[u] for u in tn}
            if len(pairs) >= 2:
                bad_set.add(s)
                continue
            if len(tn) == 2 and pairs and x not in next(iter(pairs)):
                bad_set.add(s)
    r1 = sorted(
        _norm_edge(s, u)
        for s in bad_set
        for u in tg.graph.neighbors(s)
        if u in tv
    )
    cur, loss1 = _delete_edges_audited(tg, m, r1, testing)

    rewrites: list[tuple[int, int, int, int]] = []
    while True:
        sing = cur.single_vertices()
        tvc = cur.tumor_vertices()
        cand = None
        for a, b in sorted(cur.graph.edges()):
            for u, v in ((a, b), (b, a)):
                if u in sing and v in tvc:
                    x = next(iter(cur.clusters[u]))
                    if x in cur.clusters[v]:
                        cand = (u, v, x)
                        break
            if cand:
                break
        if cand is None:
            break
        u, v, x = cand
        y = next(iter(cur.clusters[v] - {x}))
        allowed = {x} | set(cur.tumors[cur.clusters[v]])
        common = set(cur.graph.neighbors(u)) & set(cur.graph.neighbors(v))
        if not common <= allowed:
            raise InvariantViolationError(
                f"rewrite precondition failed at edge ({u},{v}): "
                f"stray common neighbors {sorted(common - allowed)}"
            )
        n_sing = len(sing)
        cur = _rewrite(cur, m, (x, u, v, y), testing)
        rewrites.append((x, u, v, y))
        if len(cur.single_vertices()) != n_sing - 1:
            raise InvariantViolationError("stage 2 rewrite did not shrink the singles")

    tvc = cur.tumor_vertices()
    r2 = sorted(
        (s, u)
        for s in tvc
        for u in cur.graph.neighbors(s)
        if u in tvc and u > s and cur.clusters[u] != cur.clusters[s]
    )
    cur, loss2 = _delete_edges_audited(cur, m, r2, testing)

    if not is_stage2(cur):
        raise InvariantViolationError("stage 2 postcondition failed")
    audit = StageAudit(
        stage="stage2",
        removed_edges=tuple(r1 + r2),
        removed_vertices=(),
        promoted_vertices=(),
        rewrites=tuple(rewrites),
        good_before=good_before,
        good_after=count_good_cycles(cur, m),
        good_through_removed=loss1 + loss2,
    )
    return cur, audit


def stage3(
    tg: TumorGraph, m: int, mode: str = "test"
) -> tuple[TumorGraph, StageAudit]:
    """Promote tumor vertices that still touch single-anchor clusters into B.

    Let Z be the tumor vertices with a neighbor in some single-anchor
    cluster.  Their remaining in-tumor edges are deleted (audited), then Z
    joins B; each single that touched z in S_wz-fashion becomes a tumor
    vertex of the new pair.  The result is benign, and |B'| <= 3|B|.
    The audit also charges good cycles lost purely to the recoloring."""
    testing = _check_mode(mode)
    _need_embedding(tg)
    if not is_stage2(tg):
        raise ValueError("stage 3 needs a stage-2 input")
    good_before = count_good_cycles(tg, m)
    tv = tg.tumor_vertices()
    sing = tg.single_vertices()

    Z = set()
    for z in tv:
        touching = [w for w in tg.graph.neighbors(z) if w in sing]
        for w in touching:
            anchor = next(iter(tg.clusters[w]))
            if anchor in tg.clusters[z]:
                raise InvariantViolationError(
                    "stage-2 input has a single touching a tumor over its own anchor"
                )
        if touching:
            Z.add(z)

    r = sorted(
        _norm_edge(z, u) for z in Z for u in tg.graph.neighbors(z) if u in tv
    )
    loss_r = count_good_using(tg, m, edges=r)
    g2 = tg.graph.remove_edges(r)
    emb2 = tg.embedding.restrict(g2)
    mid = make_tumor(g2, emb2, tg.B)
    if testing and count_good_cycles(mid, m) != good_before - loss_r:
        raise InvariantViolationError("stage 3 deletion accounting broke")

    new_b = set(tg.B) | Z
    # cycles good under the old coloring that the promotion declassifies
    reclass = 0

    def visit(cyc, kind):
        nonlocal reclass
        k = len(cyc)
        c = [v in new_b for v in cyc]
        mono = sum(1 for i in range(k) if c[i] == c[(i + 1) % k])
        if mono != 1:
            reclass += 1

    _enum_good_cycles(mid, m, visit)

    out = make_tumor(g2, emb2, new_b)
    if not is_benign(out):
        raise InvariantViolationError("stage 3 output is not benign")
    if len(out.B) > 3 * len(tg.B):
        raise InvariantViolationError("stage 3 grew B past three times its size")
    audit = StageAudit(
        stage="stage3",
        removed_edges=tuple(r),
        removed_vertices=(),
        promoted_vertices=tuple(sorted(Z)),
        rewrites=(),
        good_before=good_before,
        good_after=count_good_cycles(out, m),
        good_through_removed=loss_r + reclass,
    )
    return out, audit
