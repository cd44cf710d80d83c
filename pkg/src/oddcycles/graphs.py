"""Undirected graphs with combinatorial embeddings (rotation systems).

A graph is a finite simple undirected graph over integer vertex labels.
An embedding assigns each vertex a cyclic order of its neighbors; planarity
is certified purely combinatorially by tracing faces and checking Euler's
relation per connected component, so no geometry is ever stored.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import InvariantViolationError, MalformedEmbeddingError

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph.  Adjacency lists are kept sorted."""

    __slots__ = ("_adj",)

    def __init__(self, adj: Mapping[int, Iterable[int]]):
        cleaned: dict[int, tuple[int, ...]] = {}
        for v in sorted(adj):
            nbrs = sorted(set(adj[v]))
            if v in nbrs:
                raise ValueError(f"loop at vertex {v}")
            cleaned[int(v)] = tuple(int(u) for u in nbrs)
        for v, nbrs in cleaned.items():
            for u in nbrs:
                if u not in cleaned or v not in cleaned[u]:
                    raise ValueError(f"asymmetric adjacency: {v}->{u}")
        self._adj = cleaned

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_edges(vertices: Iterable[int], edges: Iterable[Sequence[int]]) -> "Graph":
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u},{v}) uses unknown vertex")
            adj[u].add(v)
            adj[v].add(u)
        return Graph(adj)

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph({v: [u for u in range(n) if u != v] for v in range(n)})

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return Graph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)])

    # -- accessors ---------------------------------------------------------

    @property
    def adj(self) -> Mapping[int, tuple[int, ...]]:
        return self._adj

    def vertices(self) -> tuple[int, ...]:
        return tuple(self._adj)

    def n(self) -> int:
        return len(self._adj)

    def edges(self) -> list[Edge]:
        return [(v, u) for v in self._adj for u in self._adj[v] if v < u]

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n()}, e={self.edge_count()})"

    # -- immutable edits ---------------------------------------------------

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        gone = {_norm_edge(u, v) for u, v in edges}
        for u, v in gone:
            if not self.has_edge(u, v):
                raise ValueError(f"edge ({u},{v}) not present")
        return Graph(
            {
                v: [u for u in nbrs if _norm_edge(u, v) not in gone]
                for v, nbrs in self._adj.items()
            }
        )

    def remove_vertices(self, vertices: Iterable[int]) -> "Graph":
        gone = set(vertices)
        for v in gone:
            if v not in self._adj:
                raise ValueError(f"vertex {v} not present")
        return Graph(
            {
                v: [u for u in nbrs if u not in gone]
                for v, nbrs in self._adj.items()
                if v not in gone
            }
        )

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        out: list[set[int]] = []
        for start in self._adj:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self._adj[v]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            out.append(comp)
        return out


class Embedding:
    """Rotation system: for each vertex, a cyclic order of its neighbors."""

    __slots__ = ("_rotation",)

    def __init__(self, rotation: Mapping[int, Sequence[int]]):
        self._rotation = {int(v): tuple(int(u) for u in rotation[v]) for v in sorted(rotation)}

    @property
    def rotation(self) -> Mapping[int, tuple[int, ...]]:
        return self._rotation

    def rot(self, v: int) -> tuple[int, ...]:
        return self._rotation[v]

    def successor(self, v: int, u: int) -> int:
        """Neighbor following u in the cyclic order around v."""
        r = self._rotation[v]
        return r[(r.index(u) + 1) % len(r)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Embedding):
            return False
        if self._rotation.keys() != other._rotation.keys():
            return False
        for v, r in self._rotation.items():
            s = other._rotation[v]
            if len(r) != len(s):
                return False
            if len(r) == 0:
                continue
            i = s.index(r[0]) if r[0] in s else -1
            if i < 0 or tuple(s[i:] + s[:i]) != r:
                return False
        return True

    def restrict(self, g: "Graph") -> "Embedding":
        """Induced rotation system on a subgraph of the original graph."""
        return Embedding(
            {v: [u for u in self._rotation[v] if g.has_edge(v, u)] for v in g.vertices()}
        )

    @staticmethod
    def sorted_rotation(g: "Graph") -> "Embedding":
        """Neighbors in ascending label order; arbitrary, not always planar."""
        return Embedding({v: g.neighbors(v) for v in g.vertices()})


@dataclass(frozen=True)
class PlanarityVerdict:
    planar: bool
    face_count: int
    faces: tuple[tuple[Edge, ...], ...]


def _check_rotation_matches(g: Graph, emb: Embedding) -> None:
    if set(emb.rotation) != set(g.vertices()):
        raise MalformedEmbeddingError("rotation vertex set differs from graph")
    for v in g.vertices():
        r = emb.rot(v)
        if len(r) != len(set(r)) or sorted(r) != sorted(g.neighbors(v)):
            raise MalformedEmbeddingError(f"rotation at {v} is not a permutation of N({v})")


def trace_faces(g: Graph, emb: Embedding) -> list[tuple[Edge, ...]]:
    """Walk every directed edge once using the face-tracing rule: after
    arriving at v from u, leave along the successor of u in v's rotation."""
    _check_rotation_matches(g, emb)
    unused: set[Edge] = set()
    for v in g.vertices():
        for u in g.neighbors(v):
            unused.add((v, u))
    faces: list[tuple[Edge, ...]] = []
    while unused:
        start = min(unused)
        walk: list[Edge] = []
        dart = start
        while True:
            walk.append(dart)
            unused.discard(dart)
            u, v = dart
            dart = (v, emb.successor(v, u))
            if dart == start:
                break
        faces.append(tuple(walk))
    return faces


def validate_embedding(g: Graph, emb: Embedding) -> PlanarityVerdict:
    """Certify genus 0 via Euler's relation on every connected component.

    A component with v vertices, e edges and f traced faces is planar iff
    v - e + f = 2; an isolated vertex contributes one face by convention.
    """
    faces = trace_faces(g, emb)
    comp_of: dict[int, int] = {}
    comps = g.components()
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    face_counts = [0] * len(comps)
    for walk in faces:
        face_counts[comp_of[walk[0][0]]] += 1
    total_faces = 0
    planar = True
    for i, comp in enumerate(comps):
        e = sum(1 for v in comp for u in g.neighbors(v)) // 2
        f = face_counts[i] if e > 0 else 1
        total_faces += f
        if len(comp) - e + f != 2:
            planar = False
    return PlanarityVerdict(planar, total_faces, tuple(faces))


# ---------------------------------------------------------------------------
# contraction followed by an immediate split
# ---------------------------------------------------------------------------

def _cyclic_after(rot: Sequence[int], pivot: int) -> list[int]:
    """Elements of a cyclic sequence starting just after pivot, pivot omitted."""
    i = rot.index(pivot)
    return [rot[(i + j) % len(rot)] for j in range(1, len(rot))]


def contract_uncontract(
    g: Graph, emb: Embedding, path: Sequence[int]
) -> tuple[Graph, Embedding]:
    """Contract the middle edge of the path x,u,v,y, then split the merged
    vertex back into u and v along x and y.

    The output keeps the vertex set of the input.  Both u and v end up
    adjacent to x, y and each other, and N'(u) | N'(v) = N(u) | N(v).
    The merged vertex's rotation is cut immediately after x and immediately
    after y; the x-to-y arc goes to u, the rest to v.  Planarity of the
    embedding is preserved (and re-certified by face tracing).
    """
    x, u, v, y = (int(a) for a in path)
    if len({x, u, v, y}) != 4:
        raise ValueError("path vertices must be distinct")
    for a, b in ((x, u), (u, v), (v, y)):
        if not g.has_edge(a, b):
            raise ValueError(f"required edge ({a},{b}) missing")
    _check_rotation_matches(g, emb)
    planar_in = validate_embedding(g, emb).planar

    # Contract uv: merged rotation is u's order starting after v, spliced
    # with v's order starting after u; duplicates keep their u-side dart.
    seq_u = [a for a in _cyclic_after(emb.rot(u), v) if a != v]
    seq_v = [a for a in _cyclic_after(emb.rot(v), u) if a != u]
    merged: list[int] = []
    for a in seq_u + seq_v:
        if a not in merged:
            merged.append(a)
    u_side = set(seq_u)

    rotation: dict[int, list[int]] = {w: list(emb.rot(w)) for w in g.vertices()}
    W = -1  # transient label for the merged vertex
    for a in merged:
        r = rotation[a]
        if a in u_side and v in r and u in r:
            # parallel edge collapsed: drop the dart that pointed at v
            r = [b for b in r if b != v]
        rotation[a] = [W if b in (u, v) else b for b in r]

    # Split the merged vertex along x .. y.
    i_x = merged.index(x)
    rot_w = merged[i_x:] + merged[:i_x]  # starts at x
    i_y = rot_w.index(y)
    arc_u = rot_w[1:i_y]          # strictly between x and y -> goes to u
    arc_v = rot_w[i_y + 1:]       # strictly between y and x -> goes to v

    rotation[u] = [x] + arc_u + [y, v]
    rotation[v] = [y] + arc_v + [x, u]
    for a in arc_u:
        rotation[a] = [u if b == W else b for b in rotation[a]]
    for a in arc_v:
        rotation[a] = [v if b == W else b for b in rotation[a]]
    rotation[x] = [b for pos in rotation[x] for b in ((u, v) if pos == W else (pos,))]
    rotation[y] = [b for pos in rotation[y] for b in ((v, u) if pos == W else (pos,))]

    g2 = Graph({w: r for w, r in rotation.items()})
    emb2 = Embedding(rotation)
    _check_rotation_matches(g2, emb2)

    old_union = (set(g.neighbors(u)) | set(g.neighbors(v))) - {u, v}
    new_union = (set(g2.neighbors(u)) | set(g2.neighbors(v))) - {u, v}
    if old_union | {x, y} != new_union:
        raise InvariantViolationError("neighborhood union not preserved")
    if planar_in and not validate_embedding(g2, emb2).planar:
        raise InvariantViolationError("rewrite broke planarity")
    return g2, emb2


# ---------------------------------------------------------------------------
# sanity bounds that hold in any planar graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarReport:
    n: int
    edge_count: int
    edge_count_ok: bool
    high_degree_counts: dict[int, tuple[int, float, bool]]
    bipartite_edge_ok: Optional[bool] = None
    heavy_set_size: Optional[int] = None
    heavy_set_bound: Optional[float] = None
    heavy_set_ok: Optional[bool] = None
    fork_count: Optional[int] = None
    fork_bound: Optional[int] = None
    fork_ok: Optional[bool] = None

    def all_ok(self) -> bool:
        checks = [self.edge_count_ok]
        checks += [ok for (_, _, ok) in self.high_degree_counts.values()]
        for flag in (self.bipartite_edge_ok, self.heavy_set_ok, self.fork_ok):
            if flag is not None:
                checks.append(flag)
        return all(checks)


def planar_sanity(
    g: Graph,
    bipartition: Optional[tuple[Iterable[int], Iterable[int]]] = None,
    k: Optional[int] = None,
    fork_query: Optional[tuple[Iterable[int], Iterable[int]]] = None,
) -> PlanarReport:
    """Evaluate edge/degree/bipartite-count bounds a planar graph must obey.

    * e <= 3n - 6 for n >= 3;
    * #{v : deg(v) >= d} <= 6n/d for every occurring degree d;
    * with a bipartition (A, B): e(A, B) <= 2n;
      with additionally k >= 3: #{a in A : |N(a) & B| >= k} <= 2|B|/(k-2);
    * with fork_query (A, B): the number of 2-edge paths with both endpoints
      in B and midpoint in A is at most |A| + 4*d*|B| where d = max degree
      over A.
    """
    n, e = g.n(), g.edge_count()
    edge_ok = True if n < 3 else e <= 3 * n - 6
    degs = sorted(g.degree(v) for v in g.vertices())
    high: dict[int, tuple[int, float, bool]] = {}
    for d in sorted({d for d in degs if d >= 1}):
        cnt = sum(1 for x in degs if x >= d)
        bound = 6.0 * n / d
        high[d] = (cnt, bound, cnt <= bound)

    bip_ok = heavy_n = heavy_b = heavy_ok = None
    if bipartition is not None:
        A, B = set(bipartition[0]), set(bipartition[1])
        if A & B or A | B != set(g.vertices()):
            raise ValueError("bipartition must partition the vertex set")
        cross = sum(1 for a in A for b in g.neighbors(a) if b in B)
        bip_ok = cross <= 2 * n
        if k is not None:
            if k < 3:
                raise ValueError("k must be at least 3")
            heavy_n = sum(1 for a in A if sum(1 for b in g.neighbors(a) if b in B) >= k)
            heavy_b = 2.0 * len(B) / (k - 2)
            heavy_ok = heavy_n <= heavy_b
    elif k is not None:
        raise ValueError("k requires a bipartition")

    fork_n = fork_b = fork_ok = None
    if fork_query is not None:
        A, B = set(fork_query[0]), set(fork_query[1])
        if A & B or A | B != set(g.vertices()):
            raise ValueError("fork_query must partition the vertex set")
        fork_n = 0
        for a in A:
            t = sum(1 for b in g.neighbors(a) if b in B)
            fork_n += t * (t - 1) // 2
        dmax = max((g.degree(a) for a in A), default=0)
        fork_b = len(A) + 4 * dmax * len(B)
        fork_ok = fork_n <= fork_b

    return PlanarReport(
        n=n,
        edge_count=e,
        edge_count_ok=edge_ok,
        high_degree_counts=high,
        bipartite_edge_ok=bip_ok,
        heavy_set_size=heavy_n,
        heavy_set_bound=heavy_b,
        heavy_set_ok=heavy_ok,
        fork_count=fork_n,
        fork_bound=fork_b,
        fork_ok=fork_ok,
    )


# ---------------------------------------------------------------------------
# random planar generator: stacked triangulations with optional deletion
# ---------------------------------------------------------------------------

def generate_planar(
    n: int, seed: int, deletion_prob: float = 0.0
) -> tuple[Graph, Embedding]:
    """Grow a maximal planar graph by repeatedly subdividing a random face of
    a triangulation, then delete each non-initial edge independently with the
    given probability.  Deterministic for a fixed (n, seed, deletion_prob).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not 0.0 <= deletion_prob <= 1.0:
        raise ValueError("deletion_prob must lie in [0, 1]")
    rng = random.Random(seed)
    rotation: dict[int, list[int]] = {0: [1, 2], 1: [2, 0], 2: [0, 1]}
    # faces as dart triples (a, b, c): darts a->b, b->c, c->a
    faces: list[tuple[int, int, int]] = [(0, 1, 2), (0, 2, 1)]
    for z in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))

        def insert_between(w: int, before: int, after: int) -> None:
            r = rotation[w]
            i = r.index(before)
            # new vertex lands between `before` and its cyclic successor
            assert r[(i + 1) % len(r)] == after
            r.insert(i + 1, z)

        insert_between(a, c, b)
        insert_between(b, a, c)
        insert_between(c, b, a)
        rotation[z] = [c, b, a]
        faces += [(z, a, b), (z, b, c), (z, c, a)]

    if deletion_prob > 0.0:
        initial = {(0, 1), (0, 2), (1, 2)}
        doomed: set[Edge] = set()
        for v in sorted(rotation):
            for u in rotation[v]:
                if v < u and (v, u) not in initial and rng.random() < deletion_prob:
                    doomed.add((v, u))
        rotation = {
            v: [u for u in r if _norm_edge(u, v) not in doomed]
            for v, r in rotation.items()
        }

    g = Graph({v: r for v, r in rotation.items()})
    emb = Embedding(rotation)
    verdict = validate_embedding(g, emb)
    if not verdict.planar:
        raise InvariantViolationError("generator produced a non-planar embedding")
    return g, emb


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def graph_to_json(
    g: Graph, emb: Optional[Embedding] = None, B: Optional[Iterable[int]] = None
) -> str:
    """Deterministic JSON: vertices ascending, edges lexicographic."""
    payload: dict = {
        "n": g.n(),
        "edges": [[u, v] for u, v in sorted(g.edges())],
    }
    verts = list(g.vertices())
    if verts != list(range(g.n())):
        payload["vertices"] = verts
    if emb is not None:
        payload["rotation"] = {str(v): list(emb.rot(v)) for v in verts}
    if B is not None:
        payload["B"] = sorted(int(b) for b in B)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def graph_from_json(
    text: str,
) -> tuple[Graph, Optional[Embedding], Optional[list[int]]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid graph JSON: {exc}") from exc
    if not isinstance(payload, dict) or "n" not in payload or "edges" not in payload:
        raise ValueError("graph JSON needs 'n' and 'edges'")
    n = int(payload["n"])
    verts = [int(v) for v in payload.get("vertices", range(n))]
    if len(verts) != n:
        raise ValueError("vertex count does not match 'n'")
    g = Graph.from_edges(verts, payload["edges"])
    emb = None
    if "rotation" in payload:
        rot = {int(v): [int(u) for u in r] for v, r in payload["rotation"].items()}
        emb = Embedding(rot)
        _check_rotation_matches(g, emb)
    B = None
    if "B" in payload:
        B = sorted(int(b) for b in payload["B"])
        for b in B:
            if not g.has_vertex(b):
                raise ValueError(f"B contains unknown vertex {b}")
    return g, emb, B
