"""Skeleton-cycle blowups: the extremal-style constructions.

A blowup places m anchor vertices on a cycle skeleton and replaces each
skeleton edge xy by t extra vertices, each adjacent to both x and y and
strung together internally (a path by default).  With ``skeleton_edges``
the anchor cycle itself is also present.

Good odd-cycle counts admit exact closed forms here, which the brute-force
counter must reproduce exactly; those closed forms are what
``expected_good_count`` returns.

* no skeleton edges, skeleton C_m (m >= 3), counting (2m+1)-cycles:
      2m * t^(m-1) * e   with e = edges inside one tumor (t-1 for a path).
* no skeleton edges, m = 2 (two anchors, both tumor strings share them),
  counting 5-cycles:  2 * (2e) * (2t-2),  i.e. 8(t-1)^2 for path tumors.
  (The generic formula does not specialize to m=2 because the pass-through
  tumor and the edge tumor coincide there.)
* with skeleton edges (m >= 3), counting (2m-1)-cycles:
      m * t^(m-1)  anchor-path cycles closed by one skeleton edge,
  plus, only for m = 3, the coincident-tumor term 6 * e * (t-2).

Tumor shape "cycle" closes each tumor string into a cycle; the resulting
graph is non-planar in general (two anchors cannot both reach every vertex
of an enclosed cycle), so no embedding is produced for it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import Embedding, Graph, validate_embedding
from .tumor import TumorGraph, make_tumor


@dataclass(frozen=True)
class BlowupSpec:
    m: int
    t: int
    skeleton_edges: bool = False
    tumor_shape: str = "path"

    def __post_init__(self):
        if self.tumor_shape not in ("path", "cycle"):
            raise ValueError("tumor_shape must be 'path' or 'cycle'")
        if self.t < 1:
            raise ValueError("need t >= 1")
        if self.m < 2:
            raise ValueError("need m >= 2")
        if self.skeleton_edges and self.m < 3:
            raise ValueError("skeleton edges need m >= 3")
        if self.tumor_shape == "cycle" and self.t < 3:
            raise ValueError("cycle-shaped tumors need t >= 3")

    @property
    def n(self) -> int:
        return self.m + self.m * self.t if self.m >= 3 else 2 + 2 * self.t

    def good_cycle_m(self) -> int:
        """The half-length parameter of the odd cycles this blowup packs."""
        return self.m - 1 if self.skeleton_edges else self.m


def _rotation_from_coords(
    adj: dict[int, list[int]], pos: dict[int, tuple[float, float]]
) -> Embedding:
    rot = {}
    for v, nbrs in adj.items():
        x0, y0 = pos[v]
        rot[v] = sorted(nbrs, key=lambda u: math.atan2(pos[u][1] - y0, pos[u][0] - x0))
    return Embedding(rot)


def build_blowup(spec: BlowupSpec) -> TumorGraph:
    """Construct the blowup; anchors are vertices 0..m-1, tumor vertices
    follow in wedge order.  Path-shaped tumors come with a certified planar
    embedding; cycle-shaped ones have none."""
    m, t = spec.m, spec.t
    adj: dict[int, list[int]] = {}
    pos: dict[int, tuple[float, float]] = {}
    edges: list[tuple[int, int]] = []

    if m >= 3:
        anchors = list(range(m))
        for i in anchors:
            theta = 2 * math.pi * i / m
            pos[i] = (math.cos(theta), math.sin(theta))
        rin = math.cos(math.pi / m)
        for i in range(m):
            x, y = i, (i + 1) % m
            theta = 2 * math.pi * (i + 0.5) / m
            ids = [m + i * t + j for j in range(t)]
            for j, s in enumerate(ids):
                r = rin * (0.45 + 0.5 * (j + 1) / (t + 1))
                pos[s] = (r * math.cos(theta), r * math.sin(theta))
                edges += [(x, s), (y, s)]
            edges += [(ids[j], ids[j + 1]) for j in range(t - 1)]
            if spec.tumor_shape == "cycle":
                edges.append((ids[0], ids[-1]))
        if spec.skeleton_edges:
            edges += [(i, (i + 1) % m) for i in range(m)]
        n = m + m * t
    else:
        pos[0], pos[1] = (-1.0, 0.0), (1.0, 0.0)
        for side, sign in ((0, 1.0), (1, -1.0)):
            ids = [2 + side * t + j for j in range(t)]
            for j, s in enumerate(ids):
                pos[s] = (0.0, sign * (j + 1) / (t + 1))
                edges += [(0, s), (1, s)]
            edges += [(ids[j], ids[j + 1]) for j in range(t - 1)]
            if spec.tumor_shape == "cycle":
                edges.append((ids[0], ids[-1]))
        n = 2 + 2 * t

    g = Graph.from_edges(range(n), edges)
    emb = None
    if spec.tumor_shape == "path":
        emb = _rotation_from_coords({v: list(g.neighbors(v)) for v in g.vertices()}, pos)
        if not validate_embedding(g, emb).planar:
            raise AssertionError("blowup layout failed to embed")
    return make_tumor(g, emb, range(min(m, n)))


def expected_good_count(spec: BlowupSpec, m_cycle: int) -> int:
    """Exact closed-form number of good (2*m_cycle+1)-cycles in the blowup."""
    if m_cycle != spec.good_cycle_m():
        raise ValueError(
            f"this blowup packs cycles with m = {spec.good_cycle_m()}, not {m_cycle}"
        )
    m, t = spec.m, spec.t
    e_in = t if spec.tumor_shape == "cycle" else t - 1
    if not spec.skeleton_edges:
        if m == 2:
            return 2 * (2 * e_in) * (2 * t - 2)
        return 2 * m * t ** (m - 1) * e_in
    base = m * t ** (m - 1)
    if m == 3:
        base += 6 * e_in * max(t - 2, 0)
    return base
