import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddcycles.errors import MalformedEmbeddingError
from oddcycles.graphs import (
    Embedding,
    Graph,
    contract_uncontract,
    generate_planar,
    graph_from_json,
    graph_to_json,
    planar_sanity,
    validate_embedding,
)


def test_graph_basics():
    g = Graph.from_edges(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert g.n() == 4 and len(g.edges()) == 4
    assert g.degree(0) == 2
    assert sorted(g.neighbors(1)) == [0, 2]
    with pytest.raises(ValueError):
        Graph.from_edges(range(2), [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(range(2), [(0, 5)])


def test_remove_edges_and_vertices():
    g = Graph.complete(5)
    h = g.remove_edges([(0, 1), (2, 3)])
    assert len(h.edges()) == 8
    k = g.remove_vertices([4])
    assert k.n() == 4 and len(k.edges()) == 6
    assert g.n() == 5  # originals untouched


def test_components():
    g = Graph.from_edges(range(5), [(0, 1), (2, 3)])
    comps = sorted(sorted(c) for c in g.components())
    assert comps == [[0, 1], [2, 3], [4]]


def test_face_count_euler():
    g = Graph.cycle(5)
    emb = Embedding({v: tuple(sorted(g.neighbors(v))) for v in g.vertices()})
    verdict = validate_embedding(g, emb)
    assert verdict.planar and verdict.face_count == 2


def test_k4_planar_embedding():
    g = Graph.complete(4)
    emb = Embedding({0: (1, 2, 3), 1: (0, 3, 2), 2: (0, 1, 3), 3: (0, 2, 1)})
    assert validate_embedding(g, emb).planar


def test_k5_has_no_planar_rotation():
    """Exhaustive: none of the 24^5 / symmetry rotation systems of K5 trace
    Euler-consistent faces.  Fixing one rotation up to reflection+rotation
    leaves 6 cyclic orders per remaining vertex."""
    g = Graph.complete(5)
    others = {v: [u for u in range(5) if u != v] for v in range(5)}
    perms = {v: [p for p in itertools.permutations(others[v][1:])] for v in range(5)}
    found = 0
    for combo in itertools.product(*(perms[v] for v in range(5))):
        rot = {v: (others[v][0],) + combo[v] for v in range(5)}
        if validate_embedding(g, Embedding(rot)).planar:
            found += 1
    assert found == 0


def test_embedding_must_match_graph():
    g = Graph.from_edges(range(3), [(0, 1), (1, 2)])
    with pytest.raises(MalformedEmbeddingError):
        validate_embedding(g, Embedding({0: (1,), 1: (0,), 2: (1,)}))
    with pytest.raises(MalformedEmbeddingError):
        validate_embedding(g, Embedding({0: (1, 2), 1: (0, 2), 2: (0, 1)}))


def test_contract_uncontract_figure():
    """u–v contracted then re-split: u keeps a1,a2,a3, v keeps a4,a5,a6,
    both end up adjacent to x, y, and each other."""
    #   rot_u = v,x,a1,a2,a3  rot_v = u,y,a4,a5,a6
    edges = [(0, 1), (0, 2), (0, 4), (0, 5), (0, 6),
             (1, 3), (1, 7), (1, 8), (1, 9)]
    g = Graph.from_edges(range(10), edges)
    emb = Embedding({
        0: (1, 2, 4, 5, 6), 1: (0, 3, 7, 8, 9),
        2: (0,), 3: (1,), 4: (0,), 5: (0,),
        6: (0,), 7: (1,), 8: (1,), 9: (1,),
    })
    g2, emb2 = contract_uncontract(g, emb, (2, 0, 1, 3))
    assert sorted(g2.neighbors(0)) == [1, 2, 3, 4, 5, 6]
    assert sorted(g2.neighbors(1)) == [0, 2, 3, 7, 8, 9]
    assert validate_embedding(g2, emb2).planar
    assert set(g2.neighbors(0)) | set(g2.neighbors(1)) - {0, 1} == (
        set(g.neighbors(0)) | set(g.neighbors(1)) - {0, 1} | {2, 3}
    )


@given(st.integers(0, 400))
@settings(max_examples=60, deadline=None)
def test_contract_uncontract_preserves_planarity(seed):
    import random as _random

    rng = _random.Random(seed)
    g, emb = generate_planar(rng.randint(6, 14), seed, rng.choice([0.0, 0.2]))
    paths = []
    for u, v in g.edges():
        for x in g.neighbors(u):
            for y in g.neighbors(v):
                if len({x, u, v, y}) == 4:
                    paths.append((x, u, v, y))
    if not paths:
        return
    x, u, v, y = paths[seed % len(paths)]
    g2, emb2 = contract_uncontract(g, emb, (x, u, v, y))
    assert validate_embedding(g2, emb2).planar
    assert set(g2.vertices()) == set(g.vertices())
    assert set(g2.neighbors(u)) | set(g2.neighbors(v)) - {u, v} >= (
        set(g.neighbors(u)) | set(g.neighbors(v)) - {u, v}
    )


@given(st.integers(3, 24), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_generate_planar_is_planar_and_deterministic(n, seed):
    g1, e1 = generate_planar(n, seed, 0.3)
    g2, e2 = generate_planar(n, seed, 0.3)
    assert g1.edges() == g2.edges() and e1 == e2
    assert validate_embedding(g1, e1).planar
    assert len(g1.edges()) <= 3 * n - 6


def test_generate_planar_full_triangulation_edge_count():
    g, _ = generate_planar(10, 0, 0.0)
    assert len(g.edges()) == 3 * 10 - 6


def test_planar_sanity_counting_facts():
    g, _ = generate_planar(18, 3, 0.2)
    verts = sorted(g.vertices())
    rep = planar_sanity(g, bipartition=(verts[:9], verts[9:]), k=3,
                        fork_query=(verts[:9], verts[9:]))
    assert rep.all_ok(), rep


def test_graph_json_round_trip():
    g, emb = generate_planar(9, 5, 0.25)
    text = graph_to_json(g, emb, B=[0, 3])
    g2, emb2, b2 = graph_from_json(text)
    assert g2.edges() == g.edges() and emb2 == emb and b2 == [0, 3]
    assert graph_to_json(g2, emb2, B=b2) == text  # byte-stable
    with pytest.raises(ValueError):
        graph_from_json("{not json")
