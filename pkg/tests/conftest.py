import random

import pytest

from oddcycles.errors import NotATumorGraphError
from oddcycles.graphs import generate_planar
from oddcycles.tumor import TumorGraph, make_tumor


def random_tumor_instance(seed: int, n_lo: int = 6, n_hi: int = 22) -> TumorGraph:
    """A random planar graph with a random anchor set, repaired so every
    non-anchor keeps at most its two smallest anchor neighbors."""
    rng = random.Random(seed)
    n = rng.randint(n_lo, n_hi)
    p = rng.choice([0.0, 0.15, 0.3, 0.45])
    g, emb = generate_planar(n, seed * 1000003 + 7, p)
    B = {v for v in g.vertices() if rng.random() < 0.35}
    while len(B) < 2:
        B.add(rng.randrange(n))
    drop = []
    for s in g.vertices():
        if s in B:
            continue
        anchors = sorted(u for u in g.neighbors(s) if u in B)
        drop.extend((min(s, u), max(s, u)) for u in anchors[2:])
    if drop:
        g = g.remove_edges(drop)
        emb = emb.restrict(g)
    return make_tumor(g, emb, B)


def build_corpus(size: int):
    """`size` instances paired with m alternating over {2, 3}."""
    out = []
    seed = 0
    while len(out) < size:
        try:
            tg = random_tumor_instance(seed)
        except NotATumorGraphError:  # pragma: no cover - repair precludes this
            seed += 1
            continue
        out.append((tg, 2 + (len(out) % 2), seed))
        seed += 1
    return out


@pytest.fixture(scope="session")
def corpus500():
    return build_corpus(500)


@pytest.fixture(scope="session")
def corpus60():
    return build_corpus(60)
