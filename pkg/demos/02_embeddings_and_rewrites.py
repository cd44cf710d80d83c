"""Rotation systems, face tracing, and the planarity-preserving rewrite.

A combinatorial embedding is a cyclic neighbor order at every vertex.
Tracing faces and checking Euler's formula per component certifies
planarity; the contract-uncontract rewrite edits rotations directly and
keeps that certificate valid.
"""
from oddcycles import (
    Graph,
    contract_uncontract,
    generate_planar,
    validate_embedding,
)

g, emb = generate_planar(12, seed=4, deletion_prob=0.2)
verdict = validate_embedding(g, emb)
print(f"random planar graph: n=12, e={len(g.edges())}, "
      f"faces={verdict.face_count}, planar={verdict.planar}")
assert verdict.planar

# pick a path x-u-v-y with all four vertices distinct and rewrite along it
path = next(
    (x, u, v, y)
    for u, v in g.edges()
    for x in g.neighbors(u)
    for y in g.neighbors(v)
    if len({x, u, v, y}) == 4
)
x, u, v, y = path
print(f"\nrewriting along path {x}-{u}-{v}-{y}:")
print(f"  before: N({u}) = {sorted(g.neighbors(u))}, "
      f"N({v}) = {sorted(g.neighbors(v))}")
g2, emb2 = contract_uncontract(g, emb, path)
print(f"  after:  N({u}) = {sorted(g2.neighbors(u))}, "
      f"N({v}) = {sorted(g2.neighbors(v))}")
v2 = validate_embedding(g2, emb2)
print(f"  output still planar: {v2.planar} ({v2.face_count} faces)")
assert v2.planar

union_before = set(g.neighbors(u)) | set(g.neighbors(v)) - {u, v}
union_after = set(g2.neighbors(u)) | set(g2.neighbors(v)) - {u, v}
print(f"  neighborhood union preserved: {union_before == union_after}")
