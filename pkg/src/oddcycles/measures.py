"""Edge probability measures on a clique and the packing objective.

A measure mu puts nonnegative mass summing to 1 on the edges of a complete
graph K on k vertices.  For a subgraph H' with edge set E', its mass is
mu(H') = prod of mu(e) over E'; beta(mu; H) sums mu(H') over all unlabeled
copies H' of H in K.  The quantity maximized here is

    f_m(mu) = 2m * beta(mu; C_m) + beta(mu; P_{m+1})      for m >= 3
    f_2(mu) = 2 * sum_e mu(e)^2 + beta(mu; P_3)           for m = 2

a degree-m homogeneous polynomial.  First-order conditions at a maximizer:
with lam = m * f(mu), every support edge satisfies lam * mu(e) equals the
weighted mass of copies through e, and every vertex satisfies the analogous
degree-weighted identity with lam * mubar(x).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

EdgeKey = tuple[int, int]

_ATOL = 1e-12


def _key(u: int, v: int) -> EdgeKey:
    return (u, v) if u < v else (v, u)


class EdgeMeasure:
    """Probability measure on the edge set of K_{clique_size}."""

    __slots__ = ("clique_size", "mass")

    def __init__(self, clique_size: int, mass: Mapping[Sequence[int], float]):
        if clique_size < 2:
            raise ValueError("clique needs at least 2 vertices")
        self.clique_size = int(clique_size)
        cleaned: dict[EdgeKey, float] = {}
        for pair, p in mass.items():
            u, v = int(pair[0]), int(pair[1])
            if u == v or not (0 <= u < clique_size) or not (0 <= v < clique_size):
                raise ValueError(f"bad edge {pair} for clique size {clique_size}")
            p = float(p)
            if p < -_ATOL:
                raise ValueError(f"negative mass on {pair}")
            if _key(u, v) in cleaned:
                raise ValueError(f"duplicate edge {pair}")
            cleaned[_key(u, v)] = max(p, 0.0)
        total = sum(cleaned.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mass sums to {total}, not 1")
        self.mass = cleaned

    def __getitem__(self, pair: Sequence[int]) -> float:
        return self.mass.get(_key(int(pair[0]), int(pair[1])), 0.0)

    def support(self, floor: float = 1e-10) -> list[EdgeKey]:
        return sorted(e for e, p in self.mass.items() if p > floor)

    def vector(self) -> np.ndarray:
        edges = _clique_edges(self.clique_size)
        idx = {e: i for i, e in enumerate(edges)}
        vec = np.zeros(len(edges))
        for e, p in self.mass.items():
            vec[idx[e]] = p
        return vec

    @staticmethod
    def from_vector(clique_size: int, vec: np.ndarray) -> "EdgeMeasure":
        edges = _clique_edges(clique_size)
        return EdgeMeasure(
            clique_size, {e: float(p) for e, p in zip(edges, vec) if p > 0.0}
        )

    @staticmethod
    def uniform_cycle(clique_size: int, m: int) -> "EdgeMeasure":
        if clique_size < m or m < 2:
            raise ValueError("cycle does not fit in the clique")
        if m == 2:
            return EdgeMeasure(clique_size, {(0, 1): 1.0})
        return EdgeMeasure(
            clique_size, {(i, (i + 1) % m): 1.0 / m for i in range(m)}
        )


@lru_cache(maxsize=None)
def _clique_edges(k: int) -> tuple[EdgeKey, ...]:
    return tuple(itertools.combinations(range(k), 2))


@lru_cache(maxsize=None)
def _copy_tables(k: int, kind: str, size: int):
    """All unlabeled copies of a pattern in K_k, as (edge-index array,
    vertex array, endpoint-degree array).

    kind 'cycle': size = number of vertices (= edges) of the cycle;
    kind 'path': size = number of vertices, size-1 edges;
    kind 'pair': the degenerate doubled edge used by the m=2 objective.
    """
    edges = _clique_edges(k)
    idx = {e: i for i, e in enumerate(edges)}
    rows_e: list[list[int]] = []
    rows_v: list[list[int]] = []
    rows_d: list[list[int]] = []
    if kind == "pair":
        for e in edges:
            rows_e.append([idx[e], idx[e]])
            rows_v.append(list(e))
            rows_d.append([2, 2])
    elif kind == "cycle":
        for combo in itertools.combinations(range(k), size):
            a = combo[0]
            for perm in itertools.permutations(combo[1:]):
                if perm[0] > perm[-1]:
                    continue
                seq = (a,) + perm
                rows_e.append(
                    [idx[_key(seq[i], seq[(i + 1) % size])] for i in range(size)]
                )
                rows_v.append(list(seq))
                rows_d.append([2] * size)
    elif kind == "path":
        for combo in itertools.combinations(range(k), size):
            for perm in itertools.permutations(combo):
                if perm[0] > perm[-1]:
                    continue
                rows_e.append([idx[_key(perm[i], perm[i + 1])] for i in range(size - 1)])
                rows_v.append(list(perm))
                rows_d.append([1] + [2] * (size - 2) + [1])
    else:
        raise ValueError(kind)
    return (
        np.array(rows_e, dtype=np.int64).reshape(len(rows_e), -1),
        np.array(rows_v, dtype=np.int64).reshape(len(rows_v), -1),
        np.array(rows_d, dtype=np.int64).reshape(len(rows_d), -1),
    )


def _terms(k: int, m: int):
    """(gamma, copy tables) for the two terms of the degree-m objective."""
    if m < 2:
        raise ValueError("need m >= 2")
    first = (2.0, _copy_tables(k, "pair", 2)) if m == 2 else (
        (2.0 * m, _copy_tables(k, "cycle", m)) if k >= m else (2.0 * m, None)
    )
    second = (1.0, _copy_tables(k, "path", m + 1)) if k >= m + 1 else (1.0, None)
    return first, second


def _copy_masses(vec: np.ndarray, tab) -> np.ndarray:
    if tab is None or tab[0].shape[0] == 0:
        return np.zeros(0)
    return np.prod(vec[tab[0]], axis=1)


def beta(mu: EdgeMeasure, kind: str, size: int) -> float:
    """beta(mu; H) for H a cycle or path on `size` vertices."""
    tab = _copy_tables(mu.clique_size, kind, size)
    return float(_copy_masses(mu.vector(), tab).sum())


def vertex_mass(mu: EdgeMeasure) -> dict[int, float]:
    """mubar(x) = sum of mu over edges at x; the values sum to 2."""
    out = {x: 0.0 for x in range(mu.clique_size)}
    for (u, v), p in mu.mass.items():
        out[u] += p
        out[v] += p
    return out


def objective(mu: EdgeMeasure, m: int) -> float:
    return float(_objective_vec(mu.vector(), mu.clique_size, m))


def _objective_vec(vec: np.ndarray, k: int, m: int) -> float:
    total = 0.0
    for gamma, tab in _terms(k, m):
        total += gamma * _copy_masses(vec, tab).sum()
    return total


def _gradient_vec(vec: np.ndarray, k: int, m: int) -> tuple[float, np.ndarray]:
    """(objective value, d objective / d mu(e)) via leave-one-out products."""
    value = 0.0
    grad = np.zeros(len(vec))
    for gamma, tab in _terms(k, m):
        if tab is None or tab[0].shape[0] == 0:
            continue
        P = vec[tab[0]]                             # copies x edges-per-copy
        pref = np.cumprod(P, axis=1)
        suff = np.cumprod(P[:, ::-1], axis=1)[:, ::-1]
        value += gamma * pref[:, -1].sum()
        loo = np.empty_like(P)
        loo[:, 0] = suff[:, 1] if P.shape[1] > 1 else 1.0
        loo[:, -1] = pref[:, -2] if P.shape[1] > 1 else 1.0
        if P.shape[1] > 2:
            loo[:, 1:-1] = pref[:, :-2] * suff[:, 2:]
        np.add.at(grad, tab[0], gamma * loo)
    return value, grad


@dataclass(frozen=True)
class KktReport:
    lam: float
    edge_residuals: dict[EdgeKey, float]
    vertex_residuals: dict[int, float]
    max_support_edge_residual: float
    max_vertex_residual: float
    off_support_ok: bool  # gradient never beats lam off the support (+tol)

    def max_edge_residual(self) -> float:
        return max(abs(r) for r in self.edge_residuals.values())


def kkt_residual(mu: EdgeMeasure, m: int, tol: float = 1e-6) -> KktReport:
    """First-order residuals at mu.

    Edge e: m*f(mu)*mu(e) - sum_i gamma_i * sum_{H copy of H_i, e in H} mu(H);
    vertex x: m*f(mu)*mubar(x) - sum_i gamma_i * sum_{H through x} deg_H(x)*mu(H).
    Both vanish at an interior-support maximizer.  The off-support check
    (gradient <= lam + tol away from the support) is a derived optimality
    condition, not part of the identities themselves.
    """
    k = mu.clique_size
    vec = mu.vector()
    value, grad = _gradient_vec(vec, k, m)
    lam = m * value
    edges = _clique_edges(k)
    edge_res = {e: float(lam * vec[i] - vec[i] * grad[i]) for i, e in enumerate(edges)}

    vert = np.zeros(k)
    for gamma, tab in _terms(k, m):
        if tab is None or tab[0].shape[0] == 0:
            continue
        w = _copy_masses(vec, tab)
        np.add.at(vert, tab[1], gamma * w[:, None] * tab[2])
    mubar = vertex_mass(mu)
    vert_res = {x: float(lam * mubar[x] - vert[x]) for x in range(k)}

    support = set(mu.support())
    sup_res = max((abs(edge_res[e]) for e in support), default=0.0)
    off_ok = all(
        grad[i] <= lam + tol for i, e in enumerate(edges) if e not in support
    )
    return KktReport(
        lam=lam,
        edge_residuals=edge_res,
        vertex_residuals=vert_res,
        max_support_edge_residual=sup_res,
        max_vertex_residual=max(abs(r) for r in vert_res.values()),
        off_support_ok=off_ok,
    )


# ---------------------------------------------------------------------------
# analytic bounds checked numerically
# ---------------------------------------------------------------------------

def known_bound(m: int) -> tuple[float, bool]:
    """(bound on sup f_m, is_exact).  Exact for m in {2,3,4}; for m >= 5 only
    an upper envelope 2.6947/m^(m-1) is available."""
    if m < 2:
        raise ValueError("need m >= 2")
    if m == 2:
        return 2.0, True
    if m in (3, 4):
        return 2.0 / m ** (m - 1), True
    return 2.6947 / m ** (m - 1), False


def check_rooted_path_bound(mu: EdgeMeasure, m: int, x: int) -> tuple[float, float, bool]:
    """Mass of paths on m+1 vertices with x as an endpoint, against
    mubar(x) * ((1 - mubar(x)) / (m-1))^(m-1).  Returns (lhs, rhs, lhs<=rhs)."""
    if not 0 <= x < mu.clique_size:
        raise ValueError("x outside the clique")
    tab = _copy_tables(mu.clique_size, "path", m + 1) if mu.clique_size >= m + 1 else None
    lhs = 0.0
    if tab is not None and tab[0].shape[0]:
        w = _copy_masses(mu.vector(), tab)
        ends = (tab[1][:, 0] == x) | (tab[1][:, -1] == x)
        lhs = float(w[ends].sum())
    mb = vertex_mass(mu)[x]
    rhs = mb * ((1.0 - mb) / (m - 1)) ** (m - 1)
    return lhs, rhs, lhs <= rhs + 1e-12


def check_vertex_bound(mu: EdgeMeasure, m: int, x: int) -> tuple[float, bool]:
    """At a maximizer with value O, every support vertex satisfies
    (m/2)*mubar + (1-mubar)^m + mubar*((1-mubar)/(m-1))^(m-1)/(2O) >= 1."""
    O = objective(mu, m)
    if O <= 0:
        raise ValueError("objective is zero; bound undefined")
    mb = vertex_mass(mu)[x]
    val = (
        0.5 * m * mb
        + (1.0 - mb) ** m
        + mb * ((1.0 - mb) / (m - 1)) ** (m - 1) / (2.0 * O)
    )
    return val, val >= 1.0 - 1e-9


# ---------------------------------------------------------------------------
# multistart exponentiated-gradient ascent on the simplex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimizationReport:
    m: int
    clique_size: int
    measure: EdgeMeasure
    value: float
    lam: float
    kkt: KktReport
    min_scaled_vertex_mass: float  # m * min mubar over support vertices
    starts_used: int
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "clique_size": self.clique_size,
            "measure": measure_to_dict(self.measure),
            "value": self.value,
            "lambda": self.lam,
            "max_support_edge_residual": self.kkt.max_support_edge_residual,
            "max_vertex_residual": self.kkt.max_vertex_residual,
            "off_support_ok": self.kkt.off_support_ok,
            "min_scaled_vertex_mass": self.min_scaled_vertex_mass,
            "starts_used": self.starts_used,
            "iterations": self.iterations,
            "converged": self.converged,
        }


_FLOOR = 1e-15
_TRUNCATE = 1e-10


def _ascend(
    vec: np.ndarray, k: int, m: int, max_iters: int, tol: float
) -> tuple[np.ndarray, float, int, bool]:
    """Multiplicative-update ascent from one start.  The step is adapted by
    doubling after an accepted move and halving after a rejected one."""
    vec = np.maximum(vec, _FLOOR)
    vec = vec / vec.sum()
    value, grad = _gradient_vec(vec, k, m)
    eta = 1.0
    it = 0
    for it in range(1, max_iters + 1):
        lam = m * value
        support = vec > _TRUNCATE
        res = np.abs(lam * vec - vec * grad)
        if res[support].max(initial=0.0) < tol and np.all(
            grad[~support] <= lam + tol
        ):
            return vec, value, it, True
        scale = np.abs(grad - lam).max()
        if scale <= 0.0 or lam <= 0.0:
            return vec, value, it, False  # flat point (e.g. degenerate start)
        moved = False
        while eta > 1e-14:
            cand = vec * np.exp(eta * (grad - lam) / scale)
            cand = np.maximum(cand, _FLOOR)
            cand = cand / cand.sum()
            cval, cgrad = _gradient_vec(cand, k, m)
            if cval > value:
                vec, value, grad = cand, cval, cgrad
                eta = min(eta * 2.0, 1e6)
                moved = True
                break
            eta *= 0.5
        if not moved:
            support = vec > _TRUNCATE
            lam = m * value
            res = np.abs(lam * vec - vec * grad)
            ok = res[support].max(initial=0.0) < tol and np.all(
                grad[~support] <= lam + tol
            )
            return vec, value, it, bool(ok)
    return vec, value, it, False


def optimize(
    m: int,
    clique_size: Optional[int] = None,
    starts: int = 64,
    max_iters: int = 4000,
    tol: float = 1e-8,
    seed: int = 0,
) -> OptimizationReport:
    """Maximize f_m over the edge simplex of K_{clique_size} (default m+3).

    Deterministic for fixed arguments.  The start list always contains the
    degenerate one-edge measure (a flat stationary trap for m >= 3), the
    uniform measure, and the uniform cycle on the first m vertices; the rest
    are Dirichlet samples."""
    if m < 2:
        raise ValueError("need m >= 2")
    k = clique_size if clique_size is not None else m + 3
    if k < 2:
        raise ValueError("clique needs at least 2 vertices")
    if starts < 1:
        raise ValueError("need at least one start")
    rng = np.random.default_rng(seed)
    E = len(_clique_edges(k))
    start_vecs: list[np.ndarray] = []
    point = np.zeros(E)
    point[0] = 1.0
    start_vecs.append(point)
    start_vecs.append(np.full(E, 1.0 / E))
    if k >= m and m >= 3:
        start_vecs.append(EdgeMeasure.uniform_cycle(k, m).vector())
    while len(start_vecs) < starts:
        start_vecs.append(rng.dirichlet(np.ones(E)))
    start_vecs = start_vecs[:starts]

    best = None
    total_iters = 0
    any_converged = False
    for vec in start_vecs:
        out_vec, value, iters, conv = _ascend(vec.copy(), k, m, max_iters, tol)
        total_iters += iters
        any_converged = any_converged or conv
        if best is None or value > best[1] + 1e-15:
            best = (out_vec, value, conv)

    out_vec, value, conv = best
    out_vec = np.where(out_vec > _TRUNCATE, out_vec, 0.0)
    out_vec = out_vec / out_vec.sum()
    mu = EdgeMeasure.from_vector(k, out_vec)
    report = kkt_residual(mu, m)
    mubar = vertex_mass(mu)
    sup_verts = {v for e in mu.support() for v in e}
    s = m * min((mubar[v] for v in sup_verts), default=0.0)
    return OptimizationReport(
        m=m,
        clique_size=k,
        measure=mu,
        value=objective(mu, m),
        lam=report.lam,
        kkt=report,
        min_scaled_vertex_mass=s,
        starts_used=len(start_vecs),
        iterations=total_iters,
        converged=conv,
    )


def sample_objectives(
    m: int, clique_size: int, samples: int, seed: int = 0, chunk: int = 200
) -> np.ndarray:
    """Objective values of `samples` Dirichlet-random measures (vectorized)."""
    rng = np.random.default_rng(seed)
    E = len(_clique_edges(clique_size))
    out = np.empty(samples)
    done = 0
    terms = _terms(clique_size, m)
    while done < samples:
        b = min(chunk, samples - done)
        mus = rng.dirichlet(np.ones(E), size=b)
        vals = np.zeros(b)
        for gamma, tab in terms:
            if tab is None or tab[0].shape[0] == 0:
                continue
            vals += gamma * np.prod(mus[:, tab[0]], axis=2).sum(axis=1)
        out[done : done + b] = vals
        done += b
    return out


def sample_beta_cycles(
    m: int, clique_size: int, samples: int, seed: int = 0, chunk: int = 500
) -> np.ndarray:
    """beta(mu; C_m) for Dirichlet-random measures (vectorized)."""
    rng = np.random.default_rng(seed)
    E = len(_clique_edges(clique_size))
    tab = _copy_tables(clique_size, "cycle", m)
    out = np.empty(samples)
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        mus = rng.dirichlet(np.ones(E), size=b)
        out[done : done + b] = np.prod(mus[:, tab[0]], axis=2).sum(axis=1)
        done += b
    return out


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def measure_to_dict(mu: EdgeMeasure) -> dict:
    return {
        "clique": mu.clique_size,
        "mass": {f"{u}-{v}": p for (u, v), p in sorted(mu.mass.items())},
    }


def measure_from_dict(payload: dict) -> EdgeMeasure:
    if "clique" not in payload or "mass" not in payload:
        raise ValueError("measure JSON needs 'clique' and 'mass'")
    mass = {}
    for key, p in payload["mass"].items():
        parts = key.split("-")
        if len(parts) != 2:
            raise ValueError(f"bad edge key {key!r}")
        mass[(int(parts[0]), int(parts[1]))] = float(p)
    return EdgeMeasure(int(payload["clique"]), mass)
