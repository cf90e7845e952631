"""Extract candidate predecessor arrays from a parent distribution.

Six strategies with different diversity/validity trade-offs:

* argmax: row-wise most likely parent, deterministic.
* upwards: process vertices leafiest-first, walk sampled parent chains, and
  mask consumed vertices out of parent candidacy.
* alt-upwards: same walk without the masking.
* beam: per vertex, grow backward paths toward the source by sampling
  predecessors, keep the cheapest few, adopt the first hop of the best
  completed path.
* greedy: sample a handful of parents per vertex and keep the cheapest one
  whose edge exists.
* random: uniform baseline.

Beam and greedy consult the graph (weights, source); the others only need the
distribution. All samplers return a full predecessor array for any input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import ParentDistribution
from .graphs import Graph

METHODS = ("argmax", "upwards", "alt-upwards", "beam", "greedy", "random")


@dataclass(frozen=True)
class SamplerConfig:
    method: str = "argmax"
    beam_width: int = 3
    beam_branch: int = 3
    greedy_parent_samples: int = 3
    greedy_max_resamples: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        for name in ("beam_width", "beam_branch", "greedy_parent_samples", "greedy_max_resamples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def sample_predecessor(
    dist: ParentDistribution, v: int, mask: set[int] | frozenset[int], rng: np.random.Generator
) -> int:
    """Draw a parent for v from its row, restricted to non-masked columns.

    Falls back to a uniformly random non-masked vertex when the restricted row
    has zero mass, and to a uniformly random vertex when everything is masked.
    """
    row = dist.probs[v].copy()
    if mask:
        row[list(mask)] = 0.0
    total = row.sum()
    if total > 0.0:
        return int(rng.choice(dist.n, p=row / total))
    open_vertices = [u for u in range(dist.n) if u not in mask]
    pool = open_vertices if open_vertices else list(range(dist.n))
    return int(pool[rng.integers(len(pool))])


def argmax_extract(dist: ParentDistribution) -> tuple[int, ...]:
    """Most likely parent per row; ties resolve to the lowest index."""
    return tuple(int(j) for j in np.argmax(dist.probs, axis=1))


def _upwards(dist: ParentDistribution, rng: np.random.Generator, mask_parents: bool) -> tuple[int, ...]:
    n = dist.n
    leafiness = dist.probs.sum(axis=0)  # column sum: how often a vertex parents anyone
    order = np.argsort(leafiness, kind="stable").tolist()
    pi: list[int | None] = [None] * n
    mask: set[int] = set()
    for v in order:
        cur = v
        while pi[cur] is None:
            pi[cur] = sample_predecessor(dist, cur, mask, rng)
            if mask_parents:
                mask.add(cur)
            cur = pi[cur]
    return tuple(pi)


def upwards_sample(dist: ParentDistribution, rng: np.random.Generator) -> tuple[int, ...]:
    """Leafiest-first parent sampling; consumed vertices stop being candidates.

    Walks each sampled parent chain until it reaches a vertex whose parent is
    already assigned. Masking can empty a row's support, in which case the
    vertex gets a random non-masked parent.
    """
    return _upwards(dist, rng, mask_parents=True)


def alt_upwards_sample(dist: ParentDistribution, rng: np.random.Generator) -> tuple[int, ...]:
    """upwards_sample without the parent masking; rows keep their support."""
    return _upwards(dist, rng, mask_parents=False)


def beam_extract(
    dist: ParentDistribution,
    g: Graph,
    cfg: SamplerConfig,
    rng: np.random.Generator,
    stats: dict | None = None,
) -> tuple[int, ...]:
    """Per-vertex backward beam search toward the source.

    Each frontier path samples up to beam_branch distinct positive-mass
    predecessors of its last vertex; only the beam_width cheapest partial paths
    survive a round, and paths stop at the source or at length n. The vertex
    adopts its immediate predecessor on the cheapest completed path (cost ties
    resolve to the lowest parent index). A first-step self-sample counts as a
    completed root claim at infinite cost, so unreachable vertices can keep
    themselves. Without any completion the vertex falls back to its lightest
    graph parent, then to a random vertex.
    """
    if g.source is None:
        raise ValueError("beam extraction needs a graph with a source")
    n = dist.n
    source = g.source
    _, weight = g.scaled_weight_matrix()
    pi = [0] * n
    pi[source] = source
    for v in range(n):
        if v == source:
            continue
        completed: list[tuple[float | int, int]] = []
        frontier: list[tuple[float | int, list[int]]] = [(0, [v])]
        for _ in range(n):
            candidates: list[tuple[float | int, list[int]]] = []
            for cost, path in frontier:
                last = path[-1]
                row = dist.probs[last]
                branch = min(cfg.beam_branch, int(np.count_nonzero(row)))
                if branch == 0:
                    continue
                picks = rng.choice(n, size=branch, replace=False, p=row / row.sum())
                for q in picks.tolist():
                    if q == last:
                        if len(path) == 1:
                            completed.append((math.inf, v))  # root claim
                        continue
                    w = weight[q][last]
                    extended = cost + w if w else math.inf
                    if q == source:
                        completed.append((extended, path[1] if len(path) > 1 else q))
                    else:
                        candidates.append((extended, path + [q]))
            if not candidates:
                break
            candidates.sort(key=lambda item: item[0])
            frontier = candidates[: cfg.beam_width]
        if completed:
            best_cost = min(cost for cost, _ in completed)
            pi[v] = min(parent for cost, parent in completed if cost == best_cost)
            continue
        graph_parents = [(weight[u][v], u) for u in range(n) if weight[u][v] > 0]
        if graph_parents:
            pi[v] = min(graph_parents)[1]
            if stats is not None:
                stats["beam_parent_fallback"] = stats.get("beam_parent_fallback", 0) + 1
        else:
            pi[v] = int(rng.integers(n))
            if stats is not None:
                stats["beam_random_fallback"] = stats.get("beam_random_fallback", 0) + 1
    return tuple(pi)


def greedy_extract(
    dist: ParentDistribution,
    g: Graph,
    cfg: SamplerConfig,
    rng: np.random.Generator,
    stats: dict | None = None,
) -> tuple[int, ...]:
    """Sample a set of parents per vertex and keep the cheapest plausible one.

    Each round draws up to greedy_parent_samples distinct positive-mass
    parents, weighted by the row. A sampled parent q is plausible when edge
    (q, v) exists, or when q == v (a root claim, ranked below every real
    edge). Rounds without any plausible sample are retried up to
    greedy_max_resamples times; after that the vertex takes its lightest graph
    parent, or itself when no in-edge exists.
    """
    if g.source is None:
        raise ValueError("greedy extraction needs a graph with a source")
    n = dist.n
    source = g.source
    _, weight = g.scaled_weight_matrix()
    pi = [0] * n
    pi[source] = source
    for v in range(n):
        if v == source:
            continue
        row = dist.probs[v]
        row = row / row.sum()
        draw = min(cfg.greedy_parent_samples, int(np.count_nonzero(row)))
        best: tuple[float | int, int] | None = None
        for _ in range(cfg.greedy_max_resamples):
            picks = rng.choice(n, size=draw, replace=False, p=row)
            for q in picks.tolist():
                if q == v:
                    candidate = (math.inf, v)
                elif weight[q][v] > 0:
                    candidate = (weight[q][v], q)
                else:
                    continue
                if best is None or candidate < best:
                    best = candidate
            if best is not None:
                break
        if best is not None:
            pi[v] = best[1]
            continue
        graph_parents = [(weight[u][v], u) for u in range(n) if weight[u][v] > 0]
        if graph_parents:
            pi[v] = min(graph_parents)[1]
            if stats is not None:
                stats["greedy_parent_fallback"] = stats.get("greedy_parent_fallback", 0) + 1
        else:
            pi[v] = v
            if stats is not None:
                stats["greedy_self_fallback"] = stats.get("greedy_self_fallback", 0) + 1
    return tuple(pi)


def random_extract(g: Graph, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform baseline: the source (or 0) keeps itself, the rest are uniform."""
    root = g.source if g.source is not None else 0
    pi = [int(x) for x in rng.integers(0, g.n, size=g.n)]
    pi[root] = root
    return tuple(pi)


def extract(
    method: str,
    dist: ParentDistribution,
    g: Graph,
    cfg: SamplerConfig,
    rng: np.random.Generator,
    stats: dict | None = None,
) -> tuple[int, ...]:
    """Dispatch one sample through the named method."""
    if method == "argmax":
        return argmax_extract(dist)
    if method == "upwards":
        return upwards_sample(dist, rng)
    if method == "alt-upwards":
        return alt_upwards_sample(dist, rng)
    if method == "beam":
        return beam_extract(dist, g, cfg, rng, stats)
    if method == "greedy":
        return greedy_extract(dist, g, cfg, rng, stats)
    if method == "random":
        return random_extract(g, rng)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def draw_samples(
    method: str,
    dist: ParentDistribution,
    g: Graph,
    cfg: SamplerConfig,
    k: int,
    rng: np.random.Generator,
    stats: dict | None = None,
) -> list[tuple[int, ...]]:
    """k samples from one method, drawn sequentially from a single stream."""
    return [extract(method, dist, g, cfg, rng, stats) for _ in range(k)]


__all__ = [
    "METHODS",
    "SamplerConfig",
    "alt_upwards_sample",
    "argmax_extract",
    "beam_extract",
    "draw_samples",
    "extract",
    "greedy_extract",
    "random_extract",
    "sample_predecessor",
]
