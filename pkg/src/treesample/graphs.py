"""Graphs over integer vertices with exact rational weights.

Weights live in an n x n matrix of Fractions; zero means "no edge" and present
weights are strictly positive. Undirected graphs keep the matrix symmetric.
Costs stay exact end to end, so shortest-path cost comparisons never need a
floating tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

INFINITE_COST = math.inf


class Task(Enum):
    """Which reference algorithm a graph is meant for."""

    DFS = "dfs"
    BF = "bf"


@dataclass
class Graph:
    """Immutable-by-convention weighted graph.

    Attributes:
        n: vertex count; vertices are 0..n-1.
        directed: whether the weight matrix is interpreted as directed.
        weights: n x n tuple-of-tuples of Fractions, 0 = absent edge.
        source: distinguished source vertex for shortest-path tasks, or None.
    """

    n: int
    directed: bool
    weights: tuple[tuple[Fraction, ...], ...]
    source: int | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        if len(self.weights) != self.n or any(len(row) != self.n for row in self.weights):
            raise ValueError("weight matrix shape does not match n")
        if self.source is not None and not 0 <= self.source < self.n:
            raise ValueError(f"source {self.source} out of range for n={self.n}")
        if not self.directed:
            for u in range(self.n):
                for v in range(u + 1, self.n):
                    if self.weights[u][v] != self.weights[v][u]:
                        raise ValueError("undirected graph requires a symmetric matrix")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, Fraction | int]],
        directed: bool,
        source: int | None = None,
    ) -> "Graph":
        rows = [[Fraction(0)] * n for _ in range(n)]
        for u, v, w in edges:
            w = Fraction(w)
            if w <= 0:
                raise ValueError(f"edge ({u},{v}) must have positive weight, got {w}")
            rows[u][v] = w
            if not directed:
                rows[v][u] = w
        return cls(n, directed, tuple(tuple(r) for r in rows), source)

    def has_edge(self, u: int, v: int) -> bool:
        return self.weights[u][v] != 0

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Ascending out-neighbor lists, cached."""
        adj = self._cache.get("adjacency")
        if adj is None:
            adj = tuple(
                tuple(v for v in range(self.n) if self.weights[u][v] != 0)
                for u in range(self.n)
            )
            self._cache["adjacency"] = adj
        return adj

    def edge_list(self) -> list[tuple[int, int, Fraction]]:
        """Directed arcs (u, v, w); undirected graphs yield both directions."""
        return [
            (u, v, self.weights[u][v])
            for u in range(self.n)
            for v in range(self.n)
            if self.weights[u][v] != 0
        ]

    def scaled_arcs(self) -> tuple[int, list[tuple[int, int, int]]]:
        """Arcs with integer weights over a common denominator, cached.

        Returns (denominator, arcs) with w_int = w * denominator exactly, so
        all path-cost arithmetic can run in plain integers.
        """
        cached = self._cache.get("scaled_arcs")
        if cached is None:
            arcs = self.edge_list()
            denom = math.lcm(*(w.denominator for _, _, w in arcs)) if arcs else 1
            scaled = [(u, v, int(w * denom)) for u, v, w in arcs]
            cached = (denom, scaled)
            self._cache["scaled_arcs"] = cached
        return cached

    def scaled_weight_matrix(self) -> tuple[int, list[list[int]]]:
        """Integer weight matrix over the scaled_arcs denominator, 0 = absent."""
        cached = self._cache.get("scaled_matrix")
        if cached is None:
            denom, arcs = self.scaled_arcs()
            mat = [[0] * self.n for _ in range(self.n)]
            for u, v, w in arcs:
                mat[u][v] = w
            cached = (denom, mat)
            self._cache["scaled_matrix"] = cached
        return cached

    @property
    def reach_matrix(self) -> np.ndarray:
        """Reflexive-transitive closure as an n x n boolean matrix, cached."""
        reach = self._cache.get("reach")
        if reach is None:
            reach = np.zeros((self.n, self.n), dtype=bool)
            adj = self.adjacency
            for s in range(self.n):
                seen = reach[s]
                stack = [s]
                seen[s] = True
                while stack:
                    u = stack.pop()
                    for v in adj[u]:
                        if not seen[v]:
                            seen[v] = True
                            stack.append(v)
            reach.setflags(write=False)
            self._cache["reach"] = reach
        return reach

    def to_dict(self) -> dict:
        edges = []
        for u in range(self.n):
            vs = range(self.n) if self.directed else range(u, self.n)
            for v in vs:
                if self.weights[u][v] != 0:
                    edges.append([u, v, str(self.weights[u][v])])
        return {"n": self.n, "directed": self.directed, "source": self.source, "edges": edges}

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        edges = [(u, v, Fraction(w)) for u, v, w in data["edges"]]
        return cls.from_edges(data["n"], edges, data["directed"], data.get("source"))


# Default edge densities per task, calibrated so the stock evaluation studies
# land in their expected regimes. DFS: density trades off against how often
# independently sampled parents form impossible sibling/cycle patterns. BF:
# sparse enough that size-5 graphs almost always have a unique shortest-path
# tree, while size-64 graphs still carry plenty of cost ties.
DFS_EDGE_PROBABILITY = 0.44
BF_EDGE_PROBABILITY = 0.3


@dataclass(frozen=True)
class GraphSpec:
    """Recipe for one random graph.

    Task conventions: DFS graphs are directed and unweighted (weight 1), BF
    graphs are undirected, weighted from weight_set, source 0. Both can be
    overridden via the directed/weighted fields. edge_probability None picks
    the per-task default density.
    """

    n: int
    edge_probability: float | None = None
    task: Task = Task.BF
    weight_set: tuple[int, ...] = (1, 2, 3)
    normalize: bool = True
    seed: int = 0
    directed: bool | None = None
    weighted: bool | None = None

    def resolved_edge_probability(self) -> float:
        if self.edge_probability is not None:
            return self.edge_probability
        return DFS_EDGE_PROBABILITY if self.task is Task.DFS else BF_EDGE_PROBABILITY

    def resolved_directed(self) -> bool:
        return self.task is Task.DFS if self.directed is None else self.directed

    def resolved_weighted(self) -> bool:
        return self.task is Task.BF if self.weighted is None else self.weighted


def generate_graph(spec: GraphSpec) -> Graph:
    """Sample an Erdos-Renyi graph according to spec, deterministically in seed.

    Each vertex pair gets an edge independently with the resolved edge
    probability; weights are uniform over weight_set, divided by
    max(weight_set) when normalize is set. DFS-task graphs are unweighted
    (every present edge 1).
    """
    if spec.n < 1:
        raise ValueError(f"graph size must be positive, got {spec.n}")
    probability = spec.resolved_edge_probability()
    if not 0 < probability <= 1:
        raise ValueError(f"edge probability must lie in (0, 1], got {probability}")
    if not spec.weight_set or any(w <= 0 for w in spec.weight_set):
        raise ValueError("weight_set must be non-empty and positive")

    rng = np.random.default_rng(spec.seed)
    directed = spec.resolved_directed()
    weighted = spec.resolved_weighted()
    choices = sorted(spec.weight_set)
    scale = Fraction(1, max(choices)) if spec.normalize else Fraction(1)

    edges: list[tuple[int, int, Fraction]] = []
    if directed:
        pairs = [(u, v) for u in range(spec.n) for v in range(spec.n) if u != v]
    else:
        pairs = [(u, v) for u in range(spec.n) for v in range(u + 1, spec.n)]
    for u, v in pairs:
        if rng.random() < probability:
            w = Fraction(choices[rng.integers(len(choices))]) if weighted else Fraction(1)
            edges.append((u, v, w * scale if weighted else w))

    source = 0 if spec.task is Task.BF else None
    return Graph.from_edges(spec.n, edges, directed, source)


def reachable(g: Graph, s: int, t: int) -> bool:
    """Whether t is reachable from s following directed edges; reflexive."""
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ValueError(f"vertex out of range: ({s}, {t}) for n={g.n}")
    return bool(g.reach_matrix[s, t])


def tree_edges(pi: tuple[int, ...]) -> set[tuple[int, int]]:
    """(parent, child) pairs of a predecessor array, self-parents excluded."""
    return {(p, c) for c, p in enumerate(pi) if p != c}


def path_cost_from_source(g: Graph, pi: tuple[int, ...], v: int) -> Fraction | float | None:
    """Cost of the predecessor chain from v back to the source.

    Returns the exact Fraction cost when the chain reaches the source, the
    infinite sentinel when v is its own non-source parent (unreachable-vertex
    convention), and None when the chain is undefined: a pointer cycle, a
    traversed edge absent from g, or termination at some other vertex's
    non-source self-parent.
    """
    if g.source is None:
        raise ValueError("path costs need a graph with a source")
    if len(pi) != g.n:
        raise ValueError(f"predecessor array has length {len(pi)}, expected {g.n}")
    if pi[v] == v:
        if v == g.source:
            return Fraction(0)
        return INFINITE_COST
    total = Fraction(0)
    cur = v
    for _ in range(g.n):
        parent = pi[cur]
        if parent == cur:
            return total if cur == g.source else None
        if not g.has_edge(parent, cur):
            return None
        total += g.weights[parent][cur]
        cur = parent
    return None  # walked n steps without terminating: pointer cycle


def graphs_to_json(graphs: Iterable[Graph], path: Path | str) -> None:
    payload = [g.to_dict() for g in graphs]
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def graphs_from_json(path: Path | str) -> list[Graph]:
    payload = json.loads(Path(path).read_text())
    return [Graph.from_dict(entry) for entry in payload]


__all__ = [
    "Graph",
    "GraphSpec",
    "INFINITE_COST",
    "Task",
    "generate_graph",
    "graphs_from_json",
    "graphs_to_json",
    "path_cost_from_source",
    "reachable",
    "tree_edges",
]
