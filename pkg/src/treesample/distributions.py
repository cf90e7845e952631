"""Parent probability distributions over graph vertices.

A distribution is an n x n row-stochastic matrix: row v gives the probability
of each vertex being v's parent. Empirical distributions count parents across
repeated randomized runs; perturbation mixes rows toward random simplex points
to emulate imperfect predictions of the same shape.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .algorithms import TiebreakMode, TiebreakPolicy, randomized_bellman_ford, randomized_dfs
from .graphs import Graph, Task
from .seeding import derive_seed
from .tables import StudyTable

ROW_SUM_TOLERANCE = 1e-9
KL_EPSILON = 1e-8


@dataclass(eq=False)
class ParentDistribution:
    n: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.shape != (self.n, self.n):
            raise ValueError(f"probs must be {self.n}x{self.n}, got {self.probs.shape}")
        if np.any(self.probs < 0):
            raise ValueError("probabilities must be non-negative")
        sums = self.probs.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE):
            raise ValueError("every row must sum to 1")

    def to_dict(self) -> dict:
        return {"n": self.n, "probs": self.probs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "ParentDistribution":
        return cls(data["n"], np.array(data["probs"], dtype=float))


def build_empirical(
    g: Graph,
    task: Task,
    runs: int = 20,
    seed: int = 0,
    mode: TiebreakMode = TiebreakMode.PER_RUN_GLOBAL,
) -> ParentDistribution:
    """Count parents across randomized runs; rows are counts / runs.

    Each run gets an independent sub-seed derived from (seed, run index). Per-
    row counts always total exactly `runs`, so row sums are 1 up to float
    division rounding.
    """
    if runs < 1:
        raise ValueError(f"need at least one run, got {runs}")
    if task is Task.BF and g.source is None:
        raise ValueError("bellman-ford distributions need a graph with a source")
    counts = np.zeros((g.n, g.n), dtype=np.int64)
    rows = np.arange(g.n)
    for r in range(runs):
        policy = TiebreakPolicy(mode=mode, seed=derive_seed(seed, "run", r))
        if task is Task.DFS:
            pi = randomized_dfs(g, policy)
        else:
            pi = randomized_bellman_ford(g, policy)
        counts[rows, pi] += 1
    return ParentDistribution(g.n, counts / runs)


def kl_divergence(p: ParentDistribution, q: ParentDistribution, eps: float = KL_EPSILON) -> float:
    """Mean over rows of KL(p_row || q_row) after epsilon smoothing.

    Every entry gets eps added, rows are renormalized, so the result is finite
    for any pair of same-size distributions and zero iff they are entrywise
    equal after smoothing.
    """
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n}")
    ps = p.probs + eps
    qs = q.probs + eps
    ps = ps / ps.sum(axis=1, keepdims=True)
    qs = qs / qs.sum(axis=1, keepdims=True)
    rows = np.sum(ps * (np.log(ps) - np.log(qs)), axis=1)
    return float(rows.mean())


def perturb(p: ParentDistribution, alpha: float, seed: int = 0) -> ParentDistribution:
    """Mix each row toward an independent uniform-simplex sample.

    Row becomes (1 - alpha) * row + alpha * u with u ~ Dirichlet(1,...,1);
    alpha=0 is the identity, alpha=1 is fully random.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    rng = np.random.default_rng(seed)
    noise = rng.dirichlet(np.ones(p.n), size=p.n)
    return ParentDistribution(p.n, (1.0 - alpha) * p.probs + alpha * noise)


@dataclass(frozen=True)
class RerunStudyConfig:
    """How distribution stability is measured as the rerun budget grows."""

    sizes: tuple[int, ...] = tuple(range(5, 65))
    graphs_per_size: int = 100
    rerun_counts: tuple[int, ...] = (20, 50, 100)
    task: Task = Task.DFS
    edge_probability: float | None = None
    seed: int = 0


def _rerun_study_item(args) -> list[tuple[int, int, int, float]]:
    from .graphs import GraphSpec, generate_graph

    cfg, size, index = args
    spec = GraphSpec(
        n=size,
        edge_probability=cfg.edge_probability,
        task=cfg.task,
        seed=derive_seed(cfg.seed, "graph", size, index),
    )
    g = generate_graph(spec)
    dists = {
        count: build_empirical(
            g, cfg.task, runs=count, seed=derive_seed(cfg.seed, "dist", size, index, count)
        )
        for count in cfg.rerun_counts
    }
    out = []
    counts = sorted(cfg.rerun_counts)
    for i, lo in enumerate(counts):
        for hi in counts[i + 1 :]:
            out.append((size, lo, hi, kl_divergence(dists[lo], dists[hi])))
    return out


def rerun_divergence_study(cfg: RerunStudyConfig, jobs: int = 1) -> StudyTable:
    """KL divergence between distributions built with different rerun budgets.

    For every graph, one empirical distribution per rerun count (independent
    sub-seeds); KL is recorded for each ordered low/high pair and aggregated
    as mean and standard deviation across graphs per size.
    """
    if cfg.graphs_per_size < 1:
        raise ValueError("graphs_per_size must be positive")
    if len(cfg.rerun_counts) < 2:
        raise ValueError("need at least two rerun counts to compare")
    from .parallel import parallel_map

    items = [(cfg, size, index) for size in cfg.sizes for index in range(cfg.graphs_per_size)]
    results = parallel_map(_rerun_study_item, items, jobs)

    buckets: dict[tuple[int, int, int], list[float]] = {}
    for chunk in results:
        for size, lo, hi, value in chunk:
            buckets.setdefault((size, lo, hi), []).append(value)
    table = StudyTable(("size", "pair_lo", "pair_hi", "mean_kl", "std_kl"))
    for size in cfg.sizes:
        counts = sorted(cfg.rerun_counts)
        for i, lo in enumerate(counts):
            for hi in counts[i + 1 :]:
                values = np.array(buckets[(size, lo, hi)])
                table.append(size, lo, hi, float(values.mean()), float(values.std()))
    return table


def distributions_to_json(dists: Iterable[ParentDistribution], path: Path | str) -> None:
    payload = [d.to_dict() for d in dists]
    Path(path).write_text(json.dumps(payload) + "\n")


def distributions_from_json(path: Path | str) -> list[ParentDistribution]:
    payload = json.loads(Path(path).read_text())
    return [ParentDistribution.from_dict(entry) for entry in payload]


__all__ = [
    "KL_EPSILON",
    "ParentDistribution",
    "RerunStudyConfig",
    "build_empirical",
    "distributions_from_json",
    "distributions_to_json",
    "kl_divergence",
    "perturb",
    "rerun_divergence_study",
]
