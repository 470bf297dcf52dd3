"""Undirected communication graphs for the agent network."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

MAX_RESAMPLES = 1000


class GraphGenerationError(RuntimeError):
    """Raised when no connected sample is found within the retry cap."""


@dataclass(frozen=True)
class CommGraph:
    """Simple undirected graph on nodes ``0..n-1``.

    ``edges`` is stored canonically: pairs ``(i, j)`` with ``i < j``, sorted.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    degrees: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        canon = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            canon.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        object.__setattr__(self, "degrees", tuple(deg))

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = True
        return adj

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [[i, j] for i, j in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "CommGraph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))


def is_connected(g: CommGraph) -> bool:
    """Breadth-first search from node 0 reaches every node."""
    adj = [[] for _ in range(g.n)]
    for i, j in g.edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return all(seen)


def graph_stream(seed: int, attempt: int) -> np.random.Generator:
    """Philox stream dedicated to graph attempt ``attempt`` under ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(0, int(attempt)))
    return np.random.Generator(np.random.Philox(ss))


def sample_erdos_renyi(n: int, link_prob: float, rng: np.random.Generator) -> CommGraph:
    # one uniform per unordered pair, drawn in row-major (i<j) order
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < link_prob
    return CommGraph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def generate_random_graph(n: int, link_prob: float, seed: int, *,
                          max_resamples: int = MAX_RESAMPLES,
                          accept=None) -> CommGraph:
    """Sample a connected G(n, p) graph.

    Disconnected draws are rejected and redrawn from the next attempt stream,
    so the result follows G(n, p) conditioned on connectivity. ``accept`` is an
    optional extra predicate a sample must satisfy (used by instance
    generation to gate on mixing-matrix validity).
    """
    if n < 2:
        raise ValueError(f"need at least 2 agents, got n={n}")
    if not 0.0 < link_prob <= 1.0:
        raise ValueError(f"link_prob must lie in (0, 1], got {link_prob}")
    for attempt in range(max_resamples):
        g = sample_erdos_renyi(n, link_prob, graph_stream(seed, attempt))
        if is_connected(g) and (accept is None or accept(g)):
            return g
    raise GraphGenerationError(
        f"no acceptable graph after {max_resamples} samples "
        f"(n={n}, link_prob={link_prob}); link_prob is likely too small"
    )


def complete_graph(n: int) -> CommGraph:
    return CommGraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> CommGraph:
    return CommGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> CommGraph:
    return CommGraph(n, tuple((i, (i + 1) % n) for i in range(n)))
