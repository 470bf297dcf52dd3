"""Synthetic least-squares instances over random networks, with JSON I/O.

Random streams are Philox generators keyed by ``(seed, purpose)`` through
``numpy.random.SeedSequence``: spawn key ``(0, attempt)`` draws the graph for
resampling attempt ``attempt``; spawn key ``(1,)`` draws the cost data.
Gaussian entries come from NumPy's ziggurat sampler, agent by agent, ``A_k``
row-major followed by ``y_k``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .costs import QuadraticCost
from .mixing import MixingMatrix, build_weights, pattern_violations, validate_assumption2
from .netgraph import CommGraph, generate_random_graph, is_connected


class InstanceValidationError(ValueError):
    pass


@dataclass(eq=False)
class Instance:
    graph: CommGraph
    mixing: MixingMatrix
    costs: list[QuadraticCost]
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.costs[0].dim

    def to_dict(self) -> dict:
        return {
            "meta": dict(self.meta),
            "graph": self.graph.to_dict(),
            "mixing": self.mixing.to_dict(),
            "costs": [q.to_dict() for q in self.costs],
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_dict(cls, data: dict, validate: bool = True) -> "Instance":
        inst = cls(
            CommGraph.from_dict(data["graph"]),
            MixingMatrix.from_dict(data["mixing"]),
            [QuadraticCost.from_dict(c) for c in data["costs"]],
            dict(data.get("meta", {})),
        )
        if validate:
            problems = instance_violations(inst, data.get("mixing"))
            if problems:
                raise InstanceValidationError("; ".join(problems))
        return inst

    @classmethod
    def load(cls, path, validate: bool = True) -> "Instance":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), validate=validate)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def sha256_file(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def gate_violations(m: MixingMatrix, scheme: str) -> list[str]:
    """Violations that disqualify a sampled matrix for the given weight scheme.

    The ``metropolis`` rule always zeroes the diagonal at a maximum-degree
    node, so for that scheme only the zero-diagonal complaint is tolerated.
    """
    out = validate_assumption2(m)
    if scheme == "metropolis":
        out = [v for v in out if not v.startswith("zero diagonal")]
    if not m.rho_w < 1:
        out.append(f"rho_w = {m.rho_w} is not below 1")
    return out


def instance_violations(inst: Instance, stored_mixing: dict | None = None) -> list[str]:
    out = []
    if not is_connected(inst.graph):
        out.append("graph is disconnected")
    scheme = inst.meta.get("weights", "metropolis-hastings")
    out += gate_violations(inst.mixing, scheme)
    out += pattern_violations(inst.mixing, inst.graph)
    if len(inst.costs) != inst.n:
        out.append(f"{len(inst.costs)} costs for {inst.n} agents")
    dims = {q.dim for q in inst.costs}
    if len(dims) != 1:
        out.append(f"costs disagree on dimension: {sorted(dims)}")
    meta = inst.meta
    for key, actual in (("n", inst.n), ("d", inst.costs[0].dim if inst.costs else None)):
        if key in meta and meta[key] != actual:
            out.append(f"meta {key}={meta[key]} but instance has {actual}")
    if "m" in meta and any(q.a.shape[0] != meta["m"] for q in inst.costs):
        out.append(f"meta m={meta['m']} does not match the cost data")
    if stored_mixing is not None:
        for key in ("rho_w", "lambda_min"):
            if key in stored_mixing and abs(stored_mixing[key] - getattr(inst.mixing, key)) > 1e-12:
                out.append(f"stored {key} does not match the weights")
    return out


def cost_stream(seed: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(1,))
    return np.random.Generator(np.random.Philox(ss))


def gaussian_costs(n: int, m: int, d: int, seed: int, scale: float = 0.5) -> list[QuadraticCost]:
    rng = cost_stream(seed)
    costs = []
    for _ in range(n):
        a = rng.standard_normal((m, d))
        y = rng.standard_normal(m)
        costs.append(QuadraticCost(a, y, scale))
    return costs


def generate_instance(n: int = 20, m: int = 5, d: int = 10, link_prob: float = 0.4,
                      seed: int = 0, scale: float = 0.5,
                      weights: str = "metropolis-hastings") -> Instance:
    """Random graph, mixing weights and Gaussian least-squares costs.

    Graphs are redrawn until connected with a mixing matrix passing the
    validity gate for ``weights``.
    """
    if min(n, m, d) < 1:
        raise ValueError(f"sizes must be positive, got n={n}, m={m}, d={d}")
    g = generate_random_graph(
        n, link_prob, seed, accept=lambda g: not gate_violations(build_weights(g, weights), weights))
    w = build_weights(g, weights)
    meta = {"n": n, "m": m, "d": d, "link_prob": link_prob, "seed": int(seed),
            "scale": float(scale), "weights": weights}
    return Instance(g, w, gaussian_costs(n, m, d, seed, scale), meta)
