"""DPPA and DGD iterations with online monitoring of the error recursions."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .costs import CostFunction, QuadraticCost, ZeroCost
from .mixing import MixingMatrix, mix
from .theory import InstanceConstants, SingularHessianError, instance_constants, \
    solve_network_fixed_point

ALGORITHMS = ("dppa", "dgd")
CSV_HEADER = ("t", "a_t", "b_t", "mean_err", "log10_mean_err", "r1", "r2", "ledger")


@dataclass(frozen=True, eq=False)
class NetworkState:
    """Round ``t`` of the network; row ``i`` of ``x`` is agent ``i``'s iterate."""

    t: int
    x: np.ndarray

    @property
    def xbar(self) -> np.ndarray:
        return self.x.mean(axis=0)


@dataclass(frozen=True)
class ErrorFunctionals:
    a_t: float
    b_t: float
    mean_err: float


@dataclass(frozen=True)
class TrajectoryRow:
    t: int
    a_t: float
    b_t: float
    mean_err: float
    r1: float
    r2: float
    ledger: float

    @property
    def log10_mean_err(self) -> float:
        if self.mean_err > 0:
            return math.log10(self.mean_err)
        return float("-inf") if self.mean_err == 0 else float("nan")


@dataclass
class Trajectory:
    rows: list[TrajectoryRow]
    final_state: NetworkState | None = None
    diverged: bool = False
    algo: str = ""
    eta: float = float("nan")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def t(self) -> np.ndarray:
        return np.array([r.t for r in self.rows], dtype=int)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            write_csv_rows(fh, self.rows)

    @classmethod
    def from_csv(cls, path, **kwargs) -> "Trajectory":
        with open(path, newline="") as fh:
            return cls(read_csv_rows(fh), **kwargs)


@dataclass
class AlgoConfig:
    eta: float
    rounds: int
    init: np.ndarray | None = None
    overflow_guard: float = 1e12

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if int(self.rounds) < 1:
            raise ValueError(f"rounds must be at least 1, got {self.rounds}")
        self.rounds = int(self.rounds)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv_rows(fh, rows) -> None:
    wr = csv.writer(fh, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for r in rows:
        wr.writerow([r.t, _fmt(r.a_t), _fmt(r.b_t), _fmt(r.mean_err), _fmt(r.log10_mean_err),
                     _fmt(r.r1), _fmt(r.r2), _fmt(r.ledger)])


def read_csv_rows(fh) -> list[TrajectoryRow]:
    rd = csv.DictReader(fh)
    if tuple(rd.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected trajectory header {rd.fieldnames}")
    return [TrajectoryRow(int(rec["t"]), float(rec["a_t"]), float(rec["b_t"]),
                          float(rec["mean_err"]), float(rec["r1"]), float(rec["r2"]),
                          float(rec["ledger"])) for rec in rd]


class _QuadraticBatch:
    """Stacked data of ``n`` quadratic costs for vectorized prox and gradients."""

    def __init__(self, costs):
        self.a = np.stack([q.a for q in costs])
        self.y = np.stack([q.y for q in costs])
        self.k = np.array([2.0 * q.scale for q in costs])
        self.gram = np.einsum("kmi,kmj->kij", self.a, self.a)
        self.aty = np.einsum("kmi,km->ki", self.a, self.y)
        self._eta = None

    def gradients(self, x):
        return self.k[:, None] * (np.einsum("kij,kj->ki", self.gram, x) - self.aty)

    def prox(self, v, eta):
        if self._eta != eta:
            d = self.gram.shape[1]
            ke = (self.k * eta)[:, None, None]
            self._sys = ke * self.gram + np.eye(d)
            self._lin = (self.k * eta)[:, None] * self.aty
            self._eta = eta
        return np.linalg.solve(self._sys, (self._lin + v)[..., None])[..., 0]


def _batch_for(costs):
    if costs and all(type(f) is QuadraticCost for f in costs):
        return _QuadraticBatch(costs)
    return None


def _gradients(costs, x, batch=None):
    if batch is not None:
        return batch.gradients(x)
    return np.stack([f.gradient(x[i]) for i, f in enumerate(costs)])


def _check(state, m, costs):
    n = state.x.shape[0]
    if m.n != n or len(costs) != n:
        raise ValueError(f"state has {n} agents, W has {m.n}, and {len(costs)} costs were given")


def dppa_step(state: NetworkState, m: MixingMatrix, costs, eta: float,
              _batch=None) -> NetworkState:
    """One synchronous DPPA round: mix with neighbours, then a local prox step."""
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    _check(state, m, costs)
    xhat = mix(m, state.x)
    if _batch is not None:
        new = _batch.prox(xhat, eta)
    else:
        new = np.stack([f.prox(xhat[i], eta) for i, f in enumerate(costs)])
    return NetworkState(state.t + 1, new)


def dgd_step(state: NetworkState, m: MixingMatrix, costs, eta: float,
             _batch=None) -> NetworkState:
    """One DGD round; gradients are taken at the current (pre-mixing) iterates."""
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    _check(state, m, costs)
    return NetworkState(state.t + 1, mix(m, state.x) - eta * _gradients(costs, state.x, _batch))


def error_functionals(state: NetworkState, xstar) -> ErrorFunctionals:
    """``A_t``, ``B_t`` and the mean distance of agents to ``xstar``."""
    x = state.x
    n = x.shape[0]
    xbar = state.xbar
    b_t = float(np.linalg.norm(x - xbar) / math.sqrt(n))
    if xstar is None:
        return ErrorFunctionals(float("nan"), b_t, float("nan"))
    xstar = np.asarray(xstar, dtype=float)
    a_t = float(np.linalg.norm(xbar - xstar))
    mean_err = float(np.linalg.norm(x - xstar, axis=1).sum() / n)
    return ErrorFunctionals(a_t, b_t, mean_err)


def disagreement_ledger(state: NetworkState, fp) -> float:
    """``sum_k ||x_k - x_k^*||`` against a fixed point of the penalized cost."""
    return float(np.linalg.norm(state.x - np.asarray(fp, dtype=float), axis=1).sum())


def averaged_identity_residual(prev: NetworkState, new: NetworkState, costs, eta: float) -> float:
    """Norm of ``xbar(t+1) + (eta/n) sum_k grad f_k(x_k(t+1)) - xbar(t)``."""
    n = new.x.shape[0]
    g = _gradients(costs, new.x).sum(axis=0)
    return float(np.linalg.norm(new.xbar + eta / n * g - prev.xbar))


def recursion_residuals(consts: InstanceConstants, eta: float,
                        prev: ErrorFunctionals, new: ErrorFunctionals) -> tuple[float, float]:
    """Residuals of the two one-step inequalities linking ``(A_t, B_t)``.

    ``r1 = (1 + eta alpha) A_{t+1} - A_t - eta L B_{t+1}`` and
    ``r2 = B_{t+1} - rho B_t - eta L B_{t+1} - eta L A_{t+1} - eta D``;
    both are nonpositive along a DPPA run.
    """
    l = consts.l_smooth
    r1 = (1.0 + eta * consts.alpha) * new.a_t - prev.a_t - eta * l * new.b_t
    r2 = (new.b_t - consts.rho_w * prev.b_t - eta * l * new.b_t - eta * l * new.a_t
          - eta * consts.d_const)
    return r1, r2


def _fixed_point_or_none(costs, m, eta):
    try:
        return solve_network_fixed_point(costs, m, eta)
    except (SingularHessianError, TypeError):
        return None


def run(algo: str, cfg: AlgoConfig, m: MixingMatrix, costs, xstar=None,
        consts: InstanceConstants | None = None, fixed_point=None) -> Trajectory:
    """Run ``cfg.rounds`` synchronous rounds of DPPA or DGD.

    Every round records the error functionals, the residuals of the two
    one-step inequalities and (DPPA only) the distance to the fixed point of
    the penalized cost. The run stops early, with ``diverged`` set, once any
    iterate entry exceeds ``cfg.overflow_guard`` in magnitude.
    """
    algo = algo.lower()
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    costs = list(costs)
    if consts is None:
        consts = instance_constants(costs, m)
    if xstar is None:
        xstar = consts.xstar
    eta = float(cfg.eta)
    d = costs[0].dim
    x0 = np.zeros((m.n, d)) if cfg.init is None else np.array(cfg.init, dtype=float)
    if x0.shape != (m.n, d):
        raise ValueError(f"init must have shape {(m.n, d)}, got {x0.shape}")
    if algo == "dppa" and fixed_point is None:
        fixed_point = _fixed_point_or_none(costs, m, eta)
    step = dppa_step if algo == "dppa" else dgd_step
    batch = _batch_for(costs)
    ledger = (lambda s: disagreement_ledger(s, fixed_point)) \
        if (algo == "dppa" and fixed_point is not None) else (lambda s: float("nan"))

    state = NetworkState(0, x0)
    err = error_functionals(state, xstar)
    rows = [TrajectoryRow(0, err.a_t, err.b_t, err.mean_err, float("nan"), float("nan"),
                          ledger(state))]
    diverged = False
    for _ in range(cfg.rounds):
        state = step(state, m, costs, eta, _batch=batch)
        new = error_functionals(state, xstar)
        r1, r2 = recursion_residuals(consts, eta, err, new)
        rows.append(TrajectoryRow(state.t, new.a_t, new.b_t, new.mean_err, r1, r2,
                                  ledger(state)))
        err = new
        if not np.all(np.abs(state.x) <= cfg.overflow_guard):
            diverged = True
            break
    return Trajectory(rows, state, diverged, algo, eta)


def zero_costs(n: int, d: int) -> list[CostFunction]:
    return [ZeroCost(d) for _ in range(n)]
