"""scikit-learn compatible distributed least-squares regressors.

The training rows are split among ``n_agents`` agents on a random network;
each agent holds the cost ``scale * ||X_k w - y_k||^2`` on its own rows and
the network runs DPPA (or DGD) to agree on a coefficient vector.

>>> from sklearn.datasets import make_regression
>>> X, y = make_regression(n_samples=200, n_features=5, noise=0.1, random_state=0)
>>> reg = DPPARegressor(eta=0.05, rounds=300, n_agents=8, random_state=0).fit(X, y)
>>> reg.coef_.shape
(5,)
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .algorithms import AlgoConfig, run
from .costs import QuadraticCost
from .instance import gate_violations
from .mixing import MixingMatrix, build_weights
from .netgraph import CommGraph, generate_random_graph
from .theory import instance_constants


def _agent_partition(n_samples, n_agents, agents):
    if agents is None:
        n = max(1, min(int(n_agents), n_samples))
        return [np.arange(k, n_samples, n) for k in range(n)]
    agents = np.asarray(agents)
    if agents.shape != (n_samples,):
        raise ValueError(f"agents must have shape ({n_samples},), got {agents.shape}")
    return [np.flatnonzero(agents == lab) for lab in np.unique(agents)]


class _DistributedLeastSquares(RegressorMixin, BaseEstimator):
    _algo = ""

    def __init__(self, eta=0.01, rounds=500, n_agents=20, link_prob=0.4,
                 weights="metropolis-hastings", scale=0.5, overflow_guard=1e12,
                 random_state=None):
        self.eta = eta
        self.rounds = rounds
        self.n_agents = n_agents
        self.link_prob = link_prob
        self.weights = weights
        self.scale = scale
        self.overflow_guard = overflow_guard
        self.random_state = random_state

    def _network(self, n):
        if n == 1:
            return CommGraph(1, ()), MixingMatrix.from_weights([[1.0]])
        seed = self.random_state
        if not isinstance(seed, (int, np.integer)):
            seed = int(check_random_state(seed).randint(2**31))
        g = generate_random_graph(
            n, self.link_prob, seed,
            accept=lambda g: not gate_violations(build_weights(g, self.weights), self.weights))
        return g, build_weights(g, self.weights)

    def fit(self, X, y, agents=None):
        """Fit on ``(X, y)``; ``agents`` optionally assigns each row to an agent.

        Without ``agents`` the rows are dealt round-robin to ``n_agents`` agents.
        """
        X, y = check_X_y(X, y, y_numeric=True, dtype=np.float64)
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        parts = _agent_partition(X.shape[0], self.n_agents, agents)
        self.graph_, self.mixing_ = self._network(len(parts))
        costs = [QuadraticCost(X[idx], y[idx], self.scale) for idx in parts]
        self.constants_ = instance_constants(costs, self.mixing_)
        cfg = AlgoConfig(self.eta, self.rounds, overflow_guard=self.overflow_guard)
        self.trajectory_ = run(self._algo, cfg, self.mixing_, costs, consts=self.constants_)
        self.diverged_ = self.trajectory_.diverged
        if self.diverged_:
            warnings.warn(f"{self._algo.upper()} diverged at round "
                          f"{self.trajectory_.rows[-1].t} with eta={self.eta}",
                          ConvergenceWarning)
        self.agent_coefs_ = self.trajectory_.final_state.x
        self.coef_ = self.trajectory_.final_state.xbar
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_


class DPPARegressor(_DistributedLeastSquares):
    """Least squares solved by the distributed proximal point algorithm."""

    _algo = "dppa"


class DGDRegressor(_DistributedLeastSquares):
    """Least squares solved by distributed gradient descent."""

    _algo = "dgd"
