"""Local cost functions and their proximal maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PROX_MAX_ITER = 10**6
POWER_TOL = 1e-10


class ProxConvergenceError(RuntimeError):
    pass


class CostFunction:
    """Differentiable local cost ``f_i : R^d -> R``.

    Subclasses provide ``value``, ``gradient`` and ``smoothness`` (a Lipschitz
    constant of the gradient).
    """

    dim: int

    def value(self, x) -> float:
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError

    @property
    def smoothness(self) -> float:
        raise NotImplementedError

    def prox(self, v, eta: float) -> np.ndarray:
        return prox_generic(self, v, eta)


@dataclass(frozen=True, eq=False)
class QuadraticCost(CostFunction):
    """``f(x) = scale * ||a @ x - y||^2``."""

    a: np.ndarray
    y: np.ndarray
    scale: float = 0.5
    _lipschitz: float = field(init=False, repr=False, default=None)

    def __post_init__(self):
        a = np.array(self.a, dtype=float, ndmin=2)
        y = np.array(self.y, dtype=float).reshape(-1)
        if a.shape[0] != y.shape[0]:
            raise ValueError(f"a has {a.shape[0]} rows but y has {y.shape[0]} entries")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        a.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    def value(self, x) -> float:
        r = self.a @ np.asarray(x, dtype=float) - self.y
        return self.scale * float(r @ r)

    def gradient(self, x) -> np.ndarray:
        return 2.0 * self.scale * (self.a.T @ (self.a @ np.asarray(x, dtype=float) - self.y))

    def hessian(self) -> np.ndarray:
        return 2.0 * self.scale * (self.a.T @ self.a)

    @property
    def smoothness(self) -> float:
        if self._lipschitz is None:
            object.__setattr__(self, "_lipschitz", smoothness_constant(self))
        return self._lipschitz

    def prox(self, v, eta: float) -> np.ndarray:
        return prox_quadratic(self, v, eta)

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "y": self.y.tolist(), "scale": self.scale}

    @classmethod
    def from_dict(cls, data: dict) -> "QuadraticCost":
        return cls(np.array(data["a"], dtype=float), np.array(data["y"], dtype=float),
                   float(data.get("scale", 0.5)))


class ZeroCost(CostFunction):
    """The identically zero function on ``R^d``."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def value(self, x) -> float:
        return 0.0

    def gradient(self, x) -> np.ndarray:
        return np.zeros(self.dim)

    @property
    def smoothness(self) -> float:
        return 0.0

    def prox(self, v, eta: float) -> np.ndarray:
        return np.array(v, dtype=float)


class SquaredNormCost(CostFunction):
    """``f(x) = (alpha / 2) ||x - center||^2``."""

    def __init__(self, alpha: float, center):
        self.alpha = float(alpha)
        self.center = np.asarray(center, dtype=float)
        self.dim = self.center.shape[0]

    def value(self, x) -> float:
        r = np.asarray(x, dtype=float) - self.center
        return 0.5 * self.alpha * float(r @ r)

    def gradient(self, x) -> np.ndarray:
        return self.alpha * (np.asarray(x, dtype=float) - self.center)

    @property
    def smoothness(self) -> float:
        return abs(self.alpha)


class LogCoshCost(CostFunction):
    """Robust regression loss ``sum_k log cosh(a_k . x - y_k)``.

    Convex, non-quadratic; useful for exercising the generic prox path.
    """

    def __init__(self, a, y):
        self.a = np.asarray(a, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.dim = self.a.shape[1]
        self._smooth = float(np.linalg.eigvalsh(self.a.T @ self.a)[-1])

    def value(self, x) -> float:
        r = self.a @ np.asarray(x, dtype=float) - self.y
        # log cosh r = |r| + log1p(exp(-2|r|)) - log 2, stable for large |r|
        ar = np.abs(r)
        return float(np.sum(ar + np.log1p(np.exp(-2.0 * ar)) - np.log(2.0)))

    def gradient(self, x) -> np.ndarray:
        r = self.a @ np.asarray(x, dtype=float) - self.y
        return self.a.T @ np.tanh(r)

    @property
    def smoothness(self) -> float:
        return self._smooth


def prox_residual(f: CostFunction, x, v, eta: float) -> float:
    """Norm of the prox optimality condition ``grad f(x) + (x - v) / eta``."""
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(f.gradient(x) + (x - np.asarray(v, dtype=float)) / eta))


def prox_quadratic(q: QuadraticCost, v, eta: float) -> np.ndarray:
    """Closed-form prox of a quadratic cost.

    Solves ``(2 c eta A^T A + I) x = 2 c eta A^T y + v`` through a Cholesky
    factorization; the system matrix is always symmetric positive definite.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    v = np.asarray(v, dtype=float)
    k = 2.0 * q.scale * eta
    m = k * (q.a.T @ q.a) + np.eye(q.dim)
    rhs = k * (q.a.T @ q.y) + v
    chol = np.linalg.cholesky(m)
    z = np.linalg.solve(chol, rhs)
    return np.linalg.solve(chol.T, z)


def prox_generic(f: CostFunction, v, eta: float, tol: float = 1e-12,
                 max_iter: int = PROX_MAX_ITER) -> np.ndarray:
    """Prox by gradient descent on ``f(x) + ||x - v||^2 / (2 eta)``.

    Uses the fixed step ``1 / (L + 1/eta)`` and starts from ``v``. Stops once
    the optimality residual is at most ``tol * (1 + ||v||)``.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    v = np.array(v, dtype=float)
    target = tol * (1.0 + np.linalg.norm(v))
    step = 1.0 / (f.smoothness + 1.0 / eta)
    x = v.copy()
    for _ in range(max_iter):
        g = f.gradient(x) + (x - v) / eta
        gn = np.linalg.norm(g)
        if gn <= target:
            return x
        if not np.isfinite(gn):
            raise ProxConvergenceError("prox iterates diverged; is the smoothness constant right?")
        x = x - step * g
    raise ProxConvergenceError(
        f"prox did not reach residual {target:.3e} in {max_iter} iterations; "
        "the cost may be nonconvex or its smoothness constant too small"
    )


def power_iteration_max_eig(m, tol: float = POWER_TOL, max_iter: int = 100_000,
                            seed: int = 0) -> float:
    """Largest eigenvalue of a symmetric positive semidefinite matrix."""
    m = np.asarray(m, dtype=float)
    d = m.shape[0]
    if not np.any(m):
        return 0.0
    v = np.random.default_rng(seed).standard_normal(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = m @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new = float(v @ m @ v)
        if abs(new - lam) <= tol * abs(new):
            return new
        lam = new
    return lam


def smoothness_constant(q: QuadraticCost) -> float:
    """``2 c * lambda_max(A^T A)``, by power iteration on ``A^T A``."""
    return 2.0 * q.scale * power_iteration_max_eig(q.a.T @ q.a)
