"""Instance constants, stepsize thresholds, fixed points and error bounds.

Conventions: ``L`` is the largest local smoothness constant, ``alpha`` the
strong convexity modulus of the network-average cost ``(1/n) sum_i f_i``,
and ``D`` the largest local gradient norm at the global optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixing import MixingMatrix


class SingularHessianError(ValueError):
    """The aggregate cost is not strongly convex, so the optimizer is not unique."""


class RadiusUndefinedError(ValueError):
    """The stepsize is too large for the closed-form boundedness radius."""


@dataclass
class InstanceConstants:
    l_smooth: float
    alpha: float
    d_const: float
    rho_w: float
    lambda_min: float
    xstar: np.ndarray | None
    eta_c: float
    eta_dppa: float
    r_bound: float | None = None

    @property
    def theorem_checks_enabled(self) -> bool:
        return self.alpha > 0 and self.xstar is not None

    def to_dict(self) -> dict:
        out = {
            "L": self.l_smooth,
            "alpha": self.alpha,
            "D": self.d_const,
            "rho_w": self.rho_w,
            "lambda_min": self.lambda_min,
            "eta_c": self.eta_c,
            "eta_dppa": self.eta_dppa,
            "xstar": None if self.xstar is None else [float(v) for v in self.xstar],
        }
        if self.r_bound is not None:
            out["R"] = self.r_bound
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceConstants":
        xs = data.get("xstar")
        return cls(
            l_smooth=data["L"], alpha=data["alpha"], d_const=data["D"],
            rho_w=data["rho_w"], lambda_min=data["lambda_min"],
            xstar=None if xs is None else np.asarray(xs, dtype=float),
            eta_c=data["eta_c"], eta_dppa=data["eta_dppa"], r_bound=data.get("R"),
        )


def _quadratic_parts(costs):
    """Hessians and linear terms ``b_k = -grad f_k(0)`` of quadratic costs."""
    hess, lin = [], []
    for f in costs:
        if not hasattr(f, "hessian"):
            raise TypeError(f"{type(f).__name__} is not a quadratic cost")
        hess.append(np.asarray(f.hessian(), dtype=float))
        lin.append(-np.asarray(f.gradient(np.zeros(f.dim)), dtype=float))
    return hess, lin


def _sum_in_order(mats):
    total = np.zeros_like(mats[0])
    for m in mats:
        total = total + m
    return total


def solve_global_optimum(costs) -> np.ndarray:
    """Unique minimizer of ``sum_i f_i`` for quadratic costs."""
    hess, lin = _quadratic_parts(costs)
    h = _sum_in_order(hess)
    lam = np.linalg.eigvalsh(h)
    if lam[0] <= 1e-12 * max(lam[-1], 1.0):
        raise SingularHessianError(
            f"aggregate Hessian is singular (smallest eigenvalue {lam[0]:.3e})")
    return np.linalg.solve(h, _sum_in_order(lin))


def strong_convexity_alpha(costs) -> float:
    """Smallest eigenvalue of the Hessian of ``(1/n) sum_i f_i``.

    The average (rather than the sum) is the normalization under which the
    averaged DPPA recursion contracts at rate ``1 / (1 + eta * alpha)``.
    """
    hess, _ = _quadratic_parts(costs)
    h = _sum_in_order(hess) / len(hess)
    return max(float(np.linalg.eigvalsh(h)[0]), 0.0)


def smoothness_l(costs) -> float:
    return max(float(f.smoothness) for f in costs)


def gradient_spread(costs, xstar) -> float:
    """``D = max_i ||grad f_i(x*)||``."""
    return max(float(np.linalg.norm(f.gradient(xstar))) for f in costs)


def dgd_stability_threshold(l: float, lambda_min: float) -> float:
    """Largest stepsize ``(1 + lambda_min(W)) / L`` with guaranteed DGD stability."""
    if not l > 0:
        raise ValueError(f"L must be positive, got {l}")
    return (1.0 + lambda_min) / l


def _dppa_coefficients(alpha, l, rho_w):
    a = alpha * alpha + alpha * l
    b = alpha + l - (1.0 - rho_w) * alpha * alpha / l
    c = -(1.0 - rho_w) * alpha / l
    return a, b, c


def dppa_threshold_polynomial(eta: float, alpha: float, l: float, rho_w: float) -> float:
    """``q(eta)``; the DPPA boundedness condition is ``q(eta) < 0``."""
    a, b, c = _dppa_coefficients(alpha, l, rho_w)
    return a * eta * eta + b * eta + c


def dppa_stability_threshold(alpha: float, l: float, rho_w: float) -> float:
    """Positive root of ``q``; every ``eta`` in ``(0, root)`` satisfies ``q < 0``."""
    if not 0 < alpha <= l:
        raise ValueError(f"need 0 < alpha <= L, got alpha={alpha}, L={l}")
    if not 0 <= rho_w < 1:
        raise ValueError(f"need 0 <= rho_w < 1, got {rho_w}")
    a, b, c = _dppa_coefficients(alpha, l, rho_w)
    # b > 0 whenever alpha <= L, so this form avoids cancellation
    return -2.0 * c / (b + math.sqrt(b * b - 4.0 * a * c))


def network_hessian(costs, m: MixingMatrix, eta: float) -> np.ndarray:
    """Hessian of ``F_eta(x) = sum_k f_k(x_k) + x^T (I - W) x / (2 eta)``."""
    hess, _ = _quadratic_parts(costs)
    n, d = len(hess), hess[0].shape[0]
    w = m.w if isinstance(m, MixingMatrix) else np.asarray(m, dtype=float)
    big = np.kron(np.eye(n) - w, np.eye(d)) / eta
    for k, h in enumerate(hess):
        big[k * d:(k + 1) * d, k * d:(k + 1) * d] += h
    return big


def solve_network_fixed_point(costs, m: MixingMatrix, eta: float) -> np.ndarray:
    """Stationary point of ``F_eta`` as an ``(n, d)`` array.

    This is also the fixed point of the DPPA map with stepsize ``eta``.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    _, lin = _quadratic_parts(costs)
    n, d = len(lin), lin[0].shape[0]
    big = network_hessian(costs, m, eta)
    rhs = np.concatenate(lin)
    lam = np.linalg.eigvalsh(big)
    if lam[0] <= 1e-12 * max(lam[-1], 1.0):
        raise SingularHessianError(
            "the network system is singular; the minimizers of F_eta form a subspace")
    return np.linalg.solve(big, rhs).reshape(n, d)


def check_f_eta_bounded_below(costs, m: MixingMatrix, eta: float, tol: float = 1e-9) -> bool:
    """Whether ``F_eta`` is bounded below and attains its minimum.

    For a quadratic this holds iff its Hessian is positive semidefinite and
    the stationarity system is consistent.
    """
    _, lin = _quadratic_parts(costs)
    big = network_hessian(costs, m, eta)
    lam = np.linalg.eigvalsh(big)
    scale = max(abs(lam[0]), abs(lam[-1]), 1.0)
    if lam[0] < -tol * scale:
        return False
    rhs = np.concatenate(lin)
    sol, *_ = np.linalg.lstsq(big, rhs, rcond=None)
    return bool(np.linalg.norm(big @ sol - rhs) <= tol * scale * (1.0 + np.linalg.norm(rhs)))


def radius_denominator(consts: InstanceConstants, eta: float) -> float:
    alpha, l, rho = consts.alpha, consts.l_smooth, consts.rho_w
    c = alpha / l
    return (c * (1.0 - eta * l - eta * eta * l * l / (1.0 + eta * alpha))
            - c * rho - eta * l / (1.0 + eta * alpha))


def radius_r(consts: InstanceConstants, eta: float, a0: float, b0: float, b1: float) -> float:
    """Uniform bound ``R`` on ``A_t`` (and ``(L/alpha) B_t``) along a DPPA run.

    Raises :class:`RadiusUndefinedError` when the stepsize violates the
    boundedness condition, in which case callers use a measured radius.
    """
    denom = radius_denominator(consts, eta)
    if not denom > 0:
        raise RadiusUndefinedError(
            f"eta={eta:g} exceeds the certified threshold {consts.eta_dppa:g} "
            f"(denominator {denom:.3e})")
    ratio = consts.l_smooth / consts.alpha
    return max(a0, ratio * b0, ratio * b1, eta * consts.d_const / denom)


def bound_plateau_a(consts: InstanceConstants, eta: float, r: float) -> float:
    """Asymptotic level ``eta L (2RL + D) / (alpha (1 - rho_w))`` of the A-bound."""
    l = consts.l_smooth
    return eta * l * (2.0 * r * l + consts.d_const) / (consts.alpha * (1.0 - consts.rho_w))


def theorem11_bound_a(t: int, consts: InstanceConstants, eta: float,
                      a0: float, b0: float, r: float) -> float:
    """Upper bound on ``A_t = ||xbar(t) - x*||`` for a DPPA run."""
    q = 1.0 / (1.0 + eta * consts.alpha)
    first = a0 * q ** t
    if t == 0:
        middle = 0.0
    else:
        rho = consts.rho_w
        middle = t * eta * consts.l_smooth * b0 * rho * q * max(rho, q) ** (t - 1)
    return first + middle + bound_plateau_a(consts, eta, r)


def theorem11_bound_b(t: int, consts: InstanceConstants, eta: float,
                      b0: float, r: float) -> float:
    """Upper bound on the consensus error ``B_t`` for a DPPA run."""
    rho = consts.rho_w
    return rho ** t * b0 + eta * (2.0 * r * consts.l_smooth + consts.d_const) / (1.0 - rho)


def instance_constants(costs, m: MixingMatrix) -> InstanceConstants:
    """All stepsize-independent constants of an instance.

    When the aggregate cost is not strongly convex, ``alpha`` is reported as 0,
    ``xstar`` as ``None`` and the DPPA threshold as ``nan``.
    """
    l = smoothness_l(costs)
    try:
        xstar = solve_global_optimum(costs)
        alpha = strong_convexity_alpha(costs)
    except SingularHessianError:
        xstar, alpha = None, 0.0
    except TypeError:
        xstar, alpha = None, 0.0
    d_const = gradient_spread(costs, xstar) if xstar is not None else float("nan")
    eta_c = dgd_stability_threshold(l, m.lambda_min) if l > 0 else float("inf")
    if alpha > 0 and m.rho_w < 1:
        eta_dppa = dppa_stability_threshold(alpha, l, m.rho_w)
    else:
        eta_dppa = float("nan")
    return InstanceConstants(l, alpha, d_const, m.rho_w, m.lambda_min, xstar, eta_c, eta_dppa)
