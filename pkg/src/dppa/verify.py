"""Check a recorded trajectory against the theoretical guarantees."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .algorithms import Trajectory
from .instance import Instance
from .theory import (InstanceConstants, RadiusUndefinedError, instance_constants,
                     radius_r, theorem11_bound_a, theorem11_bound_b)

INEQUALITY_SLACK = 1e-7
LEDGER_SLACK = 1e-9
BOUND_SLACK = 1e-9
RESIDUAL_MATCH_TOL = 1e-9


class TrajectoryMismatchError(ValueError):
    pass


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "n/a"
    worst_margin: float | None = None
    detail: str = ""


@dataclass
class Report:
    algo: str
    eta: float
    constants: dict
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        return {"algo": self.algo, "eta": self.eta, "passed": self.passed,
                "constants": self.constants, "checks": [asdict(c) for c in self.checks]}

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            margin = "" if c.worst_margin is None else f" worst_margin={c.worst_margin:.3e}"
            out.append(f"[{c.status.upper():4}] {c.name}{margin} {c.detail}".rstrip())
        return out


def _threshold_check(name, values, slack):
    values = values[np.isfinite(values)] if values.size else values
    if values.size == 0:
        return Check(name, "n/a", detail="no finite values")
    worst = float(values.max())
    return Check(name, "pass" if worst <= slack else "fail", worst, f"slack={slack:g}")


def bound_radius(consts: InstanceConstants, eta: float, a: np.ndarray,
                 b: np.ndarray) -> tuple[float, str]:
    """Radius used by the bounds: closed form if defined, else the measured sup."""
    try:
        return radius_r(consts, eta, a[0], b[0], b[1] if b.size > 1 else b[0]), "closed-form"
    except RadiusUndefinedError:
        return float(max(a.max(), b.max())), "measured"


def verify_trajectory(inst: Instance, traj: Trajectory, algo: str, eta: float,
                      consts: InstanceConstants | None = None) -> Report:
    """Run every applicable check and collect pass/fail with worst margins.

    Inequality residuals are recomputed from the recorded ``a_t``/``b_t``
    columns with freshly derived constants, so an edited CSV cannot hide
    behind its own stored residuals.
    """
    if consts is None:
        consts = instance_constants(inst.costs, inst.mixing)
    t = traj.t
    if t.size == 0:
        raise TrajectoryMismatchError("empty trajectory")
    if t[0] != 0 or np.any(np.diff(t) != 1):
        raise TrajectoryMismatchError("rounds must run 0, 1, 2, ... without gaps")
    report = Report(algo, eta, consts.to_dict())
    checks = report.checks
    a, b = traj.column("a_t"), traj.column("b_t")

    nonfinite = not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)))
    if traj.diverged or nonfinite:
        checks.append(Check("stable", "fail", detail=f"divergence guard hit by t={int(t[-1])}"))
    else:
        checks.append(Check("stable", "pass"))

    if algo != "dppa":
        for name in ("recursion r1", "recursion r2", "ledger monotone",
                     "bound A_t", "bound B_t", "stored residuals"):
            checks.append(Check(name, "n/a", detail="DPPA-only check"))
        return report
    if not consts.theorem_checks_enabled:
        for name in ("recursion r1", "recursion r2", "bound A_t", "bound B_t", "stored residuals"):
            checks.append(Check(name, "n/a", detail="aggregate cost not strongly convex"))
    else:
        l, al, rho, dc = consts.l_smooth, consts.alpha, consts.rho_w, consts.d_const
        r1 = (1 + eta * al) * a[1:] - a[:-1] - eta * l * b[1:]
        r2 = b[1:] - rho * b[:-1] - eta * l * b[1:] - eta * l * a[1:] - eta * dc
        checks.append(_threshold_check("recursion r1", r1, INEQUALITY_SLACK))
        checks.append(_threshold_check("recursion r2", r2, INEQUALITY_SLACK))

        stored = np.concatenate([traj.column("r1")[1:] - r1, traj.column("r2")[1:] - r2])
        stored = stored[np.isfinite(stored)]
        dev = float(np.abs(stored).max()) if stored.size else 0.0
        scale = 1.0 + float(np.nanmax(np.abs(np.concatenate([a, b])))) if a.size else 1.0
        checks.append(Check("stored residuals", "pass" if dev <= RESIDUAL_MATCH_TOL * scale else "fail",
                            dev, "recorded r1/r2 vs recomputation"))

        r, source = bound_radius(consts, eta, a, b)
        bound_a = np.array([theorem11_bound_a(int(k), consts, eta, a[0], b[0], r) for k in t])
        bound_b = np.array([theorem11_bound_b(int(k), consts, eta, b[0], r) for k in t])
        for name, bound, meas in (("bound A_t", bound_a, a), ("bound B_t", bound_b, b)):
            margin = float(np.min(bound - meas))
            checks.append(Check(name, "pass" if margin >= -BOUND_SLACK else "fail", margin,
                                f"R={r:.6g} ({source})"))

    ledger = traj.column("ledger")
    if np.all(np.isnan(ledger)):
        checks.append(Check("ledger monotone", "n/a", detail="no fixed point recorded"))
    else:
        checks.append(_threshold_check("ledger monotone", np.diff(ledger), LEDGER_SLACK))
    return report
