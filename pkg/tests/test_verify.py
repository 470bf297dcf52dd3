import pytest

from dppa.algorithms import AlgoConfig, Trajectory, TrajectoryRow, run
from dppa.theory import instance_constants
from dppa.verify import TrajectoryMismatchError, verify_trajectory


def statuses(report):
    return {c.name: c.status for c in report.checks}


@pytest.fixture(scope="module")
def stable_run(small_instance):
    c = instance_constants(small_instance.costs, small_instance.mixing)
    eta = 0.5 * c.eta_dppa
    return eta, run("dppa", AlgoConfig(eta, 400), small_instance.mixing, small_instance.costs,
                    consts=c)


def test_stable_dppa_run_passes_everything(small_instance, stable_run):
    eta, tr = stable_run
    rep = verify_trajectory(small_instance, tr, "dppa", eta)
    assert rep.passed
    assert set(statuses(rep).values()) == {"pass"}
    assert "closed-form" in next(c.detail for c in rep.checks if c.name == "bound A_t")


def test_large_eta_uses_measured_radius(small_instance):
    tr = run("dppa", AlgoConfig(5.0, 100), small_instance.mixing, small_instance.costs)
    rep = verify_trajectory(small_instance, tr, "dppa", 5.0)
    assert rep.passed
    assert "measured" in next(c.detail for c in rep.checks if c.name == "bound B_t")


def test_dgd_checks_are_not_applicable(small_instance):
    tr = run("dgd", AlgoConfig(0.01, 50), small_instance.mixing, small_instance.costs)
    rep = verify_trajectory(small_instance, tr, "dgd", 0.01)
    st = statuses(rep)
    assert st.pop("stable") == "pass"
    assert set(st.values()) == {"n/a"}
    assert rep.passed


def test_inflated_a_t_fails_bound(small_instance, stable_run):
    eta, tr = stable_run
    rows = list(tr.rows)
    k = len(rows) // 2
    r = rows[k]
    rows[k] = TrajectoryRow(r.t, r.a_t + 50.0, r.b_t, r.mean_err, r.r1, r.r2, r.ledger)
    rep = verify_trajectory(small_instance, Trajectory(rows), "dppa", eta)
    st = statuses(rep)
    assert not rep.passed
    assert st["bound A_t"] == "fail"
    assert st["stored residuals"] == "fail"


def test_gapped_rounds_rejected(small_instance, stable_run):
    eta, tr = stable_run
    with pytest.raises(TrajectoryMismatchError):
        verify_trajectory(small_instance, Trajectory(tr.rows[::2]), "dppa", eta)
    with pytest.raises(TrajectoryMismatchError):
        verify_trajectory(small_instance, Trajectory([]), "dppa", eta)


def test_report_serializes(small_instance, stable_run):
    eta, tr = stable_run
    rep = verify_trajectory(small_instance, tr, "dppa", eta)
    d = rep.to_dict()
    assert d["passed"] is True and len(d["checks"]) == len(rep.lines())
