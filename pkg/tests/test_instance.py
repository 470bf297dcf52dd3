import json

import numpy as np
import pytest

from dppa.instance import (Instance, InstanceValidationError, canonical_json, gaussian_costs,
                           generate_instance)
from dppa.mixing import validate_assumption2
from dppa.netgraph import is_connected


def test_tiny_instance_is_reproducible():
    a = generate_instance(2, 1, 1, 1.0, 7, 0.5)
    b = generate_instance(2, 1, 1, 1.0, 7, 0.5)
    assert a.to_json() == b.to_json()
    assert a.graph.edges == ((0, 1),)
    assert a.meta == {"n": 2, "m": 1, "d": 1, "link_prob": 1.0, "seed": 7, "scale": 0.5,
                      "weights": "metropolis-hastings"}


def test_reference_scale_instance_is_valid(reference_instance):
    inst = reference_instance
    assert inst.n == 20 and inst.d == 10
    assert all(q.a.shape == (5, 10) and q.y.shape == (5,) for q in inst.costs)
    assert is_connected(inst.graph)
    assert validate_assumption2(inst.mixing) == []


def test_max_degree_weight_scheme_tolerates_only_zero_diagonal():
    inst = generate_instance(seed=4, weights="metropolis")
    problems = validate_assumption2(inst.mixing)
    assert problems and all(p.startswith("zero diagonal") for p in problems)
    assert inst.mixing.rho_w < 1
    Instance.from_dict(json.loads(inst.to_json()))


def test_gaussian_entries_are_standard_normal():
    costs = gaussian_costs(200, 5, 10, seed=0)
    a = np.concatenate([q.a.ravel() for q in costs])
    y = np.concatenate([q.y for q in costs])
    assert abs(a.mean()) < 0.03 and abs(a.std() - 1) < 0.03
    assert abs(y.mean()) < 0.1 and abs(y.std() - 1) < 0.1


def test_cost_stream_independent_of_graph_probability():
    a = generate_instance(n=8, m=2, d=3, link_prob=0.5, seed=11)
    b = generate_instance(n=8, m=2, d=3, link_prob=0.9, seed=11)
    for qa, qb in zip(a.costs, b.costs):
        np.testing.assert_array_equal(qa.a, qb.a)


def test_json_round_trip_and_canonical_form(small_instance):
    text = small_instance.to_json()
    assert text == canonical_json(json.loads(text))
    back = Instance.from_dict(json.loads(text))
    assert back.to_json() == text


@pytest.mark.parametrize("mutate", [
    lambda d: d["graph"]["edges"].pop(),
    lambda d: d["mixing"]["w"][0].__setitem__(0, d["mixing"]["w"][0][0] + 0.1),
    lambda d: d["meta"].__setitem__("n", 99),
    lambda d: d["mixing"].__setitem__("rho_w", 0.123),
    lambda d: d["costs"].pop(),
])
def test_tampered_instances_rejected(small_instance, mutate):
    data = json.loads(small_instance.to_json())
    mutate(data)
    with pytest.raises((InstanceValidationError, ValueError)):
        Instance.from_dict(data)


def test_size_validation():
    with pytest.raises(ValueError):
        generate_instance(n=4, m=0, d=3)
