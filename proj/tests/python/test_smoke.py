import json
import math

import fclt


def test_measure_round_trip():
    m = fclt.DiscreteMeasure.create(1, [(0.25, [0.0]), (0.75, [1.0])])
    back = fclt.DiscreteMeasure.from_text(m.to_text())
    assert back.to_text() == m.to_text()
    assert back.dim() == 1 and back.size() == 2
    assert math.isclose(back.moment(2.0), 0.75)


def test_wasserstein():
    a = fclt.DiscreteMeasure.create(1, [(1.0, [0.0])])
    b = fclt.DiscreteMeasure.create(1, [(1.0, [3.0])])
    assert math.isclose(fclt.wasserstein(a, b, 2.0), 3.0)
    assert math.isclose(fclt.wasserstein0(a, b), 1.0)


def test_functional_catalog():
    ids = fclt.catalog_ids()
    assert "ustat2:variance" in ids
    m = fclt.DiscreteMeasure.create(1, [(0.25, [0.0]), (0.75, [1.0])])
    assert math.isclose(fclt.evaluate("ustat2:variance", m), 0.75 - 0.75**2)
    assert math.isclose(fclt.derivative("ustat2:variance", m, [2.0]), 4.0 - 3.0)


def test_poisson_two_state():
    F, residual, variance = fclt.poisson_solve(
        [[0.0], [1.0]], [[0.7, 0.3], [0.2, 0.8]], [0.0, 1.0]
    )
    assert residual <= 1e-10
    assert math.isclose(F[1] - F[0], 2.0)
    assert math.isclose(variance, 0.72)
    weights = fclt.invariant_weights([[0.0], [1.0]], [[0.7, 0.3], [0.2, 0.8]])
    assert math.isclose(weights[1], 0.6)


def test_run_experiment():
    config = {
        "family": {"kind": "iid", "mu": {"dim": 1, "atoms": [[0.25, 0.0], [0.75, 1.0]]}},
        "functional": {"id": "linear:identity"},
        "run": {"N": 200, "M": 150, "master_seed": 9, "ell": 2.0},
    }
    report = json.loads(fclt.run_experiment_json(json.dumps(config)))
    assert report["schema"] == 1
    assert math.isclose(report["predicted"]["variance"], 0.1875)
    assert not report["degenerate"]
    # identical config, identical bytes
    assert fclt.run_experiment_json(json.dumps(config)) == fclt.run_experiment_json(
        json.dumps(config)
    )
