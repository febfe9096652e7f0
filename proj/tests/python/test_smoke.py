"""Smoke tests for the python bindings."""

import math
import random

import iotmac


def test_frame_geometry():
    cfg = iotmac.FrameConfig(3, 15, 7, 5)
    assert cfg.frame_len() == 50
    assert cfg.contention_blocks() == 45
    cfg.validate()


def test_deadline_conversion():
    cfg = iotmac.FrameConfig(3, 15, 7, 5)
    assert iotmac.deadline_to_slots(120.0, 0.0, cfg) == 18
    assert iotmac.deadline_to_slots(50.0, 0.0, cfg) == 7
    assert iotmac.deadline_to_slots(-1.0, 0.0, cfg) is None


def test_feasibility_checks_agree():
    rnd = random.Random(7)
    for _ in range(200):
        flows = [
            iotmac.ActiveFlow(i + 1, rnd.randint(1, 4), rnd.randint(0, 8))
            for i in range(rnd.randint(0, 6))
        ]
        channels = rnd.randint(1, 3)
        assert iotmac.llf_feasible(flows, channels) == iotmac.maxflow_feasible(
            flows, channels
        )


def test_admission_prefers_light_flows():
    requests = [iotmac.AdmissionRequest(1, 3, 3), iotmac.AdmissionRequest(2, 1, 9)]
    result = iotmac.admission_control([], requests, 1)
    assert result.accepted == [2, 1]

    rejected = iotmac.admission_control(
        [], [iotmac.AdmissionRequest(1, 2, 3), iotmac.AdmissionRequest(2, 3, 3)], 1
    )
    assert rejected.accepted == [1]


def test_optimal_p_closed_form():
    cfg = iotmac.FrameConfig(3, 15, 7, 5)
    assert math.isclose(iotmac.optimal_p(2.0, cfg), 0.45)
    assert iotmac.optimal_p(0.1, cfg) == 1.0


def test_generated_traffic_shape():
    model = iotmac.LoadModel.deterministic(3)
    flows = iotmac.generate_arrivals(0.2, 2000.0, model, 5, seed=1)
    assert flows
    assert all(f.load == 3 for f in flows)
    assert all(f.deadline >= 25.0 for f in flows)
    arrivals = [f.arrival for f in flows]
    assert arrivals == sorted(arrivals)


def test_csma_uncontended_flow_succeeds():
    model = iotmac.LoadModel.deterministic(1)
    flows = iotmac.generate_arrivals(0.001, 20000.0, model, 5, seed=3)
    metrics = iotmac.run_csma(flows, iotmac.CsmaParams(), 20000.0, seed=4)
    assert metrics.successes > 0
    assert iotmac.energy_per_success(metrics) >= 5.0


def test_run_experiment_is_deterministic():
    cfg = iotmac.ExperimentConfig()
    cfg.lambdas = [0.1]
    cfg.frames = 100
    cfg.replications = 2
    cfg.seed = 5
    rows1 = iotmac.run_experiment(cfg)
    rows2 = iotmac.run_experiment(cfg)
    assert iotmac.results_csv(rows1) == iotmac.results_csv(rows2)
    assert rows1[0].accepted == rows1[0].completed  # admitted flows all finish
    assert "lambda_grid" in iotmac.config_json(cfg)


def test_ucb_round_trip():
    arms = [
        iotmac.FrameConfig(3, 20, 6, 5),
        iotmac.FrameConfig(3, 15, 7, 5),
        iotmac.FrameConfig(3, 10, 8, 5),
        iotmac.FrameConfig(3, 5, 9, 5),
    ]
    ucb = iotmac.UcbState(arms, 50, 0.05)
    assert [ucb.select() for _ in range(1)] == [0]
    for arm, reward in enumerate([0.5, 0.1, 0.1, 0.1]):
        ucb.update(arm, reward)
    assert ucb.select() == 0
    assert ucb.total_plays() == 4
