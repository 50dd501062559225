"""Topology generation, the sweep harness, summaries and file formats."""

import io
import math

import numpy as np
import pytest

from dcmulticast import InfeasibleInstanceError, validate_network
from dcmulticast.experiments import (
    CSV_HEADER,
    ExperimentConfig,
    RunRecord,
    dump_topology,
    generate_topology,
    load_topology,
    read_csv,
    run_sweep,
    summarize,
    trial_seed,
    write_csv,
)


class TestConfig:
    def test_defaults_follow_the_experimental_setup(self):
        cfg = ExperimentConfig()
        assert (cfg.n_nodes, cfg.area, cfg.range, cfg.K) == (100, (1000.0, 1000.0), 300.0, 20)
        assert (cfg.e_s, cfg.e_r) == (100, 15)
        assert cfg.slots_per_node() == 5 == math.ceil(cfg.K / 4)
        assert cfg.terminal_fractions[0] == 0.2 and cfg.terminal_fractions[-1] == 1.0

    @pytest.mark.parametrize(
        "kw",
        [
            {"range": 0},
            {"duty_slots": 0},
            {"duty_slots": 21},
            {"terminal_fraction": 0},
            {"terminal_fractions": (0.5, 1.5)},
            {"n_terminals": 101},
            {"algorithms": ("TCS", "BFS")},
            {"e_s": 1, "e_r": 2},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)

    def test_points(self):
        cfg = ExperimentConfig(K_values=(5, 10), terminal_fractions=(0.2, 0.4))
        assert [(p.K, p.terminal_fraction) for p in cfg.points()] == [
            (5, 0.2), (5, 0.4), (10, 0.2), (10, 0.4)
        ]
        fixed = ExperimentConfig(K_values=(5, 10), n_terminals=7)
        assert [(p.K, p.terminal_count()) for p in fixed.points()] == [(5, 7), (10, 7)]

    def test_trial_seed(self):
        assert trial_seed(1, 0) == trial_seed(1, 0)
        assert len({trial_seed(s, t) for s in range(3) for t in range(50)}) == 150
        assert 0 <= trial_seed(9, 9) < 2**64


class TestGenerate:
    def test_two_nodes_in_tiny_area(self):
        cfg = ExperimentConfig(n_nodes=2, area=(1.0, 1.0), range=10.0, K=4, n_terminals=2)
        net, inst = generate_topology(cfg)
        assert net.edges == {(0, 1)} and inst.terminals == {0, 1}

    def test_sparse_deployment_exhausts_retries(self):
        cfg = ExperimentConfig(range=0.1, max_retries=5)
        with pytest.raises(InfeasibleInstanceError):
            generate_topology(cfg)

    def test_geometry_and_slots(self):
        cfg = ExperimentConfig(seed=3, n_nodes=60, K=12, duty_slots=4, terminal_fraction=0.3)
        net, inst = generate_topology(cfg, trial=2)
        assert validate_network(net) == []
        pts = np.array([net.positions[u] for u in net.nodes])
        assert (pts >= 0).all() and (pts <= 1000).all()
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        expected = {(u, v) for u in range(60) for v in range(u + 1, 60) if d[u, v] <= cfg.range}
        assert net.edges == expected
        assert all(len(net.active(u)) == 4 for u in net.nodes)
        assert len(inst.terminals) == 18 and inst.source in inst.terminals

    def test_reproducible(self):
        cfg = ExperimentConfig(seed=11, n_nodes=30)
        a = dump_topology(*generate_topology(cfg, 4))
        assert a == dump_topology(*generate_topology(cfg, 4))
        assert a != dump_topology(*generate_topology(cfg, 5))


class TestTopologyFile:
    def test_round_trip(self):
        net, inst = generate_topology(ExperimentConfig(seed=2, n_nodes=25, K=6))
        text = dump_topology(net, inst)
        net2, inst2 = load_topology(text)
        assert net2 == net and inst2 == inst and net2.positions == net.positions
        assert dump_topology(net2, inst2) == text

    def test_without_instance_or_positions(self, two_node):
        net, inst = load_topology(dump_topology(two_node))
        assert net == two_node and inst is None and net.positions is None

    @pytest.mark.parametrize("text", ['{"version": 2}', '{"version": 1, "K": 2}', "[]", "nope"])
    def test_rejects_bad_documents(self, text):
        with pytest.raises(ValueError):
            load_topology(text)


SMALL = ExperimentConfig(seed=5, n_nodes=30, area=(500.0, 500.0), range=200.0, K=8,
                         terminal_fractions=(0.5,), trials=1)


class TestSweep:
    def test_pairing(self):
        recs = run_sweep(SMALL)
        assert [r.algorithm for r in recs] == ["TCS", "SPT", "AMST", "MNT"]
        assert len({(r.seed, r.n_terminals, r.n_nodes, r.K) for r in recs}) == 1

    def test_record_invariants(self):
        cfg = ExperimentConfig(**{**SMALL.__dict__, "trials": 5})
        for r in run_sweep(cfg):
            assert r.transmissions >= r.forwarders
            assert r.energy == r.transmissions * cfg.e_s + (r.tree_nodes - 1) * cfg.e_r
            assert r.runtime_ms == 0.0

    def test_timing_is_opt_in(self):
        cfg = ExperimentConfig(**{**SMALL.__dict__, "record_runtime": True})
        assert all(r.runtime_ms >= 0 for r in run_sweep(cfg))

    def test_csv_round_trip(self):
        recs = run_sweep(SMALL)
        buf = io.StringIO()
        write_csv(recs, buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == ",".join(CSV_HEADER)
        assert CSV_HEADER == ["seed", "n_nodes", "n_terminals", "K", "algorithm", "transmissions",
                              "energy", "tree_nodes", "forwarders", "runtime_ms"]
        assert read_csv(io.StringIO(text)) == recs
        with pytest.raises(ValueError):
            read_csv(io.StringIO("a,b\n1,2\n"))

    def test_reproducible_csv(self):
        cfg = ExperimentConfig(**{**SMALL.__dict__, "trials": 3, "K_values": (4, 8)})
        a, b = io.StringIO(), io.StringIO()
        write_csv(run_sweep(cfg), a)
        write_csv(run_sweep(cfg), b)
        assert a.getvalue() == b.getvalue()

    def test_tcs_beats_mnt_at_high_terminal_density(self):
        cfg = ExperimentConfig(seed=0, terminal_fractions=(0.9,), trials=20)
        s = summarize(run_sweep(cfg))
        assert s.row(20, 90, "TCS").transmissions_mean < s.row(20, 90, "MNT").transmissions_mean


def _rec(alg, tx, energy, seed=1):
    return RunRecord(seed, 10, 5, 4, alg, tx, energy, 5, 2, 0.0)


class TestSummarize:
    def test_single_records(self):
        s = summarize([_rec("TCS", 3, 330), _rec("SPT", 4, 440)])
        tcs = s.row(4, 5, "TCS")
        assert (tcs.transmissions_mean, tcs.energy_mean, tcs.transmissions_std) == (3, 330, 0)
        (red,) = s.reductions
        assert red.best_baseline == "SPT"
        assert red.transmissions_pct == pytest.approx(25.0)
        assert red.energy_pct == pytest.approx(25.0)

    def test_identical_trials_have_zero_spread(self):
        s = summarize([_rec("MNT", 6, 600, seed=1), _rec("MNT", 6, 600, seed=2)])
        assert s.row(4, 5, "MNT").transmissions_std == 0 and s.reductions == []

    def test_best_baseline_is_lowest_mean(self):
        s = summarize([_rec("TCS", 8, 800), _rec("SPT", 9, 900), _rec("MNT", 10, 700)])
        (red,) = s.reductions
        assert red.best_baseline == "SPT"
        assert red.transmissions_pct == pytest.approx(100 / 9)
        assert red.energy_pct == pytest.approx(-100 / 7)

    def test_empty(self):
        with pytest.raises(ValueError):
            summarize([])
