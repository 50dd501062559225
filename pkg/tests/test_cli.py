"""Command-line interface: outputs, exit codes and byte-for-byte reruns."""

import subprocess
import sys

import pytest

from dcmulticast.cli import EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_OK, main
from dcmulticast.experiments import dump_topology, load_topology, read_csv


@pytest.fixture
def small_topology(tmp_path):
    path = tmp_path / "topo.json"
    rc = main(["gen", "--seed", "4", "--nodes", "8", "--K", "4", "--range", "450",
               "--terminals", "4", "-o", str(path)])
    assert rc == EXIT_OK
    return path


def run_twice(tmp_path, argv_for):
    outs = []
    for k in range(2):
        target = tmp_path / f"out{k}"
        assert main(argv_for(str(target))) == EXIT_OK
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    return outs[0].decode()


def test_gen_round_trips(small_topology):
    text = small_topology.read_text()
    net, inst = load_topology(text)
    assert len(net.nodes) == 8 and net.K == 4 and len(inst.terminals) == 4
    assert dump_topology(net, inst) == text


def test_solve(tmp_path, small_topology):
    out = run_twice(tmp_path, lambda o: ["solve", str(small_topology), "-o", o])
    assert out.startswith("algorithm TCS\nroot ")
    assert "feasible true" in out
    for alg in ("SPT", "AMST", "MNT"):
        assert main(["solve", str(small_topology), "--algorithm", alg, "-o", str(tmp_path / alg)]) == 0
        assert "feasible true" in (tmp_path / alg).read_text()


def test_solve_two_node(tmp_path, two_node):
    path = tmp_path / "two.json"
    path.write_text(dump_topology(two_node))
    main(["solve", str(path), "--terminals", "0,1", "--es", "10", "--er", "2", "-o", str(tmp_path / "p")])
    assert (tmp_path / "p").read_text() == (
        "algorithm TCS\nroot 0\nedge 0 1\nB 0 2\nfeasible true\n"
        "tree_nodes 2\nforwarders 1\ntransmissions 1\nenergy 12\n"
    )


def test_oracle(tmp_path, small_topology):
    out = run_twice(tmp_path, lambda o: ["oracle", str(small_topology), "-o", o])
    fields = dict(line.split(" ", 1) for line in out.splitlines())
    assert fields["within_bound"] == "true"
    assert int(fields["energy_exact"]) <= int(fields["energy_approx"])
    assert int(fields["msb_exact"]) <= int(fields["msb_approx"])


def test_sweep(tmp_path):
    argv = lambda o: ["sweep", "--nodes", "30", "--width", "500", "--height", "500", "--range", "200",
                      "--K", "8", "--fractions", "0.5,1.0", "--trials", "2", "-o", o,
                      "--summary", o + ".json"]
    out = run_twice(tmp_path, argv)
    recs = read_csv(iter(out.splitlines(keepends=True)))
    assert len(recs) == 2 * 2 * 4
    assert all(r.runtime_ms == 0.0 for r in recs)
    assert (tmp_path / "out0.json").read_bytes() == (tmp_path / "out1.json").read_bytes()


def test_sweep_K_values(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["sweep", "--nodes", "20", "--terminals", "5", "--K-values", "4,8", "--trials", "1",
                 "--algorithms", "TCS", "-o", str(out)]) == 0
    assert [r.K for r in read_csv(out.open())] == [4, 8]


def test_distsim(tmp_path, small_topology):
    out = run_twice(tmp_path, lambda o: ["distsim", str(small_topology), "--base", "--plan",
                                          "--trace", o + ".trace", "-o", o])
    assert out.startswith("rounds ")
    assert "feasible true" in out
    trace = (tmp_path / "out0.trace").read_bytes()
    assert trace == (tmp_path / "out1.trace").read_bytes()
    assert trace.startswith(b"round,kind,from,to\n")


def test_exit_codes(tmp_path, small_topology, capsys):
    assert main(["solve", str(tmp_path / "missing.json")]) == EXIT_INVALID
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["solve", str(bad)]) == EXIT_INVALID
    assert main(["solve", str(small_topology), "--terminals", "0,99"]) == EXIT_INVALID
    assert main(["gen", "--range", "0.1", "--max-retries", "2"]) == EXIT_INFEASIBLE
    assert main(["oracle", str(small_topology), "--max-nodes", "3"]) == EXIT_BUDGET
    err = capsys.readouterr().err
    assert "invalid input" in err and "infeasible" in err and "budget" in err


def test_disconnected_instance(tmp_path):
    from dcmulticast import Network

    net = Network(range(4), [(0, 1), (2, 3)], 1, {u: {1} for u in range(4)})
    path = tmp_path / "split.json"
    path.write_text(dump_topology(net))
    assert main(["solve", str(path), "--terminals", "0,3"]) == EXIT_INFEASIBLE


def test_module_entry_point(small_topology):
    proc = subprocess.run([sys.executable, "-m", "dcmulticast", "solve", str(small_topology)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "feasible true" in proc.stdout
