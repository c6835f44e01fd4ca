"""JSON instance round trips and command-line behavior.

CLI commands run in process through main(argv); one test exercises the
installed console script end to end.
"""

import itertools
import json
import subprocess
import sys

import numpy as np
import pytest

import hardclust as hc
from hardclust import instances
from hardclust.cli import main


def test_dumps_full_float_precision_and_determinism():
    payload = {"kind": "points", "metric": "linf", "dim": 1, "points": [[0.1]]}
    text = instances.dumps(payload)
    assert "0.10000000000000001" in text
    assert text.endswith("\n")
    assert instances.dumps(payload) == text
    parsed = json.loads(text)
    assert parsed["points"][0][0] == 0.1


def test_dumps_handles_numpy_and_scalars():
    text = instances.dumps(
        {"a": np.array([1.0, 2.0]), "b": True, "c": None, "d": np.int64(3)}
    )
    back = json.loads(text)
    assert back == {"a": [1.0, 2.0], "b": True, "c": None, "d": 3}


def test_round_trip_points():
    rng = np.random.default_rng(71)
    ps = hc.PointSet(dim=2, points=rng.normal(size=(4, 2)), metric="l1")
    loaded = instances.from_payload(json.loads(instances.dumps(
        instances.points_payload(ps, k=2)
    )))
    assert loaded.kind == "points" and loaded.k == 2
    assert loaded.payload.metric == "l1"
    assert np.array_equal(loaded.payload.points, ps.points)


def test_round_trip_finite_metric():
    fm = hc.FiniteMetric(dist=np.array([[0.0, 1.5], [1.5, 0.0]]))
    loaded = instances.from_payload(json.loads(instances.dumps(
        instances.finite_metric_payload(fm)
    )))
    assert loaded.kind == "finite_metric" and loaded.k is None
    assert np.array_equal(loaded.payload.dist, fm.dist)


def test_round_trip_setsystem_graph_vertex_sets():
    sys_ = hc.SetSystem(n=4, sets=[(0, 1), (2, 3)])
    ls = instances.from_payload(json.loads(instances.dumps(
        instances.setsystem_payload(sys_, k=1)
    )))
    assert ls.payload.sets == sys_.sets

    g = hc.orient_edges(3, [(0, 1), (1, 2)])
    lg = instances.from_payload(json.loads(instances.dumps(
        instances.graph_payload(g)
    )))
    assert lg.payload.arcs == g.arcs

    lv = instances.from_payload(json.loads(instances.dumps(
        instances.vertex_sets_payload([(0, 2), (1,)])
    )))
    assert lv.payload == [(0, 2), (1,)]


def test_round_trip_gadget_rebuilds_points():
    g = hc.orient_edges(3, [(0, 1), (1, 2)])
    gadget = hc.build_gadget(g, "lattice")
    gadget.independent_sets = [(0, 2)]
    loaded = instances.from_payload(json.loads(instances.dumps(
        instances.gadget_payload(gadget, k=1)
    )))
    assert loaded.payload.variant == "lattice"
    assert np.array_equal(loaded.payload.points.points, gadget.points.points)
    assert loaded.payload.independent_sets == [(0, 2)]


def test_round_trip_johnson():
    inst = hc.cov_johnson(5, 2)
    loaded = instances.from_payload(json.loads(instances.dumps(
        instances.johnson_payload(inst, k=3)
    )))
    assert loaded.payload.n == 5 and loaded.payload.z == 2
    assert loaded.payload.sets == inst.sets


def test_from_payload_validation_errors():
    with pytest.raises(instances.InstanceFormatError):
        instances.from_payload({"kind": "mystery"})
    with pytest.raises(instances.InstanceFormatError):
        instances.from_payload({"kind": "points", "k": 0})
    with pytest.raises(instances.InstanceFormatError):
        instances.from_payload({"kind": "points", "metric": "l2"})
    with pytest.raises(instances.InstanceFormatError):
        instances.from_payload(
            {"kind": "finite_metric", "n": 3, "dist": [[0.0, 1.0], [1.0, 0.0]]}
        )
    with pytest.raises(instances.InstanceFormatError):
        instances.from_payload([1, 2, 3])


def test_load_instance_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "points",')
    with pytest.raises(json.JSONDecodeError):
        instances.load_instance(str(bad))
    with pytest.raises(FileNotFoundError):
        instances.load_instance(str(tmp_path / "absent.json"))


# ---------------------------------------------------------------------------
# command line


def test_cli_gen_points_and_solve(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    assert main(["gen", "points", "--n", "6", "--dim", "2", "--seed", "3",
                 "--k", "2", "--out", str(pts)]) == 0
    loaded = instances.load_instance(str(pts))
    assert loaded.kind == "points" and loaded.k == 2
    capsys.readouterr()

    assert main(["solve", "--in", str(pts), "--algo", "exact",
                 "--objective", "median", "--k", "2"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "algo\tobjective\tk\tn\tcost"
    assert lines[-1].startswith("cost ")
    assert "#version=" in out and "#seed=" in out
    cost = float(lines[-1].split()[1])

    # the exact solve agrees with the library call
    _, direct = hc.brute_force_cluster(loaded.payload, 2, "median", mode="continuous")
    assert cost == pytest.approx(direct, rel=1e-12)


def test_cli_solve_epsnet_and_coreset(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    main(["gen", "points", "--n", "7", "--dim", "1", "--seed", "5",
          "--k", "2", "--out", str(pts)])
    capsys.readouterr()
    assert main(["solve", "--in", str(pts), "--algo", "epsnet",
                 "--objective", "median", "--k", "2", "--eps", "0.5"]) == 0
    eps_cost = float(capsys.readouterr().out.strip().splitlines()[-1].split()[1])
    assert main(["solve", "--in", str(pts), "--algo", "coreset",
                 "--objective", "median", "--k", "2", "--s", "5"]) == 0
    cs_cost = float(capsys.readouterr().out.strip().splitlines()[-1].split()[1])
    loaded = instances.load_instance(str(pts))
    _, opt = hc.brute_force_cluster(loaded.payload, 2, "median", mode="continuous")
    assert opt - 1e-9 <= eps_cost <= 1.5 * opt + 1e-9
    assert cs_cost >= opt - 1e-9


def test_cli_minsum_reduction_and_verify(tmp_path, capsys):
    sets_file = tmp_path / "sys.json"
    metric_file = tmp_path / "metric.json"
    assert main(["gen", "setsystem", "--n", "6", "--sets", "2", "--size", "3",
                 "--seed", "14", "--k", "2", "--out", str(sets_file)]) == 0
    assert main(["reduce", "minsum", "--in", str(sets_file),
                 "--out", str(metric_file)]) == 0
    loaded = instances.load_instance(str(metric_file))
    assert loaded.kind == "finite_metric"
    assert set(np.unique(loaded.payload.dist)) <= {0.0, 1.0, 2.0}
    capsys.readouterr()
    assert main(["verify", "minsum", "--in", str(sets_file), "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert "OK" in out


def test_cli_gadget_roundtrip_and_gap(tmp_path, capsys):
    graph_file = tmp_path / "graph.json"
    cert_file = tmp_path / "cert.json"
    gadget_file = tmp_path / "gadget.json"
    assert main(["gen", "yes-graph", "--n", "6", "--q", "2", "--eps", "0.34",
                 "--seed", "4", "--out", str(graph_file),
                 "--cert-out", str(cert_file)]) == 0
    assert main(["reduce", "linf", "--graph", str(graph_file),
                 "--cert", str(cert_file), "--out", str(gadget_file)]) == 0
    loaded = instances.load_instance(str(gadget_file))
    assert loaded.kind == "gadget"
    capsys.readouterr()
    assert main(["verify", "gap", "--in", str(gadget_file), "--r", "2",
                 "--objective", "means"]) == 0
    out = capsys.readouterr().out
    assert "OK" in out and "FAIL" not in out


def test_cli_lift_and_verify(tmp_path, capsys):
    sys_file = tmp_path / "sys.json"
    lifted_file = tmp_path / "lifted.json"
    sys_ = hc.SetSystem(n=4, sets=[list(c) for c in itertools.combinations(range(4), 3)])
    instances.write_instance(str(sys_file), instances.setsystem_payload(sys_))
    assert main(["lift", "--in", str(sys_file), "--B", "2", "--a", "2",
                 "--t", "4", "--seed", "0", "--out", str(lifted_file)]) == 0
    lifted = instances.load_instance(str(lifted_file))
    assert lifted.kind == "setsystem"
    assert lifted.payload.n == 8
    capsys.readouterr()
    assert main(["verify", "lift", "--in", str(sys_file), "--B", "2", "--a", "2",
                 "--t", "4", "--seed", "0"]) == 0
    assert "OK" in capsys.readouterr().out


def test_cli_verify_lemma(capsys):
    assert main(["verify", "lemma", "--norm", "l2", "--trials", "50",
                 "--seed", "2"]) == 0
    out = capsys.readouterr().out
    assert "OK" in out


def test_cli_analyze_minsum_constants(capsys):
    assert main(["analyze", "minsum-constants"]) == 0
    out = capsys.readouterr().out
    rows = dict(
        line.split("\t") for line in out.strip().splitlines()
        if "\t" in line and not line.startswith("#")
    )
    assert float(rows["c"]) == pytest.approx(0.145, abs=1e-3)
    assert float(rows["mass"]) == pytest.approx(1.0, abs=1e-8)
    assert float(rows["gap_ratio"]) >= 1.415
    assert abs(float(rows["residual"])) <= 1e-10


def test_cli_reports_byte_identical(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert main(["analyze", "minsum-constants", "--report", str(a)]) == 0
    assert main(["analyze", "minsum-constants", "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_analyze_structure_and_transfer(tmp_path, capsys):
    sys_file = tmp_path / "sys.json"
    sys_ = hc.SetSystem(n=4, sets=[list(c) for c in itertools.combinations(range(4), 3)])
    instances.write_instance(str(sys_file), instances.setsystem_payload(sys_))
    assert main(["analyze", "structure", "--in", str(sys_file)]) == 0
    out = capsys.readouterr().out
    assert "girth" in out
    assert main(["analyze", "transfer", "--in", str(sys_file), "--B", "2",
                 "--a", "1", "--t", "4", "--k", "2", "--trials", "2",
                 "--seed", "0"]) == 0
    out = capsys.readouterr().out
    assert "diff" in out or "fraction" in out


def test_cli_error_exits(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "points",')
    assert main(["solve", "--in", str(bad), "--algo", "exact",
                 "--objective", "median", "--k", "1"]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err and "column" in err

    assert main(["solve", "--in", str(tmp_path / "absent.json"), "--algo",
                 "exact", "--objective", "median", "--k", "1"]) == 2

    unknown = tmp_path / "unknown.json"
    unknown.write_text('{"kind": "mystery"}\n')
    assert main(["solve", "--in", str(unknown), "--algo", "exact",
                 "--objective", "median", "--k", "1"]) == 2
    assert "mystery" in capsys.readouterr().err


def test_cli_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["--jobs", "0", "analyze", "minsum-constants"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_seed_env_fallback(tmp_path, monkeypatch):
    a, b, c = (tmp_path / f"{x}.json" for x in "abc")
    monkeypatch.setenv("HARDCLUST_SEED", "7")
    main(["gen", "graph", "--n", "6", "--p", "0.5", "--out", str(a)])
    main(["gen", "graph", "--n", "6", "--p", "0.5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("HARDCLUST_SEED", "8")
    main(["gen", "graph", "--n", "6", "--p", "0.5", "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()
    # explicit flag wins over the environment
    d = tmp_path / "d.json"
    main(["gen", "graph", "--n", "6", "--p", "0.5", "--seed", "7", "--out", str(d)])
    assert d.read_bytes() == a.read_bytes()


def test_console_script_installed():
    r = subprocess.run(
        ["hardclust", "--version"], capture_output=True, text=True
    )
    assert r.returncode == 0
    assert "0.1.0" in r.stdout + r.stderr
