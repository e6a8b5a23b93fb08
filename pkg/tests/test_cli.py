import json

import pytest

from cdnlab import topology
from cdnlab.cli import main
from cdnlab.sim import Scenario, dump_scenario

WORKED = "http://a836.g.akamaitech.net/7/836/123/e358f5db0045/www.foo.com/a.gif"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    graph = tmp_path / "g.txt"
    graph.write_text(topology.dump_graph(topology.random_graph(10, 0.3, 4)))
    fig2 = tmp_path / "fig2.txt"
    fig2.write_text(topology.dump_graph(topology.figure2_graph()))
    scn = tmp_path / "base.scn"
    scn.write_text(dump_scenario(Scenario(N=64, m=20, keys=100, lookups=200)))
    demands = tmp_path / "demands.txt"
    demands.write_text("0 5\n3 2\n")
    return {"graph": graph, "fig2": fig2, "scn": scn, "demands": demands}


def commands(f):
    return [
        ["topo", "gen", "-n", 12, "-p", 0.2],
        ["topo", "gen", "-n", 12, "-p", 0.2, "--seed", 3],
        ["topo", "info", f["graph"]],
        ["topo", "info", f["graph"], "--format", "json"],
        ["place", "khst-d", f["fig2"], "-D", 2, "--k", 1, "--seed", 1],
        ["place", "khst-k", f["graph"], "-K", 3],
        ["place", "kcenter", f["graph"], "-K", 2],
        ["place", "kcenter-d", f["graph"], "-D", 2],
        ["place", "greedy", f["graph"], "-M", 2, "--demands", f["demands"]],
        ["place", "backtrack", f["graph"], "-M", 3, "--ell", 1, "--format", "csv"],
        ["place", "transit", f["graph"], "-M", 2, "--format", "human"],
        ["place", "optimal", f["graph"], "-M", 2, "--objective", "max-radius"],
        ["sim", "run", f["scn"], "--seed", 1],
        ["sim", "run", f["scn"], "--format", "json", "--set", "protocol=chord"],
        ["sim", "run", f["scn"], "--format", "human", "--set", "join_rate=0.5"],
        ["sim", "compare", f["scn"], "-N", "16,64", "--format", "csv"],
        ["sim", "sweep", f["scn"], "--f-policy", "sqrt,n23"],
        ["arl", "parse", WORKED],
        ["arl", "parse", "http://a1.d.example/9/2/55/x/h/p", "--lenient", "--format", "human"],
        ["arl", "make", "--origin", "http://www.foo.com/a.gif", "--serial", 836,
         "--domain", "g.akamaitech.net", "--type", 7, "--provider", 123,
         "--object-data", "e358f5db0045"],
    ]


def test_every_command_is_repeatable(files, capsys):
    for argv in commands(files):
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first[0] == 0, (argv, first[2])
        assert first[1], argv
        assert first == second, argv


def test_arl_make_reproduces_worked_example(files, capsys):
    code, out, _ = run(capsys, *commands(files)[-1])
    assert code == 0 and out == WORKED + "\n"


def test_arl_parse_json(capsys):
    code, out, _ = run(capsys, "arl", "parse", WORKED)
    assert json.loads(out)["object_data"] == "e358f5db0045"


def test_sim_compare_has_a_row_per_protocol_and_size(files, capsys):
    _, out, _ = run(capsys, "sim", "compare", files["scn"], "-N", "16,64", "--format", "json")
    rows = json.loads(out)
    assert [(r["N"], r["protocol"]) for r in rows] == [
        (16, "iridium"), (16, "chord"), (64, "iridium"), (64, "chord")]


def test_sweep_rows(files, capsys):
    _, out, _ = run(capsys, "sim", "sweep", files["scn"], "--f-policy", "sqrt,n23",
                    "--format", "csv")
    assert len(out.splitlines()) == 3


def test_seed_flag_overrides_scenario(files, capsys):
    _, a, _ = run(capsys, "sim", "run", files["scn"])
    _, b, _ = run(capsys, "sim", "run", files["scn"], "--seed", 0)
    _, c, _ = run(capsys, "sim", "run", files["scn"], "--seed", 5)
    assert a == b != c


def test_khst_figure2_two_centers(files, capsys):
    _, out, _ = run(capsys, "place", "khst-d", files["fig2"], "-D", 2, "--k", 1,
                    "--seed", 1)
    assert len(json.loads(out)["centers"]) == 2


def test_out_file_and_env_dir(files, tmp_path, monkeypatch, capsys):
    target = tmp_path / "g2.txt"
    assert run(capsys, "topo", "gen", "-n", 6, "-p", 0.5, "--out", target) == (0, "", "")
    assert topology.load_graph(target.read_text()).n == 6
    sub = tmp_path / "out"
    sub.mkdir()
    monkeypatch.setenv("CDNLAB_OUT_DIR", str(sub))
    assert run(capsys, "topo", "gen", "-n", 6, "-p", 0.5, "--out", "rel.txt")[0] == 0
    assert (sub / "rel.txt").read_text() == target.read_text()


@pytest.mark.parametrize("argv", [
    [],
    ["topo"],
    ["topo", "gen", "-n", 5],
    ["place", "nosuch", "g.txt"],
    ["place", "greedy", "{graph}"],
    ["place", "khst-d", "{graph}"],
    ["sim", "sweep", "--f-policy", "cubic"],
    ["sim", "compare", "-N", "a,b"],
    ["arl", "parse", WORKED, "--format", "xml"],
])
def test_usage_errors_exit_1(argv, files, capsys):
    argv = [str(a).format(graph=files["graph"]) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_malformed_graph_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n0 1 1\n1 2 -4\n")
    code, out, err = run(capsys, "topo", "info", bad)
    assert code == 2 and out == ""
    assert "line 3" in err


@pytest.mark.parametrize("argv", [
    ["arl", "parse", "http://a1.d.example/9/2/55/x/h/p"],
    ["arl", "parse", "ftp://x"],
    ["topo", "info", "/nonexistent/graph.txt"],
    ["topo", "gen", "-n", 4, "-p", 1.5],
    ["sim", "run", "--set", "N=0"],
    ["sim", "run", "--set", "bogus=1"],
    ["place", "kcenter", "{graph}", "-K", 0],
    ["arl", "make", "--origin", "www.foo.com", "--serial", 1, "--domain", "d",
     "--type", 7, "--provider", 1, "--object-data", "x"],
])
def test_domain_errors_exit_2(argv, files, capsys):
    argv = [str(a).format(graph=files["graph"]) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2, err
    assert err.startswith("cdnlab: error:")


def test_bad_scenario_file_line(tmp_path, capsys):
    scn = tmp_path / "s.scn"
    scn.write_text("N = 4\nq = three\n")
    code, _, err = run(capsys, "sim", "run", scn)
    assert code == 2 and "line 2" in err
