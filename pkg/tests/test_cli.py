import json

import pytest

from ctxgraph.cli import cli, main

SUBCOMMANDS = ["alpha", "theta", "search", "verify", "simulate", "catalog"]


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_theta_catalog(capsys):
    code, out, _ = run(capsys, "theta", "--catalog", "f9")
    assert code == 0 and out.strip().endswith("≈ 11/3")
    lo, hi = (float(x) for x in out.split("]")[0].strip("[").split(","))
    assert lo <= 11 / 3 <= hi and hi - lo <= 1e-7


def test_alpha_catalog(capsys):
    code, out, _ = run(capsys, "alpha", "--catalog", "f9", "--all")
    assert code == 0 and out.startswith("alpha = 3")
    assert "{1,3,5}" in out and "{2,4,6}" in out


def test_alpha_graph6_and_file(capsys, tmp_path):
    assert run(capsys, "alpha", "Bw")[1].startswith("alpha = 1")
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"n": 4, "edges": [[0, 1]]}))
    assert run(capsys, "alpha", "--file", str(f))[1].startswith("alpha = 3")


def test_search_n5(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "search", "--n", "5", "--threads", "1", "-o", str(out_file))
    assert code == 0 and "1.1180339" in out and "sqrt(5)/2" in out
    data = json.loads(out_file.read_text())
    assert data["n"] == 5 and len(data["argmax_graphs"]) == 1


def test_search_output_is_deterministic(capsys):
    a = json.loads(run(capsys, "search", "--n", "6", "--threads", "1", "--json")[1])
    b = json.loads(run(capsys, "search", "--n", "6", "--threads", "2", "--json")[1])
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_search_stream(capsys, tmp_path):
    f = tmp_path / "g.g6"
    f.write_text("DLo\nD~{\n")
    code, out, _ = run(capsys, "search", "--file", str(f))
    assert code == 0 and "sqrt(5)/2" in out


def test_thread_env_var_and_flag(capsys, monkeypatch):
    monkeypatch.setenv("CTXGRAPH_THREADS", "2")
    code, out, _ = run(capsys, "search", "--n", "4", "--threads", "1")
    assert code == 0


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--catalog", "f9")
    assert code == 0 and "handle sum = 11/3" in out and out.strip().endswith("PASS")
    assert "{7,8,9,10}" in out


def test_verify_file_failure(capsys, tmp_path):
    from ctxgraph.scenario import dump_representation, f9_representation
    data = dump_representation(f9_representation())
    data["vectors"][0] = [[1, 1, 1, 0], 3]
    f = tmp_path / "rep.json"
    f.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--file", str(f))
    assert code == 1 and "FAIL" in out


def test_simulate_outputs_are_byte_identical(capsys, tmp_path):
    paths = []
    for k in range(2):
        j, c = tmp_path / f"r{k}.json", tmp_path / f"r{k}.csv"
        code, out, _ = run(capsys, "simulate", "--shots", "10000", "--mix", "0.02", "--dark", "1e-4",
                           "-o", str(j), "--csv", str(c))
        assert code == 0 and "standard deviations above 3" in out
        paths.append((j.read_bytes(), c.read_bytes()))
    assert paths[0] == paths[1]
    assert json.loads(paths[0][0])["S"]["violation_sigma"] >= 30


@pytest.mark.parametrize("args", [
    ["theta"],
    ["alpha", "not-graph6!"],
    ["search"],
    ["search", "--n", "2"],
    ["simulate", "--shots", "0"],
    ["nosuch"],
    ["theta", "--catalog", "f9", "--gap-tol", "-1"],
])
def test_invalid_input_exits_1(capsys, args):
    assert run(capsys, *args)[0] == 1


def test_error_json(capsys):
    code, _, err = run(capsys, "--error-json", "alpha", "zzz")
    assert code == 1
    assert json.loads(err)["exit_code"] == 1


def test_unconverged_exits_2(capsys, monkeypatch):
    import ctxgraph.cli as cli_mod
    from ctxgraph.theta import lovasz_theta

    def capped(g, gap_tol):
        return lovasz_theta(g, gap_tol, max_iter=1)

    monkeypatch.setattr(cli_mod, "lovasz_theta", capped)
    assert run(capsys, "theta", "--catalog", "f9")[0] == 2


@pytest.mark.parametrize("name", SUBCOMMANDS)
def test_every_subcommand_has_help(capsys, name):
    code, out, _ = run(capsys, name, "--help")
    assert code == 0 and "Usage:" in out
    for param in cli.commands[name].params:
        if param.param_type_name == "option":
            assert param.opts[0] in out


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and "f9" in out and "x16" in out
