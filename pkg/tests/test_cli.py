"""Command-line pipeline: gen -> dist -> sample -> check, studies, manifests,
output redirection, exit codes, and job-count reproducibility."""

import json

import pytest

from treesample.cli import main


def run(*argv: str) -> int:
    return main(list(argv))


def read_json(path):
    return json.loads(path.read_text())


def test_full_pipeline(tmp_path, capsys):
    graphs = tmp_path / "graphs.json"
    dists = tmp_path / "dists.json"
    sols = tmp_path / "sols.json"
    verdicts = tmp_path / "verdicts.csv"

    assert run("gen", "-n", "5", "--count", "3", "--task", "bf", "--seed", "1",
               "-o", str(graphs)) == 0
    assert run("dist", "-i", str(graphs), "--task", "bf", "--runs", "10", "--seed", "2",
               "-o", str(dists)) == 0
    assert run("sample", "-i", str(graphs), "-d", str(dists), "--task", "bf",
               "--method", "beam", "-k", "4", "--seed", "3", "-o", str(sols)) == 0
    assert run("check", "-i", str(graphs), "-s", str(sols), "-o", str(verdicts)) == 0

    payload = read_json(sols)
    assert payload["task"] == "bf"
    assert payload["method"] == "beam"
    assert payload["k"] == 4
    assert len(payload["entries"]) == 3
    for i, entry in enumerate(payload["entries"]):
        assert entry["graph_index"] == i
        assert len(entry["solutions"]) == 4
        assert len(entry["valid"]) == 4
        assert all(len(s) == 5 for s in entry["solutions"])

    lines = verdicts.read_text().splitlines()
    assert len(lines) == 12
    first = lines[0].split(",")
    assert first[0] == "0" and first[1] in ("true", "false")

    out = capsys.readouterr().out
    assert "wrote 3 graphs" in out
    assert "checked 12 solutions" in out


def test_dfs_pipeline_reports_tags(tmp_path, capsys):
    graphs = tmp_path / "g.json"
    dists = tmp_path / "d.json"
    sols = tmp_path / "s.json"
    assert run("gen", "-n", "4", "--count", "2", "--task", "dfs", "--seed", "5",
               "-o", str(graphs)) == 0
    assert run("dist", "-i", str(graphs), "--task", "dfs", "--mode", "per-node",
               "--seed", "6", "-o", str(dists)) == 0
    assert run("sample", "-i", str(graphs), "-d", str(dists), "--task", "dfs",
               "--method", "random", "-k", "3", "--seed", "7", "-o", str(sols)) == 0
    payload = read_json(sols)
    assert all("failed_tags" in entry for entry in payload["entries"])
    capsys.readouterr()
    assert run("check", "-i", str(graphs), "-s", str(sols)) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6  # verdicts go to stdout when -o is omitted


def test_manifest_sidecar(tmp_path):
    graphs = tmp_path / "graphs.json"
    assert run("gen", "-n", "4", "--task", "bf", "--seed", "9", "-o", str(graphs)) == 0
    manifest = read_json(tmp_path / "graphs.json.manifest.json")
    assert manifest["command"] == "gen"
    assert manifest["seed"] == 9
    assert manifest["config"]["n"] == 4
    assert manifest["config"]["task"] == "bf"
    assert manifest["tool_version"]
    assert "timestamp" in manifest


def test_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("gen", "-n", "6", "--count", "4", "--task", "dfs", "--seed", "42",
                   "-o", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_jobs_do_not_change_output_bytes(tmp_path):
    graphs = tmp_path / "graphs.json"
    assert run("gen", "-n", "5", "--count", "6", "--task", "bf", "--seed", "3",
               "-o", str(graphs)) == 0
    outs = []
    for jobs, name in ((1, "d1.json"), (8, "d8.json")):
        out = tmp_path / name
        assert run("dist", "-i", str(graphs), "--task", "bf", "--seed", "4",
                   "--jobs", str(jobs), "-o", str(out)) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    outs = []
    for jobs, name in ((1, "s1.json"), (8, "s8.json")):
        out = tmp_path / name
        assert run("sample", "-i", str(graphs), "-d", str(tmp_path / "d1.json"),
                   "--task", "bf", "--method", "greedy", "--seed", "5",
                   "--jobs", str(jobs), "-o", str(out)) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_output_env_var_redirects_relative_paths(tmp_path, monkeypatch):
    workdir = tmp_path / "out"
    workdir.mkdir()
    monkeypatch.setenv("TREESAMPLE_OUT", str(workdir))
    assert run("gen", "-n", "4", "--task", "bf", "--seed", "1", "-o", "graphs.json") == 0
    assert (workdir / "graphs.json").exists()
    assert (workdir / "graphs.json.manifest.json").exists()
    # Absolute paths are left alone.
    absolute = tmp_path / "abs.json"
    assert run("gen", "-n", "4", "--task", "bf", "--seed", "1", "-o", str(absolute)) == 0
    assert absolute.exists()


def test_study_reruns_csv(tmp_path):
    out = tmp_path / "reruns.csv"
    assert run("study", "reruns", "--sizes", "4,5", "--graphs", "2", "--counts", "5,10",
               "--seed", "8", "-o", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "size,pair_lo,pair_hi,mean_kl,std_kl"
    assert len(lines) == 3  # one pair per size


def test_study_table1_and_table2_csv(tmp_path):
    t1, t2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
    assert run("study", "table1", "--task", "bf", "-n", "4", "--graphs", "2", "--runs", "2",
               "--samples", "3", "--methods", "beam,greedy", "--seed", "1", "-o", str(t1)) == 0
    lines = t1.read_text().splitlines()
    assert lines[0] == "method,n,dist,uniques_mean,uniques_std,valids_mean,valids_std"
    assert [line.split(",")[0] for line in lines[1:]] == ["beam", "greedy"]
    assert run("study", "table2", "--task", "dfs", "-n", "4", "--graphs", "2", "--runs", "2",
               "--samples", "3", "--seed", "1", "-o", str(t2)) == 0
    lines = t2.read_text().splitlines()
    assert lines[0] == "method,n,dist,acc_mean,acc_std"
    # Default method set for the depth-first task.
    assert [line.split(",")[0] for line in lines[1:]] == [
        "argmax", "upwards", "alt-upwards", "random"
    ]


def test_study_coverage_and_edge_reuse_csv(tmp_path):
    cov, reuse = tmp_path / "cov.csv", tmp_path / "reuse.csv"
    assert run("study", "coverage", "--task", "bf", "-n", "4", "--graphs", "2",
               "--samples", "3", "--methods", "argmax", "--seed", "2", "-o", str(cov)) == 0
    lines = cov.read_text().splitlines()
    assert lines[0] == "method,n,dist,sample_index,mean_unique_valid"
    assert len(lines) == 7  # (argmax + reference) x 3 sample indexes
    assert run("study", "edge-reuse", "--task", "bf", "-n", "4", "--graphs", "2",
               "--samples", "3", "--methods", "argmax", "--seed", "2",
               "--denominator", "first", "-o", str(reuse)) == 0
    lines = reuse.read_text().splitlines()
    assert lines[0] == "method,n,dist,sample_index,mean_edge_reuse"
    assert len(lines) == 5  # (argmax + reference) x 2 prefix lengths


def test_usage_errors_exit_2(capsys):
    assert run() == 2  # no subcommand
    assert run("gen", "-n", "4", "-o", "x.json") == 2  # --seed is required
    assert run("gen", "-n", "4", "--task", "nope", "--seed", "1", "-o", "x.json") == 2
    assert run("sample", "-i", "a", "-d", "b", "--method", "fancy", "--seed", "1",
               "-o", "c") == 2
    capsys.readouterr()


def test_validation_errors_exit_3(tmp_path, capsys):
    g3 = tmp_path / "g3.json"
    g4 = tmp_path / "g4.json"
    d3 = tmp_path / "d3.json"
    assert run("gen", "-n", "3", "--count", "2", "--task", "bf", "--seed", "1", "-o", str(g3)) == 0
    assert run("gen", "-n", "4", "--count", "2", "--task", "bf", "--seed", "1", "-o", str(g4)) == 0
    assert run("dist", "-i", str(g3), "--task", "bf", "--seed", "2", "-o", str(d3)) == 0
    # Distributions built for the size-3 graphs cannot drive size-4 sampling.
    code = run("sample", "-i", str(g4), "-d", str(d3), "--task", "bf", "--method", "argmax",
               "--seed", "3", "-o", str(tmp_path / "s.json"))
    assert code == 3
    assert "error:" in capsys.readouterr().err
    assert run("gen", "-n", "0", "--task", "bf", "--seed", "1",
               "-o", str(tmp_path / "zero.json")) == 3


def test_io_errors_exit_4(tmp_path, capsys):
    code = run("dist", "-i", str(tmp_path / "missing.json"), "--task", "bf", "--seed", "1",
               "-o", str(tmp_path / "d.json"))
    assert code == 4
    assert "i/o error" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("dist", "-i", str(bad), "--task", "bf", "--seed", "1",
               "-o", str(tmp_path / "d.json")) == 4


def test_version_flag(capsys):
    from treesample import __version__

    assert run("--version") == 0
    assert __version__ in capsys.readouterr().out


def test_installed_entry_point_runs(tmp_path):
    import shutil
    import subprocess

    exe = shutil.which("treesample")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run(
        [exe, "gen", "-n", "4", "--task", "bf", "--seed", "1", "-o", str(tmp_path / "g.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert (tmp_path / "g.json").exists()
