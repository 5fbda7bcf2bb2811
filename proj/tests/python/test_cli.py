import json
import math
import os
import shlex
import subprocess

import pytest


def run(cli, *args, env=None, check=True):
    merged = dict(os.environ, **(env or {}))
    proc = subprocess.run([cli, *args], capture_output=True, text=True, env=merged)
    if check and proc.returncode != 0:
        raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
    return proc


def rerun_embedded(cli, output):
    first = output.splitlines()[0]
    assert first.startswith("# gosx ")
    argv = shlex.split(first[len("# gosx "):])
    return run(cli, *argv).stdout


def data_rows(csv_text):
    return [line for line in csv_text.splitlines() if not line.startswith("#")]


def test_normal_range_at_ln4(cli):
    out = run(cli, "example", "normal-range", "--at", "ln4").stdout
    header, row = data_rows(out)
    values = dict(zip(header.split(","), map(float, row.split(","))))
    assert f"{values['limit_df']:.6f}" == "0.666667"
    assert abs(values["closed_form"] - values["integral"]) < 1e-6


def test_simulate_is_byte_identical_across_runs(cli):
    args = ["simulate", "--model", "cauchy", "--m", "0.5", "--index", "geometric", "--n", "500", "--reps", "20000", "--seed", "42"]
    first = run(cli, *args).stdout
    second = run(cli, *args, "--threads", "1").stdout
    assert first == second


def test_mix_with_degenerate_index_equals_limit(cli):
    grid = ["--grid-x", "-1:3:9", "--grid-y", "-1:3:9"]
    limit = run(cli, "limit", "--regime", "uu", *grid).stdout
    mixed = run(cli, "mix", "--regime", "uu", "--H", "degenerate:1", *grid).stdout
    assert data_rows(limit) == data_rows(mixed)


@pytest.mark.parametrize(
    "args",
    [
        ["exact", "--n", "6", "--grid-x", "0:2:3", "--grid-y", "0:2:3"],
        ["limit", "--regime", "ll", "--r", "1", "--s", "2", "--model", "cauchy", "--grid-x", "-2:2:3", "--grid-y", "-2:2:3"],
        ["mix", "--regime", "lu", "--r", "1", "--s", "1", "--H", "uniform:0.5:1.5", "--grid-x", "-1:1:3", "--grid-y", "-1:1:3"],
        ["simulate", "--reps", "500", "--n", "100", "--grid-x", "0:2:3", "--grid-y", "0:2:3", "--seed", "3"],
        ["example", "cauchy-range", "--grid-x", "0.5:2:4"],
        ["example", "normal-midrange", "--simulate", "--reps", "500", "--grid-x", "-1:1:3"],
    ],
)
def test_embedded_command_reproduces_the_output(cli, args):
    out = run(cli, *args).stdout
    assert rerun_embedded(cli, out) == out


def test_json_output_embeds_the_resolved_configuration(cli):
    out = run(cli, "limit", "--model", "normal", "--grid-x", "0", "--grid-y", "1", "--format", "json").stdout
    doc = json.loads(out)
    assert doc["command"].startswith("gosx limit")
    assert doc["config"]
    argv = shlex.split(doc["command"])[1:]
    assert run(cli, *argv).stdout == out


def test_exit_codes(cli):
    assert run(cli, "--help").returncode == 0
    assert run(cli, "frobnicate", check=False).returncode == 1
    assert run(cli, "limit", "--no-such-flag", check=False).returncode == 1
    assert run(cli, "limit", "--model", "nosuchmodel", check=False).returncode == 2
    bad = run(cli, "limit", "--regime", "uu", "--r", "1", "--s", "2", check=False)
    assert bad.returncode == 2
    assert "error" in bad.stderr


def test_output_directory_from_environment(cli, tmp_path):
    args = ["limit", "--grid-x", "0:1:2", "--grid-y", "0:1:2"]
    stdout = run(cli, *args).stdout
    run(cli, *args, "--out", "nested/limit.csv", env={"GOSX_OUTPUT_DIR": str(tmp_path)})
    assert (tmp_path / "nested" / "limit.csv").read_text() == stdout


def test_symbolic_numeric_options(cli):
    a = data_rows(run(cli, "example", "normal-range", "--at", "ln4").stdout)[1]
    b = data_rows(run(cli, "example", "normal-range", "--at", str(math.log(4.0))).stdout)[1]
    assert a == b


def test_selftest_quick_subset(cli):
    proc = run(cli, "selftest", "--quick", "--module", "specfun", "--format", "json")
    doc = json.loads(proc.stdout)
    assert doc["checks"]
    assert all(c["passed"] and c["module"] == "specfun" for c in doc["checks"])
