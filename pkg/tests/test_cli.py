import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from maxsev import SemiStableLaw, ks_one_sample
from maxsev.cli import main

CANONICAL_LAW = {"branch": "frechet", "alpha": 1, "b": 2, "h": {"level": 1, "harmonics": [[1, 0.1, 0]]}}
STANDARD_LAW = {"branch": "frechet", "alpha": 1, "b": 2, "h": {"level": 1}}


def write_config(tmp_path, name="config.json", **cfg):
    cfg.setdefault("seed", 42)
    cfg.setdefault("law", CANONICAL_LAW)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run(*argv):
    return main([str(a) for a in argv])


def read_values(path, column="value"):
    with open(path, newline="") as fh:
        return np.array([float(row[column]) for row in csv.DictReader(fh)])


# --- validate ----------------------------------------------------------------

def test_validate_canonical(tmp_path):
    out = tmp_path / "report.json"
    assert run("validate", "--config", write_config(tmp_path), "--out", out) == 0
    report = json.loads(out.read_text())
    assert report["valid"] and report["violations"] == []
    assert report["identity"]["pass"]


def test_validate_period_violation(tmp_path, capsys):
    law = dict(CANONICAL_LAW, h={"period": math.log(3), "level": 1, "harmonics": [[1, 0.1, 0]]})
    assert run("validate", "--config", write_config(tmp_path, law=law)) == 1
    report = json.loads(capsys.readouterr().out)
    assert not report["valid"]
    assert any(v.startswith("period") for v in report["violations"])
    assert report["identity"]["pass"] is False


def test_validate_non_monotone(tmp_path, capsys):
    law = dict(CANONICAL_LAW, h={"level": 1, "harmonics": [[1, 0.99, 0]]})
    assert run("validate", "--config", write_config(tmp_path, law=law)) == 1
    assert any(v.startswith("monotonicity") for v in json.loads(capsys.readouterr().out)["violations"])


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run("validate", "--config", path) == 2


def test_missing_seed_exits_2(tmp_path):
    path = tmp_path / "noseed.json"
    path.write_text(json.dumps({"law": CANONICAL_LAW}))
    assert run("sample", "--config", path) == 2


def test_missing_law_field_exits_2(tmp_path):
    assert run("validate", "--config", write_config(tmp_path, law={"branch": "frechet", "b": 2})) == 2


def test_invalid_law_in_other_command_exits_1(tmp_path):
    law = dict(CANONICAL_LAW, b=0.5)
    assert run("sample", "--config", write_config(tmp_path, law=law)) == 1


# --- sample ------------------------------------------------------------------

def test_sample_law_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run("sample", "--config", cfg, "--what", "law", "--n", 5, "--seed", 42, "--out", out) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "index,value" and len(lines) == 6


def test_sample_csv_full_precision(tmp_path):
    out = tmp_path / "s.csv"
    run("sample", "--config", write_config(tmp_path), "--n", 50, "--out", out)
    law = SemiStableLaw.from_dict(CANONICAL_LAW)
    np.testing.assert_array_equal(read_values(out), law.sample(50, 42))
    assert b"\r" not in out.read_bytes()


def test_sample_innovation(tmp_path):
    out = tmp_path / "eps.csv"
    cfg = write_config(tmp_path, law=STANDARD_LAW)
    assert run("sample", "--config", cfg, "--what", "innovation", "--n", 5000, "--out", out) == 0
    assert ks_one_sample(read_values(out), lambda u: np.exp(-1 / (2 * u)), 0.05).passed


def test_sample_marginal(tmp_path):
    out = tmp_path / "y.csv"
    cfg = write_config(tmp_path)
    assert run("sample", "--config", cfg, "--what", "marginal", "--t", 2, "--n", 5000, "--out", out) == 0
    law = SemiStableLaw.from_dict(CANONICAL_LAW)
    assert ks_one_sample(read_values(out), lambda u: law.cdf(u) ** 2, 0.05).passed


# --- simulate-ar / simulate-ep -----------------------------------------------

def test_simulate_ar_canonical(tmp_path, capsys):
    out = tmp_path / "ar.csv"
    assert run("simulate-ar", "--config", write_config(tmp_path), "--n", 10_000, "--out", out) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ks"]["pass"] and report["ks"]["n"] == 1000
    lines = out.read_text().splitlines()
    assert lines[0] == "n,x" and lines[1].startswith("1,") and len(lines) == 10_001


def test_simulate_ar_period_mismatch(tmp_path, capsys):
    cfg = write_config(tmp_path, model={"rho": 0.7})
    assert run("simulate-ar", "--config", cfg, "--out", tmp_path / "x.csv") == 1
    assert "PeriodMismatch" in capsys.readouterr().err


def test_simulate_ar_explosive_weibull(tmp_path):
    law = {"branch": "weibull", "alpha": 1, "b": 0.5, "h": {"level": 1}}
    cfg = write_config(tmp_path, law=law, model={"rho": 1.5})
    assert run("simulate-ar", "--config", cfg, "--out", tmp_path / "x.csv") == 0


def test_simulate_ar_explosive_frechet_refused(tmp_path, capsys):
    cfg = write_config(tmp_path, law=STANDARD_LAW, model={"rho": 1.5})
    assert run("simulate-ar", "--config", cfg, "--out", tmp_path / "x.csv") == 1
    assert "InvalidModel" in capsys.readouterr().err


def test_simulate_ep(tmp_path):
    out = tmp_path / "ep.csv"
    cfg = write_config(tmp_path, process={"times": [0.5, 1, 2, 4]})
    assert run("simulate-ep", "--config", cfg, "--out", out) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["t"]) for r in rows] == [0.5, 1, 2, 4]
    values = [float(r["value"]) for r in rows]
    assert values == sorted(values)


# --- verify ------------------------------------------------------------------

def test_verify_all_canonical(tmp_path, capsys):
    assert run("verify", "--config", write_config(tmp_path), "--suite", "all") == 0
    bundle = json.loads(capsys.readouterr().out)
    assert set(bundle["results"]) == {"identities", "semiss", "semisd"}
    assert bundle["pass"]


def test_verify_semiss_off_period(tmp_path):
    cfg = write_config(tmp_path, verify={"scaleB": math.sqrt(2)})
    assert run("verify", "--config", cfg, "--suite", "semiss") == 1
    assert run("verify", "--config", write_config(tmp_path), "--suite", "semiss", "--scale-b", math.sqrt(2)) == 1


def test_verify_ss_max_stable(tmp_path, capsys):
    assert run("verify", "--config", write_config(tmp_path, law=STANDARD_LAW), "--suite", "ss") == 0
    assert len(json.loads(capsys.readouterr().out)["results"]["ss"]) == 4


def test_verify_ss_non_constant_fails(tmp_path):
    assert run("verify", "--config", write_config(tmp_path), "--suite", "ss") == 1


def test_verify_weibull_all(tmp_path):
    law = {"branch": "weibull", "alpha": 1, "b": 0.5, "h": {"level": 1, "harmonics": [[1, 0.1, 0]]}}
    assert run("verify", "--config", write_config(tmp_path, law=law), "--suite", "all") == 0


def test_semiss_report_keys(tmp_path, capsys):
    run("verify", "--config", write_config(tmp_path), "--suite", "semiss")
    (entry,) = json.loads(capsys.readouterr().out)["results"]["semiss"]
    assert list(entry)[:7] == [
        "scaleB", "exponentH", "identityError", "ksStatistic", "ksCritical", "identityPass", "ksPass",
    ]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "maxsev", "validate", "--config", write_config(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["valid"]


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", "--config", "x"])
    assert info.value.code == 2
