import hashlib
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from modent.cli import main
from modent.config import ConfigError, config_from_dict, grid_from, load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(tmp_path, command, config, *extra, name="out"):
    if isinstance(config, dict):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(config))
        config = path
    out = tmp_path / name
    code = main([command, "--config", str(config), "--out", str(out), *extra])
    manifest = json.loads((out / "manifest.json").read_text())
    return code, out, manifest


def test_validate_ok_and_manifest_hashes(tmp_path):
    code, out, man = run(tmp_path, "validate", CONFIGS / "space.json")
    assert code == 0 and man["complete"] and man["exit_code"] == 0
    rep = json.loads((out / "validation.json").read_text())
    assert rep["is_valid"] and rep["provenance"]["oracle"]
    for name, digest in man["files"].items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest
    assert set(man["versions"]) == {"modent", "python", "numpy", "scipy"}


def test_validate_invalid_space_exit_1(tmp_path):
    code, out, man = run(tmp_path, "validate",
                         {"space": {"tau": [[1, 0], [0, 1]], "sigma": [[0, 2], [-2, 0]]}})
    assert code == 1
    assert not json.loads((out / "validation.json").read_text())["is_valid"]


def test_entropy_counterexample_delta(tmp_path):
    code, out, man = run(tmp_path, "entropy", CONFIGS / "skew_pair_entropy.json")
    assert code == 0
    res = json.loads((out / "entropy.json").read_text())["results"]
    assert abs(res[0]["delta"] - math.log(2)) < 1e-9
    assert abs(res[1]["delta"] + math.log(2)) < 1e-9
    assert (out / "entropy.csv").read_text().startswith("probe,entropy,is_infinite")


def test_entropy_reference_and_infinite(tmp_path):
    cfg = {"space": {"model": "oscillator", "params": {"M": [1.0, 2.0]}},
           "subspace": {"modes": [0, 1]},
           "reference": {"re": [0, 1]},
           "probes": [{"re": [0, 0]}, {"re": [1, 1]}]}
    code, out, _ = run(tmp_path, "entropy", cfg)
    assert code == 0
    res = json.loads((out / "entropy.json").read_text())["results"]
    assert res[0]["entropy"] == pytest.approx(math.log(3))
    assert res[1]["entropy"] == "inf" and res[1]["infinite"]


def test_decompose_report(tmp_path):
    code, out, _ = run(tmp_path, "decompose", CONFIGS / "decompose.json")
    assert code == 0
    doc = json.loads((out / "decomposition.json").read_text())
    assert doc["dims"]["Lf"] == 2
    assert np.allclose(doc["log_delta_spectrum"], [-math.log(3)] * 2 + [math.log(3)] * 2)


def test_family_scan_kms_split_and_determinism(tmp_path):
    code, out, man = run(tmp_path, "family-scan", CONFIGS / "u1_kms.json", "--threads", "4")
    assert code == 0
    reps = json.loads((out / "derivatives.json").read_text())["reports"]
    for r in reps:
        assert r["ok"]
        cf = r["closed_form"]
        assert abs(cf["sum"] - r["d2S_dt2"]) <= 1e-3 * abs(r["d2S_dt2"])
        assert cf["bulk"] < 0
    code2, out2, _ = run(tmp_path, "family-scan", CONFIGS / "u1_kms.json", name="again")
    assert (out / "tf_table.csv").read_bytes() == (out2 / "tf_table.csv").read_bytes()


def test_property_suite_pass_and_fail(tmp_path):
    code, out, man = run(tmp_path, "property-suite", CONFIGS / "spectral.json")
    assert code == 0 and json.loads((out / "property_suite.json").read_text())["passed"]
    code, out, man = run(tmp_path, "property-suite", CONFIGS / "skew_pair.json", name="skew")
    assert code == 1 and man["complete"]
    doc = json.loads((out / "property_suite.json").read_text())
    assert not doc["checks"]["increasing_in_s"]["passed"]


def test_dmp_check_exit_codes(tmp_path):
    code, out, _ = run(tmp_path, "dmp-check", CONFIGS / "skew_pair.json")
    assert code == 1
    assert not json.loads((out / "dmp.json").read_text())["all_hold"]
    cfg = json.loads((CONFIGS / "spectral.json").read_text())
    cfg["pairs"] = [[1.5, 4.0], [2.5, 6.5]]
    code, out, _ = run(tmp_path, "dmp-check", cfg, name="spectral")
    assert code == 0


def test_oracle_compare(tmp_path):
    for name in ("oscillator_oracle", "abelian_oracle", "u1_vacuum"):
        code, out, _ = run(tmp_path, "oracle-compare", CONFIGS / f"{name}.json", name=name)
        assert code == 0, name
        assert json.loads((out / "oracle_compare.json").read_text())["all_passed"]


def test_convergence_command(tmp_path):
    code, out, _ = run(tmp_path, "convergence", CONFIGS / "convergence.json")
    assert code == 0
    assert json.loads((out / "convergence.json").read_text())["gap_decreasing"]
    assert len((out / "convergence.csv").read_text().splitlines()) == 4


def test_error_exit_codes(tmp_path):
    # invalid JSON -> 2, incomplete manifest
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["validate", "--config", str(bad), "--out", str(tmp_path / "b")])
    man = json.loads((tmp_path / "b" / "manifest.json").read_text())
    assert code == 2 and not man["complete"]
    # schema violation -> 2
    code, _, man = run(tmp_path, "validate", {"space": {"tau": "x"}}, name="schema")
    assert code == 2 and not man["complete"]
    # unknown tolerance override -> 2
    code, _, _ = run(tmp_path, "validate", CONFIGS / "space.json", "--tol-override", "nope=1",
                     name="tol")
    assert code == 2
    # missing config file -> 4
    code = main(["validate", "--config", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "m")])
    assert code == 4
    # stencil leaving the domain -> numerical error 3
    cfg = json.loads((CONFIGS / "u1_vacuum.json").read_text())
    cfg["points"] = [1.9999]
    code, _, man = run(tmp_path, "oracle-compare", cfg, name="stencil")
    assert code == 3 and not man["complete"] and "StencilOutOfDomain" in man["error"]


def test_tolerance_override_is_recorded(tmp_path):
    code, _, man = run(tmp_path, "dmp-check", CONFIGS / "skew_pair.json",
                       "--tol-override", "dmp=0.5", "--seed", "7")
    assert code == 0
    assert man["tolerances"]["dmp"] == 0.5 and man["seed"] == 7


def test_config_helpers():
    assert np.allclose(grid_from({"start": 0, "stop": 1, "num": 3}), [0, 0.5, 1])
    with pytest.raises(ConfigError):
        grid_from([1, 0])
    cfg = config_from_dict({"tolerances": {"rank": 1e-9}}, ["oracle=1e-6"], seed=3)
    assert cfg.tolerances["rank"] == 1e-9 and cfg.tolerances["oracle"] == 1e-6 and cfg.seed == 3
    with pytest.raises(ConfigError):
        config_from_dict({"tolerances": {"rank": 0}})
    assert load_config(None).doc == {}


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "modent", "validate", "--config",
                           str(CONFIGS / "space.json"), "--out", str(tmp_path / "o")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
