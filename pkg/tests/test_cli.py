import csv
import io
import json
import math

import numpy as np
import pytest

from modflow import cli
from modflow.config import RunConfig, load_config
from modflow.errors import ConfigError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        else:
            body.append(line)
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return meta, rows


def test_flow_doublecone_origin(capsys):
    code, out, _ = run(capsys, "flow", "--kind", "doublecone", "--s", "0.5", "--x", "0,0,0,0")
    assert code == 0
    meta, rows = parse_csv(out)
    assert meta["command"] == "flow"
    assert float(rows[0]["y0"]) == pytest.approx(math.tanh(0.25), abs=1e-15)


def test_flow_several_points_and_s(capsys):
    code, out, _ = run(capsys, "flow", "--kind", "wedge", "--s", "0,1", "--x", "0,1,0,0;0.2,2,0,0")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 4
    assert float(rows[2]["y1"]) == pytest.approx(math.cosh(1.0))


def test_flow_random_points_follow_seed(capsys):
    a = run(capsys, "flow", "--kind", "cone", "--s", "0.3", "--samples", "3", "--seed", "5")[1]
    b = run(capsys, "flow", "--kind", "cone", "--s", "0.3", "--samples", "3", "--seed", "5")[1]
    c = run(capsys, "flow", "--kind", "cone", "--s", "0.3", "--samples", "3", "--seed", "6")[1]
    assert a == b and a != c


def test_flow_bad_point(capsys):
    code, _, err = run(capsys, "flow", "--kind", "wedge", "--s", "0", "--x", "1,2,3")
    assert code == 2 and "config error" in err


def test_expand_orders(capsys):
    code, out, _ = run(capsys, "expand", "--m", "1", "--N", "3")
    assert code == 0
    _, rows = parse_csv(out)
    assert [float(r["order"]) for r in rows] == [1.0, -1.0, -3.0]
    assert [float(r["coefficient"]) for r in rows] == [1.0, 0.5, -0.125]


def test_expand_inverse_with_remainder(capsys):
    code, out, _ = run(capsys, "expand", "--m", "1", "--N", "2", "--inverse", "--remainder")
    meta, rows = parse_csv(out)
    assert code == 0 and len(rows) == 2
    assert float(meta["remainder_order"]) == pytest.approx(-5.0, rel=0.05)


def test_expand_invalid_N(capsys):
    assert run(capsys, "expand", "--m", "1", "--N", "0")[0] == 2


def test_temp_diamond(capsys):
    code, out, _ = run(capsys, "temp", "--observer", "diamond", "--a", "1e-9", "--L", "1", "--tau-range", "0:0.5:0.25")
    assert code == 0
    _, rows = parse_csv(out)
    assert [float(r["tau"]) for r in rows] == [0.0, 0.25, 0.5]
    assert float(rows[0]["T"]) == pytest.approx(1 / math.pi)


def test_temp_beyond_lifetime_fails(capsys):
    code, _, err = run(capsys, "temp", "--observer", "diamond", "--a", "1", "--L", "1", "--tau-range", "0:2:1")
    assert code == 1 and "LifetimeBoundary" in err


def test_temp_bad_range(capsys):
    assert run(capsys, "temp", "--observer", "cone", "--a", "1", "--tau-range", "1:0:0.1")[0] == 2


def test_kms_spectrum_table(capsys):
    code, out, _ = run(capsys, "kms", "--eps", "1e-3")
    meta, rows = parse_csv(out)
    assert code == 0
    assert float(meta["beta_over_2pi"]) == pytest.approx(1.0, abs=0.02)
    slope = np.polyfit([float(r["E"]) for r in rows], [float(r["log_ratio"]) for r in rows], 1)[0]
    assert slope == pytest.approx(2 * math.pi, rel=0.02)


def test_kernel_small_grid(capsys, tmp_path):
    out = tmp_path / "k.csv"
    code, _, _ = run(capsys, "kernel", "--m", "1", "--widths", "1.0", "--out", str(out))
    assert code == 0
    meta, rows = parse_csv(out.read_text())
    assert float(meta["c_times_2pi^2"]) == pytest.approx(1.0, rel=1e-3)
    assert float(rows[0]["rel_l2_error"]) < 1e-3


def test_verify_exit_codes(capsys):
    code, out, err = run(capsys, "verify", "thermal")
    assert code == 0 and "thermal: PASS" in err
    _, rows = parse_csv(out)
    assert rows and all(r["pass"] == "true" for r in rows)
    code, _, err = run(capsys, "verify", "psdo", "--tolerance", "1e-99")
    assert code == 1 and "FAILED psdo:" in err


def test_verify_out_directory(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "geometry", "--out", str(tmp_path / "o"))
    assert code == 0
    rep = json.loads((tmp_path / "o" / "report_geometry.json").read_text())
    assert rep["suite"] == "geometry" and all(c["pass"] for c in rep["checks"])
    meta, _ = parse_csv((tmp_path / "o" / "checks_geometry.csv").read_text())
    assert meta["seed"] == "0"


def test_verify_deterministic_across_threads(capsys, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    run(capsys, "verify", "modflow", "--seed", "3", "--threads", "1", "--out", str(a))
    run(capsys, "verify", "modflow", "--seed", "3", "--threads", "4", "--out", str(b))
    assert (a / "checks_modflow.csv").read_bytes() == (b / "checks_modflow.csv").read_bytes()


def test_config_file_and_env(capsys, tmp_path, monkeypatch):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"seed": 11, "geometry_samples": 500}))
    monkeypatch.setenv("MODFLOW_CONFIG", str(p))
    cfg = load_config()
    assert cfg.seed == 11 and cfg.geometry_samples == 500
    assert load_config(overrides={"seed": 4}).seed == 4
    code, _, _ = run(capsys, "verify", "geometry", "--out", str(tmp_path / "o"))
    meta, _ = parse_csv((tmp_path / "o" / "checks_geometry.csv").read_text())
    assert code == 0 and meta["seed"] == "11"


def test_config_errors(capsys, tmp_path):
    assert run(capsys, "verify", "thermal", "--config", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", "thermal", "--config", str(bad))[0] == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"sead": 1}))
    with pytest.raises(ConfigError):
        load_config(str(unknown))
    with pytest.raises(ConfigError):
        RunConfig(tolerance=0.0)
    with pytest.raises(ConfigError):
        RunConfig(by_betas=[])


def test_digest_ignores_threads_and_out():
    assert RunConfig(threads=1, out="x").digest() == RunConfig(threads=8).digest()
    assert RunConfig(seed=1).digest() != RunConfig(seed=2).digest()


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as e:
        cli.main(["nope"])
    assert e.value.code == 2
