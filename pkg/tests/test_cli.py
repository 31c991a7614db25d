"""CLI contract: byte-stable CSV, exit codes, config round-trips."""

import math

import numpy as np
import pytest

from negspec.cli import (main, parse_config_file, spec_from_config,
                         spec_to_config)
from negspec.smeared import TestFunctionSpec

PI = math.pi


def run_to_file(tmp_path, name, argv):
    out = tmp_path / name
    rc = main(argv + ["--output", str(out)])
    return rc, out.read_bytes()


def parse_csv(payload):
    lines = payload.decode().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    header = body[0].split(",")
    rows = np.array([[float(v) for v in l.split(",")] for l in body[1:]])
    return meta, header, rows


def test_fig1_byte_stable(tmp_path):
    argv = ["fig1", "--k", "1.0", "--points", "50"]
    rc1, b1 = run_to_file(tmp_path, "a.csv", argv)
    rc2, b2 = run_to_file(tmp_path, "b.csv", argv)
    rc3, b3 = run_to_file(tmp_path, "c.csv", argv + ["--threads", "4"])
    assert rc1 == rc2 == rc3 == 0
    assert b1 == b2 == b3


def test_fig1_columns(tmp_path):
    rc, payload = run_to_file(tmp_path, "f.csv", ["fig1", "--points", "60"])
    assert rc == 0
    meta, header, rows = parse_csv(payload)
    assert header == ["T", "vacuum", "thermal", "total"]
    assert rows.shape == (60, 4)
    assert np.all(rows[:, 1] < 0) and np.all(rows[:, 2] > 0)
    assert any(l.startswith("# negspec fig1") for l in meta)


def test_fig1_single_point(tmp_path):
    rc, payload = run_to_file(tmp_path, "p.csv",
                              ["fig1", "--t-min", "1.0", "--t-max", "1.0",
                               "--points", "1"])
    _, _, rows = parse_csv(payload)
    assert rc == 0 and rows.shape == (1, 4)


def test_fig1_bad_range():
    assert main(["fig1", "--t-min", "3.0", "--t-max", "1.0"]) == 2
    assert main(["fig1", "--points", "0"]) == 2
    assert main(["fig1", "--t-min", "-1.0", "--t-max", "2.0"]) == 2


def test_spectrum_em_point(tmp_path):
    rc, payload = run_to_file(tmp_path, "em.csv",
                              ["spectrum", "em_vacuum", "--k-min", "1",
                               "--k-max", "1", "--points", "1"])
    _, header, rows = parse_csv(payload)
    assert rc == 0 and header == ["k", "value"]
    assert rows[0, 1] == pytest.approx(-1.0 / (960 * PI**5), rel=1e-15)


def test_spectrum_inflation_header(tmp_path):
    argv = ["spectrum", "inflation", "--lp", "0.1", "--hubble-rate", "2.0",
            "--scale-factor", "3.0", "--points", "4"]
    rc, payload = run_to_file(tmp_path, "inf.csv", argv)
    meta, _, _ = parse_csv(payload)
    line = next(l for l in meta if "sign_change_wavenumber" in l)
    kc = float(line.split("=")[1])
    assert rc == 0
    assert kc == pytest.approx(4 * PI * 2.0 / (5 * 3.0), rel=1e-15)


def test_spectrum_temporal_header(tmp_path):
    rc, payload = run_to_file(tmp_path, "t.csv",
                              ["spectrum", "temporal", "--points", "3"])
    _, header, _ = parse_csv(payload)
    assert rc == 0 and header == ["omega", "value"]


def test_spectrum_thermal_needs_beta(capsys):
    assert main(["spectrum", "thermal", "--points", "2"]) == 2
    assert "beta" in capsys.readouterr().err
    assert main(["spectrum", "total", "--points", "2"]) == 2


def test_spectrum_unknown_channel():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "nonsense"])
    assert exc.value.code == 2


def test_crossover_output(capsys):
    assert main(["crossover", "2.0"]) == 0
    out = capsys.readouterr().out
    ratio = float(next(l for l in out.splitlines()
                       if l.startswith("ratio_to_wavenumber")).split("=")[1])
    assert ratio == pytest.approx(1.0390, abs=1e-3)


def test_modesum_report(capsys):
    assert main(["modesum"]) == 0
    out = capsys.readouterr().out
    assert "static_diverged = True" in out
    rel = float(next(l for l in out.splitlines()
                     if l.startswith("limit_rel_deviation")).split("=")[1])
    assert rel < 1e-3


def test_verify_suite_passes(capsys):
    assert main(["verify", "thermal", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 5


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def write_scan_config(path, extra=""):
    spec = TestFunctionSpec(kind="gaussian", temporal_width=0.5,
                            spatial_width=1.0)
    lines = spec_to_config(spec, "1") + spec_to_config(spec, "2")
    lines += ["mc_samples = 50000", "factors = 1,2"]
    path.write_text("\n".join(lines) + ("\n" + extra if extra else "") + "\n")


def test_smeared_scan_runs(tmp_path):
    cfg = tmp_path / "scan.cfg"
    write_scan_config(cfg)
    rc, payload = run_to_file(tmp_path, "scan.csv", ["smeared", str(cfg)])
    meta, header, rows = parse_csv(payload)
    assert rc == 0
    assert header == ["factor", "scale", "value", "error"]
    assert rows.shape == (2, 4)
    assert any("max_pairwise_rel_deviation" in l for l in meta)
    # flags override file values and are echoed in the metadata
    rc2, payload2 = run_to_file(tmp_path, "scan2.csv",
                                ["smeared", str(cfg), "--factors", "1,2,5"])
    _, _, rows2 = parse_csv(payload2)
    assert rc2 == 0 and rows2.shape == (3, 4)


def test_smeared_byte_stable(tmp_path):
    cfg = tmp_path / "scan.cfg"
    write_scan_config(cfg)
    rc1, b1 = run_to_file(tmp_path, "s1.csv", ["smeared", str(cfg)])
    rc2, b2 = run_to_file(tmp_path, "s2.csv", ["smeared", str(cfg)])
    assert rc1 == rc2 == 0 and b1 == b2


def test_smeared_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    write_scan_config(cfg, extra="bogus_key = 7")
    assert main(["smeared", str(cfg)]) == 2
    assert "unknown key" in capsys.readouterr().err
    cfg2 = tmp_path / "dup.cfg"
    write_scan_config(cfg2, extra="mc_samples = 60000")
    assert main(["smeared", str(cfg2)]) == 2
    cfg3 = tmp_path / "noeq.cfg"
    cfg3.write_text("kind1 gaussian\n")
    assert main(["smeared", str(cfg3)]) == 2
    assert main(["smeared", str(tmp_path / "missing.cfg")]) == 2


def test_spec_config_round_trip(tmp_path):
    spec = TestFunctionSpec(kind="compact_bump",
                            center=(0.3, -1.25, 4e-3, 2.0),
                            temporal_width=0.37, spatial_width=1.75,
                            amplitude=-2.5)
    cfg = tmp_path / "rt.cfg"
    cfg.write_text("\n".join(spec_to_config(spec, "1")) + "\n")
    back = spec_from_config(parse_config_file(str(cfg)), "1")
    assert back == spec  # %.17g round-trips doubles exactly


def test_no_timestamps_in_output(tmp_path):
    import re
    rc, payload = run_to_file(tmp_path, "ts.csv", ["fig1", "--points", "3"])
    text = payload.decode()
    assert rc == 0
    assert re.search(r"\d{4}-\d{2}-\d{2}", text) is None
    for token in ("time", "date"):
        assert token not in text
