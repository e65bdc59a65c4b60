import json
import math

import numpy as np
import pytest
import yaml

from chromint.cli import main
from chromint.scenarios import (
    ConfigError,
    apply_overrides,
    config_from_mapping,
    config_hash,
    default_config,
    run_scenario,
    serialize_config,
)


def test_defaults_follow_operating_tables():
    laser = default_config("laser_delay_scan")
    assert laser.lambda1_nm == 1549.800
    assert laser.lambda2_nm == 863.344
    assert laser.lambda3_nm == 1949.157
    assert laser.efficiency == 0.195
    assert laser.metadata["pump_power_mw"] == 152.6
    thermal = default_config("thermal_delay_scan")
    assert thermal.lambda1_nm == 1549.968
    assert thermal.lambda2_nm == 863.396
    assert thermal.metadata["filter_bandwidth_hz"] == 50e6
    # 50 MHz etalon: coherence time = 1/(pi * bandwidth)
    assert thermal.coherence_time_ps == pytest.approx(1e12 / (math.pi * 50e6), rel=1e-3)


def test_unknown_scenario_and_keys():
    with pytest.raises(ConfigError):
        config_from_mapping({"scenario": "warp"})
    with pytest.raises(ConfigError):
        config_from_mapping({"scenario": "laser_fft", "sideband": 3})


def test_wavelength_consistency_enforced():
    with pytest.raises(ConfigError):
        config_from_mapping({"scenario": "laser_fft", "lambda3_nm": 1800.0})


def test_roundtrip_idempotent():
    cfg = default_config("thermal_fft")
    text1 = serialize_config(cfg)
    cfg2 = config_from_mapping(yaml.safe_load(text1))
    assert serialize_config(cfg2) == text1
    assert config_hash(cfg2) == config_hash(cfg)


def test_overrides_coerce_types():
    cfg = default_config("laser_delay_scan")
    out = apply_overrides(cfg, ["seed=7", "v_deg=0.8", "pump_on=false",
                                "delay_points=12"])
    assert out.seed == 7 and out.v_deg == 0.8
    assert out.pump_on is False and out.delay_points == 12
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["nonsense=1"])
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["v_deg"])


def test_validation_bounds():
    with pytest.raises(ConfigError):
        config_from_mapping({"scenario": "laser_fft", "v_deg": 1.5})
    with pytest.raises(ConfigError):
        config_from_mapping({"scenario": "laser_fft", "source_rate_hz": -1.0})
    with pytest.raises(ConfigError):
        config_from_mapping({"scenario": "laser_fft", "output_filter": 5})


def test_overlap_scan_outputs(tmp_path):
    cfg = apply_overrides(default_config("erasure_overlap_scan"),
                          ["overlap_mean_photons=4,16"])
    manifest = run_scenario(cfg, tmp_path / "run")
    table = (tmp_path / "run" / "overlap.csv").read_text().splitlines()
    assert table[0] == "mean_photons,overlap,deficit"
    assert len(table) == 3
    assert set(manifest["data_files"]) == {"overlap.csv"}
    assert manifest["config_sha256"] == config_hash(cfg)
    saved = json.loads((tmp_path / "run" / "manifest.json").read_text())
    assert saved["seed"] == cfg.seed


def test_run_is_deterministic(tmp_path):
    cfg = apply_overrides(default_config("laser_delay_scan"),
                          ["duration_ps=2e9", "delay_points=6"])
    hashes = []
    for name in ("one", "two"):
        manifest = run_scenario(cfg, tmp_path / name)
        hashes.append(manifest["data_files"])
    assert hashes[0] == hashes[1]


def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.yaml"
    cfg_path.write_text("scenario: erasure_overlap_scan\n"
                        "overlap_mean_photons: [4, 16]\n")
    assert main(["run", str(cfg_path), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "overlap.csv").exists()
    assert main(["run", str(tmp_path / "nope.yaml"),
                 "--out", str(tmp_path / "o2")]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("scenario: laser_fft\nlambda3_nm: 1800.0\n")
    assert main(["run", str(bad), "--out", str(tmp_path / "o3")]) == 2
    capsys.readouterr()


def test_cli_seed_and_override(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.yaml"
    cfg_path.write_text("scenario: erasure_overlap_scan\n"
                        "overlap_mean_photons: [4]\n")
    assert main(["run", str(cfg_path), "--out", str(tmp_path / "a"),
                 "--seed", "99", "--override", "overlap_theta=0.5"]) == 0
    saved = yaml.safe_load((tmp_path / "a" / "config.yaml").read_text())
    assert saved["seed"] == 99
    assert saved["overlap_theta"] == 0.5
    capsys.readouterr()


def test_cli_scan(tmp_path, capsys):
    assert main(["scan", "--scenario", "erasure_overlap_scan",
                 "--param", "overlap_theta=0.4:0.8:2",
                 "--out", str(tmp_path / "sweep"),
                 "--seed", "5"]) == 0
    sweep = json.loads((tmp_path / "sweep" / "sweep.json").read_text())
    assert [r["value"] for r in sweep["runs"]] == [0.4, 0.8]
    assert main(["scan", "--scenario", "erasure_overlap_scan",
                 "--param", "overlap_theta=bad",
                 "--out", str(tmp_path / "s2")]) == 2
    capsys.readouterr()


def test_mutated_color_rotation_breaks_reduction_identity():
    """A sign error in the effective color mixing must not survive the
    analytic cross-checks: flipping the conversion sign breaks the
    superposition-to-single-photon reduction identity the selftest relies
    on."""
    from chromint.interferometry import (
        amplitudes,
        coincidence_single_photon,
        InterferometerGeometry,
    )

    rng = np.random.default_rng(0)
    geo = InterferometerGeometry(1549.8e-9, 863.344e-9, 1949.157e-9,
                                 *rng.uniform(0.01, 0.2, 4))
    amp = amplitudes(geo)
    theta = 0.7
    w = (math.cos(theta) * math.sin(theta)) ** 2
    cross, swap = amp.d_1a * amp.d_2b, amp.d_1b * amp.d_2a
    sign_flipped = w * abs(cross - swap) ** 2
    good = coincidence_single_photon(amp, theta).probability
    assert abs(sign_flipped - good) > 1e-3
