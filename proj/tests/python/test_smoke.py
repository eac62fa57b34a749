import json
import math
import os

import pytest

import shmc


def test_version():
    assert shmc.version().count(".") == 2


def test_presets_resolve():
    ids = shmc.preset_ids()
    assert len(ids) >= 10
    for preset in ids:
        cfg = shmc.preset_config(preset)
        resolved = shmc.validate_config(cfg)
        assert resolved["experiment"] == cfg["experiment"]


def test_bad_config_raises():
    with pytest.raises(shmc.ConfigError):
        shmc.validate_config({"experiment": "dyson"})
    with pytest.raises(shmc.ConfigError):
        shmc.validate_config("not json at all")


def test_semicircle_mass_sums_to_one():
    mass = shmc.semicircle_bin_mass(-math.sqrt(2), math.sqrt(2), 64)
    assert abs(sum(mass) - 1.0) < 1e-12


def test_tiny_run_and_compare(tmp_path):
    cfg = {
        "experiment": "double_well",
        "seed": 11,
        "output_dir": str(tmp_path / "run_a"),
        "samplers": ["shmc"],
        "schedule": [{"iterations": 300, "leapfrog_steps": 10, "step_size": 0.05}],
        "n_iterations": 300,
        "n_burnin": 50,
        "histogram": {"lo": -2.0, "hi": 2.0, "bins": 40},
        "reference": "quadrature",
        "init": {"position": [-1.0]},
        "potential": {"height": 4.0, "half_width": 1.0, "lambda": 0.5},
    }
    manifest = shmc.run(cfg)
    assert manifest["experiment"] == "double_well"
    assert len(manifest["chains"]) == 1
    chain = manifest["chains"][0]
    assert 0.0 < chain["acceptance_rate"] <= 1.0
    assert chain["evolution_time"] == pytest.approx(300 * 10 * 0.05)
    for entry in manifest["files"]:
        path = tmp_path / "run_a" / entry["path"]
        assert path.stat().st_size == entry["bytes"]

    manifest_path = os.path.join(cfg["output_dir"], "manifest.json")
    with open(manifest_path) as f:
        assert json.load(f) == manifest
    report = shmc.compare_manifests(manifest_path, manifest_path)
    assert "verdict" in report
