import json
import os
import pathlib
import subprocess

import pytest

jsonschema = pytest.importorskip("jsonschema")

import gibbslab

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA = json.loads((ROOT / "schema" / "run_config.schema.json").read_text())
CLI = os.environ.get("GIBBSLAB_CLI")

FOUR = {"kind": "finite", "dim": 1, "atoms": [-1.0, 0.0, 0.5, 2.0], "weights": [1.0, 3.0, 0.5, 2.0]}
CONFIGS = {
    "minimize": {
        "reference": FOUR,
        "potential": {"dim": 1, "confinement": "power:2", "interaction": "squared_distance"},
        "variational": {"rate": "I"},
    },
    "laplace": {
        "reference": FOUR,
        "potential": {"dim": 1, "confinement": "power:2", "interaction": "zero"},
        "functional": {"kind": "linear", "g": "coordinate:1"},
        "schedule": {"kind": "n", "n_list": [2, 3]},
    },
    "sample": {
        "reference": {"kind": "lebesgue", "dim": 1},
        "potential": {"dim": 1, "confinement": "power:2", "interaction": "log"},
        "sampler": {"n": 4, "beta_n": 8.0, "proposal": "random_walk", "samples": 5},
        "seed": 3,
    },
    "metrics": {
        "metrics": {"mu": {"dim": 1, "atoms": [0.0]}, "nu": {"dim": 1, "atoms": [1.0]}, "p": 1},
    },
    "check-assumptions": {
        "potential": {"dim": 1, "confinement": "power:2", "interaction": "log"},
        "check": {"probe": {"lo": [-2.0], "hi": [2.0], "points_per_axis": 11}, "assumptions": ["B1"]},
    },
}


def validate(cfg):
    jsonschema.validate(cfg, SCHEMA, cls=jsonschema.Draft202012Validator)


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


@pytest.mark.parametrize("command", sorted(CONFIGS))
def test_hand_written_configs_validate(command):
    validate(CONFIGS[command])


def test_schema_rejects_unknown_sections():
    with pytest.raises(jsonschema.ValidationError):
        validate({"potentials": {}})
    with pytest.raises(jsonschema.ValidationError):
        validate({"sampler": {"n": 0}})


def test_catalog_examples_validate():
    cat = gibbslab.catalog()
    for e in cat["confinements"]:
        validate({"potential": {"confinement": e["example"], "interaction": "zero"}})
    for e in cat["interactions"]:
        validate({"potential": {"confinement": "zero", "interaction": e["example"]}})
    for e in cat["functionals"]:
        validate({"functional": e["example"]})
    for e in cat["references"]:
        validate({"reference": e["example"]})


@pytest.mark.skipif(CLI is None, reason="GIBBSLAB_CLI not set")
@pytest.mark.parametrize("command", sorted(CONFIGS))
def test_resolved_manifest_validates(command, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(CONFIGS[command]))
    out = tmp_path / "out"
    subprocess.run([CLI, command, "--config", str(cfg_path), "--out", str(out)], check=True, capture_output=True)
    validate(json.loads((out / "manifest.json").read_text()))
