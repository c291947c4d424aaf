import pytest
import yaml

from prym import config


@pytest.fixture(autouse=True)
def config_path(tmp_path, monkeypatch):
    path = tmp_path / "prym.yaml"
    monkeypatch.setenv(config.CONFIG_ENV, str(path))
    return path


def test_config_path_follows_environment(config_path):
    assert config.get_config_path() == config_path


def test_missing_file_means_defaults():
    assert config.load_config() == config.get_default_config()
    run = config.get_run_config()
    assert run == {"prime": 101, "seed": 0, "max_tries": 50, "convention": "auto", "debug": False, "trials": 8}


def test_partial_file_is_merged_over_defaults(config_path):
    config_path.write_text(yaml.dump({"run": {"seed": 5}, "output": {"indent": 4}}))
    loaded = config.load_config()
    assert loaded["run"]["seed"] == 5
    assert loaded["run"]["prime"] == 101
    assert config.get_output_config(loaded)["indent"] == 4


def test_non_mapping_file_falls_back(config_path):
    config_path.write_text("- 1\n- 2\n")
    assert config.load_config() == config.get_default_config()


def test_expand_env_vars(monkeypatch):
    monkeypatch.setenv("PRYM_TEMPLATES", "/tmp/templates")
    value = {"a": "${PRYM_TEMPLATES}/summary.md", "b": ["${PRYM_UNSET_VARIABLE}", 3]}
    assert config.expand_env_vars(value) == {"a": "/tmp/templates/summary.md", "b": ["${PRYM_UNSET_VARIABLE}", 3]}


@pytest.mark.parametrize("text, value", [
    ("7", 7), ("0.5", 0.5), ("true", True), ("False", False), ("null", None), ("u3=half", "u3=half"),
])
def test_parse_value(text, value):
    assert config.parse_value(text) == value


def test_init_and_set(config_path):
    assert config.init_config()
    assert not config.init_config()
    config.set_config("run.convention", "half")
    config.set_config("extra.nested.flag", "true")
    saved = yaml.safe_load(config_path.read_text())
    assert saved["run"]["convention"] == "half"
    assert saved["extra"]["nested"]["flag"] is True
    assert config.get_run_config()["convention"] == "half"
