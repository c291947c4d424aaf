"""Configuration management for prym"""

import copy
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from rich.console import Console
from rich.syntax import Syntax

console = Console()

CONFIG_FILENAME = "prym.yaml"
CONFIG_ENV = "PRYM_CONFIG"


def get_config_path() -> Path:
    """Path of the config file: $PRYM_CONFIG, else prym.yaml in the current directory."""
    override = os.environ.get(CONFIG_ENV)
    if override:
        return Path(override)
    return Path.cwd() / CONFIG_FILENAME


def get_default_config() -> Dict[str, Any]:
    """Return the default configuration."""
    return {
        "run": {
            "prime": 101,
            "seed": 0,
            "max_tries": 50,
            "convention": "auto",
            "debug": False,
        },
        "reduced_check": {
            "trials": 8,
        },
        "output": {
            "indent": 2,
            "summary_template": None,
        },
    }


def expand_env_vars(value: Any) -> Any:
    """Expand ${VAR_NAME} references in strings, recursively through dicts and lists."""
    if isinstance(value, str):
        pattern = re.compile(r"\$\{([^}]+)\}")
        return pattern.sub(lambda m: os.environ.get(m.group(1), m.group(0)), value)
    if isinstance(value, dict):
        return {k: expand_env_vars(v) for k, v in value.items()}
    if isinstance(value, list):
        return [expand_env_vars(v) for v in value]
    return value


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def init_config() -> bool:
    """Initialize a new prym.yaml file."""
    config_path = get_config_path()

    if config_path.exists():
        console.print(f"[yellow][!][/yellow] {config_path.name} already exists. Use 'prym config' to see it.")
        return False

    with open(config_path, "w") as f:
        yaml.dump(get_default_config(), f, default_flow_style=False, sort_keys=False)

    console.print(f"[green][OK][/green] Created {config_path.name}")
    return True


def load_config() -> Dict[str, Any]:
    """Load prym.yaml merged over the defaults; a missing file means defaults."""
    config_path = get_config_path()
    if not config_path.exists():
        return get_default_config()
    with open(config_path, "r") as f:
        loaded = yaml.safe_load(f) or {}
    if not isinstance(loaded, dict):
        console.print(f"[red][ERROR][/red] {config_path.name} must contain a mapping; using defaults")
        return get_default_config()
    return expand_env_vars(_merge(get_default_config(), loaded))


def save_config(config: Dict[str, Any]) -> None:
    """Save the configuration to prym.yaml."""
    with open(get_config_path(), "w") as f:
        yaml.dump(config, f, default_flow_style=False, sort_keys=False)


def view_config() -> None:
    """Display the current configuration."""
    config_path = get_config_path()

    if config_path.exists():
        content = config_path.read_text()
    else:
        console.print(f"[dim]{config_path.name} not found; showing defaults. Run 'prym config --init' to create it.[/dim]")
        content = yaml.dump(get_default_config(), default_flow_style=False, sort_keys=False)

    console.print(Syntax(content, "yaml", theme="monokai", line_numbers=True))


def parse_value(value: str) -> Any:
    if value.isdigit():
        return int(value)
    if value.replace(".", "", 1).isdigit():
        return float(value)
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    if value.lower() in ("null", "none"):
        return None
    return value


def set_config(key: str, value: str) -> bool:
    """Set a configuration value using dot notation (e.g., 'run.seed')."""
    config_path = get_config_path()
    config = get_default_config()
    if config_path.exists():
        with open(config_path, "r") as f:
            config = _merge(config, yaml.safe_load(f) or {})

    keys = key.split(".")
    current = config
    for k in keys[:-1]:
        if not isinstance(current.get(k), dict):
            current[k] = {}
        current = current[k]

    parsed_value = parse_value(value)
    current[keys[-1]] = parsed_value

    save_config(config)
    console.print(f"[green][OK][/green] Set {key} = {parsed_value}")
    return True


def get_run_config(config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Run settings with defaults filled in."""
    config = config if config is not None else load_config()
    run = config.get("run", {})
    return {
        "prime": int(run.get("prime", 101)),
        "seed": int(run.get("seed", 0)),
        "max_tries": int(run.get("max_tries", 50)),
        "convention": str(run.get("convention", "auto")),
        "debug": bool(run.get("debug", False)),
        "trials": int(config.get("reduced_check", {}).get("trials", 8)),
    }


def get_output_config(config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    config = config if config is not None else load_config()
    output = config.get("output", {})
    return {
        "indent": int(output.get("indent", 2)),
        "summary_template": output.get("summary_template"),
    }
