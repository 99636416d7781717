import logging
import re
from pathlib import Path
from typing import Any, Optional, cast

import tomlkit
from typing_extensions import TypeGuard

from extalgebra.types import LocalConfig

logger = logging.getLogger(__name__)

PACKAGE_ROOT = Path(__file__).parent.parent


def default_config() -> LocalConfig:
    """The configuration used when no config file is given."""
    return {
        "caps": {
            "closure_size": 4096,
            "search_size": 64,
            "morphisms": 4096,
            "exponent": 720,
            "division_generators": 2,
            "division_nodes": 200000,
        },
        "engine": {"workers": 1, "batch_size": 64},
        "path": {"reports": str(PACKAGE_ROOT / "reports.toml")},
    }


def assert_key_for_scope(scope: str):
    """Checks that a key of the given name and type is present in a config."""

    def assert_key(config: dict, key: str, instance: Any) -> None:
        if not isinstance(config.get(key), instance):
            raise KeyError(f"Missing {key} in {scope}")

    return assert_key


def read_local_config(config_path: Optional[str]) -> LocalConfig:
    """Reads the local config file from the specified path.

    Keys missing from the file fall back to the defaults; keys present
    with the wrong type raise KeyError.
    """
    if config_path is None:
        logger.debug("Using built-in config")
        return default_config()
    logger.debug("Reading local config %s", {"path": config_path})
    with open(config_path, "r", encoding="utf-8") as config_file:
        parsed = cast(dict, tomlkit.parse(config_file.read()))
        logger.debug("Found config file")

    config: dict = cast(dict, default_config())
    for section, values in parsed.items():
        if isinstance(values, dict) and isinstance(config.get(section), dict):
            config[section] = {**config[section], **values}
        else:
            config[section] = values

    def replace_path_alias(path: str) -> str:
        path = re.sub(r"^@", str(PACKAGE_ROOT), path)
        path = re.sub(r"^\?", str(Path(config_path).parent), path)
        return path

    def is_complete_config(config: dict) -> TypeGuard[LocalConfig]:
        """Check that the config contains all required keys."""
        assert_key = assert_key_for_scope("main config")

        # Caps section
        assert_key(config, "caps", dict)
        for key in (
            "closure_size",
            "search_size",
            "morphisms",
            "exponent",
            "division_generators",
            "division_nodes",
        ):
            assert_key(config["caps"], key, int)
            if config["caps"][key] < 1:
                raise ValueError(f"caps.{key} must be positive")

        # Engine section
        assert_key(config, "engine", dict)
        assert_key(config["engine"], "workers", int)
        assert_key(config["engine"], "batch_size", int)
        if config["engine"]["workers"] < 1:
            raise ValueError("engine.workers must be positive")

        # Paths section
        assert_key(config, "path", dict)
        assert_key(config["path"], "reports", str)
        config["path"]["reports"] = replace_path_alias(
            config["path"]["reports"]
        )

        return True

    if is_complete_config(config):
        return config
    raise RuntimeError
