from pathlib import Path

import pytest

from extalgebra.config.local import (
    PACKAGE_ROOT,
    default_config,
    read_local_config,
)


def test_config_is_complete(extalgebra_config):
    """Whichever config the run was given passes the completeness check."""
    assert extalgebra_config["caps"]["closure_size"] >= 1
    assert extalgebra_config["engine"]["workers"] >= 1
    assert Path(extalgebra_config["path"]["reports"]).is_file()


def test_shipped_config_matches_defaults():
    config = read_local_config(str(PACKAGE_ROOT.parent / "config.toml"))
    assert config == default_config()


def test_partial_config_keeps_defaults(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text(
        '[engine]\nworkers = 4\n\n[path]\nreports = "?/reports.toml"\n',
        encoding="utf-8",
    )
    config = read_local_config(str(path))
    assert config["engine"] == {"workers": 4, "batch_size": 64}
    assert config["caps"] == default_config()["caps"]
    assert config["path"]["reports"] == str(tmp_path / "reports.toml")


@pytest.mark.parametrize(
    "text, error",
    [
        ("[caps]\nmorphisms = 0\n", ValueError),
        ("[caps]\nmorphisms = 'many'\n", KeyError),
        ("[path]\nreports = 3\n", KeyError),
        ("engine = 2\n", KeyError),
    ],
)
def test_invalid_config(tmp_path, text, error):
    path = tmp_path / "config.toml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(error):
        read_local_config(str(path))
