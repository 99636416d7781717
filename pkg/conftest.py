import os
from typing import Optional

from _pytest.config.argparsing import Parser
from _pytest.python import Metafunc
from hypothesis import settings

from extalgebra.config.local import read_local_config


def pytest_addoption(parser: Parser):
    parser.addoption("--extalgebra-config", type=str, default=None)


def pytest_generate_tests(metafunc: Metafunc):
    if "extalgebra_config" in metafunc.fixturenames:
        config: Optional[str] = metafunc.config.getoption("extalgebra_config")
        metafunc.parametrize(
            "extalgebra_config", [read_local_config(config)], scope="module"
        )


settings.register_profile("quick", max_examples=25, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "quick"))
