import random

import pytest
from click.testing import CliRunner

from fibered_reps.analyze import prepare_rep
from fibered_reps.numfield import Polynomial, lambda_field_from_factor
from fibered_reps.specfile import SpecFile


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def golden():
    """Поле Q(λ) для λ² = (3+√5)/2"""
    return lambda_field_from_factor(Polynomial.from_rationals([1, -3, 1]))


@pytest.fixture(scope="session")
def genus2_file():
    return SpecFile.load("genus2")


@pytest.fixture(scope="session")
def genus2(genus2_file):
    return prepare_rep(genus2_file)


@pytest.fixture
def invoke(tmp_path, monkeypatch):
    """Запуск CLI с временным конфигом и без обработчиков журнала"""
    from fibered_reps import cli as cli_module

    monkeypatch.setattr(cli_module, "setup_logging", lambda level=None: None)
    runner = CliRunner()
    config = tmp_path / "config.json"

    def run(*args):
        return runner.invoke(cli_module.cli, ["--config", str(config), *args])

    return run
