"""
common fixtures for all tests

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import pytest

from pathlib import Path

from av_variations.checks import SuiteSizes
from av_variations.config import SystemConfig
from av_variations.geometry import Atlas, circle_atlas, euclidean_atlas
from av_variations.systems import load_bundled


#--------------------
# Paths to data
#--------------------

@pytest.fixture
def data_path() -> Path:
    return Path(__file__).parent / 'data'

@pytest.fixture
def minimal_cfg(data_path : Path) -> Path:
    return data_path / 'minimal_free.cfg'

@pytest.fixture
def unbound_cfg(data_path : Path) -> Path:
    return data_path / 'unbound_variable.cfg'

@pytest.fixture
def defective_circle_cfg(data_path : Path) -> Path:
    return data_path / 'defective_circle.cfg'

@pytest.fixture
def broken_toml_cfg(data_path : Path) -> Path:
    return data_path / 'broken_toml.cfg'


#--------------------
# atlases and bundled systems
#--------------------

@pytest.fixture
def line() -> Atlas:
    return euclidean_atlas(1)

@pytest.fixture
def plane() -> Atlas:
    return euclidean_atlas(2)

@pytest.fixture
def circle() -> Atlas:
    return circle_atlas(winding=1.0)

@pytest.fixture(scope='session')
def free() -> SystemConfig:
    return load_bundled('free')

@pytest.fixture(scope='session')
def uniform() -> SystemConfig:
    return load_bundled('uniform')

@pytest.fixture(scope='session')
def charged() -> SystemConfig:
    return load_bundled('charged')

@pytest.fixture(scope='session')
def relativistic() -> SystemConfig:
    return load_bundled('relativistic')

@pytest.fixture(scope='session')
def boosted() -> SystemConfig:
    return load_bundled('boosted')

@pytest.fixture(scope='session')
def circle_system() -> SystemConfig:
    return load_bundled('circle')

@pytest.fixture
def quick() -> SuiteSizes:
    return SuiteSizes.quick()


# vim: et ai si sts=4
