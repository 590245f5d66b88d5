"""
bundled example systems, shipped as package data, and lookup of
a system by file path or bundled name

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

from importlib import resources
from pathlib import Path
from typing import List

from .config import SystemConfig, load_config, parse_config
from .errors import UnknownSystem

BUNDLED_SUFFIX : str = '.cfg'

# check-all order
BUNDLED_ORDER : List[str] = [
        'free', 'uniform', 'charged', 'relativistic', 'boosted', 'circle',
        ]


def _bundled_dir():
    return resources.files(__package__).joinpath('bundled')


def bundled_names() -> List[str]:
    found = {entry.name[:-len(BUNDLED_SUFFIX)]
            for entry in _bundled_dir().iterdir()
            if entry.name.endswith(BUNDLED_SUFFIX)}
    ordered = [name for name in BUNDLED_ORDER if name in found]
    return ordered + sorted(found - set(ordered))


def bundled_text(name : str) -> str:
    entry = _bundled_dir().joinpath(name + BUNDLED_SUFFIX)
    if not entry.is_file():
        raise UnknownSystem(name)
    return entry.read_text(encoding='utf-8')


def load_bundled(name : str) -> SystemConfig:
    return parse_config(bundled_text(name), f'{name}{BUNDLED_SUFFIX}')


def load_system(spec : str) -> SystemConfig:
    """
    spec is a path to a configuration file, or the name of a
    bundled system with or without the .cfg suffix
    """
    path = Path(spec)
    if path.is_file():
        return load_config(path)
    name = path.name
    if name.endswith(BUNDLED_SUFFIX):
        name = name[:-len(BUNDLED_SUFFIX)]
    if str(path.parent) not in ('.', '') or name not in bundled_names():
        raise UnknownSystem(spec)
    return load_bundled(name)


def load_all() -> List[SystemConfig]:
    return [load_bundled(name) for name in bundled_names()]


# vim: et ai si sts=4
