"""
fixtures for the command-line tests

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import io

import pytest

from typing import Callable, Sequence, Tuple

from av_variations.cli import main


Runner = Callable[..., Tuple[int, str]]


@pytest.fixture
def run() -> Runner:
    """
    runs the command line with output captured in a string
    """
    def runner(*argv : str) -> Tuple[int, str]:
        out = io.StringIO()
        status = main(list(argv), out)
        return status, out.getvalue()
    return runner


def parse_lines(text : str) -> dict:
    """
    'label value' lines as a dict of floats
    """
    values = {}
    for line in text.splitlines():
        label, _, value = line.rpartition(' ')
        values[label] = float(value)
    return values


@pytest.fixture
def labelled() -> Callable[[str], dict]:
    return parse_lines


# vim: et ai si sts=4
