"""
the system-independent invariant suites and the reference
expression evaluator they compare against

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import math

import pytest

from av_variations.checks import (
        ReferenceEvaluator, SuiteSizes, atlas_suite, autodiff_suite,
        parser_suite, reference_evaluate, relative_error, run_all,
        scaled_error,
        )
from av_variations.config import SystemConfig
from av_variations.errors import AVError
from av_variations.exprlang import parse


@pytest.mark.parametrize('text, expected', [
    ('2 + 3*4', 14.0),
    ('2^3^2', 512.0),
    ('-2^2', -4.0),
    ('(1 + 2)*(3 - 4)/2', -1.5),
    ('pow(2, 10) - sqrt(16)', 1020.0),
    ('x1*x2 - abs(x1)', -1.5),
    ])
def test_reference_evaluator(text : str, expected : float) -> None:
    env = {'x1': -0.5, 'x2': 2.0}
    assert(reference_evaluate(text, env) == expected)
    assert(parse(text).evaluate(env) == expected)


def test_reference_evaluator_failures() -> None:
    with pytest.raises(ValueError):
        reference_evaluate('(-8)^(1/3)', {})
    with pytest.raises(SyntaxError):
        ReferenceEvaluator('1 +* 2', {}).evaluate()
    with pytest.raises(SyntaxError):
        ReferenceEvaluator('(1 + 2', {}).evaluate()
    with pytest.raises(AVError):
        parse('(-8)^(1/3)').evaluate({})


def test_atlas_suite(circle_system : SystemConfig, free : SystemConfig,
        quick : SuiteSizes) -> None:
    for system in (circle_system, free):
        reports = atlas_suite(system, quick)
        names = [r['name'] for r in reports]
        assert(f'{system.name}: pull-back commutes with d' in names)
        for report in reports:
            assert(report['passed']), report


def test_autodiff_suite(quick : SuiteSizes) -> None:
    reports = autodiff_suite(quick)
    assert(len(reports) == 2)
    for report in reports:
        assert(report['passed']), report


def test_parser_suite(quick : SuiteSizes) -> None:
    value, round_trip = parser_suite(quick)
    assert(value['passed']), value
    assert(round_trip['defect'] == 0.0)


def test_run_all_order(free : SystemConfig, uniform : SystemConfig,
        quick : SuiteSizes) -> None:
    reports = run_all([uniform, free], sizes=quick)
    names = [r['name'] for r in reports]
    first_free = min(i for i, name in enumerate(names) if name.startswith('free:'))
    assert(all(name.startswith('uniform:') for name in names[:first_free]))
    # no boosted system, so no Galilean regression
    assert(not any(name.startswith('Galilean') for name in names))
    assert(names[-1] == 'canonical print round trip')
    assert(all(r['passed'] for r in reports)), [r for r in reports if not r['passed']]
    assert(all(math.isfinite(r['defect']) for r in reports))



def test_relative_error_small_values() -> None:
    """
    values below 1 are compared relative to themselves
    """
    assert(relative_error(1e-10 + 1e-20, 1e-10) == pytest.approx(1e-10, rel=1e-3))
    assert(relative_error(1e-10 + 1e-20, 1e-10) > 1e-14)
    assert(relative_error(-3e-8, -3e-8) == 0.0)
    assert(relative_error(1e-300, 0.0) == 1e-300)
    assert(relative_error(250.0, 200.0) == 0.25)
    assert(scaled_error(2e-9, 1e-3) == pytest.approx(2e-6))
    assert(scaled_error(2e-9, 0.0) == 2e-9)


def test_default_sizes() -> None:
    sizes = SuiteSizes()
    assert(sizes.fields == 10)
    assert(sizes.lorentz_step == 1e-3)
    assert(SuiteSizes.quick().lorentz_step >= sizes.lorentz_step)


# vim: et ai si sts=4
