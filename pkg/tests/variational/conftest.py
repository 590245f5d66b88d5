"""
curves and variation fields for the action tests

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import pytest

from av_variations.action import VariationField
from av_variations.dynamics import GaugeClassLagrangian
from av_variations.exprlang import Formula
from av_variations.geometry import CurveSpec, euclidean_atlas


@pytest.fixture
def unit_line() -> CurveSpec:
    return CurveSpec.single(0, 0.0, 1.0, [Formula.parse('t')])

@pytest.fixture
def bent_line() -> CurveSpec:
    return CurveSpec.single(0, 0.0, 1.0, [Formula.parse('t + 0.4*t^3 - sin(t)')])

@pytest.fixture
def pinned_field() -> VariationField:
    return VariationField.parse(['t*(1 - t)*(1 + 2*t)'])

@pytest.fixture
def free_field() -> VariationField:
    return VariationField.parse(['0.3 - 0.5*t + t^2'])

@pytest.fixture
def zero_lagrangian() -> GaugeClassLagrangian:
    return GaugeClassLagrangian.build(euclidean_atlas(1), Formula.constant(0.0))


# vim: et ai si sts=4
