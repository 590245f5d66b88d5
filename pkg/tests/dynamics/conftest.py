"""
Lagrangians and atlases shared by the dynamics tests

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import math

import pytest

from av_variations.dynamics import GaugeClassLagrangian
from av_variations.exprlang import Formula
from av_variations.geometry import (
        Atlas, Chart, Transition, TransitionPiece, euclidean_atlas,
        )


def lagrangian(text : str, dim : int,
        constants : dict = {}) -> GaugeClassLagrangian:
    return GaugeClassLagrangian.build(euclidean_atlas(dim),
            Formula.parse(text, constants))


@pytest.fixture
def free_plane() -> GaugeClassLagrangian:
    return lagrangian('0.5*(v1^2 + v2^2)', 2)

@pytest.fixture
def coupled_plane() -> GaugeClassLagrangian:
    """
    unit charge in the potential A(x) = (x2, -x1)
    """
    return lagrangian('0.5*(v1^2 + v2^2) + x2*v1 - x1*v2', 2)

@pytest.fixture
def gauge_functions() -> list:
    return [Formula.parse(text) for text in
            ('sin(x1)*cos(x2)', 'x1*x2', 'exp(-x1^2)')]

@pytest.fixture
def quadratic_cochain() -> Atlas:
    """
    two charts on the line with equal coordinates and the
    cochain g_01 = x1^2
    """
    inf = math.inf
    x1 = Formula.parse('x1')
    charts = [Chart(0, (-inf,), (inf,)), Chart(1, (-inf,), (inf,))]
    return Atlas(1, charts, [
        Transition(0, 1, (TransitionPiece((-inf,), (inf,), (x1,),
            Formula.parse('x1^2')),)),
        Transition(1, 0, (TransitionPiece((-inf,), (inf,), (x1,),
            Formula.parse('-x1^2')),)),
        ], name='quadratic cochain')

@pytest.fixture
def bounded_line() -> Atlas:
    return Atlas(1, [Chart(0, (-1.0,), (1.0,))], name='interval')


# vim: et ai si sts=4
