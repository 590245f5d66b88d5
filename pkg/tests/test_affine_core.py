"""
fiber points, affine scalars and their differences across charts

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import math

import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from av_variations.affine_core import (
        AffineScalar, FiberPoint,
        affine_scalar_diff, affine_scalar_shift, affine_sum_diff,
        box_minus, box_plus, fiber_diff, fiber_translate, rechart,
        )
from av_variations.errors import BaseMismatch
from av_variations.exprlang import Formula
from av_variations.geometry import (
        Atlas, Chart, Transition, TransitionPiece,
        circle_atlas, euclidean_atlas,
        )

values = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
upper_arc = st.floats(min_value=0.01, max_value=math.pi - 0.01)


def shifted_line(offset : float) -> Atlas:
    """
    two copies of the line with g_01 = offset, g_10 = -offset
    """
    inf = math.inf
    x1 = Formula.parse('x1')
    charts = [Chart(0, (-inf,), (inf,)), Chart(1, (-inf,), (inf,))]
    transitions = [
        Transition(0, 1, (TransitionPiece((-inf,), (inf,), (x1,),
            Formula.constant(offset)),)),
        Transition(1, 0, (TransitionPiece((-inf,), (inf,), (x1,),
            Formula.constant(-offset)),)),
        ]
    return Atlas(1, charts, transitions, name='shifted line')


def test_fiber_translate() -> None:
    z = FiberPoint.at(0, [0.0], 2.0)
    assert(fiber_translate(z, 0.0).value == 2.0)
    assert(fiber_translate(z, -2.0).value == 0.0)
    assert(fiber_translate(FiberPoint.at(0, [1.0], 0.5), 0.25).value == 0.75)


def test_fiber_diff_same_chart() -> None:
    atlas = euclidean_atlas(1)
    z1 = FiberPoint.at(0, [0.3], 3.0)
    z2 = FiberPoint.at(0, [0.3], 1.0)
    assert(fiber_diff(z1, z2, atlas) == 2.0)
    assert(fiber_diff(z1, z1, atlas) == 0.0)


def test_fiber_diff_across_charts() -> None:
    """
    z1 in chart 0 and z2 in chart 1 both read 1.0; with
    z_0 = z_1 + g_01 the point z2 reads 1.5 in chart 0
    """
    atlas = shifted_line(0.5)
    z1 = FiberPoint.at(0, [0.2], 1.0)
    z2 = FiberPoint.at(1, [0.2], 1.0)
    assert(fiber_diff(z1, z2, atlas) == pytest.approx(-0.5, abs=1e-15))
    assert(fiber_diff(z2, z1, atlas) == pytest.approx(0.5, abs=1e-15))


def test_fiber_diff_base_mismatch() -> None:
    atlas = euclidean_atlas(2)
    with pytest.raises(BaseMismatch):
        fiber_diff(FiberPoint.at(0, [0.0, 0.0], 1.0),
                FiberPoint.at(0, [0.0, 1.0], 1.0), atlas)


@given(values, values, upper_arc)
def test_fiber_diff_antisymmetric(a : float, b : float, x : float) -> None:
    atlas = shifted_line(0.75)
    z1 = FiberPoint.at(0, [x], a)
    z2 = FiberPoint.at(1, [x], b)
    assert(abs(fiber_diff(z1, z2, atlas) + fiber_diff(z2, z1, atlas)) <= 1e-15 * max(1.0, abs(a), abs(b)))


@settings(max_examples=50)
@given(values, st.floats(min_value=-math.pi + 0.01, max_value=-0.01))
def test_rechart_on_lower_arc(value : float, x : float) -> None:
    """
    moving a point through the lower overlap of the circle and back
    changes neither its base nor its value
    """
    atlas = circle_atlas(winding=1.0, validate=False)
    z = FiberPoint.at(0, [x], value)
    there = rechart(z, 1, atlas)
    assert(there.base[0] == pytest.approx(x + 2.0 * math.pi))
    assert(there.value == pytest.approx(value + 2.0 * math.pi, abs=1e-9))
    assert(fiber_diff(z, there, atlas) == pytest.approx(0.0, abs=1e-9))


def test_box_minus_with_itself() -> None:
    atlas = euclidean_atlas(1)
    z = FiberPoint.at(0, [0.0], 4.0)
    s = box_minus(z, z)
    assert(isinstance(s, AffineScalar))
    assert(affine_scalar_diff(s, s, atlas) == 0.0)


def test_affine_scalar_diff() -> None:
    atlas = euclidean_atlas(1)
    a = FiberPoint.at(0, [1.0], 3.0)
    b = FiberPoint.at(0, [0.0], 1.0)
    s = box_minus(a, b)
    assert(affine_scalar_diff(s, s, atlas) == 0.0)
    assert(affine_scalar_diff(box_minus(fiber_translate(a, 2.0), b), s, atlas) == 2.0)
    assert(affine_scalar_diff(s, box_minus(a, fiber_translate(b, 0.5)), atlas) == 0.5)
    assert(affine_scalar_diff(box_minus(a, fiber_translate(b, 0.5)), s, atlas) == -0.5)


@given(values, values, values)
def test_affine_scalar_shift(a : float, b : float, r : float) -> None:
    atlas = euclidean_atlas(1)
    s = box_minus(FiberPoint.at(0, [1.0], a), FiberPoint.at(0, [0.0], b))
    shifted = affine_scalar_shift(s, r)
    assert(affine_scalar_diff(shifted, s, atlas) == pytest.approx(r, abs=1e-9 * max(1.0, abs(a))))


def test_affine_scalar_diff_across_charts() -> None:
    atlas = shifted_line(0.5)
    a0 = FiberPoint.at(0, [1.0], 3.0)
    b0 = FiberPoint.at(0, [0.0], 1.0)
    a1 = rechart(a0, 1, atlas)
    b1 = rechart(b0, 1, atlas)
    # the same element of Z_1 [-] Z_0 written in the other chart
    assert(affine_scalar_diff(box_minus(a0, b0), box_minus(a1, b1), atlas) == 0.0)
    assert(box_minus(a1, b1).trivialized() == box_minus(a0, b0).trivialized())


def test_affine_sum_diff() -> None:
    atlas = euclidean_atlas(1)
    a = FiberPoint.at(0, [1.0], 3.0)
    b = FiberPoint.at(0, [0.0], 1.0)
    moved = box_plus(fiber_translate(a, 1.0), fiber_translate(b, 0.25))
    assert(affine_sum_diff(moved, box_plus(a, b), atlas) == 1.25)


# vim: et ai si sts=4
