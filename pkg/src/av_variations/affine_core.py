"""
arithmetic of points of an AV-bundle and of affine scalars

A FiberPoint is a point of the fiber Z_m written in one chart's
trivialization.  Fibers have no distinguished zero, so the only
meaningful real numbers are differences of points over the same
base point, computed after bringing both into one chart.

An AffineScalar is an element of Z_m1 [-] Z_m2, kept as the
anchoring pair (plus, minus).  Equality of affine scalars is only
ever tested through affine_scalar_diff.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

from dataclasses import dataclass
from typing import Protocol, Sequence, Tuple

from .errors import BaseMismatch

BASE_TOLERANCE : float = 1e-9


class FiberAtlas(Protocol):
    """
    the part of geometry.Atlas used to compare fiber points
    which are written in different charts
    """
    def change_coordinates(self, source : int, target : int,
            x : Sequence[float]) -> Tuple[float, ...]:
        pass
    def convert_fiber_value(self, source : int, target : int,
            x : Sequence[float], value : float) -> float:
        pass


@dataclass(frozen=True)
class FiberPoint:
    chart_id : int
    base : Tuple[float, ...]
    value : float

    @classmethod
    def at(cls, chart_id : int, base : Sequence[float],
            value : float) -> "FiberPoint":
        return cls(chart_id, tuple(float(b) for b in base), float(value))

    def __str__(self):
        return f'{self.value!r} over {self.base} (chart {self.chart_id})'


@dataclass(frozen=True)
class AffineScalar:
    """
    plus [-] minus, an element of Z_{plus.base} [-] Z_{minus.base}
    """
    plus : FiberPoint
    minus : FiberPoint

    def trivialized(self) -> float:
        """
        the real number this affine scalar reads as in the
        trivializations of its two anchors
        """
        return self.plus.value - self.minus.value


@dataclass(frozen=True)
class AffineSum:
    """
    first [+] second, an element of Z_{first.base} [+] Z_{second.base}
    """
    first : FiberPoint
    second : FiberPoint


def _same_base(a : Sequence[float], b : Sequence[float]) -> bool:
    if len(a) != len(b):
        return False
    return all(abs(ai - bi) <= BASE_TOLERANCE * max(1.0, abs(ai))
            for ai, bi in zip(a, b))


def fiber_translate(z : FiberPoint, r : float) -> FiberPoint:
    return FiberPoint(z.chart_id, z.base, z.value + r)


def rechart(z : FiberPoint, chart_id : int, atlas : FiberAtlas) -> FiberPoint:
    """
    express z in the trivialization of another chart
    """
    if chart_id == z.chart_id:
        return z
    base = atlas.change_coordinates(z.chart_id, chart_id, z.base)
    value = atlas.convert_fiber_value(z.chart_id, chart_id, z.base, z.value)
    return FiberPoint(chart_id, tuple(base), value)


def fiber_diff(z1 : FiberPoint, z2 : FiberPoint, atlas : FiberAtlas) -> float:
    """
    z1 - z2 as a real number; both points must lie over the same
    point of M, possibly written in different charts
    """
    if z2.chart_id != z1.chart_id:
        z2 = rechart(z2, z1.chart_id, atlas)
    if not _same_base(z1.base, z2.base):
        msg = f'fiber points lie over different base points {z1.base} and {z2.base}'
        raise BaseMismatch(msg)
    return z1.value - z2.value


def box_minus(z1 : FiberPoint, z2 : FiberPoint) -> AffineScalar:
    return AffineScalar(plus=z1, minus=z2)


def box_plus(z1 : FiberPoint, z2 : FiberPoint) -> AffineSum:
    return AffineSum(first=z1, second=z2)


def affine_scalar_diff(s1 : AffineScalar, s2 : AffineScalar,
        atlas : FiberAtlas) -> float:
    """
    (a [-] b) - (a' [-] b') = (a - a') - (b - b')
    """
    return (fiber_diff(s1.plus, s2.plus, atlas)
            - fiber_diff(s1.minus, s2.minus, atlas))


def affine_sum_diff(s1 : AffineSum, s2 : AffineSum,
        atlas : FiberAtlas) -> float:
    """
    (a [+] b) - (a' [+] b') = (a - a') + (b - b')
    """
    return (fiber_diff(s1.first, s2.first, atlas)
            + fiber_diff(s1.second, s2.second, atlas))


def affine_scalar_shift(s : AffineScalar, r : float) -> AffineScalar:
    """
    action of the model space R on Z_m1 [-] Z_m2
    """
    return AffineScalar(fiber_translate(s.plus, r), s.minus)


# vim: et ai si sts=4
