"""
the affine action functional and its first variation

The action of an affine Lagrangian along a curve is not a number
but an element of Z_gamma(b) [-] Z_gamma(a).  Both constructions
below return it as an AffineScalar anchored at the fiber value 0
over gamma(a) in the first chart of the schedule (or at a chosen
initial value for action_lift):

  - action_quadrature integrates L along each chart segment by
    composite Simpson and carries the running value across chart
    junctions;
  - action_lift follows the integral curve of the R-invariant
    vertical vector field s' = L(gamma, gamma') by RK4.

variation_derivative differentiates the action read in these
fixed trivializations; variation_pairing evaluates the
boundary-plus-bulk representation of the same derivative.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import logging

from dataclasses import dataclass
from typing import (
        List, Mapping, Optional, Sequence, Tuple,
        )

import numpy as np

from .affine_core import AffineScalar, box_minus
from .dynamics import (
        AffineCovector, Forcing, GaugeClassLagrangian, SecondOrderPoint,
        euler_lagrange, legendre,
        )
from .exprlang import Formula
from .geometry import (
        Chart, CurveSegment, CurveSpec, simpson_nodes, simpson_sum, transport_fiber,
        )
from .types import Trajectory

logger = logging.getLogger(__name__)

DEFAULT_PANELS : int = 1000
DEFAULT_EPSILON : float = 1e-5


@dataclass(frozen=True)
class VariationField:
    """
    w(t), one expression in t per coordinate, read in the chart
    of whichever curve segment contains t
    """
    components : Tuple[Formula, ...]

    @classmethod
    def parse(cls, texts : Sequence[str],
            constants : Optional[Mapping[str, float]] = None) -> "VariationField":
        return cls(tuple(Formula.parse(text, constants) for text in texts))

    @classmethod
    def zero(cls, dim : int) -> "VariationField":
        return cls(tuple(Formula.constant(0.0) for _ in range(dim)))

    def at(self, t : float) -> np.ndarray:
        return np.array([float(w.at((), t=t)) for w in self.components])


def _lagrangian_along(lam : GaugeClassLagrangian, seg : CurveSegment,
        chart : Chart, t : float) -> float:
    x, v, _ = seg.jet_within(chart, t)
    return float(lam.value(seg.chart_id, x, v))


def action_quadrature(lam : GaugeClassLagrangian, curve : CurveSpec,
        panels : int = DEFAULT_PANELS) -> AffineScalar:
    if panels < 1:
        raise ValueError('panels must be >= 1')
    curve.validate(lam.atlas)
    increments = []
    for seg in curve.segments:
        chart = lam.atlas.chart(seg.chart_id)
        ts = simpson_nodes(seg.t0, seg.t1, panels)
        ys = np.array([_lagrangian_along(lam, seg, chart, float(t)) for t in ts])
        increments.append(simpson_sum(ys, ts))
    return transport_fiber(lam.atlas, curve, increments)


def action_lift(lam : GaugeClassLagrangian, curve : CurveSpec,
        steps : int = DEFAULT_PANELS,
        initial_value : float = 0.0) -> AffineScalar:
    """
    fiber value carried along gamma by RK4 steps of the vector
    field s' = L_chart(gamma(t), gamma'(t)), steps per segment
    """
    if steps < 1:
        raise ValueError('steps must be >= 1')
    atlas = lam.atlas
    curve.validate(atlas)
    chart0, x0 = curve.start_point()
    origin = atlas.fiber_point(chart0, x0, initial_value)
    s = float(initial_value)
    for k, seg in enumerate(curve.segments):
        h = (seg.t1 - seg.t0) / steps
        chart = atlas.chart(seg.chart_id)
        def field(t : float, s : float, seg : CurveSegment = seg,
                chart : Chart = chart) -> float:
            # the field does not depend on s: it is R-invariant
            return _lagrangian_along(lam, seg, chart, t)
        for i in range(steps):
            t = seg.t0 + i * h
            k1 = field(t, s)
            k2 = field(t + 0.5 * h, s + 0.5 * h * k1)
            k3 = field(t + 0.5 * h, s + 0.5 * h * k2)
            k4 = field(t + h, s + h * k3)
            s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if k + 1 < len(curve.segments):
            nxt = curve.segments[k + 1]
            s = atlas.convert_fiber_value(seg.chart_id, nxt.chart_id,
                    seg.position(seg.t1), s)
    chart1, x1 = curve.end_point()
    return box_minus(atlas.fiber_point(chart1, x1, s), origin)


def variation_derivative(lam : GaugeClassLagrangian, curve : CurveSpec,
        w : VariationField, eps : float = DEFAULT_EPSILON,
        panels : int = DEFAULT_PANELS) -> float:
    """
    [S(gamma + eps w) - S(gamma - eps w)] / 2 eps with S the action
    read as a real number in the first and last charts
    """
    if not eps > 0.0:
        raise ValueError('eps must be positive')
    plus = action_quadrature(lam, curve.displaced(w.components, eps), panels)
    minus = action_quadrature(lam, curve.displaced(w.components, -eps), panels)
    return (plus.trivialized() - minus.trivialized()) / (2.0 * eps)


def boundary_momenta(lam : GaugeClassLagrangian,
        curve : CurveSpec) -> Tuple[AffineCovector, AffineCovector]:
    """
    P(gamma'(a)) and P(gamma'(b)), in the first and last charts
    """
    first, last = curve.segments[0], curve.segments[-1]
    x_a, v_a, _ = first.jet(first.t0)
    x_b, v_b, _ = last.jet(last.t1)
    return (legendre(lam, x_a, v_a, first.chart_id),
            legendre(lam, x_b, v_b, last.chart_id))


def variation_pairings(lam : GaugeClassLagrangian, curve : CurveSpec,
        fields : Sequence[VariationField],
        panels : int = DEFAULT_PANELS) -> List[float]:
    """
    variation_pairing for several fields along one curve; E(gamma'')
    is evaluated once per Simpson node and shared by every field
    """
    curve.validate(lam.atlas)
    p_a, p_b = boundary_momenta(lam, curve)
    totals = [float(np.dot(p_b.p, w.at(curve.b))) - float(np.dot(p_a.p, w.at(curve.a)))
            for w in fields]
    for seg in curve.segments:
        chart = lam.atlas.chart(seg.chart_id)
        ts = simpson_nodes(seg.t0, seg.t1, panels)
        es = []
        for t in ts:
            x, v, a = seg.jet_within(chart, float(t))
            es.append(euler_lagrange(lam, SecondOrderPoint(x, v, a), seg.chart_id).p)
        for k, w in enumerate(fields):
            ys = np.array([float(np.dot(e, w.at(float(t)))) for e, t in zip(es, ts)])
            totals[k] += simpson_sum(ys, ts)
    return totals


def variation_pairing(lam : GaugeClassLagrangian, curve : CurveSpec,
        w : VariationField, panels : int = DEFAULT_PANELS) -> float:
    """
    <P(gamma'(b)), w(b)> - <P(gamma'(a)), w(a)> + integral of <E(gamma''), w>

    E here is dL/dx - d/dt dL/dv, so the bulk term enters with a
    plus sign.  Junction terms cancel because w is read in each
    segment's chart.
    """
    total, = variation_pairings(lam, curve, [w], panels)
    logger.debug('variation pairing: %.12g', total)
    return total


def forced_residual(lam : GaugeClassLagrangian, trajectory : Trajectory,
        forcing : Forcing = None) -> float:
    """
    max |E(gamma'') - f| over the interior samples of an integrated
    trajectory, with gamma'' from central differences of the
    velocities (samples next to a chart switch are skipped)
    """
    times = trajectory.times
    worst = 0.0
    for k in range(1, len(trajectory) - 1):
        chart = trajectory.charts[k]
        if trajectory.charts[k - 1] != chart or trajectory.charts[k + 1] != chart:
            continue
        dt = times[k + 1] - times[k - 1]
        a = (trajectory.velocities[k + 1] - trajectory.velocities[k - 1]) / dt
        x, v = trajectory.positions[k], trajectory.velocities[k]
        e = euler_lagrange(lam, SecondOrderPoint(x, v, a), chart).p
        if forcing is not None:
            e = e - np.array([float(f.at(x, v, times[k])) for f in forcing])
        worst = max(worst, float(np.max(np.abs(e))))
    return worst


# vim: et ai si sts=4
