"""
the affine Euler-Lagrange operator, the affine Legendre map and
trajectory integration

A GaugeClassLagrangian is an affine Lagrangian written in the
trivializations of an atlas: one ordinary Lagrangian L_i(x, v) per
chart, plus any number of gauge terms <d chi, v>.  Representatives
in overlapping charts must satisfy

    L_i(x, v) - L_j(x', J v) = <d g_ij(x), v>

Changing the trivialization (or adding <d chi, v>) changes L but
not the Euler-Lagrange covector; the Legendre map moves by d chi.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import logging
import math

from dataclasses import dataclass, field
from typing import (
        Any, Dict, Mapping, Optional,
        Sequence, Tuple, Union,
        )

import numpy as np

from . import autodiff
from .errors import ChartExit, SingularLagrangian, ValidationFailure
from .exprlang import Formula
from .geometry import Atlas, AVSection, halton_points
from .types import Trajectory

logger = logging.getLogger(__name__)

SINGULAR_CONDITION : float = 1e12
LAGRANGIAN_TOLERANCE : float = 1e-10

ChartFormulas = Union[Formula, Mapping[int, Formula]]


#--------------------
# points of T2M, T*M and PZ
#--------------------

def _vector(xs : Sequence[float]) -> np.ndarray:
    return np.asarray(xs, dtype=float).reshape(-1)


@dataclass(frozen=True)
class SecondOrderPoint:
    x : np.ndarray
    v : np.ndarray
    a : np.ndarray

    @classmethod
    def of(cls, x : Sequence[float], v : Sequence[float],
            a : Sequence[float]) -> "SecondOrderPoint":
        return cls(_vector(x), _vector(v), _vector(a))

    def __post_init__(self) -> None:
        if not (len(self.x) == len(self.v) == len(self.a)):
            raise ValueError('x, v and a must have the same dimension')
        if not all(np.all(np.isfinite(c)) for c in (self.x, self.v, self.a)):
            raise ValueError('second-order point must be finite')


@dataclass(frozen=True)
class Covector:
    x : np.ndarray
    p : np.ndarray


@dataclass(frozen=True)
class AffineCovector:
    """
    a point of the phase bundle PZ written in the trivialization
    of chart chart_id
    """
    chart_id : int
    x : np.ndarray
    p : np.ndarray


#--------------------
# Lagrangians
#--------------------

def _per_chart(f : ChartFormulas, chart_ids : Sequence[int]) -> Dict[int, Formula]:
    if isinstance(f, Formula):
        return {c: f for c in chart_ids}
    return dict(f)


@dataclass(frozen=True)
class GaugeClassLagrangian:
    """
    representatives[c] is the chart-c Lagrangian over x1..xn,
    v1..vn; gauge_terms[c] lists functions chi whose tangent lift
    <d chi, v> is added to it
    """
    atlas : Atlas
    representatives : Mapping[int, Formula]
    gauge_terms : Mapping[int, Tuple[Formula, ...]] = field(default_factory=dict)
    name : str = 'lagrangian'

    @classmethod
    def build(cls, atlas : Atlas, lagrangian : ChartFormulas,
            name : str = 'lagrangian',
            validate : bool = True) -> "GaugeClassLagrangian":
        lam = cls(atlas, _per_chart(lagrangian, atlas.chart_ids), {}, name)
        if validate:
            lam.validate()
        return lam

    @property
    def dim(self) -> int:
        return self.atlas.dim

    def value(self, chart_id : int, x : Sequence[Any],
            v : Sequence[Any]) -> Any:
        """
        L_chart(x, v) over any scalar type
        """
        out = self.representatives[chart_id].at(x, v)
        for chi in self.gauge_terms.get(chart_id, ()):
            out = out + autodiff.tangent_lift(
                    lambda xs, chi=chi: chi.at(xs), x, v)
        return out

    def on_phase_space(self, chart_id : int):
        """
        L_chart as a function of the 2n-vector z = (x, v)
        """
        n = self.dim
        return lambda z: self.value(chart_id, z[:n], z[n:])

    def compatibility_defect(self, count : Optional[int] = None) -> float:
        atlas = self.atlas
        worst = 0.0
        for (i, j) in atlas.transitions:
            points = atlas.overlap_samples(i, j, count)
            velocities = halton_points([-1.0] * self.dim, [1.0] * self.dim,
                    len(points))
            for x, v in zip(points, velocities):
                x_j = atlas.change_coordinates(i, j, x)
                v_j = atlas.jacobian(i, j, x) @ v
                lhs = (float(self.value(i, x, v))
                        - float(self.value(j, x_j, v_j)))
                rhs = float(np.dot(atlas.gauge_differential(i, j, x), v))
                worst = max(worst, abs(lhs - rhs))
        return worst

    def validate(self, tolerance : float = LAGRANGIAN_TOLERANCE) -> None:
        missing = set(self.atlas.chart_ids) - set(self.representatives)
        if missing:
            raise ValidationFailure('lagrangian representatives',
                    f'charts {sorted(missing)} of {self.atlas.name}')
        defect = self.compatibility_defect()
        logger.debug('%s overlap compatibility defect %.3e', self.name, defect)
        if defect > tolerance:
            raise ValidationFailure('lagrangian overlap compatibility',
                    self.atlas.name, defect)


def gauge_shift(lam : GaugeClassLagrangian, chi : ChartFormulas,
        validate : bool = True) -> GaugeClassLagrangian:
    """
    the representative L + <d chi, v> of the same gauge class
    """
    chis = _per_chart(chi, lam.atlas.chart_ids)
    terms = {c: tuple(lam.gauge_terms.get(c, ())) + (chis[c],)
            for c in lam.atlas.chart_ids}
    shifted = GaugeClassLagrangian(lam.atlas, lam.representatives, terms,
            f'{lam.name}+d({chis[lam.atlas.chart_ids[0]].source})')
    if validate:
        shifted.validate()
    return shifted


def exact_lagrangian(phi : AVSection, atlas : Atlas) -> GaugeClassLagrangian:
    """
    the affine Lagrangian of the affine 1-form d phi: L_i = <d phi_i, v>
    """
    zero = {c: Formula.constant(0.0) for c in atlas.chart_ids}
    terms = {c: (phi.representatives[c],) for c in atlas.chart_ids}
    return GaugeClassLagrangian(atlas, zero, terms, 'exact')


#--------------------
# Euler-Lagrange operator and Legendre map
#--------------------

def euler_lagrange(lam : GaugeClassLagrangian, q : SecondOrderPoint,
        chart : int = 0) -> Covector:
    """
    E_i = dL/dx^i - (d2L/dv^i dx) v - (d2L/dv^i dv) a

    all second derivatives come from one evaluation of L over
    batched hyperduals: the x-gradient rows, then one row per v^i
    seeded against (v, a)
    """
    n = lam.dim
    eye = np.eye(2 * n)
    first = eye
    second = np.zeros((2 * n, 2 * n))
    second[n:] = np.concatenate([q.v, q.a])
    jet = autodiff.directional_jet(lam.on_phase_space(chart),
            np.concatenate([q.x, q.v]), first, second)
    return Covector(q.x, jet.first[:n] - jet.mixed[n:])


def legendre(lam : GaugeClassLagrangian, x : Sequence[float],
        v : Sequence[float], chart : int = 0) -> AffineCovector:
    n = lam.dim
    z = np.concatenate([_vector(x), _vector(v)])
    grad = autodiff.gradient(lam.on_phase_space(chart), z)
    return AffineCovector(chart, _vector(x), grad[n:])


def rechart_covector(p : AffineCovector, chart : int,
        atlas : Atlas) -> AffineCovector:
    """
    the same point of PZ in another trivialization:
    p_j = J^-T (p_i - d g_ij)
    """
    if chart == p.chart_id:
        return p
    x_j = np.array(atlas.change_coordinates(p.chart_id, chart, p.x))
    jac = atlas.jacobian(p.chart_id, chart, p.x)
    shifted = p.p - atlas.gauge_differential(p.chart_id, chart, p.x)
    return AffineCovector(chart, x_j, np.linalg.solve(jac.T, shifted))


def solve_accelerations(lam : GaugeClassLagrangian, x : Sequence[float],
        v : Sequence[float], f : Optional[Sequence[float]] = None,
        chart : int = 0) -> np.ndarray:
    """
    a with euler_lagrange(lam, (x, v, a)) = f
    """
    n = lam.dim
    x = _vector(x)
    v = _vector(v)
    eye = np.eye(2 * n)
    v_rows = eye[n:]
    # rows: x-gradient, v-rows against (v, 0), then v-rows against v-rows
    first = np.concatenate([eye[:n], v_rows, np.repeat(v_rows, n, axis=0)])
    second = np.concatenate([
        np.zeros((n, 2 * n)),
        np.tile(np.concatenate([v, np.zeros(n)]), (n, 1)),
        np.tile(v_rows, (n, 1)),
        ])
    jet = autodiff.directional_jet(lam.on_phase_space(chart),
            np.concatenate([x, v]), first, second)
    mass = jet.mixed[2 * n:].reshape(n, n)
    rhs = jet.first[:n] - jet.mixed[n:2 * n]
    if f is not None:
        rhs = rhs - _vector(f)
    condition = float(np.linalg.cond(mass))
    if not math.isfinite(condition) or condition >= SINGULAR_CONDITION:
        raise SingularLagrangian(condition, f'x={tuple(x)}, v={tuple(v)}')
    return np.linalg.solve(mass, rhs)


#--------------------
# trajectories
#--------------------

Forcing = Optional[Sequence[Formula]]


def _forcing_at(forcing : Forcing, x : np.ndarray, v : np.ndarray,
        t : float) -> Optional[np.ndarray]:
    if forcing is None:
        return None
    return np.array([float(f.at(x, v, t)) for f in forcing])


def _rk4_step(lam : GaugeClassLagrangian, chart : int, t : float,
        h : float, x : np.ndarray, v : np.ndarray,
        forcing : Forcing) -> Tuple[np.ndarray, np.ndarray]:
    def accel(t : float, x : np.ndarray, v : np.ndarray) -> np.ndarray:
        return solve_accelerations(lam, x, v, _forcing_at(forcing, x, v, t), chart)
    k1x, k1v = v, accel(t, x, v)
    k2x = v + 0.5 * h * k1v
    k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x, k2x)
    k3x = v + 0.5 * h * k2v
    k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x, k3x)
    k4x = v + h * k3v
    k4v = accel(t + h, x + h * k3x, k4x)
    x_new = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    v_new = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return x_new, v_new


def integrate_trajectory(lam : GaugeClassLagrangian, x0 : Sequence[float],
        v0 : Sequence[float], t0 : float, t1 : float, steps : int,
        forcing : Forcing = None, chart : int = 0) -> Trajectory:
    """
    classical RK4 on x' = v, v' = solve_accelerations(x, v, f)
    with fixed step (t1 - t0)/steps

    When a step would leave the current chart it is redone in an
    overlapping chart that contains the starting point, with the
    state carried over by the coordinate change; ChartExit when
    no such chart keeps the step inside.
    """
    if steps < 1:
        raise ValueError('steps must be >= 1')
    atlas = lam.atlas
    h = (t1 - t0) / steps
    x = _vector(x0)
    v = _vector(v0)
    if not atlas.chart(chart).contains(x):
        raise ChartExit(f'initial point {tuple(x)} is outside chart {chart}')
    times = [float(t0)]
    xs = [x]
    vs = [v]
    charts = [chart]
    for k in range(steps):
        t = t0 + k * h
        x_new, v_new = _rk4_step(lam, chart, t, h, x, v, forcing)
        if not atlas.chart(chart).contains(x_new):
            for target, x_target in atlas.neighbors(chart, x):
                x_t = np.array(x_target)
                v_t = atlas.jacobian(chart, target, x) @ v
                x_try, v_try = _rk4_step(lam, target, t, h, x_t, v_t, forcing)
                if atlas.chart(target).contains(x_try):
                    logger.debug('t=%.6g: switching from chart %d to chart %d',
                            t, chart, target)
                    chart, x_new, v_new = target, x_try, v_try
                    break
            else:
                raise ChartExit(f'trajectory leaves chart {chart} at t={t + h!r} '
                        f'(x={tuple(x_new)}) and no overlapping chart continues it')
        x, v = x_new, v_new
        times.append(t0 + (k + 1) * h)
        xs.append(x)
        vs.append(v)
        charts.append(chart)
    trajectory = Trajectory(np.array(times), np.array(xs), np.array(vs),
            tuple(charts))
    logger.debug('%s: %d steps, chart schedule %s', lam.name, steps,
            trajectory.chart_schedule)
    return trajectory


# vim: et ai si sts=4
