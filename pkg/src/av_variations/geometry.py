"""
charted manifolds carrying an AV-bundle, sections and affine
1-forms, curves with chart schedules, pull-back along curves
and the AV-valued integral of an affine 1-form

Conventions.  A transition (i, j) maps chart-i coordinates x to
chart-j coordinates x' and carries the gauge cochain g_ij(x).  A
fiber point with chart-j value z_j has chart-i value

    z_i = z_j + g_ij(x),

so section representatives satisfy phi_i - phi_j(x') = g_ij(x) and
affine 1-forms satisfy theta_i - J^T theta_j(x') = d g_ij(x), with
J = dx'/dx.  Overlaps may have several components (two angle
charts on a circle meet twice), so a transition is a list of
pieces, each valid on a sub-box of chart i.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import itertools
import logging
import math

from dataclasses import dataclass
from typing import (
        Any, Callable, Dict, Iterable, List, Mapping,
        Optional, Sequence, Tuple, Union,
        )

import numpy as np

from scipy.integrate import simpson
from scipy.stats import qmc

from . import autodiff
from .affine_core import AffineScalar, FiberPoint, box_minus
from .errors import ChartDisjoint, ChartScheduleError, ValidationFailure
from .exprlang import Binary, ExprAst, Formula, Number, Unary
from .types import DefectReport, defect_report

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES : int = 32
ATLAS_TOLERANCE : float = 1e-12
FORM_TOLERANCE : float = 1e-10
JUNCTION_TOLERANCE : float = 1e-12
# containment samples per segment when a curve is validated; the
# integrators check every point they evaluate on top of this
CURVE_SAMPLES : int = 257


def _inside(x : Sequence[float], lower : Sequence[float],
        upper : Sequence[float]) -> bool:
    return all(lo < xi < hi for xi, lo, hi in zip(x, lower, upper))


def halton_points(lower : Sequence[float], upper : Sequence[float],
        count : int) -> np.ndarray:
    """
    count quasi-random points strictly inside a box; unbounded
    sides are replaced by [-1, 1]
    """
    lo = np.array([l if math.isfinite(l) else -1.0 for l in lower])
    hi = np.array([u if math.isfinite(u) else 1.0 for u in upper])
    sampler = qmc.Halton(d=len(lo), scramble=False)
    # the first Halton point is the origin, which sits on the boundary
    sampler.fast_forward(1)
    unit = sampler.random(count)
    return lo + unit * (hi - lo)


def simpson_nodes(t0 : float, t1 : float, panels : int) -> np.ndarray:
    """
    the 2*panels + 1 equally spaced nodes of the composite Simpson rule
    """
    if panels < 1:
        raise ValueError('panels must be >= 1')
    return np.linspace(t0, t1, 2 * panels + 1)


def simpson_sum(ys : np.ndarray, ts : np.ndarray) -> float:
    return float(simpson(ys, x=ts))


def simpson_integral(f : Callable[[float], float], t0 : float,
        t1 : float, panels : int) -> float:
    """
    composite Simpson rule with the given number of panels
    (2*panels + 1 nodes)
    """
    ts = simpson_nodes(t0, t1, panels)
    return simpson_sum(np.array([f(float(t)) for t in ts]), ts)


def _as_function(formula : Formula) -> Callable[[Sequence[Any]], Any]:
    return lambda xs: formula.at(xs)


#--------------------
# charts and transitions
#--------------------

@dataclass(frozen=True)
class Chart:
    chart_id : int
    lower : Tuple[float, ...]
    upper : Tuple[float, ...]

    def contains(self, x : Sequence[float]) -> bool:
        return _inside(x, self.lower, self.upper)


@dataclass(frozen=True)
class TransitionPiece:
    lower : Tuple[float, ...]
    upper : Tuple[float, ...]
    coordinates : Tuple[Formula, ...]
    gauge : Formula

    def contains(self, x : Sequence[float]) -> bool:
        return _inside(x, self.lower, self.upper)

    def change(self, x : Sequence[float]) -> Tuple[float, ...]:
        return tuple(float(c.at(x)) for c in self.coordinates)


@dataclass(frozen=True)
class Transition:
    source : int
    target : int
    pieces : Tuple[TransitionPiece, ...]

    def piece_at(self, x : Sequence[float]) -> Optional[TransitionPiece]:
        for piece in self.pieces:
            if piece.contains(x):
                return piece
        return None


class Atlas():
    """
    charts of an n-manifold together with the transition data
    of an AV-bundle over it

    Construction samples every overlap and raises
    ValidationFailure if the antisymmetry or cocycle conditions
    fail by more than tolerance.
    """
    def __init__(self, dim : int, charts : Iterable[Chart],
            transitions : Iterable[Transition] = (),
            name : str = 'atlas',
            samples : int = DEFAULT_SAMPLES,
            tolerance : float = ATLAS_TOLERANCE,
            validate : bool = True) -> None:
        if dim < 1:
            raise ValueError('dimension must be positive')
        self.dim = dim
        self.name = name
        self.charts : Dict[int, Chart] = {c.chart_id: c for c in charts}
        self.transitions : Dict[Tuple[int, int], Transition] = {
                (tr.source, tr.target): tr for tr in transitions}
        self.samples = samples
        self.tolerance = tolerance
        if validate:
            self.validate()

    def __repr__(self):
        return f'Atlas({self.name!r}, dim={self.dim}, charts={sorted(self.charts)})'

    @property
    def chart_ids(self) -> List[int]:
        return sorted(self.charts)

    def chart(self, chart_id : int) -> Chart:
        try:
            return self.charts[chart_id]
        except KeyError:
            raise ChartScheduleError(f'no chart {chart_id} in {self.name}') from None

    def transition(self, source : int, target : int) -> Transition:
        try:
            return self.transitions[(source, target)]
        except KeyError:
            msg = f'no transition from chart {source} to chart {target}'
            raise ChartDisjoint(msg) from None

    def piece(self, source : int, target : int,
            x : Sequence[float]) -> TransitionPiece:
        found = self.transition(source, target).piece_at(x)
        if found is None:
            msg = f'{tuple(x)} is not in the overlap of charts {source} and {target}'
            raise ChartDisjoint(msg)
        return found

    def change_coordinates(self, source : int, target : int,
            x : Sequence[float]) -> Tuple[float, ...]:
        if source == target:
            return tuple(float(xi) for xi in x)
        return self.piece(source, target, x).change(x)

    def jacobian(self, source : int, target : int,
            x : Sequence[float]) -> np.ndarray:
        """
        J[a, b] = d x'_a / d x_b
        """
        if source == target:
            return np.eye(self.dim)
        piece = self.piece(source, target, x)
        return np.array([autodiff.gradient(_as_function(c), x)
            for c in piece.coordinates])

    def gauge_offset(self, source : int, target : int,
            x : Sequence[float]) -> float:
        if source == target:
            return 0.0
        return float(self.piece(source, target, x).gauge.at(x))

    def gauge_differential(self, source : int, target : int,
            x : Sequence[float]) -> np.ndarray:
        if source == target:
            return np.zeros(self.dim)
        gauge = self.piece(source, target, x).gauge
        return autodiff.gradient(_as_function(gauge), x)

    def convert_fiber_value(self, source : int, target : int,
            x : Sequence[float], value : float) -> float:
        """
        chart-target value of the fiber point whose chart-source
        value over x (chart-source coordinates) is value
        """
        return value - self.gauge_offset(source, target, x)

    def fiber_point(self, chart_id : int, x : Sequence[float],
            value : float) -> FiberPoint:
        if not self.chart(chart_id).contains(x):
            msg = f'{tuple(x)} is outside chart {chart_id} of {self.name}'
            raise ChartScheduleError(msg)
        return FiberPoint.at(chart_id, x, value)

    def neighbors(self, chart_id : int,
            x : Sequence[float]) -> List[Tuple[int, Tuple[float, ...]]]:
        """
        other charts containing the point x of chart chart_id,
        with its coordinates there
        """
        found = []
        for (source, target), tr in sorted(self.transitions.items()):
            if source != chart_id:
                continue
            piece = tr.piece_at(x)
            if piece is not None:
                found.append((target, piece.change(x)))
        return found

    #--------------------
    # sampled invariants
    #--------------------

    def overlap_samples(self, source : int, target : int,
            count : Optional[int] = None) -> List[Tuple[float, ...]]:
        count = count or self.samples
        points : List[Tuple[float, ...]] = []
        for piece in self.transition(source, target).pieces:
            for p in halton_points(piece.lower, piece.upper, count):
                points.append(tuple(float(pi) for pi in p))
        return points

    def check(self, count : Optional[int] = None) -> List[DefectReport]:
        """
        sampled defects of antisymmetry (g_ij(x) + g_ji(x') = 0,
        the two-chart case of the cocycle condition), of the
        coordinate round trip, and of the cocycle condition on
        triple overlaps
        """
        antisym : float = 0.0
        antisym_where : str = ''
        round_trip : float = 0.0
        for (i, j) in sorted(self.transitions):
            back = self.transitions.get((j, i))
            for x in self.overlap_samples(i, j, count):
                x_j = self.change_coordinates(i, j, x)
                piece_back = back.piece_at(x_j) if back else None
                if piece_back is None:
                    msg = f'image {x_j} of {x} has no way back from chart {j} to chart {i}'
                    raise ValidationFailure('overlap inverse', msg)
                rt = max(abs(a - b) for a, b in zip(piece_back.change(x_j), x))
                round_trip = max(round_trip, rt)
                defect = abs(self.gauge_offset(i, j, x)
                        + float(piece_back.gauge.at(x_j)))
                if defect > antisym:
                    antisym = defect
                    antisym_where = f'charts ({i}, {j}) at x={x}'
        cocycle : float = 0.0
        cocycle_where : str = ''
        for i, j, k in itertools.permutations(self.chart_ids, 3):
            if not all(pair in self.transitions for pair in ((i, j), (j, k), (k, i))):
                continue
            for x in self.overlap_samples(i, j, count):
                x_j = self.change_coordinates(i, j, x)
                p_jk = self.transitions[(j, k)].piece_at(x_j)
                if p_jk is None:
                    continue
                x_k = p_jk.change(x_j)
                p_ki = self.transitions[(k, i)].piece_at(x_k)
                if p_ki is None:
                    continue
                defect = abs(self.gauge_offset(i, j, x)
                        + float(p_jk.gauge.at(x_j)) + float(p_ki.gauge.at(x_k)))
                if defect > cocycle:
                    cocycle = defect
                    cocycle_where = f'charts ({i}, {j}, {k}) at x={x}'
        return [
            defect_report('antisymmetry (cocycle g_ij + g_ji = 0)', antisym, self.tolerance, antisym_where),
            defect_report('coordinate round trip', round_trip,
                self.tolerance),
            defect_report('cocycle', cocycle, self.tolerance, cocycle_where),
            ]

    def validate(self) -> None:
        for report in self.check():
            logger.debug('%s %s: defect %.3e', self.name, report['name'],
                    report['defect'])
            if not report['passed']:
                raise ValidationFailure(report['name'],
                        report.get('detail', self.name), report['defect'])


#--------------------
# bundled atlases
#--------------------

def euclidean_atlas(dim : int) -> Atlas:
    inf = math.inf
    chart = Chart(0, (-inf,) * dim, (inf,) * dim)
    return Atlas(dim, [chart], name=f'R^{dim}')


def circle_atlas(winding : float = 0.0,
        g01_upper : Optional[str] = None,
        g01_lower : Optional[str] = None,
        g10_upper : Optional[str] = None,
        g10_lower : Optional[str] = None,
        constants : Optional[Mapping[str, float]] = None,
        **kwargs : Any) -> Atlas:
    """
    two angle charts on the circle: chart 0 covers (-pi, pi),
    chart 1 covers (0, 2pi).  They overlap on an upper arc where the
    angles agree and a lower arc where they differ by 2pi.

    With the default gauge cochain (0 on the upper arc, -2pi*winding
    on the lower arc) the section with representative winding*x1 in
    both charts is global, and its differential winding*dx1 is an
    affine 1-form which is not the differential of any function.
    """
    pi = math.pi
    consts : Dict[str, float] = {'two_pi': 2.0 * pi, 'winding': float(winding)}
    consts.update(constants or {})
    def formula(text : Optional[str], default : str) -> Formula:
        return Formula.parse(text if text is not None else default, consts)
    charts = [Chart(0, (-pi,), (pi,)), Chart(1, (0.0,), (2.0 * pi,))]
    t01 = Transition(0, 1, (
        TransitionPiece((0.0,), (pi,), (formula('x1', 'x1'),),
            formula(g01_upper, '0')),
        TransitionPiece((-pi,), (0.0,), (formula(None, 'x1 + two_pi'),),
            formula(g01_lower, '-two_pi*winding')),
        ))
    t10 = Transition(1, 0, (
        TransitionPiece((0.0,), (pi,), (formula('x1', 'x1'),),
            formula(g10_upper, '0')),
        TransitionPiece((pi,), (2.0 * pi,), (formula(None, 'x1 - two_pi'),),
            formula(g10_lower, 'two_pi*winding')),
        ))
    return Atlas(1, charts, [t01, t10], name='circle', **kwargs)


#--------------------
# sections and forms
#--------------------

def _shift(ast : ExprAst, f : ExprAst) -> ExprAst:
    # adding -g to (psi + g) gives back psi itself
    if (isinstance(f, Unary) and isinstance(ast, Binary)
            and ast.op == '+' and ast.right == f.child):
        return ast.left
    if isinstance(f, Number) and f.value == 0.0:
        return ast
    return Binary('+', ast, f)


ChartFunctions = Union[Formula, Mapping[int, Formula]]


def _per_chart(f : ChartFunctions, chart_ids : Iterable[int]) -> Dict[int, Formula]:
    if isinstance(f, Formula):
        return {c: f for c in chart_ids}
    return dict(f)


@dataclass(frozen=True)
class AVSection:
    """
    a section of the AV-bundle, one representative per chart
    """
    representatives : Mapping[int, Formula]

    @classmethod
    def uniform(cls, formula : Formula, atlas : Atlas) -> "AVSection":
        return cls({c: formula for c in atlas.chart_ids})

    def value(self, chart_id : int, x : Sequence[Any]) -> Any:
        return self.representatives[chart_id].at(x)

    def point(self, chart_id : int, x : Sequence[float],
            atlas : Atlas) -> FiberPoint:
        return atlas.fiber_point(chart_id, x, float(self.value(chart_id, x)))

    def compatibility_defect(self, atlas : Atlas,
            count : Optional[int] = None) -> float:
        worst = 0.0
        for (i, j) in atlas.transitions:
            for x in atlas.overlap_samples(i, j, count):
                x_j = atlas.change_coordinates(i, j, x)
                defect = abs(float(self.value(i, x)) - float(self.value(j, x_j))
                        - atlas.gauge_offset(i, j, x))
                worst = max(worst, defect)
        return worst

    def validate(self, atlas : Atlas, tolerance : float = ATLAS_TOLERANCE) -> None:
        missing = set(atlas.chart_ids) - set(self.representatives)
        if missing:
            raise ValidationFailure('section representatives',
                    f'charts {sorted(missing)}')
        defect = self.compatibility_defect(atlas)
        if defect > tolerance:
            raise ValidationFailure('section compatibility', atlas.name, defect)


def gauge_transform_section(phi : AVSection, f : ChartFunctions) -> AVSection:
    """
    phi + f, with f a function on M given by one representative
    per chart (or one expression used in every chart)
    """
    shifts = _per_chart(f, phi.representatives)
    reps = {}
    for c, rep in phi.representatives.items():
        shift = shifts[c]
        constants = {**rep.constants, **shift.constants}
        reps[c] = Formula(_shift(rep.ast, shift.ast), constants)
    return AVSection(reps)


ChartCovector = Callable[[Sequence[float]], np.ndarray]


@dataclass(frozen=True)
class OneForm:
    """
    an ordinary 1-form, one component function per chart
    """
    components : Mapping[int, ChartCovector]

    def at(self, chart_id : int, x : Sequence[float]) -> np.ndarray:
        return np.asarray(self.components[chart_id](x), dtype=float)

    def global_defect(self, atlas : Atlas, count : Optional[int] = None) -> float:
        """
        sampled max |omega_i - J^T omega_j|; zero for a global form
        """
        worst = 0.0
        for (i, j) in atlas.transitions:
            for x in atlas.overlap_samples(i, j, count):
                x_j = atlas.change_coordinates(i, j, x)
                jac = atlas.jacobian(i, j, x)
                diff = self.at(i, x) - jac.T @ self.at(j, x_j)
                worst = max(worst, float(np.max(np.abs(diff))))
        return worst


@dataclass(frozen=True)
class AffineOneForm:
    """
    a section of the phase bundle PZ, one ordinary covector field
    per chart
    """
    components : Mapping[int, ChartCovector]

    @classmethod
    def from_formulas(cls, formulas : Mapping[int, Sequence[Formula]]) -> "AffineOneForm":
        def component(fs : Sequence[Formula]) -> ChartCovector:
            return lambda x: np.array([float(f.at(x)) for f in fs])
        return cls({c: component(fs) for c, fs in formulas.items()})

    def at(self, chart_id : int, x : Sequence[float]) -> np.ndarray:
        return np.asarray(self.components[chart_id](x), dtype=float)

    def pairing(self, chart_id : int, x : Sequence[float],
            v : Sequence[float]) -> float:
        """
        the linear section of the tangent AV-bundle this form
        defines, evaluated on the tangent vector (x, v)
        """
        return float(np.dot(self.at(chart_id, x), v))

    def compatibility_defect(self, atlas : Atlas,
            count : Optional[int] = None) -> float:
        worst = 0.0
        for (i, j) in atlas.transitions:
            for x in atlas.overlap_samples(i, j, count):
                x_j = atlas.change_coordinates(i, j, x)
                jac = atlas.jacobian(i, j, x)
                diff = (self.at(i, x) - jac.T @ self.at(j, x_j)
                        - atlas.gauge_differential(i, j, x))
                worst = max(worst, float(np.max(np.abs(diff))))
        return worst

    def validate(self, atlas : Atlas, tolerance : float = FORM_TOLERANCE) -> None:
        defect = self.compatibility_defect(atlas)
        if defect > tolerance:
            raise ValidationFailure('affine 1-form compatibility', atlas.name, defect)

    def difference(self, other : "AffineOneForm") -> OneForm:
        def component(c : int) -> ChartCovector:
            return lambda x: self.at(c, x) - other.at(c, x)
        return OneForm({c: component(c) for c in self.components})


def affine_differential(phi : AVSection, atlas : Atlas) -> AffineOneForm:
    """
    d phi, the class of phi at each point up to first order;
    per chart the ordinary differential of the representative
    """
    def component(formula : Formula) -> ChartCovector:
        return lambda x: autodiff.gradient(_as_function(formula), x)
    return AffineOneForm({c: component(phi.representatives[c])
        for c in atlas.chart_ids})


#--------------------
# curves
#--------------------

@dataclass(frozen=True)
class CurveSegment:
    chart_id : int
    t0 : float
    t1 : float
    coordinates : Tuple[Formula, ...]

    def position(self, t : float) -> np.ndarray:
        return np.array([float(c.at((), t=t)) for c in self.coordinates])

    def jet(self, t : float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        position, velocity and acceleration at t, by differentiating
        the coordinate expressions
        """
        parts = [autodiff.curve_jet(lambda s, c=c: c.at((), t=s), t)
                for c in self.coordinates]
        x, v, a = zip(*parts)
        return np.array(x), np.array(v), np.array(a)

    def jet_within(self, chart : Chart,
            t : float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        jet at t; a position outside the segment's chart is an error
        """
        x, v, a = self.jet(t)
        if not chart.contains(x):
            msg = f'curve leaves chart {self.chart_id} at t={t!r} (x={tuple(x)})'
            raise ChartScheduleError(msg)
        return x, v, a

    def displaced(self, fields : Sequence[Formula], s : float) -> "CurveSegment":
        coords = []
        for c, w in zip(self.coordinates, fields):
            ast = Binary('+', c.ast, Binary('*', Number(float(s)), w.ast))
            coords.append(Formula(ast, {**c.constants, **w.constants}))
        return CurveSegment(self.chart_id, self.t0, self.t1, tuple(coords))


@dataclass(frozen=True)
class CurveSpec:
    """
    a curve gamma: [a, b] -> M given piecewise, each segment
    written in one chart (the chart schedule)
    """
    segments : Tuple[CurveSegment, ...]

    @classmethod
    def single(cls, chart_id : int, t0 : float, t1 : float,
            coordinates : Sequence[Formula]) -> "CurveSpec":
        return cls((CurveSegment(chart_id, float(t0), float(t1),
            tuple(coordinates)),))

    @property
    def a(self) -> float:
        return self.segments[0].t0

    @property
    def b(self) -> float:
        return self.segments[-1].t1

    @property
    def dim(self) -> int:
        return len(self.segments[0].coordinates)

    def segment_at(self, t : float) -> CurveSegment:
        for seg in self.segments:
            if seg.t0 <= t <= seg.t1:
                return seg
        raise ChartScheduleError(f'parameter {t} outside [{self.a}, {self.b}]')

    def jet(self, t : float) -> Tuple[int, np.ndarray, np.ndarray, np.ndarray]:
        seg = self.segment_at(t)
        return (seg.chart_id,) + seg.jet(t)

    def start_point(self) -> Tuple[int, np.ndarray]:
        seg = self.segments[0]
        return seg.chart_id, seg.position(seg.t0)

    def end_point(self) -> Tuple[int, np.ndarray]:
        seg = self.segments[-1]
        return seg.chart_id, seg.position(seg.t1)

    def displaced(self, fields : Sequence[Formula], s : float) -> "CurveSpec":
        """
        gamma + s*w, with w given in the coordinates of each segment's chart
        """
        return CurveSpec(tuple(seg.displaced(fields, s) for seg in self.segments))

    def validate(self, atlas : Atlas, count : int = CURVE_SAMPLES,
            tolerance : float = JUNCTION_TOLERANCE) -> None:
        if not self.segments:
            raise ChartScheduleError('curve has no segments')
        for seg in self.segments:
            if len(seg.coordinates) != atlas.dim:
                msg = f'segment in chart {seg.chart_id} has {len(seg.coordinates)} coordinates, atlas has dimension {atlas.dim}'
                raise ChartScheduleError(msg)
            if not seg.t1 > seg.t0:
                raise ChartScheduleError(f'empty segment [{seg.t0}, {seg.t1}]')
            chart = atlas.chart(seg.chart_id)
            for t in np.linspace(seg.t0, seg.t1, count):
                x = seg.position(float(t))
                if not chart.contains(x):
                    msg = f'curve leaves chart {seg.chart_id} at t={float(t)!r} (x={tuple(x)})'
                    raise ChartScheduleError(msg)
        for prev, nxt in zip(self.segments, self.segments[1:]):
            if prev.t1 != nxt.t0:
                raise ChartScheduleError(f'gap in chart schedule at t={prev.t1}')
            x = prev.position(prev.t1)
            try:
                mapped = np.array(atlas.change_coordinates(prev.chart_id,
                    nxt.chart_id, x))
            except ChartDisjoint as exc:
                raise ChartScheduleError(f'junction at t={prev.t1}: {exc}') from None
            gap = float(np.max(np.abs(mapped - nxt.position(nxt.t0))))
            if gap > tolerance * max(1.0, float(np.max(np.abs(mapped)))):
                msg = f'segments disagree by {gap:.3e} at junction t={prev.t1}'
                raise ChartScheduleError(msg)


def transport_fiber(atlas : Atlas, curve : CurveSpec,
        increments : Sequence[float], start : float = 0.0) -> AffineScalar:
    """
    start from the fiber value start over gamma(a), add the
    per-segment increments, and re-express the running value in the
    next chart at every junction; returns end [-] start
    """
    chart0, x0 = curve.start_point()
    origin = atlas.fiber_point(chart0, x0, start)
    value = start
    for k, seg in enumerate(curve.segments):
        value += increments[k]
        if k + 1 < len(curve.segments):
            nxt = curve.segments[k + 1]
            value = atlas.convert_fiber_value(seg.chart_id, nxt.chart_id,
                    seg.position(seg.t1), value)
    chart1, x1 = curve.end_point()
    return box_minus(atlas.fiber_point(chart1, x1, value), origin)


class PulledBackForm():
    """
    gamma^* sigma as a function of the curve parameter:
    t -> <theta_chart(t)(gamma(t)), gamma'(t)>
    """
    def __init__(self, form : AffineOneForm, curve : CurveSpec,
            atlas : Atlas) -> None:
        self.form = form
        self.curve = curve
        self.atlas = atlas

    def __call__(self, t : float) -> float:
        chart, x, v, _ = self.curve.jet(t)
        return self.form.pairing(chart, x, v)

    def segment_integrals(self, panels : int) -> List[float]:
        out = []
        for seg in self.curve.segments:
            chart = self.atlas.chart(seg.chart_id)
            def integrand(t : float, seg : CurveSegment = seg,
                    chart : Chart = chart) -> float:
                x, v, _ = seg.jet_within(chart, t)
                return self.form.pairing(seg.chart_id, x, v)
            out.append(simpson_integral(integrand, seg.t0, seg.t1, panels))
        return out


def curve_pullback(sigma : AffineOneForm, curve : CurveSpec,
        atlas : Atlas) -> PulledBackForm:
    curve.validate(atlas)
    return PulledBackForm(sigma, curve, atlas)


def affine_integral(sigma : AffineOneForm, curve : CurveSpec,
        atlas : Atlas, panels : int = 1000) -> AffineScalar:
    """
    the AV-valued integral of sigma along gamma, an element of
    Z_gamma(b) [-] Z_gamma(a)
    """
    pulled = curve_pullback(sigma, curve, atlas)
    return transport_fiber(atlas, curve, pulled.segment_integrals(panels))


# vim: et ai si sts=4
