"""
invariant suites: sampled checks of the gauge behavior of the
Euler-Lagrange operator, the Legendre map and the action, of the
atlas and of the numerical building blocks

Every suite returns DefectReports (name, largest defect seen,
tolerance, passed).  Random samples come from seeded numpy
generators so repeated runs report identical numbers.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import logging
import math
import re

from dataclasses import dataclass
from typing import (
        Callable, Dict, List, Mapping, Optional,
        Sequence, Tuple,
        )

import numpy as np

from . import autodiff
from .action import (
        VariationField, action_lift, action_quadrature,
        variation_derivative, variation_pairings,
        )
from .affine_core import affine_scalar_diff, box_minus
from .config import SystemConfig, Tolerances
from .dynamics import (
        GaugeClassLagrangian, SecondOrderPoint,
        euler_lagrange, exact_lagrangian, gauge_shift,
        integrate_trajectory, legendre, solve_accelerations,
        )
from .errors import ValidationFailure
from .exprlang import (
        BUILTINS, Binary, Call, ExprAst, Formula, Number, Unary, Var,
        parse,
        )
from .geometry import (
        affine_differential, affine_integral, euclidean_atlas,
        gauge_transform_section,
        )
from .types import DefectReport, defect_report

logger = logging.getLogger(__name__)

DEFAULT_SEED : int = 20240917


@dataclass(frozen=True)
class SuiteSizes:
    """
    sample counts and discretizations of the suites; the
    defaults are the acceptance sizes
    """
    samples : int = 100
    bases : int = 10
    velocities : int = 10
    panels : int = 1000
    steps : int = 1000
    fields : int = 10
    pairing_fields : int = 2
    atlas_samples : int = 32
    autodiff_count : int = 100
    parser_count : int = 1000
    lorentz_step : float = 1e-3
    seed : int = DEFAULT_SEED

    @classmethod
    def quick(cls) -> "SuiteSizes":
        return cls(samples=10, bases=3, velocities=3, panels=200, steps=200,
                fields=2, pairing_fields=1, atlas_samples=8,
                autodiff_count=20, parser_count=200, lorentz_step=1e-2)


def _worst(values : Sequence[float]) -> float:
    # nan is kept so that the report fails
    worst = 0.0
    for v in values:
        if v != v:
            return math.nan
        worst = max(worst, v)
    return worst


def _max_abs(a : np.ndarray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def scaled_error(error : float, scale : float) -> float:
    """
    error / scale, or the absolute error when the scale is 0
    """
    return error / scale if scale != 0.0 else error


def relative_error(value : float, ref : float) -> float:
    return scaled_error(abs(value - ref), abs(ref))


def random_second_order_points(rng : np.random.Generator, dim : int,
        count : int, velocity_bound : float = math.inf) -> List[SecondOrderPoint]:
    """
    points of [-1, 1]^{3n}; velocities are shrunk when the system
    bounds their length
    """
    scale = min(1.0, velocity_bound / math.sqrt(dim))
    out = []
    for _ in range(count):
        x, v, a = rng.uniform(-1.0, 1.0, size=(3, dim))
        out.append(SecondOrderPoint(x, scale * v, a))
    return out


def _chis(system : SystemConfig,
        chis : Optional[Sequence[Formula]]) -> Sequence[Formula]:
    return system.chi if chis is None else chis


#--------------------
# Euler-Lagrange operator and Legendre map
#--------------------

def el_gauge_suite(system : SystemConfig, chis : Optional[Sequence[Formula]] = None,
        sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.el_gauge) -> DefectReport:
    """
    max |E(L + <d chi, v>) - E(L)| over random second-order points
    """
    lam = system.lagrangian
    rng = np.random.default_rng(sizes.seed)
    points = random_second_order_points(rng, system.dim, sizes.samples,
            system.velocity_bound)
    defects = []
    for chi in _chis(system, chis):
        shifted = gauge_shift(lam, chi)
        for q in points:
            diff = euler_lagrange(shifted, q).p - euler_lagrange(lam, q).p
            defects.append(_max_abs(diff))
    return defect_report(f'{system.name}: Euler-Lagrange gauge invariance',
            _worst(defects), tolerance)


def legendre_suite(system : SystemConfig, chis : Optional[Sequence[Formula]] = None,
        sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.legendre) -> DefectReport:
    """
    P(L + <d chi, v>) - P(L) - d chi(x), and the spread of
    P(L + <d chi, v>) - P(L) over velocities at one base point
    """
    lam = system.lagrangian
    rng = np.random.default_rng(sizes.seed + 1)
    scale = min(1.0, system.velocity_bound / math.sqrt(system.dim))
    defects = []
    for chi in _chis(system, chis):
        shifted = gauge_shift(lam, chi)
        for _ in range(sizes.bases):
            x = rng.uniform(-1.0, 1.0, size=system.dim)
            dchi = autodiff.gradient(lambda xs: chi.at(xs), x)
            shifts = []
            for _ in range(sizes.velocities):
                v = scale * rng.uniform(-1.0, 1.0, size=system.dim)
                shift = legendre(shifted, x, v).p - legendre(lam, x, v).p
                defects.append(_max_abs(shift - dchi))
                shifts.append(shift)
            defects.append(_max_abs(np.array(shifts) - shifts[0]))
    return defect_report(f'{system.name}: Legendre affine covariance',
            _worst(defects), tolerance)


def consistency_suite(system : SystemConfig, sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.consistency) -> DefectReport:
    """
    E(x, v, solve_accelerations(x, v, f)) = f
    """
    lam = system.lagrangian
    rng = np.random.default_rng(sizes.seed + 2)
    defects = []
    for q in random_second_order_points(rng, system.dim, sizes.samples,
            system.velocity_bound):
        f = rng.uniform(-1.0, 1.0, size=system.dim)
        a = solve_accelerations(lam, q.x, q.v, f)
        e = euler_lagrange(lam, SecondOrderPoint(q.x, q.v, a)).p
        defects.append(_max_abs(e - f))
    return defect_report(f'{system.name}: accelerations solve E = f',
            _worst(defects), tolerance)


NEWTON_POTENTIAL : str = 'x1^2*x2 + cos(x1) + exp(0.3*x2)'
NEWTON_MASS : float = 2.0


def newton_suite(sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.newton) -> DefectReport:
    """
    L = m|v|^2/2 - V(x) must give E = -dV/dx - m a
    """
    atlas = euclidean_atlas(2)
    lam = GaugeClassLagrangian.build(atlas,
            Formula.parse(f'0.5*m*(v1^2 + v2^2) - ({NEWTON_POTENTIAL})',
                {'m': NEWTON_MASS}), name='newton')
    rng = np.random.default_rng(sizes.seed + 3)
    defects = []
    for q in random_second_order_points(rng, 2, sizes.samples):
        x1, x2 = q.x
        grad_v = np.array([2.0 * x1 * x2 - math.sin(x1),
            x1 * x1 + 0.3 * math.exp(0.3 * x2)])
        expected = -grad_v - NEWTON_MASS * q.a
        defects.append(_max_abs(euler_lagrange(lam, q).p - expected))
    return defect_report('Newtonian Euler-Lagrange formula', _worst(defects),
            tolerance)


#--------------------
# trajectories
#--------------------

def trajectory_gauge_suite(system : SystemConfig,
        chis : Optional[Sequence[Formula]] = None,
        tolerance : float = Tolerances.trajectory_gauge) -> DefectReport:
    """
    trajectories of L and L + <d chi, v> from the configured initial state
    """
    name = f'{system.name}: trajectory gauge invariance'
    initial = system.initial
    if initial is None:
        raise ValidationFailure('initial state given', f'{system.source} [initial]')
    lam = system.lagrangian
    def run(l : GaugeClassLagrangian):
        return integrate_trajectory(l, initial.x0, initial.v0, initial.t0,
                initial.t1, initial.steps, system.forcing)
    reference = run(lam)
    defects = []
    for chi in _chis(system, chis):
        other = run(gauge_shift(lam, chi))
        if other.charts != reference.charts:
            defects.append(math.inf)
            continue
        defects.append(max(_max_abs(other.positions - reference.positions),
            _max_abs(other.velocities - reference.velocities)))
    return defect_report(name, _worst(defects), tolerance)


def lorentz_suite(system : SystemConfig, chi : str = 'sin(x1)*cos(x2)',
        sizes : SuiteSizes = SuiteSizes(),
        orbit_tolerance : float = Tolerances.lorentz_orbit,
        gauge_tolerance : float = Tolerances.lorentz_gauge) -> List[DefectReport]:
    """
    one full gyration of the charged particle started at (1, 0, 0)
    with unit velocity along x2, field B along x3: radius
    m|v|/(qB), period 2 pi m/(qB), and the same orbit after the
    gauge change A -> A + d chi
    """
    if system.dim != 3:
        raise ValidationFailure('charged particle in three dimensions',
                system.source)
    consts = system.constants
    m, q, b = (float(consts.get(k, 1.0)) for k in ('m', 'q', 'B'))
    x0 = np.array([1.0, 0.0, 0.0])
    v0 = np.array([0.0, 1.0, 0.0])
    radius = m / abs(q * b)
    period = 2.0 * math.pi * m / abs(q * b)
    steps = int(round(period / sizes.lorentz_step))
    lam = system.lagrangian
    trajectory = integrate_trajectory(lam, x0, v0, 0.0, period, steps)
    # the initial acceleration points at the center of gyration
    a0 = solve_accelerations(lam, x0, v0)
    center = x0 + radius * a0 / np.linalg.norm(a0)
    offsets = trajectory.positions - center
    radius_defect = _max_abs(np.linalg.norm(offsets, axis=1) - radius)
    angles = np.unwrap(np.arctan2(offsets[:, 1], offsets[:, 0]))
    turned = abs(angles[-1] - angles[0])
    period_estimate = 2.0 * math.pi * (trajectory.times[-1] - trajectory.times[0]) / turned
    period_defect = abs(period_estimate - period)
    shifted = integrate_trajectory(gauge_shift(lam, Formula.parse(chi, consts)),
            x0, v0, 0.0, period, steps)
    gauge_defect = max(_max_abs(shifted.positions - trajectory.positions),
            _max_abs(shifted.velocities - trajectory.velocities))
    logger.info('Lorentz orbit: %d steps, radius defect %.3e, period defect %.3e',
            steps, radius_defect, period_defect)
    return [
        defect_report(f'{system.name}: Lorentz orbit radius', radius_defect,
            orbit_tolerance),
        defect_report(f'{system.name}: Lorentz orbit period', period_defect,
            orbit_tolerance),
        defect_report(f'{system.name}: Lorentz orbit gauge change', gauge_defect,
            gauge_tolerance),
        ]


def galilean_suite(free : SystemConfig, boosted : SystemConfig,
        sizes : SuiteSizes = SuiteSizes(),
        el_tolerance : float = Tolerances.galilean_el,
        trajectory_tolerance : float = Tolerances.galilean_trajectory) -> List[DefectReport]:
    """
    a boosted free Lagrangian differs from the free one by a gauge
    term and a constant: same E, same trajectories
    """
    if free.dim != boosted.dim:
        raise ValidationFailure('free and boosted systems of equal dimension',
                f'{free.source}, {boosted.source}')
    rng = np.random.default_rng(sizes.seed + 4)
    el_defects = [
        _max_abs(euler_lagrange(boosted.lagrangian, q).p
            - euler_lagrange(free.lagrangian, q).p)
        for q in random_second_order_points(rng, free.dim, sizes.samples)]
    initial = boosted.initial or free.initial
    if initial is None:
        raise ValidationFailure('initial state given', f'{boosted.source} [initial]')
    runs = [integrate_trajectory(s.lagrangian, initial.x0, initial.v0,
        initial.t0, initial.t1, initial.steps) for s in (free, boosted)]
    trajectory_defect = max(_max_abs(runs[0].positions - runs[1].positions),
            _max_abs(runs[0].velocities - runs[1].velocities))
    return [
        defect_report('Galilean boost: Euler-Lagrange operator',
            _worst(el_defects), el_tolerance),
        defect_report('Galilean boost: trajectories', trajectory_defect,
            trajectory_tolerance),
        ]


#--------------------
# actions and variations
#--------------------

def action_equality_suite(system : SystemConfig, sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.action_equality) -> DefectReport:
    """
    quadrature and fiber-lift constructions of the action agree
    """
    curve = _curve(system)
    lam = system.lagrangian
    quad = action_quadrature(lam, curve, sizes.panels)
    lift = action_lift(lam, curve, sizes.steps)
    return defect_report(f'{system.name}: action quadrature vs lift',
            abs(affine_scalar_diff(quad, lift, system.atlas)), tolerance)


def exact_action_suite(system : SystemConfig, sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.exact_action) -> DefectReport:
    """
    the action of the Lagrangian of d phi is phi(gamma(b)) [-] phi(gamma(a))
    """
    curve = _curve(system)
    phi = system.exact
    if phi is None:
        raise ValidationFailure('exact section given', f'{system.source} [exact]')
    atlas = system.atlas
    action = action_quadrature(exact_lagrangian(phi, atlas), curve, sizes.panels)
    chart_a, x_a = curve.start_point()
    chart_b, x_b = curve.end_point()
    expected = box_minus(phi.point(chart_b, x_b, atlas), phi.point(chart_a, x_a, atlas))
    return defect_report(f'{system.name}: action of an exact Lagrangian',
            abs(affine_scalar_diff(action, expected, atlas)), tolerance)


def action_gauge_suite(system : SystemConfig, chis : Optional[Sequence[Formula]] = None,
        sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.action_gauge) -> DefectReport:
    """
    the fixed-trivialization action moves by chi(gamma(b)) - chi(gamma(a))
    """
    curve = _curve(system)
    lam = system.lagrangian
    base = action_quadrature(lam, curve, sizes.panels).trivialized()
    chart_a, x_a = curve.start_point()
    chart_b, x_b = curve.end_point()
    defects = []
    for chi in _chis(system, chis):
        moved = action_quadrature(gauge_shift(lam, chi), curve, sizes.panels).trivialized()
        expected = float(chi.at(x_b)) - float(chi.at(x_a))
        defects.append(abs(moved - base - expected))
    return defect_report(f'{system.name}: action gauge shift', _worst(defects),
            tolerance)


def random_variation_field(rng : np.random.Generator, dim : int, a : float,
        b : float, vanishing : bool) -> VariationField:
    """
    quadratic polynomial in s = (t - a)/(b - a) per coordinate,
    times s(1 - s) when it has to vanish at the ends
    """
    s = f'((t - {a!r})/{b - a!r})'
    texts = []
    for _ in range(dim):
        c0, c1, c2 = (float(round(c, 6)) for c in rng.uniform(-0.5, 0.5, size=3))
        poly = f'({c0!r}) + ({c1!r})*{s} + ({c2!r})*{s}^2'
        texts.append(f'{s}*(1 - {s})*({poly})' if vanishing else poly)
    return VariationField.parse(texts)


def variation_suite(system : SystemConfig, sizes : SuiteSizes = SuiteSizes(),
        eps : float = 1e-5,
        tolerance : float = Tolerances.variation_identity) -> DefectReport:
    """
    finite-difference derivative of the action against the
    boundary-plus-bulk pairing, for random polynomial fields with
    and without vanishing ends and any configured fields
    """
    curve = _curve(system)
    lam = system.lagrangian
    rng = np.random.default_rng(sizes.seed + 5)
    fields = list(system.variations)
    # sizes.fields random fields in all, half of them vanishing at the ends
    vanishing = (sizes.fields + 1) // 2
    fields.extend(random_variation_field(rng, system.dim, curve.a, curve.b,
        k < vanishing) for k in range(sizes.fields))
    pairings = variation_pairings(lam, curve, fields, sizes.panels)
    defects = []
    for w, pairing in zip(fields, pairings):
        derivative = variation_derivative(lam, curve, w, eps, sizes.panels)
        logger.debug('%s: derivative %.12g, pairing %.12g', system.name,
                derivative, pairing)
        defects.append(abs(derivative - pairing))
    return defect_report(f'{system.name}: variational identity', _worst(defects),
            tolerance)


def pairing_gauge_suite(system : SystemConfig,
        chis : Optional[Sequence[Formula]] = None,
        sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.pairing_gauge) -> DefectReport:
    """
    with w vanishing at both ends the pairing sees no gauge term
    """
    curve = _curve(system)
    lam = system.lagrangian
    rng = np.random.default_rng(sizes.seed + 6)
    fields = [random_variation_field(rng, system.dim, curve.a, curve.b, True)
            for _ in range(sizes.pairing_fields)]
    base = variation_pairings(lam, curve, fields, sizes.panels)
    defects = []
    for chi in _chis(system, chis):
        shifted = variation_pairings(gauge_shift(lam, chi), curve, fields, sizes.panels)
        defects.extend(abs(s - value) for s, value in zip(shifted, base))
    return defect_report(f'{system.name}: pairing gauge invariance',
            _worst(defects), tolerance)


def _curve(system : SystemConfig):
    if system.curve is None:
        raise ValidationFailure('curve given', f'{system.source} [curve]')
    return system.curve


#--------------------
# atlas
#--------------------

def atlas_suite(system : SystemConfig, sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.atlas,
        commutation_tolerance : float = Tolerances.commutation) -> List[DefectReport]:
    """
    antisymmetry and cocycle defects of the atlas; when the system
    has a section and a curve, pull-back of d phi against the
    fiber difference of phi, and the difference of two affine
    forms as a global 1-form
    """
    atlas = system.atlas
    reports = []
    for report in atlas.check(sizes.atlas_samples):
        reports.append(defect_report(f'{system.name}: atlas {report["name"]}',
            report['defect'], tolerance, report.get('detail', '')))
    phi = system.exact
    if phi is not None and system.curve is not None:
        curve = system.curve
        integral = affine_integral(affine_differential(phi, atlas), curve, atlas,
                sizes.panels)
        chart_a, x_a = curve.start_point()
        chart_b, x_b = curve.end_point()
        expected = box_minus(phi.point(chart_b, x_b, atlas), phi.point(chart_a, x_a, atlas))
        reports.append(defect_report(f'{system.name}: pull-back commutes with d',
            abs(affine_scalar_diff(integral, expected, atlas)), commutation_tolerance))
        defects = [0.0]
        for chi in system.chi:
            other = affine_differential(gauge_transform_section(phi, chi), atlas)
            defects.append(other.difference(affine_differential(phi, atlas))
                    .global_defect(atlas, sizes.atlas_samples))
        reports.append(defect_report(f'{system.name}: affine form difference is global',
            _worst(defects), tolerance))
    return reports


#--------------------
# automatic differentiation and the expression language
#--------------------

def random_smooth_expression(rng : np.random.Generator, depth : int,
        variables : Sequence[str]) -> str:
    """
    expression text over variables whose derivatives stay moderate
    on [-1, 1]^n, for comparison with finite differences
    """
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.7:
            return str(rng.choice(list(variables)))
        return repr(float(round(rng.uniform(0.5, 2.0), 3)))
    a = random_smooth_expression(rng, depth - 1, variables)
    b = random_smooth_expression(rng, depth - 1, variables)
    forms = [
        f'({a} + {b})', f'({a} - {b})', f'({a} * {b})',
        f'({a} / (1.5 + sin({b})))',
        f'sin({a})', f'cos({a})', f'exp(0.5*sin({a}))',
        f'log(2 + cos({a}))', f'sqrt(1 + ({a})^2)',
        f'pow(2 + sin({a}), cos({b}))', f'tan(0.5*sin({a}))',
        f'({a})^2',
        ]
    return forms[int(rng.integers(len(forms)))]


def autodiff_suite(sizes : SuiteSizes = SuiteSizes(), step : float = 1e-6,
        fd_tolerance : float = Tolerances.autodiff_fd,
        symmetry_tolerance : float = Tolerances.hessian_symmetry) -> List[DefectReport]:
    """
    gradients against central differences (max-norm error relative
    to the max norm of the difference quotients, floored at their
    rounding level) and symmetry of Hessian-vector products
    """
    rng = np.random.default_rng(sizes.seed + 7)
    names = ['x1', 'x2', 'x3']
    fd_defects = []
    sym_defects = []
    for _ in range(sizes.autodiff_count):
        formula = Formula.parse(random_smooth_expression(rng, 4, names))
        f = lambda xs, formula=formula: formula.at(xs)
        p = rng.uniform(-1.0, 1.0, size=3)
        grad = autodiff.gradient(f, p)
        fd = np.empty(3)
        for i in range(3):
            e = np.zeros(3)
            e[i] = step
            fd[i] = (float(f(p + e)) - float(f(p - e))) / (2.0 * step)
        rounding = np.finfo(float).eps * abs(float(f(p))) / step
        fd_defects.append(scaled_error(_max_abs(grad - fd),
            max(_max_abs(fd), rounding)))
        u, w = rng.uniform(-1.0, 1.0, size=(2, 3))
        hw = autodiff.hessian_vector(f, p, w)
        hu = autodiff.hessian_vector(f, p, u)
        hw_u = float(np.dot(hw, u))
        hu_w = float(np.dot(hu, w))
        # |<Hw, u>| <= |Hw| |u|, so cancellation in the products is not penalized
        scale = float(np.linalg.norm(hw) * np.linalg.norm(u))
        sym_defects.append(scaled_error(abs(hw_u - hu_w), scale))
    return [
        defect_report('gradient vs central differences', _worst(fd_defects),
            fd_tolerance),
        defect_report('Hessian-vector symmetry', _worst(sym_defects),
            symmetry_tolerance),
        ]


UNARY_BUILTINS : List[str] = [name for name, (arity, _) in BUILTINS.items()
        if arity == 1]


def random_ast(rng : np.random.Generator, depth : int,
        variables : Sequence[str]) -> ExprAst:
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Var(str(rng.choice(list(variables))))
        return Number(float(round(rng.uniform(0.0, 5.0), 3)))
    kind = int(rng.integers(4))
    if kind == 0:
        return Unary('-', random_ast(rng, depth - 1, variables))
    if kind == 1:
        op = str(rng.choice(list('+-*/^')))
        return Binary(op, random_ast(rng, depth - 1, variables),
                random_ast(rng, depth - 1, variables))
    if kind == 2:
        name = str(rng.choice(UNARY_BUILTINS))
        return Call(name, (random_ast(rng, depth - 1, variables),))
    return Call('pow', (random_ast(rng, depth - 1, variables),
        random_ast(rng, depth - 1, variables)))


class ReferenceEvaluator():
    """
    independent top-down operator precedence evaluator of
    expression text over floats; no syntax tree is built
    """
    TOKEN_RE = re.compile(r'\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(.))')
    BINDING = {'+': 10, '-': 10, '*': 20, '/': 20, '^': 40}
    PREFIX_MINUS = 30

    @staticmethod
    def _pow(x : float, y : float) -> float:
        if x < 0.0 and not float(y).is_integer():
            raise ValueError('negative base with non-integer exponent')
        return math.pow(x, y)

    FUNCTIONS : Dict[str, Callable[..., float]] = {
        'sin': math.sin, 'cos': math.cos, 'tan': math.tan,
        'exp': math.exp, 'log': math.log, 'sqrt': math.sqrt,
        'abs': abs,
        }

    def __init__(self, text : str, env : Mapping[str, float]) -> None:
        self.env = env
        self.tokens : List[Tuple[str, str]] = []
        for number, name, op in self.TOKEN_RE.findall(text):
            if number:
                self.tokens.append(('number', number))
            elif name:
                self.tokens.append(('name', name))
            elif op.strip():
                self.tokens.append(('op', op))
        self.tokens.append(('end', ''))
        self.ix = 0

    def peek(self) -> Tuple[str, str]:
        return self.tokens[self.ix]

    def next(self) -> Tuple[str, str]:
        tok = self.tokens[self.ix]
        self.ix += 1
        return tok

    def lbp(self, tok : Tuple[str, str]) -> int:
        return self.BINDING.get(tok[1], 0) if tok[0] == 'op' else 0

    def expect(self, op : str) -> None:
        if self.next() != ('op', op):
            raise SyntaxError(f'expected {op}')

    def evaluate(self) -> float:
        value = self.expression(0)
        if self.peek()[0] != 'end':
            raise SyntaxError('trailing input')
        return value

    def expression(self, rbp : int) -> float:
        left = self.nud(self.next())
        while rbp < self.lbp(self.peek()):
            left = self.led(self.next()[1], left)
        return left

    def nud(self, tok : Tuple[str, str]) -> float:
        kind, text = tok
        if kind == 'number':
            return float(text)
        if kind == 'name':
            if self.peek() == ('op', '('):
                self.next()
                args = [self.expression(0)]
                while self.peek() == ('op', ','):
                    self.next()
                    args.append(self.expression(0))
                self.expect(')')
                if text == 'pow':
                    return self._pow(*args)
                return self.FUNCTIONS[text](*args)
            return self.env[text]
        if tok == ('op', '-'):
            return -self.expression(self.PREFIX_MINUS)
        if tok == ('op', '('):
            value = self.expression(0)
            self.expect(')')
            return value
        raise SyntaxError(f'unexpected {text!r}')

    def led(self, op : str, left : float) -> float:
        if op == '^':
            # right associative
            return self._pow(left, self.expression(self.BINDING['^'] - 1))
        right = self.expression(self.BINDING[op])
        if op == '+':
            return left + right
        if op == '-':
            return left - right
        if op == '*':
            return left * right
        return left / right


def reference_evaluate(text : str, env : Mapping[str, float]) -> float:
    return ReferenceEvaluator(text, env).evaluate()


def _outcome(f : Callable[[], float]) -> Tuple[bool, float]:
    try:
        return True, float(f())
    except (ValueError, ZeroDivisionError, OverflowError):
        return False, math.nan


def parser_suite(sizes : SuiteSizes = SuiteSizes(),
        tolerance : float = Tolerances.parser) -> List[DefectReport]:
    """
    random trees printed, re-parsed and evaluated against the
    reference evaluator; both must fail on the same inputs
    """
    rng = np.random.default_rng(sizes.seed + 8)
    names = ['x1', 'x2']
    value_defects = []
    round_trip_failures = 0
    for _ in range(sizes.parser_count):
        ast = random_ast(rng, 6, names)
        text = ast.to_text()
        reparsed = parse(text)
        if reparsed != ast:
            round_trip_failures += 1
        env = dict(zip(names, (float(v) for v in rng.uniform(-2.0, 2.0, size=2))))
        ok, value = _outcome(lambda: reparsed.evaluate(env))
        ref_ok, ref = _outcome(lambda: reference_evaluate(text, env))
        if ok != ref_ok:
            value_defects.append(math.inf)
        elif ok:
            if math.isnan(value) and math.isnan(ref) or value == ref:
                value_defects.append(0.0)
            else:
                value_defects.append(relative_error(value, ref))
    return [
        defect_report('parser vs reference evaluator', _worst(value_defects),
            tolerance),
        defect_report('canonical print round trip', float(round_trip_failures), 0.0),
        ]


#--------------------
# everything
#--------------------

def system_suites(system : SystemConfig, tolerances : Tolerances = Tolerances(),
        sizes : SuiteSizes = SuiteSizes()) -> List[DefectReport]:
    """
    all per-system suites the system's configuration supports
    """
    tol = tolerances
    reports : List[DefectReport] = []
    if system.chi:
        reports.append(el_gauge_suite(system, sizes=sizes, tolerance=tol.el_gauge))
        reports.append(legendre_suite(system, sizes=sizes, tolerance=tol.legendre))
    reports.append(consistency_suite(system, sizes, tol.consistency))
    if system.initial is not None and system.chi:
        reports.append(trajectory_gauge_suite(system, tolerance=tol.trajectory_gauge))
    reports.extend(atlas_suite(system, sizes, tol.atlas, tol.commutation))
    if system.curve is not None:
        reports.append(action_equality_suite(system, sizes, tol.action_equality))
        if system.exact is not None:
            reports.append(exact_action_suite(system, sizes, tol.exact_action))
        if system.chi:
            reports.append(action_gauge_suite(system, sizes=sizes,
                tolerance=tol.action_gauge))
            reports.append(pairing_gauge_suite(system, sizes=sizes,
                tolerance=tol.pairing_gauge))
        reports.append(variation_suite(system, sizes,
            tolerance=tol.variation_identity))
    return reports


def run_all(systems : Sequence[SystemConfig], tolerances : Tolerances = Tolerances(),
        sizes : SuiteSizes = SuiteSizes()) -> List[DefectReport]:
    """
    per-system suites in the given order, then the Lorentz and
    Galilean regressions (when charged, free and boosted systems
    are among them), then the autodiff, Newton and parser suites
    """
    tol = tolerances
    reports : List[DefectReport] = []
    by_name = {s.name: s for s in systems}
    for system in systems:
        found = system_suites(system, tol, sizes)
        for report in found:
            logger.info('%s: %.3e (%s)', report['name'], report['defect'],
                    'ok' if report['passed'] else 'FAIL')
        reports.extend(found)
    if 'charged' in by_name:
        reports.extend(lorentz_suite(by_name['charged'], sizes=sizes,
            orbit_tolerance=tol.lorentz_orbit, gauge_tolerance=tol.lorentz_gauge))
    if 'free' in by_name and 'boosted' in by_name:
        reports.extend(galilean_suite(by_name['free'], by_name['boosted'], sizes,
            tol.galilean_el, tol.galilean_trajectory))
    reports.extend(autodiff_suite(sizes, fd_tolerance=tol.autodiff_fd,
        symmetry_tolerance=tol.hessian_symmetry))
    reports.append(newton_suite(sizes, tol.newton))
    reports.extend(parser_suite(sizes, tol.parser))
    return reports


# vim: et ai si sts=4
