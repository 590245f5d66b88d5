"""
command-line front end

    av-variations el --system free --x 0 --v 1 --a 0
    av-variations integrate --system charged --t1 6.283185307179586 --output orbit.csv
    av-variations check-all

--system takes a configuration file or the name of a bundled
system (see `av-variations systems`).  Exit status is 0 on
success, 1 on a validation or numerical failure (including a
failed invariant suite) and 2 on a usage error.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import argparse
import csv
import dataclasses
import logging
import sys

from typing import (
        Callable, List, Optional, Sequence, TextIO, Tuple,
        )

import numpy as np

from . import checks
from .__about__ import __version__
from .action import (
        VariationField, action_lift, action_quadrature, boundary_momenta,
        variation_derivative, variation_pairing,
        )
from .affine_core import affine_scalar_diff
from .config import SystemConfig, Tolerances
from .dynamics import SecondOrderPoint, euler_lagrange, integrate_trajectory, legendre
from .exprlang import Formula
from .geometry import CurveSpec
from .systems import bundled_names, load_bundled, load_system
from .types import DefectReport, Trajectory

logger = logging.getLogger(__name__)

VERBOSITY = [logging.WARNING, logging.INFO, logging.DEBUG]


class UsageError(Exception):
    pass


def fmt(value : float) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return '%.17g' % (float(value) + 0.0)


def fmt_vector(values : Sequence[float]) -> str:
    return ' '.join(fmt(v) for v in values)


def format_report(report : DefectReport) -> str:
    status = 'ok' if report['passed'] else 'FAIL'
    return f"{report['name']:<56} {report['defect']:10.3e}  tol {report['tolerance']:.0e}  {status}"


def tolerance_override(text : str) -> Tuple[str, float]:
    name, sep, value = text.partition('=')
    if not sep:
        raise argparse.ArgumentTypeError(f'expected NAME=VALUE, got {text!r}')
    try:
        return name.strip().replace('-', '_'), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a number: {value!r}') from None


def _tolerances(args : argparse.Namespace) -> Tolerances:
    try:
        return Tolerances().updated(dict(args.tol or []))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _vector(system : SystemConfig, values : Optional[Sequence[float]],
        flag : str, default : Optional[Sequence[float]] = None) -> np.ndarray:
    if values is None:
        if default is None:
            raise UsageError(f'{flag} is required for {system.name}')
        values = default
    if len(values) != system.dim:
        raise UsageError(f'{flag} needs {system.dim} values for {system.name}, got {len(values)}')
    return np.array(values, dtype=float)


def _curve(args : argparse.Namespace, system : SystemConfig) -> CurveSpec:
    if not args.curve:
        if system.curve is None:
            raise UsageError(f'--curve is required: {system.name} defines no curve')
        return system.curve
    if len(args.curve) != system.dim:
        raise UsageError(f'--curve needs {system.dim} expressions, got {len(args.curve)}')
    coords = [Formula.parse(text, system.constants) for text in args.curve]
    curve = CurveSpec.single(args.chart, args.t0, args.t1, coords)
    curve.validate(system.atlas)
    return curve


#--------------------
# subcommands
#--------------------

def cmd_el(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    q = SecondOrderPoint.of(_vector(system, args.x, '--x'),
            _vector(system, args.v, '--v'), _vector(system, args.a, '--a'))
    print(fmt_vector(euler_lagrange(system.lagrangian, q, args.chart).p), file=out)
    return 0


def cmd_legendre(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    p = legendre(system.lagrangian, _vector(system, args.x, '--x'),
            _vector(system, args.v, '--v'), args.chart)
    print(fmt_vector(p.p), file=out)
    return 0


def write_trajectory_csv(trajectory : Trajectory, out : TextIO) -> None:
    n = trajectory.dim
    header = ['t'] + [f'x{i + 1}' for i in range(n)] + [f'v{i + 1}' for i in range(n)]
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(header)
    for row in trajectory.rows():
        writer.writerow([fmt(row[key]) for key in header])


def cmd_integrate(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    initial = system.initial
    x0 = _vector(system, args.x0, '--x0', initial.x0 if initial else None)
    v0 = _vector(system, args.v0, '--v0', initial.v0 if initial else None)
    t0 = args.t0 if args.t0 is not None else (initial.t0 if initial else 0.0)
    t1 = args.t1 if args.t1 is not None else (initial.t1 if initial else None)
    if t1 is None:
        raise UsageError(f'--t1 is required: {system.name} defines no initial state')
    if args.steps is not None:
        steps = args.steps
    elif args.step is not None:
        steps = max(1, int(round((t1 - t0) / args.step)))
    elif initial is not None:
        steps = initial.steps
    else:
        raise UsageError('--steps or --step is required: '
                f'{system.name} defines no initial state')
    trajectory = integrate_trajectory(system.lagrangian, x0, v0, t0, t1, steps,
            system.forcing, args.chart)
    logger.info('chart schedule: %s', trajectory.chart_schedule)
    if args.output:
        with open(args.output, 'w', encoding='utf-8', newline='') as f:
            write_trajectory_csv(trajectory, f)
    else:
        write_trajectory_csv(trajectory, out)
    return 0


def cmd_action(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    curve = _curve(args, system)
    quad = action_quadrature(system.lagrangian, curve, args.panels)
    lift = action_lift(system.lagrangian, curve, args.steps)
    gap = affine_scalar_diff(quad, lift, system.atlas)
    print(f'quadrature {fmt(quad.trivialized())}', file=out)
    print(f'lift {fmt(lift.trivialized())}', file=out)
    print(f'difference {fmt(gap)}', file=out)
    return 0 if abs(gap) <= _tolerances(args).action_equality else 1


def cmd_variation(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    curve = _curve(args, system)
    if len(args.w) != system.dim:
        raise UsageError(f'--w needs {system.dim} expressions, got {len(args.w)}')
    w = VariationField.parse(args.w, system.constants)
    derivative = variation_derivative(system.lagrangian, curve, w, args.eps, args.panels)
    pairing = variation_pairing(system.lagrangian, curve, w, args.panels)
    gap = abs(derivative - pairing)
    print(f'derivative {fmt(derivative)}', file=out)
    print(f'pairing {fmt(pairing)}', file=out)
    print(f'gap {fmt(gap)}', file=out)
    return 0 if gap <= _tolerances(args).variation_identity else 1


def cmd_momenta(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    curve = _curve(args, system)
    p_a, p_b = boundary_momenta(system.lagrangian, curve)
    print(f'p_a chart {p_a.chart_id}: {fmt_vector(p_a.p)}', file=out)
    print(f'p_b chart {p_b.chart_id}: {fmt_vector(p_b.p)}', file=out)
    return 0


def _print_reports(reports : List[DefectReport], out : TextIO) -> int:
    for report in reports:
        print(format_report(report), file=out)
    failed = [r['name'] for r in reports if not r['passed']]
    if failed:
        logger.warning('%d of %d checks failed', len(failed), len(reports))
        return 1
    return 0


def cmd_check_gauge(args : argparse.Namespace, out : TextIO) -> int:
    system = load_system(args.system)
    tol = _tolerances(args)
    chis = None
    if args.chi:
        chis = [Formula.parse(text, system.constants) for text in args.chi]
    elif not system.chi:
        raise UsageError(f'--chi is required: {system.name} defines no gauge functions')
    sizes = checks.SuiteSizes(samples=args.samples, seed=args.seed)
    reports = [
        checks.el_gauge_suite(system, chis, sizes, tol.el_gauge),
        checks.legendre_suite(system, chis, sizes, tol.legendre),
        ]
    return _print_reports(reports, out)


def cmd_check_all(args : argparse.Namespace, out : TextIO) -> int:
    systems = [load_system(s) for s in args.system] if args.system else \
            [load_bundled(name) for name in bundled_names()]
    sizes = checks.SuiteSizes.quick() if args.quick else checks.SuiteSizes()
    if args.seed is not None:
        sizes = dataclasses.replace(sizes, seed=args.seed)
    if args.lorentz_step is not None:
        sizes = dataclasses.replace(sizes, lorentz_step=args.lorentz_step)
    return _print_reports(checks.run_all(systems, _tolerances(args), sizes), out)


def cmd_systems(args : argparse.Namespace, out : TextIO) -> int:
    for name in bundled_names():
        print(f'{name:<14} {load_bundled(name).description}', file=out)
    return 0


#--------------------
# argument parsing
#--------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='av-variations', allow_abbrev=False,
            description='affine-values calculus of variations: '
            'Euler-Lagrange operator, Legendre map, actions and gauge checks')
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
            help='log progress to stderr (repeat for debug output)')
    sub = parser.add_subparsers(dest='command', required=True)

    def command(name : str, func : Callable[..., int], help : str,
            system : bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, allow_abbrev=False,
                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        if system:
            p.add_argument('--system', required=True,
                    help='configuration file or bundled system name')
        p.set_defaults(func=func)
        return p

    def vector(p : argparse.ArgumentParser, flag : str, help : str) -> None:
        p.add_argument(flag, type=float, nargs='+', help=help)

    def chart(p : argparse.ArgumentParser) -> None:
        p.add_argument('--chart', type=int, default=0, help='chart of the coordinates')

    def tolerances(p : argparse.ArgumentParser) -> None:
        p.add_argument('--tol', type=tolerance_override, action='append',
                metavar='NAME=VALUE', help='override a tolerance, e.g. el_gauge=1e-8')

    def curve(p : argparse.ArgumentParser) -> None:
        p.add_argument('--curve', nargs='+', metavar='EXPR',
                help='coordinates of the curve as expressions in t '
                '(default: the curve of the configuration)')
        p.add_argument('--t0', type=float, default=0.0)
        p.add_argument('--t1', type=float, default=1.0)
        chart(p)

    p = command('el', cmd_el, 'evaluate the Euler-Lagrange covector at (x, v, a)')
    vector(p, '--x', 'position')
    vector(p, '--v', 'velocity')
    vector(p, '--a', 'acceleration')
    chart(p)

    p = command('legendre', cmd_legendre, 'evaluate the momentum at (x, v)')
    vector(p, '--x', 'position')
    vector(p, '--v', 'velocity')
    chart(p)

    p = command('integrate', cmd_integrate, 'integrate a trajectory, write CSV')
    vector(p, '--x0', 'initial position (default: [initial] x0)')
    vector(p, '--v0', 'initial velocity (default: [initial] v0)')
    p.add_argument('--t0', type=float, default=None)
    p.add_argument('--t1', type=float, default=None)
    p.add_argument('--steps', type=int, default=None,
            help='number of RK4 steps (default: [initial] steps)')
    p.add_argument('--step', type=float, default=None,
            help='RK4 step size, used when --steps is not given')
    p.add_argument('--output', '-o', default=None, help='CSV file (default: stdout)')
    chart(p)

    p = command('action', cmd_action, 'action by quadrature and by fiber lift')
    curve(p)
    p.add_argument('--panels', type=int, default=1000, help='Simpson panels per segment')
    p.add_argument('--steps', type=int, default=1000, help='RK4 steps per segment')
    tolerances(p)

    p = command('variation', cmd_variation,
            'first variation by finite differences and by the pairing formula')
    curve(p)
    p.add_argument('--w', nargs='+', required=True, metavar='EXPR',
            help='variation field as expressions in t')
    p.add_argument('--eps', type=float, default=1e-5, help='finite-difference step')
    p.add_argument('--panels', type=int, default=1000, help='Simpson panels per segment')
    tolerances(p)

    p = command('momenta', cmd_momenta, 'momenta at the ends of a curve')
    curve(p)

    p = command('check-gauge', cmd_check_gauge,
            'gauge invariance of E and covariance of P for given chi')
    p.add_argument('--chi', action='append', metavar='EXPR',
            help='gauge function (repeatable; default: [gauge] chi)')
    p.add_argument('--samples', type=int, default=100)
    p.add_argument('--seed', type=int, default=checks.DEFAULT_SEED)
    tolerances(p)

    p = command('check-all', cmd_check_all, 'run every invariant suite', system=False)
    p.add_argument('--system', action='append',
            help='configuration file or bundled name (repeatable; default: all bundled)')
    p.add_argument('--quick', action='store_true', help='reduced sample sizes')
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--lorentz-step', type=float, default=None,
            help='RK4 step of the Lorentz orbit regression '
            '(default 1e-3, or 1e-2 with --quick)')
    tolerances(p)

    command('systems', cmd_systems, 'list bundled systems', system=False)
    return parser


def setup_logging(verbose : int) -> None:
    level = VERBOSITY[min(verbose, len(VERBOSITY) - 1)]
    logging.basicConfig(level=level, stream=sys.stderr,
            format='%(levelname)s %(name)s: %(message)s')


def main(argv : Optional[Sequence[str]] = None,
        out : Optional[TextIO] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    out = out or sys.stdout
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except ValueError as exc:
        # AVError and bad numeric arguments (step counts, panels)
        print(f'av-variations: error: {exc}', file=sys.stderr)
        return 1
    return 1


if __name__ == '__main__':
    sys.exit(main())


# vim: et ai si sts=4
