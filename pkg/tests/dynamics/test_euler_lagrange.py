"""
the Euler-Lagrange covector, the Legendre map and the
acceleration solve, and how they respond to gauge terms and to
a change of trivialization

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import math

import numpy as np
import pytest

from av_variations.checks import (
        SuiteSizes, consistency_suite, el_gauge_suite, legendre_suite,
        newton_suite, random_second_order_points,
        )
from av_variations.config import SystemConfig
from av_variations.dynamics import (
        AffineCovector, GaugeClassLagrangian, SecondOrderPoint,
        euler_lagrange, exact_lagrangian, gauge_shift, legendre,
        rechart_covector, solve_accelerations,
        )
from av_variations.errors import SingularLagrangian, ValidationFailure
from av_variations.exprlang import Formula
from av_variations.geometry import AVSection, Atlas, euclidean_atlas


def lagrangian(text : str, dim : int) -> GaugeClassLagrangian:
    return GaugeClassLagrangian.build(euclidean_atlas(dim), Formula.parse(text))


def test_free_particle_straight_line(free_plane : GaugeClassLagrangian) -> None:
    q = SecondOrderPoint.of([0.3, -0.2], [1.0, 2.0], [0.0, 0.0])
    assert(np.all(euler_lagrange(free_plane, q).p == 0.0))


def test_uniform_field(uniform : SystemConfig) -> None:
    lam = uniform.lagrangian
    for x, v in [(0.0, 0.0), (1.5, -2.0), (-3.0, 0.25)]:
        falling = SecondOrderPoint.of([x], [v], [-1.0])
        assert(euler_lagrange(lam, falling).p.tolist() == [0.0])
        resting = SecondOrderPoint.of([x], [v], [0.0])
        assert(euler_lagrange(lam, resting).p.tolist() == [-1.0])


def test_second_order_point_checks() -> None:
    with pytest.raises(ValueError):
        SecondOrderPoint.of([0.0, 1.0], [0.0], [0.0])
    with pytest.raises(ValueError):
        SecondOrderPoint.of([math.nan], [0.0], [0.0])


def test_legendre_free(free_plane : GaugeClassLagrangian) -> None:
    p = legendre(free_plane, [0.5, 0.5], [1.5, -2.0])
    assert(isinstance(p, AffineCovector))
    assert(p.p.tolist() == [1.5, -2.0])


def test_legendre_minimal_coupling(coupled_plane : GaugeClassLagrangian) -> None:
    x = [0.25, -0.75]
    v = [1.0, 2.0]
    p = legendre(coupled_plane, x, v)
    assert(np.allclose(p.p, [1.0 + x[1], 2.0 - x[0]], atol=1e-15))


def test_solve_accelerations(free_plane : GaugeClassLagrangian,
        coupled_plane : GaugeClassLagrangian) -> None:
    assert(solve_accelerations(free_plane, [0.0, 0.0], [1.0, 1.0]).tolist() == [0.0, 0.0])
    a = solve_accelerations(free_plane, [0.0, 0.0], [1.0, 1.0], [1.0, 0.0])
    assert(a.tolist() == [-1.0, 0.0])
    # the potential (x2, -x1) has curl -2: a = -2 J v
    a = solve_accelerations(coupled_plane, [0.1, 0.2], [1.0, 0.0])
    assert(np.allclose(a, [0.0, 2.0], atol=1e-14))


def test_singular_lagrangian() -> None:
    lam = lagrangian('x1*v1 + v2 - x2^2', 2)
    with pytest.raises(SingularLagrangian) as info:
        solve_accelerations(lam, [0.0, 0.0], [1.0, 1.0])
    assert('singular' in str(info.value))


def test_gauge_invariance(coupled_plane : GaugeClassLagrangian,
        gauge_functions : list) -> None:
    rng = np.random.default_rng(7)
    points = random_second_order_points(rng, 2, 20)
    for chi in gauge_functions:
        shifted = gauge_shift(coupled_plane, chi)
        for q in points:
            diff = euler_lagrange(shifted, q).p - euler_lagrange(coupled_plane, q).p
            assert(np.max(np.abs(diff)) <= 1e-9)


def test_legendre_shift_is_dchi(coupled_plane : GaugeClassLagrangian) -> None:
    chi = Formula.parse('sin(x1)*cos(x2)')
    shifted = gauge_shift(coupled_plane, chi)
    x = np.array([0.4, -0.3])
    dchi = np.array([math.cos(0.4) * math.cos(-0.3), -math.sin(0.4) * math.sin(-0.3)])
    for v in ([0.0, 0.0], [1.0, -1.0], [0.3, 0.9]):
        shift = legendre(shifted, x, v).p - legendre(coupled_plane, x, v).p
        assert(np.max(np.abs(shift - dchi)) <= 1e-12)


def test_gauge_shifts_accumulate(free_plane : GaugeClassLagrangian) -> None:
    once = gauge_shift(free_plane, Formula.parse('x1*x2'))
    twice = gauge_shift(once, Formula.parse('-x1*x2'))
    assert(len(twice.gauge_terms[0]) == 2)
    x, v = [0.3, 0.7], [1.0, -2.0]
    assert(float(twice.value(0, x, v)) == pytest.approx(float(free_plane.value(0, x, v)), abs=1e-15))
    assert(float(once.value(0, x, v)) == pytest.approx(0.5 * 5.0 + 0.7 * 1.0 + 0.3 * -2.0))


def test_exact_lagrangian_has_no_dynamics(plane : Atlas) -> None:
    phi = AVSection.uniform(Formula.parse('x1^2*x2 + cos(x2)'), plane)
    lam = exact_lagrangian(phi, plane)
    rng = np.random.default_rng(11)
    for q in random_second_order_points(rng, 2, 10):
        assert(np.max(np.abs(euler_lagrange(lam, q).p)) <= 1e-12)
    p = legendre(lam, [1.0, 2.0], [0.5, 0.5])
    assert(np.allclose(p.p, [4.0, 1.0 - math.sin(2.0)], atol=1e-15))


def test_incompatible_representatives(quadratic_cochain : Atlas) -> None:
    with pytest.raises(ValidationFailure):
        GaugeClassLagrangian.build(quadratic_cochain, Formula.parse('0.5*v1^2'))


def test_rechart_covector(quadratic_cochain : Atlas) -> None:
    """
    L_0 - L_1 = <d g_01, v> = 2 x1 v1
    """
    lam = GaugeClassLagrangian.build(quadratic_cochain, {
        0: Formula.parse('0.5*v1^2 + 2*x1*v1'),
        1: Formula.parse('0.5*v1^2'),
        })
    x, v = [0.75], [-0.5]
    p0 = legendre(lam, x, v, chart=0)
    p1 = legendre(lam, x, v, chart=1)
    assert(p0.p.tolist() == [-0.5 + 1.5])
    moved = rechart_covector(p0, 1, quadratic_cochain)
    assert(moved.chart_id == 1)
    assert(np.allclose(moved.p, p1.p, atol=1e-15))
    assert(rechart_covector(p0, 0, quadratic_cochain) is p0)
    # E does not depend on the trivialization
    q = SecondOrderPoint.of(x, v, [0.2])
    assert(np.allclose(euler_lagrange(lam, q, 0).p, euler_lagrange(lam, q, 1).p, atol=1e-15))


def test_gauge_suites_on_bundled(charged : SystemConfig,
        relativistic : SystemConfig, quick : SuiteSizes) -> None:
    for system in (charged, relativistic):
        for report in (el_gauge_suite(system, sizes=quick),
                legendre_suite(system, sizes=quick),
                consistency_suite(system, quick)):
            assert(report['passed']), report


def test_newton_formula(quick : SuiteSizes) -> None:
    assert(newton_suite(quick)['passed'])


# vim: et ai si sts=4
