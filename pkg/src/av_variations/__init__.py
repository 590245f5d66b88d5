# SPDX-FileCopyrightText: 2024-present David C. Fox <talk2dfox@gmail.com>
#
# SPDX-License-Identifier: MIT
"""
affine-valued Lagrangians: gauge classes of Lagrangians on an
affine bundle over configuration space, their Euler-Lagrange and
Legendre maps, and the affine action with its first variation
"""
from .__about__ import __version__
from .affine_core import (
        AffineScalar, FiberPoint, affine_scalar_diff, box_minus,
        box_plus, fiber_diff,
        )
from .config import SystemConfig, Tolerances, load_config, parse_config
from .dynamics import (
        GaugeClassLagrangian, SecondOrderPoint, euler_lagrange,
        gauge_shift, integrate_trajectory, legendre, solve_accelerations,
        )
from .errors import AVError
from .exprlang import Formula, parse
from .geometry import Atlas, CurveSpec, circle_atlas, euclidean_atlas
from .systems import load_system

__all__ = [
        '__version__',
        'AffineScalar', 'FiberPoint', 'affine_scalar_diff', 'box_minus',
        'box_plus', 'fiber_diff',
        'SystemConfig', 'Tolerances', 'load_config', 'parse_config',
        'GaugeClassLagrangian', 'SecondOrderPoint', 'euler_lagrange',
        'gauge_shift', 'integrate_trajectory', 'legendre',
        'solve_accelerations',
        'AVError',
        'Formula', 'parse',
        'Atlas', 'CurveSpec', 'circle_atlas', 'euclidean_atlas',
        'load_system',
        ]
