"""
reading system definitions and looking up bundled systems

Copyright (C) 2024-present David C. Fox <talk2dfox@gmail.com>
"""
import math

import pytest

from pathlib import Path

from av_variations.config import (
        SystemConfig, Tolerances, load_config, parse_config,
        )
from av_variations.errors import ConfigSyntax, UnknownSystem, ValidationFailure
from av_variations.systems import (
        BUNDLED_ORDER, bundled_names, load_all, load_system,
        )


def test_minimal_config(minimal_cfg : Path) -> None:
    system = load_config(minimal_cfg)
    assert(system.name == 'minimal')
    assert(system.dim == 1)
    assert(system.atlas.chart_ids == [0])
    assert(system.chi == ())
    assert(system.curve is None and system.exact is None and system.initial is None)
    assert(system.forcing is None)
    assert(system.velocity_bound == math.inf)
    assert(float(system.lagrangian.value(0, [0.0], [2.0])) == 2.0)


def test_unbound_variable(unbound_cfg : Path) -> None:
    with pytest.raises(ValidationFailure) as info:
        load_config(unbound_cfg)
    assert('v9' in str(info.value))
    assert('[system] lagrangian' in info.value.where)


def test_defective_cocycle(defective_circle_cfg : Path) -> None:
    with pytest.raises(ValidationFailure) as info:
        load_config(defective_circle_cfg)
    assert(info.value.defect == pytest.approx(0.1, abs=1e-12))
    assert('antisymmetry' in str(info.value))


def test_toml_syntax_error(broken_toml_cfg : Path) -> None:
    with pytest.raises(ConfigSyntax) as info:
        load_config(broken_toml_cfg)
    assert(info.value.line == 4)
    assert(info.value.column > 0)


@pytest.mark.parametrize('text, fragment', [
    ('[system]\nname = "x"\n', 'dimension'),
    ('[system]\ndim = 9\nlagrangian = "0"\n', 'dimension'),
    ('[system]\ndim = 1\n', 'lagrangian'),
    ('[system]\ndim = 1\nlagrangian = "0.5*v1^2 +"\n', 'parses'),
    ('[system]\ndim = 1\nlagrangian = "0.5*v1^2"\n[atlas]\nkind = "torus"\n', 'torus'),
    ('[system]\ndim = 1\nlagrangian = "0.5*v1^2"\n[gauge]\nchi = ["v1"]\n', 'v1'),
    ('[system]\ndim = 1\nlagrangian = "0.5*v1^2"\n[initial]\nx0 = [0, 1]\nv0 = [1]\n', 'list of 1'),
    ('[system]\ndim = 2\nlagrangian = "0.5*v1^2"\n[atlas]\nkind = "circle"\n', 'circle'),
    ('lagrangian = "0.5*v1^2"\n', 'required section'),
    ])
def test_rejected(text : str, fragment : str) -> None:
    with pytest.raises(ValidationFailure) as info:
        parse_config(text, 'inline.cfg')
    assert(fragment in str(info.value))


def test_constants_and_curve_segments() -> None:
    text = '''
[system]
name = "ring"
dim = 1
lagrangian = "0.5*v1^2 + c*v1"

[constants]
c = 0.25
twice = "2*c"

[atlas]
kind = "circle"
winding = 1

[[curve.segment]]
chart = 0
t0 = 0.5
t1 = 1.0
x1 = "pi - 2*t + twice"

[[curve.segment]]
chart = 1
t0 = 1.0
t1 = 1.5
x1 = "pi - 2*t + twice"

[variation]
fields = [["sin(pi*t)"]]
'''
    system = parse_config(text)
    assert(system.constants['twice'] == 0.5)
    assert(system.constants['pi'] == math.pi)
    assert(len(system.curve.segments) == 2)
    assert([seg.chart_id for seg in system.curve.segments] == [0, 1])
    assert(len(system.variations) == 1)
    assert(system.variations[0].at(0.5)[0] == pytest.approx(1.0))


def test_per_chart_lagrangian() -> None:
    text = '''
[system]
dim = 1
lagrangian_0 = "0.5*v1^2"
lagrangian_1 = "0.5*v1^2 + 0*x1"

[atlas]
kind = "circle"
'''
    system = parse_config(text, 'per_chart.cfg')
    assert(system.name == 'per_chart')
    assert(sorted(system.lagrangian.representatives) == [0, 1])


def test_tolerances() -> None:
    tol = Tolerances()
    assert(tol.el_gauge == 1e-9)
    assert(tol.legendre == 1e-12)
    assert(tol.variation_identity == 1e-4)
    looser = tol.updated({'el_gauge': 1e-6})
    assert(looser.el_gauge == 1e-6)
    assert(looser.legendre == tol.legendre)
    with pytest.raises(ValueError):
        tol.updated({'no_such_check': 1.0})


def test_bundled_systems() -> None:
    names = bundled_names()
    assert(names[:len(BUNDLED_ORDER)] == BUNDLED_ORDER)
    systems = load_all()
    assert([s.name for s in systems] == names)
    for system in systems:
        assert(isinstance(system, SystemConfig))
        assert(system.description)
        assert(system.curve is not None and system.exact is not None)
        assert(system.initial is not None)
    circle = next(s for s in systems if s.name == 'circle')
    assert(circle.atlas.chart_ids == [0, 1])
    relativistic = next(s for s in systems if s.name == 'relativistic')
    assert(relativistic.velocity_bound == 0.9)


def test_load_system(minimal_cfg : Path) -> None:
    assert(load_system('free').name == 'free')
    assert(load_system('free.cfg').name == 'free')
    assert(load_system(str(minimal_cfg)).name == 'minimal')
    with pytest.raises(UnknownSystem):
        load_system('no-such-system')
    with pytest.raises(UnknownSystem):
        load_system('somewhere/free.cfg')


# vim: et ai si sts=4
