"""
system definitions: TOML files with [system], [constants],
[atlas], [gauge], [forcing], [curve], [exact], [variation] and
[initial] sections, turned into validated objects

    [system]
    name = "free"
    dim = 1
    lagrangian = "0.5*v1^2"

    [gauge]
    chi = ["sin(x1)", "x1^2"]

    [curve]
    x1 = "t"
    t0 = 0.0
    t1 = 1.0

Lagrangians may be given per chart as lagrangian_0, lagrangian_1,
...; curves crossing charts use [[curve.segment]] tables, each
with chart, t0, t1 and x1..xn.  Constants may be numbers or
expressions over earlier constants; pi is predefined.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import dataclasses
import logging
import math
import re
import tomllib

from dataclasses import dataclass
from pathlib import Path
from typing import (
        Any, Dict, FrozenSet, Mapping,
        Optional, Tuple, Union,
        )

from .action import VariationField
from .dynamics import GaugeClassLagrangian, gauge_shift
from .errors import AVError, ConfigSyntax, ValidationFailure
from .exprlang import Formula, coordinate_names
from .geometry import (
        AVSection, Atlas, CurveSegment, CurveSpec,
        circle_atlas, euclidean_atlas,
        )

logger = logging.getLogger(__name__)

PREDEFINED_CONSTANTS : Dict[str, float] = {'pi': math.pi}
MAX_DIM : int = 6


@dataclass(frozen=True)
class Tolerances:
    """
    acceptance tolerances of the invariant suites
    """
    el_gauge : float = 1e-9
    legendre : float = 1e-12
    action_equality : float = 1e-8
    exact_action : float = 1e-8
    variation_identity : float = 1e-4
    lorentz_orbit : float = 1e-6
    lorentz_gauge : float = 1e-9
    galilean_el : float = 1e-12
    galilean_trajectory : float = 1e-9
    atlas : float = 1e-12
    commutation : float = 1e-8
    autodiff_fd : float = 1e-6
    hessian_symmetry : float = 1e-10
    parser : float = 1e-14
    trajectory_gauge : float = 1e-9
    consistency : float = 1e-10
    newton : float = 1e-12
    action_gauge : float = 1e-9
    pairing_gauge : float = 1e-9

    def updated(self, overrides : Mapping[str, float]) -> "Tolerances":
        known = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f'unknown tolerance(s): {", ".join(sorted(unknown))}')
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})


@dataclass(frozen=True)
class InitialState:
    x0 : Tuple[float, ...]
    v0 : Tuple[float, ...]
    t0 : float
    t1 : float
    steps : int


@dataclass(frozen=True)
class SystemConfig:
    name : str
    description : str
    dim : int
    constants : Mapping[str, float]
    atlas : Atlas
    lagrangian : GaugeClassLagrangian
    chi : Tuple[Formula, ...] = ()
    forcing : Optional[Tuple[Formula, ...]] = None
    curve : Optional[CurveSpec] = None
    exact : Optional[AVSection] = None
    variations : Tuple[VariationField, ...] = ()
    initial : Optional[InitialState] = None
    velocity_bound : float = math.inf
    source : str = ''


#--------------------
# helpers
#--------------------

_POSITION_RE = re.compile(r'at line (\d+), column (\d+)')


def _syntax_error(exc : tomllib.TOMLDecodeError, source : str) -> ConfigSyntax:
    line = getattr(exc, 'lineno', None)
    column = getattr(exc, 'colno', None)
    if line is None or column is None:
        m = _POSITION_RE.search(str(exc))
        line, column = (int(m.group(1)), int(m.group(2))) if m else (0, 0)
    msg = getattr(exc, 'msg', None) or _POSITION_RE.sub('', str(exc)).rstrip(' ()')
    return ConfigSyntax(f'{source}: {msg}', line, column)


def _table(doc : Mapping[str, Any], name : str,
        required : bool = False) -> Dict[str, Any]:
    value = doc.get(name)
    if value is None:
        if required:
            raise ValidationFailure('required section', f'[{name}]')
        return {}
    if not isinstance(value, dict):
        raise ValidationFailure('section is a table', f'[{name}]')
    return value


class ConfigReader():
    """
    parses one document; where strings name the section and key
    for error messages
    """
    def __init__(self, doc : Mapping[str, Any], source : str) -> None:
        self.doc = doc
        self.source = source
        self.constants : Dict[str, float] = dict(PREDEFINED_CONSTANTS)
        self.dim : int = 0

    def where(self, section : str, key : str) -> str:
        return f'{self.source} [{section}] {key}'

    def names(self, *kinds : str) -> FrozenSet[str]:
        out = set()
        for kind in kinds:
            if kind == 't':
                out.add('t')
            else:
                out.update(coordinate_names(kind, self.dim))
        return frozenset(out)

    def formula(self, text : Any, section : str, key : str,
            allowed : FrozenSet[str]) -> Formula:
        where = self.where(section, key)
        if not isinstance(text, str):
            if isinstance(text, (int, float)) and not isinstance(text, bool):
                return Formula.constant(float(text))
            raise ValidationFailure('expression is a string', where)
        try:
            formula = Formula.parse(text, self.constants)
        except AVError as exc:
            raise ValidationFailure(f'expression parses ({exc})', where) from None
        unbound = sorted(formula.free_variables() - allowed)
        if unbound:
            raise ValidationFailure(f'free variables bound (unbound {", ".join(unbound)})',
                    where)
        return formula

    def number(self, value : Any, section : str, key : str) -> float:
        if isinstance(value, bool):
            raise ValidationFailure('value is a number', self.where(section, key))
        if isinstance(value, (int, float)):
            return float(value)
        formula = self.formula(value, section, key, frozenset())
        return float(formula({}))

    def vector(self, value : Any, section : str, key : str) -> Tuple[float, ...]:
        if not isinstance(value, list) or len(value) != self.dim:
            raise ValidationFailure(f'list of {self.dim} numbers',
                    self.where(section, key))
        return tuple(self.number(v, section, key) for v in value)

    #--------------------
    # sections
    #--------------------

    def read_system(self) -> Tuple[str, str, float]:
        system = _table(self.doc, 'system', required=True)
        dim = system.get('dim')
        if not isinstance(dim, int) or isinstance(dim, bool) or not 1 <= dim <= MAX_DIM:
            raise ValidationFailure(f'dimension between 1 and {MAX_DIM}',
                    self.where('system', 'dim'))
        self.dim = dim
        bound = float(system.get('velocity_bound', math.inf))
        return (str(system.get('name', Path(self.source).stem)),
                str(system.get('description', '')), bound)

    def read_constants(self) -> None:
        for key, value in _table(self.doc, 'constants').items():
            self.constants[key] = self.number(value, 'constants', key)

    def read_atlas(self) -> Atlas:
        atlas = _table(self.doc, 'atlas')
        kind = atlas.get('kind', 'euclidean')
        if kind == 'euclidean':
            return euclidean_atlas(self.dim)
        if kind == 'circle':
            if self.dim != 1:
                raise ValidationFailure('circle atlas has dimension 1',
                        self.where('atlas', 'kind'))
            kwargs : Dict[str, Any] = {}
            for key in ('g01_upper', 'g01_lower', 'g10_upper', 'g10_lower'):
                if key in atlas:
                    # checked against x1 and the constants when parsed by the atlas
                    self.formula(atlas[key], 'atlas', key,
                            self.names('x') | {'two_pi', 'winding'})
                    kwargs[key] = str(atlas[key])
            if 'samples' in atlas:
                kwargs['samples'] = int(atlas['samples'])
            winding = self.number(atlas.get('winding', 0.0), 'atlas', 'winding')
            return circle_atlas(winding, constants=self.constants, **kwargs)
        raise ValidationFailure(f'atlas kind is euclidean or circle (got {kind!r})',
                self.where('atlas', 'kind'))

    def read_lagrangian(self, atlas : Atlas, name : str) -> GaugeClassLagrangian:
        system = _table(self.doc, 'system')
        allowed = self.names('x', 'v')
        reps : Dict[int, Formula] = {}
        for c in atlas.chart_ids:
            key = f'lagrangian_{c}' if f'lagrangian_{c}' in system else 'lagrangian'
            if key not in system:
                raise ValidationFailure('lagrangian given', self.where('system', key))
            reps[c] = self.formula(system[key], 'system', key, allowed)
        return GaugeClassLagrangian.build(atlas, reps, name=name)

    def read_gauge(self, lam : GaugeClassLagrangian) -> Tuple[Formula, ...]:
        chis = _table(self.doc, 'gauge').get('chi', [])
        if isinstance(chis, str):
            chis = [chis]
        out = []
        for k, text in enumerate(chis):
            chi = self.formula(text, 'gauge', f'chi[{k}]', self.names('x'))
            # a gauge function must be a function on M
            gauge_shift(lam, chi)
            out.append(chi)
        return tuple(out)

    def read_forcing(self) -> Optional[Tuple[Formula, ...]]:
        forcing = _table(self.doc, 'forcing')
        if not forcing:
            return None
        allowed = self.names('x', 'v', 't')
        return tuple(self.formula(forcing.get(name, '0'), 'forcing', name, allowed)
                for name in coordinate_names('f', self.dim))

    def read_segment(self, table : Mapping[str, Any], section : str) -> CurveSegment:
        allowed = self.names('t')
        coords = []
        for name in coordinate_names('x', self.dim):
            if name not in table:
                raise ValidationFailure('curve coordinate given', self.where(section, name))
            coords.append(self.formula(table[name], section, name, allowed))
        t0 = self.number(table.get('t0', 0.0), section, 't0')
        t1 = self.number(table.get('t1', 1.0), section, 't1')
        return CurveSegment(int(table.get('chart', 0)), t0, t1, tuple(coords))

    def read_curve(self, atlas : Atlas) -> Optional[CurveSpec]:
        curve = _table(self.doc, 'curve')
        if not curve:
            return None
        if 'segment' in curve:
            segments = tuple(self.read_segment(seg, 'curve.segment')
                    for seg in curve['segment'])
        else:
            segments = (self.read_segment(curve, 'curve'),)
        spec = CurveSpec(segments)
        spec.validate(atlas)
        return spec

    def read_exact(self, atlas : Atlas) -> Optional[AVSection]:
        exact = _table(self.doc, 'exact')
        if not exact:
            return None
        allowed = self.names('x')
        reps = {}
        for c in atlas.chart_ids:
            key = f'phi_{c}' if f'phi_{c}' in exact else 'phi'
            reps[c] = self.formula(exact.get(key), 'exact', key, allowed)
        phi = AVSection(reps)
        phi.validate(atlas)
        return phi

    def read_variations(self) -> Tuple[VariationField, ...]:
        fields = _table(self.doc, 'variation').get('fields', [])
        out = []
        for k, texts in enumerate(fields):
            key = f'fields[{k}]'
            if not isinstance(texts, list) or len(texts) != self.dim:
                raise ValidationFailure(f'list of {self.dim} expressions',
                        self.where('variation', key))
            out.append(VariationField(tuple(
                self.formula(text, 'variation', key, self.names('t'))
                for text in texts)))
        return tuple(out)

    def read_initial(self) -> Optional[InitialState]:
        initial = _table(self.doc, 'initial')
        if not initial:
            return None
        steps = initial.get('steps', 1000)
        if not isinstance(steps, int) or steps < 1:
            raise ValidationFailure('positive step count', self.where('initial', 'steps'))
        return InitialState(
                self.vector(initial.get('x0'), 'initial', 'x0'),
                self.vector(initial.get('v0'), 'initial', 'v0'),
                self.number(initial.get('t0', 0.0), 'initial', 't0'),
                self.number(initial.get('t1', 1.0), 'initial', 't1'),
                steps)

    def read(self) -> SystemConfig:
        name, description, bound = self.read_system()
        self.read_constants()
        atlas = self.read_atlas()
        lam = self.read_lagrangian(atlas, name)
        config = SystemConfig(name=name, description=description,
                dim=self.dim, constants=dict(self.constants),
                atlas=atlas, lagrangian=lam,
                chi=self.read_gauge(lam),
                forcing=self.read_forcing(),
                curve=self.read_curve(atlas),
                exact=self.read_exact(atlas),
                variations=self.read_variations(),
                initial=self.read_initial(),
                velocity_bound=bound,
                source=self.source)
        logger.debug('loaded system %s (dim %d) from %s', name, self.dim, self.source)
        return config


def parse_config(text : str, source : str = '<config>') -> SystemConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise _syntax_error(exc, source) from None
    return ConfigReader(doc, source).read()


def load_config(path : Union[str, Path]) -> SystemConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding='utf-8'), str(path))


# vim: et ai si sts=4
