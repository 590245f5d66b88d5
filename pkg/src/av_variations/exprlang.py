"""
parse and evaluate the scalar expressions used for Lagrangians,
gauge functions, transition functions, curves and variation fields

Grammar (lowest to highest precedence):

    expr    := term (('+' | '-') term)*          left-associative
    term    := unary (('*' | '/') unary)*        left-associative
    unary   := '-' unary | power
    power   := primary ('^' unary)?              right-associative
    primary := NUMBER | NAME | NAME '(' args ')' | '(' expr ')'

so '^' binds tightest, '-x1^2' is -(x1^2) and '2^3^2' is 2^(3^2).
Builtins are sin, cos, tan, exp, log, sqrt, abs (unary) and
pow (binary).

Evaluation is generic over the scalar type: plain floats,
autodiff.Hyperdual and autodiff.Dual all work, because the
builtins dispatch on the type of their argument.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

import math
import re

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import (
        Any, Callable, Dict, FrozenSet, Iterator,
        List, Mapping, NamedTuple, Optional, Sequence, Tuple,
        )

from . import autodiff
from .errors import (
        ExpressionSyntaxError, UnknownFunction, UnboundVariable,
        )

# values may be floats, Hyperduals or Duals
Env = Mapping[str, autodiff.Scalar]

BUILTINS : Dict[str, Tuple[int, Callable[..., Any]]] = {
        'sin': (1, autodiff.sin),
        'cos': (1, autodiff.cos),
        'tan': (1, autodiff.tan),
        'exp': (1, autodiff.exp),
        'log': (1, autodiff.log),
        'sqrt': (1, autodiff.sqrt),
        'abs': (1, autodiff.absolute),
        'pow': (2, autodiff.power),
        }

BINARY_OPS : Dict[str, Callable[[Any, Any], Any]] = {
        '+': lambda a, b: a + b,
        '-': lambda a, b: a - b,
        '*': lambda a, b: a * b,
        '/': autodiff.divide,
        '^': autodiff.power,
        }


#--------------------
# syntax tree
#--------------------

class ExprAst(ABC):
    @abstractmethod
    def evaluate(self, env : Env) -> Any:
        pass
    @abstractmethod
    def to_text(self) -> str:
        """
        canonical, fully parenthesized source text
        """
        pass
    @abstractmethod
    def variables(self) -> Iterator[str]:
        pass

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Number(ExprAst):
    value : float
    def evaluate(self, env : Env) -> Any:
        return self.value
    def to_text(self) -> str:
        return repr(float(self.value))
    def variables(self) -> Iterator[str]:
        return iter(())


@dataclass(frozen=True)
class Var(ExprAst):
    name : str
    def evaluate(self, env : Env) -> Any:
        try:
            return env[self.name]
        except KeyError:
            raise UnboundVariable(self.name) from None
    def to_text(self) -> str:
        return self.name
    def variables(self) -> Iterator[str]:
        yield self.name


@dataclass(frozen=True)
class Unary(ExprAst):
    op : str
    child : ExprAst
    def evaluate(self, env : Env) -> Any:
        return -self.child.evaluate(env)
    def to_text(self) -> str:
        return f'(-{self.child.to_text()})'
    def variables(self) -> Iterator[str]:
        return self.child.variables()


@dataclass(frozen=True)
class Binary(ExprAst):
    op : str
    left : ExprAst
    right : ExprAst
    def evaluate(self, env : Env) -> Any:
        lhs = self.left.evaluate(env)
        rhs = self.right.evaluate(env)
        return BINARY_OPS[self.op](lhs, rhs)
    def to_text(self) -> str:
        return f'({self.left.to_text()}{self.op}{self.right.to_text()})'
    def variables(self) -> Iterator[str]:
        yield from self.left.variables()
        yield from self.right.variables()


@dataclass(frozen=True)
class Call(ExprAst):
    name : str
    args : Tuple[ExprAst, ...]
    def evaluate(self, env : Env) -> Any:
        values = [arg.evaluate(env) for arg in self.args]
        return BUILTINS[self.name][1](*values)
    def to_text(self) -> str:
        inner = ', '.join(arg.to_text() for arg in self.args)
        return f'{self.name}({inner})'
    def variables(self) -> Iterator[str]:
        for arg in self.args:
            yield from arg.variables()


#--------------------
# tokenizer
#--------------------

TOKEN_RE = re.compile(r'''
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
''', re.VERBOSE)

class Token(NamedTuple):
    kind : str     # 'number', 'name', 'op' or 'end'
    text : str
    offset : int   # byte offset into the UTF-8 source


def tokenize(src : str) -> List[Token]:
    tokens : List[Token] = []
    pos : int = 0
    byte_offset : int = 0
    while pos < len(src):
        m = TOKEN_RE.match(src, pos)
        if m is None:
            raise ExpressionSyntaxError(byte_offset,
                    'a number, name, operator or parenthesis',
                    found=src[pos])
        kind = m.lastgroup or ''
        if kind != 'ws':
            tokens.append(Token(kind, m.group(), byte_offset))
        byte_offset += len(m.group().encode('utf-8'))
        pos = m.end()
    tokens.append(Token('end', '', byte_offset))
    return tokens


#--------------------
# parser
#--------------------

class Parser():
    """
    recursive descent over the token list, one method per
    grammar rule
    """
    def __init__(self, src : str) -> None:
        self.src = src
        self.tokens : List[Token] = tokenize(src)
        self.ix : int = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.ix]

    def advance(self) -> Token:
        tok = self.tokens[self.ix]
        if tok.kind != 'end':
            self.ix += 1
        return tok

    def at_op(self, ops : str) -> bool:
        tok = self.current
        return tok.kind == 'op' and tok.text in ops

    def fail(self, expected : str) -> ExpressionSyntaxError:
        tok = self.current
        found = None if tok.kind == 'end' else tok.text
        return ExpressionSyntaxError(tok.offset, expected, found=found)

    def expect_op(self, op : str) -> Token:
        if not self.at_op(op):
            raise self.fail(repr(op))
        return self.advance()

    def parse(self) -> ExprAst:
        tree = self.expr()
        if self.current.kind != 'end':
            raise self.fail('an operator or end of input')
        return tree

    def expr(self) -> ExprAst:
        left = self.term()
        while self.at_op('+-'):
            op = self.advance().text
            left = Binary(op, left, self.term())
        return left

    def term(self) -> ExprAst:
        left = self.unary()
        while self.at_op('*/'):
            op = self.advance().text
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> ExprAst:
        if self.at_op('-'):
            self.advance()
            return Unary('-', self.unary())
        return self.power()

    def power(self) -> ExprAst:
        base = self.primary()
        if self.at_op('^'):
            self.advance()
            # the exponent may itself be negated or raised: 2^-1, 2^3^2
            return Binary('^', base, self.unary())
        return base

    def primary(self) -> ExprAst:
        tok = self.current
        if tok.kind == 'number':
            value = float(tok.text)
            if not math.isfinite(value):
                raise self.fail('a finite number')
            self.advance()
            return Number(value)
        if tok.kind == 'name':
            self.advance()
            if self.at_op('('):
                return self.call(tok)
            return Var(tok.text)
        if self.at_op('('):
            self.advance()
            inner = self.expr()
            self.expect_op(')')
            return inner
        raise self.fail('a number, name or \'(\'')

    def call(self, name_tok : Token) -> ExprAst:
        name = name_tok.text
        if name not in BUILTINS:
            raise UnknownFunction(name, name_tok.offset)
        self.expect_op('(')
        args : List[ExprAst] = [self.expr()]
        while self.at_op(','):
            self.advance()
            args.append(self.expr())
        close = self.current
        self.expect_op(')')
        arity = BUILTINS[name][0]
        if len(args) != arity:
            plural = '' if arity == 1 else 's'
            raise ExpressionSyntaxError(close.offset,
                    f'{arity} argument{plural} for {name}',
                    found=f'{len(args)} arguments')
        return Call(name, tuple(args))


def parse(src : str) -> ExprAst:
    return Parser(src).parse()

def evaluate(ast : ExprAst, env : Env) -> Any:
    return ast.evaluate(env)

def free_variables(ast : ExprAst) -> FrozenSet[str]:
    return frozenset(ast.variables())

def to_text(ast : ExprAst) -> str:
    return ast.to_text()


#--------------------
# expressions bound to named constants
#--------------------

def coordinate_names(prefix : str, n : int) -> List[str]:
    return [f'{prefix}{i + 1}' for i in range(n)]

def coordinate_env(x : Sequence[Any], v : Optional[Sequence[Any]] = None,
        t : Optional[Any] = None) -> Dict[str, Any]:
    """
    environment binding x1..xn (and v1..vn, t when given)
    """
    env : Dict[str, Any] = {f'x{i + 1}': xi for i, xi in enumerate(x)}
    if v is not None:
        env.update({f'v{i + 1}': vi for i, vi in enumerate(v)})
    if t is not None:
        env['t'] = t
    return env


@dataclass(frozen=True)
class Formula:
    """
    an expression together with the named constants it may use

    Constants stay bound variables rather than being folded
    into the tree, so one parsed Formula can be re-bound for
    a parameter sweep with with_constants().
    """
    ast : ExprAst
    constants : Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def parse(cls, src : str,
            constants : Optional[Mapping[str, float]] = None) -> "Formula":
        return cls(parse(src), dict(constants or {}))

    @classmethod
    def constant(cls, value : float) -> "Formula":
        return cls(Number(float(value)))

    @property
    def source(self) -> str:
        return self.ast.to_text()

    def free_variables(self) -> FrozenSet[str]:
        return free_variables(self.ast) - frozenset(self.constants)

    def with_constants(self, constants : Mapping[str, float]) -> "Formula":
        return Formula(self.ast, dict(constants))

    def __call__(self, env : Env) -> Any:
        if not self.constants:
            return self.ast.evaluate(env)
        return self.ast.evaluate({**self.constants, **env})

    def at(self, x : Sequence[Any], v : Optional[Sequence[Any]] = None,
            t : Optional[Any] = None) -> Any:
        return self(coordinate_env(x, v, t))


# vim: et ai si sts=4
