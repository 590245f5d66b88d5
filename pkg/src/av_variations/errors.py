"""
exception classes shared by the av_variations modules

All of them derive from AVError, itself a ValueError, so
callers which only care that an input was unacceptable can
catch ValueError.

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

from typing import Optional


class AVError(ValueError):
    def __init__(self, msg : str) -> None:
        super().__init__(msg)
        self.msg = msg
    def __str__(self):
        return self.msg

#--------------------
# affine arithmetic
#--------------------

class BaseMismatch(AVError):
    """
    two fiber points which should lie over the same point
    of M do not
    """
    pass

class ChartDisjoint(AVError):
    """
    no stored transition connects the charts of two fiber points
    at their base point
    """
    pass

#--------------------
# expressions
#--------------------

class ExpressionError(AVError):
    pass

class ExpressionSyntaxError(ExpressionError):
    def __init__(self, offset : int, expected : str,
            found : Optional[str] = None) -> None:
        self.offset = offset
        self.expected = expected
        self.found = found
        got = 'end of input' if found is None else repr(found)
        msg = f'syntax error at byte {offset}: expected {expected}, found {got}'
        super().__init__(msg)

class UnknownFunction(ExpressionError):
    def __init__(self, name : str, offset : int = -1) -> None:
        self.name = name
        self.offset = offset
        super().__init__(f'unknown function {name!r} at byte {offset}')

class UnboundVariable(ExpressionError):
    def __init__(self, name : str) -> None:
        self.name = name
        super().__init__(f'unbound variable {name!r}')

class DomainError(ExpressionError):
    pass

#--------------------
# charts, curves, dynamics
#--------------------

class ChartScheduleError(AVError):
    pass

class ChartExit(ChartScheduleError):
    """
    a trajectory left every chart which could continue it
    """
    pass

class SingularLagrangian(AVError):
    def __init__(self, condition : float, where : str = '') -> None:
        self.condition = condition
        msg = f'velocity Hessian is numerically singular (condition {condition:.3e})'
        if where:
            msg = f'{msg} at {where}'
        super().__init__(msg)

class ValidationFailure(AVError):
    """
    a sampled invariant (atlas cocycle, overlap compatibility,
    variable binding, ...) does not hold

    invariant names the condition, where says at which chart pair
    or sample it failed, and defect is the size of the violation
    (nan when the failure is not numerical)
    """
    def __init__(self, invariant : str, where : str,
            defect : float = float('nan')) -> None:
        self.invariant = invariant
        self.where = where
        self.defect = defect
        msg = f'{invariant} violated at {where}'
        if defect == defect:
            msg = f'{msg} (defect {defect:.6g})'
        super().__init__(msg)

class UnknownSystem(AVError):
    def __init__(self, name : str) -> None:
        self.name = name
        super().__init__(f'no system file or bundled system named {name!r}')

class ConfigSyntax(AVError):
    def __init__(self, msg : str, line : int = 0,
            column : int = 0) -> None:
        self.line = line
        self.column = column
        super().__init__(f'{msg} (line {line}, column {column})')


# vim: et ai si sts=4
