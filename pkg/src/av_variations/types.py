"""
value types shared between modules: the Trajectory produced by
dynamics and consumed by action and the cli, and TypedDict
records for CSV rows and invariant-suite reports

Copyright (c) 2024-present David C. Fox (talk2dfox@gmail.com)
"""

from dataclasses import dataclass
from typing import (
        Dict, List, Tuple,
        TypedDict, NotRequired,
        )

import numpy as np


class DefectReport(TypedDict):
    name : str
    defect : float
    tolerance : float
    passed : bool
    detail : NotRequired[str]


def defect_report(name : str, defect : float, tolerance : float,
        detail : str = '') -> DefectReport:
    # nan never passes
    report = DefectReport(name=name, defect=float(defect),
            tolerance=float(tolerance),
            passed=bool(defect <= tolerance))
    if detail:
        report['detail'] = detail
    return report


TrajectoryRow = Dict[str, float]


@dataclass(frozen=True)
class Trajectory:
    """
    discrete solution curve: times[k], positions[k], velocities[k],
    with positions and velocities written in the chart
    charts[k]

    chart_schedule lists (index of first sample, chart) pairs
    """
    times : np.ndarray
    positions : np.ndarray
    velocities : np.ndarray
    charts : Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.times) < 1:
            raise ValueError('trajectory needs at least one sample')
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError('trajectory times must be strictly increasing')
        if not (np.all(np.isfinite(self.positions))
                and np.all(np.isfinite(self.velocities))):
            raise ValueError('trajectory states must be finite')

    @property
    def dim(self) -> int:
        return int(self.positions.shape[1])

    def __len__(self) -> int:
        return len(self.times)

    @property
    def chart_schedule(self) -> List[Tuple[int, int]]:
        schedule : List[Tuple[int, int]] = []
        for k, chart in enumerate(self.charts):
            if not schedule or schedule[-1][1] != chart:
                schedule.append((k, chart))
        return schedule

    def rows(self) -> List[TrajectoryRow]:
        n = self.dim
        header = ['t'] + [f'x{i + 1}' for i in range(n)] + [f'v{i + 1}' for i in range(n)]
        out : List[TrajectoryRow] = []
        for t, x, v in zip(self.times, self.positions, self.velocities):
            values = [float(t)] + [float(xi) for xi in x] + [float(vi) for vi in v]
            out.append(dict(zip(header, values)))
        return out


# vim: et ai si sts=4
