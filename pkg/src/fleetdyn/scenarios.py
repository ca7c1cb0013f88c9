"""Named policy scenarios for the UK fleet transition and their metrics.

The three built-in scenarios (low / moderate / aggressive) share the
growth rates calibrated on historical data and differ in the hydrogen
resource inflow and the switching incentive. All start in 2020 from the
calibrated conventional fleet of 28.95 Mveh and no hydrogen fleet, and run
to 2100 at a 0.1-year step.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .dynamics import FleetState, LvmParams, Trajectory, integrate, modified_system
from .errors import ParseError, ValidationError

__all__ = [
    "Metric",
    "ScenarioSpec",
    "TargetCheck",
    "BUILTIN_SCENARIO_NAMES",
    "builtin_scenario",
    "builtin_targets",
    "run_scenario",
    "zev_share",
    "compare_targets",
    "new_hydrogen_vehicles_per_year",
    "write_trajectory_csv",
    "load_trajectory_csv",
]

TRAJECTORY_CSV_HEADER = ("time", "conv", "hydro", "total")

# Shared scenario frame: start year and fleet, horizon, step.
START_YEAR = 2020.0
START_CONVENTIONAL = 28.95
START_HYDROGEN = 0.0
END_YEAR = 2100.0
DEFAULT_DT = 0.1

# Per-scenario (switching rate a = epsilon, hydrogen resources mu_h);
# growth rates 0.01/year and conventional resources 0.65 Mveh/year
# are common to all three.
_BUILTIN = {
    "low": (0.001, 0.05),
    "moderate": (0.005, 0.35),
    "aggressive": (0.01, 0.65),
}

BUILTIN_SCENARIO_NAMES = tuple(_BUILTIN)


class Metric(Enum):
    ZEV_SHARE = "zev_share"


@dataclass(frozen=True)
class ScenarioSpec:
    """A named parameter set with initial state, horizon and step."""

    name: str
    params: LvmParams
    initial: FleetState
    t_end: float
    dt: float

    def __post_init__(self):
        self.initial.require_nonnegative()
        if not self.t_end > self.initial.t:
            raise ValidationError(
                f"t_end ({self.t_end}) must exceed the start year ({self.initial.t})"
            )
        if not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt}")


@dataclass(frozen=True)
class TargetCheck:
    """A published target at one year: filled in by compare_targets."""

    year: float
    metric: Metric
    expected: float
    tolerance: float
    observed: float | None = None
    passed: bool | None = None


def builtin_scenario(name: str) -> ScenarioSpec:
    """One of the built-in policy scenarios: low, moderate or aggressive."""
    key = name.strip().lower()
    if key not in _BUILTIN:
        raise ValidationError(
            f"unknown scenario {name!r}; expected one of {', '.join(_BUILTIN)}"
        )
    switch_rate, mu_h = _BUILTIN[key]
    params = LvmParams(
        gamma_c=0.01,
        gamma_h=0.01,
        a=switch_rate,
        epsilon=switch_rate,
        mu_c=0.65,
        mu_h=mu_h,
    )
    return ScenarioSpec(
        name=key,
        params=params,
        initial=FleetState(START_YEAR, START_CONVENTIONAL, START_HYDROGEN),
        t_end=END_YEAR,
        dt=DEFAULT_DT,
    )


def builtin_targets(name: str) -> list[TargetCheck]:
    """Published 2050 zero-emission-share comparators, where one exists."""
    key = name.strip().lower()
    if key not in _BUILTIN:
        raise ValidationError(f"unknown scenario {name!r}")
    if key == "low":
        return [TargetCheck(year=2050.0, metric=Metric.ZEV_SHARE, expected=0.10, tolerance=0.05)]
    if key == "moderate":
        return [TargetCheck(year=2050.0, metric=Metric.ZEV_SHARE, expected=0.92, tolerance=0.05)]
    return []


def run_scenario(spec: ScenarioSpec) -> Trajectory:
    """Integrate the competition model over the scenario horizon."""
    return integrate(modified_system(spec.params), spec.initial, spec.t_end, spec.dt)


def zev_share(traj: Trajectory, year: float) -> float:
    """Zero-emission share y/(x+y), linearly interpolated at the given year."""
    x, y = traj.sample(year)
    total = x + y
    if total == 0:
        raise ValidationError(f"total fleet is zero at year {year}; share undefined")
    return y / total


def compare_targets(traj: Trajectory, checks: list[TargetCheck]) -> list[TargetCheck]:
    """Fill the observed value and pass flag of each target template."""
    results = []
    for check in checks:
        if check.metric is not Metric.ZEV_SHARE:
            raise ValidationError(f"unsupported metric {check.metric}")
        observed = zev_share(traj, check.year)
        results.append(
            replace(
                check,
                observed=observed,
                passed=abs(observed - check.expected) <= check.tolerance,
            )
        )
    return results


def new_hydrogen_vehicles_per_year(traj: Trajectory, year: float) -> float:
    """Hydrogen fleet growth rate (Mveh/year) by centred difference over one step."""
    dt = traj.step
    if not (traj.t[0] + dt <= year <= traj.t[-1] - dt):
        raise ValidationError(
            f"year {year} must be at least one step inside [{traj.t[0]}, {traj.t[-1]}]"
        )
    _, y_plus = traj.sample(year + dt)
    _, y_minus = traj.sample(year - dt)
    return (y_plus - y_minus) / (2.0 * dt)


def _yearly_times(traj: Trajectory) -> np.ndarray:
    first = int(np.ceil(traj.t[0] - 1e-9))
    last = int(np.floor(traj.t[-1] + 1e-9))
    return np.arange(first, last + 1, dtype=float)


def write_trajectory_csv(traj: Trajectory, path, yearly: bool = True) -> None:
    """Write `time,conv,hydro,total` rows with fixed 6-decimal formatting.

    With yearly=True (the default, matching the published figures) one row
    per integer year is emitted, interpolated on the integration grid;
    otherwise every grid point is written.
    """
    times = _yearly_times(traj) if yearly else traj.t
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(TRAJECTORY_CSV_HEADER) + "\n")
        for t in times:
            x, y = traj.sample(float(t))
            fh.write(f"{t:.6f},{x:.6f},{y:.6f},{x + y:.6f}\n")


def load_trajectory_csv(path) -> Trajectory:
    """Read a trajectory CSV written by write_trajectory_csv."""
    ts, xs, ys = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(f"{path}: empty file")
        if [c.strip().lower() for c in header] != list(TRAJECTORY_CSV_HEADER):
            raise ParseError(f"{path}: line 1: expected header 'time,conv,hydro,total'")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise ParseError(f"{path}: line {lineno}: expected 4 fields, got {len(row)}")
            try:
                ts.append(float(row[0]))
                xs.append(float(row[1]))
                ys.append(float(row[2]))
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    return Trajectory(np.array(ts), np.array(xs), np.array(ys))
