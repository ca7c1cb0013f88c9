"""Historical-data ingestion and growth-model calibration.

The fit minimises the sum of squared residuals between the growth-model
closed form and the data over (gamma, mu, n0) with a damped Gauss-Newton
iteration (Levenberg-Marquardt style multiplicative damping). It is fully
deterministic: fixed initialisation, fixed damping schedule, fixed
stopping rule.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .dynamics import GrowthParams, Trajectory, growth_closed_form
from .errors import FitError, ParseError, ValidationError

__all__ = [
    "FleetSeries",
    "FuelMassModel",
    "FitResult",
    "derive_growth_params",
    "pointwise_error",
    "mean_error",
    "fit_growth",
    "load_fleet_csv",
    "bundled_uk_fleet_series",
]

FLEET_CSV_HEADER = ("year", "fleet_mveh")

_MAX_ITER = 200
_REL_TOL = 1e-10
# Residual norm below this counts as an exact fit (noise-free data).
_NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class FleetSeries:
    """Historical fleet sizes: strictly increasing integer years, fleet in Mveh."""

    years: np.ndarray
    fleet: np.ndarray

    def __post_init__(self):
        years = np.asarray(self.years, dtype=int)
        fleet = np.asarray(self.fleet, dtype=float)
        if years.ndim != 1 or fleet.ndim != 1 or len(years) != len(fleet):
            raise ValidationError("years and fleet must be 1-d arrays of equal length")
        if len(years) == 0:
            raise ValidationError("series must not be empty")
        if np.any(np.diff(years) <= 0):
            raise ValidationError("years must be strictly increasing")
        if np.any(fleet <= 0) or not np.all(np.isfinite(fleet)):
            raise ValidationError("fleet values must be positive and finite")
        years.setflags(write=False)
        fleet.setflags(write=False)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "fleet", fleet)

    def __len__(self) -> int:
        return len(self.years)


@dataclass(frozen=True)
class FuelMassModel:
    """Fuel mass balance for one fleet, all in kg and kg/year.

    m_dot     : total fuel mass consumed per year by the fleet
    m_i       : fuel mass per vehicle (tank basis)
    m_i_dot   : fuel mass consumed per vehicle per year
    m_w_dot   : wasted mass rate; the model assumes zero waste
    """

    m_dot: float
    m_i: float
    m_i_dot: float
    m_w_dot: float = 0.0

    def __post_init__(self):
        for name in ("m_dot", "m_i", "m_i_dot", "m_w_dot"):
            v = getattr(self, name)
            if not (v >= 0) or not math.isfinite(v):
                raise ValidationError(f"{name} must be non-negative, got {v}")
        if self.m_w_dot != 0.0:
            raise ValidationError("the model assumes zero wasted mass (m_w_dot = 0)")

    @property
    def m_t_dot(self) -> float:
        """Total mass rate including waste; equals m_dot with zero waste."""
        return self.m_dot + self.m_w_dot


@dataclass(frozen=True)
class FitResult:
    """Fitted growth parameters with the residual statistics of the fit.

    n0 is the fitted fleet size at anchor_year (the earliest data year);
    mean_error/std_error are the mean and population standard deviation of
    the point-wise relative errors |data - model| / data at the data years.
    """

    params: GrowthParams
    n0: float
    anchor_year: float
    mean_error: float
    std_error: float
    n_iterations: int
    ssr: float


def derive_growth_params(f: FuelMassModel) -> GrowthParams:
    """Map fuel quantities to growth coefficients.

    gamma = m_i_dot / m_i (1/year); mu = m_dot / m_i vehicles/year,
    converted to Mveh/year. Scaling all masses by a common factor leaves
    both outputs unchanged.
    """
    if f.m_i == 0:
        raise ValidationError("m_i must be positive to derive growth parameters")
    gamma = f.m_i_dot / f.m_i
    mu = f.m_dot / f.m_i / 1e6  # vehicles/year -> Mveh/year
    return GrowthParams(gamma=gamma, mu=mu)


def pointwise_error(x_data: float, x_model: float) -> float:
    """Relative point-wise error |(x_data - x_model) / x_data|."""
    if x_data == 0:
        raise ValidationError("point-wise error is undefined for a zero data value")
    return abs((x_data - x_model) / x_data)


def mean_error(data: FleetSeries, model: Trajectory) -> tuple[float, float]:
    """Mean and population std of point-wise errors at the data years.

    The model total fleet is linearly interpolated in time; every data
    year must fall inside the trajectory range.
    """
    errors = []
    for year, value in zip(data.years, data.fleet):
        x, y = model.sample(float(year))
        errors.append(pointwise_error(float(value), x + y))
    errors = np.array(errors)
    return float(errors.mean()), float(errors.std())


def _model_and_jacobian(theta, t):
    """Closed-form model values and Jacobian columns d/d(gamma, mu, n0)."""
    gamma, mu, n0 = theta
    e = np.exp(-gamma * t)
    n_inf = mu / gamma
    model = n_inf + (n0 - n_inf) * e
    d_gamma = (mu / gamma**2) * (e - 1.0) - t * (n0 - n_inf) * e
    d_mu = (1.0 - e) / gamma
    d_n0 = e
    return model, np.column_stack([d_gamma, d_mu, d_n0])


def fit_growth(data: FleetSeries) -> FitResult:
    """Least-squares fit of (gamma, mu, n0) to a fleet series.

    Deterministic damped Gauss-Newton: start from gamma = 1/span,
    mu = gamma * last value, n0 = first value; damping is multiplied by 10
    on a rejected step and divided by 10 on an accepted one; stop when the
    relative residual-norm decrease falls below 1e-10 (or the residual is
    exactly fitted), failing after 200 iterations.
    """
    if len(data) < 3:
        raise ValidationError("fit needs at least 3 data points")

    t = (data.years - data.years[0]).astype(float)
    f = data.fleet
    span = float(t[-1])

    gamma = 1.0 / span
    mu = gamma * float(f[-1])
    n0 = float(f[0])
    theta = np.array([gamma, mu, n0])

    model, _ = _model_and_jacobian(theta, t)
    r = model - f
    norm = float(np.sqrt(r @ r))
    lam = 1e-3

    def result(theta, norm, it):
        params = GrowthParams(gamma=float(theta[0]), mu=float(theta[1]))
        fitted = np.array(
            [growth_closed_form(params, float(theta[2]), ti) for ti in t]
        )
        errs = np.abs((f - fitted) / f)
        return FitResult(
            params=params,
            n0=float(theta[2]),
            anchor_year=float(data.years[0]),
            mean_error=float(errs.mean()),
            std_error=float(errs.std()),
            n_iterations=it,
            ssr=norm**2,
        )

    for it in range(1, _MAX_ITER + 1):
        model, jac = _model_and_jacobian(theta, t)
        jtj = jac.T @ jac
        grad = jac.T @ r
        try:
            step = np.linalg.solve(jtj + lam * np.diag(np.diag(jtj)), -grad)
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        candidate = theta + step
        # gamma must stay positive and mu non-negative (GrowthParams domain).
        if candidate[0] <= 0 or candidate[1] < 0:
            lam *= 10.0
            continue
        model2, _ = _model_and_jacobian(candidate, t)
        r2 = model2 - f
        norm2 = float(np.sqrt(r2 @ r2))
        if norm2 < norm:
            improvement = (norm - norm2) / norm
            theta, r, norm = candidate, r2, norm2
            lam = max(lam * 0.1, 1e-14)
            if improvement < _REL_TOL or norm < _NORM_FLOOR:
                return result(theta, norm, it)
        else:
            lam *= 10.0
            if lam > 1e15:
                # Damping saturated: no step improves the residual anymore.
                return result(theta, norm, it)

    raise FitError(
        f"fit did not converge within {_MAX_ITER} iterations",
        best=result(theta, norm, _MAX_ITER),
    )


def load_fleet_csv(path) -> FleetSeries:
    """Read a `year,fleet_mveh` CSV into a validated FleetSeries."""
    years = []
    fleet = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(f"{path}: empty file")
        if [c.strip().lower() for c in header] != list(FLEET_CSV_HEADER):
            raise ParseError(
                f"{path}: line 1: expected header 'year,fleet_mveh', got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # ignore blank lines
            if len(row) != 2:
                raise ParseError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
            try:
                year = int(row[0])
                value = float(row[1])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
            years.append(year)
            fleet.append(value)
    if not years:
        raise ParseError(f"{path}: no data rows")
    return FleetSeries(np.array(years), np.array(fleet))


def bundled_uk_fleet_series() -> FleetSeries:
    """The packaged UK car-fleet series (RAC Foundation data, 1971-2016)."""
    ref = resources.files("fleetdyn.data").joinpath("uk_fleet_rac.csv")
    with resources.as_file(ref) as path:
        return load_fleet_csv(path)
