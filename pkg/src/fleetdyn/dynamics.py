"""Fleet dynamics: first-order growth model, classical and modified
predator-prey systems, and a fixed-step RK4 integrator.

All fleet sizes are carried in Mveh (millions of vehicles) and all times in
calendar years. Every function here is pure; the parameter and state types
are immutable value types, so concurrent use needs no coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import IntegrationError, ValidationError

__all__ = [
    "GrowthParams",
    "ClassicalLvmParams",
    "LvmParams",
    "FleetState",
    "Trajectory",
    "rhs_growth",
    "rhs_classical",
    "rhs_modified",
    "growth_system",
    "classical_system",
    "modified_system",
    "rk4_step",
    "integrate",
    "growth_closed_form",
    "lv_conserved_quantity",
]

# dx/dt and dy/dt as a function of the current state
RhsFunc = Callable[["FleetState"], tuple[float, float]]

# Relative tolerance for the uniform-step check on trajectories.
_STEP_RTOL = 1e-12


@dataclass(frozen=True)
class GrowthParams:
    """First-order growth model coefficients: dn/dt = -gamma*n + mu.

    gamma : decay-to-equilibrium rate, 1/year (strictly positive)
    mu    : resource inflow, Mveh/year (the fleet the supply chain can
            sustain each year); the long-time fleet is mu/gamma
    """

    gamma: float
    mu: float

    def __post_init__(self):
        if not (self.gamma > 0) or not math.isfinite(self.gamma):
            raise ValidationError(f"gamma must be strictly positive, got {self.gamma}")
        if not (self.mu >= 0) or not math.isfinite(self.mu):
            raise ValidationError(f"mu must be non-negative, got {self.mu}")

    @property
    def equilibrium(self) -> float:
        """Fleet size ultimately supported by the resources, mu/gamma."""
        return self.mu / self.gamma


@dataclass(frozen=True)
class ClassicalLvmParams:
    """Classical predator-prey coefficients (all strictly positive).

    gamma_c : prey growth rate, 1/year
    gamma_h : predator decay rate, 1/year
    a       : attack rate, 1/(year*Mveh)
    epsilon : conversion efficiency, 1/(year*Mveh)
    """

    gamma_c: float
    gamma_h: float
    a: float
    epsilon: float

    def __post_init__(self):
        for name in ("gamma_c", "gamma_h", "a", "epsilon"):
            v = getattr(self, name)
            if not (v > 0) or not math.isfinite(v):
                raise ValidationError(f"{name} must be strictly positive, got {v}")


@dataclass(frozen=True)
class LvmParams:
    """Competition model coefficients with supply-chain source terms.

    The four rate coefficients follow ClassicalLvmParams; mu_c and mu_h are
    the resource inflows (Mveh/year) for the conventional and hydrogen
    fleets. With a == epsilon, vehicles only transition between fleets and
    the total fleet follows the first-order growth model.
    """

    gamma_c: float
    gamma_h: float
    a: float
    epsilon: float
    mu_c: float
    mu_h: float

    def __post_init__(self):
        for name in ("gamma_c", "gamma_h", "a", "epsilon"):
            v = getattr(self, name)
            if not (v > 0) or not math.isfinite(v):
                raise ValidationError(f"{name} must be strictly positive, got {v}")
        for name in ("mu_c", "mu_h"):
            v = getattr(self, name)
            if not (v >= 0) or not math.isfinite(v):
                raise ValidationError(f"{name} must be non-negative, got {v}")


@dataclass(frozen=True)
class FleetState:
    """Fleet sizes at one instant: t in years, x conventional, y hydrogen (Mveh).

    Physically meaningful states have x >= 0 and y >= 0; this is enforced
    where states enter as user input (require_nonnegative) but not on
    integrator output, so that parameter regimes driving a fleet negative
    are surfaced in the trajectory rather than masked.
    """

    t: float
    x: float
    y: float

    def __post_init__(self):
        for name in ("t", "x", "y"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"FleetState.{name} must be finite")

    @property
    def total(self) -> float:
        return self.x + self.y

    def require_nonnegative(self) -> "FleetState":
        if self.x < 0 or self.y < 0:
            raise ValidationError(f"fleet sizes must be non-negative, got ({self.x}, {self.y})")
        return self


@dataclass(frozen=True)
class Trajectory:
    """Time series of fleet states on a uniform grid.

    Times are strictly increasing with a constant step; the final step may
    be shorter when the integration horizon is not a whole number of steps.
    Arrays are read-only.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if not (t.ndim == x.ndim == y.ndim == 1) or not (len(t) == len(x) == len(y)):
            raise ValidationError("t, x, y must be 1-d arrays of equal length")
        if len(t) < 2:
            raise ValidationError("a trajectory needs at least two samples")
        steps = np.diff(t)
        if np.any(steps <= 0):
            raise ValidationError("times must be strictly increasing")
        # Uniform grid, except the final step may be shortened. The
        # tolerance accounts for the rounding of the absolute times, which
        # dominates 1e-12*h once |t| is large.
        h = steps[0]
        tol = max(_STEP_RTOL * abs(h), 8.0 * np.finfo(float).eps * float(np.abs(t).max()))
        interior = steps[:-1] if len(steps) > 1 else steps
        if np.any(np.abs(interior - h) > tol):
            raise ValidationError("step size must be uniform")
        if steps[-1] > h + tol:
            raise ValidationError("final step may only be shorter than the others")
        for arr in (t, x, y):
            arr.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self) -> Iterator[FleetState]:
        for i in range(len(self.t)):
            yield FleetState(float(self.t[i]), float(self.x[i]), float(self.y[i]))

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def initial(self) -> FleetState:
        return FleetState(float(self.t[0]), float(self.x[0]), float(self.y[0]))

    @property
    def final(self) -> FleetState:
        return FleetState(float(self.t[-1]), float(self.x[-1]), float(self.y[-1]))

    @property
    def total(self) -> np.ndarray:
        return self.x + self.y

    def covers(self, t: float) -> bool:
        return self.t[0] <= t <= self.t[-1]

    def sample(self, t: float) -> tuple[float, float]:
        """Linearly interpolated (x, y) at time t; t must be in range."""
        if not self.covers(t):
            raise ValidationError(
                f"time {t} outside trajectory range [{self.t[0]}, {self.t[-1]}]"
            )
        return float(np.interp(t, self.t, self.x)), float(np.interp(t, self.t, self.y))


def rhs_growth(n: float, p: GrowthParams) -> float:
    """Growth-model rate of change: -gamma*n + mu (Mveh/year)."""
    return -p.gamma * n + p.mu


def rhs_classical(s: FleetState, p: ClassicalLvmParams) -> tuple[float, float]:
    """Classical predator-prey rates: dx = x(gamma_c - a*y), dy = y(epsilon*x - gamma_h)."""
    return s.x * (p.gamma_c - p.a * s.y), s.y * (p.epsilon * s.x - p.gamma_h)


def rhs_modified(s: FleetState, p: LvmParams) -> tuple[float, float]:
    """Source-fed competition rates: dx = x(-gamma_c - a*y) + mu_c, dy = y(epsilon*x - gamma_h) + mu_h."""
    return (
        s.x * (-p.gamma_c - p.a * s.y) + p.mu_c,
        s.y * (p.epsilon * s.x - p.gamma_h) + p.mu_h,
    )


def growth_system(p: GrowthParams) -> RhsFunc:
    """Growth model embedded on the x component (y stays constant)."""
    return lambda s: (rhs_growth(s.x, p), 0.0)


def classical_system(p: ClassicalLvmParams) -> RhsFunc:
    return lambda s: rhs_classical(s, p)


def modified_system(p: LvmParams) -> RhsFunc:
    return lambda s: rhs_modified(s, p)


def rk4_step(rhs: RhsFunc, s: FleetState, dt: float) -> FleetState:
    """One classical fourth-order Runge-Kutta step of size dt.

    Negative components are not clamped; non-negativity is a post-hoc
    trajectory check so that blow-up regimes stay visible.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    t, x, y = s.t, s.x, s.y
    k1x, k1y = rhs(s)
    k2x, k2y = rhs(FleetState(t + 0.5 * dt, x + 0.5 * dt * k1x, y + 0.5 * dt * k1y))
    k3x, k3y = rhs(FleetState(t + 0.5 * dt, x + 0.5 * dt * k2x, y + 0.5 * dt * k2y))
    k4x, k4y = rhs(FleetState(t + dt, x + dt * k3x, y + dt * k3y))
    return FleetState(
        t + dt,
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )


def integrate(rhs: RhsFunc, s0: FleetState, t_end: float, dt: float) -> Trajectory:
    """Integrate from s0.t to t_end inclusive on a uniform grid of step dt.

    The final step is shortened when (t_end - s0.t) is not a whole number
    of steps. Raises IntegrationError if the state stops being finite.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    if not t_end > s0.t:
        raise ValidationError(f"t_end ({t_end}) must exceed the initial time ({s0.t})")

    span = t_end - s0.t
    n_full = int(math.floor(span / dt + _STEP_RTOL))
    remainder = span - n_full * dt
    if remainder <= _STEP_RTOL * dt:
        remainder = 0.0
        n_full = max(n_full, 1)

    ts = [s0.t]
    xs = [s0.x]
    ys = [s0.y]
    s = s0
    for i in range(n_full):
        try:
            s = rk4_step(rhs, s, dt)
        except ValidationError as exc:  # non-finite state rejected by FleetState
            raise IntegrationError(
                f"state became non-finite near t={s.t + dt}: {exc}"
            ) from exc
        # Regenerate t from the grid to avoid accumulation drift.
        s = FleetState(s0.t + (i + 1) * dt, s.x, s.y)
        ts.append(s.t)
        xs.append(s.x)
        ys.append(s.y)
    if remainder > 0.0:
        try:
            s = rk4_step(rhs, s, remainder)
        except ValidationError as exc:
            raise IntegrationError(f"state became non-finite near t={t_end}: {exc}") from exc
        ts.append(t_end)
        xs.append(s.x)
        ys.append(s.y)
    else:
        ts[-1] = t_end

    return Trajectory(np.array(ts), np.array(xs), np.array(ys))


def growth_closed_form(p: GrowthParams, n0: float, t: float) -> float:
    """Exact growth-model solution after t elapsed years from n0.

    n(t) = mu/gamma + (n0 - mu/gamma) * exp(-gamma * t), evaluated as the
    cancellation-free mix n0 * exp(-gamma t) + (mu/gamma) * (1 - exp(-gamma t)).
    """
    if t < 0:
        raise ValidationError(f"elapsed time must be non-negative, got {t}")
    decay = math.exp(-p.gamma * t)
    return n0 * decay + (p.mu / p.gamma) * (-math.expm1(-p.gamma * t))


def lv_conserved_quantity(s: FleetState, p: ClassicalLvmParams) -> float:
    """First integral of the classical system, constant along exact orbits.

    V = epsilon*x - gamma_h*ln(x) + a*y - gamma_c*ln(y), defined on the
    open positive quadrant. Used to validate the integrator: RK4 drift of
    V measures the numerical error over an orbit.
    """
    if s.x <= 0 or s.y <= 0:
        raise ValidationError(f"conserved quantity needs x > 0 and y > 0, got ({s.x}, {s.y})")
    return p.epsilon * s.x - p.gamma_h * math.log(s.x) + p.a * s.y - p.gamma_c * math.log(s.y)
