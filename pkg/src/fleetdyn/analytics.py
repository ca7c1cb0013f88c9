"""Closed-form equilibrium, stability classification and parameter
sensitivities of the competition model.

Setting both rates of change to zero reduces the fixed point to a quadratic
in each fleet; ``discriminant`` is the quadratic discriminant shared by the
two closed forms. Its sign separates a monotone approach to equilibrium
from an oscillatory regime. The twelve analytic gradients of the
asymptotes are paired with an independent central-difference verifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum

from .dynamics import LvmParams
from .errors import DegenerateCaseError, NoFixedPointError, OracleError, ValidationError

__all__ = [
    "Equilibrium",
    "SensitivityVector",
    "StabilityClass",
    "PARAM_NAMES",
    "discriminant",
    "classify_stability",
    "stability_from_discriminant",
    "asymptotic_state",
    "sensitivity_hydrogen",
    "sensitivity_conventional",
    "finite_difference_sensitivity",
    "pseudo_log",
]

# Reporting order for per-parameter quantities.
PARAM_NAMES = ("mu_h", "mu_c", "epsilon", "a", "gamma_h", "gamma_c")


class StabilityClass(Enum):
    MONOTONE_EQUILIBRIUM = "monotone-equilibrium"
    OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class Equilibrium:
    """Asymptotic fleet sizes (Mveh) and the discriminant they derive from."""

    x_inf: float
    y_inf: float
    delta: float

    @property
    def total(self) -> float:
        return self.x_inf + self.y_inf


@dataclass(frozen=True)
class SensitivityVector:
    """Partial derivatives of one asymptote w.r.t. each model parameter."""

    d_mu_h: float
    d_mu_c: float
    d_epsilon: float
    d_a: float
    d_gamma_h: float
    d_gamma_c: float

    def as_dict(self) -> dict[str, float]:
        return {f.name[2:]: getattr(self, f.name) for f in fields(self)}

    def __getitem__(self, param: str) -> float:
        return getattr(self, "d_" + param)


def _delta_terms(p: LvmParams) -> tuple[float, ...]:
    return (
        p.a**2 * p.mu_h**2,
        2.0 * p.a * p.epsilon * p.mu_c * p.mu_h,
        2.0 * p.a * p.gamma_c * p.gamma_h * p.mu_h,
        p.epsilon**2 * p.mu_c**2,
        p.gamma_c**2 * p.gamma_h**2,
        -2.0 * p.epsilon * p.gamma_c * p.gamma_h * p.mu_c,
    )


def discriminant(p: LvmParams) -> float:
    """Discriminant of the fixed-point quadratic.

    delta = a^2 mu_h^2 + 2 a eps mu_c mu_h + 2 a gamma_c gamma_h mu_h
            + eps^2 mu_c^2 + gamma_c^2 gamma_h^2 - 2 eps gamma_c gamma_h mu_c
    """
    return math.fsum(_delta_terms(p))


def stability_from_discriminant(delta: float, scale: float) -> StabilityClass:
    """Classify by the sign of delta; |delta| <= 1e-12*scale is degenerate.

    scale should be the magnitude of the largest discriminant term, so the
    degeneracy test is relative to the size of the cancelled quantities.
    """
    if abs(delta) <= 1e-12 * scale:
        raise DegenerateCaseError(
            f"discriminant {delta} is zero within tolerance; "
            "equilibrium and gradients are singular there"
        )
    return StabilityClass.MONOTONE_EQUILIBRIUM if delta > 0 else StabilityClass.OSCILLATORY


def classify_stability(p: LvmParams) -> StabilityClass:
    """Monotone equilibrium for delta > 0, oscillatory for delta < 0.

    Note that for valid parameters (positive rates, non-negative sources)
    delta = (eps*mu_c - gamma_c*gamma_h)^2 + mu_h*(a^2 mu_h + 2 a eps mu_c
    + 2 a gamma_c gamma_h) is a sum of non-negative terms, so the
    oscillatory class is only reachable outside that domain.
    """
    scale = max(abs(t) for t in _delta_terms(p))
    return stability_from_discriminant(discriminant(p), scale)


def asymptotic_state(p: LvmParams) -> Equilibrium:
    """Closed-form asymptotic fleet sizes for delta > 0.

    x_inf = (a mu_h + eps mu_c + gamma_c gamma_h - sqrt(delta)) / (2 eps gamma_c)
    y_inf = (a mu_h + eps mu_c - gamma_c gamma_h + sqrt(delta)) / (2 a gamma_h)

    Both are evaluated through their conjugate forms where the direct
    subtraction would cancel: with s = a mu_h + eps mu_c and g = gamma_c
    gamma_h, the exact identities (s + g)^2 - delta = 4 g eps mu_c and
    delta - (s - g)^2 = 4 g a mu_h turn the differences into quotients of
    positive sums, so the equilibrium is accurate to rounding even when a
    fleet's asymptote is many orders below the coefficient scale.
    """
    if p.a == 0 or p.epsilon == 0 or p.gamma_c == 0 or p.gamma_h == 0:
        raise DegenerateCaseError(
            "a, epsilon, gamma_c and gamma_h must all be nonzero for the "
            "competition equilibrium; use the growth model for a single fleet"
        )
    delta = discriminant(p)
    if delta <= 0:
        raise NoFixedPointError(
            f"discriminant {delta} <= 0: no monotone equilibrium (oscillatory regime)"
        )
    sq = math.sqrt(delta)
    coupling = p.a * p.mu_h + p.epsilon * p.mu_c
    gg = p.gamma_c * p.gamma_h
    x_inf = 2.0 * p.gamma_h * p.mu_c / (coupling + gg + sq)
    if coupling >= gg:
        y_inf = (coupling - gg + sq) / (2.0 * p.a * p.gamma_h)
    else:
        y_inf = 2.0 * p.gamma_c * p.mu_h / (sq + gg - coupling)
    return Equilibrium(x_inf=x_inf, y_inf=y_inf, delta=delta)


def _sqrt_delta(p: LvmParams) -> float:
    delta = discriminant(p)
    if delta <= 0:
        raise NoFixedPointError(
            f"discriminant {delta} <= 0: gradients undefined without a fixed point"
        )
    return math.sqrt(delta)


def sensitivity_hydrogen(p: LvmParams) -> SensitivityVector:
    """Analytic gradient of the hydrogen asymptote y_inf."""
    sq = _sqrt_delta(p)
    a, eps, gc, gh, mc, mh = p.a, p.epsilon, p.gamma_c, p.gamma_h, p.mu_c, p.mu_h
    gg = gc * gh
    return SensitivityVector(
        d_mu_h=(a * mh + eps * mc + gg + sq) / (2.0 * gh * sq),
        d_mu_c=eps * (a * mh + eps * mc - gg + sq) / (2.0 * a * gh * sq),
        d_epsilon=mc * (a * mh + eps * mc - gg + sq) / (2.0 * a * gh * sq),
        d_a=-(
            a * eps * mc * mh + a * gg * mh + eps**2 * mc**2 - 2.0 * eps * gg * mc
            + gg**2 + (eps * mc - gg) * sq
        ) / (2.0 * a**2 * gh * sq),
        d_gamma_h=-(
            a**2 * mh**2 + 2.0 * a * eps * mc * mh + a * gg * mh
            + eps**2 * mc**2 - eps * gg * mc + (a * mh + eps * mc) * sq
        ) / (2.0 * a * gh**2 * sq),
        d_gamma_c=(a * mh - eps * mc + gg - sq) / (2.0 * a * sq),
    )


def sensitivity_conventional(p: LvmParams) -> SensitivityVector:
    """Analytic gradient of the conventional asymptote x_inf."""
    sq = _sqrt_delta(p)
    a, eps, gc, gh, mc, mh = p.a, p.epsilon, p.gamma_c, p.gamma_h, p.mu_c, p.mu_h
    gg = gc * gh
    return SensitivityVector(
        d_mu_h=a * (-a * mh - eps * mc - gg + sq) / (2.0 * eps * gc * sq),
        d_mu_c=(-a * mh - eps * mc + gg + sq) / (2.0 * gc * sq),
        d_epsilon=(
            a**2 * mh**2 + a * eps * mc * mh + 2.0 * a * gg * mh
            - eps * gg * mc + gg**2 - (a * mh + gg) * sq
        ) / (2.0 * eps**2 * gc * sq),
        d_a=mh * (-a * mh - eps * mc - gg + sq) / (2.0 * eps * gc * sq),
        d_gamma_h=(-a * mh + eps * mc - gg + sq) / (2.0 * eps * sq),
        d_gamma_c=(
            a**2 * mh**2 + 2.0 * a * eps * mc * mh + a * gg * mh
            + eps**2 * mc**2 - eps * gg * mc - (a * mh + eps * mc) * sq
        ) / (2.0 * eps * gc**2 * sq),
    )


def finite_difference_sensitivity(
    p: LvmParams, h_rel: float = 1e-5
) -> tuple[SensitivityVector, SensitivityVector]:
    """Central-difference gradients of the asymptotes, (hydrogen, conventional).

    Each parameter is perturbed by h = h_rel * max(|value|, 1e-8). This is
    the independent verifier for the analytic gradients; it only evaluates
    asymptotic_state, never the closed-form derivatives.
    """
    if not h_rel > 0:
        raise ValidationError(f"h_rel must be positive, got {h_rel}")

    base = {name: getattr(p, name) for name in PARAM_NAMES}
    grads_h = {}
    grads_c = {}
    for name in PARAM_NAMES:
        h = h_rel * max(abs(base[name]), 1e-8)
        try:
            plus = asymptotic_state(LvmParams(**{**base, name: base[name] + h}))
            minus = asymptotic_state(LvmParams(**{**base, name: base[name] - h}))
        except (NoFixedPointError, ValidationError) as exc:
            raise OracleError(
                f"perturbing {name} by {h} leaves the valid monotone regime: {exc}"
            ) from exc
        grads_h["d_" + name] = (plus.y_inf - minus.y_inf) / (2.0 * h)
        grads_c["d_" + name] = (plus.x_inf - minus.x_inf) / (2.0 * h)
    return SensitivityVector(**grads_h), SensitivityVector(**grads_c)


def pseudo_log(g: float) -> float:
    """Signed pseudo-log display transform: sign(g) * log10(1 + |g|).

    Continuous at zero, identity-signed, and compresses large magnitudes
    for bar-chart display. Applied at presentation time only; gradients
    are stored in raw dimensional form.
    """
    return math.copysign(math.log10(1.0 + abs(g)), g)
