"""Preference models and option valuation for the three choice domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .options import AttributeVector, Lottery, Option, PayoffFlow

__all__ = [
    "UtilityModel",
    "LinearAttributes",
    "CrraSymmetric",
    "PowerLossAverse",
    "ExponentialDiscount",
    "QuasiHyperbolic",
    "GeneralizedHyperbolic",
    "DiscountFunction",
    "INFINITE_DELAY",
    "bernoulli_utility",
    "value",
]


class UtilityModel:
    """Marker base class for preference parameterizations."""


@dataclass(frozen=True)
class LinearAttributes(UtilityModel):
    """Linear utility over attribute levels; one nonzero weight per attribute."""

    weights: tuple[float, ...]

    def __init__(self, weights):
        w = tuple(float(b) for b in weights)
        if len(w) < 2:
            raise ValueError("need at least two attribute weights")
        if any(b == 0 or not np.isfinite(b) for b in w):
            raise ValueError("attribute weights must be finite and nonzero")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class CrraSymmetric(UtilityModel):
    """Sign-symmetric power utility u(w) = sgn(w)|w|^alpha; alpha=1 is linear."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class PowerLossAverse(UtilityModel):
    """Power utility with loss aversion: w^alpha for gains, -lam*(-w)^beta for losses."""

    alpha: float
    beta: float
    lam: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.lam > 0):
            raise ValueError("alpha, beta, lam must be positive")


@dataclass(frozen=True)
class ExponentialDiscount(UtilityModel):
    """Constant per-period discounting; delays in days are scaled by period_days."""

    delta: float
    period_days: float = 30.0

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not self.period_days > 0:
            raise ValueError("period_days must be positive")


@dataclass(frozen=True)
class QuasiHyperbolic(UtilityModel):
    """Beta-delta discounting: weight 1 now, present_bias * delta^t later."""

    present_bias: float
    delta: float
    period_days: float = 30.0

    def __post_init__(self):
        if not self.present_bias > 0:
            raise ValueError("present_bias must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not self.period_days > 0:
            raise ValueError("period_days must be positive")


@dataclass(frozen=True)
class GeneralizedHyperbolic(UtilityModel):
    """Hyperbolic discounting (1 + iota*t)^(-zeta/iota) in period units."""

    iota: float
    zeta: float
    period_days: float = 30.0

    def __post_init__(self):
        if not (self.iota > 0 and self.zeta > 0):
            raise ValueError("iota and zeta must be positive")
        if not self.period_days > 0:
            raise ValueError("period_days must be positive")


_DISCOUNT_VARIANTS = (ExponentialDiscount, QuasiHyperbolic, GeneralizedHyperbolic)
_BERNOULLI_VARIANTS = (CrraSymmetric, PowerLossAverse)


class _InfiniteDelay:
    """Sentinel for the never-paid date; discount weight is exactly zero there."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "INFINITE_DELAY"


INFINITE_DELAY = _InfiniteDelay()


@dataclass(frozen=True)
class DiscountFunction:
    """Evaluator d(t) for a discounting model: strictly decreasing, d(inf) = 0.

    Accepts day-denominated delays (scalar or array).  The sentinel
    ``INFINITE_DELAY`` maps to weight 0 without evaluating the formula.
    """

    model: UtilityModel

    def __post_init__(self):
        if not isinstance(self.model, _DISCOUNT_VARIANTS):
            raise TypeError("DiscountFunction requires a discounting model")

    def __call__(self, t):
        if t is INFINITE_DELAY:
            return 0.0
        m = self.model
        t_per = np.asarray(t, dtype=float) / m.period_days
        if np.any(t_per < 0):
            raise ValueError("delays must be nonnegative")
        if isinstance(m, ExponentialDiscount):
            out = m.delta**t_per
        elif isinstance(m, QuasiHyperbolic):
            out = np.where(t_per == 0.0, 1.0, m.present_bias * m.delta**t_per)
        else:
            out = (1.0 + m.iota * t_per) ** (-m.zeta / m.iota)
        return float(out) if np.isscalar(t) else out


def bernoulli_utility(model: UtilityModel, w):
    """Utility of a sure dollar amount (scalar or array) under a lottery model."""
    w = np.asarray(w, dtype=float)
    if isinstance(model, CrraSymmetric):
        out = np.sign(w) * np.abs(w) ** model.alpha
    elif isinstance(model, PowerLossAverse):
        out = np.where(w >= 0, np.abs(w) ** model.alpha, -model.lam * np.abs(w) ** model.beta)
    else:
        raise TypeError(f"{type(model).__name__} is not a lottery utility model")
    return out if out.ndim else float(out)


def value(opt: Option, model: UtilityModel) -> float:
    """Deterministic value of an option under a compatible preference model.

    Attribute vectors take the weighted attribute sum, lotteries the expected
    Bernoulli utility, payment streams the discounted payment sum.  Domain
    and model must match; weight-length mismatches raise.
    """
    if isinstance(opt, AttributeVector):
        if not isinstance(model, LinearAttributes):
            raise TypeError("attribute vectors require a LinearAttributes model")
        if len(model.weights) != len(opt):
            raise ValueError(
                f"weight length {len(model.weights)} != attribute length {len(opt)}"
            )
        v = float(np.dot(model.weights, opt.values))
    elif isinstance(opt, Lottery):
        if not isinstance(model, _BERNOULLI_VARIANTS):
            raise TypeError("lotteries require a Bernoulli utility model")
        v = float(np.dot(opt.masses(), bernoulli_utility(model, opt.support())))
    elif isinstance(opt, PayoffFlow):
        if not isinstance(model, _DISCOUNT_VARIANTS):
            raise TypeError("payment streams require a discounting model")
        if not opt.delays:
            return 0.0
        v = float(np.dot(DiscountFunction(model)(opt.times()), opt.payments()))
    else:
        raise TypeError(f"unsupported option type {type(opt).__name__}")
    if not np.isfinite(v):
        raise ValueError("option value is not finite")
    return v
