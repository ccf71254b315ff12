"""Binary choice probability rules behind one dispatch.

Two rule variants share the ``rho(model, x, y)`` interface:

* ``Complexity``: the similarity-driven rule G(r(x, y)) built from a
  preference model and a response curve.
* ``LogitBenchmark``: a deterministic value family plus logit noise,
  rho = 1 / (1 + exp(-eta * (V(x) - V(y)))).  The menu-dependent families
  (salience, focusing, relative thinking) evaluate V in the binary context;
  attribute levels are taken pre-scaled so weights are identically 1.

All rules are pure and satisfy rho(x, y) + rho(y, x) = 1 exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .gcurve import GCurve, g_eval
from .metrics import signed_ratio
from .options import AttributeVector, Lottery, PayoffFlow
from .preferences import (
    CrraSymmetric,
    ExponentialDiscount,
    GeneralizedHyperbolic,
    PowerLossAverse,
    QuasiHyperbolic,
    UtilityModel,
    bernoulli_utility,
    value,
)

__all__ = [
    "Complexity",
    "LogitBenchmark",
    "DistortionFree",
    "Salience",
    "Focusing",
    "RelativeThinking",
    "EDU",
    "QDU",
    "HDU",
    "EU",
    "RDEU",
    "CPT",
    "rho",
    "context_value",
    "cpt_value",
    "reveal_probability",
    "rho_binary_signal",
]


# ---------------------------------------------------------------------------
# benchmark families


@dataclass(frozen=True)
class DistortionFree:
    """Undistorted linear value sum_k x_k."""


@dataclass(frozen=True)
class Salience:
    """Salience weighting with exponent 1 - delta_s; delta_s = 1 is undistorted."""

    delta_s: float

    def __post_init__(self):
        if not self.delta_s <= 1:
            raise ValueError("delta_s must be <= 1")


@dataclass(frozen=True)
class Focusing:
    """Focusing weights |x_k - y_k|^theta; theta = 0 is undistorted."""

    theta: float

    def __post_init__(self):
        if not self.theta >= 0:
            raise ValueError("theta must be nonnegative")


@dataclass(frozen=True)
class RelativeThinking:
    """Proportional-thinking weights (1 - omega) + omega / (|x_k - y_k| + xi)."""

    omega: float
    xi: float

    def __post_init__(self):
        if not 0 <= self.omega <= 1:
            raise ValueError("omega must lie in [0, 1]")
        if not self.xi > 0:
            raise ValueError("xi must be positive")


@dataclass(frozen=True)
class EDU:
    """Exponential discounting of payment streams."""

    delta: float
    period_days: float = 30.0

    def discount_model(self) -> ExponentialDiscount:
        return ExponentialDiscount(self.delta, self.period_days)


@dataclass(frozen=True)
class QDU:
    """Quasi-hyperbolic (beta-delta) discounting."""

    beta_qh: float
    delta: float
    period_days: float = 30.0

    def discount_model(self) -> QuasiHyperbolic:
        return QuasiHyperbolic(self.beta_qh, self.delta, self.period_days)


@dataclass(frozen=True)
class HDU:
    """Generalized-hyperbolic discounting."""

    iota: float
    zeta: float
    period_days: float = 30.0

    def discount_model(self) -> GeneralizedHyperbolic:
        return GeneralizedHyperbolic(self.iota, self.zeta, self.period_days)


@dataclass(frozen=True)
class EU:
    """Expected utility with sign-symmetric power utility."""

    alpha: float

    def utility_model(self) -> CrraSymmetric:
        return CrraSymmetric(self.alpha)


@dataclass(frozen=True)
class RDEU:
    """Expected power utility with loss aversion, no probability weighting."""

    alpha: float
    beta: float
    lam: float

    def utility_model(self) -> PowerLossAverse:
        return PowerLossAverse(self.alpha, self.beta, self.lam)


@dataclass(frozen=True)
class CPT:
    """Cumulative prospect theory: loss-averse power utility and rank-dependent weights."""

    alpha: float
    beta: float
    lam: float
    chi: float
    nu: float

    def __post_init__(self):
        if not all(p > 0 for p in (self.alpha, self.beta, self.lam, self.chi, self.nu)):
            raise ValueError("CPT parameters must be positive")


_MENU_FAMILIES = (Salience, Focusing, RelativeThinking)
_TEMPORAL_FAMILIES = (EDU, QDU, HDU)
_FAMILY_TYPES = (
    DistortionFree,
    Salience,
    Focusing,
    RelativeThinking,
    EDU,
    QDU,
    HDU,
    EU,
    RDEU,
    CPT,
)


# ---------------------------------------------------------------------------
# choice rules


@dataclass(frozen=True)
class Complexity(UtilityModel):
    """Similarity-driven stochastic choice: rho(x, y) = G(r(x, y))."""

    utility: UtilityModel
    curve: GCurve


@dataclass(frozen=True)
class LogitBenchmark:
    """A deterministic benchmark value family plus logit choice noise."""

    family: object
    eta: float

    def __post_init__(self):
        if not isinstance(self.family, _FAMILY_TYPES):
            raise TypeError(f"unknown benchmark family {type(self.family).__name__}")
        if not self.eta >= 0:
            raise ValueError("eta must be nonnegative")


def context_value(family, x: AttributeVector, y: AttributeVector) -> float:
    """Menu-dependent value V(x | {x, y}) for the attribute-distortion families.

    Salience weighs each attribute by its contrast with the menu midpoint
    m = (x + y) / 2; a level with x_k = m_k = 0 gets weight exactly 1.
    """
    xv = x.as_array()
    yv = y.as_array()
    if xv.shape != yv.shape:
        raise ValueError("context values need equal attribute counts")
    if isinstance(family, Salience):
        m = (xv + yv) / 2.0
        denom = np.abs(xv) + np.abs(m)
        contrast = np.divide(np.abs(xv - m), denom, out=np.zeros_like(denom), where=denom > 0)
        return float(np.sum(xv * (1.0 + contrast) ** (1.0 - family.delta_s)))
    if isinstance(family, Focusing):
        gaps = np.abs(xv - yv)
        return float(np.sum(xv * gaps**family.theta))
    if isinstance(family, RelativeThinking):
        gaps = np.abs(xv - yv)
        return float(np.sum(xv * ((1.0 - family.omega) + family.omega / (gaps + family.xi))))
    raise TypeError(f"{type(family).__name__} is not a menu-dependent family")


def _weight_curve(p, chi: float, nu: float):
    p = np.asarray(p, dtype=float)
    a = chi * p**nu
    return a / (a + (1.0 - p) ** nu)


def cpt_value(lot: Lottery, alpha: float, beta: float, lam: float, chi: float, nu: float) -> float:
    """Cumulative-prospect value of a lottery.

    Decision weights are rank-dependent: gains are cumulated from the best
    payoff down, losses from the worst payoff up, through the probability
    weighting curve q(p) = chi p^nu / (chi p^nu + (1-p)^nu).  A zero payoff
    carries utility 0, so its weight never enters.
    """
    u = PowerLossAverse(alpha, beta, lam)
    w = lot.support()
    p = lot.masses()
    total = 0.0
    gains = w > 0
    if np.any(gains):
        wg = w[gains][::-1]  # best first
        pg = p[gains][::-1]
        pi = np.diff(_weight_curve(np.concatenate(([0.0], np.cumsum(pg))), chi, nu))
        total += float(pi @ np.atleast_1d(bernoulli_utility(u, wg)))
    losses = w < 0
    if np.any(losses):
        wl = w[losses]  # worst first: support is sorted ascending
        pl = p[losses]
        pi = np.diff(_weight_curve(np.concatenate(([0.0], np.cumsum(pl))), chi, nu))
        total += float(pi @ np.atleast_1d(bernoulli_utility(u, wl)))
    return total


def _benchmark_value_pair(family, x, y) -> tuple[float, float]:
    if isinstance(family, DistortionFree):
        if not isinstance(x, AttributeVector) or not isinstance(y, AttributeVector):
            raise TypeError("DistortionFree applies to attribute vectors")
        if len(x) != len(y):
            raise ValueError("attribute counts differ")
        return float(np.sum(x.as_array())), float(np.sum(y.as_array()))
    if isinstance(family, _MENU_FAMILIES):
        if not isinstance(x, AttributeVector) or not isinstance(y, AttributeVector):
            raise TypeError(f"{type(family).__name__} applies to attribute vectors")
        return context_value(family, x, y), context_value(family, y, x)
    if isinstance(family, _TEMPORAL_FAMILIES):
        if not isinstance(x, PayoffFlow) or not isinstance(y, PayoffFlow):
            raise TypeError(f"{type(family).__name__} applies to payment streams")
        m = family.discount_model()
        return value(x, m), value(y, m)
    if isinstance(family, (EU, RDEU)):
        if not isinstance(x, Lottery) or not isinstance(y, Lottery):
            raise TypeError(f"{type(family).__name__} applies to lotteries")
        m = family.utility_model()
        return value(x, m), value(y, m)
    if isinstance(family, CPT):
        if not isinstance(x, Lottery) or not isinstance(y, Lottery):
            raise TypeError("CPT applies to lotteries")
        args = (family.alpha, family.beta, family.lam, family.chi, family.nu)
        return cpt_value(x, *args), cpt_value(y, *args)
    raise TypeError(f"unknown benchmark family {type(family).__name__}")


def rho(model, x, y) -> float:
    """Probability of choosing x from the pair {x, y} under the given rule."""
    if isinstance(model, Complexity):
        return float(g_eval(signed_ratio(x, y, model.utility).value, model.curve))
    if isinstance(model, LogitBenchmark):
        vx, vy = _benchmark_value_pair(model.family, x, y)
        return float(expit(model.eta * (vx - vy)))
    raise TypeError(f"unsupported choice model {type(model).__name__}")


def reveal_probability(r: float, curve: GCurve) -> float:
    """Probability that a binary signal reveals the pair's true ranking.

    Defined as 2 G(|r|) - 1, the unique reveal probability that makes the
    all-or-nothing signal observationally equivalent to the Gaussian-signal
    rule in binary choice; for the linear curve it is |r| itself.
    """
    return 2.0 * float(g_eval(abs(r), curve)) - 1.0


def rho_binary_signal(x, y, model: UtilityModel, curve: GCurve) -> float:
    """Binary-signal route to the choice probability.

    With probability ``reveal_probability`` the ranking is revealed and the
    better option is chosen; otherwise the signal is uninformative and the
    choice is a fair coin.  Numerically identical to the Complexity rule.
    """
    r = signed_ratio(x, y, model).value
    t = reveal_probability(r, curve)
    if r > 0:
        return (1.0 + t) / 2.0
    if r < 0:
        return (1.0 - t) / 2.0
    return 0.5
