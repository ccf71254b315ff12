"""Distances between options and the signed comparison ratio.

Each option domain carries one exact distance: a weighted L1 distance for
attribute bundles, a quantile-space L1 distance between utility-valued CDFs
for lotteries, and a discount-weighted L1 distance between cumulative payoff
profiles for payment flows.  All three integrals are computed in closed form
on merged breakpoint grids, never by quadrature.

The signed ratio r(x, y) = (V(x) - V(y)) / d(x, y) always lies in [-1, 1];
|r| = 1 exactly when one option dominates the other in the relevant order
(statewise, FOSD in utility terms, or cumulative-payoff dominance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .options import AttributeVector, Lottery, PayoffFlow
from .preferences import (
    DiscountFunction,
    LinearAttributes,
    _BERNOULLI_VARIANTS,
    _DISCOUNT_VARIANTS,
    bernoulli_utility,
    value,
)

__all__ = [
    "SignedRatio",
    "d_l1",
    "d_cdf",
    "d_cpf",
    "signed_ratio",
    "merged_quantile_grid",
    "merged_time_grid",
]

_SNAP_REL = 1e-12


def d_l1(x: AttributeVector, y: AttributeVector, model: LinearAttributes) -> float:
    """Weighted L1 distance sum_k |beta_k (x_k - y_k)|."""
    xv = x.as_array()
    yv = y.as_array()
    w = np.asarray(model.weights, dtype=float)
    if xv.shape != yv.shape or xv.shape != w.shape:
        raise ValueError("attribute vectors and weights must share one length")
    return float(np.sum(np.abs(w * (xv - yv))))


def merged_quantile_grid(x: Lottery, y: Lottery):
    """Common quantile breakpoints and the per-segment payoffs of both lotteries.

    Returns (dq, wx, wy): segment widths summing to 1 and the constant payoff
    each lottery takes on that segment.  Quantiles are right-continuous in
    probability: the segment ending at q uses the smallest payoff whose CDF
    reaches q.
    """
    cx = x.cum_probs()
    cy = y.cum_probs()
    merged = np.union1d(cx, cy)
    dq = np.diff(np.concatenate(([0.0], merged)))
    wx = np.asarray(x.payoffs, dtype=float)[np.searchsorted(cx, merged, side="left")]
    wy = np.asarray(y.payoffs, dtype=float)[np.searchsorted(cy, merged, side="left")]
    return dq, wx, wy


def d_cdf(x: Lottery, y: Lottery, model) -> float:
    """Quantile-space L1 distance between utility-valued lotteries.

    Exact: integral over q in (0, 1] of |u(Q_x(q)) - u(Q_y(q))| evaluated
    segment by segment on the merged breakpoint grid.
    """
    if not isinstance(model, _BERNOULLI_VARIANTS):
        raise TypeError("d_cdf needs a Bernoulli-utility model")
    dq, wx, wy = merged_quantile_grid(x, y)
    return float(np.sum(np.abs(bernoulli_utility(model, wx) - bernoulli_utility(model, wy)) * dq))


def merged_time_grid(x: PayoffFlow, y: PayoffFlow):
    """Common payment times (0 always included) and cumulative totals there.

    Returns (ts, mx, my) with mx[i] = total of x paid at or before ts[i].
    """
    ts = np.union1d(np.concatenate(([0.0], x.times())), np.concatenate(([0.0], y.times())))
    mx = np.array([x.cumulative(t) for t in ts])
    my = np.array([y.cumulative(t) for t in ts])
    return ts, mx, my


def _cpf_weights(ts: np.ndarray, discount: DiscountFunction) -> np.ndarray:
    d = discount(ts)
    w = np.empty_like(d)
    w[:-1] = d[:-1] - d[1:]
    w[-1] = d[-1]  # the last segment runs to infinite delay, where d = 0
    return w


def d_cpf(x: PayoffFlow, y: PayoffFlow, model) -> float:
    """Discount-weighted L1 distance between cumulative payoff profiles.

    Exact for any discount variant: the profiles are step functions, so the
    integral of |M_x - M_y| against -d'(t) collapses to a finite sum with
    weights d(t_k) - d(t_{k+1}) and a final weight d(t_last).
    """
    if not isinstance(model, _DISCOUNT_VARIANTS):
        raise TypeError("d_cpf needs a discounting model")
    ts, mx, my = merged_time_grid(x, y)
    return float(np.sum(np.abs(mx - my) * _cpf_weights(ts, DiscountFunction(model))))


@dataclass(frozen=True)
class SignedRatio:
    """Value difference, distance, and their ratio for one ordered pair."""

    value: float
    value_diff: float
    distance: float


def _distance(x, y, model) -> float:
    if isinstance(x, AttributeVector) and isinstance(y, AttributeVector):
        return d_l1(x, y, model)
    if isinstance(x, Lottery) and isinstance(y, Lottery):
        return d_cdf(x, y, model)
    if isinstance(x, PayoffFlow) and isinstance(y, PayoffFlow):
        return d_cpf(x, y, model)
    raise TypeError(f"options of mixed or unsupported domains: {type(x)!r}, {type(y)!r}")


def signed_ratio(x, y, model) -> SignedRatio:
    """r(x, y) = (V(x) - V(y)) / d(x, y), snapped to exactly +-1 at dominance.

    A zero distance means the options are identical in the relevant order
    and gives r = 0.  The snap keeps dominated pairs on the sentinel path of
    ``tau_from_ratio`` even when the closed forms round the last bit.
    """
    dist = _distance(x, y, model)
    diff = value(x, model) - value(y, model)
    if dist == 0.0:
        return SignedRatio(0.0, 0.0, 0.0)
    if abs(abs(diff) - dist) <= _SNAP_REL * dist:
        return SignedRatio(1.0 if diff > 0 else -1.0, diff, dist)
    r = diff / dist
    r = max(-1.0, min(1.0, r))
    return SignedRatio(r, diff, dist)
