"""Transport-plan interpretations of the lottery and payment-stream distances.

The quantile and cumulative-payoff distances each equal the cost of an
optimal coupling: lotteries are matched comonotonically in utility space,
payment streams are padded to equal-mass measures on the discount axis and
matched there.  These routines rebuild the couplings greedily, atom by atom,
giving an arithmetic route to the distances that is independent of the
closed forms in :mod:`ratiochoice.metrics`.
"""

from __future__ import annotations

import numpy as np

from .options import Lottery, PayoffFlow
from .preferences import (
    INFINITE_DELAY,
    DiscountFunction,
    _BERNOULLI_VARIANTS,
    _DISCOUNT_VARIANTS,
    bernoulli_utility,
)

__all__ = [
    "wasserstein1_atoms",
    "min_coupling_lottery",
    "min_coupling_flow",
    "product_coupling_lottery",
    "product_coupling_flow",
]

_MASS_EPS = 1e-15


def wasserstein1_atoms(loc_x, mass_x, loc_y, mass_y):
    """Optimal 1-D transport between two equal-mass discrete measures.

    Returns ``(cost, plan)`` where plan entries are ``(i, j, m)`` index
    triples moving mass m from atom i of x to atom j of y.  On the line the
    optimum is the comonotone matching, built by a two-pointer sweep over
    the atoms sorted by location.
    """
    lx = np.asarray(loc_x, dtype=float)
    ly = np.asarray(loc_y, dtype=float)
    mx = np.asarray(mass_x, dtype=float)
    my = np.asarray(mass_y, dtype=float)
    if np.any(mx < 0) or np.any(my < 0):
        raise ValueError("masses must be nonnegative")
    if abs(mx.sum() - my.sum()) > 1e-9 * max(1.0, mx.sum()):
        raise ValueError("total masses differ")

    ox = np.argsort(lx, kind="stable")
    oy = np.argsort(ly, kind="stable")
    plan: list[tuple[int, int, float]] = []
    cost = 0.0
    i = j = 0
    rx = mx[ox[0]] if len(ox) else 0.0
    ry = my[oy[0]] if len(oy) else 0.0
    while i < len(ox) and j < len(oy):
        m = min(rx, ry)
        if m > _MASS_EPS:
            a, b = int(ox[i]), int(oy[j])
            plan.append((a, b, m))
            cost += m * abs(lx[a] - ly[b])
        rx -= m
        ry -= m
        if rx <= _MASS_EPS:
            i += 1
            rx = mx[ox[i]] if i < len(ox) else 0.0
        if ry <= _MASS_EPS:
            j += 1
            ry = my[oy[j]] if j < len(oy) else 0.0
    return cost, plan


def min_coupling_lottery(x: Lottery, y: Lottery, model):
    """Minimal-cost coupling of two lotteries in utility space.

    Returns ``(cost, plan)`` with plan entries ``(payoff_x, payoff_y, prob)``;
    the cost equals the quantile distance ``d_cdf(x, y, model)``.
    """
    if not isinstance(model, _BERNOULLI_VARIANTS):
        raise TypeError("lottery couplings need a Bernoulli-utility model")
    ux = np.asarray(bernoulli_utility(model, x.support()), dtype=float)
    uy = np.asarray(bernoulli_utility(model, y.support()), dtype=float)
    cost, idx_plan = wasserstein1_atoms(ux, x.masses(), uy, y.masses())
    plan = [(x.payoffs[i], y.payoffs[j], m) for i, j, m in idx_plan]
    return cost, plan


def _flow_atoms(x: PayoffFlow, y: PayoffFlow, discount: DiscountFunction):
    # Locations are discount weights; the pad atom sits at weight 0, the
    # discount value of a payment that never arrives.
    for flow in (x, y):
        if any(a <= 0 for a in flow.amounts):
            raise ValueError("flow couplings need strictly positive payment amounts")
    pad_x = y.total()
    pad_y = x.total()
    loc_x = np.concatenate((np.asarray(discount(x.times()), dtype=float).reshape(-1), [0.0]))
    loc_y = np.concatenate((np.asarray(discount(y.times()), dtype=float).reshape(-1), [0.0]))
    mass_x = np.concatenate((x.payments(), [pad_x]))
    mass_y = np.concatenate((y.payments(), [pad_y]))
    labels_x = list(x.delays) + [INFINITE_DELAY]
    labels_y = list(y.delays) + [INFINITE_DELAY]
    return loc_x, mass_x, labels_x, loc_y, mass_y, labels_y


def min_coupling_flow(x: PayoffFlow, y: PayoffFlow, model):
    """Minimal-cost coupling of two payment streams on the discount axis.

    Each stream is padded with the other's total at the never-paid date so
    both sides carry the same mass.  Returns ``(cost, plan)`` with plan
    entries ``(date_x, date_y, dollars)`` where a date may be the
    ``INFINITE_DELAY`` sentinel; the cost equals ``d_cpf(x, y, model)``.
    """
    if not isinstance(model, _DISCOUNT_VARIANTS):
        raise TypeError("flow couplings need a discounting model")
    d = DiscountFunction(model)
    loc_x, mass_x, labels_x, loc_y, mass_y, labels_y = _flow_atoms(x, y, d)
    if mass_x.sum() == 0.0:
        return 0.0, []
    cost, idx_plan = wasserstein1_atoms(loc_x, mass_x, loc_y, mass_y)
    plan = [(labels_x[i], labels_y[j], m) for i, j, m in idx_plan]
    return cost, plan


def product_coupling_lottery(x: Lottery, y: Lottery, model) -> float:
    """Cost of the independent (product) coupling; an upper bound on d_cdf."""
    if not isinstance(model, _BERNOULLI_VARIANTS):
        raise TypeError("lottery couplings need a Bernoulli-utility model")
    ux = np.asarray(bernoulli_utility(model, x.support()), dtype=float)
    uy = np.asarray(bernoulli_utility(model, y.support()), dtype=float)
    diff = np.abs(ux[:, None] - uy[None, :])
    return float(x.masses() @ diff @ y.masses())


def product_coupling_flow(x: PayoffFlow, y: PayoffFlow, model) -> float:
    """Cost of the independent coupling of padded streams; upper bound on d_cpf."""
    if not isinstance(model, _DISCOUNT_VARIANTS):
        raise TypeError("flow couplings need a discounting model")
    d = DiscountFunction(model)
    loc_x, mass_x, _, loc_y, mass_y, _ = _flow_atoms(x, y, d)
    total = mass_x.sum()
    if total == 0.0:
        return 0.0
    diff = np.abs(loc_x[:, None] - loc_y[None, :])
    return float((mass_x / total) @ diff @ mass_y)
