"""Choice-option domains: attribute bundles, finite lotteries, payment streams.

All three option types are immutable and canonicalized at construction:
lotteries merge duplicate payoffs and drop zero-probability outcomes,
payment streams merge duplicate delays and drop zero amounts.  Canonical
form makes the distance metrics in :mod:`ratiochoice.metrics` well defined
without case analysis, and canonicalization is idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

__all__ = ["AttributeVector", "Lottery", "PayoffFlow", "Option"]

_PROB_TOL = 1e-12


def _as_float_tuple(values: Iterable[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class AttributeVector:
    """An option described by ``n >= 2`` real-valued attribute levels.

    Attributes are unitless; preference weights are applied by a
    ``LinearAttributes`` utility model, not stored here.
    """

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        vals = _as_float_tuple(values)
        if len(vals) < 2:
            raise ValueError("attribute vectors need at least two attributes")
        if not all(np.isfinite(vals)):
            raise ValueError("attribute levels must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class Lottery:
    """A finite-support lottery over dollar payoffs.

    Construction canonicalizes the outcome list: zero-probability outcomes
    are dropped, duplicate payoffs are merged by summing probability, and
    support is sorted ascending.  Probabilities must total 1 within 1e-12.

    Attributes:
        payoffs: sorted distinct payoff support (dollars)
        probs: matching probabilities, summing to 1
    """

    payoffs: tuple[float, ...]
    probs: tuple[float, ...]

    def __init__(self, outcomes: Iterable[tuple[float, float]]):
        pairs = [(float(w), float(p)) for w, p in outcomes]
        if not pairs:
            raise ValueError("a lottery needs at least one outcome")
        merged: dict[float, float] = {}
        for w, p in pairs:
            if not np.isfinite(w) or not np.isfinite(p):
                raise ValueError("payoffs and probabilities must be finite")
            if p < 0:
                raise ValueError(f"negative probability {p}")
            if p == 0.0:
                continue
            merged[w] = merged.get(w, 0.0) + p
        if not merged:
            raise ValueError("all outcomes had zero probability")
        total = sum(merged.values())
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        support = sorted(merged)
        object.__setattr__(self, "payoffs", tuple(support))
        object.__setattr__(self, "probs", tuple(merged[w] for w in support))

    def support(self) -> np.ndarray:
        return np.asarray(self.payoffs, dtype=float)

    def masses(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def cum_probs(self) -> np.ndarray:
        """Cumulative probabilities at the support points; last entry is exactly 1."""
        c = np.cumsum(self.probs)
        c[-1] = 1.0
        return c

    def cdf(self, w: float) -> float:
        """P(payoff <= w)."""
        idx = np.searchsorted(self.support(), w, side="right")
        return 0.0 if idx == 0 else float(self.cum_probs()[idx - 1])

    def quantile(self, q: float) -> float:
        """Lower quantile inf{w : q <= F(w)} for q in (0, 1]."""
        if not 0.0 < q <= 1.0:
            raise ValueError("quantile level must lie in (0, 1]")
        idx = int(np.searchsorted(self.cum_probs(), q, side="left"))
        return self.payoffs[min(idx, len(self.payoffs) - 1)]


@dataclass(frozen=True)
class PayoffFlow:
    """A finite stream of dated dollar payments.

    Delays are in days and must be nonnegative; duplicate delays are merged
    by summing amounts and exact-zero amounts are dropped.  The empty stream
    is allowed and represents paying nothing.

    Attributes:
        delays: sorted distinct payment dates (days)
        amounts: matching payment amounts (dollars, nonzero)
    """

    delays: tuple[float, ...]
    amounts: tuple[float, ...]

    def __init__(self, payments: Iterable[tuple[float, float]]):
        merged: dict[float, float] = {}
        for t, m in payments:
            t, m = float(t), float(m)
            if not np.isfinite(t) or not np.isfinite(m):
                raise ValueError("delays and amounts must be finite")
            if t < 0:
                raise ValueError(f"negative delay {t}")
            merged[t] = merged.get(t, 0.0) + m
        times = sorted(t for t, m in merged.items() if m != 0.0)
        object.__setattr__(self, "delays", tuple(times))
        object.__setattr__(self, "amounts", tuple(merged[t] for t in times))

    def times(self) -> np.ndarray:
        return np.asarray(self.delays, dtype=float)

    def payments(self) -> np.ndarray:
        return np.asarray(self.amounts, dtype=float)

    def total(self) -> float:
        return float(sum(self.amounts))

    def cumulative(self, t: float) -> float:
        """Total paid out by day ``t`` (right-continuous step function)."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        idx = np.searchsorted(self.times(), t, side="right")
        return float(np.sum(self.payments()[:idx]))


Option = Union[AttributeVector, Lottery, PayoffFlow]
