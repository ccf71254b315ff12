"""Price-list valuation: adapted lists, switching indices, implied valuations.

A valuation task compares one option x against a list z^1 > ... > z^n of
yardstick options whose internal ranking is unambiguous.  Signals are drawn
only between x and the entries, so the ranking posterior reduces to a
posterior over x's insertion rank k in {1, ..., n+1}, computable in linear
time.  The switching index R is where x's posterior expected value crosses
the entries' posterior expected values; the implied valuation is the
midpoint of the two straddling entry levels.

Four list kinds cover the classic elicitation modes: certainty equivalents
(certain payments), probability equivalents (fixed-stake lotteries), present
value equivalents (immediate payments), and time equivalents (fixed payment
at increasing delays).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

from .gcurve import GCurve, is_perfectly_comparable, tau_from_ratio
from .metrics import signed_ratio
from .options import Lottery, PayoffFlow
from .preferences import UtilityModel, value
from .ranking import PriorSpec, order_stat_means
from .rng import accumulate_blocks

__all__ = [
    "CE_KIND",
    "PE_KIND",
    "PVE_KIND",
    "TE_KIND",
    "DELAY_GRID_15",
    "PriceList",
    "build_adapted_list",
    "insertion_posterior",
    "SwitchingDistribution",
    "simulate_switching",
    "switching_analytic",
    "ValuationSummary",
    "valuation_summary",
    "implied_levels",
]

CE_KIND = "certainty_equivalent"
PE_KIND = "probability_equivalent"
PVE_KIND = "present_value_equivalent"
TE_KIND = "time_equivalent"
_KINDS = (CE_KIND, PE_KIND, PVE_KIND, TE_KIND)

# the standard 15-point delay grid (days) for time lists
DELAY_GRID_15 = (0.0, 7.0, 30.0, 60.0, 120.0, 180.0, 240.0, 360.0, 480.0, 600.0, 720.0, 900.0, 1080.0, 1260.0, 1440.0)

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class PriceList:
    """An ordered yardstick list.

    ``levels`` is the scalar coordinate that varies along the list (payment,
    probability, amount, or absolute delay); valuations are reported in this
    coordinate.  Entries must be strictly decreasing in value under the
    preference model used at simulation time.
    """

    kind: str
    entries: tuple
    levels: tuple[float, ...]
    stake: Optional[float] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown list kind {self.kind!r}")
        if len(self.entries) != len(self.levels):
            raise ValueError("entries and levels must align")
        if len(self.entries) < 3:
            raise ValueError("lists need at least 3 entries")

    @property
    def n(self) -> int:
        return len(self.entries)


def build_adapted_list(
    kind: str,
    anchor,
    n: int = 15,
    *,
    stake: Optional[float] = None,
    delay_grid: Optional[Sequence[float]] = None,
) -> PriceList:
    """Standard list for valuing ``anchor``, with equal steps spanning its range.

    CE: certain payments from the anchor lottery's best to worst support point.
    PE: lotteries (stake, p) with p in equal steps from the anchor's
        top-payoff probability (1 for certain anchors) down to 0.
    PVE: immediate payments from the anchor's total down to 0.
    TE: payments of ``stake`` at the anchor's delay plus each grid offset
        (default grid ``DELAY_GRID_15``); levels are absolute delays.
    """
    if n < 3:
        raise ValueError("lists need at least 3 entries")
    if kind == CE_KIND:
        if not isinstance(anchor, Lottery):
            raise TypeError("certainty-equivalent lists take a lottery anchor")
        hi, lo = anchor.payoffs[-1], anchor.payoffs[0]
        if not hi > lo:
            raise ValueError("anchor support is degenerate")
        levels = np.linspace(hi, lo, n)
        entries = tuple(Lottery([(w, 1.0)]) for w in levels)
        return PriceList(kind, entries, tuple(float(w) for w in levels))
    if kind == PE_KIND:
        if not isinstance(anchor, Lottery):
            raise TypeError("probability-equivalent lists take a lottery anchor")
        if stake is None or not stake > 0:
            raise ValueError("probability-equivalent lists need a positive stake")
        p_top = anchor.probs[-1]  # probability of the anchor's best payoff
        levels = np.linspace(p_top, 0.0, n)
        entries = tuple(Lottery([(float(stake), p), (0.0, 1.0 - p)]) for p in levels)
        return PriceList(kind, entries, tuple(float(p) for p in levels), stake=float(stake))
    if kind == PVE_KIND:
        if not isinstance(anchor, PayoffFlow):
            raise TypeError("present-value lists take a payment-stream anchor")
        total = anchor.total()
        if not total > 0:
            raise ValueError("anchor must pay a positive total")
        levels = np.linspace(total, 0.0, n)
        entries = tuple(PayoffFlow([(0.0, m)]) for m in levels)
        return PriceList(kind, entries, tuple(float(m) for m in levels))
    if kind == TE_KIND:
        if not isinstance(anchor, PayoffFlow):
            raise TypeError("time-equivalent lists take a payment-stream anchor")
        if not anchor.delays:
            raise ValueError("anchor pays nothing, so it has no delay")
        if stake is None or not stake > 0:
            raise ValueError("time-equivalent lists need a positive stake")
        grid = DELAY_GRID_15 if delay_grid is None else tuple(float(t) for t in delay_grid)
        if delay_grid is not None:
            if n != 15 and n != len(grid):
                raise ValueError("n conflicts with the delay grid length")
            if grid[0] != 0.0 or np.any(np.diff(grid) <= 0) or grid[0] < 0:
                raise ValueError("delay grid must start at 0 and increase strictly")
        offset = anchor.delays[0]
        levels = tuple(offset + t for t in grid)
        entries = tuple(PayoffFlow([(t, float(stake))]) for t in levels)
        return PriceList(kind, entries, levels, stake=float(stake))
    raise ValueError(f"unknown list kind {kind!r}")


# ---------------------------------------------------------------------------
# insertion posterior


def _pc_window(n: int, pc: np.ndarray, signs: np.ndarray) -> tuple[int, int]:
    """Feasible insertion ranks [lo, hi] under revealed comparisons.

    A revealed "x worse than z^j" forces rank > j; "x better" forces
    rank <= j.  Ranks are 1-based with n+1 meaning below the whole list.
    """
    lo, hi = 1, n + 1
    for j in range(n):
        if not pc[j]:
            continue
        if signs[j] < 0:
            lo = max(lo, j + 2)
        else:
            hi = min(hi, j + 1)
    if lo > hi:
        raise ValueError("revealed comparisons are inconsistent with the list order")
    return lo, hi


def _insertion_block(a: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Posterior over insertion ranks for rows of signal log-weights a = tau*s.

    Rank-k hypotheses flip the sign of entries above rank k, so the
    log-weight is 2 * (suffix sum from j = k) - (total sum); one reversed
    cumulative sum serves every k at once.
    """
    b, n = a.shape
    suffix = np.zeros((b, n + 1))
    suffix[:, :n] = np.cumsum(a[:, ::-1], axis=1)[:, ::-1]
    logw = 2.0 * suffix - suffix[:, :1]
    if lo > 1:
        logw[:, : lo - 1] = -np.inf
    if hi < n + 1:
        logw[:, hi:] = -np.inf
    logw -= logw.max(axis=1, keepdims=True)
    p = np.exp(logw)
    p /= p.sum(axis=1, keepdims=True)
    return p


def insertion_posterior(tau_x: Sequence, signals: Sequence[float], true_signs: Optional[Sequence[float]] = None) -> np.ndarray:
    """Posterior p_k over x's insertion rank k in {1, ..., n+1} for one draw.

    ``tau_x[j]`` is the precision of the signal between x and the j-th entry
    (floats or the perfectly-comparable sentinel); ``true_signs`` supplies
    sgn(v_x - v_j), needed only at perfectly comparable entries, where the
    signal is a hard constraint instead of a density factor.
    """
    n = len(tau_x)
    pc = np.array([is_perfectly_comparable(t) for t in tau_x])
    tau = np.array([0.0 if m else float(t) for t, m in zip(tau_x, pc)])
    if np.any(tau < 0):
        raise ValueError("precisions must be nonnegative")
    s = np.asarray(signals, dtype=float)
    if s.shape != (n,):
        raise ValueError("one signal per list entry")
    if pc.any():
        if true_signs is None:
            raise ValueError("perfectly comparable entries need true_signs")
        signs = np.sign(np.asarray(true_signs, dtype=float))
        if np.any(signs[pc] == 0):
            raise ValueError("perfectly comparable entries need nonzero true signs")
    else:
        signs = np.zeros(n)
    lo, hi = _pc_window(n, pc, signs)
    return _insertion_block((tau * s)[None, :], lo, hi)[0]


# ---------------------------------------------------------------------------
# switching simulation


@dataclass(frozen=True)
class SwitchingDistribution:
    """Distribution of the switching index R over {1, ..., n+1}.

    ``probs[k]`` is P(R = k + 1); R = 1 means x beat every entry, R = n + 1
    means every entry beat x.
    """

    probs: tuple[float, ...]
    draws: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.probs) - 1

    def expected_r(self) -> float:
        return float(np.dot(self.probs, np.arange(1, len(self.probs) + 1)))


def _list_rows(x, plist: PriceList, model: UtilityModel, curve: GCurve, tau_override=None):
    """Per-entry tau, perfect-comparability flags, and true signs for x vs the list.

    ``tau_override`` replaces the derived precisions entry-by-entry (floats
    or the sentinel); it exists to realize theoretical regimes, like fully
    uninformative signals, that no option pair generates organically.
    """
    vals = [value(z, model) for z in plist.entries]
    if np.any(np.diff(vals) >= 0):
        raise ValueError("list entries must be strictly decreasing in value")
    tau = np.zeros(plist.n)
    pc = np.zeros(plist.n, dtype=bool)
    signs = np.zeros(plist.n)
    vx = value(x, model)
    for j, z in enumerate(plist.entries):
        if tau_override is None:
            r = signed_ratio(x, z, model).value
            signs[j] = np.sign(r)
            t = tau_from_ratio(abs(r), curve)
        else:
            signs[j] = np.sign(vx - vals[j])
            t = tau_override[j]
        if is_perfectly_comparable(t):
            pc[j] = True
        else:
            tau[j] = float(t)
    if np.any(tau < 0):
        raise ValueError("precisions must be nonnegative")
    if np.any(pc & (signs == 0)):
        raise ValueError("a perfectly comparable entry needs a strict value ranking")
    return tau, pc, signs


def simulate_switching(
    x,
    plist: PriceList,
    model: UtilityModel,
    curve: GCurve,
    draws: int = 100_000,
    seed: int = 0,
    prior: PriorSpec = PriorSpec(),
    threads: int = 1,
    tau_override=None,
) -> SwitchingDistribution:
    """Monte Carlo distribution of the switching index for one valuation task.

    Each draw realizes the x-vs-entry signals, forms the insertion posterior,
    and compares posterior expected values: R = 1 + #{entries above x}, with
    exact posterior ties decided by independent fair coins (so a shared draw
    across tasks still tie-breaks independently).
    """
    tau, pc, signs = _list_rows(x, plist, model, curve, tau_override)
    n = plist.n
    lo, hi = _pc_window(n, pc, signs)
    v_rank = order_stat_means(n + 1, prior)
    noisy = tau > 0.0
    sqrt_tau = np.sqrt(tau[noisy])
    base = tau * signs  # tau * sgn(v_x - v_j), the signal mean in log-weight units

    def body(rng: np.random.Generator, m: int) -> list[np.ndarray]:
        a = np.broadcast_to(base, (m, n)).copy()
        if noisy.any():
            a[:, noisy] += sqrt_tau * rng.standard_normal((m, int(noisy.sum())))
        coins = rng.random((m, n)) < 0.5
        p = _insertion_block(a, lo, hi)
        e_x = p @ v_rank
        c = np.cumsum(p[:, :-1], axis=1)  # P(x above entry j)
        e_z = c * v_rank[1:] + (1.0 - c) * v_rank[:-1]
        diff = e_z - e_x[:, None]
        r_idx = (diff > _TIE_TOL).sum(axis=1) + ((np.abs(diff) <= _TIE_TOL) & coins).sum(axis=1)
        return [np.bincount(r_idx, minlength=n + 1).astype(float)]

    (counts,) = accumulate_blocks(body, draws, seed, stream_ids=(23,), threads=threads)
    return SwitchingDistribution(tuple(counts / draws), draws=draws)


def switching_analytic(
    x,
    plist: PriceList,
    model: UtilityModel,
    curve: GCurve,
    prior: PriorSpec = PriorSpec(),
    tau_override=None,
) -> SwitchingDistribution:
    """Exact switching distribution in the two degenerate signal regimes.

    All entries perfectly comparable: R is x's true rank with certainty.
    All precisions zero: the posterior is uniform for every draw, so R is
    deterministic up to fair coins at posterior-mean ties.  Mixed regimes
    have no closed form and raise.
    """
    tau, pc, signs = _list_rows(x, plist, model, curve, tau_override)
    n = plist.n
    probs = np.zeros(n + 1)
    if pc.all():
        r_star = int((signs < 0).sum())  # entries truly above x
        probs[r_star] = 1.0
        return SwitchingDistribution(tuple(probs))
    if pc.any() or tau.any():
        raise ValueError("closed form exists only for all-revealed or all-uninformative lists")
    v_rank = order_stat_means(n + 1, prior)
    e_x = v_rank.mean()
    c = np.arange(1, n + 1) / (n + 1)
    e_z = c * v_rank[1:] + (1.0 - c) * v_rank[:-1]
    diff = e_z - e_x
    base = int((diff > _TIE_TOL).sum())
    ties = int((np.abs(diff) <= _TIE_TOL).sum())
    for t in range(ties + 1):
        probs[base + t] += comb(ties, t) / 2.0**ties
    return SwitchingDistribution(tuple(probs))


# ---------------------------------------------------------------------------
# implied valuations


def implied_levels(plist: PriceList) -> np.ndarray:
    """Valuation implied by each switching index; NaN where R is diagnostic.

    Interior R: midpoint of the straddling levels.  Time lists extrapolate
    R = n + 1 by half the final step; all other edge indices mean the list
    failed to bracket x and are excluded.
    """
    lv = np.asarray(plist.levels)
    out = np.full(plist.n + 1, np.nan)
    out[1:-1] = (lv[:-1] + lv[1:]) / 2.0
    if plist.kind == TE_KIND:
        out[-1] = lv[-1] + (lv[-1] - lv[-2]) / 2.0
    return out


@dataclass(frozen=True)
class ValuationSummary:
    """Mean implied valuation, its conditional standard error, and the
    probability mass on diagnostic (unbracketed) switching indices."""

    kind: str
    mean: float
    se: Optional[float]
    excluded_mass: float


def valuation_summary(dist: SwitchingDistribution, plist: PriceList) -> ValuationSummary:
    """Average the implied valuation over the switching distribution.

    Diagnostic indices are excluded and the rest renormalized; the standard
    error treats kept draws as a sample from the renormalized distribution.
    """
    if dist.n != plist.n:
        raise ValueError("distribution and list sizes differ")
    levels = implied_levels(plist)
    p = np.asarray(dist.probs)
    keep = ~np.isnan(levels)
    kept_mass = float(p[keep].sum())
    excluded = max(0.0, 1.0 - kept_mass)
    if kept_mass <= 0.0:
        return ValuationSummary(plist.kind, float("nan"), None, 1.0)
    q = p[keep] / kept_mass
    mean = float(q @ levels[keep])
    se = None
    if dist.draws is not None:
        kept_draws = dist.draws * kept_mass
        var = float(q @ (levels[keep] - mean) ** 2)
        se = float(np.sqrt(var / kept_draws)) if kept_draws > 0 else None
    return ValuationSummary(plist.kind, mean, se, excluded)
