"""Canned simulation sweeps: valuation-bias curves and context effects.

Each builder runs a fixed battery of valuation or menu-choice simulations
and returns long-format rows with Monte Carlo standard errors, suitable for
plotting or regression without re-running the engine.  Defaults pin every
sweep so a rerun with the same seed reproduces the file byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gcurve import GCurve
from .options import AttributeVector, Lottery, PayoffFlow
from .preferences import (
    CrraSymmetric,
    DiscountFunction,
    ExponentialDiscount,
    GeneralizedHyperbolic,
    LinearAttributes,
)
from .pricelists import (
    CE_KIND,
    DELAY_GRID_15,
    PE_KIND,
    PVE_KIND,
    TE_KIND,
    PriceList,
    build_adapted_list,
    simulate_switching,
    valuation_summary,
)
from .ranking import build_structure, simulate_choice

__all__ = ["FigureResult", "FIGURE_IDS", "build_figure"]


@dataclass(frozen=True)
class FigureResult:
    """Long-format simulation output plus the resolved parameter set."""

    figure: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    params: dict


def _switch_summary(option, plist, model, curve, draws, seed, threads):
    dist = simulate_switching(
        option, plist, model, curve, draws=draws, seed=seed, threads=threads
    )
    return valuation_summary(dist, plist)


def build_ce_pe_reversal(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    expected_value: float = 4.465,
    p_grid=(0.19, 0.25, 0.35, 0.5, 0.65, 0.8, 0.94),
    alphas=(1.0, 0.9),
    pe_stake: float = 24.0,
    entries: int = 15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Certainty vs probability equivalents for equal-mean simple lotteries.

    Each lottery pays expected_value / p with probability p.  Valuations in
    dollars overvalue the riskiest lotteries; valuations in probability units
    reverse the ordering.
    """
    curve = GCurve(kappa, gamma)
    rows = []
    task = 0
    for alpha in alphas:
        model = CrraSymmetric(alpha)
        for p in p_grid:
            payoff = expected_value / p
            lot = Lottery([(payoff, p), (0.0, 1.0 - p)])
            for panel, kind, stake in (("ce", CE_KIND, None), ("pe", PE_KIND, pe_stake)):
                plist = build_adapted_list(kind, lot, entries, stake=stake)
                s = _switch_summary(lot, plist, model, curve, draws, seed + task, threads)
                rows.append((panel, alpha, p, payoff, s.mean, s.se, s.excluded_mass))
                task += 1
    return FigureResult(
        "ce-pe-reversal",
        ("panel", "alpha", "p", "payoff", "mean", "se", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            expected_value=expected_value,
            p_grid=tuple(p_grid),
            alphas=tuple(alphas),
            pe_stake=pe_stake,
            entries=entries,
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_pve_te_reversal(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    delta: float = 0.95,
    period_days: float = 30.0,
    anchor_value: float = 7.8375,
    pve_delays=(30.0, 60.0, 120.0, 240.0, 360.0, 480.0, 720.0, 1080.0),
    te_delays=(30.0, 60.0, 120.0, 240.0, 360.0, 480.0, 720.0),
    te_stake: float = 27.5,
    entries: int = 15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Present-value vs time equivalents along an iso-value delay sweep.

    Sweep anchors pay anchor_value / d(t) at delay t, so true worth is flat;
    dollar valuations rise with delay while time-list valuations do not.  The
    te sweep stops at 720 days: beyond d^{-1}(anchor_value / te_stake) the
    stake cannot match the anchor at any nonnegative extra delay.  Two
    "example" panels value a concrete pair directly: x pays 27 in 750 days,
    y pays 8.25 in 30 days (y is worth more), with the time lists sharing
    one absolute delay grid so the pair is measured against the same yardstick.
    """
    curve = GCurve(kappa, gamma)
    model = ExponentialDiscount(delta, period_days)
    disc = DiscountFunction(model)
    rows = []
    task = 0
    for t in pve_delays:
        amount = anchor_value / float(disc(t))
        anchor = PayoffFlow([(t, amount)])
        plist = build_adapted_list(PVE_KIND, anchor, entries)
        s = _switch_summary(anchor, plist, model, curve, draws, seed + task, threads)
        rows.append(("pve", "", t, amount, s.mean, s.se, s.excluded_mass))
        task += 1
    for t in te_delays:
        amount = anchor_value / float(disc(t))
        anchor = PayoffFlow([(t, amount)])
        plist = build_adapted_list(TE_KIND, anchor, entries, stake=te_stake)
        s = _switch_summary(anchor, plist, model, curve, draws, seed + task, threads)
        rows.append(("te", "", t, amount, s.mean, s.se, s.excluded_mass))
        task += 1
    example = (("x", PayoffFlow([(750.0, 27.0)])), ("y", PayoffFlow([(30.0, 8.25)])))
    for label, opt in example:
        plist = build_adapted_list(PVE_KIND, opt, entries)
        s = _switch_summary(opt, plist, model, curve, draws, seed + task, threads)
        rows.append(
            ("pve-example", label, opt.delays[0], opt.amounts[0], s.mean, s.se, s.excluded_mass)
        )
        task += 1
    grid = tuple(float(t) for t in DELAY_GRID_15)
    shared = PriceList(
        TE_KIND,
        tuple(PayoffFlow([(t, te_stake)]) for t in grid),
        grid,
        stake=te_stake,
    )
    for label, opt in example:
        s = _switch_summary(opt, shared, model, curve, draws, seed + task, threads)
        rows.append(
            ("te-example", label, opt.delays[0], opt.amounts[0], s.mean, s.se, s.excluded_mass)
        )
        task += 1
    return FigureResult(
        "pve-te-reversal",
        ("panel", "option", "delay_days", "amount", "mean", "se", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            delta=delta,
            period_days=period_days,
            anchor_value=anchor_value,
            pve_delays=tuple(pve_delays),
            te_delays=tuple(te_delays),
            te_stake=te_stake,
            entries=entries,
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_pwf(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    stake: float = 24.0,
    alpha: float = 1.0,
    p_grid=(0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95),
    entries: int = 15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Apparent probability weighting from certainty equivalents.

    Values the lottery (stake, p) in dollars across p; normalized valuations
    trace an inverse-S around the diagonal even with linear utility.
    """
    curve = GCurve(kappa, gamma)
    model = CrraSymmetric(alpha)
    rows = []
    for task, p in enumerate(p_grid):
        lot = Lottery([(stake, p), (0.0, 1.0 - p)])
        plist = build_adapted_list(CE_KIND, lot, entries)
        s = _switch_summary(lot, plist, model, curve, draws, seed + task, threads)
        rows.append((p, s.mean, s.se, s.mean / stake, s.excluded_mass))
    return FigureResult(
        "pwf",
        ("p", "mean", "se", "normalized", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            stake=stake,
            alpha=alpha,
            p_grid=tuple(p_grid),
            entries=entries,
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_pwf_pe(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    stake: float = 24.0,
    alpha: float = 1.0,
    ratio_grid=(0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95),
    entries: int = 15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Probability equivalents of sure payments: the weighting pattern flips.

    Values the certain payment ratio*stake against lotteries (stake, p); with
    linear utility the true equivalent is the ratio itself, and distortions
    push small ratios down and large ratios up.
    """
    curve = GCurve(kappa, gamma)
    model = CrraSymmetric(alpha)
    rows = []
    for task, ratio in enumerate(ratio_grid):
        c = Lottery([(ratio * stake, 1.0)])
        plist = build_adapted_list(PE_KIND, c, entries, stake=stake)
        s = _switch_summary(c, plist, model, curve, draws, seed + task, threads)
        rows.append((ratio, ratio * stake, s.mean, s.se, s.excluded_mass))
    return FigureResult(
        "pwf-pe",
        ("payment_ratio", "payment", "mean", "se", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            stake=stake,
            alpha=alpha,
            ratio_grid=tuple(ratio_grid),
            entries=entries,
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_discount_pve(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    amount: float = 30.0,
    delta: float = 0.95,
    period_days: float = 30.0,
    delay_grid=(7.0, 30.0, 60.0, 120.0, 240.0, 360.0, 480.0, 720.0, 1080.0),
    entries: int = 15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Apparent hyperbolicity in present-value equivalents.

    Values (amount, t) in dollars today across delays; true_value is the
    undistorted discounted worth, undershot at short delays and overshot at
    long ones.
    """
    curve = GCurve(kappa, gamma)
    model = ExponentialDiscount(delta, period_days)
    disc = DiscountFunction(model)
    rows = []
    for task, t in enumerate(delay_grid):
        anchor = PayoffFlow([(t, amount)])
        plist = build_adapted_list(PVE_KIND, anchor, entries)
        s = _switch_summary(anchor, plist, model, curve, draws, seed + task, threads)
        rows.append((t, s.mean, s.se, amount * float(disc(t)), s.excluded_mass))
    return FigureResult(
        "discount-pve",
        ("delay_days", "mean", "se", "true_value", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            amount=amount,
            delta=delta,
            period_days=period_days,
            delay_grid=tuple(delay_grid),
            entries=entries,
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_discount_te(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    amount: float = 30.0,
    delta: float = 0.95,
    period_days: float = 30.0,
    ratio_grid=(0.2, 0.35, 0.5, 0.65, 0.8, 0.95),
    delay_grid=DELAY_GRID_15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Time equivalents of immediate payments: hyperbolicity reverses.

    Values the immediate payment ratio*amount against delayed stakes
    (amount, t_k); true_delay solves delta^(t/period) = ratio, overshot for
    near-present payments and undershot for distant ones.
    """
    curve = GCurve(kappa, gamma)
    model = ExponentialDiscount(delta, period_days)
    rows = []
    for task, ratio in enumerate(ratio_grid):
        c = PayoffFlow([(0.0, ratio * amount)])
        plist = build_adapted_list(TE_KIND, c, len(delay_grid), stake=amount, delay_grid=delay_grid)
        s = _switch_summary(c, plist, model, curve, draws, seed + task, threads)
        true_delay = period_days * math.log(ratio) / math.log(delta)
        rows.append((ratio, ratio * amount, s.mean, s.se, true_delay, s.excluded_mass))
    return FigureResult(
        "discount-te",
        ("payment_ratio", "payment", "mean", "se", "true_delay", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            amount=amount,
            delta=delta,
            period_days=period_days,
            ratio_grid=tuple(ratio_grid),
            delay_grid=tuple(float(t) for t in delay_grid),
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_hyperbolic_appendix(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    amount: float = 30.0,
    iota: float = 0.159,
    zeta: float = 0.12,
    period_days: float = 24.0,
    pve_delays=(7.0, 30.0, 60.0, 120.0, 240.0, 360.0, 480.0, 720.0, 1080.0),
    ratio_grid=(0.2, 0.35, 0.5, 0.65, 0.8, 0.95),
    delay_grid=DELAY_GRID_15,
    entries: int = 15,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Both valuation sweeps rerun under truly hyperbolic discounting.

    In the pve panel x is the payout delay and truth the discounted worth of
    (amount, x); distortions exaggerate the hyperbolicity already in the
    preference.  In the te panel x is the payment ratio and truth the delay
    solving d(t) = x; distortions dampen it.
    """
    curve = GCurve(kappa, gamma)
    model = GeneralizedHyperbolic(iota, zeta, period_days)
    disc = DiscountFunction(model)
    rows = []
    task = 0
    for t in pve_delays:
        anchor = PayoffFlow([(t, amount)])
        plist = build_adapted_list(PVE_KIND, anchor, entries)
        s = _switch_summary(anchor, plist, model, curve, draws, seed + task, threads)
        rows.append(("pve", t, s.mean, s.se, amount * float(disc(t)), s.excluded_mass))
        task += 1
    for ratio in ratio_grid:
        c = PayoffFlow([(0.0, ratio * amount)])
        plist = build_adapted_list(TE_KIND, c, len(delay_grid), stake=amount, delay_grid=delay_grid)
        s = _switch_summary(c, plist, model, curve, draws, seed + task, threads)
        true_delay = period_days * (ratio ** (-iota / zeta) - 1.0) / iota
        rows.append(("te", ratio, s.mean, s.se, true_delay, s.excluded_mass))
        task += 1
    return FigureResult(
        "hyperbolic-appendix",
        ("panel", "x", "mean", "se", "truth", "excluded_mass"),
        tuple(rows),
        dict(
            draws=draws,
            seed=seed,
            amount=amount,
            iota=iota,
            zeta=zeta,
            period_days=period_days,
            pve_delays=tuple(pve_delays),
            ratio_grid=tuple(ratio_grid),
            delay_grid=tuple(float(t) for t in delay_grid),
            entries=entries,
            kappa=kappa,
            gamma=gamma,
        ),
    )


def build_decoy_cases(
    *,
    draws: int = 100_000,
    seed: int = 0,
    threads: int = 1,
    kappa: float = 0.0,
    gamma: float = 0.5,
) -> FigureResult:
    """Context effects from a phantom third option.

    Base menu is x=(1,2) vs y=(2,1) with unit weights, so the pair is
    value-tied and maximally hard.  A decoy dominated by y alone or merely
    close to y tilts choice toward y; one dominated by both leaves the
    split at one half.
    """
    curve = GCurve(kappa, gamma)
    model = LinearAttributes((1.0, 1.0))
    x = AttributeVector((1.0, 2.0))
    y = AttributeVector((2.0, 1.0))
    cases = (
        ("dominated-by-target", (1.8, 0.8)),
        ("near-target", (1.5, 1.1)),
        ("dominated-by-both", (0.8, 0.5)),
    )
    rows = []
    for task, (name, z) in enumerate(cases):
        structure = build_structure([x, y, AttributeVector(z)], model, curve)
        probs = simulate_choice(
            structure, (0, 1), (2,), draws=draws, seed=seed + task, threads=threads
        )
        rho_y = float(probs[1])
        se = math.sqrt(rho_y * (1.0 - rho_y) / draws)
        rows.append((name, z[0], z[1], rho_y, se))
    return FigureResult(
        "decoy-cases",
        ("case", "z1", "z2", "rho_target", "se"),
        tuple(rows),
        dict(draws=draws, seed=seed, kappa=kappa, gamma=gamma),
    )


_BUILDERS: dict[str, Callable[..., FigureResult]] = {
    "ce-pe-reversal": build_ce_pe_reversal,
    "pve-te-reversal": build_pve_te_reversal,
    "pwf": build_pwf,
    "pwf-pe": build_pwf_pe,
    "discount-pve": build_discount_pve,
    "discount-te": build_discount_te,
    "hyperbolic-appendix": build_hyperbolic_appendix,
    "decoy-cases": build_decoy_cases,
}

FIGURE_IDS = tuple(_BUILDERS)


def build_figure(figure: str, **options) -> FigureResult:
    """Run one registered sweep; options override that figure's defaults."""
    try:
        builder = _BUILDERS[figure]
    except KeyError:
        known = ", ".join(FIGURE_IDS)
        raise ValueError(f"unknown figure id {figure!r}; expected one of: {known}") from None
    return builder(**options)
