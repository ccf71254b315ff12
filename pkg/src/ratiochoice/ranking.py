"""Posterior ranking beliefs from noisy pairwise comparisons, and menu choice.

The decision maker sees one ordinal signal per option pair,

    s_ij = sgn(v_i - v_j) + eps_ij / sqrt(tau_ij),   eps_ij ~ N(0, 1),

and ranks options by posterior expected value given all signals at once.
With a symmetric prior, the posterior over full rankings has a closed form:
log-weights are sums of tau_ij * s_ij * sgn-of-hypothesized-order, every
signal-independent constant cancelling.  Perfectly comparable pairs enter as
hard ordering constraints, never as large finite precisions.

Enumeration over rankings is capped at 8 options; price lists avoid the cap
through the linear-time insertion posterior in :mod:`ratiochoice.pricelists`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Optional, Sequence

import numpy as np

from .gcurve import PERFECTLY_COMPARABLE, is_perfectly_comparable, tau_from_ratio
from .metrics import signed_ratio
from .preferences import UtilityModel, value
from .rng import accumulate_blocks

__all__ = [
    "MAX_ENUMERATED_OPTIONS",
    "ComparisonStructure",
    "build_structure",
    "PriorSpec",
    "order_stat_means",
    "ranking_posterior",
    "rank_marginals",
    "simulate_choice",
]

MAX_ENUMERATED_OPTIONS = 8
_TIE_EPS = 0.0  # posterior-mean ties are broken only on exact float equality


class ComparisonStructure:
    """True values plus the pairwise precision assignment.

    ``tau`` entries may be nonnegative floats or ``PERFECTLY_COMPARABLE``;
    the matrix must be symmetric and the diagonal is ignored.  A perfectly
    comparable pair must have distinct true values (a revealed ranking
    between equal values is contradictory; equal-value pairs carry tau = 0).
    """

    def __init__(self, values: Sequence[float], tau: Sequence[Sequence]):
        vals = tuple(float(v) for v in values)
        if not all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        n = len(vals)
        tau_mat = np.zeros((n, n))
        pc = np.zeros((n, n), dtype=bool)
        rows = list(tau)
        if len(rows) != n or any(len(list(r)) != n for r in rows):
            raise ValueError("tau must be an NxN matrix")
        for i, row in enumerate(rows):
            for j, t in enumerate(row):
                if i == j:
                    continue
                if is_perfectly_comparable(t):
                    pc[i, j] = True
                else:
                    t = float(t)
                    if not (np.isfinite(t) and t >= 0):
                        raise ValueError("precisions must be nonnegative")
                    tau_mat[i, j] = t
        if not (np.array_equal(pc, pc.T) and np.allclose(tau_mat, tau_mat.T, rtol=0, atol=0)):
            raise ValueError("tau must be symmetric")
        for i, j in zip(*np.nonzero(pc)):
            if vals[i] == vals[j]:
                raise ValueError("perfectly comparable pair has equal values")
        self.values = vals
        self._tau = tau_mat
        self._pc = pc

    @property
    def n(self) -> int:
        return len(self.values)

    def tau_matrix(self) -> np.ndarray:
        return self._tau.copy()

    def pc_mask(self) -> np.ndarray:
        return self._pc.copy()

    def tau_entry(self, i: int, j: int):
        return PERFECTLY_COMPARABLE if self._pc[i, j] else float(self._tau[i, j])

    def subset(self, idx: Sequence[int]) -> "ComparisonStructure":
        idx = list(idx)
        sub = ComparisonStructure.__new__(ComparisonStructure)
        sub.values = tuple(self.values[i] for i in idx)
        sub._tau = self._tau[np.ix_(idx, idx)]
        sub._pc = self._pc[np.ix_(idx, idx)]
        return sub


def build_structure(options: Sequence, model: UtilityModel, curve) -> ComparisonStructure:
    """Comparison structure for a set of options: tau_ij from the domain ratio."""
    n = len(options)
    vals = [value(o, model) for o in options]
    tau: list[list] = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            r = signed_ratio(options[i], options[j], model).value
            t = tau_from_ratio(abs(r), curve)
            tau[i][j] = tau[j][i] = t
    return ComparisonStructure(vals, tau)


@dataclass(frozen=True)
class PriorSpec:
    """Prior over true values, iid across options.

    The default uniform prior has closed-form rank means; any other prior is
    supplied as a sampler and its rank-mean table is computed once by seeded
    Monte Carlo.
    """

    distribution: str = "uniform01"
    sample: Optional[Callable[[np.random.Generator, int], np.ndarray]] = None
    mc_draws: int = 200_000
    seed: int = 19_031_067
    mean: float = 0.5


def order_stat_means(n: int, prior: PriorSpec = PriorSpec()) -> np.ndarray:
    """Expected value of the rank-k best of n iid draws, for k = 1..n.

    Uniform prior: (n + 1 - k) / (n + 1) exactly.  Other priors: seeded MC
    over ``prior.mc_draws`` sorted samples.  The table is strictly decreasing.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if prior.distribution == "uniform01" and prior.sample is None:
        return (n - np.arange(n, dtype=float)) / (n + 1)
    if prior.sample is None:
        raise ValueError(f"prior {prior.distribution!r} needs a sampler")
    from .rng import substream

    rng = substream(prior.seed, 77, n)
    draws = np.asarray(prior.sample(rng, prior.mc_draws * n), dtype=float).reshape(
        prior.mc_draws, n
    )
    table = np.sort(draws, axis=1)[:, ::-1].mean(axis=0)
    if not np.all(np.diff(table) < 0):
        raise ValueError("rank-mean table is not strictly decreasing; raise mc_draws")
    return table


def _pair_index(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _consistent_orderings(structure: ComparisonStructure) -> list[tuple[int, ...]]:
    """All rankings (best first) respecting the perfectly-comparable pairs."""
    n = structure.n
    if n > MAX_ENUMERATED_OPTIONS:
        raise ValueError(f"ranking enumeration capped at {MAX_ENUMERATED_OPTIONS} options")
    pc = structure.pc_mask()
    vals = structure.values
    out = []
    for order in permutations(range(n)):
        rank = [0] * n
        for pos, i in enumerate(order):
            rank[i] = pos
        ok = True
        for i, j in zip(*np.nonzero(np.triu(pc))):
            if (rank[i] < rank[j]) != (vals[i] > vals[j]):
                ok = False
                break
        if ok:
            out.append(order)
    if not out:
        raise RuntimeError("comparability constraints excluded every ranking")
    return out


def _sigma_matrix(orderings: list[tuple[int, ...]], pairs: list[tuple[int, int]]) -> np.ndarray:
    """Entry [p, m] = +1 if ordering m places pair p's first option higher."""
    n = len(orderings[0])
    ranks = np.empty((len(orderings), n), dtype=np.int64)
    for m, order in enumerate(orderings):
        for pos, i in enumerate(order):
            ranks[m, i] = pos
    sig = np.empty((len(pairs), len(orderings)))
    for p, (i, j) in enumerate(pairs):
        sig[p] = np.where(ranks[:, i] < ranks[:, j], 1.0, -1.0)
    return sig


def ranking_posterior(structure: ComparisonStructure, signals) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Posterior over full rankings given one signal matrix.

    ``signals`` is an NxN matrix with s_ij = -s_ji; entries at zero-precision
    or perfectly comparable pairs are ignored.  Returns (orderings, probs)
    with orderings listed best-option-first.
    """
    s = np.asarray(signals, dtype=float)
    n = structure.n
    if s.shape != (n, n):
        raise ValueError("signal matrix shape mismatch")
    orderings = _consistent_orderings(structure)
    pairs = _pair_index(n)
    tau = structure.tau_matrix()
    weights = np.array([tau[i, j] * s[i, j] for i, j in pairs])
    logw = weights @ _sigma_matrix(orderings, pairs)
    logw -= logw.max()
    probs = np.exp(logw)
    probs /= probs.sum()
    return orderings, probs


def rank_marginals(structure: ComparisonStructure, signals) -> np.ndarray:
    """Matrix M[i, k] = posterior probability that option i is ranked k-th best."""
    orderings, probs = ranking_posterior(structure, signals)
    n = structure.n
    out = np.zeros((n, n))
    for order, p in zip(orderings, probs):
        for pos, i in enumerate(order):
            out[i, pos] += p
    return out


def simulate_choice(
    structure: ComparisonStructure,
    menu: Sequence[int],
    context: Sequence[int] = (),
    draws: int = 100_000,
    seed: int = 0,
    prior: PriorSpec = PriorSpec(),
    threads: int = 1,
) -> np.ndarray:
    """Monte Carlo choice probabilities over ``menu`` given phantom ``context``.

    Each draw realizes all pairwise signals among menu + context options,
    forms posterior expected values, and picks the menu option with the
    largest; exact posterior ties are split uniformly at random.  Context
    options shape beliefs but cannot be chosen.  Deterministic in
    (seed, draws) for any thread count.
    """
    menu = list(menu)
    context = list(context)
    if not menu:
        raise ValueError("menu is empty")
    if set(menu) & set(context):
        raise ValueError("menu and context must be disjoint")
    idx = menu + context
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate option indices")
    sub = structure.subset(idx)
    n = sub.n
    if n > MAX_ENUMERATED_OPTIONS:
        raise ValueError(f"menus capped at {MAX_ENUMERATED_OPTIONS} options including context")

    orderings = _consistent_orderings(sub)
    pairs = _pair_index(n)
    sigma_t = _sigma_matrix(orderings, pairs).T  # orderings x pairs
    tau = sub.tau_matrix()
    vals = np.asarray(sub.values)
    pair_tau = np.array([tau[i, j] for i, j in pairs])
    pair_sgn = np.array([np.sign(vals[i] - vals[j]) for i, j in pairs])
    noisy = pair_tau > 0
    rank_v = order_stat_means(n, prior)
    # value table per ordering: column i holds E[v_i | ordering]
    v_table = np.empty((len(orderings), n))
    for m, order in enumerate(orderings):
        for pos, i in enumerate(order):
            v_table[m, i] = rank_v[pos]
    n_menu = len(menu)

    # keep the per-draw ordering-probability block under ~32 MB
    block = max(1, min(1 << 14, (1 << 22) // max(1, len(orderings))))

    def body(rng: np.random.Generator, m: int) -> list[np.ndarray]:
        # signal log-weights: a_p = tau * s = tau * sgn + sqrt(tau) * eps
        a = np.broadcast_to(pair_tau * pair_sgn, (m, len(pairs))).copy()
        if noisy.any():
            eps = rng.standard_normal((m, int(noisy.sum())))
            a[:, noisy] += np.sqrt(pair_tau[noisy]) * eps
        coins = rng.random((m, n_menu))
        logw = a @ sigma_t.T
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        w /= w.sum(axis=1, keepdims=True)
        post_means = w @ v_table[:, :n_menu]  # menu options occupy the first columns
        top = post_means.max(axis=1, keepdims=True)
        score = np.where(post_means == top, coins, -1.0)
        picks = score.argmax(axis=1)
        return [np.bincount(picks, minlength=n_menu).astype(float)]

    (counts,) = accumulate_blocks(body, draws, seed, stream_ids=(11,), block_size=block, threads=threads)
    return counts / draws
