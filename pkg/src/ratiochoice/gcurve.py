"""The response curve mapping signed comparison ratios to choice probabilities.

``GCurve`` is the (kappa, gamma, psi) family used throughout the package:
kappa is the tremble floor at fully-obvious comparisons, gamma bends the
curve between the center and the endpoints, and psi steepens the
three-parameter variant through a power-mean divisor (psi=1 recovers the
two-parameter form).  Identities enforced by construction:

    G(0) = 1/2,  G(1) = 1 - kappa,  G(-1) = kappa,  G(r) + G(-r) = 1.

The induced signal precision is ``tau = norm_ppf(G(r))**2`` for r in [0, 1];
at G(r) = 1 the pair is perfectly comparable and the ranking is simply
revealed, which the sentinel ``PERFECTLY_COMPARABLE`` encodes (downstream
posteriors treat it as a hard ordering constraint, never as a large number).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, ndtr

__all__ = [
    "GCurve",
    "PerfectlyComparable",
    "PERFECTLY_COMPARABLE",
    "is_perfectly_comparable",
    "norm_ppf",
    "norm_cdf",
    "g_eval",
    "tau_from_ratio",
    "precision_profile",
]

_RATIO_SLACK = 1e-12

# Rational-approximation coefficients for the normal quantile (Acklam's
# minimax fit), refined below by one Halley step against erfc.
_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_P_LOW = 0.02425


def _acklam(p: np.ndarray) -> np.ndarray:
    x = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)

    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        num = ((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        x[mid] = num * q / den
    for mask, sign in ((lo, 1.0), (hi, -1.0)):
        if np.any(mask):
            pp = p[mask] if sign > 0 else 1.0 - p[mask]
            q = np.sqrt(-2.0 * np.log(pp))
            num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
            den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
            x[mask] = sign * num / den
    return x


_SQRT2 = np.sqrt(2.0)
_SQRT_2PI = np.sqrt(2.0 * np.pi)


def norm_ppf(p):
    """Inverse standard-normal CDF.

    Acklam's rational approximation (raw accuracy ~1.15e-9 relative) followed
    by one Halley refinement step against the erfc-based CDF.  The argument
    is reflected into the lower tail first, where the complement 1-p is exact
    and erfc keeps full relative precision, so the refinement is effective at
    both ends.  Measured against 64-bit reference quantiles: relative error
    below 2e-15 for min(p, 1-p) >= 1e-280 (a few ulps, the reference's own
    noise floor), below 1.2e-9 (the unrefined approximation) in the extreme
    tail beyond, and absolute error below 1e-16 near p = 1/2.  Accepts
    scalars or arrays; p must lie strictly inside (0, 1).
    """
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ValueError("norm_ppf requires p strictly inside (0, 1)")
    q = np.minimum(arr, 1.0 - arr)
    x = _acklam(q)
    # Halley step: e is the CDF error at x, u the Newton correction.  Skip it
    # where exp(x^2/2) would overflow or erfc underflows (|x| beyond ~36).
    safe = q > 1e-280
    if np.any(safe):
        xs = x[safe]
        e = 0.5 * erfc(-xs / _SQRT2) - q[safe]
        u = e * _SQRT_2PI * np.exp(xs * xs / 2.0)
        x[safe] = xs - u / (1.0 + xs * u / 2.0)
    out = np.where(arr > 0.5, -x, x)
    return float(out[0]) if np.asarray(p).ndim == 0 else out


def norm_cdf(x):
    """Standard normal CDF (scalar or array)."""
    out = ndtr(np.asarray(x, dtype=float))
    return float(out) if np.asarray(x).ndim == 0 else out


class PerfectlyComparable:
    """Sentinel precision for pairs whose ranking the signal always reveals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PerfectlyComparable"


PERFECTLY_COMPARABLE = PerfectlyComparable()


def is_perfectly_comparable(tau) -> bool:
    return isinstance(tau, PerfectlyComparable)


@dataclass(frozen=True)
class GCurve:
    """Response-curve parameters (tremble kappa, curvature gamma, steepness psi).

    kappa in [0, 0.5), gamma > 0, psi > 0; psi=1 selects the two-parameter
    form.  Construction checks strict monotonicity on a fixed grid so every
    instance is an admissible curve.
    """

    kappa: float
    gamma: float
    psi: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.kappa < 0.5:
            raise ValueError("kappa must lie in [0, 0.5)")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.psi > 0:
            raise ValueError("psi must be positive")
        grid = np.linspace(-1.0, 1.0, 129)
        vals = g_eval(grid, self)
        if not np.all(np.diff(vals) > 0):
            raise ValueError("curve parameters do not give a strictly increasing curve")

    def __call__(self, r):
        return g_eval(r, self)


LINEAR_CURVE_PARAMS = dict(kappa=0.0, gamma=1.0, psi=1.0)


def g_eval(r, curve: GCurve):
    """Choice probability G(r) for signed ratio r in [-1, 1].

    Evaluated on |r| and reflected through G(r) = 1 - G(-r), which makes the
    symmetry identity exact by construction for all psi.
    """
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(np.abs(arr) > 1.0 + _RATIO_SLACK):
        raise ValueError("ratio outside [-1, 1]")
    arr = np.clip(arr, -1.0, 1.0)
    a = np.abs(arr)
    shrink = (1.0 - a) ** curve.gamma
    if curve.psi != 1.0:
        shrink = shrink / (a**curve.psi + (1.0 - a) ** curve.psi) ** (1.0 / curve.psi)
    upper = (1.0 - curve.kappa) - (0.5 - curve.kappa) * shrink
    out = np.where(arr >= 0.0, upper, 1.0 - upper)
    return float(out[0]) if np.asarray(r).ndim == 0 else out


def tau_from_ratio(r: float, curve: GCurve):
    """Signal precision induced by an unsigned ratio: (norm_ppf(G(r)))**2.

    Returns the ``PERFECTLY_COMPARABLE`` sentinel when G(r) = 1 (kappa = 0
    at r = 1); returns exactly 0.0 when G(r) = 1/2.
    """
    if r < 0:
        raise ValueError("precision is defined for unsigned ratios r >= 0")
    g = g_eval(float(r), curve)
    if g >= 1.0:
        return PERFECTLY_COMPARABLE
    if g == 0.5:
        return 0.0
    z = norm_ppf(g)
    return float(z * z)


def precision_profile(ratios, curve: GCurve):
    """Vectorized precision map: returns (tau array, perfectly-comparable mask).

    tau is 0.0 at masked entries; callers must treat masked pairs as hard
    ordering constraints.
    """
    a = np.asarray(ratios, dtype=float)
    if np.any(a < 0):
        raise ValueError("precision is defined for unsigned ratios r >= 0")
    g = np.atleast_1d(g_eval(a, curve))
    pc = g >= 1.0
    tau = np.zeros_like(g)
    interior = ~pc & (g != 0.5)
    if np.any(interior):
        z = norm_ppf(g[interior])
        tau[interior] = np.asarray(z) ** 2
    return tau.reshape(a.shape), pc.reshape(a.shape)
