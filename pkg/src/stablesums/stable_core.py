"""The alpha-stable limit law of normalized heavy-tailed partial sums.

The law is parametrized by its tail index ``alpha`` and the two Levy-tail
constants ``c_plus, c_minus``: the Levy measure of the limit puts mass
``c_plus * x**-alpha`` on ``(x, inf)`` and ``c_minus * x**-alpha`` on
``(-inf, -x]``.  This module provides the characteristic function in that
parametrization, the bridge to the conventional (sigma, beta, mu) stable
parametrization, Levy tail evaluation, and exact sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import TAG_STABLE, uniform_stream

DEFAULT_GRID = (-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class StableLimitParams:
    """Limit law triple (alpha, c_plus, c_minus).

    ``c_plus == c_minus == 0`` is legal and denotes the degenerate limit,
    a point mass at zero.
    """

    alpha: float
    c_plus: float
    c_minus: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in the open interval (0, 2), got {self.alpha}")
        if self.c_plus < 0.0 or self.c_minus < 0.0:
            raise ValueError("Levy tail constants c_plus, c_minus must be non-negative")

    @property
    def is_degenerate(self) -> bool:
        return self.c_plus + self.c_minus == 0.0


@dataclass(frozen=True)
class StandardStableParams:
    """Conventional stable parametrization (scale, skewness, location).

    Characteristic function, for alpha != 1:

        exp(-sigma**alpha |x|**alpha (1 - i beta sign(x) tan(pi alpha / 2)) + i mu x)

    and for alpha == 1:

        exp(-sigma |x| (1 + i beta (2/pi) sign(x) log|x|) + i mu x)
    """

    alpha: float
    sigma: float
    beta: float
    mu: float = 0.0


def chi(alpha: float, x: float, c_plus: float, c_minus: float) -> complex:
    """Characteristic exponent coefficient: cf(x) = exp(-|x|**alpha * chi).

    For ``alpha == 1`` the coefficient contains log|x| and is undefined at
    ``x == 0``; :func:`stable_cf` handles that point separately.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")
    if c_plus < 0.0 or c_minus < 0.0:
        raise ValueError("c_plus and c_minus must be non-negative")
    s = 0.0 if x == 0 else math.copysign(1.0, x)
    if alpha == 1.0:
        if x == 0:
            raise ValueError("chi(alpha=1, x=0) is undefined (log|x| term)")
        return 0.5 * math.pi * (c_plus + c_minus) + 1j * s * (c_plus - c_minus) * math.log(abs(x))
    k = math.gamma(2.0 - alpha) / (1.0 - alpha)
    half = 0.5 * math.pi * alpha
    return k * ((c_plus + c_minus) * math.cos(half) - 1j * s * (c_plus - c_minus) * math.sin(half))


def stable_cf(params: StableLimitParams, x) -> np.ndarray | complex:
    """Characteristic function exp(-|x|**alpha * chi(x)); exactly 1 at x = 0.

    Accepts a scalar or an array of evaluation points.
    """
    a = params.alpha
    cp, cm = params.c_plus, params.c_minus
    xs = np.asarray(x, dtype=float)
    ax = np.abs(xs)
    sg = np.sign(xs)
    if a == 1.0:
        # |x| * log|x| -> 0 as x -> 0, so the x = 0 limit of the cf is 1.
        with np.errstate(divide="ignore", invalid="ignore"):
            logax = np.where(ax > 0, np.log(np.where(ax > 0, ax, 1.0)), 0.0)
        expo = -ax * (0.5 * math.pi * (cp + cm)) - 1j * sg * ax * (cp - cm) * logax
    else:
        k = math.gamma(2.0 - a) / (1.0 - a)
        half = 0.5 * math.pi * a
        expo = -(ax ** a) * k * ((cp + cm) * math.cos(half) - 1j * sg * (cp - cm) * math.sin(half))
    out = np.exp(expo)
    out = np.where(ax == 0, 1.0 + 0.0j, out)
    return complex(out[()]) if out.ndim == 0 else out


def to_standard_params(params: StableLimitParams) -> StandardStableParams:
    """Match the limit-law cf against the conventional stable cf.

    The degenerate triple maps to sigma = 0 with beta = 0 by convention.
    For alpha != 1 the scale solves
    sigma**alpha = (c_plus + c_minus) * Gamma(2 - alpha) * cos(pi alpha/2) / (1 - alpha),
    which is positive on both sides of alpha = 1 (the two sign flips cancel
    for alpha in (1, 2)).
    """
    a = params.alpha
    total = params.c_plus + params.c_minus
    if total == 0.0:
        return StandardStableParams(a, 0.0, 0.0, 0.0)
    beta = (params.c_plus - params.c_minus) / total
    if a == 1.0:
        sigma = 0.5 * math.pi * total
    else:
        sig_a = total * math.gamma(2.0 - a) * math.cos(0.5 * math.pi * a) / (1.0 - a)
        sigma = sig_a ** (1.0 / a)
    return StandardStableParams(a, sigma, beta, 0.0)


def standard_stable_cf(sp: StandardStableParams, x) -> np.ndarray | complex:
    """Characteristic function in the conventional parametrization."""
    xs = np.asarray(x, dtype=float)
    ax = np.abs(xs)
    sg = np.sign(xs)
    if sp.sigma == 0.0:
        out = np.exp(1j * sp.mu * xs)
    elif sp.alpha == 1.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            logax = np.where(ax > 0, np.log(np.where(ax > 0, ax, 1.0)), 0.0)
        expo = -sp.sigma * ax * (1.0 + 1j * sp.beta * (2.0 / math.pi) * sg * logax) + 1j * sp.mu * xs
        out = np.exp(expo)
    else:
        t = math.tan(0.5 * math.pi * sp.alpha)
        expo = -(sp.sigma ** sp.alpha) * (ax ** sp.alpha) * (1.0 - 1j * sp.beta * sg * t) + 1j * sp.mu * xs
        out = np.exp(expo)
    return complex(out[()]) if out.ndim == 0 else out


def sample_stable(params: StableLimitParams, n: int, seed: int, *, start: int = 0) -> np.ndarray:
    """n exact draws from the limit law, deterministic per (seed, index).

    Chambers-Mallows-Stuck transform: draw i consumes exactly one uniform
    and one exponential variate taken from a counter-based stream, so
    ``sample_stable(p, n, s)`` equals the concatenation of any chunked
    fills ``sample_stable(p, k, s, start=j)`` covering ``0..n-1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if params.is_degenerate:
        return np.zeros(n)
    sp = to_standard_params(params)
    u = uniform_stream(seed, TAG_STABLE, start, n, width=2)
    if n == 0:
        return np.zeros(0)
    theta = math.pi * (u[:, 0] - 0.5)                      # Uniform(-pi/2, pi/2)
    w = -np.log1p(-u[:, 1])                                # Exp(1)
    w = np.fmax(w, np.finfo(float).tiny)                   # guard the 2^-53 event w == 0
    a, b = sp.alpha, sp.beta
    if a == 1.0:
        half_pi = 0.5 * math.pi
        f = half_pi + b * theta
        x = (f * np.tan(theta) - b * np.log(half_pi * w * np.cos(theta) / f)) / half_pi
        return sp.sigma * x + (2.0 / math.pi) * b * sp.sigma * math.log(sp.sigma)
    t = math.tan(0.5 * math.pi * a)
    b0 = math.atan(b * t) / a
    s0 = (1.0 + (b * t) ** 2) ** (1.0 / (2.0 * a))
    cos_theta = np.cos(theta)
    x = s0 * np.sin(a * (theta + b0)) / cos_theta ** (1.0 / a) \
        * (np.cos(theta - a * (theta + b0)) / w) ** ((1.0 - a) / a)
    return sp.sigma * x


def levy_tail(params: StableLimitParams, x) -> tuple:
    """Levy measure of (x, inf) and (-inf, -x]: (c_plus, c_minus) * x**-alpha."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0.0):
        raise ValueError("levy_tail requires x > 0")
    right = params.c_plus * xs ** (-params.alpha)
    left = params.c_minus * xs ** (-params.alpha)
    if xs.ndim == 0:
        return float(right), float(left)
    return right, left
