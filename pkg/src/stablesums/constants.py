"""Theory-side limit constants for the built-in model families.

Computes the tail index of stochastic recurrence models (the positive root
of E A^kappa = 1), the tail level of their stationary law, and the Levy
constants c_plus / c_minus of the stable limit of partial sums: via the
T_infinity series for SRE and GARCH, via tail balance for stochastic
volatility, and in closed form for stable moving averages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from ._rng import TAG_CONST, batch_rng, combine_mean, map_batches
from .models import _garch_coefficient_dist, _ma_weights

_CHUNK = 1 << 22
_CRN_SEED = 0x5EED  # fixed seed for auxiliary moment estimates


class TruncationError(ValueError):
    """Raised when the analytic truncation bound exceeds the requested tolerance."""


@dataclass
class TInfinityEstimate:
    """Monte Carlo estimate of a T_infinity functional.

    ``truncation_bound`` is an analytic bound on the contribution of the
    discarded series tail, computed from geometric moment decay (E A^kappa)^t
    for a kappa below the tail index; it is computed, never assumed.
    """

    mean_functional: float
    se: float
    truncation: int
    truncation_bound: float

    @property
    def value(self) -> float:
        return self.mean_functional


@dataclass
class KestenResult:
    alpha: float
    residual: float
    se: float
    method: str
    evaluations: list = field(default_factory=list)  # (kappa, g_hat) diagnostic grid


@dataclass
class GoldieC0Result:
    c0: float
    se: float
    numerator: float
    numerator_se: float
    denominator: float
    denominator_se: float

    def __iter__(self):  # unpack as (c0, se)
        return iter((self.c0, self.se))


def _crn_log_draws(dist, mc_draws: int, seed: int) -> np.ndarray:
    a = dist.sample(batch_rng(seed, TAG_CONST, 0), mc_draws)
    if np.any(a < 0):
        raise ValueError("coefficient distribution produced negative draws")
    if np.all(a == 0):
        raise ValueError("coefficient distribution is identically zero")
    with np.errstate(divide="ignore"):
        return np.log(a)


def _moment(dist, kappa: float, mc_draws: int = 200_000) -> float:
    """E A^kappa: closed form when the law provides one, else fixed-seed MC."""
    exact = dist.exact_moment(kappa)
    if exact is not None:
        return float(exact)
    la = _crn_log_draws(dist, mc_draws, _CRN_SEED)
    finite = la[np.isfinite(la)]  # atoms at zero contribute 0 to E A^kappa
    return float(math.exp(logsumexp(kappa * finite) - math.log(la.size)))


def kesten_index(dist_a, mc_draws: int = 1_000_000, tolerance: float = 1e-8, *,
                 seed: int = 0, method: str = "auto") -> KestenResult:
    """Solve E A^kappa = 1 for the positive tail index.

    ``method="auto"`` prefers closed forms (lognormal: -2 mu / sigma^2, or a
    deterministic root of an exact moment function); ``method="mc"`` forces
    the Monte Carlo path.  The MC path evaluates g(kappa) = mean(A_i^kappa)
    on one fixed set of draws (common random numbers), which makes g exactly
    convex and smooth in kappa, so the root find is deterministic.
    """
    if method not in ("auto", "mc", "exact"):
        raise ValueError("method must be 'auto', 'mc' or 'exact'")

    if method != "mc":
        exact_root = dist_a.kesten_exact()
        if exact_root is not None:
            g = dist_a.exact_moment(exact_root)
            return KestenResult(float(exact_root), abs(g - 1.0) if g is not None else 0.0,
                                0.0, "closed_form")
        if dist_a.exact_moment(0.5) is not None and dist_a.exact_moment(1.5) is not None:
            res = _root_on(lambda k: math.log(dist_a.exact_moment(k)), tolerance=1e-12)
            if res is not None:
                root, evals = res
                return KestenResult(root, abs(dist_a.exact_moment(root) - 1.0),
                                    0.0, "exact_moment", evals)
        if method == "exact":
            raise ValueError("no closed-form moment function available for this law")

    la = _crn_log_draws(dist_a, mc_draws, seed)
    n_all = la.size
    la = la[np.isfinite(la)]  # atoms at zero only lower g; they cannot create a root

    def g_log(kappa: float) -> float:
        return float(logsumexp(kappa * la) - math.log(n_all))

    res = _root_on(g_log, tolerance=tolerance)
    if res is None:
        grid = [(k, math.exp(g_log(k))) for k in (0.125, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0)]
        raise ValueError(
            "no root of E A^kappa = 1 found in (0, 64]; g is convex with g(0) = 1, "
            f"so either E log A >= 0 or g stays below 1 (diagnostic grid: {grid})"
        )
    root, evals = res
    ghat = math.exp(g_log(root))
    m2 = math.exp(float(logsumexp(2.0 * root * la) - math.log(n_all)))
    se = math.sqrt(max(m2 - ghat * ghat, 0.0) / n_all)
    return KestenResult(root, abs(ghat - 1.0), se, "mc", evals)


def _root_on(g_log, tolerance: float):
    """Root of g_log(kappa) = 0 on the increasing branch; None if no bracket."""
    grid = [2.0 ** e for e in range(-6, 7)]
    vals = [(k, g_log(k)) for k in grid]
    hi = next((k for k, v in vals if v > 0), None)
    if hi is None:
        return None
    lows = [k for k, v in vals if v <= 0 and k < hi]
    lo = max(lows) if lows else hi / 2.0
    while g_log(lo) > 0 and lo > 1e-12:
        lo /= 2.0
    if g_log(lo) > 0:
        return None
    root = brentq(g_log, lo, hi, xtol=tolerance)
    return float(root), vals


def goldie_c0(dist_a, dist_b, alpha: float, mc_draws: int = 1_000_000,
              burn_in: int = 10_000, seed: int = 0, threads: int = 1) -> GoldieC0Result:
    """Tail level c0 with P(X > x) ~ c0 x^-alpha for the SRE stationary law.

    c0 = E[(B + A X0)^alpha - (A X0)^alpha] / (alpha E[A^alpha log A]),
    with stationary X0 drawn by warmed-up simulation and an independent
    (A, B) pair attached to each draw.  Standard errors are propagated by
    the delta method; a denominator indistinguishable from zero is an error.
    """
    from .models import Sre

    model = Sre(dist_a, dist_b, burn_in=burn_in)
    x0 = model.marginal(mc_draws, seed, threads=threads, absolute=False)

    def worker_num(b, lo, hi):
        rng = batch_rng(seed, TAG_CONST, 1000 + b)
        a = dist_a.sample(rng, hi - lo)
        bb = dist_b.sample(rng, hi - lo)
        ax = a * x0[lo:hi]
        f = (bb + ax) ** alpha - ax ** alpha
        return float(f.sum()), float((f * f).sum()), f.size

    num, num_se, _ = combine_mean(map_batches(worker_num, mc_draws, threads))

    def worker_den(b, lo, hi):
        rng = batch_rng(seed, TAG_CONST, 2000 + b)
        a = dist_a.sample(rng, hi - lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            f = np.where(a > 0, a ** alpha * np.log(np.where(a > 0, a, 1.0)), 0.0)
        return float(f.sum()), float((f * f).sum()), f.size

    den, den_se, _ = combine_mean(map_batches(worker_den, mc_draws, threads))
    den *= alpha
    den_se *= alpha
    if abs(den) <= 3.0 * den_se:
        raise ValueError(
            f"E[A^alpha log A] is indistinguishable from zero ({den/alpha:.3g} "
            f"+- {den_se/alpha:.3g}); the tail constant is not identified"
        )
    c0 = num / den
    se = math.sqrt(num_se ** 2 / den ** 2 + (num * den_se) ** 2 / den ** 4)
    return GoldieC0Result(c0, se, num, num_se, den, den_se)


def _geom_sum_from(rho: float, n_from: int) -> float:
    """sum_{t >= n_from} rho^t for rho in (0, 1)."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"geometric rate must lie in (0, 1), got {rho}")
    return rho ** n_from / (1.0 - rho)


def _pick_truncation(bound_fn, truncation, tolerance) -> tuple[int, float]:
    if truncation is None:
        n = 8
        while bound_fn(n) > (tolerance if tolerance is not None else 1e-4) and n < 4096:
            n *= 2
        n = min(n, 4096)
    else:
        n = int(truncation)
    bound = bound_fn(n)
    if tolerance is not None and bound > tolerance:
        raise TruncationError(
            f"truncation bound {bound:.3g} at cutoff {n} exceeds tolerance {tolerance:.3g}"
        )
    return n, bound


def c_plus_sre(dist_a, alpha: float, mc_draws: int = 1_000_000, truncation: int | None = None,
               *, seed: int = 0, tolerance: float | None = 1e-4,
               threads: int = 1) -> TInfinityEstimate:
    """c_plus = E[(1 + T)^alpha - T^alpha] for T = sum of products of the A's.

    The functional is bounded by 1 for alpha <= 1 (concavity) and by
    alpha (T^(alpha-1) + 1) for alpha > 1, so plain Monte Carlo averaging
    applies.  Truncating the series at N leaves an error bounded by
    E (T_inf - T_N)^kappa <= sum_{t>N} (E A^kappa)^t for kappa <= min(alpha, 1)
    (subadditivity), and for alpha > 1 by alpha E(T_inf - T_N) with
    E A^1 < 1 by convexity.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    if alpha <= 1.0:
        kappa = 0.9 * alpha
        c_dom = 1.0
    else:
        kappa = 1.0
        c_dom = alpha
    rho = _moment(dist_a, kappa)

    def bound_fn(n):
        return c_dom * _geom_sum_from(rho, n + 1)

    n_trunc, bound = _pick_truncation(bound_fn, truncation, tolerance)

    def worker(b, lo, hi):
        rng = batch_rng(seed, TAG_CONST, 3000 + b)
        m = hi - lo
        t = np.zeros(m)
        carry = np.ones(m)
        step = max(1, _CHUNK // max(m, 1))
        for j0 in range(0, n_trunc, step):
            cols = min(step, n_trunc - j0)
            piece = carry[:, None] * np.cumprod(dist_a.sample(rng, (m, cols)), axis=1)
            t += piece.sum(axis=1)
            carry = piece[:, -1].copy()
        f = (1.0 + t) ** alpha - t ** alpha
        return float(f.sum()), float((f * f).sum()), f.size

    mean, se, _ = combine_mean(map_batches(worker, mc_draws, threads))
    return TInfinityEstimate(mean, se, n_trunc, bound)


def _noise_abs_moment(noise, r: float, seed: int = _CRN_SEED) -> float:
    m = noise.abs_moment(r)
    if m is not None:
        return float(m)
    z = noise.draw(batch_rng(seed, TAG_CONST, 4), 200_000)
    return float(np.mean(np.abs(z) ** r))


def c_plus_garch_sq(alpha0: float, alpha1: float, beta1: float, noise, alpha: float,
                    mc_draws: int = 1_000_000, truncation: int | None = None, *,
                    seed: int = 0, tolerance: float | None = 1e-4,
                    threads: int = 1) -> TInfinityEstimate:
    """c_plus for sums of squared GARCH(1,1) values:
    E[(Z0^2 + T)^alpha - T^alpha] / E|Z|^(2 alpha) with
    T = sum_t Z_{t+1}^2 prod_{i<=t} (alpha1 Z_i^2 + beta1).
    """
    if alpha0 <= 0 or alpha1 < 0 or not 0.0 <= beta1 < 1.0:
        raise ValueError("invalid GARCH coefficients")
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    a_dist = _garch_coefficient_dist(alpha1, beta1, noise)
    den = _noise_abs_moment(noise, 2.0 * alpha)

    if alpha <= 1.0:
        kappa = 0.9 * alpha
        rho = _moment(a_dist, kappa)
        z2k = _noise_abs_moment(noise, 2.0 * kappa)
        # |delta| <= 2 min(R,1)^kappa + Z0^(2 alpha) 1{R>1}; E R^kappa geometric
        def bound_fn(n):
            return (2.0 + den) * z2k * _geom_sum_from(rho, n + 1) / den
    else:
        rho = _moment(a_dist, 1.0)
        z2am1 = _noise_abs_moment(noise, 2.0 * (alpha - 1.0))
        ez2 = _noise_abs_moment(noise, 2.0)
        # mean value theorem: |delta| <= alpha Z0^(2(alpha-1)) R, E R = E Z^2 sum (E A)^t
        def bound_fn(n):
            return alpha * z2am1 * ez2 * _geom_sum_from(rho, n + 1) / den

    n_trunc, bound = _pick_truncation(bound_fn, truncation, tolerance)

    def worker(b, lo, hi):
        # The added Z^2 seeds the product chain: T = sum_t Z_{t+1}^2 Pi_t with
        # Pi_t = prod_{i<=t} (alpha1 Z_i^2 + beta1) and the numerator couples
        # (Z_1^2 + T).  Factoring A_1 out of T_{d+1} forces this coupling; it
        # also makes beta1 = 0 reduce exactly to the squared-ARCH recursion
        # constant.  A fresh independent Z would give a different (wrong) value.
        rng = batch_rng(seed, TAG_CONST, 5000 + b)
        m = hi - lo
        t = np.zeros(m)
        pi = np.ones(m)
        z_seed = noise.draw(rng, m)
        z_chain = z_seed
        for _ in range(n_trunc):
            z_next = noise.draw(rng, m)
            pi = pi * (alpha1 * z_chain * z_chain + beta1)
            t += z_next * z_next * pi
            z_chain = z_next
        f = (z_seed * z_seed + t) ** alpha - t ** alpha
        return float(f.sum()), float((f * f).sum()), f.size

    mean, se, _ = combine_mean(map_batches(worker, mc_draws, threads))
    return TInfinityEstimate(mean / den, se / den, n_trunc, bound)


def c_plus_garch(alpha0: float, alpha1: float, beta1: float, noise, alpha: float,
                 mc_draws: int = 1_000_000, truncation: int | None = None, *,
                 seed: int = 0, tolerance: float | None = 1e-4,
                 threads: int = 1) -> TInfinityEstimate:
    """c_plus (= c_minus) for sums of GARCH(1,1) returns with symmetric noise:

    E[|Z0 + (alpha1 Z0^2 + beta1)^0.5 T|^(2a) - |(alpha1 Z0^2 + beta1)^0.5 T|^(2a)]
    / (2 E|Z|^(2a)),  T = sum_t Z_t prod_{i<t} (alpha1 Z_i^2 + beta1)^0.5,

    where a is the tail index of the squared process (so the returns have
    tail index 2a, required to lie in (0, 2)).
    """
    if alpha0 <= 0 or alpha1 < 0 or not 0.0 <= beta1 < 1.0:
        raise ValueError("invalid GARCH coefficients")
    p = 2.0 * alpha
    if not 0.0 < p < 2.0:
        raise ValueError("the returns tail index 2*alpha must lie in (0, 2)")
    if not noise.is_symmetric:
        raise ValueError("this constant requires symmetric noise")
    a_dist = _garch_coefficient_dist(alpha1, beta1, noise)
    den = 2.0 * _noise_abs_moment(noise, p)

    # |R| <= sum_{t>N} |Z_t| Pi_{t-1}^(1/2): E|R|^k <= E|Z|^k sum (E A^(k/2))^(t-1)
    def r_moment(k: float, n: int) -> float:
        rho = _moment(a_dist, 0.5 * k)
        return _noise_abs_moment(noise, k) * _geom_sum_from(rho, n)

    if p <= 1.0:
        kappa = 0.9 * p
        # ||x|^p - |y|^p| <= |x - y|^p gives |delta| <= 2 a0^p |R|^p, and |delta| <= 2|Z0|^p
        def bound_fn(n):
            return 2.0 * (1.0 + 0.5 * den) * r_moment(kappa, n) / den
    else:
        # p in (1, 2): mean-value + subadditivity + independence of the series tail;
        # split at |R| <= 1 with exponents k2 in [p-1, 1]
        k2 = max(p - 1.0, 0.9)
        ez1 = _noise_abs_moment(noise, 1.0)
        ezp = _noise_abs_moment(noise, p)
        ezpm1 = _noise_abs_moment(noise, p - 1.0)
        rho_half = _moment(a_dist, 0.5)
        t_bar = ez1 / (1.0 - rho_half)      # E sum |Z_t| Pi^(1/2) over the full series
        rng = batch_rng(_CRN_SEED, TAG_CONST, 5)
        z = noise.draw(rng, 200_000)
        a_half = np.sqrt(alpha1 * z * z + beta1)
        e_a_zp1 = float(np.mean(a_half * np.abs(z) ** (p - 1.0)))
        e_a_p = float(np.mean(a_half ** p))

        def bound_fn(n):
            m_r1 = r_moment(min(1.0, k2), n)
            m_rk = r_moment(k2, n)
            lipschitz = 2.0 * p * (e_a_zp1 + e_a_p * (1.0 + t_bar) ** (p - 1.0)) * m_r1
            big_r = 2.0 * p * (ezp + ezpm1 * (t_bar ** (p - 1.0) + 1.0)) * m_rk
            return (lipschitz + big_r) / den

    n_trunc, bound = _pick_truncation(bound_fn, truncation, tolerance)

    def worker(b, lo, hi):
        rng = batch_rng(seed, TAG_CONST, 6000 + b)
        m = hi - lo
        t = np.zeros(m)
        pi_half = np.ones(m)
        for _ in range(n_trunc):
            z_t = noise.draw(rng, m)
            t += z_t * pi_half
            pi_half = pi_half * np.sqrt(alpha1 * z_t * z_t + beta1)
        z0 = noise.draw(rng, m)
        a0t = np.sqrt(alpha1 * z0 * z0 + beta1) * t
        f = np.abs(z0 + a0t) ** p - np.abs(a0t) ** p
        return float(f.sum()), float((f * f).sum()), f.size

    mean, se, _ = combine_mean(map_batches(worker, mc_draws, threads))
    return TInfinityEstimate(mean / den, se / den, n_trunc, bound)


def c_sv(noise) -> tuple[float, float]:
    """Stable-limit constants of the stochastic volatility model: the noise
    law's own tail balance (c_plus, c_minus) = (p, q)."""
    idx = noise.tail_index()
    if idx is None or not 0.0 < idx < 2.0:
        raise ValueError("stochastic volatility constants need regularly varying noise")
    balance = noise.tail_balance()
    if balance is None:
        raise ValueError("noise law does not expose tail balance parameters")
    return float(balance[0]), float(balance[1])


def b_plus_sas(coeffs, alpha: float, d: int) -> float:
    """Exact b_plus(d) for the symmetric alpha-stable moving average.

    With w_k(d) the windowed partial sums of the coefficients,

        b_plus(d) = (1/2) * sum_k |w_k(d)|^alpha / sum_j |c_j|^alpha.

    The 1/2 is the upper tail-balance of the symmetric innovations: it makes
    the value the limit of n P(S_d > a_n) under the standard normalization
    n P(|X| > a_n) -> 1, so b_plus(1) = 1/2 and b_plus(d) + b_minus(d)
    at d = 1 sums to one.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    if d < 1:
        raise ValueError("d must be at least 1")
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0 or not np.any(c != 0):
        raise ValueError("coeffs must be non-empty and not all zero")
    w = _ma_weights(c, d)
    return 0.5 * float(np.sum(np.abs(w) ** alpha) / np.sum(np.abs(c) ** alpha))


def b_minus_sas(coeffs, alpha: float, d: int) -> float:
    """Mirror of :func:`b_plus_sas`; equal to it by symmetry."""
    return b_plus_sas(coeffs, alpha, d)


def b_linear_pareto(coeffs, alpha: float, p: float, q: float, d: int) -> tuple[float, float]:
    """Exact (b_plus(d), b_minus(d)) for a finite moving average over exact
    two-sided Pareto noise with balance (p, q).

    Each windowed weight w contributes p|w|^alpha to the upper tail when
    w > 0 and q|w|^alpha when w < 0 (one big jump); the normalization is
    the amplitude sum |c_j|^alpha of the marginal.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0 or not np.any(c != 0):
        raise ValueError("coeffs must be non-empty and not all zero")
    w = _ma_weights(c, d)
    wa = np.abs(w) ** alpha
    up = float(np.sum(wa * np.where(w > 0, p, np.where(w < 0, q, 0.0))))
    down = float(np.sum(wa * np.where(w > 0, q, np.where(w < 0, p, 0.0))))
    denom = float(np.sum(np.abs(c) ** alpha))
    return up / denom, down / denom


def c_linear_pareto(coeffs, alpha: float, p: float, q: float) -> tuple[float, float]:
    """Limit constants of the moving-average model: the interior window
    weights all equal the coefficient sum, so the b(d) increments are
    constant from depth len(coeffs) on."""
    m0 = len(tuple(coeffs)) - 1
    bp1, bm1 = b_linear_pareto(coeffs, alpha, p, q, m0 + 1)
    bp0, bm0 = b_linear_pareto(coeffs, alpha, p, q, m0) if m0 >= 1 else (0.0, 0.0)
    return bp1 - bp0, bm1 - bm0


def c_sas(coeffs, alpha: float) -> float:
    """Limit constant of the stable moving average:
    c_plus = c_minus = (1/2) |sum_j c_j|^alpha / sum_j |c_j|^alpha."""
    c = np.asarray(coeffs, dtype=float)
    return 0.5 * abs(float(np.sum(c))) ** alpha / float(np.sum(np.abs(c) ** alpha))
