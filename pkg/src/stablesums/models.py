"""Seeded generators for seven families of heavy-tailed stationary sequences.

Families: iid regularly varying noise, differenced iid noise, m-dependent
finite moving averages, stochastic recurrence equations X_t = A_t X_{t-1} + B_t,
GARCH(1,1) returns and squares, stochastic volatility with Gaussian ARMA
log-volatility, and finite moving averages of symmetric alpha-stable noise.

Every model exposes the same surface: a single ``path`` (deterministic per
seed), stationary draws of d-step block sums ``S_d``, marginal draws, and
closed-form tail metadata where the law admits it.

Reproducibility contract: single paths use counter-based noise streams (a
path depends only on the seed, and for iid-type models each value depends
only on (seed, index)); replicate Monte Carlo is split into fixed-size
batches with per-batch derived seeds SeedSequence((seed, tag, batch)), so
results are bit-identical for any thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np
from scipy import special, stats

from . import stable_core
from ._rng import (
    TAG_BLOCK,
    TAG_CHECK,
    TAG_IID,
    TAG_MARGINAL,
    TAG_PATH,
    batch_rng,
    map_batches,
    uniform_stream,
)

_TINY = np.finfo(float).tiny
_CHUNK = 1 << 22  # target elements per temporary array in block engines

# E log Z^2 for standard normal Z:  psi(1/2) + log 2 = -gamma - log 2
_E_LOG_CHI2_1 = -np.euler_gamma - math.log(2.0)


# ---------------------------------------------------------------------------
# Innovation (noise) laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoSidedPareto:
    """Exact two-sided Pareto law.

    P(Y > y) = p (y/scale)^-alpha and P(Y <= -y) = q (y/scale)^-alpha for
    y >= scale; no mass in (-scale, scale).  Requires p + q = 1.  The tail
    is exact (not merely asymptotic), which makes the normalizing sequence
    a_n available in closed form for models built on this noise.
    """

    alpha: float
    p: float = 1.0
    q: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.p < 0 or self.q < 0 or abs(self.p + self.q - 1.0) > 1e-12:
            raise ValueError("tail balance requires p, q >= 0 with p + q = 1")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def tail_index(self):
        return self.alpha

    def tail_balance(self):
        return self.p, self.q

    @property
    def is_symmetric(self) -> bool:
        return abs(self.p - self.q) < 1e-12

    @property
    def exact_pareto_tail(self) -> bool:
        return True

    def tail_constants(self) -> tuple[float, float]:
        """(k_plus, k_minus) with P(Y > y) = k_plus y^-alpha for y >= scale."""
        s = self.scale ** self.alpha
        return self.p * s, self.q * s

    def mean(self):
        if self.alpha <= 1.0:
            return None
        return (self.p - self.q) * self.alpha * self.scale / (self.alpha - 1.0)

    def variance(self):
        if self.alpha <= 2.0:
            return None
        m = self.mean()
        return self.alpha * self.scale ** 2 / (self.alpha - 2.0) - m * m

    def abs_moment(self, r: float):
        if r >= self.alpha:
            return None
        return self.alpha * self.scale ** r / (self.alpha - r)

    def ppf(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        left = u < self.q
        if left.any():
            out[left] = -self.scale * (np.fmax(u[left], _TINY) / self.q) ** (-1.0 / self.alpha)
        right = ~left
        out[right] = self.scale * ((1.0 - u[right]) / self.p) ** (-1.0 / self.alpha)
        return out

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.ppf(rng.random(size))


def SymmetrizedPareto(alpha: float, scale: float = 1.0) -> TwoSidedPareto:
    """Symmetric two-sided Pareto (p = q = 1/2)."""
    return TwoSidedPareto(alpha, 0.5, 0.5, scale)


@dataclass(frozen=True)
class StudentT:
    """Student t law, optionally rescaled; tail index equals dof."""

    dof: float
    scale: float = 1.0

    def __post_init__(self):
        if self.dof <= 0 or self.scale <= 0:
            raise ValueError("dof and scale must be positive")

    def tail_index(self):
        return self.dof

    def tail_balance(self):
        return 0.5, 0.5

    @property
    def is_symmetric(self) -> bool:
        return True

    @property
    def exact_pareto_tail(self) -> bool:
        return False

    def tail_constants(self) -> tuple[float, float]:
        # P(T > z) ~ c z^-dof from the leading term of the t density.
        v = self.dof
        c = math.gamma((v + 1) / 2) * v ** (v / 2 - 1) / (math.sqrt(math.pi) * math.gamma(v / 2))
        k = c * self.scale ** v
        return k, k

    def mean(self):
        return 0.0 if self.dof > 1 else None

    def variance(self):
        if self.dof <= 2:
            return None
        return self.scale ** 2 * self.dof / (self.dof - 2.0)

    def abs_moment(self, r: float):
        v = self.dof
        if r >= v:
            return None
        val = (v ** (r / 2) * math.gamma((r + 1) / 2) * math.gamma((v - r) / 2)
               / (math.sqrt(math.pi) * math.gamma(v / 2)))
        return self.scale ** r * val

    def ppf(self, u: np.ndarray) -> np.ndarray:
        return self.scale * stats.t.ppf(np.asarray(u, dtype=float), self.dof)

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.scale * rng.standard_t(self.dof, size)


@dataclass(frozen=True)
class StandardNormal:
    """Standard normal innovations (no tail index; the usual GARCH noise)."""

    def tail_index(self):
        return None

    def tail_balance(self):
        return 0.5, 0.5

    @property
    def is_symmetric(self) -> bool:
        return True

    @property
    def exact_pareto_tail(self) -> bool:
        return False

    def mean(self):
        return 0.0

    def variance(self):
        return 1.0

    def abs_moment(self, r: float):
        return 2.0 ** (r / 2) * math.gamma((r + 1) / 2) / math.sqrt(math.pi)

    def ppf(self, u: np.ndarray) -> np.ndarray:
        return special.ndtri(np.asarray(u, dtype=float))

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.standard_normal(size)


# ---------------------------------------------------------------------------
# Positive-valued laws for stochastic recurrence coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogNormal:
    """A = exp(mu + sigma N), N standard normal."""

    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def exact_moment(self, kappa: float) -> float:
        return math.exp(kappa * self.mu + 0.5 * (kappa * self.sigma) ** 2)

    def exact_log_moment(self) -> float:
        return self.mu

    def kesten_exact(self):
        """The positive root of E A^kappa = 1: kappa = -2 mu / sigma^2."""
        if self.mu >= 0:
            return None
        return -2.0 * self.mu / self.sigma ** 2

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return np.exp(self.mu + self.sigma * rng.standard_normal(size))


@dataclass(frozen=True)
class Constant:
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("value must be non-negative")

    def exact_moment(self, kappa: float) -> float:
        return self.value ** kappa

    def exact_log_moment(self) -> float:
        return math.log(self.value) if self.value > 0 else -math.inf

    def kesten_exact(self):
        return None  # v^kappa = 1 has no positive root for v != 1

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return np.full(size, float(self.value))


@dataclass(frozen=True)
class AffineSquaredNormal:
    """A = a Z^2 + b for standard normal Z (GARCH-style coefficient)."""

    a: float
    b: float = 0.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("coefficients must be non-negative")

    def exact_moment(self, kappa: float):
        if self.b == 0.0:
            if self.a == 0.0:
                return 0.0
            return self.a ** kappa * 2.0 ** kappa * math.gamma(kappa + 0.5) / math.sqrt(math.pi)
        if kappa == 1.0:
            return self.a + self.b
        return None

    def exact_log_moment(self):
        if self.a == 0.0:
            return math.log(self.b) if self.b > 0 else -math.inf
        if self.b == 0.0:
            return math.log(self.a) + _E_LOG_CHI2_1
        return None

    def kesten_exact(self):
        return None

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        z = rng.standard_normal(size)
        return self.a * z * z + self.b


# ---------------------------------------------------------------------------
# Construction-time stationarity checks
# ---------------------------------------------------------------------------

_CHECK_DRAWS = 100_000
_CHECK_SEED = 0xC0FFEE  # fixed so spec validation is deterministic


def _require_negative_log_moment(dist, label: str) -> float:
    """Check E log A < 0 (exact value, or MC point estimate + 3 se below 0)."""
    exact = getattr(dist, "exact_log_moment", lambda: None)()
    if exact is not None:
        if not exact < 0:
            raise ValueError(f"{label}: E log A = {exact} must be negative for stationarity")
        return exact
    rng = batch_rng(_CHECK_SEED, TAG_CHECK, 0)
    a = dist.sample(rng, _CHECK_DRAWS)
    if np.any(a < 0):
        raise ValueError(f"{label}: coefficient draws must be non-negative")
    with np.errstate(divide="ignore"):
        la = np.log(a)
    la = la[np.isfinite(la)]  # P(A == 0) atoms contribute -inf; dropping them is conservative
    m = float(la.mean())
    se = float(la.std() / math.sqrt(la.size))
    if not m + 3 * se < 0:
        raise ValueError(
            f"{label}: stationarity check failed, E log A estimated {m:.4f} +- {se:.4f}"
        )
    return m


def _garch_coefficient_dist(alpha1: float, beta1: float, noise):
    """Distribution of A = alpha1 Z^2 + beta1 for the given noise law."""
    if isinstance(noise, StandardNormal):
        return AffineSquaredNormal(alpha1, beta1)

    def sample(rng, size):
        z = noise.draw(rng, size)
        return alpha1 * z * z + beta1

    return SimpleNamespace(
        sample=sample,
        exact_moment=lambda kappa: None,
        exact_log_moment=lambda: None,
        kesten_exact=lambda: None,
    )


# ---------------------------------------------------------------------------
# Shared block engines
# ---------------------------------------------------------------------------

def _linear_block_sums(draw, weights: np.ndarray, count: int, seed: int, threads: int) -> np.ndarray:
    """Stationary S_d draws for S_d = sum_k weights[k] Y_k with iid Y.

    ``draw(rng, size)`` supplies the innovations.  Column chunking keeps
    temporaries near _CHUNK elements; the summation order is fixed.
    """
    w = np.asarray(weights, dtype=float)

    def worker(b, lo, hi):
        rng = batch_rng(seed, TAG_BLOCK, b)
        m = hi - lo
        s = np.zeros(m)
        step = max(1, _CHUNK // max(m, 1))
        for j0 in range(0, w.size, step):
            wj = w[j0:j0 + step]
            s += draw(rng, (m, wj.size)) @ wj
        return s

    return np.concatenate(map_batches(worker, count, threads))


def _recursion_block_sums(step_fn, init_fn, d: int, count: int, seed: int,
                          threads: int, burn: int) -> np.ndarray:
    """Block sums for sequential-state models, vectorized across replicates.

    ``init_fn(rng, m) -> state``; ``step_fn(rng, state) -> (state, x)``
    advances one time step for a vector of m independent replicates.
    """
    def worker(b, lo, hi):
        rng = batch_rng(seed, TAG_BLOCK, b)
        state = init_fn(rng, hi - lo)
        for _ in range(burn):
            state, _ = step_fn(rng, state)
        s = np.zeros(hi - lo)
        for _ in range(d):
            state, x = step_fn(rng, state)
            s += x
        return s

    return np.concatenate(map_batches(worker, count, threads))


def _recursion_marginal(step_fn, init_fn, count: int, seed: int, threads: int,
                        burn: int, absolute: bool) -> np.ndarray:
    """Marginal draws from a sequential-state model: replicate chains of
    fixed width, columns collected after warm-up."""
    rows = 4096

    def worker(b, lo, hi):
        rng = batch_rng(seed, TAG_MARGINAL, b)
        need = hi - lo
        m = min(rows, need)
        steps = -(-need // m)
        state = init_fn(rng, m)
        for _ in range(burn):
            state, _ = step_fn(rng, state)
        cols = np.empty((steps, m))
        for t in range(steps):
            state, x = step_fn(rng, state)
            cols[t] = x
        out = cols.ravel()[:need]
        return np.abs(out) if absolute else out

    return np.concatenate(map_batches(worker, count, threads))


def _ma_weights(coeffs, d: int) -> np.ndarray:
    """Weights w_k(d) with S_d = sum_k w_k Y_k for X_t = sum_j coeffs[j] Y_{t-j}.

    Full convolution of a length-d window of ones with the coefficients:
    coeffs=(1, 1), d=3 gives (1, 2, 2, 1)."""
    return np.convolve(np.ones(d), np.asarray(coeffs, dtype=float))


def _iid_path_uniforms(seed: int, n: int) -> np.ndarray:
    return uniform_stream(seed, TAG_IID, 0, n)


def _auto_block_burn(log_moment: float, cap: int) -> int:
    """Warm-up long enough that the start value is forgotten to ~exp(-80)."""
    if log_moment == -math.inf:
        return min(cap, 8)
    return min(cap, max(192, int(math.ceil(80.0 / max(0.02, -log_moment)))))


# ---------------------------------------------------------------------------
# Model specs
# ---------------------------------------------------------------------------

def _require_heavy_noise(noise, who: str) -> float:
    a = noise.tail_index()
    if a is None:
        raise ValueError(f"{who} requires heavy-tailed noise with a tail index")
    if not 0.0 < a < 2.0:
        raise ValueError(f"{who} requires tail index in (0, 2), got {a}")
    return a


@dataclass(frozen=True)
class IidRV:
    """iid regularly varying noise: the benchmark sequence."""

    noise: TwoSidedPareto | StudentT

    def __post_init__(self):
        _require_heavy_noise(self.noise, "IidRV")

    def label(self):
        return f"iid_rv({self.noise})"

    def tail_index(self):
        return self.noise.tail_index()

    def tail_balance(self):
        return self.noise.tail_balance()

    def mean(self):
        return self.noise.mean()

    def closed_form_a_n(self, n: int):
        if not self.noise.exact_pareto_tail:
            return None
        kp, km = self.noise.tail_constants()
        return ((kp + km) * n) ** (1.0 / self.tail_index())

    def path(self, n: int, seed: int) -> np.ndarray:
        return self.noise.ppf(_iid_path_uniforms(seed, n))

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        return _linear_block_sums(self.noise.draw, np.ones(d), count, seed, threads)

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        def worker(b, lo, hi):
            x = self.noise.draw(batch_rng(seed, TAG_MARGINAL, b), hi - lo)
            return np.abs(x) if absolute else x
        return np.concatenate(map_batches(worker, count, threads))


@dataclass(frozen=True)
class Differenced:
    """X_t = Y_t - Y_{t-1} for iid regularly varying Y: degenerate limit."""

    noise: TwoSidedPareto | StudentT

    def __post_init__(self):
        _require_heavy_noise(self.noise, "Differenced")

    def label(self):
        return f"differenced({self.noise})"

    def tail_index(self):
        return self.noise.tail_index()

    def tail_balance(self):
        return 0.5, 0.5

    def mean(self):
        return 0.0 if self.noise.mean() is not None else None

    def closed_form_a_n(self, n: int):
        if not self.noise.exact_pareto_tail:
            return None
        kp, km = self.noise.tail_constants()
        # P(|Y_t - Y_{t-1}| > x) ~ 2 (kp + km) x^-alpha: one big jump in either term
        return (2.0 * (kp + km) * n) ** (1.0 / self.tail_index())

    def path(self, n: int, seed: int) -> np.ndarray:
        y = self.noise.ppf(_iid_path_uniforms(seed, n + 1))
        return np.diff(y)

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        # S_d telescopes to Y_d - Y_0 exactly.
        def worker(b, lo, hi):
            y = self.noise.draw(batch_rng(seed, TAG_BLOCK, b), (hi - lo, 2))
            return y[:, 1] - y[:, 0]
        return np.concatenate(map_batches(worker, count, threads))

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        def worker(b, lo, hi):
            y = self.noise.draw(batch_rng(seed, TAG_MARGINAL, b), (hi - lo, 2))
            x = y[:, 1] - y[:, 0]
            return np.abs(x) if absolute else x
        return np.concatenate(map_batches(worker, count, threads))


@dataclass(frozen=True)
class MDependent:
    """Finite moving average X_t = sum_j ma_coeffs[j] Y_{t-j}: m0-dependent
    with m0 = len(ma_coeffs) - 1."""

    noise: TwoSidedPareto | StudentT
    ma_coeffs: tuple

    def __post_init__(self):
        _require_heavy_noise(self.noise, "MDependent")
        c = tuple(float(v) for v in self.ma_coeffs)
        if len(c) < 1 or not any(v != 0 for v in c):
            raise ValueError("ma_coeffs must be non-empty and not all zero")
        object.__setattr__(self, "ma_coeffs", c)

    @property
    def m0(self) -> int:
        return len(self.ma_coeffs) - 1

    def label(self):
        return f"m_dependent(coeffs={list(self.ma_coeffs)}, {self.noise})"

    def tail_index(self):
        return self.noise.tail_index()

    def tail_balance(self):
        a = self.tail_index()
        p, q = self.noise.tail_balance()
        c = np.asarray(self.ma_coeffs)
        wa = np.abs(c) ** a
        num_p = float(np.sum(wa * np.where(c > 0, p, np.where(c < 0, q, 0.0))))
        tot = float(np.sum(wa))
        return num_p / tot, 1.0 - num_p / tot

    def mean(self):
        m = self.noise.mean()
        return None if m is None else m * float(np.sum(self.ma_coeffs))

    def closed_form_a_n(self, n: int):
        if not self.noise.exact_pareto_tail:
            return None
        a = self.tail_index()
        kp, km = self.noise.tail_constants()
        amp = (kp + km) * float(np.sum(np.abs(self.ma_coeffs) ** a))
        return (amp * n) ** (1.0 / a)

    def path(self, n: int, seed: int) -> np.ndarray:
        y = self.noise.ppf(_iid_path_uniforms(seed, n + self.m0))
        return np.convolve(y, self.ma_coeffs, mode="valid")

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        return _linear_block_sums(self.noise.draw, _ma_weights(self.ma_coeffs, d),
                                  count, seed, threads)

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        c = np.asarray(self.ma_coeffs)

        def worker(b, lo, hi):
            y = self.noise.draw(batch_rng(seed, TAG_MARGINAL, b), (hi - lo, c.size))
            x = y @ c[::-1]
            return np.abs(x) if absolute else x
        return np.concatenate(map_batches(worker, count, threads))


@dataclass(frozen=True)
class SasMa:
    """Finite moving average of iid symmetric alpha-stable innovations.

    Innovations are normalized so that P(|eps| > x) ~ x^-alpha (Levy
    constants 1/2 each), hence a_n = (n sum_j |c_j|^alpha)^(1/alpha).
    The stable tail is asymptotic rather than exact, but the relative
    error at the thresholds used here is O(a_n^-alpha).
    """

    coeffs: tuple
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError("alpha must lie in (0, 2)")
        c = tuple(float(v) for v in self.coeffs)
        if len(c) < 1 or not any(v != 0 for v in c):
            raise ValueError("coeffs must be non-empty and not all zero")
        object.__setattr__(self, "coeffs", c)

    def label(self):
        return f"sas_ma(coeffs={list(self.coeffs)}, alpha={self.alpha})"

    def innovation_params(self) -> stable_core.StableLimitParams:
        return stable_core.StableLimitParams(self.alpha, 0.5, 0.5)

    def tail_index(self):
        return self.alpha

    def tail_balance(self):
        return 0.5, 0.5

    def mean(self):
        return 0.0 if self.alpha > 1 else None

    def closed_form_a_n(self, n: int):
        amp = float(np.sum(np.abs(self.coeffs) ** self.alpha))
        return (amp * n) ** (1.0 / self.alpha)

    def _draw_innovations(self, rng: np.random.Generator, size) -> np.ndarray:
        # Symmetric Chambers-Mallows-Stuck; same transform as sample_stable.
        sp = stable_core.to_standard_params(self.innovation_params())
        shape = size if isinstance(size, tuple) else (size,)
        theta = math.pi * (rng.random(shape) - 0.5)
        w = np.fmax(-np.log1p(-rng.random(shape)), _TINY)
        a = sp.alpha
        if a == 1.0:
            x = np.tan(theta)
        else:
            x = (np.sin(a * theta) / np.cos(theta) ** (1.0 / a)
                 * (np.cos((1.0 - a) * theta) / w) ** ((1.0 - a) / a))
        return sp.sigma * x

    def path(self, n: int, seed: int) -> np.ndarray:
        m0 = len(self.coeffs) - 1
        eps = stable_core.sample_stable(self.innovation_params(), n + m0, seed)
        return np.convolve(eps, self.coeffs, mode="valid")

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        return _linear_block_sums(self._draw_innovations, _ma_weights(self.coeffs, d),
                                  count, seed, threads)

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        c = np.asarray(self.coeffs)

        def worker(b, lo, hi):
            eps = self._draw_innovations(batch_rng(seed, TAG_MARGINAL, b), (hi - lo, c.size))
            x = eps @ c[::-1]
            return np.abs(x) if absolute else x
        return np.concatenate(map_batches(worker, count, threads))


@dataclass(frozen=True)
class Sre:
    """Stochastic recurrence equation X_t = A_t X_{t-1} + B_t with
    independent non-negative iid coefficient sequences.

    ``alpha`` (the positive root of E A^kappa = 1) and ``tail_constant``
    (the level c with P(X > x) ~ c x^-alpha) may be supplied when known;
    the latter unlocks the closed-form normalizer a_n = (c n)^(1/alpha).
    """

    dist_a: LogNormal | Constant | AffineSquaredNormal
    dist_b: LogNormal | Constant | AffineSquaredNormal
    burn_in: int = 10_000
    alpha: float | None = None
    tail_constant: float | None = None

    def __post_init__(self):
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        log_m = _require_negative_log_moment(self.dist_a, "Sre")
        object.__setattr__(self, "_log_moment_a", log_m)

    def label(self):
        return f"sre(A={self.dist_a}, B={self.dist_b})"

    def tail_index(self):
        if self.alpha is not None:
            return self.alpha
        cached = getattr(self, "_alpha_cache", None)
        if cached is None:
            from .constants import kesten_index  # constants builds on models
            cached = kesten_index(self.dist_a).alpha
            object.__setattr__(self, "_alpha_cache", cached)
        return cached

    def tail_balance(self):
        return 1.0, 0.0

    def mean(self):
        # E X = E B / (1 - E A) when E A < 1 (tail index above 1)
        ea = self.dist_a.exact_moment(1.0)
        eb = self.dist_b.exact_moment(1.0)
        if ea is None or eb is None or ea >= 1.0:
            return None
        return eb / (1.0 - ea)

    def closed_form_a_n(self, n: int):
        if self.tail_constant is None:
            return None
        return (self.tail_constant * n) ** (1.0 / self.tail_index())

    def _mean_a(self) -> float:
        ea = self.dist_a.exact_moment(1.0)
        if ea is None:
            rng = batch_rng(_CHECK_SEED, TAG_CHECK, 1)
            ea = float(self.dist_a.sample(rng, _CHECK_DRAWS).mean())
        return ea

    def _init(self, rng, m):
        b = self.dist_b.sample(rng, m)
        return b / (1.0 - min(self._mean_a(), 0.99))

    def _step(self, rng, state):
        a = self.dist_a.sample(rng, state.shape)
        b = self.dist_b.sample(rng, state.shape)
        x = a * state + b
        return x, x

    def _block_burn(self) -> int:
        return _auto_block_burn(self._log_moment_a, self.burn_in)

    def path(self, n: int, seed: int) -> np.ndarray:
        rng = batch_rng(seed, TAG_PATH, 0)
        total = n + self.burn_in
        a = self.dist_a.sample(rng, total).tolist()
        b = self.dist_b.sample(rng, total).tolist()
        x = float(b[0]) / (1.0 - min(self._mean_a(), 0.99))
        out = np.empty(n)
        keep = self.burn_in
        for t in range(total):
            x = a[t] * x + b[t]
            if t >= keep:
                out[t - keep] = x
        return out

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        return _recursion_block_sums(self._step, self._init, d, count, seed,
                                     threads, self._block_burn())

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        return _recursion_marginal(self._step, self._init, count, seed, threads,
                                   self._block_burn(), absolute)


@dataclass(frozen=True)
class Garch11:
    """GARCH(1,1): X_t = sigma_t Z_t with
    sigma_t^2 = alpha0 + (alpha1 Z_{t-1}^2 + beta1) sigma_{t-1}^2.

    With ``squared=True`` the observable is X_t^2, whose tail index alpha
    solves E (alpha1 Z^2 + beta1)^alpha = 1; the raw returns have tail
    index 2 alpha and symmetric tails.  ``tail_constant`` is the amplitude
    of P(|observable| > x) when known.
    """

    alpha0: float
    alpha1: float
    beta1: float
    noise: StandardNormal | StudentT | TwoSidedPareto = StandardNormal()
    burn_in: int = 10_000
    squared: bool = False
    alpha: float | None = None
    tail_constant: float | None = None

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        if self.alpha1 < 0:
            raise ValueError("alpha1 must be non-negative")
        if not 0.0 <= self.beta1 < 1.0:
            raise ValueError("beta1 must lie in [0, 1)")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if not self.noise.is_symmetric:
            raise ValueError("GARCH noise must be symmetric")
        v = self.noise.variance()
        if v is not None and abs(v - 1.0) > 1e-9:
            raise ValueError("GARCH noise must have unit variance")
        dist = _garch_coefficient_dist(self.alpha1, self.beta1, self.noise)
        log_m = _require_negative_log_moment(dist, "Garch11")
        object.__setattr__(self, "_log_moment_a", log_m)

    def label(self):
        base = f"garch11(alpha0={self.alpha0}, alpha1={self.alpha1}, beta1={self.beta1})"
        return base + (" squared" if self.squared else "")

    def squared_index(self) -> float:
        """The root alpha of E (alpha1 Z^2 + beta1)^alpha = 1."""
        if self.alpha is not None:
            return self.alpha
        cached = getattr(self, "_alpha_cache", None)
        if cached is None:
            from .constants import kesten_index
            dist = _garch_coefficient_dist(self.alpha1, self.beta1, self.noise)
            cached = kesten_index(dist).alpha
            object.__setattr__(self, "_alpha_cache", cached)
        return cached

    def tail_index(self):
        a = self.squared_index()
        return a if self.squared else 2.0 * a

    def tail_balance(self):
        return (1.0, 0.0) if self.squared else (0.5, 0.5)

    def mean(self):
        if not self.squared:
            return 0.0  # symmetric noise
        if self.alpha1 + self.beta1 >= 1.0:
            return None  # E sigma^2 infinite (tail index below 1)
        return self.alpha0 / (1.0 - self.alpha1 - self.beta1)

    def closed_form_a_n(self, n: int):
        if self.tail_constant is None:
            return None
        return (self.tail_constant * n) ** (1.0 / self.tail_index())

    def _init(self, rng, m):
        ea = self.alpha1 + self.beta1
        return np.full(m, self.alpha0 / (1.0 - min(ea, 0.99)))

    def _step(self, rng, sigma2):
        z = self.noise.draw(rng, sigma2.shape)
        x = np.sqrt(sigma2) * z
        nxt = self.alpha0 + (self.alpha1 * z * z + self.beta1) * sigma2
        return nxt, (x * x if self.squared else x)

    def _block_burn(self) -> int:
        return _auto_block_burn(self._log_moment_a, self.burn_in)

    def path(self, n: int, seed: int, with_sigma2: bool = False):
        rng = batch_rng(seed, TAG_PATH, 0)
        total = n + self.burn_in
        z = self.noise.draw(rng, total).tolist()
        s2 = self.alpha0 / (1.0 - min(self.alpha1 + self.beta1, 0.99))
        xs = np.empty(n)
        sig = np.empty(n) if with_sigma2 else None
        keep = self.burn_in
        a1, b1, a0 = self.alpha1, self.beta1, self.alpha0
        sq = self.squared
        for t in range(total):
            zt = z[t]
            if t >= keep:
                x = math.sqrt(s2) * zt
                xs[t - keep] = x * x if sq else x
                if with_sigma2:
                    sig[t - keep] = s2
            s2 = a0 + (a1 * zt * zt + b1) * s2
        return (xs, sig) if with_sigma2 else xs

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        return _recursion_block_sums(self._step, self._init, d, count, seed,
                                     threads, self._block_burn())

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        return _recursion_marginal(self._step, self._init, count, seed, threads,
                                   self._block_burn(), absolute)


@dataclass(frozen=True)
class StochVol:
    """Stochastic volatility: X_t = sigma_t Z_t with log sigma_t a Gaussian
    ARMA process (unit-variance Gaussian innovations), independent of Z."""

    noise: TwoSidedPareto | StudentT
    ar: tuple = ()
    ma: tuple = ()
    burn_in: int = 10_000

    def __post_init__(self):
        _require_heavy_noise(self.noise, "StochVol")
        ar = tuple(float(v) for v in self.ar)
        ma = tuple(float(v) for v in self.ma)
        object.__setattr__(self, "ar", ar)
        object.__setattr__(self, "ma", ma)
        if ar:
            # phi(z) = 1 - ar_1 z - ... - ar_p z^p must have roots outside the unit disc
            roots = np.roots([-v for v in ar[::-1]] + [1.0])
            if roots.size and np.any(np.abs(roots) <= 1.0 + 1e-10):
                raise ValueError("AR polynomial is not causal: root inside the unit disc")
        if ma:
            # theta(z) = 1 + ma_1 z + ... + ma_q z^q must have roots outside the unit disc
            roots = np.roots(list(ma[::-1]) + [1.0])
            if roots.size and np.any(np.abs(roots) <= 1.0 + 1e-10):
                raise ValueError("MA polynomial is not invertible: root inside the unit disc")

    def label(self):
        return f"stoch_vol(ar={list(self.ar)}, ma={list(self.ma)}, {self.noise})"

    def tail_index(self):
        return self.noise.tail_index()

    def tail_balance(self):
        return self.noise.tail_balance()

    def _logvol_variance(self) -> float:
        """Stationary variance of the ARMA log-volatility via psi weights."""
        p, q = len(self.ar), len(self.ma)
        psis = [1.0]
        acc = 1.0
        for j in range(1, 8192):
            v = self.ma[j - 1] if j <= q else 0.0
            v += sum(self.ar[i] * psis[j - 1 - i] for i in range(min(p, j)))
            psis.append(v)
            acc += v * v
            if j > max(p, q) and v * v < 1e-16 * acc:
                break
        return acc

    def mean(self):
        mz = self.noise.mean()
        if mz is None:
            return None
        return mz * math.exp(0.5 * self._logvol_variance())

    def closed_form_a_n(self, n: int):
        if not self.noise.exact_pareto_tail:
            return None
        a = self.tail_index()
        kp, km = self.noise.tail_constants()
        e_sigma_a = math.exp(0.5 * a * a * self._logvol_variance())
        return ((kp + km) * e_sigma_a * n) ** (1.0 / a)

    def _burn(self) -> int:
        if not self.ar:
            return 8 + len(self.ma)
        top = float(np.max(np.abs(np.roots([1.0] + [-v for v in self.ar]))))
        rate = -math.log(min(max(top, 1e-12), 1.0 - 1e-12))
        return _auto_block_burn(-rate, self.burn_in)

    def _init(self, rng, m):
        return np.zeros((m, len(self.ar))), np.zeros((m, len(self.ma)))

    def _step(self, rng, state):
        vhist, ehist = state
        m = vhist.shape[0]
        eta = rng.standard_normal(m)
        v = eta.copy()
        if vhist.shape[1]:
            v += vhist @ np.asarray(self.ar)
        if ehist.shape[1]:
            v += ehist @ np.asarray(self.ma)
        if vhist.shape[1]:
            vhist = np.column_stack([v, vhist[:, :-1]])
        if ehist.shape[1]:
            ehist = np.column_stack([eta, ehist[:, :-1]])
        z = self.noise.draw(rng, m)
        return (vhist, ehist), np.exp(v) * z

    def path(self, n: int, seed: int) -> np.ndarray:
        rng = batch_rng(seed, TAG_PATH, 0)
        state = self._init(rng, 1)
        for _ in range(min(self.burn_in, self._burn())):
            state, _ = self._step(rng, state)
        out = np.empty(n)
        for t in range(n):
            state, x = self._step(rng, state)
            out[t] = x[0]
        return out

    def block_sums(self, d: int, count: int, seed: int, threads: int = 1) -> np.ndarray:
        return _recursion_block_sums(self._step, self._init, d, count, seed,
                                     threads, min(self.burn_in, self._burn()))

    def marginal(self, count: int, seed: int, threads: int = 1, absolute: bool = True) -> np.ndarray:
        return _recursion_marginal(self._step, self._init, count, seed, threads,
                                   min(self.burn_in, self._burn()), absolute)


# ---------------------------------------------------------------------------
# Spec-level generator functions
# ---------------------------------------------------------------------------

def gen_iid_rv(noise, n: int, seed: int) -> np.ndarray:
    """iid draws from a heavy-tailed noise law, deterministic per (seed, index)."""
    return IidRV(noise).path(n, seed)


def gen_differenced(noise, n: int, seed: int) -> np.ndarray:
    """X_t = Y_t - Y_{t-1} from one underlying iid stream."""
    return Differenced(noise).path(n, seed)


def gen_m_dependent(noise, ma_coeffs, n: int, seed: int) -> np.ndarray:
    """Finite moving average over heavy-tailed iid noise."""
    return MDependent(noise, tuple(ma_coeffs)).path(n, seed)


def gen_sre(dist_a, dist_b, n: int, burn_in: int = 10_000, seed: int = 0) -> np.ndarray:
    """Stationary stochastic recurrence path after burn-in."""
    return Sre(dist_a, dist_b, burn_in=burn_in).path(n, seed)


def gen_garch11(alpha0, alpha1, beta1, noise, n: int, burn_in: int = 10_000,
                seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """GARCH(1,1) returns X_t and squared volatilities sigma_t^2."""
    model = Garch11(alpha0, alpha1, beta1, noise=noise, burn_in=burn_in)
    return model.path(n, seed, with_sigma2=True)


def gen_sv(ar_coeffs, ma_coeffs, noise, n: int, burn_in: int = 10_000,
           seed: int = 0) -> np.ndarray:
    """Stochastic volatility path with Gaussian ARMA log-volatility."""
    return StochVol(noise, ar=tuple(ar_coeffs), ma=tuple(ma_coeffs), burn_in=burn_in).path(n, seed)


def gen_sas_ma(coeffs, alpha: float, n: int, seed: int) -> np.ndarray:
    """Finite moving average of symmetric alpha-stable innovations."""
    return SasMa(tuple(coeffs), alpha).path(n, seed)


def save_path_csv(path_values: np.ndarray, file, label: str, seed: int) -> None:
    """Single-column CSV; the header line names the model and the seed."""
    own = isinstance(file, (str, bytes))
    fh = open(file, "w", encoding="utf-8", newline="") if own else file
    try:
        fh.write(f"x_{label}_seed={seed}\n")
        for v in path_values:
            fh.write(f"{float(v):.17g}\n")
    finally:
        if own:
            fh.close()


MODEL_FAMILIES = (
    ("iid_rv", "iid regularly varying noise",
     "X_t = Y_t, Y iid with P(Y > y) = p (y/s)^-a, P(Y <= -y) = q (y/s)^-a"),
    ("differenced", "differenced iid noise (degenerate limit)",
     "X_t = Y_t - Y_{t-1}, Y iid regularly varying"),
    ("m_dependent", "m0-dependent finite moving average",
     "X_t = sum_j c_j Y_{t-j}, Y iid regularly varying"),
    ("sre", "SRE/Kesten stochastic recurrence equation",
     "X_t = A_t X_{t-1} + B_t, (A, B) iid non-negative, E log A < 0"),
    ("garch11", "GARCH(1,1) returns or squares",
     "X_t = sigma_t Z_t, sigma_t^2 = alpha0 + (alpha1 Z_{t-1}^2 + beta1) sigma_{t-1}^2"),
    ("stoch_vol", "stochastic volatility with Gaussian ARMA log-volatility",
     "X_t = sigma_t Z_t, log sigma_t Gaussian ARMA independent of Z"),
    ("sas_ma", "symmetric alpha-stable moving average",
     "X_t = sum_j c_j eps_{t-j}, eps iid symmetric alpha-stable"),
)
