"""Empirical tail machinery: the normalizing sequence a_n, Hill tail index,
tail balance, block-sum tail levels b(d), and the limit constants c.

Conventions: a_n solves n P(|X| > a_n) = 1; b_plus(d) and b_minus(d) are the
limits of n P(S_d > a_n) and n P(S_d <= -a_n); the stable-limit constants
are c_plus = lim b_plus(d) / d (and the same on the minus side).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._rng import seed_seq


class InsufficientReference(ValueError):
    """Reference sample too small for the requested quantile."""


@dataclass
class TailProfile:
    """Empirical tail summary of a stationary sequence."""

    alpha_hat: float
    alpha_se: float
    p_hat: float
    q_hat: float
    a_fn: Callable[[int], float]

    def a_n(self, n: int) -> float:
        return self.a_fn(n)


@dataclass
class BRow:
    d: int
    b_plus: float
    b_minus: float
    se: float
    replicates: int
    note: str = ""


@dataclass
class BTable:
    rows: list

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: r.d)

    def row(self, d: int) -> BRow:
        for r in self.rows:
            if r.d == d:
                return r
        raise KeyError(f"no row at depth {d}")

    def to_csv(self, file) -> None:
        own = isinstance(file, (str, bytes))
        fh = open(file, "w", encoding="utf-8", newline="") if own else file
        try:
            fh.write("d,b_plus,b_minus,se,replicates\n")
            for r in self.rows:
                fh.write(f"{r.d},{r.b_plus:.10g},{r.b_minus:.10g},{r.se:.10g},{r.replicates}\n")
        finally:
            if own:
                fh.close()


@dataclass
class CEstimate:
    """c_plus / c_minus extracted from a BTable.

    The primary estimate is the ratio b(d_max) / d_max; the successive
    differences (b(d_i) - b(d_{i-1})) / (d_i - d_{i-1}) are kept as a
    convergence diagnostic (``converged_*`` is set when the last three
    agree pairwise within 2 combined standard errors).
    """

    c_plus: float
    c_minus: float
    se: float
    se_plus: float
    se_minus: float
    d_max: int
    diffs_plus: list = field(default_factory=list)
    diffs_minus: list = field(default_factory=list)
    converged_plus: bool = False
    converged_minus: bool = False
    flags: list = field(default_factory=list)
    # slope of b over the two deepest rows: kills the O(1/d) transient of the
    # ratio for models with geometric memory, at the cost of more variance
    c_plus_slope: float = 0.0
    c_minus_slope: float = 0.0
    slope_se: float = 0.0


def select_a_n(source, n: int, *, seed: int = 0, threads: int = 1,
               reference_factor: int = 100) -> float:
    """The normalization level a_n with n P(|X| > a_n) ~ 1.

    ``source`` may be a model (closed form used when its law admits one,
    otherwise an internally simulated reference sample), a TailProfile, or
    a raw reference sample of |X| draws (requires >= 100 n values).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if isinstance(source, TailProfile):
        return float(source.a_fn(n))
    if isinstance(source, np.ndarray):
        if source.size < reference_factor * n:
            raise InsufficientReference(
                f"need at least {reference_factor * n} reference draws, got {source.size}"
            )
        return float(np.quantile(np.abs(source), 1.0 - 1.0 / n))
    closed = source.closed_form_a_n(n)
    if closed is not None:
        return float(closed)
    ref = source.marginal(reference_factor * n, seed, threads=threads, absolute=True)
    return float(np.quantile(ref, 1.0 - 1.0 / n))


def hill_alpha(sample, k: int | None = None) -> tuple[float, float]:
    """Hill estimator on the top-k order statistics of |sample|.

    Returns (alpha_hat, se) with se = alpha_hat / sqrt(k).
    """
    ax = np.abs(np.asarray(sample, dtype=float))
    n = ax.size
    if k is None:
        k = int(n ** (2.0 / 3.0))  # fixed default; no adaptive selection
    if not 1 <= k < n:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    top = np.partition(ax, n - k - 1)[n - k - 1:]
    top.sort()
    floor = top[0]
    if floor <= 0:
        raise ValueError("Hill estimator needs k+1 positive order statistics")
    if top[-1] == floor:
        raise ValueError("degenerate sample: top order statistics are all equal")
    h = float(np.mean(np.log(top[1:]) - math.log(floor)))
    alpha = 1.0 / h
    return alpha, alpha / math.sqrt(k)


def estimate_b(model, d: int, n: int = 10_000, x: float = 1.0,
               replicates: int = 1_000_000, *, seed: int = 0, threads: int = 1,
               a_n: float | None = None, alpha: float | None = None) -> BRow:
    """One BTable row: b_plus(d), b_minus(d) from replicate block sums.

    b_plus = n * P_hat(S_d > x a_n) * x**alpha; the x**alpha rescaling uses
    the exact homogeneity of the limit measure, so a moderate x > 1 can be
    used to stabilize counts.  Standard errors are binomial.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if replicates < 10_000:
        raise ValueError("replicates must be at least 10_000")
    if x <= 0:
        raise ValueError("threshold multiplier x must be positive")
    if alpha is None:
        alpha = model.tail_index()
    if a_n is None:
        a_n = select_a_n(model, n, seed=seed, threads=threads)
    sums = model.block_sums(d, replicates, seed, threads=threads)
    if alpha > 1.0:
        # constant centering leaves the limit unchanged but removes the
        # O(d E X / a_n) finite-n inflation of the exceedance counts
        mean = model.mean()
        if mean is not None:
            sums = sums - d * mean
    thresh = x * a_n
    k_plus = int(np.count_nonzero(sums > thresh))
    k_minus = int(np.count_nonzero(sums <= -thresh))
    scale = n * x ** alpha
    f_plus = k_plus / replicates
    f_minus = k_minus / replicates
    b_plus = scale * f_plus
    b_minus = scale * f_minus
    se_plus = scale * math.sqrt(f_plus * (1.0 - f_plus) / replicates)
    se_minus = scale * math.sqrt(f_minus * (1.0 - f_minus) / replicates)
    note = ""
    if k_plus == 0 or k_minus == 0:
        # rule of three: one-sided 95% upper confidence for a zero count
        bound = scale * 3.0 / replicates
        sides = [s for s, c in (("plus", k_plus), ("minus", k_minus)) if c == 0]
        note = f"zero exceedances on {'/'.join(sides)} side; 95% upper bound {bound:.3g}"
    return BRow(d, b_plus, b_minus, max(se_plus, se_minus), replicates, note)


def b_table(model, depths, n: int = 10_000, x: float = 1.0,
            replicates: int = 1_000_000, *, seed: int = 0, threads: int = 1,
            a_n: float | None = None, alpha: float | None = None) -> BTable:
    """BTable over the given depths; one independent replicate set per depth."""
    if alpha is None:
        alpha = model.tail_index()
    if a_n is None:
        a_n = select_a_n(model, n, seed=seed, threads=threads)
    rows = []
    for j, d in enumerate(depths):
        sub = int(seed_seq(seed, 7100, j).generate_state(1, np.uint64)[0])
        rows.append(estimate_b(model, d, n, x, replicates, seed=sub,
                               threads=threads, a_n=a_n, alpha=alpha))
    return BTable(rows)


def estimate_c(btable: BTable) -> CEstimate:
    """Limit constants from a BTable: primary ratio b(d_max)/d_max, plus the
    difference-sequence diagnostic."""
    rows = btable.rows
    if not rows:
        raise ValueError("empty BTable")
    d_max = rows[-1].d
    if d_max < 8:
        raise ValueError("BTable must reach depth d >= 8 for a c estimate")
    last = rows[-1]
    c_plus = last.b_plus / d_max
    c_minus = last.b_minus / d_max
    se_plus = last.se / d_max
    se_minus = last.se / d_max

    diffs_plus, diffs_minus, diff_ses = [], [], []
    for prev, cur in zip(rows, rows[1:]):
        dd = cur.d - prev.d
        diffs_plus.append((cur.b_plus - prev.b_plus) / dd)
        diffs_minus.append((cur.b_minus - prev.b_minus) / dd)
        diff_ses.append(math.sqrt(cur.se ** 2 + prev.se ** 2) / dd)

    def _settled(diffs):
        if len(diffs) < 3:
            return False
        tail3 = diffs[-3:]
        return max(tail3) - min(tail3) <= 2.0 * max(diff_ses[-3:])

    flags = []
    for side, key in (("plus", "b_plus"), ("minus", "b_minus")):
        for prev, cur in zip(rows, rows[1:]):
            drop = getattr(prev, key) - getattr(cur, key)
            if drop > 3.0 * math.sqrt(cur.se ** 2 + prev.se ** 2):
                flags.append(f"b_{side} decreases beyond noise between d={prev.d} and d={cur.d}")
                break

    if len(rows) >= 2:
        top, prev = rows[-1], rows[-2]
        span = top.d - prev.d
        slope_plus = (top.b_plus - prev.b_plus) / span
        slope_minus = (top.b_minus - prev.b_minus) / span
        slope_se = math.sqrt(top.se ** 2 + prev.se ** 2) / span
    else:
        slope_plus, slope_minus, slope_se = c_plus, c_minus, max(se_plus, se_minus)

    return CEstimate(
        c_plus=c_plus, c_minus=c_minus, se=max(se_plus, se_minus),
        se_plus=se_plus, se_minus=se_minus, d_max=d_max,
        diffs_plus=diffs_plus, diffs_minus=diffs_minus,
        converged_plus=_settled(diffs_plus), converged_minus=_settled(diffs_minus),
        flags=flags, c_plus_slope=slope_plus, c_minus_slope=slope_minus,
        slope_se=slope_se,
    )


def tail_profile(model, n_ref: int = 1_000_000, k: int | None = None,
                 *, seed: int = 0, threads: int = 1) -> TailProfile:
    """Fit alpha, (p, q) and the a_n map from a simulated reference sample."""
    x = model.marginal(n_ref, seed, threads=threads, absolute=False)
    ax = np.abs(x)
    alpha_hat, alpha_se = hill_alpha(ax, k)
    kk = k if k is not None else int(n_ref ** (2.0 / 3.0))
    order = np.argsort(ax)
    top_idx = order[-kk:]
    p_hat = float(np.count_nonzero(x[top_idx] > 0) / kk)

    closed = model.closed_form_a_n(2)
    if closed is not None:
        a_fn = lambda n: float(model.closed_form_a_n(n))
    else:
        sorted_ax = np.sort(ax)

        def a_fn(n, _ref=sorted_ax):
            if _ref.size < 100 * n:
                raise InsufficientReference(
                    f"reference sample of {_ref.size} supports n up to {_ref.size // 100}"
                )
            return float(np.quantile(_ref, 1.0 - 1.0 / n))

    return TailProfile(alpha_hat, alpha_se, p_hat, 1.0 - p_hat, a_fn)
