"""Seeding and deterministic random-stream plumbing.

Two kinds of streams are used throughout the package:

* counter-based streams (Philox): the draw at stream position ``i``
  depends only on ``(seed, tag, i)``, so chunked or parallel fills are
  bit-identical to one sequential fill;
* batch streams (PCG64): long Monte Carlo jobs are split into batches
  of ``BATCH`` replicates; batch ``b`` of a job tagged ``tag`` uses the
  generator seeded with ``SeedSequence((seed, tag, b))`` and the batch
  results are combined in batch order.  The batch size is fixed and the
  combination order is deterministic, which makes every estimate
  independent of the number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

# Fixed batch size for replicate-parallel Monte Carlo.  Part of the
# reproducibility contract: changing it changes the random numbers.
BATCH = 1 << 14

# Stream tags.  Each independent consumer of randomness owns one tag so
# that streams never collide for a shared master seed.
TAG_STABLE = 101
TAG_IID = 102
TAG_BLOCK = 103
TAG_MARGINAL = 104
TAG_KS_REF = 105
TAG_CONST = 106
TAG_PATH = 107
TAG_CHECK = 108


def seed_seq(seed: int, *tags: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((int(seed),) + tuple(int(t) for t in tags))


def batch_rng(seed: int, tag: int, batch: int) -> np.random.Generator:
    """Generator for batch `batch` of the job `tag` under `seed`."""
    return np.random.default_rng(seed_seq(seed, tag, batch))


def uniform_stream(seed: int, tag: int, first: int, count: int, width: int = 1) -> np.ndarray:
    """Uniform[0,1) doubles for stream indices [first, first+count).

    Index ``i`` owns the ``width`` consecutive doubles at positions
    ``i*width ... (i+1)*width - 1`` of a Philox stream keyed by
    ``(seed, tag)``.  Returns shape ``(count, width)`` (``(count,)`` for
    ``width == 1``); any chunking over ``first`` reproduces the same values.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    bg = np.random.Philox(seed=seed_seq(seed, tag))
    pos = first * width
    bg.advance(pos // 4)                # Philox advances in 4-output blocks
    if pos % 4:
        bg.random_raw(int(pos % 4))     # discard to the exact output position
    u = np.random.Generator(bg).random(count * width)
    return u if width == 1 else u.reshape(count, width)


def default_threads() -> int:
    env = os.environ.get("STABLESUMS_THREADS")
    if env:
        return max(1, int(env))
    return 1


def batch_ranges(total: int, batch: int = BATCH) -> list[tuple[int, int, int]]:
    """(batch_index, lo, hi) work items covering range(total)."""
    return [(b, lo, min(lo + batch, total)) for b, lo in enumerate(range(0, total, batch))]


def map_batches(worker, total: int, threads: int = 1, batch: int = BATCH) -> list:
    """Run ``worker(batch_index, lo, hi)`` over all batches, results in batch order.

    numpy releases the GIL in its inner loops, so a thread pool gives real
    speedup for vectorized workers; results are identical for any thread
    count because batching and combination order are fixed.
    """
    items = batch_ranges(total, batch)
    if threads <= 1 or len(items) <= 1:
        return [worker(*it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda it: worker(*it), items))


def combine_mean(parts: list[tuple[float, float, int]]) -> tuple[float, float, int]:
    """Combine per-batch (sum, sum_of_squares, count) into (mean, se, count).

    Partial sums are added with math.fsum in batch order, so the result does
    not depend on how batches were scheduled across threads.
    """
    total = int(sum(p[2] for p in parts))
    if total == 0:
        raise ValueError("no samples to combine")
    s = math.fsum(p[0] for p in parts)
    ss = math.fsum(p[1] for p in parts)
    mean = s / total
    var = max(ss / total - mean * mean, 0.0)
    se = math.sqrt(var / total)
    return mean, se, total
