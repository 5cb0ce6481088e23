"""Random Boolean function generators for network baselines and tests.

Plain functions are drawn uniformly over all 2^(2^k) truth tables.  Unate
functions are drawn exactly uniformly for k <= 4 by enumerating the class;
for larger k a Markov chain over monotone functions (single-point flips
that preserve monotonicity, burned in, then composed with a uniform random
polarity vector) is used.  The chain targets the uniform distribution over
monotone functions, but the polarity composition overweights functions
with irrelevant variables, so the k >= 5 sampler is approximate.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .boolfn import BoolFn, default_labels
from .measures import unateness

UNATE_ENUM_MAX_ARITY = 4


def _random_table(k: int, rng: np.random.Generator) -> int:
    nbytes = max(1, (1 << k) + 7 >> 3)
    raw = rng.bytes(nbytes)
    table = int.from_bytes(raw, "little")
    return table & ((1 << (1 << k)) - 1)


def sample_random_function(k: int, rng: np.random.Generator,
                           labels: tuple[str, ...] | None = None) -> BoolFn:
    """Uniform draw over all Boolean functions of k variables."""
    return BoolFn(k, labels if labels is not None else default_labels(k), _random_table(k, rng))


@lru_cache(maxsize=None)
def enumerate_unate_tables(k: int) -> tuple[int, ...]:
    """All unate truth tables of arity k (k <= 4 keeps this tractable)."""
    if k > UNATE_ENUM_MAX_ARITY:
        raise ValueError(f"unate enumeration supported up to arity {UNATE_ENUM_MAX_ARITY}")
    labels = default_labels(k)
    out = []
    for table in range(1 << (1 << k)):
        if unateness(BoolFn(k, labels, table)).is_unate:
            out.append(table)
    return tuple(out)


def _flip_ok(table: int, t: int, k: int) -> bool:
    """May bit t of a monotone table be flipped without breaking monotonicity?"""
    if (table >> t) & 1:
        # clearing t: all immediate predecessors must already be 0
        for j in range(k):
            if (t >> j) & 1 and (table >> (t & ~(1 << j))) & 1:
                return False
    else:
        # setting t: all immediate successors must already be 1
        for j in range(k):
            if not (t >> j) & 1 and not (table >> (t | (1 << j))) & 1:
                return False
    return True


def sample_monotone_mcmc(k: int, rng: np.random.Generator, burn_in: int | None = None) -> int:
    """Truth table of a monotone function via single-point-flip Glauber steps.

    The proposal (flip a uniformly chosen point if the result stays
    monotone) is symmetric, so the stationary distribution is uniform over
    monotone functions; the default burn-in of 32 k 2^k steps from the
    all-false function is a pragmatic mixing budget, not a proven one.
    """
    size = 1 << k
    steps = 32 * k * size if burn_in is None else burn_in
    table = 0
    points = rng.integers(0, size, size=steps, dtype=np.int64)
    for t in map(int, points):
        if _flip_ok(table, t, k):
            table ^= 1 << t
    return table


def _apply_polarities(table: int, k: int, neg_mask: int) -> int:
    """Negate the variables in neg_mask: new[b] = old[b ^ neg_mask]."""
    if neg_mask == 0:
        return table
    out = 0
    for b in range(1 << k):
        if (table >> (b ^ neg_mask)) & 1:
            out |= 1 << b
    return out


def sample_random_unate(k: int, rng: np.random.Generator,
                        labels: tuple[str, ...] | None = None,
                        burn_in: int | None = None) -> BoolFn:
    """Draw a unate function of k variables (exact for k <= 4)."""
    names = labels if labels is not None else default_labels(k)
    if k <= UNATE_ENUM_MAX_ARITY:
        tables = enumerate_unate_tables(k)
        return BoolFn(k, names, tables[int(rng.integers(0, len(tables)))])
    monotone = sample_monotone_mcmc(k, rng, burn_in)
    neg_mask = int(rng.integers(0, 1 << k))
    return BoolFn(k, names, _apply_polarities(monotone, k, neg_mask))


def random_threshold_fn(n: int, rng: np.random.Generator,
                        labels: tuple[str, ...] | None = None) -> tuple[BoolFn, tuple[int, ...]]:
    """Random linear threshold function with random polarities.

    Returns the function and the polarity vector used; the result is unate
    with each polarity matching the sign of its weight.
    """
    weights = rng.standard_normal(n)
    signs_a = np.where(rng.random(n) < 0.5, 1, -1)
    theta = rng.standard_normal() * max(1.0, np.sqrt(n))
    idx = np.arange(1 << n, dtype=np.int64)
    cols = np.stack([(2.0 * ((idx >> i) & 1) - 1.0) for i in range(n)]) if n else np.zeros((0, 1))
    total = (np.abs(weights)[:, None] * signs_a[:, None] * cols).sum(axis=0) if n else np.zeros(1)
    bits = (total >= theta).astype(int)
    fn = BoolFn.from_bit_array(bits, labels if labels is not None else default_labels(n))
    return fn, tuple(int(a) for a in signs_a)
