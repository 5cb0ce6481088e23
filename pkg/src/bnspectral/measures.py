"""Perturbation and information measures of Boolean functions.

Influence and average sensitivity are computed definitionally (weighted
truth-table sums); their spectral forms are provided separately so each can
check the other.  Conditional entropy and mutual information go through the
spectral characterization, with binary entropy in bits throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boolfn import (
    BoolFn,
    ProductDist,
    Spectrum,
    SubsetMask,
    check_mask,
    compact_weights,
    conditional_expectation_table,
    indices_of,
    relevant_variables,
    subset_coeffs,
    transform,
)

INV_LN4 = 1.0 / math.log(4.0)

# Magnitude of float noise we silently absorb when clamping probabilities
# and mutual informations; anything larger raises.
CLAMP_BUDGET = 1e-9


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p), with 0 log 0 taken as 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0,1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _entropy_arr(p: np.ndarray) -> np.ndarray:
    """Vectorized binary entropy; input may carry <= CLAMP_BUDGET float noise."""
    if p.size and (p.min() < -CLAMP_BUDGET or p.max() > 1.0 + CLAMP_BUDGET):
        raise ValueError("probabilities outside [0,1] beyond tolerance")
    p = np.clip(p, 0.0, 1.0)
    q = 1.0 - p
    # where= guards keep 0 log 0 at exactly 0 without warnings
    term_p = np.zeros_like(p)
    term_q = np.zeros_like(p)
    np.multiply(p, np.log2(p, out=term_p, where=p > 0.0), out=term_p, where=p > 0.0)
    np.multiply(q, np.log2(q, out=term_q, where=q > 0.0), out=term_q, where=q > 0.0)
    return -(term_p + term_q)


def influence(f: BoolFn, d: ProductDist, i: int) -> float:
    """Probability that flipping input ``i`` changes the output."""
    if not 0 <= i < f.arity:
        raise IndexError(f"variable index {i} out of range for arity {f.arity}")
    if f.arity != d.arity:
        raise ValueError("arity mismatch between function and distribution")
    s = f.bits.reshape(-1, 2, 1 << i)
    w = d.weights().reshape(-1, 2, 1 << i)
    differs = s[:, 0, :] != s[:, 1, :]
    return float(np.sum((w[:, 0, :] + w[:, 1, :]) * differs))


def influence_spectral(s: Spectrum, d: ProductDist, i: int) -> float:
    """Influence from the coefficients: sum of squares over sets containing i,
    divided by sigma_i^2."""
    if not 0 <= i < s.arity:
        raise IndexError(f"variable index {i} out of range for arity {s.arity}")
    masks = np.arange(1 << s.arity, dtype=np.int64)
    sel = (masks >> i) & 1 == 1
    return float(np.sum(s.coeffs[sel] ** 2) / d.sigma[i] ** 2)


def avg_sensitivity(f: BoolFn, d: ProductDist, mask: SubsetMask | None = None) -> float:
    """Sum of influences over the variables in ``mask`` (all, if omitted)."""
    if mask is None:
        mask = (1 << f.arity) - 1
    check_mask(mask, f.arity)
    return sum(influence(f, d, i) for i in indices_of(mask))


def avg_sensitivity_spectral(s: Spectrum, d: ProductDist, mask: SubsetMask | None = None) -> float:
    """Spectral form: sum over S of coeff^2 times sum_{i in S and mask} 1/sigma_i^2."""
    if mask is None:
        mask = (1 << s.arity) - 1
    check_mask(mask, s.arity)
    masks = np.arange(1 << s.arity, dtype=np.int64)
    inv_var = np.zeros(1 << s.arity, dtype=np.float64)
    for i in indices_of(mask):
        inv_var += ((masks >> i) & 1) / d.sigma[i] ** 2
    return float(np.dot(s.coeffs ** 2, inv_var))


def output_entropy(f: BoolFn, d: ProductDist) -> float:
    """H(f(X)) in bits."""
    return binary_entropy(prob_one(f, d))


def prob_one(f: BoolFn, d: ProductDist) -> float:
    if f.arity != d.arity:
        raise ValueError("arity mismatch between function and distribution")
    return float(np.dot(d.weights(), f.bits))


def cond_entropy_spectral(s: Spectrum, d: ProductDist, mask: SubsetMask) -> float:
    """H(f(X) | X_mask) from the coefficients of subsets of ``mask``.

    Expected binary entropy of (1 + E[f | X_mask]) / 2 over the masked
    variables' assignments.
    """
    check_mask(mask, s.arity)
    cond = conditional_expectation_table(s, d, mask)
    w = compact_weights(d, mask)
    return float(np.dot(w, _entropy_arr((1.0 + cond) / 2.0)))


def cond_entropy(f: BoolFn, d: ProductDist, mask: SubsetMask) -> float:
    """H(f(X) | X_mask) in bits, iterating only over mask & relevant(f)."""
    check_mask(mask, f.arity)
    live = mask & relevant_variables(f)
    return cond_entropy_spectral(transform(f, d), d, live)


def mutual_information(f: BoolFn, d: ProductDist, mask: SubsetMask) -> float:
    """MI(f(X); X_mask) = H(f(X)) - H(f(X) | X_mask), in bits."""
    check_mask(mask, f.arity)
    s = transform(f, d)
    live = mask & relevant_variables(f)
    return mi_spectral(s, d, live)


def mi_spectral(s: Spectrum, d: ProductDist, mask: SubsetMask) -> float:
    h_out = binary_entropy(_clamp_prob((1.0 + s.coeff(0)) / 2.0))
    mi = h_out - cond_entropy_spectral(s, d, mask)
    if mi < -CLAMP_BUDGET:
        raise AssertionError(f"mutual information {mi} below zero beyond tolerance")
    return max(mi, 0.0)


def _clamp_prob(p: float) -> float:
    if not -CLAMP_BUDGET <= p <= 1.0 + CLAMP_BUDGET:
        raise ValueError(f"probability {p} outside [0,1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def mi_single_from_coeffs(c_empty: float, c_i: float, p_i: float) -> float:
    """MI(f(X); X_i) as a function of the empty-set and singleton coefficients.

    Useful for studying how the single-variable mutual information varies
    with the singleton coefficient at fixed bias.
    """
    d = ProductDist((p_i,))
    h_out = binary_entropy(_clamp_prob((1.0 + c_empty) / 2.0))
    acc = 0.0
    for x, w in ((-1, 1.0 - p_i), (1, p_i)):
        q = _clamp_prob((1.0 + c_empty + c_i * d.phi(0, x)) / 2.0)
        acc += w * binary_entropy(q)
    return h_out - acc


@dataclass(frozen=True)
class EntropyBound:
    """Sandwich on H(f(X)|X_A) from the subset-restricted spectral weight."""

    lower: float
    exact: float
    upper: float


def entropy_bounds(f: BoolFn, d: ProductDist, mask: SubsetMask) -> EntropyBound:
    """Lower/upper bounds 1 - W and (1 - W)^(1/ln 4) around the exact value,
    where W is the squared coefficient weight on subsets of ``mask``."""
    check_mask(mask, f.arity)
    s = transform(f, d)
    weight = float(np.sum(subset_coeffs(s, mask) ** 2))
    gap = min(max(1.0 - weight, 0.0), 1.0)
    live = mask & relevant_variables(f)
    return EntropyBound(
        lower=gap,
        exact=cond_entropy_spectral(s, d, live),
        upper=gap ** INV_LN4,
    )


def psi(x: float) -> float:
    """Entropy-variance gap term x^(1/ln 4) - x, in [0, 0.12) on [0,1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"argument {x} outside [0,1]")
    return x ** INV_LN4 - x


def variance(f: BoolFn, d: ProductDist) -> float:
    """Var f(X) = 1 - coeff(empty)^2, clamped against float noise."""
    p1 = _clamp_prob(prob_one(f, d))
    return 4.0 * p1 * (1.0 - p1)


def mi_influence_bound_check(f: BoolFn, d: ProductDist, mask: SubsetMask) -> tuple[float, float]:
    """Both sides of the sensitivity lower bound in terms of MI.

    Returns (sensitivity over mask, min 1/sigma^2 times (MI - psi(Var))).
    The caller asserts lhs >= rhs.
    """
    check_mask(mask, f.arity)
    if mask == 0:
        raise ValueError("mask must be nonempty")
    lhs = avg_sensitivity(f, d, mask)
    mi = mutual_information(f, d, mask)
    min_inv = min(1.0 / d.sigma[i] ** 2 for i in indices_of(mask))
    rhs = min_inv * (mi - psi(variance(f, d)))
    return lhs, rhs


def influence_entropy_identity(f: BoolFn, d: ProductDist, i: int) -> tuple[float, float]:
    """Influence of ``i`` alongside H(f(X)|X_rest) / H(X_i); the two agree."""
    if not 0 <= i < f.arity:
        raise IndexError(f"variable index {i} out of range for arity {f.arity}")
    rest = ((1 << f.arity) - 1) & ~(1 << i)
    ratio = cond_entropy(f, d, rest) / binary_entropy(d.probs[i])
    return influence(f, d, i), ratio


def independence_test(s: Spectrum, mask: SubsetMask, tol: float = 1e-9) -> bool:
    """True iff every nonempty subset of ``mask`` has |coefficient| <= tol,
    which holds exactly when f(X) and X_mask are statistically independent."""
    check_mask(mask, s.arity)
    sub = subset_coeffs(s, mask)
    return bool(np.all(np.abs(sub[1:]) <= tol))


@dataclass(frozen=True)
class UnatenessProfile:
    """Per-variable local monotonicity.

    Polarity entries: +1 (nondecreasing), -1 (nonincreasing), None for an
    irrelevant variable (either direction holds), 0 when neither direction
    holds, which witnesses non-unateness.
    """

    is_unate: bool
    polarity: tuple[int | None, ...]


def unateness(f: BoolFn) -> UnatenessProfile:
    """Compare the two restrictions of each variable pointwise."""
    polarity: list[int | None] = []
    is_unate = True
    for i in range(f.arity):
        view = f.signs.reshape(-1, 2, 1 << i)
        lo, hi = view[:, 0, :], view[:, 1, :]
        up = bool(np.all(lo <= hi))
        down = bool(np.all(hi <= lo))
        if up and down:
            polarity.append(None)
        elif up:
            polarity.append(1)
        elif down:
            polarity.append(-1)
        else:
            polarity.append(0)
            is_unate = False
    return UnatenessProfile(is_unate, tuple(polarity))


def unate_coefficient_check(f: BoolFn, d: ProductDist) -> list[tuple[int, float, float]]:
    """Rows (i, singleton coefficient, a_i sigma_i I_i) for a unate function."""
    prof = unateness(f)
    if not prof.is_unate:
        raise ValueError("function is not unate")
    s = transform(f, d)
    rows = []
    for i in range(f.arity):
        a = prof.polarity[i] if prof.polarity[i] is not None else 1
        rows.append((i, s.coeff(1 << i), a * float(d.sigma[i]) * influence(f, d, i)))
    return rows


NOISE_EXACT_MAX_ARITY = 12


def noise_sensitivity(f: BoolFn, d: ProductDist, eps: float, mode: str = "exact",
                      samples: int = 10 ** 6, seed: int | None = None) -> float:
    """Probability the output changes when each input flips independently
    with probability ``eps``."""
    if not 0.0 <= eps <= 0.5:
        raise ValueError(f"flip probability {eps} outside [0, 1/2]")
    if mode == "exact":
        return _noise_sensitivity_exact(f, d, eps)
    if mode == "monte-carlo":
        est, _ = noise_sensitivity_mc(f, d, eps, samples=samples, seed=seed)
        return est
    raise ValueError(f"unknown mode {mode!r}")


def _noise_sensitivity_exact(f: BoolFn, d: ProductDist, eps: float) -> float:
    if f.arity > NOISE_EXACT_MAX_ARITY:
        raise ValueError(
            f"exact noise sensitivity needs arity <= {NOISE_EXACT_MAX_ARITY}, got {f.arity}")
    if f.arity != d.arity:
        raise ValueError("arity mismatch between function and distribution")
    n = f.arity
    s = f.bits
    w = d.weights()
    idx = np.arange(1 << n)
    total = 0.0
    for e in range(1 << n):
        k = bin(e).count("1")
        pr = eps ** k * (1.0 - eps) ** (n - k)
        if pr == 0.0:
            continue
        total += pr * float(np.dot(w, s != s[idx ^ e]))
    return total


def noise_sensitivity_mc(f: BoolFn, d: ProductDist, eps: float,
                         samples: int = 10 ** 6, seed: int | None = None) -> tuple[float, float]:
    """Monte-Carlo estimate with its standard error, seedable for reproducibility."""
    if not 0.0 <= eps <= 0.5:
        raise ValueError(f"flip probability {eps} outside [0, 1/2]")
    if f.arity != d.arity:
        raise ValueError("arity mismatch between function and distribution")
    rng = np.random.default_rng(seed)
    n = f.arity
    pow2 = (1 << np.arange(n)).astype(np.int64)
    x_bits = (rng.random((samples, n)) < d.p).astype(np.int64)
    flips = (rng.random((samples, n)) < eps).astype(np.int64)
    xi = x_bits @ pow2
    yi = (x_bits ^ flips) @ pow2
    s = f.bits
    diff = s[xi] != s[yi]
    est = float(np.mean(diff))
    return est, math.sqrt(max(est * (1.0 - est), 0.0) / samples)
