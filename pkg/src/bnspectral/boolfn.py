"""Boolean functions over {-1,+1}^n, product input distributions, and the
orthonormal (Bahadur) basis transform.

Conventions used throughout the package:

* Assignment index ``b``: bit ``i`` of ``b`` is 1 iff ``x_i = +1``.
* Truth table: bit ``b`` of ``BoolFn.table`` is 1 iff the function value at
  assignment ``b`` is +1 (0 encodes -1).
* Subset masks: a set ``S`` of variable indices is the int with bit ``i``
  set for each ``i`` in ``S``.  ``Spectrum.coeffs[m]`` is the coefficient
  of the basis function indexed by the subset encoded in ``m``.

Variable ``i`` therefore corresponds to a stride-``2**i`` pass in the fast
transform, and truth tables serialize to little-endian hex strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

ARITY_CAP_DEFAULT = 25

SubsetMask = int


class ArityCapError(ValueError):
    """Dense 2^n construction refused because n exceeds the configured cap."""

    def __init__(self, arity: int, cap: int, name: str | None = None):
        self.arity = arity
        self.cap = cap
        self.name = name
        where = f" for node {name!r}" if name else ""
        super().__init__(f"arity {arity} exceeds cap {cap}{where}")


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


def mask_of(indices: Iterable[int]) -> SubsetMask:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: SubsetMask) -> tuple[int, ...]:
    out = []
    i = 0
    m = mask
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def check_mask(mask: SubsetMask, arity: int) -> None:
    if mask < 0 or mask >> arity:
        raise ValueError(f"mask {mask:#x} has bits outside arity {arity}")


def _check_cap(arity: int, cap: int | None, name: str | None = None) -> None:
    limit = ARITY_CAP_DEFAULT if cap is None else cap
    if arity > limit:
        raise ArityCapError(arity, limit, name)


@dataclass(frozen=True)
class BoolFn:
    """A Boolean function as a bit-packed truth table with labeled inputs."""

    arity: int
    labels: tuple[str, ...]
    table: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be nonnegative")
        if len(self.labels) != self.arity:
            raise ValueError("labels length must equal arity")
        if len(set(self.labels)) != self.arity:
            raise ValueError("labels must be unique")
        if self.table < 0 or self.table.bit_length() > (1 << self.arity):
            raise ValueError("table does not fit in 2^arity bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int], labels: Sequence[str] | None = None) -> BoolFn:
        """Build from 2^n output bits (1 means +1), index order as above."""
        bits = list(bits)
        n = (len(bits) - 1).bit_length()
        if len(bits) != 1 << n:
            raise ValueError("bit count must be a power of two")
        table = 0
        for b, v in enumerate(bits):
            if v not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            table |= v << b
        return cls(n, tuple(labels) if labels is not None else default_labels(n), table)

    @classmethod
    def from_bit_array(cls, bits: np.ndarray, labels: Sequence[str] | None = None) -> BoolFn:
        """Packed-int construction from a 0/1 array of length 2^n."""
        n = (len(bits) - 1).bit_length()
        if len(bits) != 1 << n:
            raise ValueError("bit count must be a power of two")
        packed = np.packbits(bits.astype(np.uint8), bitorder="little")
        table = int.from_bytes(packed.tobytes(), "little")
        return cls(n, tuple(labels) if labels is not None else default_labels(n), table)

    @classmethod
    def from_signs(cls, signs: Sequence[int] | np.ndarray, labels: Sequence[str] | None = None) -> BoolFn:
        arr = np.asarray(signs)
        if not np.all(np.abs(arr) == 1):
            raise ValueError("signs must be +1 or -1")
        return cls.from_bit_array(((arr + 1) // 2).astype(np.uint8), labels)

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[tuple[int, ...]], int],
                      labels: Sequence[str] | None = None) -> BoolFn:
        """Tabulate ``fn`` over all sign assignments of ``n`` variables."""
        _check_cap(n, None)
        bits = []
        for b in range(1 << n):
            x = tuple(1 if (b >> i) & 1 else -1 for i in range(n))
            v = fn(x)
            if v not in (-1, 1):
                raise ValueError("function must return +1 or -1")
            bits.append((v + 1) // 2)
        return cls.from_bits(bits, labels)

    @classmethod
    def from_hex(cls, hex_str: str, labels: Sequence[str]) -> BoolFn:
        n = len(labels)
        nbytes = max(1, (1 << n) + 7 >> 3)
        raw = bytes.fromhex(hex_str)
        if len(raw) != nbytes:
            raise ValueError(f"expected {nbytes} bytes of table data, got {len(raw)}")
        table = int.from_bytes(raw, "little")
        if table.bit_length() > (1 << n):
            raise ValueError("table data has bits beyond 2^arity")
        return cls(n, tuple(labels), table)

    def to_hex(self) -> str:
        nbytes = max(1, (1 << self.arity) + 7 >> 3)
        return self.table.to_bytes(nbytes, "little").hex()

    @cached_property
    def bits(self) -> np.ndarray:
        """Output bits as a read-only uint8 array of length 2^arity."""
        size = 1 << self.arity
        nbytes = max(1, size + 7 >> 3)
        raw = np.frombuffer(self.table.to_bytes(nbytes, "little"), dtype=np.uint8)
        arr = np.unpackbits(raw, bitorder="little")[:size].copy()
        arr.flags.writeable = False
        return arr

    @cached_property
    def signs(self) -> np.ndarray:
        """Outputs as a read-only float64 array of +1/-1 values."""
        arr = self.bits.astype(np.float64) * 2.0 - 1.0
        arr.flags.writeable = False
        return arr

    def index_of(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None


def evaluate(f: BoolFn, x: Sequence[int]) -> int:
    """Evaluate ``f`` at a full sign assignment, returning +1 or -1."""
    if len(x) != f.arity:
        raise ValueError(f"assignment length {len(x)} != arity {f.arity}")
    b = 0
    for i, v in enumerate(x):
        if v == 1:
            b |= 1 << i
        elif v != -1:
            raise ValueError("assignment entries must be +1 or -1")
    return 1 if (f.table >> b) & 1 else -1


def relevant_variables(f: BoolFn) -> SubsetMask:
    """Mask of variables whose flip changes the output for some input."""
    mask = 0
    s = f.bits
    for i in range(f.arity):
        view = s.reshape(-1, 2, 1 << i)
        if np.any(view[:, 0, :] != view[:, 1, :]):
            mask |= 1 << i
    return mask


def restrict(f: BoolFn, i: int, v: int) -> BoolFn:
    """Fix ``x_i = v`` and drop the variable, giving an arity n-1 function."""
    if not 0 <= i < f.arity:
        raise IndexError(f"variable index {i} out of range for arity {f.arity}")
    if v not in (-1, 1):
        raise ValueError("restriction value must be +1 or -1")
    sel = 1 if v == 1 else 0
    sub = f.bits.reshape(-1, 2, 1 << i)[:, sel, :].reshape(-1)
    labels = f.labels[:i] + f.labels[i + 1:]
    return BoolFn.from_bit_array(sub, labels)


@dataclass(frozen=True)
class ProductDist:
    """Independent inputs with Pr[X_i = +1] = probs[i], each strictly in (0,1)."""

    probs: tuple[float, ...]

    def __post_init__(self):
        for p in self.probs:
            if not 0.0 < p < 1.0:
                raise ValueError(f"probability {p} outside the open interval (0,1)")

    @classmethod
    def uniform(cls, n: int) -> ProductDist:
        return cls((0.5,) * n)

    @property
    def arity(self) -> int:
        return len(self.probs)

    @cached_property
    def p(self) -> np.ndarray:
        arr = np.array(self.probs, dtype=np.float64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def mu(self) -> np.ndarray:
        arr = 2.0 * self.p - 1.0
        arr.flags.writeable = False
        return arr

    @cached_property
    def sigma(self) -> np.ndarray:
        arr = 2.0 * np.sqrt(self.p * (1.0 - self.p))
        arr.flags.writeable = False
        return arr

    def marginal(self, indices: Sequence[int]) -> ProductDist:
        return ProductDist(tuple(self.probs[i] for i in indices))

    def weights(self) -> np.ndarray:
        """Pr[X = x] for every assignment index, as a 2^n array."""
        w = np.ones(1, dtype=np.float64)
        for p in self.probs:
            w = np.concatenate([w * (1.0 - p), w * p])
        return w

    def phi(self, i: int, x: int) -> float:
        """Single-variable basis factor (x - mu_i) / sigma_i."""
        return (x - self.mu[i]) / self.sigma[i]


def _check_same_arity(f_arity: int, d: ProductDist) -> None:
    if f_arity != d.arity:
        raise ValueError(f"arity mismatch: function {f_arity}, distribution {d.arity}")


def basis_eval(mask: SubsetMask, x: Sequence[int], d: ProductDist) -> float:
    """Value of the basis function for subset ``mask`` at assignment ``x``.

    The empty set gives the constant 1.
    """
    if len(x) != d.arity:
        raise ValueError(f"assignment length {len(x)} != arity {d.arity}")
    check_mask(mask, d.arity)
    out = 1.0
    for i in indices_of(mask):
        out *= d.phi(i, x[i])
    return out


@dataclass(frozen=True)
class Spectrum:
    """Dense coefficient vector of a function in the product-measure basis."""

    arity: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (1 << self.arity,):
            raise ValueError("coeffs must have length 2^arity")
        self.coeffs.flags.writeable = False

    def coeff(self, mask: SubsetMask) -> float:
        check_mask(mask, self.arity)
        return float(self.coeffs[mask])


def transform(f: BoolFn, d: ProductDist, cap: int | None = None) -> Spectrum:
    """Coefficients of ``f`` in the basis induced by ``d``.

    Runs the per-variable butterfly in O(n 2^n): stage ``i`` projects each
    (x_i = -1, x_i = +1) pair onto {1, (x_i - mu_i)/sigma_i}.  With
    q = 1 - p the pair (a, b) maps to (q a + p b, (b - a) sigma / 2).
    """
    _check_same_arity(f.arity, d)
    _check_cap(f.arity, cap)
    arr = f.signs.copy()
    for i in range(f.arity):
        p = d.probs[i]
        half_sigma = d.sigma[i] / 2.0
        view = arr.reshape(-1, 2, 1 << i)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = (1.0 - p) * a + p * b
        view[:, 1, :] = (b - a) * half_sigma
    return Spectrum(f.arity, arr)


def _phi_table(d: ProductDist, x: Sequence[int]) -> np.ndarray:
    """Basis values for every subset at one assignment, via a butterfly."""
    out = np.ones(1 << d.arity, dtype=np.float64)
    for i in range(d.arity):
        phi = d.phi(i, x[i])
        view = out.reshape(-1, 2, 1 << i)
        view[:, 1, :] *= phi
    return out


def reconstruct(s: Spectrum, d: ProductDist, x: Sequence[int]) -> float:
    """Evaluate the multilinear polynomial with coefficients ``s`` at ``x``."""
    _check_same_arity(s.arity, d)
    if len(x) != s.arity:
        raise ValueError(f"assignment length {len(x)} != arity {s.arity}")
    return float(np.dot(s.coeffs, _phi_table(d, x)))


def reconstruct_table(s: Spectrum, d: ProductDist) -> np.ndarray:
    """Polynomial values at all 2^n assignments (inverse butterfly)."""
    _check_same_arity(s.arity, d)
    arr = s.coeffs.copy()
    for i in range(s.arity):
        phi_neg = d.phi(i, -1)
        phi_pos = d.phi(i, 1)
        view = arr.reshape(-1, 2, 1 << i)
        a = view[:, 0, :].copy()
        b = view[:, 1, :].copy()
        view[:, 0, :] = a + b * phi_neg
        view[:, 1, :] = a + b * phi_pos
    return arr


def subset_coeffs(s: Spectrum, mask: SubsetMask) -> np.ndarray:
    """Coefficients of all subsets of ``mask``, compacted to 2^|mask| entries.

    Entry ``c`` corresponds to the subset whose j-th compact bit selects the
    j-th (ascending) variable of ``mask``.
    """
    check_mask(mask, s.arity)
    pos = indices_of(mask)
    k = len(pos)
    c = np.arange(1 << k, dtype=np.int64)
    full = np.zeros(1 << k, dtype=np.int64)
    for j, p in enumerate(pos):
        full |= ((c >> j) & 1) << p
    return s.coeffs[full]


def conditional_expectation_table(s: Spectrum, d: ProductDist, mask: SubsetMask) -> np.ndarray:
    """E[f | X_mask = x] for every assignment of the masked variables.

    Returned in compact index order (bit j of the index is the sign of the
    j-th ascending variable of ``mask``).  Equals the polynomial restricted
    to coefficients of subsets of ``mask``.
    """
    _check_same_arity(s.arity, d)
    pos = indices_of(mask)
    arr = subset_coeffs(s, mask).copy()
    for j, p in enumerate(pos):
        phi_neg = d.phi(p, -1)
        phi_pos = d.phi(p, 1)
        view = arr.reshape(-1, 2, 1 << j)
        a = view[:, 0, :].copy()
        b = view[:, 1, :].copy()
        view[:, 0, :] = a + b * phi_neg
        view[:, 1, :] = a + b * phi_pos
    return arr


def compact_weights(d: ProductDist, mask: SubsetMask) -> np.ndarray:
    """Marginal Pr[X_mask = x] in the same compact order."""
    w = np.ones(1, dtype=np.float64)
    for p in (d.probs[i] for i in indices_of(mask)):
        w = np.concatenate([w * (1.0 - p), w * p])
    return w


def conditional_expectation(s: Spectrum, d: ProductDist, mask: SubsetMask,
                            xa: Mapping[int, int]) -> float:
    """E[f(X) | X_A = x_A] as the subset-restricted polynomial at ``x_A``."""
    check_mask(mask, s.arity)
    if set(xa) != set(indices_of(mask)):
        raise ValueError("partial assignment must cover exactly the masked variables")
    pos = indices_of(mask)
    k = len(pos)
    prod = np.ones(1 << k, dtype=np.float64)
    for j, p in enumerate(pos):
        v = xa[p]
        if v not in (-1, 1):
            raise ValueError("assignment entries must be +1 or -1")
        view = prod.reshape(-1, 2, 1 << j)
        view[:, 1, :] *= d.phi(p, v)
    return float(np.dot(subset_coeffs(s, mask), prod))
