"""Shared fixtures, strategies, and small function builders."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from bnspectral.boolfn import BoolFn, ProductDist, default_labels
from bnspectral.netlang import And, Const, Expr, Network, Not, Or, Var


def and_fn(n: int) -> BoolFn:
    return BoolFn.from_callable(n, lambda x: 1 if all(v == 1 for v in x) else -1)


def or_fn(n: int) -> BoolFn:
    return BoolFn.from_callable(n, lambda x: 1 if any(v == 1 for v in x) else -1)


def parity_fn(n: int) -> BoolFn:
    return BoolFn.from_callable(n, lambda x: int(np.prod(x)) if n else 1)


def dictator_fn(n: int, i: int) -> BoolFn:
    return BoolFn.from_callable(n, lambda x: x[i])


def const_fn(n: int, sign: int) -> BoolFn:
    return BoolFn.from_callable(n, lambda x: sign)


@st.composite
def bool_fns(draw, min_arity=0, max_arity=8):
    n = draw(st.integers(min_arity, max_arity))
    table = draw(st.integers(0, (1 << (1 << n)) - 1))
    return BoolFn(n, default_labels(n), table)


@st.composite
def product_dists(draw, n):
    probs = draw(st.lists(st.floats(0.05, 0.95), min_size=n, max_size=n))
    return ProductDist(tuple(probs))


@st.composite
def fn_dist_pairs(draw, min_arity=1, max_arity=8):
    f = draw(bool_fns(min_arity, max_arity))
    d = draw(product_dists(f.arity))
    return f, d


@st.composite
def fn_dist_mask_triples(draw, min_arity=1, max_arity=8):
    f, d = draw(fn_dist_pairs(min_arity, max_arity))
    mask = draw(st.integers(0, (1 << f.arity) - 1))
    return f, d, mask


def random_product_dist(rng: np.random.Generator, n: int,
                        lo: float = 0.05, hi: float = 0.95) -> ProductDist:
    return ProductDist(tuple(rng.uniform(lo, hi, size=n)))


def random_bool_fn(rng: np.random.Generator, n: int) -> BoolFn:
    raw = rng.bytes(max(1, (1 << n) + 7 >> 3))
    return BoolFn(n, default_labels(n), int.from_bytes(raw, "little") & ((1 << (1 << n)) - 1))


def random_network(rng: np.random.Generator, max_inputs: int = 12,
                   max_nodes: int = 20, max_depth: int = 4) -> Network:
    """Random feed-forward network with layered definitions."""
    n_inputs = int(rng.integers(2, max_inputs + 1))
    n_nodes = int(rng.integers(1, max_nodes + 1))
    inputs = tuple(f"i{k}" for k in range(n_inputs))
    layers = sorted(int(rng.integers(1, max_depth + 1)) for _ in range(n_nodes))
    defs = []
    available = list(inputs)
    by_layer: dict[int, list[str]] = {}

    def rand_expr(depth: int, pool: list[str]) -> Expr:
        if depth == 0 or rng.random() < 0.3:
            if rng.random() < 0.05:
                return Const(1 if rng.random() < 0.5 else -1)
            return Var(pool[int(rng.integers(0, len(pool)))])
        kind = rng.random()
        if kind < 0.25:
            return Not(rand_expr(depth - 1, pool))
        k = int(rng.integers(2, 4))
        children = tuple(rand_expr(depth - 1, pool) for _ in range(k))
        return And(children) if kind < 0.6 else Or(children)

    for idx, layer in enumerate(layers):
        pool = list(inputs)
        for lay, names in by_layer.items():
            if lay < layer:
                pool.extend(names)
        name = f"n{idx}"
        defs.append((name, rand_expr(3, pool)))
        by_layer.setdefault(layer, []).append(name)
    return Network(inputs, tuple(defs))


def ecoli_fixture_path() -> Path | None:
    """Externally converted regulatory-network file, if present."""
    env = os.environ.get("BNSPECTRAL_ECOLI_BNET")
    candidates = [Path(env)] if env else []
    candidates.append(Path(__file__).resolve().parent.parent / "data" / "ecoli.bnet")
    for path in candidates:
        if path.is_file():
            return path
    return None


@pytest.fixture
def uniform2():
    return ProductDist.uniform(2)


@pytest.fixture
def uniform3():
    return ProductDist.uniform(3)
