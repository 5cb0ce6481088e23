"""Determinative power, uncertainty curves, scatter, and baselines."""

import numpy as np
import pytest

from bnspectral.analysis import (
    BaselineSpec,
    baseline_curves,
    determinative_power,
    sensitivity_scatter,
    uncertainty_curve,
)
from bnspectral.boolfn import ProductDist, mask_of
from bnspectral.measures import binary_entropy
from bnspectral.netlang import collapse, localize, node_tables, parse
from bnspectral.reference import network_cond_entropy

from conftest import random_network


def toy_network():
    return parse("""\
@inputs a b c d
n1 = a AND b
n2 = a OR (b AND NOT c)
n3 = NOT a
n4 = c AND NOT c
""")


class TestDeterminativePower:
    def test_dictator_copies(self):
        # m copies of a dictatorship on x1: D(x1) = m h(p1)
        m = 5
        text = "\n".join(f"y{k} = x1" for k in range(m)) + "\n"
        c = collapse(parse(text))
        for p in (0.5, 0.3):
            d = ProductDist((p,))
            r = determinative_power(c, d)
            assert r.d_values["x1"] == pytest.approx(m * binary_entropy(p), abs=1e-9)

    def test_input_feeding_constant_scores_zero(self):
        c = collapse(parse("y = x OR NOT x\nz = w\n"))
        r = determinative_power(c, ProductDist.uniform(2))
        assert r.d_values["x"] == 0.0
        assert r.d_values["w"] == pytest.approx(1.0, abs=1e-12)
        assert r.tau == ("w", "x")

    def test_tie_break_lexicographic(self):
        c = collapse(parse("y1 = b\ny2 = a\n"))
        r = determinative_power(c, ProductDist.uniform(2))
        assert r.tau == ("a", "b")

    def test_parity_node_contributes_nothing(self):
        c = collapse(parse("y = (a AND NOT b) OR (b AND NOT a)\n"))
        r = determinative_power(c, ProductDist.uniform(2))
        assert r.d_values == {"a": 0.0, "b": 0.0}

    def test_threads_match_sequential(self):
        c = collapse(toy_network())
        d = ProductDist.uniform(4)
        seq = determinative_power(c, d, threads=1)
        par = determinative_power(c, d, threads=4)
        assert seq == par

    def test_missing_probabilities(self):
        c = collapse(toy_network())
        with pytest.raises(ValueError, match="declares"):
            determinative_power(c, ProductDist.uniform(3))


class TestUncertaintyCurve:
    def test_endpoints(self):
        c = collapse(toy_network())
        d = ProductDist.uniform(4)
        r = determinative_power(c, d)
        curve = uncertainty_curve(c, d, r.tau)
        values = curve.values
        assert values[-1] == pytest.approx(0.0, abs=1e-12)
        assert values[0] <= len(c.nodes)
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_a0_is_sum_of_node_entropies(self):
        c = collapse(parse("y = a AND b\nz = NOT a\n"))
        d = ProductDist.uniform(2)
        curve = uncertainty_curve(c, d, ("a", "b"), L=0)
        assert curve.values[0] == pytest.approx(binary_entropy(0.25) + 1.0, abs=1e-12)

    def test_invalid_permutation(self):
        c = collapse(toy_network())
        d = ProductDist.uniform(4)
        with pytest.raises(ValueError):
            uncertainty_curve(c, d, ("a", "a", "b"))
        with pytest.raises(ValueError):
            uncertainty_curve(c, d, ("a", "nope"))
        with pytest.raises(ValueError):
            uncertainty_curve(c, d, ("a",), L=2)

    def test_upper_bounds_exact_joint_entropy(self):
        rng = np.random.default_rng(19)
        for _ in range(25):
            net = random_network(rng, max_inputs=8, max_nodes=5, max_depth=3)
            c = collapse(net)
            d = ProductDist.uniform(len(net.inputs))
            tau = determinative_power(c, d).tau
            curve = uncertainty_curve(c, d, tau)
            tables = np.stack([node_tables(net)[name] for name, _ in net.defs])
            rank = {name: i for i, name in enumerate(net.inputs)}
            for l, a_l in curve.points:
                known = mask_of(rank[name] for name in tau[:l])
                exact = network_cond_entropy(tables, d, known)
                assert exact <= a_l + 1e-9


class TestGoldenThreeNode:
    # hand-computed via the definitional sums at uniform inputs:
    # H(y)=H(z)=h(1/4), H(y|a)=H(z|a)=1/2, w is a dictatorship on a
    H_QUARTER = 0.811278124459133
    MI_ONE = H_QUARTER - 0.5

    def net(self):
        return collapse(parse("y = a AND b\nz = a OR b\nw = NOT a\n"))

    def test_d_values(self):
        r = determinative_power(self.net(), ProductDist.uniform(2))
        assert r.d_values["a"] == pytest.approx(1.0 + 2 * self.MI_ONE, abs=1e-12)
        assert r.d_values["b"] == pytest.approx(2 * self.MI_ONE, abs=1e-12)
        assert r.tau == ("a", "b")

    def test_curve(self):
        c = self.net()
        d = ProductDist.uniform(2)
        curve = uncertainty_curve(c, d, ("a", "b"))
        assert curve.values[0] == pytest.approx(2 * self.H_QUARTER + 1.0, abs=1e-12)
        assert curve.values[1] == pytest.approx(1.0, abs=1e-12)
        assert curve.values[2] == pytest.approx(0.0, abs=1e-12)

    def test_scatter(self):
        recs = {r.name: r for r in sensitivity_scatter(self.net(), ProductDist.uniform(2))}
        assert recs["y"].avg_sensitivity == pytest.approx(1.0, abs=1e-12)
        assert recs["y"].prob_one == pytest.approx(0.25, abs=1e-15)
        assert recs["y"].poincare_lower == pytest.approx(0.75, abs=1e-12)
        assert recs["z"].prob_one == pytest.approx(0.75, abs=1e-15)
        assert recs["w"].poincare_lower == pytest.approx(1.0, abs=1e-12)


class TestSensitivityScatter:
    def test_constant_node(self):
        c = collapse(parse("y = 1\n"))
        rec = sensitivity_scatter(c, ProductDist.uniform(0))[0]
        assert rec.in_degree == 0
        assert rec.avg_sensitivity == 0.0
        assert rec.prob_one in (0.0, 1.0)
        assert rec.poincare_lower == 0.0

    def test_parity3_node(self):
        c = collapse(parse("y = (a AND b AND c) OR (a AND NOT b AND NOT c) "
                           "OR (NOT a AND b AND NOT c) OR (NOT a AND NOT b AND c)\n"))
        rec = sensitivity_scatter(c, ProductDist.uniform(3))[0]
        assert rec.in_degree == 3
        assert rec.avg_sensitivity == pytest.approx(3.0, abs=1e-9)
        assert rec.prob_one == pytest.approx(0.5, abs=1e-12)
        assert rec.poincare_lower == pytest.approx(1.0, abs=1e-9)
        assert rec.avg_sensitivity >= rec.poincare_lower

    def test_lower_bound_holds_random(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            net = random_network(rng, max_inputs=7, max_nodes=8)
            c = collapse(net)
            d = ProductDist(tuple(rng.uniform(0.1, 0.9, size=len(net.inputs))))
            for rec in sensitivity_scatter(c, d):
                assert rec.avg_sensitivity >= rec.poincare_lower - 1e-12

    def test_uniform_bound_is_4p1mp(self):
        c = collapse(parse("y = a AND b\n"))
        rec = sensitivity_scatter(c, ProductDist.uniform(2))[0]
        assert rec.poincare_lower == pytest.approx(4 * 0.25 * 0.75, abs=1e-12)


class TestBaselines:
    def test_reproducible(self):
        net = toy_network()
        d = ProductDist.uniform(4)
        spec = BaselineSpec("exchange-random", trials=5, seed=11)
        a = baseline_curves(net, spec, d)
        b = baseline_curves(net, spec, d)
        assert a == b

    def test_modes_run(self):
        net = parse("\n".join(f"y{k} = a AND b" for k in range(8)) + "\n")
        d = ProductDist.uniform(2)
        for mode in ("exchange-random", "exchange-unate",
                     "random-topology-random", "random-topology-unate"):
            res = baseline_curves(net, BaselineSpec(mode, trials=2, seed=5), d, L=2)
            assert len(res.mean.values) == 3
            assert res.resampled >= 0

    def test_single_trial_zero_stddev(self):
        res = baseline_curves(toy_network(), BaselineSpec("exchange-random", 1, 3),
                              ProductDist.uniform(4), L=2)
        assert res.stddev == (0.0, 0.0, 0.0)

    def test_exchange_preserves_in_degree(self):
        from bnspectral.analysis import _exchanged_local

        ln = localize(toy_network())
        swapped = _exchanged_local(ln, np.random.default_rng(2), unate=False)
        for before, after in zip(ln.nodes, swapped.nodes):
            assert before.args == after.args
            assert after.fn.arity == len(before.args)

    def test_random_topology_out_degree(self):
        from bnspectral.analysis import _random_topology_local

        inputs = tuple(f"i{k}" for k in range(5))
        names = tuple(f"y{k}" for k in range(10))
        ln = _random_topology_local(inputs, names, np.random.default_rng(3),
                                    unate=False, out_degree=8)
        counts = {name: 0 for name in inputs}
        for node in ln.nodes:
            assert len(set(node.args)) == len(node.args)
            for a in node.args:
                counts[a] += 1
        assert all(v == 8 for v in counts.values())

    def test_random_topology_needs_enough_nodes(self):
        net = toy_network()  # 4 nodes < 8
        with pytest.raises(ValueError, match="out-degree"):
            baseline_curves(net, BaselineSpec("random-topology-random", 1, 1),
                            ProductDist.uniform(4), L=1)

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            BaselineSpec("exchange-random", trials=0, seed=1)
        with pytest.raises(ValueError):
            BaselineSpec("bogus", trials=1, seed=1)
