import math

import numpy as np
import pytest

from barypot import (
    DensitySpec,
    WeightSet,
    basis_abs,
    generate_nodes,
    half_i_pole_field,
    interpolate,
    lebesgue_constant,
    lebesgue_function,
    no_field,
    pole_field,
    weight_ratio_log,
    weights_from_nodes,
)
from barypot.density import NodeSet

LOG2 = math.log(2.0)


def explicit(nodes):
    nodes = np.asarray(nodes, dtype=float)
    return NodeSet(n=len(nodes) - 1, nodes=nodes, source="explicit")


def berrut_weights(n):
    signs = np.where(np.arange(n + 1) % 2 == 0, 1.0, -1.0)
    return WeightSet(n=n, signs=signs, log_abs=np.zeros(n + 1))


class TestWeightsFromNodes:
    def test_three_node_polynomial(self):
        ws = weights_from_nodes(explicit([-1.0, 0.0, 1.0]))
        np.testing.assert_allclose(np.exp(ws.log_abs), [0.5, 1.0, 0.5], rtol=1e-14)
        np.testing.assert_array_equal(ws.signs, [1.0, -1.0, 1.0])

    def test_two_node_polynomial(self):
        ws = weights_from_nodes(explicit([-1.0, 1.0]))
        np.testing.assert_allclose(np.exp(ws.log_abs), [0.5, 0.5], rtol=1e-14)
        np.testing.assert_array_equal(ws.signs, [1.0, -1.0])

    def test_three_node_pole_pair(self):
        ws = weights_from_nodes(
            explicit([-1.0, 0.0, 1.0]), pole_field([(0.5j, 1), (-0.5j, 1)])
        )
        assert abs(math.exp(ws.log_abs[1]) - 0.25) <= 1e-14

    def test_pole_count_exceeding_n_rejected(self):
        with pytest.raises(ValueError):
            weights_from_nodes(explicit([-1.0, 1.0]), pole_field([(0.5j, 2)]))

    def test_max_one_normalization(self):
        ws = weights_from_nodes(explicit([-1.0, 0.0, 1.0]), normalization="max_one")
        assert ws.log_abs.max() == 0.0

    def test_alternating_signs(self):
        nodes = generate_nodes(DensitySpec(kind="truncated_gaussian"), 17)
        ws = weights_from_nodes(nodes, half_i_pole_field(17))
        assert np.all(ws.signs[:-1] * ws.signs[1:] == -1.0)


class TestWeightRatioLog:
    def test_three_nodes(self):
        ws = weights_from_nodes(explicit([-1.0, 0.0, 1.0]))
        assert abs(weight_ratio_log(ws) - LOG2) <= 1e-14

    def test_normalization_invariant(self):
        ws = weights_from_nodes(explicit([-1.0, -0.2, 0.3, 1.0]))
        assert weight_ratio_log(ws) == weight_ratio_log(ws.with_normalization("max_one"))

    def test_equidistant_n10_binomial(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 10)
        ws = weights_from_nodes(nodes)
        assert abs(weight_ratio_log(ws) - math.log(252.0)) <= 1e-10


class TestInterpolate:
    def test_constant_reproduction(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 7)
        ws = weights_from_nodes(nodes, half_i_pole_field(7))
        xs = np.linspace(-1.0, 1.0, 33)
        np.testing.assert_allclose(
            interpolate(nodes, ws, np.full(8, 3.25), xs), 3.25, atol=1e-11
        )

    def test_quadratic_reproduction(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        ws = weights_from_nodes(nodes)
        assert abs(interpolate(nodes, ws, [1.0, 0.0, 1.0], 0.5) - 0.25) <= 1e-14

    def test_exact_at_nodes(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        ws = weights_from_nodes(nodes)
        vals = [2.0, -3.0, 7.0]
        for x, v in zip(nodes.nodes, vals):
            assert interpolate(nodes, ws, vals, x) == v

    def test_berrut_oracle(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        ws = berrut_weights(2)
        w = ws.scaled()
        x = 0.5
        expect = sum(
            wv * fv / (x - xv) for wv, fv, xv in zip(w, [1.0, 0.0, 1.0], nodes.nodes)
        ) / sum(wv / (x - xv) for wv, xv in zip(w, nodes.nodes))
        assert abs(interpolate(nodes, ws, [1.0, 0.0, 1.0], x) - expect) <= 1e-14


class TestBasisAbs:
    def test_kronecker(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        ws = weights_from_nodes(nodes)
        for k in range(3):
            for i, x in enumerate(nodes.nodes):
                assert basis_abs(nodes, ws, k, x) == (1.0 if i == k else 0.0)

    def test_lagrange_hand_value(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        ws = weights_from_nodes(nodes)
        assert abs(basis_abs(nodes, ws, 1, 0.5) - 0.75) <= 1e-14

    def test_index_validated(self):
        nodes = explicit([-1.0, 1.0])
        ws = weights_from_nodes(nodes)
        with pytest.raises(ValueError):
            basis_abs(nodes, ws, 5, 0.0)


class TestLebesgueFunction:
    def test_one_at_nodes(self):
        nodes = generate_nodes(DensitySpec(kind="chebyshev"), 9)
        ws = weights_from_nodes(nodes)
        np.testing.assert_array_equal(lebesgue_function(nodes, ws, nodes.nodes), 1.0)

    def test_two_nodes_identity(self):
        nodes = explicit([-1.0, 1.0])
        ws = weights_from_nodes(nodes)
        xs = np.linspace(-1.0, 1.0, 21)
        np.testing.assert_allclose(lebesgue_function(nodes, ws, xs), 1.0, atol=1e-14)

    def test_three_node_hand_value(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        ws = weights_from_nodes(nodes)
        assert abs(lebesgue_function(nodes, ws, 0.5) - 1.25) <= 1e-12

    def test_exact_route_matches_direct(self):
        spec = DensitySpec(kind="uniform")
        nodes = generate_nodes(spec, 12)
        for field in (no_field(), half_i_pole_field(12)):
            ws = weights_from_nodes(nodes, field)
            bare = WeightSet(ws.n, ws.signs, ws.log_abs)  # no provenance: direct form
            xs = np.linspace(-0.997, 0.997, 101)
            np.testing.assert_allclose(
                lebesgue_function(nodes, ws, xs),
                lebesgue_function(nodes, bare, xs),
                rtol=1e-12,
            )


class TestLebesgueConstant:
    def test_two_nodes(self):
        nodes = explicit([-1.0, 1.0])
        rep = lebesgue_constant(nodes, weights_from_nodes(nodes))
        assert abs(rep.lam - 1.0) <= 1e-12

    def test_three_nodes(self):
        nodes = explicit([-1.0, 0.0, 1.0])
        rep = lebesgue_constant(nodes, weights_from_nodes(nodes))
        assert abs(rep.lam - 1.25) <= 1e-9
        assert abs(abs(rep.argmax_x) - 0.5) <= 1e-7

    def test_chebyshev_small(self):
        nodes = generate_nodes(DensitySpec(kind="chebyshev"), 10)
        rep = lebesgue_constant(nodes, weights_from_nodes(nodes))
        assert 1.0 <= rep.lam < 3.0

    def test_cross_check_dense_scan(self):
        spec = DensitySpec(kind="truncated_gaussian")
        nodes = generate_nodes(spec, 16)
        ws = weights_from_nodes(nodes, half_i_pole_field(16))
        rep = lebesgue_constant(nodes, ws, samples_per_gap=30)
        dense = lebesgue_constant(nodes, ws, samples_per_gap=300)
        assert abs(rep.lam - dense.lam) <= 1e-8 * dense.lam

    def test_samples_per_gap_validated(self):
        nodes = explicit([-1.0, 1.0])
        with pytest.raises(ValueError):
            lebesgue_constant(nodes, weights_from_nodes(nodes), samples_per_gap=5)

    def test_endpoint_segments_searched(self):
        # nodes not reaching the endpoints: the maximum sits in [x_n, 1]
        nodes = explicit([-0.5, 0.0, 0.5])
        rep = lebesgue_constant(nodes, weights_from_nodes(nodes))
        assert rep.argmax_x > 0.5 or rep.argmax_x < -0.5
        assert rep.lam > 1.25

    def test_at_least_one(self):
        for n in (1, 2, 5, 9):
            nodes = generate_nodes(DensitySpec(kind="uniform"), n)
            rep = lebesgue_constant(nodes, weights_from_nodes(nodes))
            assert rep.lam >= 1.0

    def test_ratio_lower_bound(self):
        for kind in ("uniform", "chebyshev", "truncated_gaussian"):
            nodes = generate_nodes(DensitySpec(kind=kind), 20)
            ws = weights_from_nodes(nodes)
            rep = lebesgue_constant(nodes, ws)
            assert rep.lam >= math.exp(weight_ratio_log(ws)) / (2.0 * 20**2)


class TestWeightSetValidation:
    def test_sign_values_checked(self):
        with pytest.raises(ValueError):
            WeightSet(n=1, signs=np.array([1.0, 0.5]), log_abs=np.zeros(2))

    def test_length_checked(self):
        with pytest.raises(ValueError):
            WeightSet(n=2, signs=np.ones(2), log_abs=np.zeros(2))

    def test_max_one_consistency_checked(self):
        with pytest.raises(ValueError):
            WeightSet(
                n=1, signs=np.array([1.0, -1.0]), log_abs=np.array([1.0, 0.0]),
                normalization="max_one",
            )

    def test_raw_not_recoverable(self):
        ws = weights_from_nodes(explicit([-1.0, 1.0]), normalization="max_one")
        with pytest.raises(ValueError):
            ws.with_normalization("raw")
