import math

import numpy as np
import pytest

from barypot import (
    ContinuousPotential,
    ConvexityError,
    DensitySpec,
    DiscretePotential,
    build_bounds_report,
    check_weight_bounds,
    convergence_experiment,
    count_high_potential_nodes,
    density_eval,
    equilibrium_field,
    generate_nodes,
    half_i_pole_field,
    inter_potential_points,
    lebesgue_upper_value,
    measure_delta,
    no_field,
    pointwise_growth_rate,
    pole_field,
    potential_extrema,
    shifted_x_hat,
    spacing_profile,
    weights_from_nodes,
)
from barypot.density import NodeSet

LOG2 = math.log(2.0)


def explicit(nodes):
    nodes = np.asarray(nodes, dtype=float)
    return NodeSet(n=len(nodes) - 1, nodes=nodes, source="explicit")


def make_sweep(kind, field_for, n_list):
    spec = DensitySpec(kind=kind)
    nodesets = [generate_nodes(spec, n) for n in n_list]
    weightsets = [weights_from_nodes(s, field_for(s.n)) for s in nodesets]
    return spec, nodesets, weightsets


class TestInterPotentialPoints:
    def test_two_nodes(self):
        Un = DiscretePotential(explicit([-1.0, 1.0]), no_field())
        zs = inter_potential_points(Un)
        assert abs(zs.zetas[0]) <= 1e-10

    def test_three_nodes(self):
        Un = DiscretePotential(explicit([-1.0, 0.0, 1.0]), no_field())
        zs = inter_potential_points(Un)
        np.testing.assert_allclose(
            zs.zetas, [-1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0)], atol=1e-10
        )

    @pytest.mark.parametrize("kind", ["uniform", "chebyshev", "truncated_gaussian"])
    def test_residual_contract(self, kind):
        nodes = generate_nodes(DensitySpec(kind=kind), 40)
        Un = DiscretePotential(nodes, half_i_pole_field(40))
        zs = inter_potential_points(Un)
        assert len(zs.zetas) == 40
        assert np.all(zs.residuals <= 1e-10)
        assert np.all(zs.zetas > nodes.nodes[:-1])
        assert np.all(zs.zetas < nodes.nodes[1:])

    def test_convexity_violation_is_structured(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 4)
        Un = DiscretePotential(nodes, pole_field([(0.25 + 0.02j, 4)]))
        with pytest.raises(ConvexityError) as exc:
            inter_potential_points(Un)
        assert 1 <= exc.value.gap_index <= 4


class TestMeasureDelta:
    def test_two_node_uniform(self):
        Un = DiscretePotential(explicit([-1.0, 1.0]), no_field())
        U = ContinuousPotential(DensitySpec(kind="uniform"), no_field())
        d = measure_delta(Un, U, inter_potential_points(Un))
        assert abs(d.delta_minus - 1.0) <= 1e-10
        assert d.delta_plus == 0.0
        assert abs(d.total - 1.0) <= 1e-10

    def test_chebyshev_closed_form(self):
        # first-kind point set: the discrete potential is flat at its
        # stationary points, sitting exactly log(2)/(n+1) below log 2
        n = 15
        k = np.arange(n + 1)
        x = np.sort(np.cos((2 * k + 1) * np.pi / (2 * (n + 1))))
        Un = DiscretePotential(explicit(x), no_field())
        U = ContinuousPotential(DensitySpec(kind="chebyshev"), no_field())
        d = measure_delta(Un, U, inter_potential_points(Un))
        assert abs(d.delta_minus - LOG2 / 16.0) <= 1e-10
        assert d.delta_plus <= 1e-10

    def test_nonnegative(self):
        spec = DensitySpec(kind="truncated_gaussian")
        nodes = generate_nodes(spec, 30)
        Un = DiscretePotential(nodes, no_field())
        U = ContinuousPotential(spec, no_field())
        d = measure_delta(Un, U, inter_potential_points(Un))
        assert d.delta_minus >= 0.0 and d.delta_plus >= 0.0


class TestWeightBounds:
    @pytest.mark.parametrize("kind", ["uniform", "chebyshev", "truncated_gaussian"])
    @pytest.mark.parametrize("field_name", ["none", "poles"])
    def test_all_weights_within_bounds(self, kind, field_name):
        spec = DensitySpec(kind=kind)
        nodesets = [generate_nodes(spec, n) for n in (10, 20, 40)]
        spacing = spacing_profile(nodesets)
        nodes = nodesets[-1]
        field = no_field() if field_name == "none" else half_i_pole_field(40)
        ws = weights_from_nodes(nodes, field)
        U = ContinuousPotential(spec, field)
        Un = DiscretePotential(nodes, field)
        zetas = inter_potential_points(Un)
        delta = measure_delta(Un, U, zetas)
        lo_ok, hi_ok = check_weight_bounds(nodes, ws, U, Un, zetas, delta, spacing)
        assert np.all(lo_ok) and np.all(hi_ok)

    def test_raw_normalization_required(self):
        spec = DensitySpec(kind="uniform")
        nodesets = [generate_nodes(spec, n) for n in (10, 20, 40)]
        spacing = spacing_profile(nodesets)
        nodes = nodesets[-1]
        ws = weights_from_nodes(nodes, normalization="max_one")
        U = ContinuousPotential(spec, no_field())
        Un = DiscretePotential(nodes, no_field())
        zetas = inter_potential_points(Un)
        delta = measure_delta(Un, U, zetas)
        with pytest.raises(ValueError):
            check_weight_bounds(nodes, ws, U, Un, zetas, delta, spacing)

    def test_fitted_spacing_required(self):
        spec = DensitySpec(kind="uniform")
        nodes = generate_nodes(spec, 10)
        spacing = spacing_profile([nodes])
        ws = weights_from_nodes(nodes)
        U = ContinuousPotential(spec, no_field())
        Un = DiscretePotential(nodes, no_field())
        zetas = inter_potential_points(Un)
        delta = measure_delta(Un, U, zetas)
        with pytest.raises(ValueError):
            check_weight_bounds(nodes, ws, U, Un, zetas, delta, spacing)


class TestBoundsReport:
    @pytest.mark.parametrize("kind", ["uniform", "chebyshev", "truncated_gaussian"])
    @pytest.mark.parametrize("field_name", ["none", "poles", "equilibrium"])
    def test_matrix_n40(self, kind, field_name):
        spec = DensitySpec(kind=kind)
        nodesets = [generate_nodes(spec, n) for n in (10, 20, 40)]
        spacing = spacing_profile(nodesets)
        nodes = nodesets[-1]
        field = {
            "none": no_field(),
            "poles": half_i_pole_field(40),
            "equilibrium": equilibrium_field(spec, 0.0),
        }[field_name]
        ws = weights_from_nodes(nodes, field)
        U = ContinuousPotential(spec, field)
        Un = DiscretePotential(nodes, field)
        report = build_bounds_report(nodes, ws, U, Un, spacing)
        assert report.ok_thm34
        assert report.ok_cor
        assert report.ok_thm41
        if report.extrema.d <= 0.01:
            assert report.ok_thm53 is True
            assert report.lebesgue <= report.lebesgue_upper
        else:
            assert report.ok_thm53 is None
            assert report.lebesgue_upper is None
        assert report.ratio_lower_log <= report.weight_ratio_log <= report.ratio_upper_log
        assert report.lebesgue_lower_log <= math.log(report.lebesgue)
        assert report.rho == math.exp(report.extrema.d)

    def test_gaussian_polynomial_gate(self):
        spec = DensitySpec(kind="truncated_gaussian")
        nodesets = [generate_nodes(spec, n) for n in (10, 20, 40)]
        spacing = spacing_profile(nodesets)
        nodes = nodesets[-1]
        ws = weights_from_nodes(nodes)
        U = ContinuousPotential(spec, no_field())
        Un = DiscretePotential(nodes, no_field())
        report = build_bounds_report(nodes, ws, U, Un, spacing)
        assert report.ok_thm53 is None

    def test_proof_constant_weaker(self):
        spec = DensitySpec(kind="chebyshev")
        nodesets = [generate_nodes(spec, n) for n in (10, 20, 40)]
        spacing = spacing_profile(nodesets)
        nodes = nodesets[-1]
        ws = weights_from_nodes(nodes)
        U = ContinuousPotential(spec, no_field())
        Un = DiscretePotential(nodes, no_field())
        report = build_bounds_report(nodes, ws, U, Un, spacing)
        assert lebesgue_upper_value(report, proof_constant=True) >= lebesgue_upper_value(
            report
        )


class TestShiftedXHat:
    def test_off_node_unchanged(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 4)
        assert shifted_x_hat(nodes, 0.3) == 0.3

    def test_node_hit_shifts_half_gap(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 4)
        assert shifted_x_hat(nodes, 0.5) == 0.75

    def test_last_node_shifts_into_final_gap(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 4)
        assert shifted_x_hat(nodes, 1.0) == 1.25 or shifted_x_hat(nodes, 1.0) != 1.0


class TestPointwiseGrowthRate:
    def test_equilibrium_rate_near_zero(self):
        spec, nodesets, weightsets = make_sweep(
            "chebyshev", lambda n: no_field(), (20, 40, 80, 160)
        )
        slope = pointwise_growth_rate(list(zip(nodesets, weightsets)), 0.5)
        assert abs(slope) <= 0.01

    def test_uniform_rate_positive_off_center(self):
        spec, nodesets, weightsets = make_sweep(
            "uniform", lambda n: no_field(), (20, 40, 80, 160)
        )
        slope = pointwise_growth_rate(list(zip(nodesets, weightsets)), 0.75)
        assert slope > 0.1

    def test_needs_three_entries(self):
        spec, nodesets, weightsets = make_sweep(
            "uniform", lambda n: no_field(), (20, 40)
        )
        with pytest.raises(ValueError):
            pointwise_growth_rate(list(zip(nodesets, weightsets)), 0.0)


class TestCountHighPotentialNodes:
    def test_uniform_all_above_large_c(self):
        U = ContinuousPotential(DensitySpec(kind="uniform"), no_field())
        nodes = generate_nodes(DensitySpec(kind="uniform"), 20)
        assert count_high_potential_nodes(nodes, U, 1.0) == 21

    def test_uniform_small_c_few(self):
        U = ContinuousPotential(DensitySpec(kind="uniform"), no_field())
        nodes = generate_nodes(DensitySpec(kind="uniform"), 20)
        assert count_high_potential_nodes(nodes, U, 1e-4) <= 3

    def test_c_positive_required(self):
        U = ContinuousPotential(DensitySpec(kind="uniform"), no_field())
        nodes = generate_nodes(DensitySpec(kind="uniform"), 4)
        with pytest.raises(ValueError):
            count_high_potential_nodes(nodes, U, 0.0)

    def test_fraction_matches_density_mass(self):
        spec = DensitySpec(kind="truncated_gaussian")
        U = ContinuousPotential(spec, no_field())
        ext = potential_extrema(U)
        c = ext.d / 2.0
        nodes = generate_nodes(spec, 160)
        frac = count_high_potential_nodes(nodes, U, c) / 161.0
        xs = np.linspace(-1.0, 1.0, 4001)
        mask = U.eval(xs) > ext.u_max - c
        mass = np.trapezoid(np.where(mask, density_eval(spec, xs), 0.0), xs)
        assert abs(frac - mass) <= 0.05


class TestConvergenceExperiment:
    def test_entire_function_chebyshev(self):
        spec = DensitySpec(kind="chebyshev")
        nodes = generate_nodes(spec, 20)
        errs = convergence_experiment([nodes], [weights_from_nodes(nodes)], "exp")
        assert errs[0] <= 1e-12

    def test_runge_equidistant_diverges(self):
        spec = DensitySpec(kind="uniform")
        nodesets = [generate_nodes(spec, n) for n in (20, 80)]
        weightsets = [weights_from_nodes(s) for s in nodesets]
        errs = convergence_experiment(nodesets, weightsets, "runge")
        assert errs[1] > errs[0]

    def test_runge_chebyshev_rate(self):
        spec = DensitySpec(kind="chebyshev")
        n_list = (20, 40, 60, 80)
        nodesets = [generate_nodes(spec, n) for n in n_list]
        weightsets = [weights_from_nodes(s) for s in nodesets]
        errs = convergence_experiment(nodesets, weightsets, "runge")
        slope = np.polyfit(n_list, np.log(errs), 1)[0]
        expect = -math.log((1.0 + math.sqrt(26.0)) / 5.0)
        assert abs(slope - expect) <= 0.1 * abs(expect)

    def test_unknown_function_rejected(self):
        nodes = generate_nodes(DensitySpec(kind="uniform"), 4)
        with pytest.raises(ValueError):
            convergence_experiment([nodes], [weights_from_nodes(nodes)], "sine")
