"""
Test that the well-balanced schemes keep discrete steady states exactly.
"""

import pytest
import numpy as np


def _lake_at_rest(nx=40):
    from src.mesh.boundary import BoundaryCondition
    from src.mesh.geometry import Geometry
    from src.mesh.grid import GridSpec1D
    from src.systems import SaintVenant

    grid = GridSpec1D(0.0, 1.0, nx)
    geometry = Geometry.from_function(grid, lambda x: np.where(x < 0.5, 0.0, 0.4), np.zeros_like)
    h = 1.0 - geometry.values
    extended = np.stack([h, np.zeros_like(h)])
    return SaintVenant(), grid, geometry, BoundaryCondition.free(2), extended


class TestLakeAtRest:
    """Test suite for still water over a bottom step."""

    @pytest.mark.parametrize('variant', ['1', '2'])
    def test_rhs_vanishes(self, variant):
        """Well-balanced schemes see no motion across the step."""
        from src.scheme.rhs import SemiDiscretization1D
        from src.scheme.variants import SchemeOptions

        model, grid, geometry, bc, extended = _lake_at_rest()
        discretization = SemiDiscretization1D(model, grid, geometry, bc, SchemeOptions(variant), extended)
        rhs = discretization.rhs(extended[:, grid.interior])

        np.testing.assert_allclose(rhs, 0.0, atol=1e-11)

    def test_conservative_lcd_is_not_balanced(self):
        """Interpolating conservative variables breaks the balance at the step."""
        from src.scheme.rhs import SemiDiscretization1D
        from src.scheme.variants import SchemeOptions

        model, grid, geometry, bc, extended = _lake_at_rest()
        discretization = SemiDiscretization1D(model, grid, geometry, bc, SchemeOptions('3'), extended)
        rhs = discretization.rhs(extended[:, grid.interior])

        assert np.max(np.abs(rhs)) > 1e-6, "Expected a visible imbalance at the step"


class TestMovingSteadyStates:
    """Test suite for steady states with flow."""

    @pytest.mark.parametrize('example', [1, 2])
    def test_nozzle_steady_state(self, example):
        """Smooth supersonic nozzle flow is kept to round-off."""
        from src.experiments.presets import build_example
        from src.scheme.variants import SchemeOptions

        setup = build_example(example, nx=100)
        rhs = setup.discretization(SchemeOptions('1')).rhs(setup.steady)
        scale = np.max(np.abs(setup.model.flux(setup.steady, setup.interior_geometry))) / setup.dx

        assert np.max(np.abs(rhs)) <= 1e-12 * scale, f"Residual {np.max(np.abs(rhs)):.3e}"

    def test_nozzle_variant_three_drifts(self):
        """The non-balanced scheme leaves a larger residual than scheme 1."""
        from src.experiments.presets import build_example
        from src.scheme.variants import SchemeOptions

        setup = build_example(1, nx=100)
        balanced = setup.discretization(SchemeOptions('1')).rhs(setup.steady)
        drifting = setup.discretization(SchemeOptions('3')).rhs(setup.steady)

        assert np.max(np.abs(drifting)) > 100.0 * np.max(np.abs(balanced)), "Scheme 3 should not be exact"

    @pytest.mark.parametrize('variant', ['1', '2', 'A'])
    def test_discontinuous_two_layer_state(self, variant):
        """The two-layer steady state across the bottom step is kept."""
        from src.experiments.presets import build_example
        from src.scheme.variants import SchemeOptions

        setup = build_example(5, nx=100)
        rhs = setup.discretization(SchemeOptions(variant)).rhs(setup.steady)

        np.testing.assert_allclose(rhs, 0.0, atol=1e-8)

    def test_steady_state_energy_is_constant(self):
        """Both layer energies are flat across the bottom step."""
        from src.experiments.presets import build_example

        setup = build_example(5, nx=50)
        E = setup.model.equilibrium(setup.steady, setup.interior_geometry)

        np.testing.assert_allclose(E, E[:, :1] * np.ones_like(E), rtol=1e-12)


class TestHydrostatic:
    """Test suite for the 2-D hydrostatic state."""

    def test_unperturbed_state_is_kept(self):
        """Scheme 1 keeps the fixed-point hydrostatic state to round-off."""
        from src.experiments.presets import build_example
        from src.scheme.variants import SchemeOptions

        setup = build_example(8, nx=16, amplitude=0.0)
        rhs = setup.discretization(SchemeOptions('1'), threads=1).rhs(setup.initial)

        np.testing.assert_allclose(rhs, 0.0, atol=1e-9)

    def test_profile_matches_exponential(self):
        """The discrete profile stays close to the analytic exp(-1.21 x)."""
        from src.experiments.steady import hydrostatic_profile
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 40)
        g = hydrostatic_profile(grid, 1.21)
        x = grid.extended_centers()

        np.testing.assert_allclose(g, np.exp(-1.21 * x), rtol=1e-6)
