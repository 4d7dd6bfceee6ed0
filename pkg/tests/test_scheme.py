"""
Test the numerical flux, A-WENO corrections, scheme options and the parallel-for.
"""

import pytest
import numpy as np


class TestSchemeOptions:
    """Test suite for scheme variants and options."""

    @pytest.mark.parametrize('raw,expected', [('1', '1'), (2, '2'), ('a', 'A'), ('A', 'A')])
    def test_parse(self, raw, expected):
        from src.scheme.variants import SchemeVariant

        assert SchemeVariant.parse(raw).value == expected

    def test_invalid_variant(self):
        from src.errors import ConfigurationError
        from src.scheme.variants import SchemeVariant

        with pytest.raises(ConfigurationError):
            SchemeVariant.parse('4')

    def test_well_balanced_flags(self):
        """Only the conservative-variable LCD scheme is not well-balanced."""
        from src.scheme.variants import SchemeVariant

        assert [v.well_balanced for v in SchemeVariant] == [True, True, False, True]
        assert SchemeVariant.LCD_CONSERVATIVE.label == 'scheme3'

    def test_options_validation(self):
        """Unknown reconstructions and negative thresholds are rejected."""
        from src.errors import ConfigurationError
        from src.scheme.variants import SchemeOptions

        with pytest.raises(ConfigurationError):
            SchemeOptions(reconstruction='eno')
        with pytest.raises(ConfigurationError):
            SchemeOptions(diffusion_threshold=-1.0)

        options = SchemeOptions(variant='2', reconstruction='constant')
        assert options.variant.value == '2', "Variant strings should be parsed"
        assert options.interpolation_mode == 'linear', "Constant reconstruction integrates with linear weights"


class TestCentralUpwind:
    """Test suite for the central-upwind flux."""

    def test_flux_formula(self):
        from src.scheme.fluxes import central_upwind_flux

        K_minus, K_plus = np.array([[1.0]]), np.array([[3.0]])
        U_minus, U_plus = np.array([[0.5]]), np.array([[1.5]])
        a_minus, a_plus = np.array([-1.0]), np.array([2.0])
        flux = central_upwind_flux(K_minus, K_plus, U_minus, U_plus, a_minus, a_plus)

        expected = (2.0 * 1.0 + 1.0 * 3.0) / 3.0 + (2.0 * -1.0) / 3.0 * 1.0
        assert flux[0, 0] == pytest.approx(expected, rel=1e-14), f"Expected {expected}, got {flux[0, 0]}"

    def test_degenerate_speeds_average(self):
        """Vanishing speed gaps fall back to the average flux."""
        from src.scheme.fluxes import central_upwind_flux

        flux = central_upwind_flux(np.array([[1.0]]), np.array([[3.0]]), np.array([[0.0]]),
                                   np.array([[5.0]]), np.array([0.0]), np.array([0.0]))

        assert flux[0, 0] == 2.0, "Degenerate interfaces should average the global fluxes"

    def test_consistency(self):
        """Equal states give back the flux itself."""
        from src.scheme.fluxes import central_upwind_flux

        K = np.array([[2.5, -1.0]])
        U = np.array([[1.0, 0.3]])
        flux = central_upwind_flux(K, K, U, U, np.array([-1.0, -0.5]), np.array([1.0, 0.5]))

        np.testing.assert_allclose(flux, K, rtol=1e-14)

    def test_diffusion_switch(self):
        """Quiet interfaces drop the diffusion term."""
        from src.scheme.fluxes import central_upwind_flux, diffusion_switch

        E_minus = np.array([[1.0, 1.0]])
        E_plus = np.array([[1.0 + 1e-14, 2.0]])
        switch = diffusion_switch(E_minus, E_plus, 1e-12)
        np.testing.assert_array_equal(switch, [0.0, 1.0])

        K = np.array([[1.0, 1.0]])
        flux = central_upwind_flux(K, K, np.array([[0.0, 0.0]]), np.array([[1.0, 1.0]]),
                                   np.array([-1.0, -1.0]), np.array([1.0, 1.0]), switch)
        np.testing.assert_allclose(flux, [[1.0, 0.5]])

    def test_one_sided_speeds(self):
        """Speeds bracket zero even for supersonic flow."""
        from src.scheme.fluxes import one_sided_speeds
        from src.systems import LinearAdvection

        a_minus, a_plus = one_sided_speeds(LinearAdvection(2.0), np.ones((1, 3)), np.ones((1, 3)),
                                           np.zeros(3), np.zeros(3))

        np.testing.assert_array_equal(a_minus, 0.0)
        np.testing.assert_array_equal(a_plus, 2.0)


class TestCorrections:
    """Test suite for the A-WENO correction terms."""

    def test_exact_on_quartic(self):
        """Central differences differentiate quartics exactly."""
        from src.scheme.fluxes import correction_terms

        dx = 0.1
        x = np.arange(9) * dx
        K = x ** 4 - 2.0 * x ** 2 + x
        K_xx, K_xxxx = correction_terms(K, dx)
        centre = x[2:-2]

        np.testing.assert_allclose(K_xx, 12.0 * centre ** 2 - 4.0, atol=1e-10)
        np.testing.assert_allclose(K_xxxx, 24.0, rtol=1e-8)

    def test_aweno_flux(self):
        from src.scheme.fluxes import aweno_flux

        dx = 0.5
        flux = aweno_flux(np.array([1.0]), np.array([24.0]), np.array([5760.0]), dx)

        assert flux[0] == pytest.approx(1.0 - dx ** 2 + 7.0 * dx ** 4), f"Unexpected flux {flux[0]}"

    def test_stencil_shape(self):
        """Four interfaces are lost to the stencils."""
        from src.scheme.fluxes import correction_terms

        K_xx, K_xxxx = correction_terms(np.zeros((3, 20)), 0.1)

        assert K_xx.shape == (3, 16) and K_xxxx.shape == (3, 16), f"Unexpected shape {K_xx.shape}"


class TestParallel:
    """Test suite for the sweep-line parallel-for."""

    def test_split_blocks_covers_lines(self):
        from src.scheme.parallel import split_blocks

        blocks = split_blocks(10, 3)
        covered = np.concatenate([np.arange(10)[b] for b in blocks])

        np.testing.assert_array_equal(covered, np.arange(10))
        assert len(split_blocks(2, 8)) == 2, "No more blocks than lines"

    def test_thread_count_from_environment(self, monkeypatch):
        from src.errors import ConfigurationError
        from src.scheme.parallel import thread_count

        monkeypatch.setenv('THREADS', '4')
        assert thread_count() == 4
        monkeypatch.setenv('THREADS', 'many')
        with pytest.raises(ConfigurationError):
            thread_count()
        with pytest.raises(ConfigurationError):
            thread_count(0)

    def test_map_blocks_keeps_order(self):
        from src.scheme.parallel import map_blocks

        results = map_blocks(lambda block: list(range(12))[block], 12, threads=3)

        assert sum(results, []) == list(range(12)), "Blocks should be concatenated in order"

    @pytest.mark.parametrize('variant', ['1', '2'])
    def test_2d_rhs_independent_of_thread_count(self, variant):
        """Sweeping rows and columns on several threads gives the same bits."""
        from src.experiments.presets import build_example
        from src.scheme.variants import SchemeOptions

        setup = build_example(8, nx=20)
        serial = setup.discretization(SchemeOptions(variant), threads=1).rhs(setup.initial)
        threaded = setup.discretization(SchemeOptions(variant), threads=4).rhs(setup.initial)

        np.testing.assert_array_equal(serial, threaded)


class TestSemiDiscretization:
    """Test suite for the assembled right-hand side."""

    @pytest.mark.parametrize('variant', ['1', '2', '3'])
    def test_constant_state_is_stationary(self, variant):
        """Uniform advected data has a zero right-hand side."""
        from src.experiments.presets import advection_wave
        from src.scheme.variants import SchemeOptions

        setup = advection_wave(20)
        rhs = setup.discretization(SchemeOptions(variant)).rhs(np.full((1, 20), 0.7))

        np.testing.assert_allclose(rhs, 0.0, atol=1e-12)

    def test_non_finite_state(self):
        from src.errors import InputError
        from src.experiments.presets import advection_wave
        from src.scheme.variants import SchemeOptions

        U = np.ones((1, 20))
        U[0, 3] = np.nan
        with pytest.raises(InputError):
            advection_wave(20).discretization(SchemeOptions()).rhs(U)

    def test_advection_rhs_matches_derivative(self):
        """On a smooth wave the right-hand side approximates -u_x."""
        from src.experiments.presets import advection_wave
        from src.scheme.variants import SchemeOptions

        setup = advection_wave(80)
        rhs = setup.discretization(SchemeOptions()).rhs(setup.initial)
        x = setup.grid.centers()
        exact = -2.0 * np.pi * np.cos(2.0 * np.pi * x)

        np.testing.assert_allclose(rhs[0], exact, atol=1e-3)
