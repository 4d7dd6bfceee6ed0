"""
Test the physical models: equilibrium variables, recovery, C matrices and jumps.
"""

import pytest
import numpy as np


N_SAMPLES = 10_000


def _mach_numbers(rng, size):
    """Mach or Froude numbers kept away from the sonic point."""
    sub = rng.uniform(0.05, 0.7, size)
    sup = rng.uniform(1.5, 3.0, size)
    return np.where(rng.random(size) < 0.5, sub, sup)


def _reconstruction_residual(basis, C):
    rebuilt = basis.Q @ (basis.eigenvalues[..., None] * basis.Q_inv)
    return np.linalg.norm(rebuilt - C, axis=(-2, -1)) / (1.0 + np.linalg.norm(C, axis=(-2, -1)))


class TestNozzle:
    """Test suite for nozzle flow."""

    def _states(self, rng, size=N_SAMPLES):
        from src.systems.nozzle import NozzleFlow

        model = NozzleFlow()
        sigma = rng.uniform(0.3, 1.7, size)
        rho = rng.uniform(0.2, 3.0, size)
        c = np.sqrt(model.kappa * model.gamma * rho ** (model.gamma - 1.0))
        u = _mach_numbers(rng, size) * c
        return model, np.stack([sigma * rho, sigma * rho * u]), sigma

    def test_recovery_round_trip(self):
        """E then recover reproduces the state on its own Mach branch."""
        model, U, sigma = self._states(np.random.default_rng(0))
        E = model.equilibrium(U, sigma)
        recovered, failed = model.recover(E, sigma, None, model.branch_reference(U, sigma))

        assert not failed.any(), f"{failed.sum()} recoveries failed"
        np.testing.assert_allclose(recovered, U, rtol=1e-12)

    def test_no_root_is_flagged(self):
        """Energies below the sonic minimum have no density."""
        from src.errors import RecoveryError
        from src.systems.nozzle import recover_state_nozzle, solve_nozzle_density

        rho, failed = solve_nozzle_density(np.array([0.1]), np.array([8.0]), np.array([1.0]), np.array([1.0]))
        assert failed[0], "Energy below the sonic minimum should be flagged"
        with pytest.raises(RecoveryError):
            recover_state_nozzle(np.array([0.1]), np.array([8.0]), np.array([1.0]), np.array([1.0]))

    def test_characteristic_basis(self):
        """Analytic eigenvectors diagonalize C."""
        model, U, sigma = self._states(np.random.default_rng(1), 1000)
        basis, lost = model.characteristic_basis(U, sigma)

        assert not lost.any(), "Admissible states should keep their basis"
        assert np.all(_reconstruction_residual(basis, model.c_matrix(U, sigma)) <= 1e-10)

    def test_jump_term(self):
        """Jump is the mean pressure times the cross-section change."""
        from src.systems.nozzle import NozzleFlow

        model = NozzleFlow()
        U = np.array([[1.0], [0.5]])
        jump = model.interface_jump_term(U, U, np.array([1.0]), np.array([1.2]))

        assert jump[0, 0] == 0.0, "Mass equation has no jump"
        assert jump[1, 0] == pytest.approx(model.pressure(U, np.array([1.1]))[0] * 0.2)

    def test_invalid_state(self):
        """Negative densities are rejected."""
        from src.errors import StateError
        from src.systems.nozzle import NozzleFlow

        with pytest.raises(StateError):
            NozzleFlow().validate(np.array([[-1.0], [0.0]]), np.array([1.0]))


class TestSaintVenant:
    """Test suite for the Saint-Venant system."""

    def _states(self, rng, size=N_SAMPLES, manning=0.0):
        from src.systems.saint_venant import SaintVenant

        model = SaintVenant(manning=manning)
        h = rng.uniform(0.1, 3.0, size)
        Z = rng.uniform(-1.0, 1.0, size)
        u = _mach_numbers(rng, size) * np.sqrt(model.g * h) * np.sign(rng.random(size) - 0.5)
        return model, np.stack([h, h * u]), Z

    def test_recovery_round_trip(self):
        """Cubic recovery reproduces sub- and supercritical depths."""
        model, U, Z = self._states(np.random.default_rng(2))
        I = np.random.default_rng(3).uniform(-0.5, 0.5, Z.size)
        E = model.equilibrium(U, Z, I)
        recovered, failed = model.recover(E, Z, I, model.branch_reference(U, Z))

        assert not failed.any(), f"{failed.sum()} recoveries failed"
        np.testing.assert_allclose(recovered, U, rtol=1e-12)

    def test_lake_at_rest(self):
        """Still water recovers h = eta - Z."""
        from src.systems.saint_venant import recover_state_sw

        h = recover_state_sw(np.array([9.812 * 2.0]), np.array([0.0]), np.array([0.5]),
                             np.array([0.0]), np.array([1.5]))

        assert h[0] == pytest.approx(1.5, rel=1e-14), f"Expected depth 1.5, got {h[0]}"

    def test_dry_recovery_fails(self):
        """Energy too low for the discharge has no positive depth."""
        from src.errors import RecoveryError
        from src.systems.saint_venant import recover_state_sw

        with pytest.raises(RecoveryError):
            recover_state_sw(np.array([1.0]), np.array([5.0]), np.array([0.0]), np.array([0.0]), np.array([1.0]))

    def test_steady_path_jump_at_rest(self):
        """Across a bottom step at rest the jump equals the hydrostatic flux difference."""
        from src.systems.saint_venant import SaintVenant

        model = SaintVenant()
        E = np.array([[0.0], [model.g * 2.0]])
        jump, failed = model.steady_path_jump(E, E, np.array([0.0]), np.array([0.5]), None,
                                              np.array([2.0]), np.array([1.5]))

        assert not failed.any(), "Lake at rest should recover"
        assert jump[1, 0] == pytest.approx(0.5 * model.g * (1.5 ** 2 - 2.0 ** 2), rel=1e-13)

    def test_friction_integrand(self):
        """Manning friction only enters E when the coefficient is positive."""
        from src.systems.saint_venant import SaintVenant

        U = np.array([[1.0], [2.0]])
        assert SaintVenant().has_integral is False, "No friction means local E"
        with_friction = SaintVenant(manning=0.1)
        assert with_friction.has_integral, "Friction should add a running integral"
        assert with_friction.equilibrium_integrand(U, np.zeros(1), np.zeros(1))[0] == pytest.approx(
            with_friction.g * 0.01 * 4.0)

    def test_characteristic_basis(self):
        model, U, Z = self._states(np.random.default_rng(4), 1000)
        basis, lost = model.characteristic_basis(U, Z)

        assert not lost.any(), "Positive depths should keep their basis"
        assert np.all(_reconstruction_residual(basis, model.c_matrix(U, Z)) <= 1e-10)


class TestTwoLayer:
    """Test suite for the two-layer shallow water system."""

    def test_recovery_round_trip(self):
        """Newton recovery from a nearby guess reproduces both depths."""
        from src.systems.two_layer import TwoLayerShallowWater

        rng = np.random.default_rng(5)
        model = TwoLayerShallowWater()
        h1, h2 = rng.uniform(0.5, 1.5, (2, N_SAMPLES))
        u1, u2 = rng.uniform(-0.3, 0.3, (2, N_SAMPLES))
        Z = rng.uniform(-2.0, -1.0, N_SAMPLES)
        U = np.stack([h1, h1 * u1, h2, h2 * u2])
        E = model.equilibrium(U, Z)
        recovered, failed = model.recover(E, Z, None, 1.01 * model.branch_reference(U, Z))

        assert not failed.any(), f"{failed.sum()} recoveries failed"
        np.testing.assert_allclose(recovered, U, rtol=1e-12)

    def test_complex_spectrum(self):
        """Strong shear between the layers loses hyperbolicity."""
        from src.characteristics.lcd import eigendecompose
        from src.errors import HyperbolicityLost
        from src.systems.two_layer import TwoLayerShallowWater

        model = TwoLayerShallowWater()
        U = np.array([1.0, 2.0, 1.0, 0.0])
        with pytest.raises(HyperbolicityLost):
            eigendecompose(model.c_matrix(U, np.array(0.0)))

    def test_speeds_cover_complex_spectrum(self):
        """Speed bounds stay finite and widen with the imaginary part."""
        from src.systems.two_layer import TwoLayerShallowWater

        model = TwoLayerShallowWater()
        U = np.array([[1.0], [2.0], [1.0], [0.0]])
        lo, hi = model.wave_speeds(U, np.zeros(1))

        assert np.isfinite(lo).all() and np.isfinite(hi).all(), "Speeds should stay finite"
        assert lo[0] < 0.0 < hi[0], f"Unexpected speed bounds ({lo[0]}, {hi[0]})"

    def test_invalid_density_ratio(self):
        from src.errors import ConfigurationError
        from src.systems.two_layer import TwoLayerShallowWater

        with pytest.raises(ConfigurationError):
            TwoLayerShallowWater(r=1.2)

    def test_jump_term_at_rest(self):
        """Linear jump of a lake at rest balances the depth gradients."""
        from src.systems.two_layer import TwoLayerShallowWater

        model = TwoLayerShallowWater()
        U_minus = np.array([[1.0], [0.0], [1.0], [0.0]])
        U_plus = np.array([[1.0], [0.0], [0.5], [0.0]])
        jump = model.interface_jump_term(U_minus, U_plus, np.array([-2.0]), np.array([-1.5]))

        assert jump[1, 0] == pytest.approx(0.0, abs=1e-14), "Upper layer sees a flat interface"
        assert jump[3, 0] == pytest.approx(-model.g * 0.75 * 0.5), "Lower layer feels the bottom step"

    def test_discontinuous_steady_state_constants(self):
        """The printed depths across the bottom step share both layer energies at the default g."""
        from src.experiments.presets import TWO_LAYER_LEFT, TWO_LAYER_RIGHT_DEPTHS
        from src.systems.two_layer import TwoLayerShallowWater

        model = TwoLayerShallowWater()
        h1, q1, h2, q2 = TWO_LAYER_LEFT
        U = np.array([[h1, TWO_LAYER_RIGHT_DEPTHS[0]], [q1, q1],
                      [h2, TWO_LAYER_RIGHT_DEPTHS[1]], [q2, q2]])
        E = model.equilibrium(U, np.array([-2.0, -1.0]))

        assert model.g == 10.0
        assert E[1, 0] == pytest.approx(E[1, 1], rel=1e-10), "Upper layer energy jumps at the step"
        assert E[3, 0] == pytest.approx(E[3, 1], rel=1e-10), "Lower layer energy jumps at the step"


class TestEuler:
    """Test suite for the Euler equations with gravitation."""

    def _states_1d(self, rng, size=N_SAMPLES):
        from src.systems.euler1d import EulerGravity1D

        model = EulerGravity1D()
        rho = rng.uniform(0.2, 2.0, size)
        u = rng.uniform(-1.0, 1.0, size)
        p = rng.uniform(0.2, 2.0, size)
        phi = rng.uniform(-1.0, 1.0, size)
        En = p / (model.gamma - 1.0) + 0.5 * rho * u ** 2 + rho * phi
        return model, np.stack([rho, rho * u, En]), phi

    def test_pressure_includes_potential(self):
        model, U, phi = self._states_1d(np.random.default_rng(6), 10)
        p = model.pressure(U, phi)
        expected = (model.gamma - 1.0) * (U[2] - 0.5 * U[1] ** 2 / U[0] - U[0] * phi)

        np.testing.assert_allclose(p, expected, rtol=1e-14)

    def test_recovery_round_trip(self):
        """Quadratic recovery picks the density closest to the reference."""
        model, U, phi = self._states_1d(np.random.default_rng(7))
        I = np.random.default_rng(8).uniform(-0.5, 0.5, phi.size)
        E = model.equilibrium(U, phi, I)
        recovered, failed = model.recover(E, phi, I, model.branch_reference(U, phi))

        assert not failed.any(), f"{failed.sum()} recoveries failed"
        np.testing.assert_allclose(recovered, U, rtol=1e-11, atol=1e-12)

    def test_inadmissible_enthalpy(self):
        """L <= phi has no admissible state."""
        from src.errors import StateError
        from src.systems.euler1d import recover_state_euler

        with pytest.raises(StateError):
            recover_state_euler(np.array([1.0]), np.array([0.5]), np.array([0.0]), np.array([1.0]),
                                np.array([0.0]), np.array([1.0]))

    def test_analytic_basis(self):
        """Printed eigenvectors diagonalize C."""
        model, U, phi = self._states_1d(np.random.default_rng(9), 1000)
        basis, lost = model.characteristic_basis(U, phi)

        assert not lost.any(), "Admissible states should keep their basis"
        np.testing.assert_allclose(basis.Q @ basis.Q_inv, np.broadcast_to(np.eye(3), basis.Q.shape), atol=1e-10)
        assert np.all(_reconstruction_residual(basis, model.c_matrix(U, phi)) <= 1e-10)

    def test_source_from_integral(self):
        from src.systems.euler1d import EulerGravity1D

        R = EulerGravity1D().source_from_integral(np.array([0.3, 0.7]))

        np.testing.assert_array_equal(R[1], [-0.3, -0.7])
        np.testing.assert_array_equal(R[0], 0.0)

    def test_2d_recovery_round_trip(self):
        """Sweep-frame recovery keeps the tangential momentum."""
        from src.systems.euler2d import EulerGravitySweep

        rng = np.random.default_rng(10)
        model = EulerGravitySweep()
        rho, p = rng.uniform(0.2, 2.0, (2, N_SAMPLES))
        u, v = rng.uniform(-0.5, 0.5, (2, N_SAMPLES))
        phi = rng.uniform(0.0, 2.0, N_SAMPLES)
        En = p / (model.gamma - 1.0) + 0.5 * rho * (u ** 2 + v ** 2) + rho * phi
        U = np.stack([rho, rho * u, rho * v, En])
        E = model.equilibrium(U, phi)
        recovered, failed = model.recover(E, phi, None, model.branch_reference(U, phi))

        assert not failed.any(), f"{failed.sum()} recoveries failed"
        np.testing.assert_allclose(recovered, U, rtol=1e-11, atol=1e-12)

    def test_2d_basis_is_real(self):
        """C keeps a real basis for a slowly moving hydrostatic state."""
        from src.characteristics.lcd import eigendecompose_batch
        from src.systems.euler2d import EulerGravitySweep

        model = EulerGravitySweep()
        rho, u, v, p, phi = 1.0, 0.3, 0.2, 1.0, 0.5
        En = p / (model.gamma - 1.0) + 0.5 * rho * (u ** 2 + v ** 2) + rho * phi
        U = np.array([[rho], [rho * u], [rho * v], [En]])
        basis, lost = eigendecompose_batch(model.c_matrix(U, np.array([phi])))

        assert not lost.any(), "Subsonic state should have a real basis"
        assert np.all(np.isfinite(basis.Q_inv)), "Inverse basis should be finite"

    def test_sweep_order(self):
        from src.systems.euler2d import EulerGravitySweep

        model = EulerGravitySweep()
        assert model.sweep_order('x') == (0, 1, 2, 3)
        assert model.sweep_order('y') == (0, 2, 1, 3)


class TestRegistry:
    """Test suite for model lookup."""

    def test_build_model(self):
        from src.systems import build_model

        model = build_model('saint-venant', manning=0.4)
        assert model.manning == 0.4, "Constants should reach the model"

    def test_unknown_model(self):
        from src.errors import ConfigurationError
        from src.systems import build_model

        with pytest.raises(ConfigurationError):
            build_model('navier-stokes')
