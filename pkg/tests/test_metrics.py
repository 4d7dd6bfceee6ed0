"""
Test the accuracy and oscillation metrics and the CSV writers.
"""

import pytest
import numpy as np


class TestMetrics:
    """Test suite for metrics on interior fields."""

    def test_total_variation(self):
        from src.experiments.metrics import total_variation

        assert total_variation(np.array([0.0, 1.0, 0.5, 0.5])) == pytest.approx(1.5)
        assert total_variation(np.array([[0.0, 1.0], [0.0, 1.0]])) == pytest.approx(2.0)

    def test_smooth_profile_has_no_oscillations(self):
        from src.experiments.metrics import oscillation_count

        x = np.linspace(0.0, 1.0, 50)
        assert oscillation_count(np.exp(x)) == 0, "A convex profile has no sign changes"

    def test_zigzag_is_counted(self):
        """Every interior cell of a zigzag flips the curvature sign."""
        from src.experiments.metrics import oscillation_count

        values = np.array([0.0, 1.0, 0.0, 1.0, 0.0, 1.0])
        assert oscillation_count(values) == 3, f"Unexpected count {oscillation_count(values)}"

    def test_round_off_is_ignored(self):
        """Noise below the floor does not register."""
        from src.experiments.metrics import oscillation_count

        x = np.linspace(0.0, 1.0, 50)
        noisy = x ** 2 + 1e-16 * np.random.default_rng(0).normal(size=50)
        assert oscillation_count(noisy) == 0

    def test_compute_metrics_against_steady(self):
        from src.experiments.metrics import compute_metrics

        steady = np.ones(10)
        values = steady.copy()
        values[4] += 0.2
        report = compute_metrics('example1', 'scheme1', 'rho', values, steady, 0.1, 0.8, 12, 0.5,
                                 {'steady_q_deviation': 1e-13})

        assert report.linf == pytest.approx(0.2)
        assert report.l1 == pytest.approx(0.02)
        assert report.total_variation == pytest.approx(0.4)
        assert report.cells == 10
        assert report.row()['steady_q_deviation'] == 1e-13, "Extras should be flattened into the row"

    def test_field_values(self):
        """Components and primitives can both be measured."""
        from src.errors import ConfigurationError
        from src.experiments.metrics import field_values
        from src.systems import NozzleFlow

        model = NozzleFlow()
        U = np.array([[2.0, 4.0], [2.0, 2.0]])
        sigma = np.array([1.0, 2.0])

        np.testing.assert_array_equal(field_values(model, U, sigma, 'q'), [2.0, 2.0])
        np.testing.assert_allclose(field_values(model, U, sigma, 'rho'), [2.0, 2.0])
        with pytest.raises(ConfigurationError):
            field_values(model, U, sigma, 'vorticity')


class TestSteadyFlatness:
    """Test suite for the settled-state flatness measures."""

    def test_discharge_measured_from_inflow(self):
        """A uniformly shifted discharge is not flat with respect to the inflow value."""
        from src.experiments.metrics import steady_flatness

        flatness = steady_flatness(np.full(10, 4.40), np.full(10, 30.0), 4.42)

        assert flatness['steady_q_deviation'] == pytest.approx(0.02), "Shift from 4.42 should be reported"
        assert flatness['steady_energy_spread'] == 0.0

    def test_discharge_without_target(self):
        from src.experiments.metrics import steady_flatness

        flatness = steady_flatness(np.array([1.0, 2.0, 3.0]), np.ones(3))

        assert flatness['steady_q_deviation'] == pytest.approx(1.0)

    def test_relative_energy_spread(self):
        from src.experiments.metrics import steady_flatness

        flatness = steady_flatness(np.full(3, 4.42), np.array([-40.0, -39.9, -39.96]), 4.42)

        assert flatness['steady_energy_spread'] == pytest.approx(0.1)
        assert flatness['steady_energy_relative_spread'] == pytest.approx(0.1 / 40.0)
        assert flatness['steady_energy_mean'] == pytest.approx(-39.953333333333333)


class TestOutput:
    """Test suite for CSV writers."""

    def test_field_frame_columns(self):
        """Repeated equilibrium names are prefixed and differences added."""
        from src.experiments.output import field_frame_1d
        from src.systems import SaintVenant

        model = SaintVenant()
        U = np.array([[1.0, 1.1], [0.5, 0.5]])
        E = model.equilibrium(U, np.zeros(2))
        frame = field_frame_1d(model, np.array([0.25, 0.75]), U, E, steady=U)

        assert list(frame.columns) == ['x', 'h', 'q', 'eq_q', 'E', 'd_h', 'd_q']
        assert (frame['d_h'] == 0.0).all(), "Differences against itself should vanish"

    def test_field_frame_2d_long_format(self):
        from src.experiments.output import field_frame_2d
        from src.systems import EulerGravitySweep

        X, Y = np.meshgrid(np.arange(3.0), np.arange(2.0))
        U = np.ones((4, 2, 3))
        frame = field_frame_2d(EulerGravitySweep(), X, Y, U)

        assert len(frame) == 6
        assert list(frame.columns) == ['x', 'y', 'rho', 'm', 'n', 'En']

    def test_write_round_trips_full_precision(self, tmp_path):
        """Values are written with 17 significant digits."""
        import pandas as pd
        from src.experiments.output import write_table

        frame = pd.DataFrame({'x': [0.1 + 0.2, np.pi]})
        path = write_table(frame, tmp_path / 'nested' / 'fields.csv')
        loaded = pd.read_csv(path)

        assert path.exists(), "Parent directories should be created"
        assert loaded['x'].tolist() == frame['x'].tolist(), "Floats should survive exactly"

    def test_write_metrics(self, tmp_path):
        import pandas as pd
        from src.experiments.metrics import compute_metrics
        from src.experiments.output import write_metrics

        reports = [compute_metrics('p', f"scheme{v}", 'h', np.arange(5.0), None, 1.0, 1.0, 3, 0.1)
                   for v in ('1', '2')]
        table = pd.read_csv(write_metrics(reports, tmp_path / 'metrics.csv'))

        assert table['scheme'].tolist() == ['scheme1', 'scheme2']
        assert {'linf', 'l1', 'total_variation', 'oscillations'} <= set(table.columns)
