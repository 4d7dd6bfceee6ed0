"""
Test grids, ghost-cell boundaries and geometry containers.
"""

import pytest
import numpy as np


class TestGrid:
    """Test suite for uniform grids."""

    def test_cell_width_and_centers(self):
        """Centers sit half a cell inside the domain."""
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 10.0, 200)

        assert grid.dx == pytest.approx(0.05), f"Expected dx=0.05, got {grid.dx}"
        assert grid.centers()[0] == pytest.approx(0.025), "First center should be x_min + dx/2"
        assert grid.centers()[-1] == pytest.approx(9.975), "Last center should be x_max - dx/2"

    def test_extended_layout(self):
        """Five ghosts per side; the interior slice recovers the centers."""
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(-1.0, 1.0, 20)

        assert grid.n_extended == 30, f"Expected 30 extended cells, got {grid.n_extended}"
        assert grid.labels()[0] == -4, "First ghost should carry label -4"
        np.testing.assert_allclose(grid.extended_centers()[grid.interior], grid.centers())
        assert grid.anchor == pytest.approx(grid.x_min - 3 * grid.dx), "Anchor should be x_{-5/2}"

    def test_interfaces(self):
        """N + 1 interior interfaces spanning the domain."""
        from src.mesh.grid import GridSpec1D

        faces = GridSpec1D(0.0, 1.0, 10).interfaces()

        assert len(faces) == 11, f"Expected 11 interfaces, got {len(faces)}"
        assert faces[0] == 0.0 and faces[-1] == pytest.approx(1.0), "Interfaces should span the domain"

    def test_invalid_grids(self):
        """Empty grids, reversed domains and other ghost widths are rejected."""
        from src.errors import ConfigurationError
        from src.mesh.grid import GridSpec1D

        with pytest.raises(ConfigurationError):
            GridSpec1D(0.0, 1.0, 0)
        with pytest.raises(ConfigurationError):
            GridSpec1D(1.0, 0.0, 10)
        with pytest.raises(ConfigurationError):
            GridSpec1D(0.0, 1.0, 10, ghost_width=3)

    def test_square_grid(self):
        """2-D fields are stored (ny, nx)."""
        from src.mesh.grid import GridSpec2D

        grid = GridSpec2D.square(0.0, 1.0, 8)
        X, Y = grid.centers()

        assert grid.shape == (8, 8), f"Unexpected shape {grid.shape}"
        assert grid.extended_shape == (18, 18), f"Unexpected extended shape {grid.extended_shape}"
        assert X[0, 1] > X[0, 0] and Y[1, 0] > Y[0, 0], "x should vary along the last axis"


class TestBoundary:
    """Test suite for ghost-cell filling."""

    def test_free_copies_boundary_value(self):
        """Free ghosts repeat the nearest interior value."""
        from src.mesh.boundary import BoundaryCondition, fill_ghosts
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        field = np.arange(10.0)[None]
        out = fill_ghosts(field, BoundaryCondition.free(1), grid)

        np.testing.assert_array_equal(out[0, :5], 0.0)
        np.testing.assert_array_equal(out[0, -5:], 9.0)
        np.testing.assert_array_equal(out[0, grid.interior], field[0])

    def test_free_with_reference_keeps_steady_state(self):
        """Ghosts of a steady state equal the reference ghosts exactly."""
        from src.mesh.boundary import BoundaryCondition, fill_ghosts
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        reference = np.exp(-grid.extended_centers())[None]
        out = fill_ghosts(reference[:, grid.interior], BoundaryCondition.free(1), grid, reference)

        np.testing.assert_array_equal(out, reference)

    def test_reflecting_flips_odd_components(self):
        """Momentum is mirrored with a sign flip, density without."""
        from src.mesh.boundary import BoundaryCondition, fill_ghosts
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        field = np.stack([np.arange(1.0, 11.0), np.arange(1.0, 11.0)])
        out = fill_ghosts(field, BoundaryCondition.reflecting(2, odd_components=(1,)), grid)

        np.testing.assert_array_equal(out[0, :5], [5.0, 4.0, 3.0, 2.0, 1.0])
        np.testing.assert_array_equal(out[1, :5], [-5.0, -4.0, -3.0, -2.0, -1.0])

    def test_periodic_wraps(self):
        """Periodic ghosts continue the field from the other end."""
        from src.mesh.boundary import BoundaryCondition, fill_ghosts
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        field = np.arange(10.0)[None]
        out = fill_ghosts(field, BoundaryCondition.periodic(1), grid)

        np.testing.assert_array_equal(out[0, :5], [5.0, 6.0, 7.0, 8.0, 9.0])
        np.testing.assert_array_equal(out[0, -5:], [0.0, 1.0, 2.0, 3.0, 4.0])

    def test_fixed_value_on_one_component(self):
        """A fixed inflow discharge leaves the depth free."""
        from src.mesh.boundary import BoundaryCondition, BoundaryKind, ComponentRule, fill_ghosts
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        bc = BoundaryCondition.free(2).with_rule('left', 1, ComponentRule(BoundaryKind.FIXED_VALUE, 4.42))
        out = fill_ghosts(np.ones((2, 10)), bc, grid)

        np.testing.assert_array_equal(out[1, :5], 4.42)
        np.testing.assert_array_equal(out[0, :5], 1.0)

    def test_invalid_rules(self):
        """Unknown kinds, valueless fixed rules and component mismatches are rejected."""
        from src.errors import ConfigurationError
        from src.mesh.boundary import BoundaryCondition, BoundaryKind, ComponentRule, fill_ghosts
        from src.mesh.grid import GridSpec1D

        with pytest.raises(ConfigurationError):
            BoundaryKind.parse('outflow')
        with pytest.raises(ConfigurationError):
            ComponentRule(BoundaryKind.FIXED_VALUE)
        with pytest.raises(ConfigurationError):
            fill_ghosts(np.ones((3, 10)), BoundaryCondition.free(2), GridSpec1D(0.0, 1.0, 10))

    def test_fill_ghosts_2d(self):
        """2-D filling extends both axes and keeps the interior."""
        from src.mesh.boundary import BoundaryCondition, fill_ghosts_2d
        from src.mesh.grid import GridSpec2D

        grid = GridSpec2D.square(0.0, 1.0, 6)
        field = np.random.default_rng(0).random((4, 6, 6))
        out = fill_ghosts_2d(field, BoundaryCondition.periodic(4), grid)

        assert out.shape == (4, 16, 16), f"Unexpected shape {out.shape}"
        np.testing.assert_array_equal(out[:, 5:11, 5:11], field)
        np.testing.assert_array_equal(out[:, 5:11, :5], field[:, :, 1:])


class TestGeometry:
    """Test suite for geometry containers."""

    def test_from_function_uses_derivative(self):
        """Analytic slopes are sampled when given."""
        from src.mesh.geometry import Geometry
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        geometry = Geometry.from_function(grid, lambda x: x ** 2, lambda x: 2 * x)

        assert geometry.values.shape == (20,), "Values should cover the extended grid"
        np.testing.assert_allclose(geometry.slopes, 2 * grid.extended_centers())

    def test_tabulated_extends_by_copies(self):
        """Tabulated interiors are padded with edge values."""
        from src.mesh.geometry import Geometry
        from src.mesh.grid import GridSpec1D

        grid = GridSpec1D(0.0, 1.0, 10)
        geometry = Geometry.tabulated(grid, np.linspace(1.0, 2.0, 10))

        np.testing.assert_array_equal(geometry.values[:5], 1.0)
        np.testing.assert_array_equal(geometry.values[-5:], 2.0)

    def test_sweep_y_transposes(self):
        """y-sweeps see columns as lines."""
        from src.mesh.geometry import Geometry2D
        from src.mesh.grid import GridSpec2D

        grid = GridSpec2D.square(0.0, 1.0, 4)
        geometry = Geometry2D.from_function(grid, lambda X, Y: X + 2 * Y,
                                            lambda X, Y: (np.ones_like(X), 2 * np.ones_like(Y)))
        sweep = geometry.sweep_y(slice(5, 9))

        assert sweep.values.shape == (4, 14), f"Unexpected shape {sweep.values.shape}"
        np.testing.assert_array_equal(sweep.slopes, 2.0)
