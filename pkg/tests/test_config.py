"""
Test run configuration loading and validation.
"""

import pytest


class TestLoadConfig:
    """Test suite for config files."""

    def test_dotted_keys(self, tmp_path):
        """Dotted keys land in their sections; missing values keep defaults."""
        from src.experiments.config import load_config

        path = tmp_path / 'run.cfg'
        path.write_text("example = 3\nscheme.variant = 2\ngrid.nx = 400\ntime.cfl = 0.45\n"
                        "physics.manning = 0.2\noutput.directory = out\n")
        config = load_config(path)

        assert config.example == 3
        assert config.scheme.variant == '2', f"Unexpected variant {config.scheme.variant}"
        assert config.grid.nx == 400
        assert config.time.cfl == pytest.approx(0.45)
        assert config.physics.constants() == {'manning': 0.2}, "Only set constants should be passed on"
        assert config.scheme.corrections is True, "Defaults should fill the rest"
        assert str(config.output_dir) == 'out'

    def test_overrides_win(self, tmp_path):
        from src.experiments.config import load_config

        path = tmp_path / 'run.cfg'
        path.write_text("example = 1\ngrid.nx = 100\n")
        config = load_config(path, {'grid': {'nx': 400}, 'time': {'t_final': None}})

        assert config.grid.nx == 400, "Overrides should replace file values"
        assert config.time.t_final is None, "None overrides should be skipped"

    def test_missing_file(self, tmp_path):
        from src.errors import ConfigurationError
        from src.experiments.config import load_config

        with pytest.raises(ConfigurationError):
            load_config(tmp_path / 'missing.cfg')

    def test_unknown_key(self, tmp_path):
        """Typos are rejected instead of silently ignored."""
        from src.errors import ConfigurationError
        from src.experiments.config import load_config

        path = tmp_path / 'run.cfg'
        path.write_text("example = 1\ngrid.nz = 100\n")
        with pytest.raises(ConfigurationError, match='grid.nz'):
            load_config(path)

    @pytest.mark.parametrize('line', ['scheme.variant = 7', 'time.cfl = 1.5', 'physics.r = 1.2',
                                      'boundary.kind = outflow', 'scheme.reconstruction = eno'])
    def test_invalid_values(self, tmp_path, line):
        from src.errors import ConfigurationError
        from src.experiments.config import load_config

        path = tmp_path / 'run.cfg'
        path.write_text(f"example = 1\n{line}\n")
        with pytest.raises(ConfigurationError):
            load_config(path)


class TestHelpers:
    """Test suite for key nesting and merging."""

    def test_nest_keys(self):
        from src.experiments.config import nest_keys

        nested = nest_keys({'example': '1', 'scheme.variant': '2', 'scheme.corrections': 'false'})

        assert nested == {'example': '1', 'scheme': {'variant': '2', 'corrections': 'false'}}

    def test_conflicting_keys(self):
        from src.errors import ConfigurationError
        from src.experiments.config import nest_keys

        with pytest.raises(ConfigurationError):
            nest_keys({'grid': '3', 'grid.nx': '100'})
        with pytest.raises(ConfigurationError):
            nest_keys({'grid.': '3'})

    def test_merge_is_recursive(self):
        from src.experiments.config import merge

        merged = merge({'a': {'b': 1, 'c': 2}}, {'a': {'c': 3}, 'd': None})

        assert merged == {'a': {'b': 1, 'c': 3}}

    def test_example_config(self):
        """Scheme options and time controls are built from the sections."""
        from src.experiments.config import example_config

        config = example_config(5, 'a', {'scheme': {'diffusion_threshold': 1e-12}})
        options = config.scheme.options()
        controls = config.time.controls(0.08)

        assert options.variant.value == 'A'
        assert options.diffusion_threshold == 1e-12
        assert controls.t_final == 0.08 and controls.cfl == 0.5

    def test_example_out_of_range(self):
        from src.errors import ConfigurationError
        from src.experiments.config import example_config

        with pytest.raises(ConfigurationError):
            example_config(9)
