"""
Unit tests for experiment configs, presets, feasibility and the sweep grids.
"""

import json

import pytest
from conftest import requires_kam_criteria


@requires_kam_criteria
class TestExperimentConfig:
    """Tests for ExperimentConfig."""

    def test_defaults(self):
        """Test the default config is the golden acceptance setting."""
        from kam_criteria.config import ExperimentConfig

        config = ExperimentConfig()

        assert config.alpha == "golden"
        assert (config.depth, config.n, config.M) == (30, 10, 27)
        assert config.seeds == (0, 1, 2)
        assert config.kappa_range() == (6, 10)
        assert config.kappa0() == 6

    def test_dict_round_trip(self):
        """Test to_dict / from_dict reproduce the config."""
        from kam_criteria.config import ExperimentConfig

        config = ExperimentConfig(potential=((1, 0.02), (2, 0.01)), seeds=(4, 5))

        assert ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config

    def test_unknown_key(self):
        """Test unknown keys are rejected."""
        from kam_criteria.config import ExperimentConfig
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            ExperimentConfig.from_dict({"alpah": "golden"})

    def test_validation(self):
        """Test out-of-range values are rejected."""
        from kam_criteria.config import ExperimentConfig
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            ExperimentConfig(eps=0.0)
        with pytest.raises(InvalidInputError):
            ExperimentConfig(seeds=())
        with pytest.raises(InvalidInputError):
            ExperimentConfig(kappa_min=8, kappa_max=7)
        with pytest.raises(InvalidInputError):
            ExperimentConfig(chord_budget=0)
        with pytest.raises(InvalidInputError):
            ExperimentConfig(alpha=None)

    def test_hash_ignores_runtime_keys(self):
        """Test workers and paths do not change the config hash."""
        from kam_criteria.config import ExperimentConfig

        base = ExperimentConfig()

        assert base.replace(workers=8, store_path="elsewhere").config_hash == base.config_hash
        assert base.replace(eps=0.4).config_hash != base.config_hash
        assert "workers" not in json.loads(base.canonical_json())

    def test_custom_quotients(self):
        """Test a quotient period replaces the preset."""
        from kam_criteria.config import ExperimentConfig

        config = ExperimentConfig.from_dict({"alpha": None, "quotients": [1, 2], "depth": 20})

        assert config.quotients == (1, 2)
        assert config.build_alpha().bound == 2

    def test_build_potential(self):
        """Test the amplitude scale multiplies the potential."""
        from kam_criteria.config import ExperimentConfig
        from kam_criteria.twist_map import DEFAULT_AMPLITUDE

        assert ExperimentConfig(amplitude_scale=1e-3).build_potential().terms == (
            (1, DEFAULT_AMPLITUDE * 1e-3),
        )
        assert ExperimentConfig(potential=((3, 0.5),), amplitude_scale=2.0).build_potential().terms == (
            (3, 1.0),
        )

    def test_budgets(self, small_config):
        """Test budgets are carried into the sampling layer."""
        budgets = small_config.budgets

        assert (budgets.chords, budgets.pairs, budgets.quads) == (32, 16, 8)


@requires_kam_criteria
class TestFeasibility:
    """Tests for check_feasibility."""

    def test_acceptance_feasible(self):
        """Test the acceptance preset resolves kappa 6..10 with M = 27."""
        from kam_criteria.config import check_feasibility, preset_config

        alpha, kappa_range, n_bar = check_feasibility(preset_config("golden_acceptance"))

        assert kappa_range == (6, 10)
        assert n_bar == 22
        assert alpha.q[27] >= 8 * alpha.q[22]

    def test_short_window(self):
        """Test a short window is rejected with the smallest feasible M."""
        from kam_criteria.config import check_feasibility, preset_config
        from kam_criteria.errors import InfeasibleConfigError

        with pytest.raises(InfeasibleConfigError) as info:
            check_feasibility(preset_config("golden_acceptance", M=26))

        assert info.value.required_m == 27

    def test_shallow_depth(self):
        """Test a depth that cannot index N-bar is infeasible."""
        from kam_criteria.config import check_feasibility, preset_config
        from kam_criteria.errors import InfeasibleConfigError

        with pytest.raises(InfeasibleConfigError):
            check_feasibility(preset_config("golden_acceptance", depth=20, M=20))

    def test_small_presets(self):
        """Test the small presets are feasible."""
        from kam_criteria.config import check_feasibility, preset_config

        _, golden_range, golden_bar = check_feasibility(preset_config("golden_small"))
        _, silver_range, silver_bar = check_feasibility(preset_config("silver_small"))

        assert (golden_range, golden_bar) == ((5, 6), 16)
        assert (silver_range, silver_bar) == ((3, 3), 10)


@requires_kam_criteria
class TestLoading:
    """Tests for presets and config files."""

    def test_unknown_preset(self):
        """Test unknown preset names are rejected."""
        from kam_criteria.config import preset_config
        from kam_criteria.errors import InvalidInputError

        with pytest.raises(InvalidInputError):
            preset_config("platinum")

    def test_preset_overrides(self):
        """Test keyword overrides win over preset values."""
        from kam_criteria.config import preset_config

        config = preset_config("golden_control", seeds=[7])

        assert config.amplitude_scale == 1e3
        assert config.seeds == (7,)

    def test_control_presets(self):
        """Test each control differs from its base preset only in amplitude."""
        from kam_criteria.config import PRESETS

        for control, base, factor in (
            ("golden_control", "golden_acceptance", 1e6),
            ("golden_small_control", "golden_small", 1e3),
        ):
            assert PRESETS[control]["amplitude_scale"] == pytest.approx(
                factor * PRESETS[base]["amplitude_scale"]
            )
            rest = {k: v for k, v in PRESETS[control].items() if k != "amplitude_scale"}
            assert rest == {k: v for k, v in PRESETS[base].items() if k != "amplitude_scale"}

    def test_load_config(self, tmp_path):
        """Test a file selecting a preset with overrides."""
        from kam_criteria.config import load_config

        path = tmp_path / "run.json"
        path.write_text(json.dumps({"preset": "golden_small", "eps": 0.4}))

        config = load_config(path, workers=2)

        assert config.eps == 0.4
        assert config.M == 21
        assert config.workers == 2

    def test_load_bad_file(self, tmp_path):
        """Test invalid JSON and unknown presets are rejected."""
        from kam_criteria.config import load_config
        from kam_criteria.errors import InvalidInputError

        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        unknown = tmp_path / "unknown.json"
        unknown.write_text(json.dumps({"preset": "nope"}))

        with pytest.raises(InvalidInputError):
            load_config(broken)
        with pytest.raises(InvalidInputError):
            load_config(unknown)


@requires_kam_criteria
class TestSweepGrids:
    """Tests for the sweep grid generators."""

    def test_amplitude_grid(self):
        """Test the default amplitude grid around golden_small."""
        from kam_criteria.sweeps import amplitude_grid

        grid = amplitude_grid()

        assert [c.amplitude_scale for c in grid] == [0.0, 0.25, 1.0]
        assert all(c.M == 21 for c in grid)

    def test_kappa_grid(self, small_config):
        """Test one single-kappa config per kappa."""
        from kam_criteria.sweeps import kappa_grid

        grid = kappa_grid(small_config, [5, 6])

        assert [(c.kappa_min, c.kappa_max) for c in grid] == [(5, 5), (6, 6)]

    def test_level_grid(self, small_config):
        """Test level sweeps reset the kappa range to its default."""
        from kam_criteria.sweeps import level_grid

        grid = level_grid(small_config, [6, 7])

        assert [c.n for c in grid] == [6, 7]
        assert all(c.kappa_min is None and c.kappa_max is None for c in grid)

    def test_seed_grid(self, small_config):
        """Test seed replicas carry one seed each."""
        from kam_criteria.errors import InvalidInputError
        from kam_criteria.sweeps import seed_grid

        assert [c.seeds for c in seed_grid(small_config, [0, 1])] == [(0,), (1,)]
        with pytest.raises(InvalidInputError):
            seed_grid(small_config, [])
