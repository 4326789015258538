import pytest

from shadowlab.config import Config, load_config
from shadowlab.exceptions import ConfigError, UsageError


def test_dot_notation_access(app_config):
    assert app_config.get('logging.level') == 'WARNING'
    assert app_config.get('limits.max_net_size') == 4096
    assert app_config.get('missing.key', 'fallback') == 'fallback'
    with pytest.raises(KeyError):
        app_config.get('missing.key')


def test_experiment_defaults_are_layered(app_config):
    defaults = app_config.experiment_defaults('isometry-no-mes')
    assert defaults['horizon'] == 146
    assert defaults['n_blocks'] == 8
    assert defaults['seed'] == 0
    assert app_config.experiment_defaults('shift-mes')['horizon'] == 256


def test_environment_overrides(app_config_file, monkeypatch, tmp_path):
    monkeypatch.setenv('SHADOWLAB_OUTPUT_DIR', str(tmp_path / "elsewhere"))
    monkeypatch.setenv('SHADOWLAB_LOG_LEVEL', 'DEBUG')
    config = load_config(str(app_config_file))
    assert config.get('paths.output_dir') == str(tmp_path / "elsewhere")
    assert config.get('logging.level') == 'DEBUG'


def test_set_creates_sections(app_config):
    app_config.set('estimators.extra.depth', 3)
    assert app_config.get('estimators.extra.depth') == 3


def test_required_keys(app_config):
    app_config.validate_required_keys(['paths.output_dir', 'limits.max_net_size'])
    with pytest.raises(ConfigError) as excinfo:
        app_config.validate_required_keys(['paths.output_dir', 'paths.cache_dir'])
    assert 'paths.cache_dir' in excinfo.value.detail


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        Config(str(tmp_path / "absent.yaml"))
    broken = tmp_path / "broken.yaml"
    broken.write_text("app: [unclosed\n")
    with pytest.raises(ConfigError):
        Config(str(broken))
    scalar = tmp_path / "scalar.yaml"
    scalar.write_text("just a string\n")
    with pytest.raises(ConfigError):
        Config(str(scalar))


def test_config_error_is_a_usage_error():
    assert issubclass(ConfigError, UsageError)
    assert ConfigError("x").exit_code == 2


def test_repository_config_loads(monkeypatch):
    monkeypatch.delenv('SHADOWLAB_OUTPUT_DIR', raising=False)
    config = load_config()
    assert config.get('paths.output_dir') == 'results'
    assert config.experiment_defaults('doubling-mes')['trials'] == 100
