"""
Full-scale runs with the repository config.yaml. Deselect with ``-m "not slow"``.
"""

import pytest

from shadowlab.config import load_config
from shadowlab.experiments import EXPERIMENTS
from shadowlab.services.experiment_service import ExperimentService

pytestmark = pytest.mark.slow


@pytest.fixture(scope='module')
def repo_config():
    return load_config()


@pytest.fixture(scope='module')
def service():
    return ExperimentService()


@pytest.fixture
def run_full(service, repo_config, tmp_path):
    def _run(name, **overrides):
        config = service.resolve_config(
            name, repo_config, overrides={'output_path': str(tmp_path / name), **overrides}
        )
        return service.run_experiment(config, service.limits_from_config(repo_config))
    return _run


@pytest.mark.parametrize("name", list(EXPERIMENTS))
def test_experiment_passes_at_configured_scale(run_full, name):
    report = run_full(name)
    assert report.passed, report.statistics


def test_lemma_has_no_violations(run_full):
    report = run_full('lemma-equivalence')
    assert report.statistics['forward_violations'] == 0
    assert report.statistics['converse_violations'] == 0


def test_isometry_grid_minimum(run_full):
    report = run_full('isometry-no-mes')
    assert report.statistics['min_average_statistic'] >= 1 / 3 - 0.02


def test_two_circles_power_two_is_not_chain_transitive(run_full):
    report = run_full('two-circles')
    by_power = report.statistics['chain_transitive_by_power']
    assert by_power[:2] == [True, False]


def test_doubling_every_trial_traced(run_full):
    report = run_full('doubling-mes')
    assert report.statistics['passed_trials'] == report.statistics['trials'] == 100


def test_power_inequality_exact(run_full):
    assert run_full('power-interleave').statistics['violations'] == 0


def test_distality_every_pair_constant(run_full):
    report = run_full('distality')
    assert report.statistics['constant_distance_pairs'] == report.statistics['pairs'] == 1000


@pytest.mark.parametrize("name", ['constant-map-mes', 'shift-mes', 'product-mes'])
def test_payload_is_deterministic(run_full, name):
    assert run_full(name).payload_json() == run_full(name).payload_json()
