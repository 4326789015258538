import textwrap

import pytest

from shadowlab.config import load_config
from shadowlab.core.spaces import (
    make_constant_map,
    make_doubling_circle,
    make_full_shift,
    make_interval_isometry,
)


@pytest.fixture
def isometry():
    return make_interval_isometry()


@pytest.fixture
def doubling():
    return make_doubling_circle()


@pytest.fixture
def constant_map():
    return make_constant_map()


@pytest.fixture
def shift():
    return make_full_shift(2, 64)


@pytest.fixture
def output_dir(tmp_path):
    target = tmp_path / "results"
    target.mkdir()
    return target


@pytest.fixture
def app_config_file(tmp_path, output_dir, monkeypatch):
    """A small application config that keeps every artifact under tmp_path."""
    monkeypatch.delenv('SHADOWLAB_OUTPUT_DIR', raising=False)
    monkeypatch.delenv('SHADOWLAB_LOG_LEVEL', raising=False)
    path = tmp_path / "config.yaml"
    path.write_text(textwrap.dedent(f"""
        app:
          name: "shadowlab-test"
        logging:
          level: "WARNING"
          format: "text"
        paths:
          output_dir: "{output_dir}"
        limits:
          max_net_size: 4096
          search_workers: 2
        estimators:
          tail_fraction: "1/4"
        experiments:
          defaults:
            horizon: 256
            delta: 0.03141592653589793
            epsilon: 0.05
            net_resolution: 0.01
            seed: 0
          isometry-no-mes:
            horizon: 146
            delta: 0.5
            epsilon: 0.25
            net_resolution: 0.001
            n_blocks: 8
          constant-map-mes:
            delta: 0.01
            trials: 2
            radius: 0.0
    """))
    return path


@pytest.fixture
def app_config(app_config_file):
    return load_config(str(app_config_file))
