import json
import logging
import time
from datetime import datetime, timezone
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from .. import __version__
from ..config import Config
from ..core.spaces import DEFAULT_MAX_NET_SIZE, get_system
from ..exceptions import ConfigError, ResourceError, ShadowLabError, UsageError
from ..experiments.catalog import EXPERIMENTS, ExperimentEntry, list_experiments
from ..experiments.pipelines import Limits, PipelineResult, get_pipeline, verdict_record
from ..schemas import ExperimentConfig, ExperimentReport, Provenance
from .file_service import file_service

logger = logging.getLogger(__name__)

CONFIG_FIELDS = frozenset(ExperimentConfig.model_fields)
REPORT_FILE = 'report.json'


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, fractions and tuples into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Fraction):
        return str(value)
    return value


def _safe_name(label: str) -> str:
    return ''.join(c if c.isalnum() or c in '-_.' else '_' for c in label)


class ExperimentService:
    """
    Service for resolving, running and reporting registered experiments.

    Parameters are layered as ``experiments.defaults`` < ``experiments.<name>``
    < JSON config file < command line flags; anything that is not a named
    :class:`ExperimentConfig` field lands in ``params``.
    """

    def __init__(self):
        self.logger = logger
        self.file_service = file_service

    def set_file_service(self, file_service):
        """Set the file service instance."""
        self.file_service = file_service

    def list_experiments(self) -> List[ExperimentEntry]:
        return list(list_experiments())

    def limits_from_config(self, app_config: Config) -> Limits:
        limits = app_config.get('limits', default={}) or {}
        return Limits(
            max_net_size=int(limits.get('max_net_size', DEFAULT_MAX_NET_SIZE)),
            workers=limits.get('search_workers'),
        )

    def load_json_config(self, config_file: str) -> Dict[str, Any]:
        """
        Read a JSON experiment configuration.

        Raises:
            ConfigError: if the file cannot be read or is not a JSON object
        """
        path = Path(config_file)
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except OSError as e:
            raise ConfigError(f"Cannot read experiment config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Experiment config {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Experiment config {path} must be a JSON object")
        return data

    def check_system(self, config: ExperimentConfig) -> None:
        """
        Check that the system of ``config`` carries the kind of points its experiment traces.

        Raises:
            UsageError: for an unknown system or one whose points differ in kind
                from the experiment's default system
        """
        if not config.system:
            return
        entry = EXPERIMENTS[config.experiment_name]
        chosen = get_system(config.system, working_length=config.param('working_length'))
        expected = get_system(entry.default_system).point_kind
        if chosen.point_kind != expected:
            raise UsageError(
                f"Experiment {entry.name} runs on systems with {expected.value} points; "
                f"{config.system} has {chosen.point_kind.value} points"
            )

    def resolve_config(self, experiment_name: Optional[str], app_config: Config,
                       config_file: Optional[str] = None,
                       overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """
        Build the validated configuration of one run.

        Args:
            experiment_name: Registered experiment; may come from the JSON file instead
            app_config: Application configuration holding the experiment defaults
            config_file: Optional JSON file with configuration fields
            overrides: Command line values; ``None`` entries are ignored

        Raises:
            UsageError: for a missing or unknown experiment name, or a system the experiment
                cannot run on
            ConfigError: when the layered configuration does not validate
        """
        file_data = self.load_json_config(config_file) if config_file else {}
        name = experiment_name or file_data.get('experiment_name')
        if not name:
            raise UsageError("No experiment given; pass --experiment or set experiment_name in --config")
        if name not in EXPERIMENTS:
            raise UsageError(
                f"Unknown experiment '{name}'. Known experiments: {', '.join(EXPERIMENTS)}"
            )

        layered: Dict[str, Any] = {'tail_fraction': app_config.get('estimators.tail_fraction', default='1/4')}
        params: Dict[str, Any] = {}
        layers = [
            app_config.experiment_defaults(name),
            file_data,
            {k: v for k, v in (overrides or {}).items() if v is not None},
        ]
        for layer in layers:
            for key, value in layer.items():
                if key == 'params':
                    params.update(value or {})
                elif key in CONFIG_FIELDS:
                    layered[key] = value
                else:
                    params[key] = value
        layered['experiment_name'] = name
        if not layered.get('output_path'):
            layered['output_path'] = str(Path(app_config.get('paths.output_dir', default='results')) / name)

        try:
            config = ExperimentConfig(**layered, params=params)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration for {name}: {e}") from e
        self.check_system(config)
        self.logger.debug(f"Resolved configuration for {name}: {config.model_dump()}")
        return config

    def _artifact_jobs(self, config: ExperimentConfig, result: PipelineResult,
                       directory: Path) -> Dict[str, Callable[[], Any]]:
        name = config.experiment_name
        jobs: Dict[str, Callable[[], Any]] = {
            f"{name}.csv": partial(self.file_service.write_csv, result.table, str(directory / f"{name}.csv")),
        }
        for key, table in result.extra_tables.items():
            file_name = f"{name}.{_safe_name(key)}.csv"
            jobs[file_name] = partial(self.file_service.write_csv, table, str(directory / file_name))
        for key, (system, orbit) in result.orbits.items():
            file_name = f"{_safe_name(key)}.orbit.txt"
            jobs[file_name] = partial(self.file_service.write_pseudo_orbit, system, orbit, str(directory / file_name))
        for entry in result.verdicts:
            file_name = f"{_safe_name(entry.label)}.trace.csv"
            jobs[file_name] = partial(self.file_service.write_trace_csv, entry.verdict.evidence, str(directory / file_name))
        for key, (system, graph) in result.graphs.items():
            stem = _safe_name(key)
            jobs[f"{stem}.graph"] = partial(self.file_service.write_graph, system, graph, str(directory), stem)
        return jobs

    def run_experiment(self, config: ExperimentConfig, limits: Optional[Limits] = None) -> ExperimentReport:
        """
        Execute the pipeline of ``config.experiment_name`` and write its artifacts.

        Writes the main CSV table, extra tables, pseudo orbits, verdict traces,
        graphs and ``report.json`` under ``config.output_path``.

        Raises:
            UsageError: for an unregistered experiment or an incompatible system
            ResourceError: when a computation exceeds the configured limits
            OutputError: when an artifact cannot be written
        """
        limits = limits or Limits()
        entry = EXPERIMENTS.get(config.experiment_name)
        if entry is None:
            raise UsageError(f"Unknown experiment '{config.experiment_name}'")
        pipeline = get_pipeline(entry.name)
        self.check_system(config)

        started_at = datetime.now(timezone.utc).isoformat()
        start = time.perf_counter()
        self.logger.info(
            f"Running {entry.name} (system={config.system or entry.default_system}, horizon={config.horizon}, "
            f"δ={config.delta:g}, ε={config.epsilon:g}, seed={config.seed})"
        )
        try:
            result = pipeline(config, limits)
        except ShadowLabError as e:
            self.logger.error(f"Experiment {entry.name} failed: {e.detail}", exc_info=True)
            raise
        except MemoryError as e:
            self.logger.error(f"Experiment {entry.name} ran out of memory", exc_info=True)
            raise ResourceError(f"Experiment {entry.name} ran out of memory") from e

        directory = self.file_service.ensure_directory(config.output_path)
        jobs = self._artifact_jobs(config, result, directory)
        self.file_service.write_all(list(jobs.values()))
        artifacts = [REPORT_FILE]
        for name in jobs:
            if name.endswith('.graph'):
                stem = name[: -len('.graph')]
                artifacts.extend([f"{stem}.nodes.csv", f"{stem}.edges.csv"])
            else:
                artifacts.append(name)

        report = ExperimentReport(
            experiment_name=entry.name,
            anchor=entry.anchor,
            reference=entry.reference,
            config=config.model_dump(mode='json'),
            passed=bool(result.passed),
            assertion=result.assertion,
            statistics=jsonable(result.statistics),
            verdicts=[jsonable(verdict_record(v)) for v in result.verdicts],
            artifacts=sorted(artifacts),
            provenance=Provenance(
                library_version=__version__,
                started_at=started_at,
                duration_seconds=time.perf_counter() - start,
            ),
        )
        self.file_service.write_text(report.to_json(), str(directory / REPORT_FILE))
        outcome = "PASS" if report.passed else "FAIL"
        self.logger.info(
            f"{entry.name}: {outcome} in {report.provenance.duration_seconds:.2f}s, "
            f"{len(report.artifacts)} artifacts in {directory}"
        )
        return report


# Initialize service instance
experiment_service = ExperimentService()
