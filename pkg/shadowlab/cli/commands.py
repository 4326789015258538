import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import click
import yaml

from ..config import Config
from ..exceptions import ShadowLabError, UsageError
from ..services.experiment_service import REPORT_FILE

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1


def parse_param_pairs(pairs: Sequence[str]) -> Dict[str, Any]:
    """
    Parse repeated ``--param key=value`` options; values are read as YAML scalars
    or lists, so ``trials=5`` is an int and ``powers=[2,3]`` a list.
    """
    params: Dict[str, Any] = {}
    for pair in pairs:
        key, sep, raw = pair.partition('=')
        if not sep or not key.strip():
            raise UsageError(f"--param expects key=value, got '{pair}'")
        try:
            params[key.strip()] = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise UsageError(f"Cannot parse value of --param {key}: {e}") from e
    return params


class ExperimentCommandHandler:
    def __init__(self, experiment_service, plot_service):
        """
        Handles the run, list and plot commands. Library errors become exit codes
        through their ``exit_code``.
        """
        self.experiment_service = experiment_service
        self.plot_service = plot_service
        self.logger = logger
        self.app_config: Optional[Config] = None

    def set_app_config(self, app_config: Config) -> None:
        self.app_config = app_config

    def _fail(self, error: ShadowLabError) -> None:
        click.echo(f"error: {error.detail}", err=True)
        click.get_current_context().exit(error.exit_code)

    def run(
        self,
        experiment: Optional[str],
        system: Optional[str],
        horizon: Optional[int],
        delta: Optional[float],
        epsilon: Optional[float],
        resolution: Optional[float],
        seed: Optional[int],
        tail_fraction: Optional[str],
        out: Optional[str],
        config_file: Optional[str],
        param: Tuple[str, ...],
    ) -> None:
        """
        Runs one experiment and exits 0 on pass, 1 on fail.
        """
        try:
            overrides = {
                'system': system,
                'horizon': horizon,
                'delta': delta,
                'epsilon': epsilon,
                'net_resolution': resolution,
                'seed': seed,
                'tail_fraction': tail_fraction,
                'output_path': out,
            }
            params = parse_param_pairs(param)
            if params:
                overrides['params'] = params
            config = self.experiment_service.resolve_config(
                experiment, self.app_config, config_file=config_file, overrides=overrides
            )
            limits = self.experiment_service.limits_from_config(self.app_config)
            report = self.experiment_service.run_experiment(config, limits)
        except ShadowLabError as e:
            self.logger.error(f"Run failed: {e.detail}")
            self._fail(e)
            return

        outcome = "PASS" if report.passed else "FAIL"
        click.echo(f"{outcome} {report.experiment_name}: {report.assertion}")
        click.echo(f"report: {Path(config.output_path) / REPORT_FILE}")
        click.get_current_context().exit(EXIT_PASS if report.passed else EXIT_FAIL)

    def list_experiments(self) -> None:
        """
        Prints the registered experiments with their default system, anchor and
        the docs section that states the checked property.
        """
        entries = self.experiment_service.list_experiments()
        width = max(len(entry.name) for entry in entries)
        for entry in entries:
            click.echo(f"{entry.name.ljust(width)}  [{entry.default_system}]  {entry.anchor}  ({entry.reference})")

    def plot(
        self,
        csv_path: str,
        out: Optional[str],
        x_column: Optional[str],
        y_columns: Tuple[str, ...],
        title: Optional[str],
    ) -> None:
        """
        Renders a CSV artifact as an SVG line chart.
        """
        try:
            target = self.plot_service.plot_csv(csv_path, out, x_column, y_columns or None, title)
        except ShadowLabError as e:
            self.logger.error(f"Plot failed: {e.detail}")
            self._fail(e)
            return
        click.echo(target)


def build_commands(handler: ExperimentCommandHandler) -> Sequence[click.Command]:
    """Map the handler's bound methods to click commands."""
    run = click.Command(
        'run',
        callback=handler.run,
        help="Run one registered experiment and write its CSV/JSON artifacts.",
        params=[
            click.Option(['--experiment'], help="Registered experiment name."),
            click.Option(['--system'], help="Catalog system name (default: the experiment's own)."),
            click.Option(['--horizon'], type=int, help="Pseudo-orbit length."),
            click.Option(['--delta'], type=float, help="Pseudo-orbit step bound."),
            click.Option(['--epsilon'], type=float, help="Shadowing tolerance."),
            click.Option(['--resolution'], type=float, help="Epsilon-net resolution."),
            click.Option(['--seed'], type=int, help="Random seed."),
            click.Option(['--tail-fraction'], 'tail_fraction', help="Tail window fraction, e.g. 1/4."),
            click.Option(['--out'], type=click.Path(file_okay=False), help="Output directory."),
            click.Option(['--config', 'config_file'], type=click.Path(dir_okay=False),
                         help="JSON experiment configuration."),
            click.Option(['--param'], multiple=True, help="Experiment parameter key=value (repeatable)."),
        ],
    )
    list_command = click.Command(
        'list',
        callback=handler.list_experiments,
        help="List the registered experiments.",
    )
    plot = click.Command(
        'plot',
        callback=handler.plot,
        help="Render CSV columns as an SVG line chart.",
        params=[
            click.Option(['--csv', 'csv_path'], required=True, type=click.Path(dir_okay=False),
                         help="CSV file to plot."),
            click.Option(['--out'], type=click.Path(dir_okay=False), help="SVG file (default: next to the CSV)."),
            click.Option(['--x', 'x_column'], help="Column for the horizontal axis."),
            click.Option(['--y', 'y_columns'], multiple=True, help="Column to draw (repeatable)."),
            click.Option(['--title'], help="Chart title."),
        ],
    )
    return run, list_command, plot
