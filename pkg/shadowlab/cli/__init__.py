import logging
from typing import Optional

import click
from pythonjsonlogger import jsonlogger

from .. import __version__
from ..config import Config, load_config
from ..exceptions import ConfigError
from ..services import experiment_service, plot_service
from .commands import ExperimentCommandHandler, build_commands

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
JSON_LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


class LabApplication:
    """Command line wrapper for the shadowlab experiment runner."""

    def __init__(self) -> None:
        """Wire services into the command handler; configuration loads when a command runs."""
        self.config: Optional[Config] = None
        self.logger: logging.Logger = logging.getLogger(__name__)
        self.experiment_service = experiment_service
        self.plot_service = plot_service
        self.handler = ExperimentCommandHandler(self.experiment_service, self.plot_service)

    def _setup_logging(self) -> logging.Logger:
        """Configure application logging; `logging.format: json` switches to structured records."""
        log_level = str(self.config.get('logging.level', 'INFO')).upper()
        level = getattr(logging, log_level, None)
        if not isinstance(level, int):
            raise ConfigError(f"Unknown logging level: {log_level}")
        if self.config.get('logging.format', 'text') == 'json':
            handler = logging.StreamHandler()
            handler.setFormatter(jsonlogger.JsonFormatter(JSON_LOG_FORMAT))
            logging.basicConfig(level=level, handlers=[handler], force=True)
        else:
            logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
        return logging.getLogger(__name__)

    def configure(self, config_file: Optional[str] = None) -> None:
        """Load the application configuration and set up logging."""
        self.config = load_config(config_file)
        self.config.validate_required_keys(['paths.output_dir'])
        self.logger = self._setup_logging()
        self.handler.set_app_config(self.config)
        self.logger.debug(f"Configuration loaded from {self.config.config_file}")

    def create_cli(self) -> click.Group:
        """Create the click command group."""

        @click.group(help="Experiments on mean ergodic shadowing and related properties.")
        @click.version_option(__version__, prog_name='shadowlab')
        @click.option('--app-config', type=click.Path(dir_okay=False), default=None,
                      help="YAML application configuration (default: config.yaml).")
        def cli(app_config: Optional[str]) -> None:
            try:
                self.configure(app_config)
            except ConfigError as e:
                click.echo(f"error: {e.detail}", err=True)
                click.get_current_context().exit(e.exit_code)

        for command in build_commands(self.handler):
            cli.add_command(command)
        return cli


# Create application instance
lab_app = LabApplication()
cli = lab_app.create_cli()
