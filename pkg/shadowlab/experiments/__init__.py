"""
Experiment catalog and pipelines.

Only the catalog is re-exported here; import pipelines from
``shadowlab.experiments.pipelines`` directly.
"""

from .catalog import EXPERIMENTS, ExperimentEntry, list_experiments

__all__ = ['EXPERIMENTS', 'ExperimentEntry', 'list_experiments']
