"""
Pydantic models for experiment configuration and reports.
"""

from fractions import Fraction
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .experiments.catalog import EXPERIMENTS

SEED_MODULUS = 2 ** 64


class ExperimentConfig(BaseModel):
    """
    Parameters of one experiment run.

    ``params`` carries experiment-specific knobs (trial counts, block counts,
    powers ...); the named fields are shared by every experiment.
    """

    model_config = ConfigDict(extra='forbid')

    experiment_name: str
    system: Optional[str] = None
    horizon: int = Field(gt=0)
    delta: float = Field(gt=0)
    epsilon: float = Field(gt=0)
    net_resolution: float = Field(gt=0)
    seed: int = 0
    tail_fraction: str = "1/4"
    output_path: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator('experiment_name')
    @classmethod
    def validate_experiment_name(cls, value: str) -> str:
        if value not in EXPERIMENTS:
            raise ValueError(f"unknown experiment '{value}'")
        return value

    @field_validator('tail_fraction', mode='before')
    @classmethod
    def validate_tail_fraction(cls, value: Any) -> str:
        try:
            fraction = Fraction(str(value))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"tail_fraction must be a rational such as 1/4, got {value!r}") from e
        if not 0 < fraction <= 1:
            raise ValueError(f"tail_fraction must lie in (0, 1], got {fraction}")
        return str(fraction)

    @property
    def tail(self) -> Fraction:
        return Fraction(self.tail_fraction)

    @property
    def rng_seed(self) -> int:
        """``seed`` reduced modulo 2**64; negative seeds map to 2**64 + seed."""
        return self.seed % SEED_MODULUS

    def param(self, name: str, default: Any = None) -> Any:
        return self.params.get(name, default)


class Provenance(BaseModel):
    library_version: str
    started_at: str
    duration_seconds: float


class ExperimentReport(BaseModel):
    """
    Outcome of a run. Everything except ``provenance`` is a deterministic
    function of the configuration.
    """

    experiment_name: str
    anchor: str
    reference: str = ""
    config: Dict[str, Any]
    passed: bool
    assertion: str
    statistics: Dict[str, Any] = Field(default_factory=dict)
    verdicts: List[Dict[str, Any]] = Field(default_factory=list)
    artifacts: List[str] = Field(default_factory=list)
    provenance: Optional[Provenance] = None

    def payload(self) -> Dict[str, Any]:
        """The reproducible part of the report."""
        return self.model_dump(mode='json', exclude={'provenance'})

    def payload_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode='json'), sort_keys=True, indent=2)
