"""Configuration manager for loading and validating run defaults from YAML."""

import os
from pathlib import Path
from typing import List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from martingale_sim.strategy_ids import StrategyID

# NumericsConfig fields passed on to LegendreSolution
_SOLUTION_FIELDS = {"trunc_tol", "max_terms", "radius_guard", "series_edge", "ode_rtol", "ode_atol", "ode_delta"}


class NumericsConfig(BaseModel):
    """Tolerances and trust-region settings of the special-function layer."""

    model_config = ConfigDict(extra="forbid")

    trunc_tol: float = Field(1e-14, gt=0, description="Relative size below which f1 series terms count as negligible")
    max_terms: int = Field(10_000, ge=10, description="Hard cap on the number of f1 series terms")
    radius_guard: float = Field(1e-6, gt=0, lt=0.5, description="Minimal distance to s=-1 where f1 is evaluated")
    series_edge: float = Field(-0.5, gt=-1.0, lt=1.0, description="Leftmost s where the non-terminating series is used")
    zero_tol: float = Field(1e-13, gt=0, description="Bracket width for the largest zero z_p")
    num_tol: float = Field(1e-8, gt=0, description="Scaled slack for every '<= 0' verification check")
    ode_rtol: float = Field(1e-12, gt=0, description="Relative tolerance of the DOP853 Legendre integrator")
    ode_atol: float = Field(1e-14, gt=0, description="Absolute tolerance of the DOP853 Legendre integrator")
    ode_delta: float = Field(1e-4, gt=0, lt=0.5, description="Offset from s=1 where the ODE oracle starts")

    def solution_settings(self) -> dict:
        """Keyword arguments for LegendreSolution.from_p."""
        return self.model_dump(include=_SOLUTION_FIELDS)


class GridConfig(BaseModel):
    """Grid sizes for lemma and Bellman verification."""

    model_config = ConfigDict(extra="forbid")

    supersolution: int = Field(2000, ge=100, description="Points of the supersolution grid")
    quadratic_form: int = Field(2000, ge=100, description="Points of the quadratic-form grid")
    directions: int = Field(64, ge=4, description="Direction samples (u, b) per grid point")
    lemma: int = Field(200, ge=10, description="Points of the monotonicity grids for beta and a")
    convexity: int = Field(500, ge=10, description="Points of the convexity grid for f1")
    zero_minimality_pairs: int = Field(50, ge=1, description="Random (c1, c2) pairs of the zero-minimality check")


class SimulationConfig(BaseModel):
    """Monte-Carlo defaults."""

    model_config = ConfigDict(extra="forbid")

    n_paths: int = Field(100_000, ge=1000, description="Number of simulated paths")
    n_steps: int = Field(256, ge=1, description="Number of time steps")
    t_final: float = Field(1.0, gt=0, description="Terminal time")
    seed: int = Field(12345, ge=0, description="Root seed of the per-batch random streams")
    n_batches: int = Field(50, ge=2, description="Batches for batch-means standard errors")
    brownian: Literal["bridge", "increments"] = Field(
        "bridge", description="Brownian path construction: dyadic bridge or plain increments"
    )
    heavy_tail_ratio: float = Field(
        1e3, gt=1, description="Warn when E|Z|^(2p) / (E|Z|^p)^2 exceeds this value"
    )
    strategies: List[StrategyID] = Field(
        default_factory=lambda: list(StrategyID), description="Strategies run by default"
    )


class TableConfig(BaseModel):
    """Defaults of the asymptotics table."""

    model_config = ConfigDict(extra="forbid")

    p_list: List[float] = Field(
        default_factory=lambda: [10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0],
        description="Exponents listed in the asymptotics table",
    )


class RunDefaults(BaseModel):
    """Top-level structure of infra/config.yaml."""

    model_config = ConfigDict(extra="forbid")

    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    grids: GridConfig = Field(default_factory=GridConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    table: TableConfig = Field(default_factory=TableConfig)


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation."""

    command: Literal["constant", "table", "verify", "simulate"]
    p: Optional[float] = Field(None, description="Exponent for single-p commands")
    p_list: Optional[List[float]] = Field(None, description="Exponents for the table command")
    zero_tol: float = Field(1e-13, gt=0)
    num_tol: float = Field(1e-8, gt=0)
    grid: int = Field(2000, ge=100)
    quad_grid: Optional[int] = Field(None, ge=100, description="Points of the quadratic-form grid; None reuses grid")
    directions: int = Field(64, ge=4)
    override_c: Optional[float] = Field(None, gt=0)
    n_paths: int = Field(100_000, ge=1000)
    n_steps: int = Field(256, ge=1)
    t_final: float = Field(1.0, gt=0)
    seed: int = Field(12345, ge=0)
    n_batches: int = Field(50, ge=2)
    brownian: Literal["bridge", "increments"] = "bridge"
    heavy_tail_ratio: float = Field(1e3, gt=1)
    strategies: List[StrategyID] = Field(default_factory=lambda: list(StrategyID))
    out: Optional[Path] = None
    format: Literal["csv", "json"] = "json"
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    grids: GridConfig = Field(default_factory=GridConfig)

    @field_validator("p")
    @classmethod
    def _p_in_range(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not value >= 2.0:
            raise ValueError(f"p must be >= 2, got {value}")
        return value

    @field_validator("p_list")
    @classmethod
    def _p_list_sorted(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is None:
            return value
        if not value:
            raise ValueError("p_list must not be empty")
        if any(not p >= 2.0 for p in value):
            raise ValueError(f"every p must be >= 2, got {value}")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"p_list must be strictly ascending, got {value}")
        return value

    @model_validator(mode="after")
    def _p_present(self) -> "RunConfig":
        if self.command in ("constant", "verify", "simulate") and self.p is None:
            raise ValueError(f"command '{self.command}' requires p")
        if self.command == "table" and self.p_list is None:
            raise ValueError("command 'table' requires p_list")
        return self


class RunConfigManager:
    """Manager for loading and accessing run defaults.

    Configuration path resolution (in order of precedence):
    1. Explicitly provided config_path parameter
    2. SHARP_MTG_CONFIG_PATH environment variable
    3. Default: config.yaml next to this module
    """

    DEFAULT_CONFIG_PATH = Path(__file__).parent / "config.yaml"
    ENV_VAR_NAME = "SHARP_MTG_CONFIG_PATH"

    def __init__(self, config_path: Optional[str] = None):
        """Initialize the config manager with a path to the config file.

        Args:
            config_path: Optional path to the YAML configuration file.
                        If not provided, uses SHARP_MTG_CONFIG_PATH env var or the packaged default.

        Examples:
            >>> # Use packaged defaults (infra/config.yaml)
            >>> config_mgr = RunConfigManager()

            >>> # Use explicit path
            >>> config_mgr = RunConfigManager("custom/config.yaml")
        """
        self.config_path = self._resolve_config_path(config_path)
        self.defaults = self.load_config()

    def _resolve_config_path(self, config_path: Optional[str]) -> Path:
        """Resolve the configuration file path.

        Args:
            config_path: Explicitly provided path (highest priority)

        Returns:
            Resolved Path object
        """
        # Priority 1: Explicit path provided
        if config_path:
            self._config_source = "explicit"
            return Path(config_path)

        # Priority 2: Environment variable
        env_path = os.environ.get(self.ENV_VAR_NAME)
        if env_path:
            self._config_source = "environment"
            return Path(env_path)

        # Priority 3: Default path
        self._config_source = "default"
        return self.DEFAULT_CONFIG_PATH

    def get_config_source(self) -> str:
        """Get a description of where the configuration was loaded from.

        Returns:
            String describing the config source (e.g., "default", "environment", "explicit")
        """
        source_descriptions = {
            "explicit": f"explicit path: {self.config_path}",
            "environment": f"environment variable {self.ENV_VAR_NAME}: {self.config_path}",
            "default": f"default: {self.config_path}",
        }
        return source_descriptions.get(self._config_source, f"unknown: {self.config_path}")

    def read_config_file(self) -> dict:
        """Read and parse the YAML configuration file.

        Returns:
            Dictionary containing the parsed YAML content (empty when the file is empty)

        Raises:
            FileNotFoundError: If the config file doesn't exist
            yaml.YAMLError: If the YAML is malformed
        """
        if not self.config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self.config_path}")

        with open(self.config_path, "r") as file:
            return yaml.safe_load(file) or {}

    def load_config(self) -> RunDefaults:
        """Load the configuration and create a RunDefaults object.

        Raises:
            pydantic.ValidationError: If the config doesn't match the schema
        """
        return RunDefaults.model_validate(self.read_config_file())

    def reload_config(self) -> None:
        """Reload the configuration from disk."""
        self.defaults = self.load_config()
