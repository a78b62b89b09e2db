"""Helper functions for applying run defaults from config.yaml.

This module merges command-line overrides over the YAML defaults so every
command validates its parameters in one place.
"""

from typing import Any, Dict, Optional

from infra.config_manager import RunConfig, RunConfigManager


def apply_run_config(
    command: str,
    config_manager: Optional[RunConfigManager],
    overrides: Dict[str, Any],
) -> RunConfig:
    """Build the validated RunConfig of one command.

    Values given on the command line win; missing ones come from the config
    manager's defaults, or from the RunConfig field defaults when no manager
    is given.

    Args:
        command: One of "constant", "table", "verify", "simulate"
        config_manager: Optional RunConfigManager instance
        overrides: Command-line values; None means "not given"

    Returns:
        The validated RunConfig

    Raises:
        pydantic.ValidationError: If the merged values violate a constraint

    Example:
        >>> from infra.config_manager import RunConfigManager
        >>>
        >>> run = apply_run_config("constant", RunConfigManager(), {"p": 6.0})
        >>> run.zero_tol
        1e-13
    """
    values: Dict[str, Any] = {"command": command}
    if config_manager:
        defaults = config_manager.defaults
        sim = defaults.simulation
        values.update(
            zero_tol=defaults.numerics.zero_tol,
            num_tol=defaults.numerics.num_tol,
            grid=defaults.grids.supersolution,
            quad_grid=defaults.grids.quadratic_form,
            directions=defaults.grids.directions,
            n_paths=sim.n_paths,
            n_steps=sim.n_steps,
            t_final=sim.t_final,
            seed=sim.seed,
            n_batches=sim.n_batches,
            brownian=sim.brownian,
            heavy_tail_ratio=sim.heavy_tail_ratio,
            strategies=list(sim.strategies),
            numerics=defaults.numerics,
            grids=defaults.grids,
        )
        if command == "table":
            values["p_list"] = list(defaults.table.p_list)

    # Apply command-line values, preferring them over the defaults
    values.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.model_validate(values)
