"""Strategy identifiers for the Monte-Carlo engine.

These names are used on the command line, in the simulation section of
config.yaml and in the CSV output.
"""

from enum import Enum


class StrategyID(str, Enum):
    """Official strategy identifiers.

    Enum keys are uppercase snake case versions of the identifiers.
    Enum values are the lowercase-with-hyphens names used as:
    - the --strategy option of the simulate command
    - entries of simulation.strategies in config.yaml
    - the strategy column of the simulation CSV
    """

    IDENTITY = "identity"
    ROTATION = "rotation"
    REFLECTED = "reflected"
    DAMPED = "damped"
    ANTIPHASE = "antiphase"
    GREEDY = "greedy"
    AB_TRANSFORM = "ab-transform"
    SWITCHING = "switching"

    @classmethod
    def from_strategy_id(cls, strategy_id: str) -> "StrategyID":
        """Get StrategyID from a strategy name.

        Args:
            strategy_id: Strategy name (e.g., 'ab-transform')

        Returns:
            Corresponding StrategyID enum member

        Raises:
            ValueError: If the name doesn't match any strategy
        """
        for member in cls:
            if member.value == strategy_id:
                return member
        raise ValueError(f"Unknown strategy ID: {strategy_id}. Valid options: {cls.all_ids()}")

    @classmethod
    def all_ids(cls) -> list[str]:
        """Get all strategy names.

        Returns:
            List of strategy name strings (lowercase with hyphens)
        """
        return [member.value for member in cls]

    @property
    def z_orthogonal(self) -> bool:
        """False for the A*Z strategy, whose Z frames need not be orthogonal."""
        return self is not StrategyID.AB_TRANSFORM

    def __str__(self) -> str:
        """String representation returns the strategy name."""
        return self.value
