"""
Central Configuration System

Environment-level settings for the application: logging, parallelism and the
location of the YAML run-defaults file. Values are read from environment
variables with validation; a .env file is loaded automatically.

Run defaults (tolerances, grids, Monte-Carlo sizes) live in infra/config.yaml
and are handled by infra.config_manager.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file in the infra directory
_infra_dir = Path(__file__).parent
_env_file = _infra_dir / ".env"

# Load from infra/.env if it exists, otherwise try root .env
if _env_file.exists():
    load_dotenv(_env_file)
else:
    load_dotenv()


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).lower() in ("true", "1", "yes")


@dataclass
class ParallelConfig:
    """
    Worker pool settings for grid verification and Monte-Carlo batches.

    - threads: upper bound on worker threads (SHARP_MTG_THREADS); defaults to
      the machine's parallelism
    """

    threads: int = 1

    @classmethod
    def from_env(cls) -> "ParallelConfig":
        """Load parallelism settings from environment variables."""
        raw = os.getenv("SHARP_MTG_THREADS")
        if raw is None or not raw.strip():
            return cls(threads=os.cpu_count() or 1)
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"SHARP_MTG_THREADS must be a positive integer, got {raw!r}")
        if threads < 1:
            raise ValueError(f"SHARP_MTG_THREADS must be a positive integer, got {threads}")
        return cls(threads=threads)

    def workers_for(self, n_tasks: int) -> int:
        """Number of workers to use for n_tasks independent tasks."""
        return max(1, min(self.threads, n_tasks))


@dataclass
class AppConfig:
    """Main application configuration."""

    parallel: ParallelConfig

    # Path of the YAML run-defaults file, None means the packaged default
    run_config_path: Optional[str] = None

    # Application settings
    debug: bool = False
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Load complete application configuration from environment variables."""
        return cls(
            parallel=ParallelConfig.from_env(),
            run_config_path=os.getenv("SHARP_MTG_CONFIG_PATH") or None,
            debug=_env_flag("DEBUG"),
            log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
        )


# Global configuration instance
config = AppConfig.from_env()
