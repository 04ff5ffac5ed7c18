"""Central configuration objects for modalweave."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional, Tuple


@dataclass
class SemanticsConfig:
    """Budget and batching for brute-force validity checks."""

    budget: int = 2**24
    batch_size: int = 2**15


@dataclass
class LedgerConfig:
    """Parameter ranges swept by the claim ledger."""

    max_index: int = 3
    max_n: int = 3
    fine_sizes: Tuple[int, ...] = (3, 4, 5)
    chain_columns: int = 4
    alpha_max_j: int = 4
    psi_max_index: int = 4
    seed: int = 20240611


@dataclass
class LoggingConfig:
    level: str = "WARNING"


@dataclass
class AppConfig:
    """Bundle config sections used by the CLI and the Streamlit front end."""

    project_title: str = "modalweave - Kripke frame workbench"
    experiment_log: Optional[str] = None
    semantics: SemanticsConfig = field(default_factory=SemanticsConfig)
    ledger: LedgerConfig = field(default_factory=LedgerConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Overlay MODALWEAVE_* environment variables on the defaults."""
        config = cls()
        budget = os.getenv("MODALWEAVE_BUDGET")
        if budget:
            config.semantics.budget = int(budget)
        level = os.getenv("MODALWEAVE_LOG_LEVEL")
        if level:
            config.logging.level = level.upper()
        config.experiment_log = os.getenv("MODALWEAVE_EXPERIMENT_LOG") or None
        return config
