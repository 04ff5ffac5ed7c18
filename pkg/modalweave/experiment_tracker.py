"""Markdown run log for workbench sessions and ledger runs."""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import Mapping, Optional, Union

from .ledger import LedgerReport

logger = logging.getLogger(__name__)

DEFAULT_LOG = "docs/experiments.md"


def format_entry(
    title: str,
    parameters: Mapping[str, object],
    observation: str,
    when: Optional[datetime] = None,
) -> str:
    stamp = (when or datetime.now()).strftime("%Y-%m-%d %H:%M")
    settings = ", ".join(f"{key}={value}" for key, value in parameters.items()) or "n/a"
    return (
        f"### {stamp} - {title}\n\n"
        f"**Parameters:** {settings}\n\n"
        f"**Observation:** {observation.strip() or 'n/a'}\n\n"
        "---\n"
    )


def log_experiment(
    title: str,
    parameters: Mapping[str, object],
    observation: str,
    log_path: Union[str, Path] = DEFAULT_LOG,
) -> Path:
    """Append one entry to the run log, creating the file and its folder if needed."""
    target = Path(log_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("a", encoding="utf-8") as log_file:
        log_file.write(format_entry(title, parameters, observation))
    logger.info("recorded '%s' in %s", title, target)
    return target


def log_ledger_run(
    report: LedgerReport,
    budget: int,
    note: str = "",
    log_path: Optional[Union[str, Path]] = None,
) -> Path:
    failed = [row.claim_id for row in report.failures]
    if note.strip():
        observation = note
    elif failed:
        observation = "Failed: " + ", ".join(failed)
    else:
        observation = "All claims reproduced."
    settings = {
        "budget": budget,
        "claims": len(report.rows),
        "failed": len(failed),
        "seconds": round(report.seconds, 2),
    }
    return log_experiment("Claim ledger", settings, observation, log_path or DEFAULT_LOG)
