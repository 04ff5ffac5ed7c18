from datetime import datetime

from modalweave.config import LedgerConfig
from modalweave.experiment_tracker import format_entry, log_experiment, log_ledger_run
from modalweave.ledger import ClaimRow, LedgerReport, reproduce_claims


def test_format_entry():
    entry = format_entry("Claim ledger", {"budget": 64}, "ok", when=datetime(2024, 6, 11, 9, 5))
    assert entry == "### 2024-06-11 09:05 - Claim ledger\n\n**Parameters:** budget=64\n\n**Observation:** ok\n\n---\n"


def test_log_experiment_appends_entries(tmp_path):
    log = tmp_path / "nested" / "log.md"
    log_experiment("Frame inspection", {"family": "LawnRake(3,)", "worlds": 4}, "  wide handle ", str(log))
    path = log_experiment("Empty", {}, "", str(log))
    text = path.read_text(encoding="utf-8")
    assert text.count("### ") == 2
    assert "**Parameters:** family=LawnRake(3,), worlds=4" in text
    assert "**Observation:** wide handle" in text
    assert "**Parameters:** n/a" in text
    assert text.endswith("---\n")


def test_ledger_run_lists_failures(tmp_path):
    report = LedgerReport(
        [
            ClaimRow("a/1", "ref", "true", "true", "PASS"),
            ClaimRow("b/2", "ref", "true", "E_BUDGET: too big", "FAIL"),
        ],
        1.234,
    )
    text = log_ledger_run(report, 64, log_path=str(tmp_path / "log.md")).read_text(encoding="utf-8")
    assert "budget=64, claims=2, failed=1, seconds=1.23" in text
    assert "Failed: b/2" in text


def test_ledger_run_with_note(tmp_path):
    report = reproduce_claims(config=LedgerConfig(max_index=0), only=["Dj-validates-52"])
    text = log_ledger_run(report, 2**20, "first sweep", str(tmp_path / "log.md")).read_text(encoding="utf-8")
    assert "**Observation:** first sweep" in text
