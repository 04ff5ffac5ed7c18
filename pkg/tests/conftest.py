import json

import numpy as np
import pytest

from modalweave import corpus
from modalweave.cli import main
from modalweave.file_formats import frame_to_document
from modalweave.formula import Signature


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def mono():
    return Signature.of("d")


@pytest.fixture
def lawn_rake3():
    return corpus.lawn_rake(3)


@pytest.fixture
def write_json(tmp_path):
    """Write a payload (or a Frame) to a JSON file under tmp_path and return the path."""

    def _write(name, payload, valuation=None):
        if hasattr(payload, "relations"):
            payload = frame_to_document(payload, valuation)
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def run_cli(capsys, monkeypatch):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    monkeypatch.delenv("MODALWEAVE_EXPERIMENT_LOG", raising=False)
    monkeypatch.delenv("MODALWEAVE_BUDGET", raising=False)

    def _run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
