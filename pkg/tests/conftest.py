"""Shared helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from alertpaths.model import Alert

DATA_DIR = Path(__file__).parent / "data"


def mk_alert(
    source: str, dest: str, time_us: int, sid: int = 1, seq: int | None = None
) -> Alert:
    """Alert shorthand; seq defaults to the time so streams stay ordered."""
    return Alert(source, dest, time_us, sid, seq=time_us if seq is None else seq)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
