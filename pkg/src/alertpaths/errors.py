"""Exception types shared across the engine.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat:
parse problems, store problems, and the out-of-order special case that
callers are expected to recover from by reinserting.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every error raised by this package."""


class ParseError(EngineError):
    """An input line could not be turned into an alert."""

    def __init__(self, message: str, line_no: int | None = None) -> None:
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class StoreError(EngineError):
    """The store was asked to do something inconsistent with its contents."""


class OutOfOrderError(StoreError):
    """An alert arrived behind the stream head; reinsert it instead."""
