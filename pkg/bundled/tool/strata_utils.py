# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Utility functions and classes shared by the strata-rings tools."""
from __future__ import annotations

import contextlib
import io
import logging
import os
import os.path
import pathlib
import sys
import threading
from typing import Any, Callable, Dict, Optional, Sequence

TOOL_NAME = "strata-rings"
TOOL_VERSION = "0.3.0"

# Save the working directory used when loading this module
TOOL_CWD = os.getcwd()
CWD_LOCK = threading.Lock()

NOTIFY_LEVELS = ("off", "onError", "onWarning", "always")
DEFAULT_COLUMN_CEILING = 2_000_000

GLOBAL_SETTINGS: Dict[str, Any] = {}


# **********************************************************
# Errors.
# **********************************************************
class StrataRingsError(Exception):
    """Base class for errors raised by the strata-rings tools."""


class InvalidArgumentError(StrataRingsError):
    """A precondition on the arguments of an operation does not hold."""


class InvalidPartitionError(InvalidArgumentError):
    """Represents a splitting that is not an exact disjoint cover, or fails a size bound."""

    def __init__(self, ground, parts, reason: Optional[str] = None):
        super().__init__()
        self.ground = ground
        self.parts = tuple(parts)
        self.reason = reason

    def __repr__(self):
        if self.reason:
            return f"Subsets {list(self.parts)} of {self.ground}: {self.reason}"
        return f"Subsets {list(self.parts)} do not split {self.ground} disjointly."

    __str__ = __repr__


class AlphabetMismatchError(InvalidArgumentError):
    """A polynomial was formed over a different generator alphabet."""


class ResourceLimitError(StrataRingsError):
    """A degree slice is wider than the configured column ceiling."""

    def __init__(self, degree: int, columns: int, ceiling: int):
        super().__init__()
        self.degree = degree
        self.columns = columns
        self.ceiling = ceiling

    def __repr__(self):
        return (
            f"Degree {self.degree} slice has {self.columns} columns, "
            f"above the ceiling of {self.ceiling}."
        )

    __str__ = __repr__


class ConsistencyError(StrataRingsError):
    """An internal invariant was violated."""


# *****************************************************
# Settings management.
# *****************************************************
def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    value = os.getenv(name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        log_warning(f"Ignoring non-integer value for {name}: {value!r}")
        return default


def _get_global_defaults() -> Dict[str, Any]:
    return {
        "cacheDir": GLOBAL_SETTINGS.get("cacheDir", os.getenv("STRATA_RINGS_CACHE") or None),
        "columnCeiling": GLOBAL_SETTINGS.get(
            "columnCeiling",
            _env_int("STRATA_RINGS_COLUMN_CEILING", DEFAULT_COLUMN_CEILING),
        ),
        "modularPrecheck": GLOBAL_SETTINGS.get("modularPrecheck", True),
        "jobs": GLOBAL_SETTINGS.get("jobs", _env_int("STRATA_RINGS_JOBS", 1)),
        "verifyDegreeBound": GLOBAL_SETTINGS.get("verifyDegreeBound", 0),
        "showNotifications": GLOBAL_SETTINGS.get(
            "showNotifications", os.getenv("STRATA_RINGS_NOTIFY", "off")
        ),
    }


def get_settings() -> Dict[str, Any]:
    """Returns the effective settings: flags, then environment, then defaults."""
    return _get_global_defaults()


def update_settings(**settings: Any) -> None:
    """Records settings given on the command line; `None` values are ignored."""
    GLOBAL_SETTINGS.update({k: v for k, v in settings.items() if v is not None})


@contextlib.contextmanager
def settings_override(**settings: Any):
    """Temporarily applies settings, restoring the previous ones afterwards."""
    saved = dict(GLOBAL_SETTINGS)
    update_settings(**settings)
    try:
        yield get_settings()
    finally:
        GLOBAL_SETTINGS.clear()
        GLOBAL_SETTINGS.update(saved)


# *****************************************************
# Logging and notification.
# *****************************************************
class _StderrHandler(logging.StreamHandler):
    """Writes to whatever `sys.stderr` is when a record is emitted."""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, _value):
        pass


_LOGGER = logging.getLogger("strata_rings")
if not _LOGGER.handlers:
    _HANDLER = _StderrHandler()
    _HANDLER.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    _LOGGER.addHandler(_HANDLER)
    _LOGGER.setLevel(logging.DEBUG)
    _LOGGER.propagate = False


def _notify_level() -> str:
    level = (
        GLOBAL_SETTINGS.get("showNotifications")
        or os.getenv("STRATA_RINGS_NOTIFY")
        or "off"
    )
    return level if level in NOTIFY_LEVELS else "off"


def log_to_output(message: str) -> None:
    """Logs trace messages; shown only at the `always` level."""
    if _notify_level() in ["always"]:
        _LOGGER.debug(message)


def log_error(message: str) -> None:
    """Logs messages on error."""
    _LOGGER.error(message)


def log_warning(message: str) -> None:
    """Logs messages on warning."""
    _LOGGER.warning(message)


def log_always(message: str) -> None:
    """Logs informational messages; shown only at the `always` level."""
    if _notify_level() in ["always"]:
        _LOGGER.info(message)


# *****************************************************
# Running tools with captured stdio.
# *****************************************************
# pylint: disable-next=too-few-public-methods
class RunResult:
    """Object to hold result from running a tool."""

    def __init__(self, stdout: str, stderr: str, exit_code: int = 0):
        self.stdout = stdout
        self.stderr = stderr
        self.exit_code = exit_code


class CustomIO(io.TextIOWrapper):
    """Custom stream object to replace stdio."""

    name = None

    def __init__(self, name, encoding="utf-8", newline=None):
        self._buffer = io.BytesIO()
        self._buffer.name = name
        super().__init__(self._buffer, encoding=encoding, newline=newline)

    def close(self):
        """Provide this close method which is used by some tools."""
        # This is intentionally empty.

    def get_value(self) -> str:
        """Returns value from the buffer as string."""
        self.seek(0)
        return self.read()


@contextlib.contextmanager
def substitute_attr(obj: Any, attribute: str, new_value: Any):
    """Swap an attribute for the duration of the block."""
    old_value = getattr(obj, attribute)
    setattr(obj, attribute, new_value)
    try:
        yield
    finally:
        setattr(obj, attribute, old_value)


@contextlib.contextmanager
def redirect_io(stream: str, new_stream):
    """Redirect stdio streams to a custom stream."""
    old_stream = getattr(sys, stream)
    setattr(sys, stream, new_stream)
    try:
        yield
    finally:
        setattr(sys, stream, old_stream)


@contextlib.contextmanager
def change_cwd(new_cwd):
    """Change working directory before running code."""
    os.chdir(new_cwd)
    try:
        yield
    finally:
        os.chdir(TOOL_CWD)


def is_same_path(file_path1: str, file_path2: str) -> bool:
    """Returns true if two paths are the same."""
    return pathlib.Path(file_path1) == pathlib.Path(file_path2)


def run_api(
    callback: Callable[..., Optional[int]],
    argv: Sequence[str],
    use_stdin: bool,
    cwd: str,
    source: str = None,
) -> RunResult:
    """Runs `callback(argv, stdout, stderr[, stdin])` with captured stdio."""
    with CWD_LOCK:
        if is_same_path(os.getcwd(), cwd):
            return _run_api(callback, argv, use_stdin, source)
        with change_cwd(cwd):
            return _run_api(callback, argv, use_stdin, source)


def _run_api(
    callback: Callable[..., Optional[int]],
    argv: Sequence[str],
    use_stdin: bool,
    source: str = None,
) -> RunResult:
    str_output = CustomIO("<stdout>", encoding="utf-8")
    str_error = CustomIO("<stderr>", encoding="utf-8")
    exit_code = 0

    try:
        with substitute_attr(sys, "argv", list(argv)):
            with redirect_io("stdout", str_output):
                with redirect_io("stderr", str_error):
                    if use_stdin and source is not None:
                        str_input = CustomIO("<stdin>", encoding="utf-8", newline="\n")
                        with redirect_io("stdin", str_input):
                            str_input.write(source)
                            str_input.seek(0)
                            code = callback(argv, str_output, str_error, str_input)
                    else:
                        code = callback(argv, str_output, str_error)
        exit_code = code or 0
    except SystemExit as ex:
        exit_code = ex.code if isinstance(ex.code, int) else (0 if ex.code is None else 1)

    return RunResult(str_output.get_value(), str_error.get_value(), exit_code)
