# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""
Utility functions for use with tests.
"""
import contextlib
import json
import os
import random
from typing import Any, Dict, Sequence

import strata_cli
import strata_utils

from .constants import PROJECT_ROOT


def run_cli(argv: Sequence[str]) -> strata_utils.RunResult:
    """Runs the command line in-process with captured stdout and stderr."""
    return strata_utils.run_api(
        strata_cli.run_cli, list(argv), use_stdin=False, cwd=os.fspath(PROJECT_ROOT)
    )


def run_cli_json(argv: Sequence[str]) -> Dict[str, Any]:
    """Runs the command line with --json appended and parses the document."""
    result = run_cli([*argv, "--json"])
    assert result.exit_code == 0, result.stderr
    return json.loads(result.stdout)


@contextlib.contextmanager
def notifications(level: str):
    """Sets STRATA_RINGS_NOTIFY for the duration of the block."""
    saved = os.environ.get("STRATA_RINGS_NOTIFY")
    os.environ["STRATA_RINGS_NOTIFY"] = level
    try:
        yield
    finally:
        if saved is None:
            del os.environ["STRATA_RINGS_NOTIFY"]
        else:
            os.environ["STRATA_RINGS_NOTIFY"] = saved


def random_cases(seed: int, count: int, pick):
    """Yields `count` values of `pick(rng)` from a seeded generator."""
    rng = random.Random(seed)
    for _ in range(count):
        yield pick(rng)
