# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Puts the bundled tool modules on sys.path for the tests."""
import os
import pathlib
import sys

import pytest

BUNDLED_TOOL = pathlib.Path(__file__).parent.parent.parent.parent / "bundled" / "tool"
if os.fspath(BUNDLED_TOOL) not in sys.path:
    sys.path.insert(0, os.fspath(BUNDLED_TOOL))


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch):
    """Each test starts from default settings and no cache directory."""
    # pylint: disable-next=import-outside-toplevel
    import strata_utils

    monkeypatch.delenv("STRATA_RINGS_CACHE", raising=False)
    monkeypatch.delenv("STRATA_RINGS_JOBS", raising=False)
    monkeypatch.delenv("STRATA_RINGS_NOTIFY", raising=False)
    saved = dict(strata_utils.GLOBAL_SETTINGS)
    strata_utils.GLOBAL_SETTINGS.clear()
    yield
    strata_utils.GLOBAL_SETTINGS.clear()
    strata_utils.GLOBAL_SETTINGS.update(saved)
