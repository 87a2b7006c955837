# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Persistent cache of computed Betti vectors.

One JSON file per (family, ℓ, method, degree bound). Records are written to a
temporary file in the cache directory and renamed into place, so readers never
see a partial file. A record is served only if its presentation hash matches
the freshly built presentation and it was not written by a newer tool version.
"""
from __future__ import annotations

import json
import os
import pathlib
import tempfile
from typing import Optional, Tuple, Union

import attrs
import cattrs
import strata_utils as utils
from cattrs.gen import make_dict_unstructure_fn, override
from packaging.version import InvalidVersion, Version

PathLike = Union[str, os.PathLike]


@attrs.frozen
class CacheRecord:
    family: str
    ell: int
    dims: Tuple[int, ...] = attrs.field(converter=tuple)
    method: str
    truncated_at: Optional[int] = None
    tool_version: str = utils.TOOL_VERSION
    presentation_hash: Optional[str] = None


CONVERTER = cattrs.Converter()
CONVERTER.register_unstructure_hook(
    CacheRecord,
    make_dict_unstructure_fn(
        CacheRecord, CONVERTER, dims=override(unstruct_hook=list)
    ),
)


def record_document(record: CacheRecord) -> dict:
    """Returns the JSON-ready document of a record."""
    return CONVERTER.unstructure(record)


def record_bytes(record: CacheRecord) -> bytes:
    """Canonical serialized form; identical records give identical bytes."""
    text = json.dumps(record_document(record), sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def _cache_dir(cache_dir: Optional[PathLike]) -> Optional[pathlib.Path]:
    if cache_dir is None:
        cache_dir = utils.get_settings()["cacheDir"]
    return pathlib.Path(cache_dir) if cache_dir else None


def cache_path(
    cache_dir: PathLike, family: str, ell: int, method: str, truncated_at: Optional[int]
) -> pathlib.Path:
    bound = "top" if truncated_at is None else f"d{truncated_at}"
    return pathlib.Path(cache_dir) / f"{family}-{ell}-{method}-{bound}.json"


def _is_newer(version: str) -> bool:
    try:
        return Version(version) > Version(utils.TOOL_VERSION)
    except InvalidVersion:
        return True


# **********************************************************
# Lookup and store.
# **********************************************************
def cache_get(
    family: str,
    ell: int,
    method: str,
    truncated_at: Optional[int],
    expected_hash: Optional[str],
    cache_dir: Optional[PathLike] = None,
) -> Optional[CacheRecord]:
    """Returns a fresh cached record, or None on a miss or a stale record."""
    directory = _cache_dir(cache_dir)
    if directory is None:
        return None
    path = cache_path(directory, family, ell, method, truncated_at)
    if not path.is_file():
        utils.log_to_output(f"Cache miss: {path}")
        return None

    try:
        record = CONVERTER.structure(
            json.loads(path.read_text(encoding="utf-8")), CacheRecord
        )
    except (OSError, ValueError, TypeError, KeyError, cattrs.BaseValidationError) as ex:
        utils.log_warning(f"Ignoring unreadable cache record {path}: {ex}")
        return None

    if record.presentation_hash != expected_hash:
        utils.log_warning(f"Stale cache record {path}: presentation hash changed.")
        return None
    if _is_newer(record.tool_version):
        utils.log_warning(
            f"Stale cache record {path}: written by version {record.tool_version}."
        )
        return None
    if (record.family, record.ell, record.method, record.truncated_at) != (
        family,
        ell,
        method,
        truncated_at,
    ):
        utils.log_warning(f"Stale cache record {path}: key does not match its content.")
        return None

    utils.log_to_output(f"Cache hit: {path}")
    return record


def cache_put(record: CacheRecord, cache_dir: Optional[PathLike] = None) -> bool:
    """Stores a record atomically; returns False if the cache is off or unwritable."""
    directory = _cache_dir(cache_dir)
    if directory is None:
        return False
    path = cache_path(
        directory, record.family, record.ell, record.method, record.truncated_at
    )
    try:
        directory.mkdir(parents=True, exist_ok=True)
        handle, temp_name = tempfile.mkstemp(
            prefix=f".{path.stem}-", suffix=".tmp", dir=os.fspath(directory)
        )
        try:
            with os.fdopen(handle, "wb") as stream:
                stream.write(record_bytes(record))
            os.replace(temp_name, path)
        except BaseException:
            if os.path.exists(temp_name):
                os.unlink(temp_name)
            raise
    except OSError as ex:
        utils.log_warning(
            f"Cache directory {directory} is not writable ({ex}); continuing uncached."
        )
        return False

    utils.log_to_output(f"Cache store: {path}")
    return True
