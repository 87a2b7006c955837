# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""
Worker process computing degree slices on request from strata_jsonrpc.
"""

import os
import pathlib
import sys
import traceback


# **********************************************************
# Update sys.path before importing any bundled libraries.
# **********************************************************
def update_sys_path(path_to_add: str, strategy: str) -> None:
    """Add given path to `sys.path`."""
    if path_to_add not in sys.path and os.path.isdir(path_to_add):
        if strategy == "useBundled":
            sys.path.insert(0, path_to_add)
        else:
            sys.path.append(path_to_add)


BUNDLE_DIR = pathlib.Path(__file__).parent.parent
update_sys_path(os.fspath(BUNDLE_DIR / "tool"), "useBundled")
update_sys_path(
    os.fspath(BUNDLE_DIR / "libs"),
    os.getenv("STRATA_RINGS_IMPORT_STRATEGY", "useBundled"),
)


# pylint: disable=wrong-import-position,import-error
import graded_dimension as gd
import strata_jsonrpc as jsonrpc
import strata_utils as utils

RPC = jsonrpc.create_json_rpc(sys.stdin.buffer, sys.stdout.buffer)

EXIT_NOW = False
while not EXIT_NOW:
    try:
        msg = RPC.receive_data()
    except EOFError:
        break

    method = msg["method"]
    if method == "exit":
        EXIT_NOW = True
        continue

    response = {"id": msg["id"]}
    if method == "slice":
        try:
            with utils.settings_override(**msg.get("settings", {})):
                columns, rank = gd.slice_counts(msg["family"], msg["ell"], msg["degree"])
            response["result"] = {"columns": columns, "rank": rank}
        except utils.ResourceLimitError as ex:
            response["limit"] = {
                "degree": ex.degree,
                "columns": ex.columns,
                "ceiling": ex.ceiling,
            }
        except Exception:  # pylint: disable=broad-except
            response["error"] = traceback.format_exc(chain=True)
            response["exception"] = True
    else:
        response["error"] = f"Unknown method: {method}"
        response["exception"] = True

    RPC.send_data(response)
