# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""Light-weight JSON-RPC over standard IO, used to farm degree slices out to workers."""
from __future__ import annotations

import atexit
import json
import os
import pathlib
import subprocess
import sys
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Any, BinaryIO, Dict, List, Optional, Sequence, Tuple

import strata_utils as utils

CONTENT_LENGTH = "Content-Length: "
RUNNER_SCRIPT = str(pathlib.Path(__file__).parent / "strata_runner.py")


def to_str(text) -> str:
    """Convert bytes to string as needed."""
    return text.decode("utf-8") if isinstance(text, bytes) else text


class StreamClosedException(Exception):
    """JSON RPC stream is closed."""


class JsonWriter:
    """Writes Content-Length framed JSON messages to a binary stream."""

    def __init__(self, writer: BinaryIO):
        self._writer = writer
        self._lock = threading.Lock()

    def close(self):
        with self._lock:
            if not self._writer.closed:
                self._writer.close()

    def write(self, data: Any) -> None:
        if self._writer.closed:
            raise StreamClosedException()

        with self._lock:
            content = json.dumps(data, sort_keys=True)
            length = len(content.encode("utf-8"))
            self._writer.write(
                f"{CONTENT_LENGTH}{length}\r\n\r\n{content}".encode("utf-8")
            )
            self._writer.flush()


class JsonReader:
    """Reads Content-Length framed JSON messages from a binary stream."""

    def __init__(self, reader: BinaryIO):
        self._reader = reader

    def close(self):
        if not self._reader.closed:
            self._reader.close()

    def read(self) -> Any:
        if self._reader.closed:
            raise StreamClosedException()
        length = None
        while not length:
            line = to_str(self._readline())
            if line.startswith(CONTENT_LENGTH):
                length = int(line[len(CONTENT_LENGTH) :])

        line = to_str(self._readline()).strip()
        while line:
            line = to_str(self._readline()).strip()

        content = to_str(self._reader.read(length))
        return json.loads(content)

    def _readline(self):
        line = self._reader.readline()
        if not line:
            raise EOFError
        return line


class JsonRpc:
    """Sends and receives JSON-RPC messages over a pair of streams."""

    def __init__(self, reader: BinaryIO, writer: BinaryIO):
        self._reader = JsonReader(reader)
        self._writer = JsonWriter(writer)

    def close(self):
        for stream in (self._reader, self._writer):
            try:
                stream.close()
            except Exception:  # pylint: disable=broad-except
                pass

    def send_data(self, data: Any) -> None:
        self._writer.write(data)

    def receive_data(self) -> Any:
        return self._reader.read()


def create_json_rpc(readable: BinaryIO, writable: BinaryIO) -> JsonRpc:
    """Creates JSON-RPC wrapper for the readable and writable streams."""
    return JsonRpc(readable, writable)


# **********************************************************
# Worker processes.
# **********************************************************
class ProcessManager:
    """Manages the runner sub-processes started for parallel slices."""

    def __init__(self):
        self._processes: Dict[str, subprocess.Popen] = {}
        self._rpc: Dict[str, JsonRpc] = {}
        self._lock = threading.Lock()
        self._thread_pool = ThreadPoolExecutor(16)

    def stop_process(self, worker: str) -> None:
        """Sends exit to one worker and waits for it."""
        with self._lock:
            rpc = self._rpc.get(worker)
            proc = self._processes.get(worker)
        if rpc is not None:
            try:
                rpc.send_data({"id": str(uuid.uuid4()), "method": "exit"})
            except Exception:  # pylint: disable=broad-except
                pass
        if proc is not None:
            try:
                proc.wait(timeout=30)
            except subprocess.TimeoutExpired:
                utils.log_warning(f"Worker {worker} did not exit; killing it.")
                proc.kill()
        utils.log_to_output(f"Worker {worker} stopped.")

    def stop_all_processes(self) -> None:
        """Send exit command to all processes and shutdown transport."""
        with self._lock:
            workers = list(self._processes)
        for worker in workers:
            self.stop_process(worker)
        self._thread_pool.shutdown(wait=False)

    def start_process(
        self,
        worker: str,
        args: Sequence[str],
        cwd: str,
        env: Optional[Dict[str, str]] = None,
    ) -> None:
        """Starts a process and establishes JSON-RPC communication over stdio."""
        _env = os.environ.copy()
        if env is not None:
            _env.update(env)

        # pylint: disable=consider-using-with
        proc = subprocess.Popen(
            args,
            cwd=cwd,
            stdout=subprocess.PIPE,
            stdin=subprocess.PIPE,
            env=_env,
        )
        with self._lock:
            self._processes[worker] = proc
            self._rpc[worker] = create_json_rpc(proc.stdout, proc.stdin)
        utils.log_to_output(f"Worker {worker} started (pid {proc.pid}).")

        def _monitor_process():
            proc.wait()
            with self._lock:
                self._processes.pop(worker, None)
                rpc = self._rpc.pop(worker, None)
            if rpc is not None:
                rpc.close()

        self._thread_pool.submit(_monitor_process)

    def get_json_rpc(self, worker: str) -> JsonRpc:
        with self._lock:
            if worker in self._rpc:
                return self._rpc[worker]
        raise StreamClosedException()


_process_manager = ProcessManager()
atexit.register(_process_manager.stop_all_processes)


def start_worker(
    worker: str,
    interpreter: Optional[Sequence[str]] = None,
    cwd: Optional[str] = None,
    env: Optional[Dict[str, str]] = None,
) -> JsonRpc:
    """Starts a runner subprocess and returns its connection."""
    args = [*(interpreter or [sys.executable]), RUNNER_SCRIPT]
    _process_manager.start_process(worker, args, cwd or os.getcwd(), env)
    return _process_manager.get_json_rpc(worker)


def stop_worker(worker: str) -> None:
    """Sends exit to one runner subprocess and waits for it to stop."""
    _process_manager.stop_process(worker)


def request(rpc: JsonRpc, method: str, **params: Any) -> Any:
    """Sends one request and returns its result; remote failures raise StrataRingsError."""
    msg_id = str(uuid.uuid4())
    rpc.send_data({"id": msg_id, "method": method, **params})
    try:
        data = rpc.receive_data()
    except EOFError:
        raise utils.StrataRingsError(f"Worker closed the stream during {method}.") from None

    if data.get("id") != msg_id:
        raise utils.StrataRingsError(f"Invalid result for request {method} ({msg_id}).")
    if "limit" in data:
        limit = data["limit"]
        raise utils.ResourceLimitError(limit["degree"], limit["columns"], limit["ceiling"])
    if data.get("exception"):
        raise utils.StrataRingsError(f"Worker failed:\n{data.get('error', '')}")
    return data.get("result")


# **********************************************************
# Parallel degree slices.
# **********************************************************
def quotient_dims_over_json_rpc(
    family: str, ell: int, degrees: Sequence[int], jobs: int
) -> Dict[int, Tuple[int, int]]:
    """Computes (columns, rank) for each degree on `jobs` runner subprocesses."""
    jobs = max(1, min(jobs, len(degrees)))
    shares: List[List[int]] = [list(degrees[i::jobs]) for i in range(jobs)]
    settings = {
        key: value
        for key, value in utils.get_settings().items()
        if key in ("columnCeiling", "modularPrecheck")
    }
    counts: Dict[int, Tuple[int, int]] = {}
    errors: List[BaseException] = []
    lock = threading.Lock()
    workers = [f"slice-{uuid.uuid4().hex[:8]}-{i}" for i in range(jobs)]

    def _run(worker: str, share: List[int]) -> None:
        try:
            rpc = start_worker(worker)
            for degree in share:
                result = request(
                    rpc,
                    "slice",
                    family=family,
                    ell=ell,
                    degree=degree,
                    settings=settings,
                )
                with lock:
                    counts[degree] = (int(result["columns"]), int(result["rank"]))
        except BaseException as ex:  # pylint: disable=broad-except
            with lock:
                errors.append(ex)
        finally:
            stop_worker(worker)

    threads = [
        threading.Thread(target=_run, args=(worker, share), daemon=True)
        for worker, share in zip(workers, shares)
    ]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    if errors:
        first = errors[0]
        if isinstance(first, utils.StrataRingsError):
            raise first
        raise utils.StrataRingsError(f"Worker transport failed: {first!r}") from first
    return {degree: counts[degree] for degree in sorted(counts)}
