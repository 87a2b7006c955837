# Copyright (c) strata-rings contributors. All rights reserved.
# Licensed under the MIT License.
"""
Tests for the JSON-RPC transport and the slice workers.
"""
import io
import uuid

import graded_dimension as gd
import pytest
import strata_combinatorics as comb
import strata_jsonrpc as jsonrpc
import strata_utils as utils
from hamcrest import assert_that, calling, contains_string, equal_to, is_, raises


class _ScriptedRpc:
    """Answers each request with the next scripted reply, echoing its id on request."""

    def __init__(self, *replies):
        self.sent = []
        self._replies = list(replies)

    def send_data(self, data):
        self.sent.append(data)

    def receive_data(self):
        reply = self._replies.pop(0)
        if reply is EOFError:
            raise EOFError
        if reply.get("id") == "echo":
            reply = {**reply, "id": self.sent[-1]["id"]}
        return reply


def test_framing_round_trip():
    stream = io.BytesIO()
    writer = jsonrpc.JsonWriter(stream)
    messages = [{"id": "1", "method": "slice", "degree": 4}, {"text": "ℓ ≥ 3"}]
    for message in messages:
        writer.write(message)
    assert_that(stream.getvalue().decode("utf-8"), contains_string("Content-Length: "))

    stream.seek(0)
    reader = jsonrpc.JsonReader(stream)
    assert_that([reader.read() for _ in messages], equal_to(messages))
    assert_that(calling(reader.read), raises(EOFError))


def test_content_length_counts_bytes():
    stream = io.BytesIO()
    jsonrpc.JsonWriter(stream).write({"text": "ℓ"})
    header, body = stream.getvalue().split(b"\r\n\r\n", 1)
    assert_that(int(header.split(b": ")[1]), is_(len(body)))


def test_closed_streams_raise():
    stream = io.BytesIO()
    writer = jsonrpc.JsonWriter(stream)
    writer.close()
    assert_that(calling(writer.write).with_args({}), raises(jsonrpc.StreamClosedException))
    reader = jsonrpc.JsonReader(io.BytesIO())
    reader.close()
    assert_that(calling(reader.read), raises(jsonrpc.StreamClosedException))


def test_request_returns_result():
    rpc = _ScriptedRpc({"id": "echo", "result": {"columns": 6, "rank": 5}})
    result = jsonrpc.request(rpc, "slice", family="complex", ell=4, degree=4)
    assert_that(result, equal_to({"columns": 6, "rank": 5}))
    assert_that(rpc.sent[0]["method"], is_("slice"))
    assert_that(rpc.sent[0]["degree"], is_(4))


def test_request_failures():
    mismatched = _ScriptedRpc({"id": str(uuid.uuid4()), "result": None})
    assert_that(
        calling(jsonrpc.request).with_args(mismatched, "slice"),
        raises(utils.StrataRingsError, "Invalid result"),
    )
    limited = _ScriptedRpc({"id": "echo", "limit": {"degree": 4, "columns": 9, "ceiling": 3}})
    assert_that(
        calling(jsonrpc.request).with_args(limited, "slice"),
        raises(utils.ResourceLimitError),
    )
    failed = _ScriptedRpc({"id": "echo", "exception": True, "error": "Traceback: boom"})
    assert_that(
        calling(jsonrpc.request).with_args(failed, "slice"),
        raises(utils.StrataRingsError, "boom"),
    )
    closed = _ScriptedRpc(EOFError)
    assert_that(
        calling(jsonrpc.request).with_args(closed, "slice"),
        raises(utils.StrataRingsError, "closed the stream"),
    )


def test_worker_answers_slices():
    worker = f"test-{uuid.uuid4().hex[:8]}"
    rpc = jsonrpc.start_worker(worker)
    try:
        result = jsonrpc.request(rpc, "slice", family=comb.COMPLEX, ell=4, degree=4)
        assert_that(result, equal_to({"columns": 6, "rank": 5}))
        assert_that(
            calling(jsonrpc.request).with_args(rpc, "unknown"),
            raises(utils.StrataRingsError, "Unknown method"),
        )
        assert_that(
            calling(jsonrpc.request).with_args(
                rpc,
                "slice",
                family=comb.COMPLEX,
                ell=5,
                degree=4,
                settings={"columnCeiling": 3},
            ),
            raises(utils.ResourceLimitError),
        )
    finally:
        jsonrpc.stop_worker(worker)


@pytest.mark.parametrize("family, ell", [(comb.COMPLEX, 5), (comb.REAL, 3)])
def test_parallel_dims_match_serial(family, ell):
    serial = gd.quotient_dims(family, ell, jobs=1)
    parallel = gd.quotient_dims(family, ell, jobs=2)
    assert_that(parallel.dims, equal_to(serial.dims))


def test_parallel_slices_respect_the_ceiling():
    with utils.settings_override(columnCeiling=5):
        assert_that(
            calling(jsonrpc.quotient_dims_over_json_rpc).with_args(
                comb.COMPLEX, 5, [0, 2, 4], 2
            ),
            raises(utils.ResourceLimitError),
        )


def test_parallel_counts_are_sorted_by_degree():
    counts = jsonrpc.quotient_dims_over_json_rpc(comb.COMPLEX, 4, [4, 0, 2], 3)
    assert_that(list(counts), equal_to([0, 2, 4]))
    assert_that(counts[4], equal_to((6, 5)))
