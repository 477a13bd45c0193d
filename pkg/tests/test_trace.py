import pytest

from fifosim import Trace, TraceError, read_trace, validate_trace, write_trace
from fifosim.trace import merge_events

from conftest import make_trace


def test_valid_trace_passes():
    assert validate_trace(make_trace([(1, [1, 2])], k=2)) == []


def test_nonpositive_work_rejected():
    errors = validate_trace(make_trace([(2, [0])], k=3))
    assert len(errors) == 1
    assert "non-positive work" in errors[0]


def test_decreasing_slots_rejected():
    errors = validate_trace(Trace(events=[(3, [1]), (2, [1])], k_declared=1))
    assert any("non-decreasing" in e for e in errors)


def test_slot_below_one_rejected():
    errors = validate_trace(Trace(events=[(0, [1])], k_declared=1))
    assert any(">= 1" in e for e in errors)


def test_work_above_declared_k_rejected():
    errors = validate_trace(Trace(events=[(1, [5])], k_declared=3))
    assert any("exceeds declared k" in e for e in errors)


def test_undeclared_k_skips_bound_check():
    assert validate_trace(Trace(events=[(1, [99])], k_declared=0)) == []


def test_validation_collects_all_violations():
    trace = Trace(events=[(0, [0]), (5, [1]), (2, [7])], k_declared=3)
    errors = validate_trace(trace)
    assert len(errors) == 4  # bad slot, bad work, decreasing, work > k


def test_merge_events_groups_same_slot():
    assert merge_events(iter([(1, 2), (1, 3), (4, 1)])) == [(1, [2, 3]), (4, [1])]


def test_packets_iteration_order():
    trace = make_trace([(1, [2, 3]), (5, [1])])
    assert list(trace.packets()) == [(1, 2), (1, 3), (5, 1)]
    assert trace.packet_count == 3
    assert trace.max_work() == 3


def test_jsonl_round_trip(tmp_path):
    trace = make_trace([(1, [3, 1]), (2, [2]), (9, [1, 1, 1])], k=5)
    trace.metadata = {"generator": "test", "seed": 7, "params": {"x": 1}}
    path = tmp_path / "trace.jsonl"
    write_trace(trace, path)
    back = read_trace(path)
    assert back.events == trace.events
    assert back.k_declared == 5
    assert back.metadata["generator"] == "test"
    assert back.metadata["seed"] == 7
    assert back.metadata["params"] == {"x": 1}


def test_jsonl_header_first_line(tmp_path):
    path = tmp_path / "trace.jsonl"
    write_trace(make_trace([(1, [1])]), path)
    first = path.read_text().splitlines()[0]
    assert '"k"' in first and '"generator"' in first and '"seed"' in first


def test_read_rejects_headerless_file(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"slot": 1, "work": 2}\n')
    with pytest.raises(TraceError):
        read_trace(path)


def test_read_rejects_invalid_contents(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"k": 2, "generator": "g", "params": {}, "seed": 0}\n{"slot": 1, "work": 0}\n')
    with pytest.raises(TraceError):
        read_trace(path)
