import pytest
from hypothesis import given, strategies as st

from wrmap import core, trace_io
from wrmap.core import AllocationState
from wrmap.regression import Observation


class TestParseObservations:
    def test_header_only(self):
        assert trace_io.parse_observations("resource,workload,w,r\n") == {}

    def test_groups_in_file_order(self):
        text = (
            "resource,workload,w,r\n"
            "R1,W1,1,2\n"
            "R1,W1,2,3\n"
            "R1,W1,3,5\n"
        )
        datasets = trace_io.parse_observations(text)
        assert list(datasets) == [("R1", "W1")]
        assert datasets[("R1", "W1")].observations == (
            Observation(1, 2),
            Observation(2, 3),
            Observation(3, 5),
        )

    def test_multiple_pairs_interleaved(self):
        text = (
            "resource,workload,w,r\n"
            "R1,W1,1,1\n"
            "R2,W1,5,5\n"
            "R1,W1,2,2\n"
        )
        datasets = trace_io.parse_observations(text)
        assert [o.w for o in datasets[("R1", "W1")].observations] == [1, 2]
        assert [o.w for o in datasets[("R2", "W1")].observations] == [5]

    def test_bad_number(self):
        with pytest.raises(trace_io.ParseError) as err:
            trace_io.parse_observations("resource,workload,w,r\nR1,W1,abc,2\n")
        assert err.value.line == 2
        assert "invalid number" in err.value.reason

    def test_wrong_header(self):
        with pytest.raises(trace_io.ParseError) as err:
            trace_io.parse_observations("res,wl,w,r\n")
        assert err.value.line == 1

    def test_wrong_column_count(self):
        with pytest.raises(trace_io.ParseError) as err:
            trace_io.parse_observations("resource,workload,w,r\nR1,W1,1\n")
        assert err.value.line == 2

    def test_non_finite_rejected(self):
        with pytest.raises(trace_io.ParseError):
            trace_io.parse_observations("resource,workload,w,r\nR1,W1,inf,2\n")

    def test_bad_token(self):
        with pytest.raises(trace_io.ParseError):
            trace_io.parse_observations("resource,workload,w,r\nR 1,W1,1,2\n")

    def test_accepts_bytes(self):
        assert trace_io.parse_observations(b"resource,workload,w,r\n") == {}


class TestParseReplay:
    def test_full_grammar(self):
        text = (
            "# build a small state\n"
            "INIT\n"
            "ADD Res1 Cloudworkload3 EXPECT OK\n"
            "FIND Res1\n"
            "MAP Cloudworkload3 EXPECT OK\n"
        )
        commands = trace_io.parse_replay(text)
        assert [c.op for c in commands] == ["INIT", "ADD", "FIND", "MAP"]
        assert commands[1].expect is core.Report.OK
        assert commands[2].expect is None
        assert commands[1].line == 3

    def test_unknown_command(self):
        with pytest.raises(trace_io.ParseError):
            trace_io.parse_replay("DELETE Res1\n")

    def test_bad_report_name(self):
        with pytest.raises(trace_io.ParseError):
            trace_io.parse_replay("FIND Res1 EXPECT Maybe\n")

    def test_wrong_arity(self):
        with pytest.raises(trace_io.ParseError):
            trace_io.parse_replay("ADD Res1\n")

    def test_init_takes_no_expect(self):
        with pytest.raises(trace_io.ParseError):
            trace_io.parse_replay("INIT EXPECT OK\n")


class TestRunReplay:
    def test_robust_add_script(self):
        commands = trace_io.parse_replay(
            "INIT\n"
            "ADD Res1 Cloudworkload3 EXPECT OK\n"
            "ADD Res1 W9 EXPECT AlreadyMapped\n"
            "FIND Res1 EXPECT OK\n"
        )
        state, lines = trace_io.run_replay(commands)
        assert state.allocation == {"Res1": "Cloudworkload3"}
        assert lines == [
            "1 OK",
            "2 OK",
            "3 AlreadyMapped",
            "4 OK Cloudworkload3",
        ]

    def test_find_on_empty(self):
        commands = trace_io.parse_replay("INIT\nFIND Res1 EXPECT NotMapped\n")
        _, lines = trace_io.run_replay(commands)
        assert lines == ["1 OK", "2 NotMapped"]

    def test_map_never_fails(self):
        commands = trace_io.parse_replay("INIT\nMAP W1 EXPECT OK\n")
        _, lines = trace_io.run_replay(commands)
        assert lines == ["1 OK", "2 OK"]

    def test_map_payload_sorted(self):
        commands = trace_io.parse_replay(
            "INIT\nADD b W\nADD a W\nMAP W\n"
        )
        _, lines = trace_io.run_replay(commands)
        assert lines[-1] == "4 OK a,b"

    def test_expectation_failure_stops(self):
        commands = trace_io.parse_replay(
            "INIT\nADD Res1 W1\nADD Res1 W2 EXPECT OK\nFIND Res1\n"
        )
        with pytest.raises(trace_io.ExpectationFailed) as err:
            trace_io.run_replay(commands)
        assert err.value.line == 3
        assert err.value.report_lines == ["1 OK", "2 OK", "3 AlreadyMapped"]

    def test_report_values_closed(self):
        commands = trace_io.parse_replay(
            "INIT\nADD R W\nADD R W\nFIND R\nFIND X\nMAP W\nMAP Z\n"
        )
        _, lines = trace_io.run_replay(commands)
        reports = {line.split()[1] for line in lines}
        assert reports <= {"OK", "AlreadyMapped", "NotMapped"}


class TestSnapshots:
    def test_empty_state(self):
        assert trace_io.write_state(core.init()) == '{"allocation":{}}\n'

    def test_example_state_sorted_keys(self):
        state = AllocationState(
            (
                ("Res3", "Cloudworkload1"),
                ("Res1", "Cloudworkload3"),
                ("Res2", "Cloudworkload2"),
            )
        )
        assert trace_io.write_state(state) == (
            '{"allocation":{"Res1":"Cloudworkload3",'
            '"Res2":"Cloudworkload2","Res3":"Cloudworkload1"}}\n'
        )

    def test_read_inverse_of_write(self):
        state = AllocationState((("R1", "W1"), ("R2", "W1")))
        assert trace_io.read_state(trace_io.write_state(state)) == state

    @pytest.mark.parametrize(
        "bad",
        [
            "",
            "not json",
            "[]",
            '{"allocation":[]}',
            '{"allocation":{}, "extra":1}',
            '{"allocation":{"bad token":"W"}}',
            '{"allocation":{"R":1}}',
        ],
    )
    def test_malformed_snapshots(self, bad):
        with pytest.raises(trace_io.SnapshotError):
            trace_io.read_state(bad)


token = st.text(
    alphabet=st.characters(
        whitelist_categories=("Lu", "Ll", "Nd"), max_codepoint=0x7F
    ),
    min_size=1,
    max_size=8,
)

states = st.dictionaries(token, token, max_size=20).map(
    lambda d: AllocationState(tuple(d.items()))
)


@given(states)
def test_snapshot_round_trip_property(state):
    text = trace_io.write_state(state)
    assert trace_io.read_state(text) == state
    # Byte determinism: rewriting the reread state is identical.
    assert trace_io.write_state(trace_io.read_state(text)) == text
