"""
Tests for the timing script (small sizes only).
Run with: pytest test_benchmark.py -v
"""
import json

import pytest

from benchmark import main, time_nets, time_table


def test_time_nets_reports_each_algorithm():
    rows = time_nets(3, [2, 3], ["alg1", "alg2"])
    assert [(r.algorithm, r.m) for r in rows] == [("alg1", 2), ("alg2", 2), ("alg1", 3), ("alg2", 3)]
    # third Sobol' coordinate repeats the second at m = 2
    assert rows[0].t == rows[1].t == 1
    assert all(r.seconds >= 0 and r.per_point_us >= 0 for r in rows)


def test_time_table_returns_seconds():
    assert time_table([1, 2, 3], [2, 3], "both") >= 0


def test_main_prints_a_report(capsys):
    assert main(["--s", "2", "--m", "2..4", "--algorithms", "alg1,alg2", "--table-dims", "1..2", "--table-m", "2..4"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "success"
    assert len(data["rows"]) == 6
    assert {row["t"] for row in data["rows"]} == {0}
    assert data["table_seconds"] >= 0


@pytest.mark.parametrize(
    "argv",
    [["--algorithms", "alg3"], ["--algorithms", ","], ["--table-dims", "3..5"]],
)
def test_bad_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
