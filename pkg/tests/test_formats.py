import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibsic.formats import (
    FiducialFileError,
    RunReport,
    format_fiducial,
    parse_fiducial,
    read_fiducial,
    write_fiducial,
)
from fibsic.modmat import ModMatrix
from fibsic.search import SearchConfig, haar_random_vector, search
from fibsic.verify import verify


def test_format_layout():
    text = format_fiducial(np.array([1, 0], dtype=complex), {"seed": 3})
    lines = text.splitlines()
    assert lines[:3] == ["# fibsic fiducial", "# d = 2", "# seed = 3"]
    assert lines[3] == "1.0000000000000000e+00 0.0000000000000000e+00"
    assert len(lines) == 5


@settings(max_examples=50)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_roundtrip_is_bit_exact(d, seed):
    v = haar_random_vector(d, seed)
    parsed = parse_fiducial(format_fiducial(v), renormalize=False)
    np.testing.assert_array_equal(parsed.vector, v)


def test_metadata_parsed(tmp_path):
    v = haar_random_vector(4, 1)
    path = tmp_path / "f.txt"
    write_fiducial(path, v, {"seed": 42, "symmetry": "[[0, 1], [1, 1]] mod 8"})
    fid = read_fiducial(path)
    assert fid.d == 4
    assert fid.metadata["seed"] == "42"
    assert fid.metadata["symmetry"] == "[[0, 1], [1, 1]] mod 8"


def test_renormalized_on_load():
    v = np.array([1 + 1e-7, 0], dtype=complex)
    fid = parse_fiducial(format_fiducial(v))
    assert np.linalg.norm(fid.vector) == pytest.approx(1, abs=1e-15)


def test_norm_far_from_one_rejected():
    with pytest.raises(FiducialFileError, match="norm"):
        parse_fiducial(format_fiducial(np.array([1.0, 1.0], dtype=complex)))


def test_wrong_line_count():
    text = format_fiducial(haar_random_vector(4, 0))
    truncated = "\n".join(text.splitlines()[:-1])
    with pytest.raises(FiducialFileError, match="header says d = 4"):
        parse_fiducial(truncated)


def test_bad_real_reports_line():
    text = "# d = 2\n1 0\n0 nope\n"
    with pytest.raises(FiducialFileError) as err:
        parse_fiducial(text)
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_wrong_column_count_reports_line():
    with pytest.raises(FiducialFileError) as err:
        parse_fiducial("# d = 1\n1 0 0\n")
    assert err.value.line == 2


def test_empty_body():
    with pytest.raises(FiducialFileError):
        parse_fiducial("# just a comment\n")


def test_headerless_file_accepted():
    fid = parse_fiducial("0.6 0\n0 0.8\n")
    np.testing.assert_allclose(fid.vector, [0.6, 0.8j])


def test_report_roundtrip():
    result = search(SearchConfig(d=4, master_seed=5, jobs=1))
    Ff = ModMatrix(0, 1, 1, 1, 8)
    report = RunReport(config={"command": "search", "seed": 5},
                       search=RunReport.search_section(result),
                       verification=verify(result.fiducial, candidates=[Ff], phase_divisor=2,
                                           coneigen_symmetry=Ff))
    text = report.to_json()
    again = RunReport.from_json(text)
    assert again == report
    assert again.to_json() == text
    np.testing.assert_array_equal(again.fiducial(), result.fiducial)
    data = json.loads(text)
    assert data["format"] == "fibsic-report/1"
    assert set(data) == {"format", "config", "search", "verification"}


def test_report_with_infinite_potential_roundtrips():
    report = RunReport(search={"achieved_potential": float("inf"), "fiducial": []})
    assert RunReport.from_json(report.to_json()) == report


def test_report_rejects_unknown_format():
    with pytest.raises(ValueError):
        RunReport.from_json('{"format": "other/1"}')
