import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracpq.records import SCHEMA_VERSION, ResultRecord, format_csv, format_value, parse_csv, rounded


def _record():
    return ResultRecord("solve", {"alpha": 1.5}, {"lambda": 1 / 3, "ok": True}, {}, ["x", "u"],
                        [[0.25, 2 / 3], [0.75, 1e-20]], "0.1.0")


def test_json_round_trip_exact():
    rec = _record()
    back = ResultRecord.from_json(rec.to_json())
    assert back == rec
    assert back.outputs["lambda"] == 1 / 3


def test_json_schema_version_checked():
    data = json.loads(_record().to_json())
    data["schema_version"] = SCHEMA_VERSION + 1
    with pytest.raises(ValueError):
        ResultRecord.from_json(json.dumps(data))


def test_csv_twelve_digits():
    text = _record().to_csv()
    assert text.splitlines()[0] == "x,u"
    assert "0.666666666667" in text


def test_format_special_values():
    assert format_value(True) == "true"
    assert format_value(7) == "7"
    assert format_value(float("nan")) == "nan"
    assert format_value(float("-inf")) == "-inf"
    assert format_value("exists") == "exists"


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=5))
def test_csv_round_trip_within_digits(values):
    cols, rows = parse_csv(format_csv(["v"], [[v] for v in values]))
    assert cols == ["v"]
    for (back,), v in zip(rows, values):
        assert back == rounded(v)
        assert math.isclose(float(back), v, rel_tol=1e-11, abs_tol=1e-300)
