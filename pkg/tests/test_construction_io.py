import json

import pytest

from warplab.construction_io import load_construction, save_construction


def test_round_trip(tmp_path, osc_params, osc_build):
    ladder, hp, sm = osc_build
    path = tmp_path / "construction.json"
    save_construction(str(path), osc_params, ladder, sm)
    params2, ladder2, hp2, sm2 = load_construction(str(path))
    assert params2 == osc_params
    for r in (0.5, 105.0, 3.3e7, 1.7e39):
        assert sm2.value(r) == sm.value(r)


def test_tamper_detection(tmp_path, osc_params, osc_build):
    ladder, hp, sm = osc_build
    path = tmp_path / "construction.json"
    save_construction(str(path), osc_params, ladder, sm)
    doc = json.loads(path.read_text())
    doc["rows"][0]["R2"] = "1.23456789e+6"  # corrupted junction radius
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        load_construction(str(path))


def test_format_guard(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(ValueError):
        load_construction(str(p))
