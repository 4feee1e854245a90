import json

import pytest

from warplab.config import ConfigError, RunConfig, config_from_dict, parse_config


def test_minimal_flags():
    cfg = parse_config(None, {"mode": "ricci-check", "alpha": 0.5, "k": 8})
    assert cfg.mode == "ricci-check" and cfg.alpha == 0.5 and cfg.k == 8
    assert cfg.grid_points == 4000  # documented default


def test_inequality_violation_names_key():
    with pytest.raises(ConfigError) as e:
        parse_config(None, {"mode": "build-example", "alpha": 0.6, "beta": 1.2,
                            "A": 0.3, "B": 1.1})
    assert e.value.key == "B"


def test_unknown_key_rejected(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"mode": "ricci-check", "alhpa": 0.5}))
    with pytest.raises(ConfigError) as e:
        parse_config(str(p))
    assert e.value.key == "alhpa"


def test_round_trip(tmp_path):
    cfg = parse_config(None, {"mode": "capacity", "alpha": 0.5, "seed": 7,
                              "outdir": "x", "lambda_ladder": (10.0, 100.0, 1000.0)})
    p = tmp_path / "cfg.json"
    cfg.to_file(str(p))
    back = parse_config(str(p))
    assert back == cfg


def test_flags_override_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"mode": "ricci-check", "alpha": 0.5, "seed": 1}))
    cfg = parse_config(str(p), {"seed": 99})
    assert cfg.seed == 99 and cfg.alpha == 0.5


def test_full_suite_zero_periods_rejected():
    with pytest.raises(ConfigError) as e:
        parse_config(None, {"mode": "full-suite", "alpha": 0.6, "beta": 1.2,
                            "A": 0.3, "B": 1.5, "periods": 0})
    assert e.value.key == "periods"


def test_missing_mode():
    with pytest.raises(ConfigError):
        config_from_dict({"alpha": 0.5})


def test_missing_file():
    with pytest.raises(ConfigError):
        parse_config("/nonexistent/path.json")


def test_oscillating_requires_bridges():
    with pytest.raises(ConfigError):
        parse_config(None, {"mode": "orbit-growth", "alpha": 0.6, "beta": 1.2})
