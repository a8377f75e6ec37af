import json

import pytest

from Modules.errors import ParameterError
from Modules.experiment import (
    ExperimentConfig,
    bandwidth_table,
    build_from_config,
    legal_pairs,
    load_spec_file,
    parse_selector,
    select_pairs,
    spec_document,
    write_json,
    write_table,
)


def test_config_defaults_and_validation():
    cfg = ExperimentConfig(n=3, k=1)
    assert cfg.r == 2
    assert cfg.tower_mode().param == 2
    with pytest.raises(ParameterError):
        ExperimentConfig(n=3, k=3)
    with pytest.raises(ParameterError):
        ExperimentConfig(n=4, k=1, mode="two-erasure")
    with pytest.raises(ParameterError):
        ExperimentConfig(n=4, k=1, mode="three-erasure")


def test_config_round_trips_through_dict():
    cfg = ExperimentConfig(n=4, k=1, mode="two-erasure", d=2, failed=(1, 2), helpers="rest")
    raw = json.loads(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.from_dict(raw) == cfg


def test_parse_selector():
    assert parse_selector(None, "all") == "all"
    assert parse_selector(" 3,1 ", "all") == (1, 3)
    assert parse_selector("REST", "all") == "rest"
    with pytest.raises(ParameterError):
        parse_selector("1,x", "all")


def test_select_pairs(small_tower):
    cfg = ExperimentConfig(n=3, k=1, h=1, failed="all", helpers="rest")
    assert list(select_pairs(cfg, small_tower)) == [((1,), (2, 3)), ((2,), (1, 3)), ((3,), (1, 2))]
    cfg = ExperimentConfig(n=3, k=1, d=1, failed=(2,), helpers="all")
    assert list(select_pairs(cfg, small_tower)) == [((2,), (1,)), ((2,), (3,))]


def test_legal_pairs(small_tower, n4k2_tower):
    assert legal_pairs(n4k2_tower) == [(1, 2), (1, 3), (2, 2)]
    assert legal_pairs(small_tower) == [(1, 1), (1, 2), (2, 1)]


def test_bandwidth_table(n4k2_tower):
    df = bandwidth_table(n4k2_tower)
    assert list(zip(df["h"], df["d"])) == [(1, 2), (1, 3), (2, 2)]
    assert (df["ratio"] == 1.0).all()
    assert df["total"].tolist() == [4620, 3465, 4620]


def test_spec_file_round_trip(tmp_path):
    cfg = ExperimentConfig(n=3, k=1)
    spec = build_from_config(cfg)
    path = write_json(str(tmp_path / "spec.json"), spec_document(spec, cfg))
    loaded_cfg, loaded = load_spec_file(path)
    assert loaded_cfg == cfg
    assert loaded.primes == spec.primes and loaded.degree == 210

    doc = json.loads(open(path, encoding="utf-8").read())
    assert doc["tower"]["D"] == 2
    assert doc["tower"]["min_polys"][0] == [1, 1, 0, 1]
    doc["tower"]["l"] = 211
    write_json(path, doc)
    with pytest.raises(ParameterError):
        load_spec_file(path)


def test_write_table(small_tower, tmp_path):
    df = bandwidth_table(small_tower)
    paths = write_table(df, str(tmp_path / "out" / "table.csv"), excel=True, plot_path=str(tmp_path / "table.png"))
    assert str(tmp_path / "out" / "table.csv") in paths
    assert (tmp_path / "table.png").exists()
    assert all(p.endswith((".csv", ".xlsx", ".png")) for p in paths)
