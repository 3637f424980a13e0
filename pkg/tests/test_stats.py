import json
import random
import re

import pytest

from cliffsynth.a2a import cz_basis, gauss_synth, insert_cz, pmh_synth
from cliffsynth.circuit import two_qubit_depth
from cliffsynth.gf2 import invert, random_invertible
from cliffsynth.stats import (
    SYNTHESIZERS,
    _CSV_FIELDS,
    register_synthesizer,
    report_csv,
    report_json,
    run_insertcz_stats,
    sample_hfree,
    sample_linear,
)


def test_sample_hfree_deterministic():
    a = sample_hfree(6, 123)
    b = sample_hfree(6, 123)
    assert a == b
    assert a != sample_hfree(6, 124)
    # fixed draw order: p first, then gamma, then the matrix
    rng = random.Random(123)
    assert a.p == tuple(rng.randrange(4) for _ in range(6))
    assert a.gamma == rng.getrandbits(15)
    assert a.m == random_invertible(6, rng)
    assert a.d == 0
    with pytest.raises(ValueError):
        sample_hfree(0, 1)


def test_sample_linear_deterministic():
    m = sample_linear(5, 42)
    assert m == sample_linear(5, 42)
    invert(m)
    with pytest.raises(ValueError):
        sample_linear(0, 1)


def test_run_stats_deterministic():
    kw = dict(synth="pmh", n_min=2, n_max=6, samples=20, seed=7)
    r1 = run_insertcz_stats(**kw)
    r2 = run_insertcz_stats(**kw)
    assert r1 == r2
    assert report_csv(r1) == report_csv(r2)
    assert report_json(r1) == report_json(r2)


def test_per_sample_stream_reproducible():
    rep = run_insertcz_stats(synth="pmh", n_min=4, n_max=4, samples=15, seed=9, detail=True)
    assert len(rep.detail) == 15
    rec = rep.detail[11]
    m = random_invertible(rec["n"], random.Random(9 ^ rec["index"]))
    c = pmh_synth(m)
    cc = insert_cz(c)
    assert rec["missing"] == len(cz_basis(c).complement)
    assert rec["inserted"] == len(cc.gates) - len(c.gates)
    assert rec["depth_before"] == two_qubit_depth(c)
    assert rec["depth_after"] == two_qubit_depth(cc)
    assert rec["gates_before"] == len(c.gates)
    assert rec["gates_after"] == len(cc.gates)


def test_csv_format():
    rep = run_insertcz_stats(synth="pmh", n_min=3, n_max=5, samples=10, seed=1)
    text = report_csv(rep)
    lines = text.splitlines()
    assert lines[0] == ",".join(_CSV_FIELDS)
    assert len(lines) == 4 and text.endswith("\n")
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == len(_CSV_FIELDS)
        int(cells[0]), int(cells[1])
        for cell in cells[2:]:
            assert re.fullmatch(r"\d+\.\d{6}", cell)


def test_json_schema_and_stability():
    rep = run_insertcz_stats(synth="gauss", n_min=2, n_max=4, samples=10, seed=3, detail=True)
    text = report_json(rep)
    assert text == report_json(rep)
    obj = json.loads(text)
    assert set(obj) == {"synth", "seed", "rows", "detail"}
    assert obj["synth"] == "gauss" and obj["seed"] == 3
    assert len(obj["rows"]) == 3
    for row in obj["rows"]:
        assert set(row) == set(_CSV_FIELDS)
    assert len(obj["detail"]) == 30

    plain = run_insertcz_stats(synth="gauss", n_min=2, n_max=4, samples=10, seed=3)
    assert "detail" not in json.loads(report_json(plain))


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        run_insertcz_stats(synth="nope")
    with pytest.raises(ValueError):
        run_insertcz_stats(n_min=5, n_max=4)
    with pytest.raises(ValueError):
        run_insertcz_stats(n_min=0, n_max=4)
    with pytest.raises(ValueError):
        run_insertcz_stats(samples=0)


def test_register_synthesizer_plugin():
    register_synthesizer("mock", lambda m: gauss_synth(m))
    try:
        kw = dict(n_min=3, n_max=5, samples=10, seed=5)
        mine = run_insertcz_stats(synth="mock", **kw)
        ref = run_insertcz_stats(synth="gauss", **kw)
        assert mine.synth == "mock"
        assert mine.rows == ref.rows
        assert report_csv(mine) == report_csv(ref)
        same_keys = lambda r: set(json.loads(report_json(r))["rows"][0])
        assert same_keys(mine) == same_keys(ref)
    finally:
        SYNTHESIZERS.pop("mock")


def test_verify_all_and_row_sanity():
    rep = run_insertcz_stats(synth="pmh", n_min=2, n_max=7, samples=25, seed=2, verify_all=True)
    assert [r.n for r in rep.rows] == list(range(2, 8))
    for r in rep.rows:
        assert r.samples == 25
        assert 0.0 <= r.full_basis_fraction <= 1.0
        assert 0.0 <= r.mean_missing_fraction <= 1.0
        assert 0.0 <= r.depth_increase_fraction <= 1.0
        assert r.mean_gates_after >= r.mean_gates_before
        assert r.mean_depth_increase >= 0.0
