import json
import math

import numpy as np
import pytest

import conelift


def test_catalog_flags():
    names = conelift.catalog_names()
    assert "great-legendrian-circle" in names
    entries = {e["entry"]: e for e in conelift.catalog()}
    assert entries["legendrian-clifford-torus"]["sasaki_m"] == 2
    assert entries["biharmonic-small-circle"]["legendrian"] is False


def test_verify_great_circle_passes():
    rows = conelift.verify("great-legendrian-circle")
    assert rows
    assert not [r for r in rows if r["verdict"] == "fail"]
    assert all(r["residual_max"] < 1e-6 for r in rows)


def test_verify_perturbed_circle_fails_bitension():
    rows = conelift.verify("perturbed-circle")
    failing = {r["identity"] for r in rows if r["verdict"] == "fail"}
    assert "bitension-scaling" in failing


def test_report_json_is_deterministic():
    a = conelift.report_json("equator", seed=3)
    assert a == conelift.report_json("equator", seed=3)
    assert json.loads(a)["schema"] == 1


def test_classify():
    assert conelift.classify("biharmonic-small-circle")[0] == "proper-biharmonic"
    assert conelift.classify("latitude-circle-pi3")[0] == "neither"
    assert conelift.classify("great-legendrian-circle", backend="central")[0] == "harmonic"


def test_unknown_entry_raises():
    with pytest.raises(ValueError):
        conelift.verify("no-such-entry")


def test_functionals_of_great_circle():
    K = 64
    t = np.arange(K) * 2 * math.pi / K
    p = np.zeros((K, 4))
    p[:, 0], p[:, 2] = np.cos(t), np.sin(t)
    f = conelift.discrete_functionals(p)
    th = 2 * math.pi / K
    assert f["energy"] == pytest.approx(math.pi * (math.sin(th) / th) ** 2, abs=1e-12)
    assert f["bienergy"] < 1e-6
    assert f["penalty"] < 1e-8
    assert np.abs(conelift.discrete_tension(p)).max() < 1e-12


def test_degenerate_curve_raises():
    p = np.zeros((16, 4))
    p[:, 0] = 1.0
    with pytest.raises(conelift.GeometryError):
        conelift.discrete_functionals(p)


def test_flow_is_monotone_and_reproducible():
    cfg = json.dumps({"m": 2, "K": 32, "fix_energy": True, "penalty_weight": 10, "max_iterations": 30})
    a = conelift.run_flow(cfg)
    b = conelift.run_flow(cfg)
    obj = a["objective"]
    assert all(y <= x for x, y in zip(obj, obj[1:]))
    assert np.array_equal(a["points"], b["points"])
    assert a["config_hash"] == b["config_hash"]
