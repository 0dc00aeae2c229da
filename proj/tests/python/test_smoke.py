import json
import math
import os

import pytest

import cset_transport as cst

DATA = os.path.join(os.path.dirname(__file__), "..", "..", "data")


def test_builtins_load():
    names = cst.builtin_names()
    assert "fig5x" in names
    x = cst.builtin("C4")
    assert x.theory == "Graph"
    assert x.sizes == {"E": 4, "V": 4}
    assert cst.cycle(7).size("V") == 7


def test_instance_sources_agree():
    from_file = cst.Instance(os.path.join(DATA, "fig5x.json"))
    from_builtin = cst.Instance("builtin:fig5x")
    from_text = cst.Instance(from_builtin.to_json())
    from_dict = cst.Instance(json.loads(from_builtin.to_json()))
    for other in (from_builtin, from_text, from_dict):
        assert json.loads(other.to_json()) == json.loads(from_file.to_json())


def test_homomorphism():
    assert cst.find_homomorphism("builtin:fig5x", "builtin:fig5y") == {"E": [0, 2], "V": [0, 1, 3]}
    assert cst.find_homomorphism("builtin:fig7x", "builtin:fig7y") is None


def test_markov_feasibility():
    assert cst.markov_feasible("builtin:fig6x", "builtin:fig6y") is None
    phi = cst.markov_feasible("builtin:fig7x", "builtin:fig7y")
    assert phi is not None
    for rows in phi.values():
        for row in rows:
            assert sum(row) == pytest.approx(1.0)


def test_hausdorff_cycles():
    r = cst.hausdorff("builtin:C2", "builtin:C4", cls="md")
    assert r["distance"] == 2
    assert r["witness"] == {"E": [0, 1], "V": [0, 1]}
    assert r["weights"] == {"src": 0, "tgt": 2}
    assert math.isinf(cst.hausdorff("builtin:C2", "builtin:C4", cls="mm")["distance"])


def test_wasserstein_and_gap():
    d, phi = cst.wasserstein("builtin:fig5x", "builtin:fig5y")
    assert d == 0
    assert phi is not None
    assert cst.gap("builtin:C2", "builtin:C4", cls="md") == (0, 2)


def test_transport():
    cost, coupling = cst.optimal_coupling([0.7, 0.3], [0.4, 0.6], [[0, 1], [1, 0]])
    assert cost == pytest.approx(0.3)
    assert [sum(r) for r in coupling] == pytest.approx([0.7, 0.3])
    assert cst.wasserstein_kernels([[1, 0]], [[0, 1]], [2], [[0, 3], [3, 0]]) == pytest.approx(6)
    assert cst.wasserstein_measures([1, 0], [0, 1], [[0, 2], [2, 0]], p=2) == pytest.approx(2)
    assert cst.compose_kernels([[0.5, 0.5]], [[1, 0], [0.2, 0.8]])[0] == pytest.approx([0.6, 0.4])


def test_export_lp():
    text = cst.export_lp("builtin:fig7x", "builtin:fig7y")
    assert text.startswith("MINIMIZE 0\n")
    assert text.endswith("END\n")


def test_errors():
    with pytest.raises(cst.ParseError):
        cst.Instance("{ not json")
    with pytest.raises(cst.GuardExceeded, match="--force"):
        cst.hausdorff("builtin:C6", "builtin:C6", guard=10)
    with pytest.raises(cst.CsetError):
        cst.builtin("nosuch")
    with pytest.raises(ValueError):
        cst.hausdorff("builtin:C2", "builtin:C4", cls="bogus")
