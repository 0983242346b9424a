import json
import math

import pytest

import novfp


def test_paa_and_znorm():
    assert novfp.paa([1.0, 2.0, 3.0, 4.0], 2) == [1.5, 3.5]
    a, b = novfp.paa([1.0, 2.0, 3.0], 2)
    assert a == pytest.approx(4 / 3)
    assert b == pytest.approx(8 / 3)
    values, degenerate = novfp.znorm([5.0, 5.0, 5.0])
    assert degenerate and values == [0.0, 0.0, 0.0]


def test_breakpoints_and_jsd():
    assert novfp.breakpoints(5)[0] == pytest.approx(-0.8416, abs=1e-4)
    assert novfp.jsd([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert novfp.jsd([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.31128, abs=1e-5)
    with pytest.raises(ValueError):
        novfp.breakpoints(1)


def test_sax_and_scalars():
    p = novfp.sax([0, 0, 0, 0, 10, 10, 10, 10], segments=4, alphabet=5, motif_length=2)
    assert p["string"] == "aaee"
    s = novfp.scalar_dynamics([0.1, 0.2, 0.3])
    assert s["speed"] == pytest.approx(0.1)
    assert s["reversal_count"] == 0
    curve = novfp.novelty_curve([[1.0, 0.0], [0.0, 1.0], [0.0, 2.0]])
    assert curve == [1.0, 0.0]


def test_corpus_and_experiment():
    c = novfp.gen_corpus("rhythm", authors=3, books=2, min_length=20, max_length=30, seed=1)
    assert len(c["curves"]) == 6
    assert c["book_ids"][0] == "author-000/book-00"
    assert all(0.0 <= v <= 2.0 for curve in c["curves"] for v in curve)
    r = novfp.experiment_summary("intensity", kind="scalars", authors=20, books=5, n_null=100, seed=2)
    assert not r["skipped"]
    assert r["n_authors"] == 20
    assert math.isclose(r["times_chance"], r["top1"] * 20, rel_tol=1e-12)
    assert json.loads(r["json"])["experiment"] == "python"
