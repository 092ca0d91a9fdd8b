import os

import numpy as np
import pytest

g2patch = pytest.importorskip("g2patch")

DATA = os.environ.get(
    "G2PATCH_DATA",
    os.path.join(os.path.dirname(__file__), "..", "..", "data", "fixtures"),
)


def fixture(name):
    return g2patch.load_domain(os.path.join(DATA, name + ".json"))


def test_domain():
    dom = fixture("threepatch_fig9")
    assert dom.num_patches == 3
    assert dom.num_interfaces == 3
    again = g2patch.parse_domain(dom.to_json())
    assert again.patches == dom.patches


def test_counts_match_nullity():
    dom = fixture("fivepatch_fig9")
    a = g2patch.analyze(dom, 5, 2)
    assert (a["total"], a["patch"], a["edge"], a["vertex"]) == (816, 720, 25, 71)
    assert a["closed_total"] == a["total"] == g2patch.nullity(dom, 5, 2)
    b = g2patch.analyze(dom, 6, 3, bc="order2")
    assert b["total"] == 4446


def test_basis_triplets():
    dom = fixture("threepatch_fig9")
    rows, cols, vals, shape, tags = g2patch.basis(dom, 5, 2)
    assert shape == (3 * 15 * 15, 493)
    assert len(tags) == 493
    assert rows.shape == cols.shape == vals.shape
    assert np.all(np.isfinite(vals))
    assert set(np.unique(cols)) == set(range(493))


def test_fit_converges():
    dom = fixture("threepatch_fig9")
    r1 = g2patch.fit(dom, 5, 1)
    r2 = g2patch.fit(dom, 5, 2)
    assert r2["errors"][0] < r1["errors"][0]
    assert r2["total"] == 493


def test_vertex_check():
    match, count, cf = g2patch.vertex_check(5, 1, count=5, seed=0)
    assert (match, count, cf) == (5, 5, 14)


def test_bad_arguments():
    dom = fixture("threepatch_fig9")
    with pytest.raises(ValueError):
        g2patch.analyze(dom, 4, 1)
    with pytest.raises(ValueError):
        g2patch.analyze(dom, 5, 2, bc="clamped")
