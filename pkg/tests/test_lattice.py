import itertools

import numpy as np
import pytest

from msgdecoder import Boundary, Geometry, Norm
from msgdecoder.lattice import direction

from oracles import Lattice


def test_distance_examples():
    assert Geometry(1, 10).distance((1,), (9,)) == 2
    g = Geometry(2, 100)
    assert g.distance((0, 0), (3, 2), Norm.INF) == 3
    assert g.distance((0, 0), (3, 2), Norm.ONE) == 5
    assert Geometry(2, 8).distance((0, 0), (7, 7)) == 1


def test_open_axis_does_not_wrap():
    g = Geometry(2, 10, Boundary.OPEN_ROUGH)
    assert g.distance((0, 0), (9, 9)) == 9
    assert g.distance((0, 0), (0, 9)) == 1


@pytest.mark.parametrize("norm,size", [(Norm.INF, 9), (Norm.ONE, 5)])
def test_unit_balls(norm, size):
    assert len(Geometry(2, 9).ball((4, 4), 1, norm)) == size


def test_ball_radius_zero():
    assert Geometry(3, 5).ball((1, 2, 3), 0) == {(1, 2, 3)}


@pytest.mark.parametrize("D,k,L", [(1, 3, 9), (2, 2, 7), (3, 1, 4)])
def test_ball_cardinality(D, k, L):
    g = Geometry(D, L)
    assert len(g.ball((0,) * D, k)) == (2 * k + 1) ** D


def test_cone_slab():
    assert Geometry(1, 8).cone_slab((3,), 0) == {(3,)}
    assert Geometry(2, 10).cone_slab((5, 5), 0) == {(5, 4), (5, 5), (5, 6)}
    assert len(Geometry(3, 6).cone_slab((2, 2, 2), 1)) == 9


def test_cone_slab_outside_open_lattice_is_empty():
    g = Geometry(2, 6, Boundary.OPEN_ROUGH)
    assert g.cone_slab((-1, 3), 0) == set()
    assert g.cone_slab((6, 3), 1) == set()


def test_link_counts():
    assert Geometry(2, 5).n_links == 50
    # one dangling link per site on the x = 0 face
    assert Geometry(2, 5, Boundary.OPEN_ROUGH).n_links == 55
    assert Geometry(1, 7, Boundary.OPEN_ROUGH).n_links == 8


def test_invalid_geometry():
    with pytest.raises(ValueError):
        Geometry(0, 4)
    with pytest.raises(ValueError):
        Geometry(1, 1)


def test_row_major_indexing():
    g = Geometry(2, 4)
    assert g.site_index((1, 2)) == 6
    assert g.site_coord(6) == (1, 2)
    assert g.link_index((1, 2), 1) == 13


@pytest.mark.parametrize("D,L,boundary", [
    (1, 6, Boundary.PERIODIC), (2, 4, Boundary.PERIODIC), (2, 5, Boundary.OPEN_ROUGH),
    (3, 3, Boundary.PERIODIC), (1, 5, Boundary.OPEN_ROUGH),
])
def test_tables_match_coordinate_reference(D, L, boundary):
    g = Geometry(D, L, boundary)
    lat = Lattice(D, L, boundary is Boundary.PERIODIC)
    t = g.tables
    keys = lat.links()
    pos = {k: i for i, k in enumerate(keys)}
    assert len(keys) == g.n_links
    for c in lat.sites():
        r = lat.index(c)
        for a in range(D):
            for s in (1, -1):
                j = direction(a, s)
                nb = lat.shift(c, a, s)
                assert t.step[r, j] == (-1 if nb is None else lat.index(nb))
                link = lat.move_link(c, a, s)
                assert t.move_link[r, j] == (-1 if link is None else pos[link])
    for key, l in pos.items():
        ends = sorted(lat.index(e) for e in lat.endpoints(key))
        got = sorted(int(x) for x in t.link_ends[l] if x >= 0)
        assert got == ends


def test_metric_axioms_random():
    rng = np.random.default_rng(3)
    for boundary in Boundary:
        g = Geometry(3, 7, boundary)
        for _ in range(200):
            a, b, c = (tuple(rng.integers(0, 7, 3)) for _ in range(3))
            for norm in Norm:
                dab = g.distance(a, b, norm)
                assert dab == g.distance(b, a, norm)
                assert (dab == 0) == (a == b)
                assert g.distance(a, c, norm) <= dab + g.distance(b, c, norm)


def test_ball_matches_brute_force():
    g = Geometry(2, 6, Boundary.OPEN_ROUGH)
    lat = Lattice(2, 6, periodic=False)
    for center in [(0, 0), (2, 5), (5, 3)]:
        for norm, name in ((Norm.INF, "inf"), (Norm.ONE, "one")):
            want = {c for c in lat.sites() if lat.distance(center, c, name) <= 2}
            assert g.ball(center, 2, norm) == want


def test_geometry_pickles():
    import pickle

    g = Geometry(2, 6, Boundary.OPEN_ROUGH)
    h = pickle.loads(pickle.dumps(g))
    assert h == g and h.tables.step.shape == g.tables.step.shape
