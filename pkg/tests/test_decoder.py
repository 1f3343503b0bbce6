import numpy as np
import pytest

from msgdecoder import (
    TIMEOUT, Boundary, DecoderParams, DecoderState, Geometry, NonemptySyndrome, NoiseRealization, Rule,
    compute_syndrome, decoder_step, feedback_step, force, logical_class, micro_step, run_until_clean,
)
from msgdecoder import _kernels as K
from msgdecoder.lattice import direction

from oracles import Lattice, RefDecoder, flips_from_array, syndrome


def state_from_links(g, links, **kw):
    noise = NoiseRealization.from_links(g, links)
    return DecoderState.from_noise(noise, DecoderParams(**kw))


def state_with_anyons(g, sites, **kw):
    """State whose syndrome is exactly ``sites`` (frame left empty; only messages and forces matter)."""
    st = state_from_links(g, [], **kw)
    for s in sites:
        st.syndrome[g.site_index(s)] = 1
    return st


# -- syndrome --------------------------------------------------------------------


def test_syndrome_examples():
    g = Geometry(1, 10)
    assert list(np.flatnonzero(compute_syndrome(NoiseRealization.from_links(g, [3]), g))) == [3, 4]
    assert not compute_syndrome(np.ones(g.n_links, np.uint8), g).any()
    go = Geometry(1, 10, Boundary.OPEN_ROUGH)
    dangling = go.left_dangling_link((0,))
    assert list(np.flatnonzero(compute_syndrome(NoiseRealization.from_links(go, [dangling]), go))) == [0]


@pytest.mark.parametrize("D,L,boundary", [(1, 9, "periodic"), (2, 5, "open"), (3, 3, "periodic")])
def test_syndrome_matches_reference(D, L, boundary):
    g = Geometry(D, L, boundary)
    lat = Lattice(D, L, boundary == "periodic")
    rng = np.random.default_rng(D * 10 + L)
    for _ in range(30):
        bits = (rng.random(g.n_links) < 0.3).astype(np.uint8)
        want = {lat.index(c) for c in syndrome(lat, flips_from_array(lat, bits))}
        assert set(np.flatnonzero(compute_syndrome(bits, g))) == want


# -- messages ----------------------------------------------------------------------


def test_single_micro_step_1d():
    g = Geometry(1, 12)
    st = state_with_anyons(g, [(5,)])
    micro_step(st)
    plus, minus = st.message_grid(+1, 0), st.message_grid(-1, 0)
    assert plus[6] == 1 and minus[4] == 1
    assert plus.sum() == 1 and minus.sum() == 1


def test_three_micro_steps_1d():
    g = Geometry(1, 16)
    st = state_with_anyons(g, [(5,)])
    for _ in range(3):
        micro_step(st)
    assert list(st.message_grid(+1, 0)[6:10]) == [1, 2, 3, 0]


def test_cone_values_2d():
    g = Geometry(2, 9)
    st = state_with_anyons(g, [(4, 4)])
    t = 3
    for _ in range(t):
        micro_step(st)
    grid = st.message_grid(+1, 0)
    for x in range(9):
        for y in range(9):
            dx, dy = x - 4, y - 4
            if 0 < dx <= t and abs(dy) <= dx:
                assert grid[x, y] == max(abs(dx), abs(dy))
            else:
                assert grid[x, y] == 0


def test_message_expires_at_cap():
    g = Geometry(1, 32)
    st = state_with_anyons(g, [(0,)], m_max=4)
    for _ in range(10):
        micro_step(st)
    plus = st.message_grid(+1, 0)
    assert plus.max() == 4
    assert list(plus[1:6]) == [1, 2, 3, 4, 0]


# -- forces ------------------------------------------------------------------------


def set_messages(st, site, values):
    st.messages[st.geometry.site_index(site)] = values


@pytest.mark.parametrize("m_plus,m_minus,expected", [
    (0, 3, (0, 1)),    # lone signal from the right
    (3, 0, (0, -1)),   # lone signal from the left
    (2, 5, (0, -1)),
    (5, 2, (0, 1)),
    (4, 4, None),
    (0, 0, None),
    (1, 2, (0, -1)),
    (2, 1, (0, 1)),
])
def test_force_1d_signs(m_plus, m_minus, expected):
    g = Geometry(1, 10)
    st = state_with_anyons(g, [(3,)])
    set_messages(st, (3,), [m_plus, m_minus])
    assert force(st, (3,)) == expected


def test_force_2d_all_equal_moves_plus_y():
    g = Geometry(2, 8)
    st = state_with_anyons(g, [(3, 3)])
    set_messages(st, (3, 3), [4, 4, 4, 4])
    # (-,y) wins the offset tie; both y signals equal, so the standard rule stays put
    assert K.standard_choice(st.messages[g.site_index((3, 3))], 2) == direction(1, -1)


def test_force_2d_all_equal_moves_plus_y_when_unbalanced():
    g = Geometry(2, 8)
    st = state_with_anyons(g, [(3, 3)])
    set_messages(st, (3, 3), [4, 4, 5, 4])
    assert force(st, (3, 3)) == (1, 1)


def test_force_without_anyon_is_none():
    g = Geometry(1, 10)
    st = state_with_anyons(g, [])
    set_messages(st, (2,), [1, 0])
    assert force(st, (2,)) is None


def test_modified_force_cases():
    D = 2
    low = 3
    # unique minimum follows the standard move
    assert K.force_modified(np.array([low, 0, 0, 0]), D) == direction(0, -1)
    # tie involving the signal from the +x side: frozen
    assert K.force_modified(np.array([0, low, low, 0]), D) == -1
    # -x side signal tied with a one-sided transverse signal: transverse wins
    assert K.force_modified(np.array([low, 0, low, 0]), D) == direction(1, -1)
    # every tied transverse axis cancels: step along -x
    assert K.force_modified(np.array([low, 0, low, low]), D) == direction(0, -1)
    assert K.force_modified(np.array([0, 0, low, low]), D) == direction(0, -1)
    assert K.force_modified(np.array([0, 0, 0, 0]), D) == -1


# -- feedback ------------------------------------------------------------------------


def test_pair_at_distance_two_annihilates_in_one_step():
    g = Geometry(1, 12)
    st = state_from_links(g, [4, 5])
    assert list(st.anyons) == [4, 6]
    decoder_step(st)
    assert not st.syndrome.any()


def test_adjacent_pair_toggles_once():
    g = Geometry(1, 12)
    st = state_from_links(g, [4])
    for _ in range(st.params.v):
        micro_step(st)
    assert force(st, (4,)) == (0, 1) and force(st, (5,)) == (0, -1)
    feedback_step(st)
    assert not st.syndrome.any()
    assert st.frame.sum() == 0


def test_no_anyons_fixed_point():
    g = Geometry(2, 6)
    st = state_from_links(g, [])
    before = st.copy()
    decoder_step(st)
    assert np.array_equal(st.frame, before.frame) and not st.messages.any()


def test_run_until_clean_trivial_cases():
    assert run_until_clean(state_from_links(Geometry(2, 6), [])) == 0
    assert run_until_clean(state_from_links(Geometry(1, 16), [7])) == 1


def test_timeout_is_a_value():
    g = Geometry(1, 64)
    st = state_from_links(g, range(20))
    assert run_until_clean(st, t_max=1) is TIMEOUT
    assert not TIMEOUT


def test_pair_time_linear_in_distance():
    g = Geometry(1, 128)
    times = []
    ds = [2, 4, 8, 16, 32]
    for d in ds:
        st = state_from_links(g, range(10, 10 + d))
        times.append(run_until_clean(st))
    slope, _ = np.polyfit(ds, times, 1)
    assert slope > 0
    assert np.corrcoef(ds, times)[0, 1] > 0.99


# -- logical class -----------------------------------------------------------------


def test_logical_class_examples():
    g = Geometry(2, 5)
    assert logical_class(state_from_links(g, [])) == (0, 0)
    row = [g.link_index((x, 2), 0) for x in range(5)]
    assert logical_class(state_from_links(g, row)) == (1, 0)
    g1 = Geometry(1, 7)
    assert logical_class(state_from_links(g1, range(7))) == (1,)


def test_logical_class_plaquette_invariance():
    g = Geometry(2, 5)
    rng = np.random.default_rng(8)
    for _ in range(20):
        st = state_from_links(g, [g.link_index((x, 1), 0) for x in range(5)])
        x, y = rng.integers(0, 5, 2)
        plaquette = [g.link_index((x, y), 0), g.link_index((x, y), 1),
                     g.link_index(((x + 1) % 5, y), 1), g.link_index((x, (y + 1) % 5), 0)]
        st.frame[plaquette] ^= 1
        assert logical_class(st) == (1, 0)


def test_logical_class_requires_clean_syndrome():
    with pytest.raises(NonemptySyndrome):
        logical_class(state_from_links(Geometry(1, 8), [2]))


def test_params_validation():
    for bad in (dict(v=0), dict(epsilon_random=1.5), dict(u_kick=-1), dict(m_max=0)):
        with pytest.raises(ValueError):
            DecoderParams(**bad)


# -- cross-check against the coordinate reference ---------------------------------------


CASES = [
    (1, 12, True, "standard", None),
    (1, 11, False, "standard", None),
    (2, 6, True, "standard", None),
    (2, 7, False, "standard", None),
    (2, 6, True, "standard", 3),
    (3, 4, True, "standard", None),
    (2, 6, True, "modified", None),
    (2, 7, False, "modified", None),
    (3, 4, False, "standard", None),
]


@pytest.mark.parametrize("D,L,periodic,rule,m_max", CASES)
def test_matches_reference_decoder(D, L, periodic, rule, m_max):
    g = Geometry(D, L, Boundary.PERIODIC if periodic else Boundary.OPEN_ROUGH)
    lat = Lattice(D, L, periodic)
    rng = np.random.default_rng(hash((D, L, periodic, rule, m_max)) % 2**32)
    params = dict(v=int(rng.integers(1, 4)), m_max=m_max, rule=Rule(rule))
    for trial in range(6):
        bits = (rng.random(g.n_links) < 0.12).astype(np.uint8)
        st = DecoderState.from_noise(NoiseRealization(g, bits), DecoderParams(**params))
        ref = RefDecoder(lat, flips_from_array(lat, bits), v=params["v"], m_max=m_max or L,
                         modified=rule == "modified")
        for step in range(12):
            decoder_step(st)
            ref.step()
            assert np.array_equal(st.messages, ref.message_array()), (trial, step)
            assert set(np.flatnonzero(st.frame)) == set(np.flatnonzero(
                [k in ref.flipped for k in lat.links()])), (trial, step)
            assert set(np.flatnonzero(st.syndrome)) == {lat.index(c) for c in ref.anyons}


def test_run_until_clean_matches_stepping():
    g = Geometry(2, 10)
    rng = np.random.default_rng(1)
    for _ in range(10):
        bits = (rng.random(g.n_links) < 0.05).astype(np.uint8)
        a = DecoderState.from_noise(NoiseRealization(g, bits), DecoderParams(), seed=3)
        b = a.copy()
        t = run_until_clean(a)
        steps = 0
        while b.syndrome.any():
            decoder_step(b)
            steps += 1
        assert t == steps and np.array_equal(a.frame, b.frame)


def test_random_moves_are_keyed_and_reproducible():
    g = Geometry(1, 64)
    bits = (np.random.default_rng(2).random(g.n_links) < 0.2).astype(np.uint8)
    p = DecoderParams(epsilon_random=0.3)
    a = DecoderState.from_noise(NoiseRealization(g, bits), p, seed=5, trial=1)
    b = DecoderState.from_noise(NoiseRealization(g, bits), p, seed=5, trial=1)
    c = DecoderState.from_noise(NoiseRealization(g, bits), p, seed=5, trial=2)
    assert run_until_clean(a) == run_until_clean(b)
    assert np.array_equal(a.frame, b.frame)
    run_until_clean(c)
    assert not np.array_equal(a.frame, c.frame) or a.step != c.step


def test_frame_dump(tmp_path):
    from msgdecoder.decoder import dump_frames

    st = state_from_links(Geometry(2, 6), [3, 4])
    dump_frames(st, tmp_path, prefix="f")
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files and all(f.endswith(".pgm") for f in files)
    text = (tmp_path / files[0]).read_text()
    assert text.startswith("P2") and "step" in text
