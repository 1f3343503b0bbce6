import numpy as np
import pytest

from msgdecoder import Geometry
from msgdecoder.binary_messages import (
    AsepParams, BinaryDecoderState, BinaryField, asep2d_micro_step, asep_micro_step,
    binary_decoder_step, binary_direction, density_profile_1d, seed_kernel_rng,
)


def test_ballistic_front_1d():
    g = Geometry(1, 16)
    f = BinaryField.empty(g, AsepParams(q=1.0, m=0))
    syn = np.zeros(16, np.uint8)
    syn[0] = 1
    for t in range(1, 6):
        asep_micro_step(f, syn)
        assert list(np.flatnonzero(f.bits[0, 0])) == list(range(1, t + 1))


def test_empty_stays_empty():
    seed_kernel_rng(0)
    for g in (Geometry(1, 10), Geometry(2, 6)):
        f = BinaryField.empty(g, AsepParams())
        syn = np.zeros(g.n_sites, np.uint8)
        for _ in range(5):
            (asep_micro_step if g.dim == 1 else asep2d_micro_step)(f, syn)
        assert f.density().sum() == 0


def test_quadrant_front_2d():
    L, c = 12, 5
    g = Geometry(2, L)
    f = BinaryField.empty(g, AsepParams(q=1.0, m=0))
    syn = np.zeros(g.n_sites, np.uint8)
    syn[g.site_index((c, c))] = 1
    for t in range(1, 4):
        asep2d_micro_step(f, syn)
        occ = (f.bits[0, 0] | f.secondary[0, 0]).reshape(L, L)
        got = {tuple(x - c) for x in np.argwhere(occ)}
        want = {(x, y) for x in range(t + 1) for y in range(t + 1) if 1 <= x + y <= t}
        assert got == want


def test_bits_only():
    g = Geometry(1, 64)
    f = BinaryField.empty(g, AsepParams(q=0.5, m=2, flavors=2))
    syn = np.zeros(64, np.uint8)
    syn[[3, 40]] = 1
    seed_kernel_rng(3)
    for _ in range(200):
        asep_micro_step(f, syn)
        assert f.bits.max() <= 1 and f.bits.shape == (2, 2, 64)


@pytest.mark.parametrize("n_plus,n_minus,memory,expected", [
    (1, 0, 0, -1), (0, 1, 0, 1), (1, 1, 1, 0), (0, 0, 1, 1), (0, 0, -1, -1), (0, 0, 0, 0),
])
def test_binary_direction(n_plus, n_minus, memory, expected):
    assert binary_direction(n_plus, n_minus, memory) == expected


def test_binary_decoder_removes_adjacent_pair():
    g = Geometry(1, 32)
    frame = np.zeros(32, np.uint8)
    frame[10] = 1
    st = BinaryDecoderState.from_frame(g, frame, AsepParams(q=1.0, m=0), v=3)
    binary_decoder_step(st)
    assert not st.syndrome.any()
    assert not st.memory.any()


def test_params_validation():
    for bad in (dict(q=0.0), dict(q=1.5), dict(m=1), dict(flavors=0)):
        with pytest.raises(ValueError):
            AsepParams(**bad)


def test_profile_decays():
    prof = density_profile_1d(AsepParams(q=0.5, m=2), length=100, burn_in=2000, sweeps=20000,
                              n_blocks=10, seed=1)
    assert prof.mean[0] > prof.mean[50] > 0
    text = prof.to_csv()
    assert text.splitlines()[0] == "r,mean_density,stderr,samples"


def test_two_flavors_decay_faster():
    kw = dict(length=200, burn_in=5000, sweeps=40000, n_blocks=10, seed=2)
    a1, _ = density_profile_1d(AsepParams(q=0.5, m=2, flavors=1), **kw).fit_exponent(10, 100)
    a2, _ = density_profile_1d(AsepParams(q=0.5, m=2, flavors=2), **kw).fit_exponent(10, 100)
    assert a2 > 1.5 * a1
