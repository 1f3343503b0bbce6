"""Compiled inner loops of the synchronous decoder.

Array conventions (all flat, one trial at a time):
  frame[l]    uint8, cumulative flips per link
  syn[r]      uint8, 1 where an anyon sits
  msg[r, k]   int32, message type k = 2*a + (0 for +, 1 for -) on axis a
Direction codes j follow the same layout: 2*a moves along +e_a, 2*a+1 along -e_a.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from .rng import hash_u64, hash_uniform

BIG = np.int64(1) << np.int64(40)

SALT_EPS = 0
SALT_DIR = 1
SALT_KICK = 2


@nb.njit(cache=True)
def site_message(r, k, msg, syn, slab, source, m_max):
    """New value of message type k at site r from the current fields."""
    if source[r, k]:
        return 1
    best = BIG
    for i in range(slab.shape[2]):
        x = slab[r, k, i]
        if x < 0:
            break
        if syn[x]:
            return 1
        val = msg[x, k]
        if val > 0 and val < best:
            best = val
    if best == BIG:
        return 0
    best += 1
    if best > m_max:
        return 0
    return best


@nb.njit(cache=True)
def micro_sweep(msg, syn, out, slab, source, m_max):
    n, nk = msg.shape
    for r in range(n):
        for k in range(nk):
            out[r, k] = site_message(r, k, msg, syn, slab, source, m_max)


@nb.njit(cache=True)
def standard_choice(m, D):
    """Message type selected by the offset-broken argmin, or -1 when none is present."""
    best = -1
    best_key = 1e300
    for k in range(2 * D):
        if m[k] > 0:
            sign = 1.0 if k % 2 == 0 else -1.0
            key = m[k] + sign * (k // 2 + 1) / (D + 1.0)
            if key < best_key:
                best_key = key
                best = k
    return best


@nb.njit(cache=True)
def toward(k):
    """Direction pointing at the emitter of message type k."""
    a = k // 2
    return 2 * a + 1 if k % 2 == 0 else 2 * a


@nb.njit(cache=True)
def force_standard(m, D):
    k = standard_choice(m, D)
    if k < 0:
        return -1
    a = k // 2
    if m[2 * a] == m[2 * a + 1]:
        return -1
    return toward(k)


@nb.njit(cache=True)
def force_modified(m, D):
    """Force with the erosion-friendly tie handling.

    Ties at the minimal value: a tie involving the signal from the +x side
    freezes the anyon, a tie between the -x side signal and transverse signals
    is resolved in favour of a transverse axis whose two signals differ, and
    when every tied transverse axis cancels the anyon steps along -x.
    """
    low = BIG
    for k in range(2 * D):
        if m[k] > 0 and m[k] < low:
            low = m[k]
    if low == BIG:
        return -1
    count = 0
    only = -1
    for k in range(2 * D):
        if m[k] == low:
            count += 1
            only = k
    if count == 1:
        return toward(only)
    if m[1] == low:
        return -1
    best = -1
    best_key = 1e300
    for k in range(2, 2 * D):
        if m[k] == low and m[k ^ 1] != low:
            sign = 1.0 if k % 2 == 0 else -1.0
            key = sign * (k // 2 + 1) / (D + 1.0)
            if key < best_key:
                best_key = key
                best = k
    if best < 0:
        return 1
    return toward(best)


@nb.njit(cache=True)
def anyon_direction(m, D, modified, site, step, key, eps, kick):
    """Direction the anyon at ``site`` takes this feedback step (-1 = stay)."""
    if kick > 0 and step % kick == kick - 1:
        return np.int64(hash_u64(key, step, site, SALT_KICK) % np.uint64(2 * D))
    if eps > 0.0 and hash_uniform(key, step, site, SALT_EPS) < eps:
        return np.int64(hash_u64(key, step, site, SALT_DIR) % np.uint64(2 * D))
    if modified:
        return force_modified(m, D)
    return force_standard(m, D)


@nb.njit(cache=True)
def flip_link(l, frame, syn, link_ends):
    frame[l] ^= 1
    a = link_ends[l, 0]
    b = link_ends[l, 1]
    delta = 0
    if a >= 0:
        syn[a] ^= 1
        delta += 1 if syn[a] else -1
    if b >= 0:
        syn[b] ^= 1
        delta += 1 if syn[b] else -1
    return delta


@nb.njit(cache=True)
def feedback_sweep(frame, syn, msg, D, modified, step, key, eps, kick,
                   move_link, link_ends, mark, toggled, gsite):
    """One simultaneous feedback sweep; returns the change in anyon count.

    ``mark`` (per link, zeroed on entry and exit), ``toggled`` (per link) and
    ``gsite`` (per site, zeroed on entry and exit) are scratch buffers.
    """
    n = syn.shape[0]
    n_t = 0
    for r in range(n):
        if syn[r]:
            j = anyon_direction(msg[r], D, modified, r, step, key, eps, kick)
            if j >= 0:
                l = move_link[r, j]
                if l >= 0 and mark[l] == 0:
                    mark[l] = 1
                    toggled[n_t] = l
                    n_t += 1
    delta = 0
    for i in range(n_t):
        l = toggled[i]
        delta += flip_link(l, frame, syn, link_ends)
    if modified and D > 1:
        n_g = 0
        for i in range(n_t):
            l = toggled[i]
            if l % D == 0 or l >= D * n:
                continue
            for e in range(2):
                x = link_ends[l, e]
                if x >= 0 and syn[x] and gsite[x] == 0:
                    gsite[x] = 1
                    n_g += 1
        if n_g > 0:
            for x in range(n):
                if gsite[x]:
                    gsite[x] = 0
                    l = move_link[x, 1]
                    if l >= 0:
                        delta += flip_link(l, frame, syn, link_ends)
    for i in range(n_t):
        mark[toggled[i]] = 0
    return delta


@nb.njit(cache=True)
def decode_run(frame, syn, msg, D, v, m_max, modified, key, eps, kick, t_max, step0,
               slab, source, move_link, link_ends):
    """Run decoder steps until the syndrome is empty; returns steps taken or -1."""
    n = syn.shape[0]
    count = 0
    for r in range(n):
        count += syn[r]
    if count == 0:
        return 0
    buf = np.empty_like(msg)
    mark = np.zeros(link_ends.shape[0], dtype=np.uint8)
    toggled = np.empty(link_ends.shape[0], dtype=np.int64)
    gsite = np.zeros(n, dtype=np.uint8)
    for t in range(t_max):
        for _ in range(v):
            micro_sweep(msg, syn, buf, slab, source, m_max)
            msg[:, :] = buf
        count += feedback_sweep(frame, syn, msg, D, modified, step0 + t, key, eps, kick,
                                move_link, link_ends, mark, toggled, gsite)
        if count == 0:
            return t + 1
    return -1


@nb.njit(cache=True)
def decode_batch(frames, syns, keys, D, v, m_max, modified, eps, kick, t_max,
                 slab, source, move_link, link_ends):
    """Decode many independent trials in place; returns per-trial step counts."""
    n_trials = frames.shape[0]
    n = syns.shape[1]
    out = np.empty(n_trials, dtype=np.int64)
    for i in range(n_trials):
        msg = np.zeros((n, 2 * D), dtype=np.int32)
        out[i] = decode_run(frames[i], syns[i], msg, D, v, m_max, modified, keys[i], eps,
                            kick, t_max, 0, slab, source, move_link, link_ends)
    return out


@nb.njit(cache=True)
def record_ticks(frame, syn, msg, D, v, m_max, key, eps, kick, n_ticks,
                 slab, source, move_link, link_ends):
    """Replay the decoder tick by tick (v message ticks then one feedback tick).

    Returns the message and syndrome histories indexed by tick.
    """
    n = syn.shape[0]
    m_hist = np.zeros((n_ticks + 1, n, 2 * D), dtype=np.int32)
    s_hist = np.zeros((n_ticks + 1, n), dtype=np.uint8)
    m_hist[0] = msg
    s_hist[0] = syn
    buf = np.empty_like(msg)
    mark = np.zeros(link_ends.shape[0], dtype=np.uint8)
    toggled = np.empty(link_ends.shape[0], dtype=np.int64)
    gsite = np.zeros(n, dtype=np.uint8)
    for tau in range(n_ticks):
        phase = tau % (v + 1)
        if phase < v:
            micro_sweep(msg, syn, buf, slab, source, m_max)
            msg[:, :] = buf
        else:
            feedback_sweep(frame, syn, msg, D, False, tau // (v + 1), key, eps, kick,
                           move_link, link_ends, mark, toggled, gsite)
        m_hist[tau + 1] = msg
        s_hist[tau + 1] = syn
    return m_hist, s_hist


@nb.njit(cache=True)
def boundary_of(frame, n_sites, link_ends):
    syn = np.zeros(n_sites, dtype=np.uint8)
    for l in range(frame.shape[0]):
        if frame[l]:
            a = link_ends[l, 0]
            b = link_ends[l, 1]
            if a >= 0:
                syn[a] ^= 1
            if b >= 0:
                syn[b] ^= 1
    return syn


@nb.njit(cache=True)
def boundary_batch(frames, n_sites, link_ends):
    out = np.zeros((frames.shape[0], n_sites), dtype=np.uint8)
    for i in range(frames.shape[0]):
        out[i] = boundary_of(frames[i], n_sites, link_ends)
    return out
