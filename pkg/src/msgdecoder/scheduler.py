"""Timing disciplines for the decoder: synchronous, uncoordinated and marching soldiers.

The marching-soldiers scheme lets every site advance its own copy of the
automaton clock at random (Poisson) times while keeping neighbouring clocks
within one tick of each other.  One automaton step is split into ``v + 1``
ticks: ``v`` message ticks followed by one feedback tick during which messages
are held.  A site at tick ``T`` may perform its next update only when no site in
its radius-2 neighbourhood is behind it; it then reads the tick-``T`` values of
its neighbours, which are either their current (``new``) records or, for
neighbours already at ``T + 1``, their ``old`` records.

Link ownership makes the feedback local: the feedback tick at ``r`` decides the
links ``<r, r + e_a>`` (and the rough-boundary link hanging off ``r``), using the
forces of ``r`` and ``r + e_a`` at tick ``T``.  A toggle that lands on a
neighbour still sitting at tick ``T`` is also recorded in that neighbour's
``sigma_future`` bit, so the neighbour keeps seeing its tick-``T`` syndrome until
it performs its own feedback tick.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field

import numba as nb
import numpy as np

from . import _kernels as K
from .decoder import TIMEOUT, DecoderParams, DecoderState, Rule, run_until_clean
from .lattice import Geometry
from .rng import stream


class SchedulerKind(enum.Enum):
    SYNCHRONOUS = "sync"
    UNCOORDINATED = "uncoordinated"
    UNCOORDINATED_JOINT = "uncoordinated-joint"
    MARCHING = "marching"


@dataclass(frozen=True)
class SchedulerSpec:
    kind: SchedulerKind = SchedulerKind.SYNCHRONOUS
    mu: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kind, SchedulerKind):
            object.__setattr__(self, "kind", SchedulerKind(self.kind))
        if not self.mu > 0:
            raise ValueError("mu must be positive")


@dataclass
class TrajectorySummary:
    t_dec_wall: float | None
    t_dec_steps: int | None
    t_sim_min: int
    t_sim_max: int
    accepted_events: int
    rejected_events: int
    timed_out: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _kernel_seed(seed: int, trial: int) -> int:
    return int(stream(seed, trial, "scheduler").integers(0, 2**62))


def _require_standard(params: DecoderParams):
    if params.rule is not Rule.STANDARD:
        raise NotImplementedError(
            "asynchronous schedulers support the standard rule only; the modified rule's "
            "follow-up move reaches two links away and would need a radius-4 marching window"
        )


# -- synchronous -------------------------------------------------------------------


def run_synchronous(state: DecoderState, t_max: int | None = None) -> TrajectorySummary:
    t = run_until_clean(state, t_max)
    done = t is not TIMEOUT
    steps = int(t) if done else None
    ticks = state.step * (state.params.v + 1)
    return TrajectorySummary(
        t_dec_wall=float(steps) if done else None,
        t_dec_steps=steps,
        t_sim_min=ticks,
        t_sim_max=ticks,
        accepted_events=ticks * state.geometry.n_sites,
        rejected_events=0,
        timed_out=not done,
    )


# -- uncoordinated -----------------------------------------------------------------


@nb.njit(cache=True)
def _uncoordinated(frame, syn, msg, D, v, m_max, key, eps, kick, mu, seed, t_end, joint,
                   slab, source, move_link, link_ends):
    """Continuous-time single-site updates; returns (wall time or -1, events)."""
    np.random.seed(seed)
    n = syn.shape[0]
    count = 0
    for r in range(n):
        count += syn[r]
    if count == 0:
        return 0.0, 0
    t = 0.0
    events = 0
    nk = msg.shape[1]
    if joint:
        mean_wait = mu / n
    else:
        mean_wait = mu / (n * (v + 1.0))
    while True:
        t += np.random.exponential(mean_wait)
        if t > t_end:
            return -1.0, events
        r = np.random.randint(n)
        events += 1
        if joint:
            n_msg = v
            do_feedback = True
        elif np.random.random() < v / (v + 1.0):
            n_msg = 1
            do_feedback = False
        else:
            n_msg = 0
            do_feedback = True
        for _ in range(n_msg):
            for k in range(nk):
                msg[r, k] = K.site_message(r, k, msg, syn, slab, source, m_max)
        if do_feedback and syn[r]:
            j = K.anyon_direction(msg[r], D, False, r, events, key, eps, kick)
            if j >= 0:
                l = move_link[r, j]
                if l >= 0:
                    count += K.flip_link(l, frame, syn, link_ends)
                    if count == 0:
                        return t, events


def run_uncoordinated(state: DecoderState, t_max: float | None = None, mu: float = 1.0,
                      seed: int = 0, trial: int = 0, joint: bool = False) -> TrajectorySummary:
    """Decode with independent per-site clocks.

    Default semantics: every site fires message updates at rate ``v/mu`` and
    feedback updates at rate ``1/mu``.  ``joint=True`` instead fires one combined
    event per site at rate ``1/mu`` doing ``v`` message updates then feedback.
    ``t_max`` is a wall-clock budget (default ``64 L mu``).
    """
    _require_standard(state.params)
    g, p, t = state.geometry, state.params, state.geometry.tables
    t_end = 64.0 * g.length * mu if t_max is None else float(t_max)
    wall, events = _uncoordinated(state.frame, state.syndrome, state.messages, g.dim, p.v, p.cap(g),
                                  state.key, p.epsilon_random, p.u_kick, mu, _kernel_seed(seed, trial),
                                  t_end, joint, t.slab, t.source, t.move_link, t.link_ends)
    done = wall >= 0
    return TrajectorySummary(
        t_dec_wall=float(wall) if done else None,
        t_dec_steps=None,
        t_sim_min=0,
        t_sim_max=0,
        accepted_events=int(events),
        rejected_events=0,
        timed_out=not done,
    )


@nb.njit(cache=True)
def _uncoordinated_batch(frames, syns, keys, seeds, D, v, m_max, eps, kick, mu, t_end, joint,
                         slab, source, move_link, link_ends):
    out = np.empty(frames.shape[0])
    n = syns.shape[1]
    for i in range(frames.shape[0]):
        msg = np.zeros((n, 2 * D), dtype=np.int32)
        out[i] = _uncoordinated(frames[i], syns[i], msg, D, v, m_max, keys[i], eps, kick, mu,
                                seeds[i], t_end, joint, slab, source, move_link, link_ends)[0]
    return out


# -- marching soldiers ---------------------------------------------------------------

# counter slots
C_TMIN, C_TMAX, C_SYNC_ANYONS, C_ANYONS, C_ACCEPTED, C_REJECTED = 0, 1, 2, 3, 4, 5
C_FREE, C_CHECKS, C_BAD_M, C_BAD_S, C_BAD_LAG, C_FIRST_BAD_TICK, C_FIRST_BAD_SITE = 6, 7, 8, 9, 10, 11, 12
C_OVERFLOW, C_FROZEN = 13, 14
N_COUNTERS = 15


@dataclass
class MarchingState:
    """Per-site registers of the marching-soldiers scheme plus bookkeeping.

    ``lag[r, i]`` is the clock difference ``t_sim[r] - t_sim[x]`` towards the
    i-th site ``x = ball2[r, i]`` of the radius-2 neighbourhood; ``rev2[r, i]``
    is the position of ``r`` in ``x``'s list.  ``pending`` and the toggle log
    reconstruct the synchronous syndrome at the slowest site's tick, which is
    how the run knows the synchronous decoder has finished.
    """

    geometry: Geometry
    params: DecoderParams
    key: int
    n_ticks: int
    frame: np.ndarray
    syn: np.ndarray
    m_new: np.ndarray
    m_old: np.ndarray
    s_new: np.ndarray
    s_old: np.ndarray
    s_fut: np.ndarray
    u: np.ndarray
    lag: np.ndarray
    t_sim: np.ndarray
    hist: np.ndarray
    pending: np.ndarray
    tog_link: np.ndarray
    tog_next: np.ndarray
    head: np.ndarray
    ball1: np.ndarray
    ball2: np.ndarray
    rev2: np.ndarray
    ctr: np.ndarray = field(default_factory=lambda: np.zeros(N_COUNTERS, np.int64))

    @classmethod
    def init(cls, state: DecoderState, n_steps: int) -> "MarchingState":
        _require_standard(state.params)
        g = state.geometry
        t = g.tables
        N = g.n_sites
        v = state.params.v
        n_ticks = n_steps * (v + 1)
        ball1 = t.ball(1)
        ball2 = t.ball(2)
        rev2 = reverse_index(ball2)
        cap = max(8 * g.n_links, 4096)
        tog_next = np.arange(1, cap + 1, dtype=np.int64)
        tog_next[-1] = -1
        ms = cls(
            geometry=g,
            params=state.params,
            key=state.key,
            n_ticks=n_ticks,
            frame=state.frame,
            syn=state.syndrome,
            m_new=np.zeros((N, 2 * g.dim), np.int32),
            m_old=np.zeros((N, 2 * g.dim), np.int32),
            s_new=np.zeros(N, np.uint8),
            s_old=np.zeros(N, np.uint8),
            s_fut=np.zeros(N, np.uint8),
            u=np.zeros(N, np.int64),
            lag=np.zeros(ball2.shape, np.int8),
            t_sim=np.zeros(N, np.int64),
            hist=np.zeros(n_ticks + 2, np.int64),
            pending=np.zeros(N, np.uint8),
            tog_link=np.zeros(cap, np.int64),
            tog_next=tog_next,
            head=np.full(n_steps + 1, -1, np.int64),
            ball1=ball1,
            ball2=ball2,
            rev2=rev2,
        )
        ms.hist[0] = N
        anyons = int(state.syndrome.sum())
        ms.ctr[C_SYNC_ANYONS] = anyons
        ms.ctr[C_ANYONS] = anyons
        ms.ctr[C_FREE] = 0
        ms.ctr[C_FIRST_BAD_TICK] = -1
        ms.ctr[C_FIRST_BAD_SITE] = -1
        return ms

    def kernel_args(self):
        g = self.geometry
        t = g.tables
        p = self.params
        return (
            g.dim, p.v, p.cap(g), self.key, p.epsilon_random, p.u_kick, self.n_ticks,
            self.frame, self.syn, self.m_new, self.m_old, self.s_new, self.s_old, self.s_fut,
            self.u, self.lag, self.t_sim, self.hist, self.pending, self.tog_link, self.tog_next,
            self.head, self.ctr, t.slab, t.source, t.step, t.move_link, t.link_ends,
            self.ball1, self.ball2, self.rev2,
        )

    @property
    def t_sim_min(self) -> int:
        return int(self.ctr[C_TMIN])

    @property
    def t_sim_max(self) -> int:
        return int(self.ctr[C_TMAX])


def reverse_index(ball: np.ndarray) -> np.ndarray:
    """rev[r, i] = position of r in the list of ball[r, i]."""
    N = ball.shape[0]
    pos = [dict() for _ in range(N)]
    for x in range(N):
        for i, y in enumerate(ball[x]):
            if y >= 0:
                pos[x][int(y)] = i
    rev = np.full(ball.shape, -1, np.int64)
    for r in range(N):
        for i, x in enumerate(ball[r]):
            if x >= 0:
                rev[r, i] = pos[int(x)][r]
    return rev


@nb.njit(cache=True)
def _toggle(l, r, T, frame, syn, s_fut, pending, t_sim, link_ends, tog_link, tog_next, head,
            ctr, v):
    frame[l] ^= 1
    for e in range(2):
        x = link_ends[l, e]
        if x < 0:
            continue
        syn[x] ^= 1
        ctr[C_ANYONS] += 1 if syn[x] else -1
        # a tick-T toggle is not part of the synchronous syndrome at ticks <= T
        pending[x] ^= 1
        if x != r and t_sim[x] == T:
            s_fut[x] ^= 1
    slot = ctr[C_FREE]
    if slot < 0:
        ctr[C_OVERFLOW] += 1
        return
    ctr[C_FREE] = tog_next[slot]
    tog_link[slot] = l
    s = T // (v + 1)
    tog_next[slot] = head[s]
    head[s] = slot


@nb.njit(cache=True)
def _release_tick(tau, v, syn, pending, link_ends, tog_link, tog_next, head, ctr):
    """The slowest clock has passed tick ``tau``: fold its toggles into the reference syndrome."""
    if tau % (v + 1) != v:
        return
    s = tau // (v + 1)
    slot = head[s]
    while slot >= 0:
        l = tog_link[slot]
        for e in range(2):
            x = link_ends[l, e]
            if x >= 0:
                pending[x] ^= 1
                ctr[C_SYNC_ANYONS] += 1 if (syn[x] ^ pending[x]) else -1
        nxt = tog_next[slot]
        tog_next[slot] = ctr[C_FREE]
        ctr[C_FREE] = slot
        slot = nxt
    head[s] = -1


@nb.njit(cache=True)
def marching_event(r, D, v, m_max, key, eps, kick, n_ticks,
                   frame, syn, m_new, m_old, s_new, s_old, s_fut, u, lag, t_sim, hist, pending,
                   tog_link, tog_next, head, ctr, slab, source, step, move_link, link_ends,
                   ball1, ball2, rev2, check, m_hist, s_hist):
    """Process one clock event at site r; returns True if the update was accepted."""
    N = syn.shape[0]
    T = t_sim[r]
    # refresh the present syndrome records around r
    s_new[r] = syn[r] ^ s_fut[r]
    for i in range(ball1.shape[1]):
        x = ball1[r, i]
        if x < 0:
            break
        s_new[x] = syn[x] ^ s_fut[x]
    if check:
        for i in range(ball2.shape[1]):
            x = ball2[r, i]
            if x < 0:
                break
            d = T - t_sim[x]
            if lag[r, i] != d or d > 1 or d < -1 or lag[x, rev2[r, i]] != -d:
                ctr[C_BAD_LAG] += 1
        settled = True
        for i in range(ball1.shape[1]):
            x = ball1[r, i]
            if x < 0:
                break
            if t_sim[x] < T:
                settled = False
                break
        if settled and T < m_hist.shape[0]:
            ctr[C_CHECKS] += 1
            bad = False
            for k in range(m_new.shape[1]):
                if m_new[r, k] != m_hist[T, r, k]:
                    ctr[C_BAD_M] += 1
                    bad = True
                    break
            if s_new[r] != s_hist[T, r]:
                ctr[C_BAD_S] += 1
                bad = True
            if bad and ctr[C_FIRST_BAD_TICK] < 0:
                ctr[C_FIRST_BAD_TICK] = T
                ctr[C_FIRST_BAD_SITE] = r
    if T >= n_ticks:
        ctr[C_FROZEN] += 1
        ctr[C_REJECTED] += 1
        return False
    for i in range(ball2.shape[1]):
        x = ball2[r, i]
        if x < 0:
            break
        if lag[r, i] > 0:
            ctr[C_REJECTED] += 1
            return False

    phase = u[r]
    if phase < v:
        nk = m_new.shape[1]
        buf = np.empty(nk, dtype=np.int32)
        for k in range(nk):
            if source[r, k]:
                buf[k] = 1
                continue
            best = K.BIG
            hit = False
            for i in range(slab.shape[2]):
                x = slab[r, k, i]
                if x < 0:
                    break
                if t_sim[x] == T:
                    sx = s_new[x]
                    mx = m_new[x, k]
                else:
                    sx = s_old[x]
                    mx = m_old[x, k]
                if sx:
                    hit = True
                    break
                if mx > 0 and mx < best:
                    best = mx
            if hit:
                buf[k] = 1
            elif best == K.BIG:
                buf[k] = 0
            elif best + 1 > m_max:
                buf[k] = 0
            else:
                buf[k] = best + 1
        for k in range(nk):
            m_old[r, k] = m_new[r, k]
            m_new[r, k] = buf[k]
    else:
        s = T // (v + 1)
        jr = -1
        if s_new[r]:
            jr = K.anyon_direction(m_new[r], D, False, r, s, key, eps, kick)
        for a in range(D):
            l = r * D + a
            flip = jr == 2 * a
            y = step[r, 2 * a]
            if not flip and y >= 0:
                sy = s_new[y] if t_sim[y] == T else s_old[y]
                if sy:
                    # messages are held across the feedback tick, so m_new is the tick-T value
                    jy = K.anyon_direction(m_new[y], D, False, y, s, key, eps, kick)
                    flip = jy == 2 * a + 1
            if flip:
                _toggle(l, r, T, frame, syn, s_fut, pending, t_sim, link_ends, tog_link, tog_next,
                        head, ctr, v)
        ld = move_link[r, 1]
        if jr == 1 and ld >= D * N:
            _toggle(ld, r, T, frame, syn, s_fut, pending, t_sim, link_ends, tog_link, tog_next,
                    head, ctr, v)
        s_fut[r] = 0

    s_old[r] = s_new[r]
    u[r] = (phase + 1) % (v + 1)
    t_sim[r] = T + 1
    for i in range(ball2.shape[1]):
        x = ball2[r, i]
        if x < 0:
            break
        lag[r, i] += 1
        lag[x, rev2[r, i]] -= 1
    ctr[C_ACCEPTED] += 1
    hist[T] -= 1
    hist[T + 1] += 1
    if T + 1 > ctr[C_TMAX]:
        ctr[C_TMAX] = T + 1
    while hist[ctr[C_TMIN]] == 0:
        _release_tick(ctr[C_TMIN], v, syn, pending, link_ends, tog_link, tog_next, head, ctr)
        ctr[C_TMIN] += 1
    return True


@nb.njit(cache=True)
def _marching_loop(D, v, m_max, key, eps, kick, n_ticks,
                   frame, syn, m_new, m_old, s_new, s_old, s_fut, u, lag, t_sim, hist, pending,
                   tog_link, tog_next, head, ctr, slab, source, step, move_link, link_ends,
                   ball1, ball2, rev2, check, m_hist, s_hist,
                   mu, seed, t_end, stop_when_clean, sample_times, sample_min, sample_max):
    """Event loop; returns (status, wall time at end, wall time when the lattice first held no anyons).

    status: 0 finished (synchronous-equivalent syndrome empty), 1 tick budget
    exhausted, 2 wall-clock limit reached.
    """
    np.random.seed(seed)
    N = syn.shape[0]
    t = 0.0
    t_clean = 0.0 if ctr[C_ANYONS] == 0 else -1.0
    i_sample = 0
    n_samples = sample_times.shape[0]
    if stop_when_clean and ctr[C_SYNC_ANYONS] == 0:
        while i_sample < n_samples:
            sample_min[i_sample] = ctr[C_TMIN]
            sample_max[i_sample] = ctr[C_TMAX]
            i_sample += 1
        return 0, t, t_clean
    mean_wait = mu / N
    while True:
        t_next = t + np.random.exponential(mean_wait)
        while i_sample < n_samples and sample_times[i_sample] <= t_next:
            sample_min[i_sample] = ctr[C_TMIN]
            sample_max[i_sample] = ctr[C_TMAX]
            i_sample += 1
        if t_next > t_end:
            return 2, t_end, t_clean
        t = t_next
        r = np.random.randint(N)
        marching_event(r, D, v, m_max, key, eps, kick, n_ticks,
                       frame, syn, m_new, m_old, s_new, s_old, s_fut, u, lag, t_sim, hist, pending,
                       tog_link, tog_next, head, ctr, slab, source, step, move_link, link_ends,
                       ball1, ball2, rev2, check, m_hist, s_hist)
        if t_clean < 0 and ctr[C_ANYONS] == 0:
            t_clean = t
        if stop_when_clean and ctr[C_SYNC_ANYONS] == 0:
            return 0, t, t_clean
        if ctr[C_TMIN] >= n_ticks:
            return 1, t, t_clean


_EMPTY_M = np.zeros((0, 1, 1), np.int32)
_EMPTY_S = np.zeros((0, 1), np.uint8)


@dataclass
class MarchingResult:
    summary: TrajectorySummary
    state: MarchingState
    status: int
    sample_times: np.ndarray
    sample_min: np.ndarray
    sample_max: np.ndarray

    @property
    def violations(self) -> dict:
        c = self.state.ctr
        return {
            "checks": int(c[C_CHECKS]),
            "message_mismatches": int(c[C_BAD_M]),
            "syndrome_mismatches": int(c[C_BAD_S]),
            "lag_violations": int(c[C_BAD_LAG]),
            "first_bad_tick": int(c[C_FIRST_BAD_TICK]),
            "first_bad_site": int(c[C_FIRST_BAD_SITE]),
        }


def run_marching(state: DecoderState, t_max: int | None = None, mu: float = 1.0, seed: int = 0,
                 trial: int = 0, *, wall_limit: float | None = None, stop_when_clean: bool = True,
                 sample_times=None, reference: tuple[np.ndarray, np.ndarray] | None = None) -> MarchingResult:
    """Run the marching-soldiers desynchronization of the decoder in place.

    ``t_max`` bounds the simulated automaton steps (default ``64 L``).
    ``reference`` is a synchronous ``(message, syndrome)`` history indexed by
    tick; when given, every event at a settled site is compared against it.
    """
    g = state.geometry
    if t_max is None:
        t_max = 64 * g.length
    ms = MarchingState.init(state, t_max)
    if wall_limit is None:
        wall_limit = np.inf
    st = np.asarray([] if sample_times is None else sample_times, dtype=np.float64)
    smin = np.zeros(st.shape[0], np.int64)
    smax = np.zeros(st.shape[0], np.int64)
    check = reference is not None
    m_hist, s_hist = reference if check else (_EMPTY_M, _EMPTY_S)
    status, t_end, t_clean = _marching_loop(
        *ms.kernel_args(), check, m_hist, s_hist, float(mu), _kernel_seed(seed, trial),
        float(wall_limit), stop_when_clean, st, smin, smax,
    )
    if ms.ctr[C_OVERFLOW]:
        raise RuntimeError("toggle log overflow; the clocks drifted further apart than expected")
    v = state.params.v
    done = status == 0
    steps = ms.t_sim_min // (v + 1) if done else None
    if done:
        state.step += steps
    summary = TrajectorySummary(
        t_dec_wall=float(t_clean) if t_clean >= 0 else None,
        t_dec_steps=steps,
        t_sim_min=ms.t_sim_min,
        t_sim_max=ms.t_sim_max,
        accepted_events=int(ms.ctr[C_ACCEPTED]),
        rejected_events=int(ms.ctr[C_REJECTED]),
        timed_out=status == 1,
    )
    return MarchingResult(summary, ms, int(status), st, smin, smax)


def marching_update(ms: MarchingState, r: int) -> bool:
    """Single clock event at site ``r`` (no faithfulness check)."""
    return bool(marching_event(int(r), *ms.kernel_args(), False, _EMPTY_M, _EMPTY_S))


# -- faithfulness ------------------------------------------------------------------


@dataclass
class FaithfulReport:
    faithful: bool
    frames_equal: bool
    checks: int
    message_mismatches: int
    syndrome_mismatches: int
    lag_violations: int
    first_bad_tick: int
    first_bad_site: int
    sync_steps: int | None
    async_steps: int | None

    def to_dict(self) -> dict:
        return asdict(self)


def sync_history(state: DecoderState, n_ticks: int) -> tuple[np.ndarray, np.ndarray]:
    s = state.copy()
    g, p, t = s.geometry, s.params, s.geometry.tables
    return K.record_ticks(s.frame, s.syndrome, s.messages, g.dim, p.v, p.cap(g), s.key,
                          p.epsilon_random, p.u_kick, n_ticks, t.slab, t.source, t.move_link,
                          t.link_ends)


def check_faithful(state: DecoderState, seed_async: int = 0, trial: int = 0, mu: float = 1.0,
                   t_max: int | None = None) -> FaithfulReport:
    """Compare the marching-soldiers run against the synchronous decoder on the same input.

    The decoder's own random moves are keyed by (step, site), so ``state.key``
    plays the role of the synchronous seed and the two runs share it; the event
    order of the asynchronous run comes from ``seed_async``.
    """
    sync = state.copy()
    t_sync = run_until_clean(sync, t_max)
    probe = run_marching(state.copy(), t_max, mu, seed_async, trial)
    n_ticks = max(probe.summary.t_sim_max, 1)
    ref = sync_history(state, n_ticks)
    final = state.copy()
    res = run_marching(final, t_max, mu, seed_async, trial, reference=ref)
    viol = res.violations
    frames_equal = bool(np.array_equal(final.frame, sync.frame))
    faithful = (
        viol["message_mismatches"] == 0
        and viol["syndrome_mismatches"] == 0
        and viol["lag_violations"] == 0
        and frames_equal
    )
    return FaithfulReport(
        faithful=faithful,
        frames_equal=frames_equal,
        checks=viol["checks"],
        message_mismatches=viol["message_mismatches"],
        syndrome_mismatches=viol["syndrome_mismatches"],
        lag_violations=viol["lag_violations"],
        first_bad_tick=viol["first_bad_tick"],
        first_bad_site=viol["first_bad_site"],
        sync_steps=None if t_sync is TIMEOUT else int(t_sync),
        async_steps=res.summary.t_dec_steps,
    )
