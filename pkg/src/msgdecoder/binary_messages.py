"""Constant-bit messages: annihilating exclusion walkers sourced by anyons.

Each species is a bit field of particles drifting along one lattice direction.
One sweep of a species does, in order:

1. annihilation, judged on the pre-sweep occupancy: a particle dies when it
   sits at the rear end of ``m`` consecutive occupied sites (counted along its
   drift direction);
2. hopping: every surviving particle attempts a hop with probability ``q``; a
   hop succeeds if the target is empty or its occupant hops away too, so whole
   trains advance together;
3. injection: every anyon drops a particle on its downstream neighbour with
   probability ``q`` if that site is empty.

In 2D each quadrant carries a primary species (drifting along the quadrant's
first axis) and a secondary species (drifting along the second axis); every
primary particle seeds a secondary one on the site just downstream of it in the
secondary direction.

The module is experimental: it reproduces the message density laws but no
threshold claims are attached to decoders built on it.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numba as nb
import numpy as np

from .lattice import Boundary, Geometry


@dataclass(frozen=True)
class AsepParams:
    q: float = 0.5
    m: int = 2
    flavors: int = 1

    def __post_init__(self):
        # q = 1 is admitted so the deterministic ballistic limit can be exercised
        if not 0.0 < self.q <= 1.0:
            raise ValueError("q must lie in (0, 1]")
        if self.m < 2 and self.m != 0:
            raise ValueError("m must be >= 2 (or 0 to disable annihilation)")
        if self.flavors < 1:
            raise ValueError("flavors must be >= 1")


@nb.njit(cache=True)
def seed_kernel_rng(seed):
    np.random.seed(seed)


@nb.njit(cache=True)
def species_sweep(occ, src, nxt, q, m, kill, attempt, state, stack):
    """One sweep of a single drifting species (see module docstring).

    ``nxt[r]`` is the downstream neighbour of r (-1 = leaves the system).
    ``kill``, ``attempt``, ``state`` and ``stack`` are scratch arrays of length N.
    """
    n = occ.shape[0]
    # 1. annihilation from the pre-sweep occupancy
    if m >= 2:
        for r in range(n):
            kill[r] = 0
            if occ[r]:
                x = r
                run = 1
                while run < m:
                    x = nxt[x]
                    if x < 0 or occ[x] == 0 or x == r:
                        break
                    run += 1
                if run >= m:
                    kill[r] = 1
        for r in range(n):
            if kill[r]:
                occ[r] = 0
    # 2. hop attempts
    for r in range(n):
        attempt[r] = 1 if (occ[r] and np.random.random() < q) else 0
        state[r] = 0  # 0 unknown, 1 moves, 2 stays, 3 on stack
    for r in range(n):
        if not occ[r] or state[r] != 0:
            continue
        depth = 0
        x = r
        verdict = 0
        while True:
            if not attempt[x]:
                verdict = 2
                break
            t = nxt[x]
            if t < 0 or not occ[t]:
                verdict = 1
                break
            if state[t] == 1 or state[t] == 2:
                verdict = state[t]
                # the particle at x moves iff its blocker moves
                break
            if state[t] == 3:
                # closed ring of attempting particles: treat as jammed
                verdict = 2
                break
            state[x] = 3
            stack[depth] = x
            depth += 1
            x = t
        state[x] = verdict
        while depth > 0:
            depth -= 1
            state[stack[depth]] = verdict
    for r in range(n):
        if occ[r] and state[r] == 1:
            occ[r] = 0
            kill[r] = 1  # reuse as "mover" marker
        else:
            kill[r] = 0
    for r in range(n):
        if kill[r]:
            t = nxt[r]
            if t >= 0:
                occ[t] = 1
    # 3. injection by sources
    for r in range(n):
        if src[r]:
            t = nxt[r]
            if t >= 0 and occ[t] == 0 and np.random.random() < q:
                occ[t] = 1


@nb.njit(cache=True)
def _sweep_1d(fields, syn, right, left, q, m, kill, attempt, state, stack):
    # fields[f, 0] drifts right (+), fields[f, 1] drifts left (-)
    for f in range(fields.shape[0]):
        species_sweep(fields[f, 0], syn, right, q, m, kill, attempt, state, stack)
        species_sweep(fields[f, 1], syn, left, q, m, kill, attempt, state, stack)


@nb.njit(cache=True)
def _sweep_2d(prim, sec, syn, step, prim_dir, sec_dir, q, m, kill, attempt, state, stack, pre):
    n_f = prim.shape[0]
    for f in range(n_f):
        for d in range(4):
            pre[:] = prim[f, d]
            species_sweep(prim[f, d], syn, step[:, prim_dir[d]], q, m, kill, attempt, state, stack)
            species_sweep(sec[f, d], syn, step[:, sec_dir[d]], q, m, kill, attempt, state, stack)
            for r in range(pre.shape[0]):
                if pre[r]:
                    t = step[r, sec_dir[d]]
                    if t >= 0:
                        sec[f, d, t] = 1


class _Scratch:
    def __init__(self, n):
        self.kill = np.zeros(n, np.uint8)
        self.attempt = np.zeros(n, np.uint8)
        self.state = np.zeros(n, np.uint8)
        self.stack = np.zeros(n, np.int64)
        self.pre = np.zeros(n, np.uint8)


# quadrant d: primary and secondary drift directions (codes 2a / 2a+1 = +/- e_a)
QUADRANT_PRIMARY = np.array([0, 2, 1, 3], dtype=np.int64)  # +x, +y, -x, -y
QUADRANT_SECONDARY = np.array([2, 1, 3, 0], dtype=np.int64)  # +y, -x, -y, +x


@dataclass
class BinaryField:
    """Bit-valued message fields of one trial.

    1D: ``bits[flavor, 0 | 1, site]`` for right- and left-drifting walkers.
    2D: ``bits[flavor, quadrant, site]`` primaries and ``secondary`` likewise.
    """

    geometry: Geometry
    params: AsepParams
    bits: np.ndarray
    secondary: np.ndarray | None = None

    @classmethod
    def empty(cls, g: Geometry, params: AsepParams) -> "BinaryField":
        if g.dim == 1:
            return cls(g, params, np.zeros((params.flavors, 2, g.n_sites), np.uint8))
        if g.dim == 2:
            shape = (params.flavors, 4, g.n_sites)
            return cls(g, params, np.zeros(shape, np.uint8), np.zeros(shape, np.uint8))
        raise ValueError("binary messages are implemented in 1D and 2D")

    def density(self) -> np.ndarray:
        """Per-site occupation summed over species and flavors."""
        tot = self.bits.sum(axis=(0, 1)).astype(np.int64)
        if self.secondary is not None:
            tot += self.secondary.sum(axis=(0, 1)).astype(np.int64)
        return tot

    def _scratch(self):
        if not hasattr(self, "_s"):
            self._s = _Scratch(self.geometry.n_sites)
        return self._s


def asep_micro_step(field: BinaryField, syndrome: np.ndarray) -> BinaryField:
    """One sweep of all 1D species; randomness comes from the kernel RNG (see ``seed_kernel_rng``)."""
    g = field.geometry
    if g.dim != 1:
        raise ValueError("asep_micro_step is the one-dimensional rule")
    t = g.tables
    s = field._scratch()
    p = field.params
    _sweep_1d(field.bits, np.ascontiguousarray(syndrome, np.uint8), np.ascontiguousarray(t.step[:, 0]),
              np.ascontiguousarray(t.step[:, 1]), p.q, p.m, s.kill, s.attempt, s.state, s.stack)
    return field


def asep2d_micro_step(field: BinaryField, syndrome: np.ndarray) -> BinaryField:
    g = field.geometry
    if g.dim != 2:
        raise ValueError("asep2d_micro_step is the two-dimensional rule")
    s = field._scratch()
    p = field.params
    _sweep_2d(field.bits, field.secondary, np.ascontiguousarray(syndrome, np.uint8), g.tables.step,
              QUADRANT_PRIMARY, QUADRANT_SECONDARY, p.q, p.m, s.kill, s.attempt, s.state, s.stack, s.pre)
    return field


# -- decoder built on binary messages (1D) -----------------------------------------


@dataclass
class BinaryDecoderState:
    geometry: Geometry
    field: BinaryField
    frame: np.ndarray
    syndrome: np.ndarray
    memory: np.ndarray  # per site: 0 unset, +1 / -1 last move of the anyon sitting there
    v: int = 3
    step: int = 0

    @classmethod
    def from_frame(cls, g: Geometry, frame, params: AsepParams, v: int = 3) -> "BinaryDecoderState":
        from .decoder import compute_syndrome

        if g.dim != 1:
            raise ValueError("the binary decoder is one-dimensional")
        frame = np.ascontiguousarray(frame, np.uint8).copy()
        return cls(g, BinaryField.empty(g, params), frame, compute_syndrome(frame, g),
                   np.zeros(g.n_sites, np.int8), v=v)


def binary_direction(n_plus: int, n_minus: int, memory: int) -> int:
    """+1 / -1 / 0: move right, left or stay."""
    if n_plus and n_minus:
        return 0
    if n_plus:
        return -1  # walker drifting right came from the left
    if n_minus:
        return 1
    return int(memory)


def binary_feedback_step(state: BinaryDecoderState) -> BinaryDecoderState:
    g = state.geometry
    t = g.tables
    fb = state.field.bits
    plus = fb[:, 0].min(axis=0)  # product over flavors
    minus = fb[:, 1].min(axis=0)
    toggles = {}
    for r in np.flatnonzero(state.syndrome):
        d = binary_direction(int(plus[r]), int(minus[r]), int(state.memory[r]))
        if d == 0:
            continue
        j = 0 if d > 0 else 1
        l = int(t.move_link[r, j])
        if l < 0:
            continue
        toggles[l] = (r, d)
    moved = {r for r, _ in toggles.values()}
    new_memory = np.zeros_like(state.memory)
    for r in np.flatnonzero(state.syndrome):
        if r not in moved:
            new_memory[r] = state.memory[r]
    for l, (r, d) in toggles.items():
        state.frame[l] ^= 1
        for x in t.link_ends[l]:
            if x >= 0:
                state.syndrome[x] ^= 1
        dest = int(t.step[r, 0 if d > 0 else 1])
        if dest >= 0:
            new_memory[dest] = d
    new_memory[state.syndrome == 0] = 0
    state.memory = new_memory
    state.step += 1
    return state


def binary_decoder_step(state: BinaryDecoderState) -> BinaryDecoderState:
    for _ in range(state.v):
        asep_micro_step(state.field, state.syndrome)
    return binary_feedback_step(state)


# -- density profiles ------------------------------------------------------------


@dataclass
class DensityProfile:
    r: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    samples: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "mean_density", "stderr", "samples"])
        for r, m, s in zip(self.r, self.mean, self.stderr):
            w.writerow([int(r), repr(float(m)), repr(float(s)), self.samples])
        return buf.getvalue()

    def fit_exponent(self, r_min: float, r_max: float) -> tuple[float, float]:
        """Slope alpha and its stderr of log density = c - alpha log r over [r_min, r_max]."""
        sel = (self.r >= r_min) & (self.r <= r_max) & (self.mean > 0)
        x = np.log(self.r[sel])
        y = np.log(self.mean[sel])
        A = np.vstack([x, np.ones_like(x)]).T
        coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
        dof = max(len(x) - 2, 1)
        sigma2 = float(res[0]) / dof if res.size else 0.0
        cov = sigma2 * np.linalg.inv(A.T @ A)
        return float(-coef[0]), float(np.sqrt(cov[0, 0]))


@nb.njit(cache=True)
def _profile_1d(length, q, m, flavors, burn_in, sweeps, n_blocks, seed):
    np.random.seed(seed)
    occ = np.zeros((flavors, length + 1), np.uint8)
    src = np.zeros(length + 1, np.uint8)
    src[0] = 1
    nxt = np.empty(length + 1, np.int64)
    for r in range(length):
        nxt[r] = r + 1
    nxt[length] = -1
    kill = np.zeros(length + 1, np.uint8)
    attempt = np.zeros(length + 1, np.uint8)
    state = np.zeros(length + 1, np.uint8)
    stack = np.zeros(length + 1, np.int64)
    acc = np.zeros((n_blocks, length + 1))
    per_block = sweeps // n_blocks
    for _ in range(burn_in):
        for f in range(flavors):
            species_sweep(occ[f], src, nxt, q, m, kill, attempt, state, stack)
    for b in range(n_blocks):
        for _ in range(per_block):
            for f in range(flavors):
                species_sweep(occ[f], src, nxt, q, m, kill, attempt, state, stack)
            for r in range(length + 1):
                prod = 1.0
                for f in range(flavors):
                    prod *= occ[f, r]
                acc[b, r] += prod
        acc[b] /= per_block
    return acc


def density_profile_1d(params: AsepParams, length: int = 400, burn_in: int = 20_000,
                       sweeps: int = 100_000, n_blocks: int = 20, seed: int = 0) -> DensityProfile:
    """Stationary density (product over flavors) at distance r from a fixed source.

    The chain is open at the far end so walkers leave instead of wrapping around.
    Standard errors come from ``n_blocks`` batch means.
    """
    acc = _profile_1d(length, params.q, params.m, params.flavors, burn_in, sweeps, n_blocks, seed)
    mean = acc.mean(axis=0)
    err = acc.std(axis=0, ddof=1) / np.sqrt(n_blocks)
    r = np.arange(length + 1)
    return DensityProfile(r[1:], mean[1:], err[1:], sweeps)


def density_profile_2d(params: AsepParams, length: int = 64, burn_in: int = 2000,
                       sweeps: int = 20_000, n_blocks: int = 10, seed: int = 0) -> DensityProfile:
    """Total message density around a fixed source, binned by 1-norm distance."""
    g = Geometry(2, length, Boundary.PERIODIC)
    field = BinaryField.empty(g, params)
    syn = np.zeros(g.n_sites, np.uint8)
    c = length // 2
    syn[g.site_index((c, c))] = 1
    seed_kernel_rng(seed)
    for _ in range(burn_in):
        asep2d_micro_step(field, syn)
    coords = g.tables.coords
    dist = np.abs(coords - c).sum(axis=1)
    r_max = c
    counts = np.bincount(dist, minlength=2 * length)[: r_max + 1]
    per_block = max(sweeps // n_blocks, 1)
    blocks = np.zeros((n_blocks, r_max + 1))
    for b in range(n_blocks):
        tot = np.zeros(g.n_sites)
        for _ in range(per_block):
            asep2d_micro_step(field, syn)
            tot += field.density()
        binned = np.bincount(dist, weights=tot, minlength=2 * length)[: r_max + 1]
        blocks[b] = binned / np.maximum(counts, 1) / per_block
    mean = blocks.mean(axis=0)
    err = blocks.std(axis=0, ddof=1) / np.sqrt(n_blocks)
    r = np.arange(r_max + 1)
    return DensityProfile(r[1:], mean[1:], err[1:], per_block * n_blocks)
