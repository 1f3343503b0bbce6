"""Synchronous message-passing decoder: state, update rules and bookkeeping."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import _kernels as K
from .lattice import Boundary, Geometry
from .noise import NoiseRealization
from .rng import key as rng_key


class Rule(enum.Enum):
    STANDARD = "standard"
    MODIFIED = "modified"


class Timeout:
    """Sentinel returned when decoding does not finish within the step budget."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Timeout"

    def __bool__(self):
        return False


TIMEOUT = Timeout()


class NonemptySyndrome(ValueError):
    pass


@dataclass(frozen=True)
class DecoderParams:
    v: int = 3
    m_max: int | None = None
    epsilon_random: float = 0.0
    u_kick: int = 0
    rule: Rule = Rule.STANDARD

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("message speed v must be >= 1")
        if not 0.0 <= self.epsilon_random <= 1.0:
            raise ValueError("epsilon_random must lie in [0, 1]")
        if self.u_kick < 0:
            raise ValueError("u_kick must be >= 0 (0 disables kicks)")
        if self.m_max is not None and self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if not isinstance(self.rule, Rule):
            object.__setattr__(self, "rule", Rule(self.rule))

    def cap(self, g: Geometry) -> int:
        return g.length if self.m_max is None else self.m_max

    @property
    def modified(self) -> bool:
        return self.rule is Rule.MODIFIED


@dataclass
class DecoderState:
    geometry: Geometry
    params: DecoderParams
    frame: np.ndarray
    syndrome: np.ndarray
    messages: np.ndarray
    key: int = 0
    step: int = 0
    micro_clock: int = 0
    _scratch: tuple = field(default=None, repr=False, compare=False)

    @classmethod
    def from_noise(cls, noise: NoiseRealization | np.ndarray, params: DecoderParams,
                   geometry: Geometry | None = None, seed: int = 0, trial: int = 0) -> "DecoderState":
        if isinstance(noise, NoiseRealization):
            geometry = noise.geometry
            flips = noise.flipped
        else:
            flips = np.asarray(noise)
        if geometry is None:
            raise ValueError("geometry required when passing a raw flip array")
        frame = np.ascontiguousarray(flips, dtype=np.uint8).copy()
        if frame.shape != (geometry.n_links,):
            raise ValueError(f"expected {geometry.n_links} link bits, got {frame.shape}")
        return cls(
            geometry=geometry,
            params=params,
            frame=frame,
            syndrome=compute_syndrome(frame, geometry),
            messages=np.zeros((geometry.n_sites, 2 * geometry.dim), dtype=np.int32),
            key=rng_key(seed, trial, "decoder"),
        )

    def copy(self) -> "DecoderState":
        return replace(self, frame=self.frame.copy(), syndrome=self.syndrome.copy(),
                       messages=self.messages.copy(), _scratch=None)

    @property
    def anyons(self) -> np.ndarray:
        return np.flatnonzero(self.syndrome)

    def message_grid(self, sign: int, axis: int) -> np.ndarray:
        k = 2 * axis + (0 if sign > 0 else 1)
        return self.messages[:, k].reshape(self.geometry.shape)

    def scratch(self):
        if self._scratch is None:
            nl = self.geometry.n_links
            self._scratch = (
                np.zeros(nl, dtype=np.uint8),
                np.empty(nl, dtype=np.int64),
                np.zeros(self.geometry.n_sites, dtype=np.uint8),
            )
        return self._scratch


def compute_syndrome(noise, g: Geometry | None = None) -> np.ndarray:
    """Parity of flipped links at each site; rough-boundary ends contribute nothing."""
    if isinstance(noise, NoiseRealization):
        g, flips = noise.geometry, noise.flipped
    else:
        flips = noise
    flips = np.ascontiguousarray(flips, dtype=np.uint8)
    return K.boundary_of(flips, g.n_sites, g.tables.link_ends)


def micro_step(state: DecoderState) -> DecoderState:
    g = state.geometry
    t = g.tables
    out = np.empty_like(state.messages)
    K.micro_sweep(state.messages, state.syndrome, out, t.slab, t.source, state.params.cap(g))
    state.messages = out
    state.micro_clock = (state.micro_clock + 1) % state.params.v
    return state


def force(state: DecoderState, site) -> tuple[int, int] | None:
    """(axis, sign) of the rule move of the anyon at ``site``, None if it stays.

    Random moves are not included; this is the deterministic force.
    """
    g = state.geometry
    r = site if isinstance(site, (int, np.integer)) else g.site_index(site)
    if not state.syndrome[r]:
        return None
    m = state.messages[r]
    j = K.force_modified(m, g.dim) if state.params.modified else K.force_standard(m, g.dim)
    if j < 0:
        return None
    return int(j // 2), (1 if j % 2 == 0 else -1)


def feedback_step(state: DecoderState) -> DecoderState:
    g = state.geometry
    t = g.tables
    p = state.params
    mark, toggled, gsite = state.scratch()
    K.feedback_sweep(state.frame, state.syndrome, state.messages, g.dim, p.modified,
                     state.step, state.key, p.epsilon_random, p.u_kick,
                     t.move_link, t.link_ends, mark, toggled, gsite)
    state.step += 1
    return state


def decoder_step(state: DecoderState) -> DecoderState:
    for _ in range(state.params.v):
        micro_step(state)
    return feedback_step(state)


def run_until_clean(state: DecoderState, t_max: int | None = None):
    """Decode in place; returns the number of decoder steps or ``TIMEOUT``."""
    g = state.geometry
    t = g.tables
    p = state.params
    if t_max is None:
        t_max = 64 * g.length
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    steps = K.decode_run(state.frame, state.syndrome, state.messages, g.dim, p.v, p.cap(g),
                         p.modified, state.key, p.epsilon_random, p.u_kick, t_max,
                         state.step, t.slab, t.source, t.move_link, t.link_ends)
    if steps < 0:
        state.step += t_max
        return TIMEOUT
    state.step += int(steps)
    return int(steps)


def cut_links(g: Geometry) -> list[np.ndarray]:
    """Link sets whose flip parities define the logical class."""
    coords = g.tables.coords
    sites = np.arange(g.n_sites)
    if g.periodic:
        return [sites[coords[:, a] == g.length - 1] * g.dim + a for a in range(g.dim)]
    first = sites[coords[:, 0] == 0]
    return [np.array([g.left_dangling_link(int(s)) for s in first], dtype=np.int64)]


def logical_class_of(frame: np.ndarray, g: Geometry) -> tuple[int, ...]:
    return tuple(int(frame[c].sum() % 2) for c in cut_links(g))


def logical_class(state: DecoderState) -> tuple[int, ...]:
    if state.syndrome.any():
        raise NonemptySyndrome("logical class is defined only for an anyon-free frame")
    return logical_class_of(state.frame, state.geometry)


# -- frame dumps -----------------------------------------------------------------


def _pgm(path: Path, grid: np.ndarray, step: int, maxval: int, label: str):
    if grid.ndim == 1:
        grid = grid[None, :]
    elif grid.ndim > 2:
        grid = grid.reshape(grid.shape[0], -1)
    rows, cols = grid.shape
    lines = ["P2", f"# step {step} {label}", f"{cols} {rows}", str(max(maxval, 1))]
    lines += [" ".join(str(int(x)) for x in row) for row in grid]
    path.write_text("\n".join(lines) + "\n", newline="\n")


def min_message(state: DecoderState) -> np.ndarray:
    m = state.messages.astype(np.int64)
    m = np.where(m > 0, m, np.iinfo(np.int64).max)
    low = m.min(axis=1)
    return np.where(low == np.iinfo(np.int64).max, 0, low)


def dump_frames(state: DecoderState, out_dir, t_max: int | None = None, prefix: str = "frame"):
    """Decode step by step, writing one syndrome and one min-message PGM per step."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = state.geometry
    cap = state.params.cap(g)
    t_max = 64 * g.length if t_max is None else t_max
    written = []

    def emit(step):
        sp = out / f"{prefix}_syndrome_{step:06d}.pgm"
        mp = out / f"{prefix}_message_{step:06d}.pgm"
        _pgm(sp, state.syndrome.reshape(g.shape), step, 1, "syndrome")
        _pgm(mp, min_message(state).reshape(g.shape), step, cap, "min-message")
        written.extend([sp, mp])

    emit(0)
    for step in range(1, t_max + 1):
        if not state.syndrome.any():
            break
        decoder_step(state)
        emit(step)
    return written


__all__ = [
    "Boundary",
    "DecoderParams",
    "DecoderState",
    "NonemptySyndrome",
    "Rule",
    "TIMEOUT",
    "Timeout",
    "compute_syndrome",
    "cut_links",
    "decoder_step",
    "dump_frames",
    "feedback_step",
    "force",
    "logical_class",
    "logical_class_of",
    "micro_step",
    "run_until_clean",
]
