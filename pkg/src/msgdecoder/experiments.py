"""Monte Carlo campaigns: logical failure rates, decoding times, threshold scans and
the auxiliary statistics (nearest pairs, 1D pair analytics, erosion, fractal
inputs, desynchronization slowdown).

Every trial draws from its own ``(seed, trial)`` streams, so results do not depend
on how trials are chunked or distributed over worker processes.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, depth_first_order
from scipy.spatial import cKDTree

from . import _kernels as K
from .decoder import TIMEOUT, DecoderParams, DecoderState, Rule, cut_links, decoder_step, run_until_clean
from .lattice import Boundary, Geometry
from .noise import NoiseRealization, NoiseSpec, fractal_pattern, sample
from .rng import key as rng_key
from .rng import stream
from .scheduler import (
    SchedulerKind,
    SchedulerSpec,
    _kernel_seed,
    _require_standard,
    _uncoordinated_batch,
    run_marching,
)

CHUNK = 256


class Criterion(enum.Enum):
    MATCH_ORIGINAL = "match"
    MAJORITY_VOTE = "majority"


class NoCrossing(RuntimeError):
    pass


class ViolationDetected(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    dim: int
    L: int
    noise: NoiseSpec
    decoder: DecoderParams = DecoderParams()
    scheduler: SchedulerSpec = SchedulerSpec()
    trials: int = 1000
    t_max: int | None = None
    seed: int = 0
    criterion: Criterion = Criterion.MATCH_ORIGINAL
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name, typ in (("criterion", Criterion), ("boundary", Boundary)):
            val = getattr(self, name)
            if not isinstance(val, typ):
                object.__setattr__(self, name, typ(val))
        if self.criterion is Criterion.MAJORITY_VOTE and (self.dim != 1 or self.boundary is not Boundary.PERIODIC):
            raise ValueError("the majority-vote criterion applies to the periodic 1D chain")

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.dim, self.L, self.boundary)

    @property
    def step_budget(self) -> int:
        return 64 * self.L if self.t_max is None else self.t_max

    def with_(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "L": self.L,
            "boundary": self.boundary.value,
            "noise": self.noise.to_dict(),
            "decoder": {
                "v": self.decoder.v,
                "m_max": self.decoder.m_max,
                "epsilon_random": self.decoder.epsilon_random,
                "u_kick": self.decoder.u_kick,
                "rule": self.decoder.rule.value,
            },
            "scheduler": {"kind": self.scheduler.kind.value, "mu": self.scheduler.mu},
            "trials": self.trials,
            "t_max": self.step_budget,
            "seed": self.seed,
            "criterion": self.criterion.value,
        }

    def config_hash(self) -> str:
        return config_hash(self.to_dict())


def config_hash(d: dict) -> str:
    blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# -- statistics -------------------------------------------------------------------


def wilson_interval(failures: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    ph = failures / n
    denom = 1 + z * z / n
    mid = (ph + z * z / (2 * n)) / denom
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom
    return max(0.0, mid - half), min(1.0, mid + half)


@dataclass
class TrialResults:
    """Per-trial outcomes.  ``t_dec`` is NaN for timeouts."""

    t_dec: np.ndarray
    success: np.ndarray
    timed_out: np.ndarray

    @classmethod
    def concat(cls, parts) -> "TrialResults":
        parts = list(parts)
        return cls(*(np.concatenate([getattr(p, f) for p in parts]) for f in ("t_dec", "success", "timed_out")))


@dataclass
class CampaignStats:
    trials: int
    failures: int
    timeouts: int
    p_log: float
    p_log_stderr: float
    wilson_low: float
    wilson_high: float
    t_dec_mean: float
    t_dec_stderr: float
    results: TrialResults | None = field(default=None, repr=False)

    @classmethod
    def from_results(cls, res: TrialResults) -> "CampaignStats":
        n = len(res.success)
        fails = int(n - res.success.sum())
        p = fails / n
        done = res.t_dec[~res.timed_out]
        if len(done):
            mean = float(done.mean())
            err = float(done.std(ddof=1) / math.sqrt(len(done))) if len(done) > 1 else 0.0
        else:
            mean, err = float("nan"), float("nan")
        lo, hi = wilson_interval(fails, n)
        return cls(
            trials=n,
            failures=fails,
            timeouts=int(res.timed_out.sum()),
            p_log=p,
            p_log_stderr=math.sqrt(p * (1 - p) / n),
            wilson_low=lo,
            wilson_high=hi,
            t_dec_mean=mean,
            t_dec_stderr=err,
            results=res,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("results")
        return d


# -- per-trial machinery ------------------------------------------------------------


def trial_noise(config: ExperimentConfig, trial: int, g: Geometry | None = None) -> NoiseRealization:
    g = config.geometry if g is None else g
    return sample(config.noise, g, stream(config.seed, trial, "noise"))


def judge(config: ExperimentConfig, noise: np.ndarray, frame: np.ndarray, cuts) -> bool:
    """Success of one anyon-free output frame (residual error = ``frame``)."""
    if config.criterion is Criterion.MAJORITY_VOTE:
        majority = int(2 * int(noise.sum()) > noise.shape[0])
        return int(frame[0]) == majority
    return all(int(frame[c].sum()) % 2 == 0 for c in cuts)


def _run_chunk(config: ExperimentConfig, start: int, stop: int) -> TrialResults:
    g = config.geometry
    t = g.tables
    p = config.decoder
    kind = config.scheduler.kind
    n = stop - start
    noise = np.stack([trial_noise(config, i, g).flipped for i in range(start, stop)])
    frames = noise.copy()
    syns = K.boundary_batch(frames, g.n_sites, t.link_ends)
    keys = np.array([rng_key(config.seed, i, "decoder") for i in range(start, stop)], dtype=np.int64)
    budget = config.step_budget
    if kind is SchedulerKind.SYNCHRONOUS:
        steps = K.decode_batch(frames, syns, keys, g.dim, p.v, p.cap(g), p.modified, p.epsilon_random,
                               p.u_kick, budget, t.slab, t.source, t.move_link, t.link_ends)
        timed_out = steps < 0
        t_dec = np.where(timed_out, np.nan, steps.astype(np.float64))
    elif kind in (SchedulerKind.UNCOORDINATED, SchedulerKind.UNCOORDINATED_JOINT):
        _require_standard(p)
        mu = config.scheduler.mu
        seeds = np.array([_kernel_seed(config.seed, i) for i in range(start, stop)], dtype=np.int64)
        wall = _uncoordinated_batch(frames, syns, keys, seeds, g.dim, p.v, p.cap(g), p.epsilon_random,
                                    p.u_kick, mu, float(budget) * mu,
                                    kind is SchedulerKind.UNCOORDINATED_JOINT,
                                    t.slab, t.source, t.move_link, t.link_ends)
        timed_out = wall < 0
        t_dec = np.where(timed_out, np.nan, wall)
    else:
        t_dec = np.empty(n)
        timed_out = np.zeros(n, bool)
        for j, i in enumerate(range(start, stop)):
            st = DecoderState(g, p, frames[j], syns[j], np.zeros((g.n_sites, 2 * g.dim), np.int32), int(keys[j]))
            res = run_marching(st, budget, config.scheduler.mu, config.seed, i)
            timed_out[j] = res.status != 0
            t_dec[j] = np.nan if timed_out[j] else res.summary.t_dec_steps
            frames[j] = st.frame
    cuts = cut_links(g)
    success = np.array([(not timed_out[j]) and judge(config, noise[j], frames[j], cuts) for j in range(n)])
    return TrialResults(t_dec, success, timed_out)


def _chunks(trials: int):
    return [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]


def run_trials(config: ExperimentConfig, workers: int = 1) -> TrialResults:
    chunks = _chunks(config.trials)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_run_chunk, [config] * len(chunks), *zip(*chunks)))
    else:
        parts = [_run_chunk(config, a, b) for a, b in chunks]
    return TrialResults.concat(parts)


def _campaign(config: ExperimentConfig, workers: int) -> CampaignStats:
    stats = CampaignStats.from_results(run_trials(config, workers))
    if stats.timeouts > 0.01 * stats.trials:
        warnings.warn(
            f"{stats.timeouts}/{stats.trials} trials timed out (L={config.L}, p={config.noise.p}); "
            "they count as failures",
            stacklevel=3,
        )
    return stats


def estimate_plog(config: ExperimentConfig, workers: int = 1) -> CampaignStats:
    """Logical failure rate.  Timeouts count as failures and are also reported separately."""
    return _campaign(config, workers)


def estimate_tdec(config: ExperimentConfig, workers: int = 1) -> CampaignStats:
    """Mean decoding time over the trials that finished (failures included)."""
    return _campaign(config, workers)


# -- threshold scans ------------------------------------------------------------------


@dataclass
class ScanCell:
    p: float
    L: int
    stats: CampaignStats


@dataclass
class ScanResult:
    cells: list[ScanCell]
    crossings: list[tuple[int, int, float]]  # (L_small, L_large, p_cross)

    @property
    def estimate(self) -> float:
        return float(np.mean([c for _, _, c in self.crossings]))

    @property
    def spread(self) -> float:
        cs = [c for _, _, c in self.crossings]
        return float((max(cs) - min(cs)) / 2) if cs else float("nan")

    def curve(self, L: int) -> tuple[np.ndarray, np.ndarray]:
        cells = sorted((c for c in self.cells if c.L == L), key=lambda c: c.p)
        return np.array([c.p for c in cells]), np.array([c.stats.p_log for c in cells])


def crossing_point(p: np.ndarray, small: np.ndarray, large: np.ndarray) -> float | None:
    """First abscissa where the larger system's curve rises above the smaller one's."""
    d = large - small
    for i in range(len(p) - 1):
        if d[i] <= 0 < d[i + 1] or d[i] < 0 <= d[i + 1]:
            return float(p[i] + (p[i + 1] - p[i]) * (-d[i]) / (d[i + 1] - d[i]))
    return None


def crossings_from_curves(p_grid, curves: dict[int, np.ndarray]) -> list[tuple[int, int, float]]:
    Ls = sorted(curves)
    p = np.asarray(p_grid, float)
    out = []
    for a, b in zip(Ls, Ls[1:]):
        c = crossing_point(p, curves[a], curves[b])
        if c is not None:
            out.append((a, b, c))
    return out


def threshold_scan(config: ExperimentConfig, p_grid, L_list, workers: int = 1,
                   progress=None) -> ScanResult:
    p_grid = sorted(float(x) for x in p_grid)
    L_list = sorted(int(x) for x in L_list)
    if len(L_list) < 2 or len(p_grid) < 3:
        raise ValueError("a threshold scan needs >= 2 sizes and >= 3 grid points")
    cells = []
    for L in L_list:
        for p in p_grid:
            cfg = config.with_(L=L, noise=replace(config.noise, p=p))
            stats = estimate_plog(cfg, workers)
            cells.append(ScanCell(p, L, stats))
            if progress:
                progress(p, L, stats)
    res = ScanResult(cells, [])
    res.crossings = crossings_from_curves(p_grid, {L: res.curve(L)[1] for L in L_list})
    if not res.crossings:
        raise NoCrossing("p_log curves do not cross inside the grid")
    return res


# -- nearest paired anyons ----------------------------------------------------------


def noise_partners(noise: NoiseRealization) -> tuple[np.ndarray, np.ndarray]:
    """Anyon sites and the index of each one's partner along its error chain (-1 if none)."""
    g = noise.geometry
    ends = g.tables.link_ends[noise.support]
    ends = ends[(ends[:, 0] >= 0) & (ends[:, 1] >= 0)]
    N = g.n_sites
    syn = K.boundary_of(noise.flipped, N, g.tables.link_ends)
    anyons = np.flatnonzero(syn)
    partner = np.full(len(anyons), -1, np.int64)
    if len(anyons) == 0:
        return anyons, partner
    graph = coo_matrix((np.ones(len(ends)), (ends[:, 0], ends[:, 1])), shape=(N, N)).tocsr()
    graph = graph + graph.T
    _, labels = connected_components(graph, directed=False)
    pos = {int(s): i for i, s in enumerate(anyons)}
    by_comp: dict[int, list[int]] = {}
    for s in anyons:
        by_comp.setdefault(int(labels[s]), []).append(int(s))
    for comp, members in by_comp.items():
        if len(members) == 2:
            ordered = members
        else:
            order = depth_first_order(graph, members[0], directed=False, return_predecessors=False)
            is_anyon = syn[order].astype(bool)
            ordered = [int(s) for s in order[is_anyon]]
        for a, b in zip(ordered[0::2], ordered[1::2]):
            partner[pos[a]] = pos[b]
            partner[pos[b]] = pos[a]
    return anyons, partner


@dataclass
class NearestPairStats:
    p: float
    L: int
    anyons: int
    nearest: int

    @property
    def probability(self) -> float:
        return self.nearest / self.anyons if self.anyons else float("nan")

    @property
    def stderr(self) -> float:
        q = self.probability
        return math.sqrt(q * (1 - q) / self.anyons) if self.anyons else float("nan")


def nearest_paired_probability(p: float, L: int, trials: int, seed: int = 0, dim: int = 2,
                               min_anyons: int = 0) -> NearestPairStats:
    """Fraction of anyons whose error-chain partner is among their nearest (inf-norm) anyons.

    Runs ``trials`` samples, then keeps going until ``min_anyons`` anyons were seen.
    """
    g = Geometry(dim, L)
    spec = NoiseSpec.iid(p)
    seen = hit = 0
    trial = 0
    while trial < trials or seen < min_anyons:
        noise = sample(spec, g, stream(seed, trial, "noise"))
        trial += 1
        anyons, partner = noise_partners(noise)
        if len(anyons) < 2:
            continue
        coords = g.tables.coords[anyons].astype(np.float64)
        tree = cKDTree(coords, boxsize=float(L))
        d, _ = tree.query(coords, k=2, p=np.inf)
        nearest = d[:, 1]
        mask = partner >= 0
        diff = np.abs(coords[mask] - coords[partner[mask]])
        diff = np.minimum(diff, L - diff)
        dp = diff.max(axis=1)
        seen += int(mask.sum())
        hit += int((dp <= nearest[mask] + 1e-9).sum())
    return NearestPairStats(p, L, seen, hit)


def half_crossing(ps, probs) -> float:
    """Interpolated abscissa where a decreasing probability curve passes 1/2."""
    ps, probs = np.asarray(ps, float), np.asarray(probs, float)
    for i in range(len(ps) - 1):
        if probs[i] >= 0.5 >= probs[i + 1]:
            return float(ps[i] + (ps[i + 1] - ps[i]) * (probs[i] - 0.5) / (probs[i] - probs[i + 1]))
    raise NoCrossing("probability does not pass 1/2 inside the grid")


# -- 1D pair statistics ------------------------------------------------------------


@dataclass
class PairStats1D:
    p: float
    L: int
    mean_density: float
    density_stderr: float
    mean_pair_length: float
    pair_length_stderr: float
    pairs: int


def chain_runs(bits: np.ndarray) -> np.ndarray:
    """Lengths of maximal runs of flipped links on a ring (a fully flipped ring gives none)."""
    bits = np.asarray(bits, np.int8)
    if bits.all() or not bits.any():
        return np.zeros(0, np.int64)
    start = int(np.flatnonzero(bits == 0)[0])
    b = np.roll(bits, -start)
    edges = np.diff(np.concatenate([[0], b, [0]]))
    return np.flatnonzero(edges == -1) - np.flatnonzero(edges == 1)


def pair_stats_1d(p: float, L: int, trials: int, seed: int = 0) -> PairStats1D:
    g = Geometry(1, L)
    spec = NoiseSpec.iid(p)
    dens = np.empty(trials)
    runs = []
    for t in range(trials):
        bits = sample(spec, g, stream(seed, t, "noise")).flipped
        dens[t] = np.count_nonzero(bits != np.roll(bits, 1)) / L
        runs.append(chain_runs(bits))
    runs = np.concatenate(runs) if runs else np.zeros(0)
    n_pairs = len(runs)
    return PairStats1D(
        p=p,
        L=L,
        mean_density=float(dens.mean()),
        density_stderr=float(dens.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
        mean_pair_length=float(runs.mean()) if n_pairs else float("nan"),
        pair_length_stderr=float(runs.std(ddof=1) / math.sqrt(n_pairs)) if n_pairs > 1 else float("nan"),
        pairs=n_pairs,
    )


# -- erosion ------------------------------------------------------------------------


class MessageInit(enum.Enum):
    TRIVIAL = "trivial"
    RANDOM = "random"


def erosion_bound_trivial(v: int) -> float:
    return 1.5 * (1 + 1 / v)


def erosion_bound_random(v: int) -> float:
    return (3 * v + 5) / (2 * (v - 1))


def containment_factor(v: int) -> float:
    return (v + 1) / (v - 1)


def in_containment(disp: np.ndarray, radius: float) -> np.ndarray:
    """Ball of inf-radius ``radius`` plus the pyramid of height ``radius`` hanging off its -x face.

    ``disp`` holds displacements from the ball center, axis 0 being x.
    """
    ball = np.abs(disp).max(axis=1) <= radius + 1e-9
    dx = disp[:, 0] + 2 * radius  # relative to the apex at center - 2 radius x
    transverse = np.abs(disp[:, 1:]).max(axis=1) if disp.shape[1] > 1 else np.zeros(len(disp))
    pyramid = (dx >= -1e-9) & (dx <= radius + 1e-9) & (dx + 1e-9 >= transverse)
    return ball | pyramid


def _path_links(g: Geometry, a, b) -> list[int]:
    """Links of an axis-by-axis path from site a to site b (no wrap)."""
    links = []
    cur = list(a)
    for ax in range(g.dim):
        while cur[ax] != b[ax]:
            if b[ax] > cur[ax]:
                links.append(g.link_index(tuple(cur), ax))
                cur[ax] += 1
            else:
                cur[ax] -= 1
                links.append(g.link_index(tuple(cur), ax))
    return links


@dataclass
class ErosionStats:
    W: int
    v: int
    init: str
    dim: int
    trials: int
    max_time: int
    mean_time: float
    bound: float
    timeouts: int
    containment_violations: int

    @property
    def containment_ok(self) -> bool:
        return self.containment_violations == 0

    @property
    def within_bound(self) -> bool:
        return self.timeouts == 0 and self.max_time <= self.bound * self.W + 1e-9


def erosion_trial(W: int, v: int, init: MessageInit = MessageInit.TRIVIAL, trials: int = 100,
                  seed: int = 0, dim: int = 2, rule: Rule = Rule.MODIFIED, max_pairs: int | None = None,
                  raise_on_violation: bool = False) -> ErosionStats:
    """Erode random even anyon sets confined to an inf-ball of radius W/2 on an otherwise clean lattice."""
    init = MessageInit(init)
    L = 8 * W
    g = Geometry(dim, L)
    params = DecoderParams(v=v, m_max=L // 2, rule=rule)
    center = np.full(dim, L // 2)
    half = W // 2
    offs = np.array(np.meshgrid(*[np.arange(-half, half + 1)] * dim, indexing="ij")).reshape(dim, -1).T
    max_pairs = max(1, min(W, len(offs) // 2)) if max_pairs is None else max_pairs
    radius = W / 2 if init is MessageInit.TRIVIAL else containment_factor(v) * W / 2
    bound = erosion_bound_trivial(v) if init is MessageInit.TRIVIAL else erosion_bound_random(v)
    t_budget = int(math.ceil(4 * bound * W)) + 8
    coords = g.tables.coords
    times = []
    timeouts = violations = 0
    for t in range(trials):
        rng = stream(seed, t, "erosion")
        k = int(rng.integers(1, max_pairs + 1))
        pick = offs[rng.choice(len(offs), size=2 * k, replace=False)] + center
        links: list[int] = []
        for a, b in zip(pick[0::2], pick[1::2]):
            links.extend(_path_links(g, a, b))
        noise = NoiseRealization.from_links(g, links)
        state = DecoderState.from_noise(noise, params, seed=seed, trial=t)
        if init is MessageInit.RANDOM:
            state.messages[:] = rng.integers(0, W + 1, size=state.messages.shape, dtype=np.int32)
        steps = None
        for step in range(t_budget + 1):
            sites = np.flatnonzero(state.syndrome)
            if not in_containment(coords[sites] - center, radius).all():
                violations += 1
                if raise_on_violation:
                    raise ViolationDetected(f"anyon left the containment region (trial {t}, step {step})")
                break
            if len(sites) == 0:
                steps = step
                break
            decoder_step(state)
        else:
            timeouts += 1
        if steps is not None:
            times.append(steps)
    times = np.array(times) if times else np.zeros(1, int)
    return ErosionStats(W, v, init.value, dim, trials, int(times.max()), float(times.mean()), bound,
                        timeouts, violations)


# -- fractal inputs ----------------------------------------------------------------


@dataclass
class GerrymanderResult:
    L: int
    flipped_all: bool
    t_dec: int | None


def gerrymander_check(n: int, v: int, L_list, k: int | None = None, trivial: bool = False) -> list[GerrymanderResult]:
    """Decode the fractal pattern (or the empty input) deterministically on periodic 1D chains."""
    k = n - 1 if k is None else k
    out = []
    for L in L_list:
        g = Geometry(1, L)
        noise = NoiseRealization(g, np.zeros(g.n_links, np.uint8)) if trivial else fractal_pattern(n, k, L, g)
        state = DecoderState.from_noise(noise, DecoderParams(v=v))
        t = run_until_clean(state)
        done = t is not TIMEOUT
        out.append(GerrymanderResult(L, bool(done and state.frame.all()), int(t) if done else None))
    return out


# -- slowdown -----------------------------------------------------------------------


@dataclass
class SlowdownStats:
    times: np.ndarray
    min_ratio: np.ndarray  # (trials, n_times)
    max_ratio: np.ndarray
    mu: float

    def quantiles(self, qs=(0.1, 0.5, 0.9)) -> dict:
        return {
            "min": np.quantile(self.min_ratio, qs, axis=0),
            "max": np.quantile(self.max_ratio, qs, axis=0),
        }

    def limit_estimate(self, last_fraction: float = 0.1) -> float:
        """Mean of t_sim_min(t)/t over the last stretch of sample times."""
        cut = self.times >= self.times[-1] * (1 - last_fraction) - 1e-12
        return float(self.min_ratio[:, cut].mean())

    def tail_probability(self, gamma: float) -> np.ndarray:
        return (self.min_ratio < gamma).mean(axis=0)


def slowdown_stats(L: int, times, trials: int = 20, dim: int = 1, v: int = 3, mu: float = 1.0,
                   seed: int = 0, noise: NoiseSpec | None = None) -> SlowdownStats:
    """Normalized min/max simulation times of marching-soldiers runs, in ticks per unit time."""
    times = np.asarray(sorted(float(t) for t in times))
    g = Geometry(dim, L)
    spec = NoiseSpec.iid(0.0) if noise is None else noise
    t_end = float(times[-1])
    n_steps = int((3 * t_end / mu + 100) // (v + 1)) + 1
    mins = np.empty((trials, len(times)))
    maxs = np.empty((trials, len(times)))
    for i in range(trials):
        nz = sample(spec, g, stream(seed, i, "noise"))
        st = DecoderState.from_noise(nz, DecoderParams(v=v), seed=seed, trial=i)
        res = run_marching(st, n_steps, mu, seed, i, wall_limit=t_end, stop_when_clean=False,
                           sample_times=times)
        mins[i] = res.sample_min / times
        maxs[i] = res.sample_max / times
    return SlowdownStats(times, mins, maxs, mu)


# -- fits ---------------------------------------------------------------------------


def linear_fit(x, y) -> tuple[float, float, float]:
    """Least squares ``y = a x + b``; returns (a, b, R^2)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(a), float(b), r2


def log_fit(L, t) -> tuple[float, float, float]:
    """Fit ``t = A log L + B``; returns (A, B, R^2)."""
    return linear_fit(np.log(np.asarray(L, float)), t)


# -- output -------------------------------------------------------------------------

CSV_COLUMNS = ["p", "L", "trials", "p_log", "p_log_stderr", "t_dec_mean", "t_dec_stderr", "timeouts"]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def campaign_csv(cells: list[ScanCell], header: dict) -> str:
    """CSV text: a timestamp line, a provenance line, then the column header and rows."""
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines = [f"# generated {stamp}", "# " + " ".join(f"{k}={v}" for k, v in header.items()),
             ",".join(CSV_COLUMNS)]
    for c in sorted(cells, key=lambda c: (c.L, c.p)):
        s = c.stats
        row = [c.p, c.L, s.trials, s.p_log, s.p_log_stderr, s.t_dec_mean, s.t_dec_stderr, s.timeouts]
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def csv_body(text: str) -> str:
    """Drop the timestamp line so two runs can be compared byte for byte."""
    return "".join(text.splitlines(keepends=True)[1:])


def write_text(path, text: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def write_manifest(path, config: dict, seed: int, extra: dict | None = None):
    doc = {"config": config, "config_hash": config_hash(config), "seed": seed}
    if extra:
        doc.update(extra)
    write_text(path, json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, enum.Enum):
        return o.value
    raise TypeError(f"not serializable: {type(o).__name__}")
