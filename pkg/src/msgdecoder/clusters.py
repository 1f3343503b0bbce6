"""Hierarchical clustering of noise into buffered clusters and isolated-point level sets.

Noise points are link midpoints.  A (W, B)-cluster is the set of points inside
a closed norm ball of radius W/2 whose shell ``W/2 < d < W/2 + B`` around the
same center holds no noise point; the members are then at distance >= B from
every other point.  Candidate centers are every noise point plus the enclosing
ball centers of linked components, and each candidate is verified against the
definition, so nothing is ever reported as a cluster that is not one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .lattice import Geometry, Norm
from .noise import NoiseRealization, NoiseSpec, sample
from .rng import stream

_EPS = 1e-9


@dataclass(frozen=True)
class ClusterParams:
    w0: float
    b0: float
    n: int
    norm: Norm = Norm.INF

    def __post_init__(self):
        if self.w0 <= 0 or self.b0 <= 0:
            raise ValueError("w0 and b0 must be positive")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not isinstance(self.norm, Norm):
            object.__setattr__(self, "norm", Norm(self.norm))

    def width(self, k: int) -> float:
        return self.w0 * self.n**k

    def buffer(self, k: int) -> float:
        return self.b0 * self.n**k

    def k_max(self, L: int) -> int:
        ratio = L / (self.w0 + 2 * self.b0)
        if ratio < 1:
            return 0
        # floor(log_n ratio) without float round-off at exact powers
        k = int(math.floor(math.log(ratio, self.n) + 1e-12))
        while self.n ** (k + 1) <= ratio:
            k += 1
        while k > 0 and self.n**k > ratio:
            k -= 1
        return k

    @property
    def threshold_regime(self) -> bool:
        """True when 0 < w0 < b0 < (n - 3)/4 * w0."""
        return 0 < self.w0 < self.b0 < (self.n - 3) / 4 * self.w0

    @classmethod
    def matched(cls, beta: float, gamma: float, n: int) -> "ClusterParams":
        """Cluster scales paired with the isolation scales (beta n^k, gamma n^(k+1))."""
        return cls(w0=2 * beta, b0=gamma * n - beta, n=n)


@dataclass
class Cluster:
    members: np.ndarray  # indices into the point array
    center: np.ndarray
    radius: float


@dataclass
class Level:
    k: int
    width: float
    buffer: float
    survivors: np.ndarray  # point indices in N_k
    clusters: list[Cluster] = field(default_factory=list)

    def report(self) -> dict:
        return {
            "k": self.k,
            "w_k": self.width,
            "b_k": self.buffer,
            "n_clusters": len(self.clusters),
            "survivor_count": int(len(self.survivors)),
        }


@dataclass
class Hierarchy:
    geometry: Geometry
    params: ClusterParams
    points: np.ndarray
    levels: list[Level]

    def report(self) -> list[dict]:
        return [lvl.report() for lvl in self.levels]


# -- geometry helpers ------------------------------------------------------------


class PointSet:
    """Noise points with a periodic-aware KD-tree."""

    def __init__(self, g: Geometry, points: np.ndarray, norm: Norm):
        self.g = g
        self.points = np.asarray(points, dtype=np.float64).reshape(-1, g.dim)
        self.norm = Norm(norm)
        self.p = np.inf if self.norm is Norm.INF else 1
        L = g.length
        box = np.full(g.dim, float(L))
        if not g.periodic:
            box[0] = 4.0 * L  # no wrap along the open axis
        self.box = box
        self.shift = 0.5
        self.tree = cKDTree(self._wrapped(self.points), boxsize=box) if len(self.points) else None

    def _wrapped(self, x):
        return np.mod(np.asarray(x, dtype=np.float64) + self.shift, self.box)

    def diff(self, a, b):
        d = np.asarray(b, dtype=np.float64) - np.asarray(a, dtype=np.float64)
        L = self.g.length
        wrapped = d - L * np.round(d / L)
        if not self.g.periodic:
            wrapped[..., 0] = d[..., 0]
        return wrapped

    def dist(self, a, b):
        d = np.abs(self.diff(a, b))
        return d.max(axis=-1) if self.norm is Norm.INF else d.sum(axis=-1)

    def within(self, center, radius: float) -> np.ndarray:
        """Indices of points at distance <= radius."""
        if self.tree is None or radius < 0:
            return np.zeros(0, np.int64)
        return np.asarray(self.tree.query_ball_point(self._wrapped(center), radius, p=self.p), np.int64)

    def pairs(self, radius: float) -> np.ndarray:
        if self.tree is None:
            return np.zeros((0, 2), np.int64)
        return self.tree.query_pairs(radius, p=self.p, output_type="ndarray")

    def unwrap(self, idx: np.ndarray) -> np.ndarray:
        """Coordinates of a small point group made contiguous relative to its first point."""
        base = self.points[idx[0]]
        return base + self.diff(base, self.points[idx])


def enclosing_ball(coords: np.ndarray, norm: Norm) -> tuple[np.ndarray, float]:
    """Minimal enclosing ball (center, radius) of a contiguous point group."""
    coords = np.asarray(coords, dtype=np.float64)
    if Norm(norm) is Norm.INF:
        lo, hi = coords.min(axis=0), coords.max(axis=0)
        return (lo + hi) / 2, float((hi - lo).max() / 2)
    m, D = coords.shape
    if m == 1:
        return coords[0].copy(), 0.0
    # variables: center (D), radius, slacks t[i, j] >= |x_ij - c_j|
    nv = D + 1 + m * D
    c = np.zeros(nv)
    c[D] = 1.0
    rows, rhs = [], []
    for i in range(m):
        for j in range(D):
            t = D + 1 + i * D + j
            r1 = np.zeros(nv); r1[j] = -1; r1[t] = -1; rows.append(r1); rhs.append(-coords[i, j])
            r2 = np.zeros(nv); r2[j] = 1; r2[t] = -1; rows.append(r2); rhs.append(coords[i, j])
        r3 = np.zeros(nv); r3[D] = -1
        r3[D + 1 + i * D : D + 1 + (i + 1) * D] = 1
        rows.append(r3); rhs.append(0.0)
    bounds = [(None, None)] * D + [(0, None)] + [(0, None)] * (m * D)
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"enclosing ball LP failed: {res.message}")
    return res.x[:D], float(res.x[D])


def _components(ps: PointSet, radius: float, strict: bool) -> list[np.ndarray]:
    n = len(ps.points)
    if n == 0:
        return []
    r = radius - _EPS if strict else radius + _EPS
    pr = ps.pairs(max(r, 0.0))
    graph = coo_matrix((np.ones(len(pr)), (pr[:, 0], pr[:, 1])), shape=(n, n)) if len(pr) else coo_matrix((n, n))
    n_comp, labels = connected_components(graph, directed=False)
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    return np.split(order, splits)


def _try_center(ps: PointSet, center, W: float, B: float):
    """Members of the cluster centered here, or None if the shell is not empty."""
    near = ps.within(center, W / 2 + B - _EPS)
    if len(near) == 0:
        return None
    d = ps.dist(center, ps.points[near])
    if np.any(d > W / 2 + _EPS):
        return None
    return np.sort(near)


# -- public API --------------------------------------------------------------------


def find_clusters(points, W: float, B: float, norm: Norm, g: Geometry):
    """Split points into (W, B)-clusters and unclustered points.

    Returns ``(clusters, unclustered_indices)``.  A point is clustered when it
    belongs to any valid cluster.  For ``B >= W`` the clusters are disjoint; for
    ``B < W`` they may overlap and every distinct one found is returned.
    """
    norm = Norm(norm)
    if B < W:
        warnings.warn("B < W: cluster decomposition is not unique; results are best effort",
                      stacklevel=2)
    ps = PointSet(g, points, norm)
    n = len(ps.points)
    if n == 0:
        return [], np.zeros(0, np.int64)
    candidates = [ps.points[i] for i in range(n)]
    for radius, strict in ((B, True), (W, False)):
        for comp in _components(ps, radius, strict):
            if len(comp) > 1:
                center, _ = enclosing_ball(ps.unwrap(comp), norm)
                candidates.append(center)
    owner = np.full(n, -1, np.int64)
    clusters: list[Cluster] = []
    seen = set()
    for center in candidates:
        members = _try_center(ps, center, W, B)
        if members is None:
            continue
        key = members.tobytes()
        if key in seen:
            continue
        seen.add(key)
        c, radius = enclosing_ball(ps.unwrap(members), norm)
        owner[members[owner[members] < 0]] = len(clusters)
        clusters.append(Cluster(members=members, center=np.asarray(center, float), radius=radius))
    return clusters, np.flatnonzero(owner < 0)


def build_hierarchy(noise: NoiseRealization, params: ClusterParams, k_max: int | None = None) -> Hierarchy:
    g = noise.geometry
    pts = g.link_midpoints(noise.support)
    if not params.threshold_regime:
        warnings.warn("cluster parameters outside 0 < w0 < b0 < (n-3)/4 w0", stacklevel=2)
    k_max = params.k_max(g.length) if k_max is None else k_max
    alive = np.arange(len(pts))
    levels = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for k in range(k_max + 1):
            W, B = params.width(k), params.buffer(k)
            lvl = Level(k, W, B, alive.copy())
            clusters, rest = find_clusters(pts[alive], W, B, params.norm, g)
            for cl in clusters:
                cl.members = alive[cl.members]
            lvl.clusters = clusters
            levels.append(lvl)
            alive = alive[rest]
    levels.append(Level(k_max + 1, params.width(k_max + 1), params.buffer(k_max + 1), alive.copy()))
    return Hierarchy(g, params, pts, levels)


def isolation_scales(beta: float, gamma: float, n: int, k: int) -> tuple[float, float]:
    return beta * n**k, gamma * n ** (k + 1)


def isolated_points(ps: PointSet, alive: np.ndarray, r: float, R: float) -> np.ndarray:
    """Boolean mask over ``alive``: no other alive point at distance in [r, R)."""
    if len(alive) == 0:
        return np.zeros(0, bool)
    sub = PointSet(ps.g, ps.points[alive], ps.norm)
    x = sub._wrapped(sub.points)
    below_R = sub.tree.query_ball_point(x, max(R - _EPS, 0.0), p=sub.p, return_length=True)
    below_r = sub.tree.query_ball_point(x, max(r - _EPS, 0.0), p=sub.p, return_length=True)
    if r <= 0:
        below_r = np.zeros_like(below_r)
    return (below_R - below_r) == 0


def isolated_hierarchy(noise: NoiseRealization, beta: float, gamma: float, n: int,
                       levels: int | None = None, norm: Norm = Norm.INF) -> list[np.ndarray]:
    """Point-index sets of the isolated noise levels 0..levels."""
    g = noise.geometry
    # boundary values are accepted: the standard choice (8/3, 1, 4) sits on the lower edge
    if not (2 * gamma / (1 - 1 / n) - 1e-9 <= beta < gamma * n):
        warnings.warn("(beta, gamma, n) outside 2 gamma/(1 - 1/n) < beta < gamma n", stacklevel=2)
    pts = g.link_midpoints(noise.support)
    ps = PointSet(g, pts, norm)
    if levels is None:
        levels = max(int(math.floor(math.log(max(g.length, 1) / (2 * gamma * n), n))), 0) + 1
    alive = np.arange(len(pts))
    out = [alive.copy()]
    for k in range(levels):
        r, R = isolation_scales(beta, gamma, n, k)
        iso = isolated_points(ps, alive, r, R)
        alive = alive[~iso]
        out.append(alive.copy())
    return out


@dataclass
class LevelRates:
    k: np.ndarray
    p_k: np.ndarray
    stderr: np.ndarray
    trials: int

    def to_csv(self) -> str:
        lines = ["k,p_k,stderr,trials"]
        for k, p, s in zip(self.k, self.p_k, self.stderr):
            lines.append(f"{int(k)},{float(p)!r},{float(s)!r},{self.trials}")
        return "\n".join(lines) + "\n"


def level_rates(spec: NoiseSpec, params: ClusterParams, g: Geometry, trials: int,
                seed: int = 0, k_max: int | None = None) -> LevelRates:
    """Per-link probability of surviving into N_k, averaged over links and trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k_max = params.k_max(g.length) if k_max is None else k_max
    frac = np.zeros((trials, k_max + 2))
    for t in range(trials):
        noise = sample(spec, g, stream(seed, t, "cluster"))
        h = build_hierarchy(noise, params, k_max)
        frac[t] = [len(lvl.survivors) / g.n_links for lvl in h.levels]
    mean = frac.mean(axis=0)
    err = frac.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros_like(mean)
    return LevelRates(np.arange(k_max + 2), mean, err, trials)
