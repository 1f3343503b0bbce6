"""X-noise samplers: i.i.d., locally correlated, fractal (gerrymandered) and explicit patterns."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .lattice import Geometry


class NoiseKind(enum.Enum):
    IID = "iid"
    LOCAL_CORRELATED = "local"
    FRACTAL_CHANNEL = "fractal"
    BLOCK_FRACTAL = "block_fractal"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind
    p: float = 0.0
    corr_len: int = 1
    n: int = 2
    beta: float = 1.0
    links: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.kind, NoiseKind):
            object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {self.p}")
        if self.corr_len < 1:
            raise ValueError("corr_len must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @classmethod
    def iid(cls, p: float) -> "NoiseSpec":
        return cls(NoiseKind.IID, p=p)

    @classmethod
    def local(cls, p: float, corr_len: int) -> "NoiseSpec":
        return cls(NoiseKind.LOCAL_CORRELATED, p=p, corr_len=corr_len)

    @classmethod
    def fractal(cls, p: float, n: int) -> "NoiseSpec":
        return cls(NoiseKind.FRACTAL_CHANNEL, p=p, n=n)

    @classmethod
    def block_fractal(cls, p: float, n: int, beta: float) -> "NoiseSpec":
        return cls(NoiseKind.BLOCK_FRACTAL, p=p, n=n, beta=beta)

    @classmethod
    def explicit(cls, links) -> "NoiseSpec":
        return cls(NoiseKind.EXPLICIT, links=tuple(int(x) for x in links))

    @property
    def reference_model(self) -> bool:
        """False for the locally correlated stand-in, which is our own construction."""
        return self.kind is not NoiseKind.LOCAL_CORRELATED

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "p": self.p}
        if self.kind is NoiseKind.LOCAL_CORRELATED:
            d["corr_len"] = self.corr_len
        if self.kind in (NoiseKind.FRACTAL_CHANNEL, NoiseKind.BLOCK_FRACTAL):
            d["n"] = self.n
        if self.kind is NoiseKind.BLOCK_FRACTAL:
            d["beta"] = self.beta
        if self.kind is NoiseKind.EXPLICIT:
            d["links"] = list(self.links)
        d["reference_model"] = self.reference_model
        return d


@dataclass(frozen=True, eq=False)
class NoiseRealization:
    geometry: Geometry
    flipped: np.ndarray

    def __post_init__(self):
        f = np.ascontiguousarray(self.flipped, dtype=np.uint8)
        if f.shape != (self.geometry.n_links,):
            raise ValueError(f"expected {self.geometry.n_links} link bits, got shape {f.shape}")
        object.__setattr__(self, "flipped", f)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.flipped)

    def __len__(self):
        return int(self.flipped.sum())

    def __eq__(self, other):
        return (
            isinstance(other, NoiseRealization)
            and self.geometry == other.geometry
            and np.array_equal(self.flipped, other.flipped)
        )

    @classmethod
    def from_links(cls, g: Geometry, links) -> "NoiseRealization":
        bits = np.zeros(g.n_links, dtype=np.uint8)
        links = np.asarray(list(links), dtype=np.int64)
        if links.size and (links.min() < 0 or links.max() >= g.n_links):
            raise ValueError("link index out of range")
        bits[links] ^= 1
        return cls(g, bits)


# -- fractal construction --------------------------------------------------------


def power_exponent(L: int, n: int) -> int:
    """m with n**m == L, or ValueError."""
    m, x = 0, 1
    while x < L:
        x *= n
        m += 1
    if x != L or m < 1:
        raise ValueError(f"L={L} is not a positive power of n={n}")
    return m


def fractal_bits(n: int, k: int, L: int) -> np.ndarray:
    """Bit string of the substitution X -> X^k 1^(n-k) iterated log_n(L) times."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    m = power_exponent(L, n)
    pat = np.ones(1, dtype=np.uint8)
    for _ in range(m):
        pat = np.concatenate([np.tile(pat, k), np.zeros((n - k) * pat.size, dtype=np.uint8)])
    return pat


def fractal_pattern(n: int, k: int, L: int, g: Geometry | None = None) -> NoiseRealization:
    g = Geometry(1, L) if g is None else g
    if g.dim != 1:
        raise ValueError("fractal patterns are one-dimensional")
    bits = fractal_bits(n, k, L)
    if g.length != L:
        raise ValueError("geometry length must equal L")
    out = np.zeros(g.n_links, dtype=np.uint8)
    out[:L] = bits
    return NoiseRealization(g, out)


def fractal_probability(p: float, n: int, size: int) -> float:
    return p ** ((n - 1) ** power_exponent(size, n))


def block_size(L: int, n: int, beta: float) -> int:
    """Largest power of n not exceeding (log2 L)**beta (at least n)."""
    target = math.log2(L) ** beta
    r = n
    while r * n <= target + 1e-9:
        r *= n
    return r


def sample_fractal_channel(p: float, n: int, g: Geometry, rng: np.random.Generator) -> NoiseRealization:
    if g.dim != 1:
        raise ValueError("the fractal channel is one-dimensional")
    peff = fractal_probability(p, n, g.length)
    if rng.random() < peff:
        return fractal_pattern(n, n - 1, g.length, g)
    return NoiseRealization(g, np.zeros(g.n_links, dtype=np.uint8))


def sample_block_fractal(p: float, n: int, beta: float, g: Geometry, rng: np.random.Generator) -> NoiseRealization:
    if g.dim != 1:
        raise ValueError("block fractal noise is one-dimensional")
    r = min(block_size(g.length, n, beta), g.length)
    pat = fractal_bits(n, n - 1, r)
    prob = fractal_probability(p, n, r)
    out = np.zeros(g.n_links, dtype=np.uint8)
    n_blocks = g.length // r
    hits = rng.random(n_blocks) < prob
    for b in np.flatnonzero(hits):
        out[b * r : (b + 1) * r] = pat
    return NoiseRealization(g, out)


# -- local samplers --------------------------------------------------------------


def sample_iid(p: float, g: Geometry, rng: np.random.Generator) -> NoiseRealization:
    return NoiseRealization(g, (rng.random(g.n_links) < p).astype(np.uint8))


def sample_local_correlated(p: float, corr_len: int, g: Geometry, rng: np.random.Generator) -> NoiseRealization:
    """Seeds at rate p/corr_len, each grown into a straight run of corr_len links along its own axis."""
    if corr_len < 1:
        raise ValueError("corr_len must be >= 1")
    seeds = rng.random(g.n_links) < p / corr_len
    if corr_len == 1:
        return NoiseRealization(g, seeds.astype(np.uint8))
    out = seeds.copy()
    t = g.tables
    D, N = g.dim, g.n_sites
    for l in np.flatnonzero(seeds):
        if l >= D * N:
            # left dangling link: continue into the lattice along +e_0
            site, a = int(t.link_ends[l, 0]), 0
            out_run = [site * D]
        else:
            site, a = divmod(int(l), D)
            site = int(t.step[site, 2 * a])
            out_run = []
        for _ in range(corr_len - 1 - len(out_run)):
            if site < 0:
                break
            out_run.append(site * D + a)
            site = int(t.step[site, 2 * a])
        out[out_run] = True
    return NoiseRealization(g, out.astype(np.uint8))


def sample(spec: NoiseSpec, g: Geometry, rng: np.random.Generator) -> NoiseRealization:
    kind = spec.kind
    if kind is NoiseKind.IID:
        return sample_iid(spec.p, g, rng)
    if kind is NoiseKind.LOCAL_CORRELATED:
        return sample_local_correlated(spec.p, spec.corr_len, g, rng)
    if kind is NoiseKind.FRACTAL_CHANNEL:
        return sample_fractal_channel(spec.p, spec.n, g, rng)
    if kind is NoiseKind.BLOCK_FRACTAL:
        return sample_block_fractal(spec.p, spec.n, spec.beta, g, rng)
    return NoiseRealization.from_links(g, spec.links)


def sample_iid_batch(p: float, g: Geometry, trials: int, rng: np.random.Generator) -> np.ndarray:
    """(trials, n_links) uint8 flips; used by campaigns that decode in bulk."""
    return (rng.random((trials, g.n_links)) < p).astype(np.uint8)


def load_pattern(path) -> list[int]:
    """Link indices from a text file: whitespace or comma separated, '#' comments."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].replace(",", " ")
        out.extend(int(tok) for tok in line.split())
    return out
