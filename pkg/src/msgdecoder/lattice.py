"""Hypercubic lattice geometry, distances and the index tables used by the kernels.

Sites are numbered row-major with axis 0 varying slowest.  Link ``site * D + a``
is the edge from ``site`` to ``site + e_a``.  Under ``OPEN_ROUGH`` boundaries
axis 0 is open: the edge leaving the last layer (``r[0] == L-1``) in the +e_0
direction is a dangling link into the rough boundary, and a second block of
``L**(D-1)`` dangling links hangs off the first layer (``r[0] == 0``) in the
-e_0 direction.  The remaining axes stay periodic.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    OPEN_ROUGH = "open"


class Norm(enum.Enum):
    ONE = "one"
    INF = "inf"


@dataclass(frozen=True)
class Geometry:
    dim: int
    length: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.length < 2:
            raise ValueError(f"length must be >= 2, got {self.length}")
        if not isinstance(self.boundary, Boundary):
            object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def n_sites(self) -> int:
        return self.length**self.dim

    @property
    def n_links(self) -> int:
        n = self.dim * self.n_sites
        if not self.periodic:
            n += self.length ** (self.dim - 1)
        return n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.length,) * self.dim

    # -- site/link addressing -------------------------------------------------

    def site_index(self, coord) -> int:
        coord = tuple(int(c) for c in coord)
        if len(coord) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {coord}")
        if self.periodic:
            coord = tuple(c % self.length for c in coord)
        elif any(not 0 <= c < self.length for c in coord):
            raise ValueError(f"site {coord} outside the lattice")
        else:
            coord = (coord[0],) + tuple(c % self.length for c in coord[1:])
        return int(np.ravel_multi_index(coord, self.shape))

    def site_coord(self, index: int) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(int(index), self.shape))

    def link_index(self, site, axis: int) -> int:
        """Index of the link from ``site`` along +e_axis."""
        s = site if isinstance(site, (int, np.integer)) else self.site_index(site)
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range")
        return int(s) * self.dim + axis

    def left_dangling_link(self, site) -> int:
        """Dangling link hanging off a first-layer site under open boundaries."""
        if self.periodic:
            raise ValueError("dangling links exist only under open boundaries")
        coord = self.site_coord(site) if isinstance(site, (int, np.integer)) else tuple(site)
        if coord[0] != 0:
            raise ValueError("left dangling links attach to sites with r[0] == 0")
        transverse = int(np.ravel_multi_index(coord[1:], self.shape[1:])) if self.dim > 1 else 0
        return self.dim * self.n_sites + transverse

    def link_endpoints(self, link: int) -> tuple[int, int]:
        """The two endpoint sites of a link; -1 marks the rough boundary."""
        return tuple(int(x) for x in self.tables.link_ends[link])

    def link_midpoints(self, links) -> np.ndarray:
        """Real-valued midpoints of links, shape (n, D)."""
        links = np.asarray(links, dtype=np.int64)
        return self.tables.link_mid[links]

    # -- metric -----------------------------------------------------------------

    def displacement(self, a, b) -> np.ndarray:
        d = np.asarray(b, dtype=np.int64) - np.asarray(a, dtype=np.int64)
        L = self.length
        wrap = (d + L // 2) % L - L // 2
        if self.periodic:
            return np.abs(wrap)
        out = np.abs(wrap)
        out[..., 0] = np.abs(d[..., 0])
        return out

    def distance(self, a, b, norm: Norm = Norm.INF) -> int:
        d = self.displacement(a, b)
        return int(d.max()) if Norm(norm) is Norm.INF else int(d.sum())

    def ball(self, center, radius: int, norm: Norm = Norm.INF) -> set[tuple[int, ...]]:
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        norm = Norm(norm)
        center = tuple(int(c) for c in center)
        r = min(radius, self.length)
        out = set()
        for off in itertools.product(range(-r, r + 1), repeat=self.dim):
            size = max(map(abs, off)) if norm is Norm.INF else sum(map(abs, off))
            if size > radius:
                continue
            c = tuple(x + o for x, o in zip(center, off))
            if not self.periodic and not 0 <= c[0] < self.length:
                continue
            out.add(tuple(x % self.length for x in c))
        return out

    def cone_slab(self, site, axis: int) -> set[tuple[int, ...]]:
        """Unit inf-ball around ``site`` restricted to the hyperplane normal to ``axis``."""
        site = tuple(int(c) for c in site)
        if not self.periodic and not 0 <= site[0] < self.length:
            return set()
        out = set()
        for off in itertools.product((-1, 0, 1), repeat=self.dim):
            if off[axis] != 0:
                continue
            c = tuple(x + o for x, o in zip(site, off))
            if not self.periodic and not 0 <= c[0] < self.length:
                continue
            out.add(tuple(x % self.length for x in c))
        return out

    @cached_property
    def tables(self) -> "IndexTables":
        return IndexTables.build(self)

    def __getstate__(self):
        return {"dim": self.dim, "length": self.length, "boundary": self.boundary}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)


def direction(axis: int, sign: int) -> int:
    """Direction code used by the kernels: 2*axis for +e_axis, 2*axis+1 for -e_axis."""
    return 2 * axis + (0 if sign > 0 else 1)


@dataclass(frozen=True)
class IndexTables:
    """Flat lookup tables consumed by the compiled kernels.

    ``step[r, j]``      neighbor of r in direction j, -1 if it leaves an open face.
    ``move_link[r, j]`` link crossed when moving from r in direction j, -1 if none.
    ``slab[r, k]``      sites of the slab feeding message type k at r, -1 padded.
    ``source[r, k]``    1 if the slab center lies in the rough boundary (message source).
    ``link_ends[l]``    endpoints of link l, -1 for the boundary side.
    ``ball(k)``         sites of the inf-ball of radius k minus the center, -1 padded.
    """

    dim: int
    length: int
    periodic: bool
    coords: np.ndarray
    step: np.ndarray
    move_link: np.ndarray
    slab: np.ndarray
    source: np.ndarray
    link_ends: np.ndarray
    link_mid: np.ndarray
    _balls: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def build(cls, g: Geometry) -> "IndexTables":
        D, L, N = g.dim, g.length, g.n_sites
        coords = np.stack(np.unravel_index(np.arange(N), g.shape), axis=1).astype(np.int64)

        def shifted(offset):
            c = coords + np.asarray(offset, dtype=np.int64)
            inside = np.ones(N, dtype=bool)
            if not g.periodic:
                inside = (c[:, 0] >= 0) & (c[:, 0] < L)
            c = c % L
            idx = np.ravel_multi_index(c.T, g.shape)
            return np.where(inside, idx, -1).astype(np.int64)

        units = np.eye(D, dtype=np.int64)
        step = np.empty((N, 2 * D), dtype=np.int64)
        move_link = np.empty((N, 2 * D), dtype=np.int64)
        for a in range(D):
            fwd, back = shifted(units[a]), shifted(-units[a])
            step[:, 2 * a], step[:, 2 * a + 1] = fwd, back
            move_link[:, 2 * a] = np.arange(N) * D + a
            move_link[:, 2 * a + 1] = np.where(back >= 0, back * D + a, -1)
        if not g.periodic:
            first = np.flatnonzero(coords[:, 0] == 0)
            transverse = (
                np.ravel_multi_index(coords[first, 1:].T, g.shape[1:]) if D > 1 else np.zeros(len(first), np.int64)
            )
            move_link[first, 1] = D * N + transverse

        n_slab = 3 ** (D - 1)
        slab = np.full((N, 2 * D, n_slab), -1, dtype=np.int64)
        source = np.zeros((N, 2 * D), dtype=np.uint8)
        for a in range(D):
            transverse_offsets = [
                off for off in itertools.product((-1, 0, 1), repeat=D) if off[a] == 0
            ]
            for s_code, sign in ((0, 1), (1, -1)):
                k = 2 * a + s_code
                # message type (sign, a) at r reads the slab centered at r - sign*e_a
                center = coords - sign * units[a]
                center_out = (~g.periodic) & ((center[:, 0] < 0) | (center[:, 0] >= L))
                if not g.periodic:
                    source[:, k] = center_out.astype(np.uint8)
                for i, off in enumerate(transverse_offsets):
                    idx = shifted(np.asarray(off) - sign * units[a])
                    if not g.periodic:
                        idx = np.where(center_out, -1, idx)
                    slab[:, k, i] = idx
                if L > 2 and g.periodic:
                    continue
                # pack valid entries first (open faces leave holes) and drop
                # repeats on tiny periodic lattices
                for r in range(N):
                    row = slab[r, k]
                    seen = []
                    for x in row:
                        if x >= 0 and x not in seen:
                            seen.append(x)
                    row[:] = -1
                    row[: len(seen)] = seen

        n_links = g.n_links
        link_ends = np.full((n_links, 2), -1, dtype=np.int64)
        link_mid = np.zeros((n_links, D), dtype=np.float64)
        for a in range(D):
            links = np.arange(N) * D + a
            link_ends[links, 0] = np.arange(N)
            link_ends[links, 1] = step[:, 2 * a]
            link_mid[links] = coords + 0.5 * units[a]
        if not g.periodic:
            first = np.flatnonzero(coords[:, 0] == 0)
            dangling = move_link[first, 1]
            link_ends[dangling, 0] = first
            link_mid[dangling] = coords[first] - 0.5 * units[0]

        return cls(
            dim=D,
            length=L,
            periodic=g.periodic,
            coords=coords,
            step=step,
            move_link=move_link,
            slab=slab,
            source=source,
            link_ends=link_ends,
            link_mid=link_mid,
        )

    def ball(self, radius: int) -> np.ndarray:
        if radius in self._balls:
            return self._balls[radius]
        D, L = self.dim, self.length
        N = len(self.coords)
        shape = (L,) * D
        offs = [off for off in itertools.product(range(-radius, radius + 1), repeat=D) if any(off)]
        out = np.full((N, len(offs)), -1, dtype=np.int64)
        cols = []
        for off in offs:
            c = self.coords + np.asarray(off, dtype=np.int64)
            inside = np.ones(N, dtype=bool) if self.periodic else (c[:, 0] >= 0) & (c[:, 0] < L)
            idx = np.ravel_multi_index((c % L).T, shape)
            cols.append(np.where(inside, idx, -1))
        raw = np.stack(cols, axis=1)
        for r in range(N):
            row = [x for x in dict.fromkeys(raw[r].tolist()) if x >= 0 and x != r]
            out[r, : len(row)] = row
        self._balls[radius] = out
        return out
