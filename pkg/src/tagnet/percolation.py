"""Threshold percolation over a correlation matrix.

Sweeping a filter threshold upward erodes weakly correlated links; the
connected components surviving at each step are the islands, and linking
each island to the island containing it one step earlier yields a branching
forest hung under a virtual root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .projection import CorrelationMatrix


@dataclass(frozen=True)
class FilterGrid:
    """Evenly spaced filter thresholds phi(t) = start + t * step.

    The sweep runs until every island is a singleton (or the threshold
    would leave [0, 1), whichever comes first).
    """

    start: float = 0.0
    step: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 <= self.start < 1.0:
            raise ValueError("start must lie in [0, 1)")
        if self.step <= 0.0:
            raise ValueError("step must be positive")

    def phi(self, t: int) -> float:
        return self.start + t * self.step


class UnionFind:
    """Disjoint sets over hashable keys; path compression + union by size."""

    __slots__ = ("_parent", "_size")

    def __init__(self, keys: Iterable) -> None:
        self._parent = {k: k for k in keys}
        self._size = {k: 1 for k in self._parent}

    def find(self, key):
        parent = self._parent
        root = key
        while parent[root] != root:
            root = parent[root]
        while parent[key] != root:
            parent[key], key = root, parent[key]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]


@dataclass
class Island:
    """One connected component of the filtered graph at one sweep level."""

    id: int
    level: int  # grid index; -1 for the virtual root
    phi: float | None
    members: frozenset[int]
    parent: int | None
    characteristic: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_singleton(self) -> bool:
        return len(self.members) == 1


@dataclass
class IslandTree:
    """Forest of islands across sweep levels, hung under a virtual root.

    islands[0] is the root (level -1, full member set); the rest follow in
    (level, smallest member id) order. names maps member ids to their
    external names for exporters.
    """

    family: str
    levels: list[float]
    islands: list[Island]
    names: dict[int, str]

    @property
    def root(self) -> Island:
        return self.islands[0]

    def islands_at(self, level: int) -> list[Island]:
        return [isl for isl in self.islands if isl.level == level]

    def children(self, island_id: int) -> list[Island]:
        return [isl for isl in self.islands if isl.parent == island_id]


def filter_edges(C: CorrelationMatrix, phi: float) -> set[tuple[int, int]]:
    """Undirected edges (a, b), a < b, wherever C[a][b] > phi strictly."""
    if not 0.0 <= phi < 1.0:
        raise ValueError("phi must lie in [0, 1)")
    ii, jj, vv = _edge_arrays(C)
    keep = vv > phi
    members = C.members
    edges = set()
    for i, j in zip(ii[keep].tolist(), jj[keep].tolist()):
        a, b = members[i], members[j]
        edges.add((a, b) if a < b else (b, a))
    return edges


def components(
    edges: Iterable[tuple[int, int]], members: Iterable[int]
) -> list[frozenset[int]]:
    """Connected components of the undirected graph, sorted by min member.

    Isolated members come back as singleton components. Edges must reference
    registered members only.
    """
    uf = UnionFind(members)
    for a, b in edges:
        uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for m in uf._parent:
        groups.setdefault(uf.find(m), []).append(m)
    parts = [frozenset(g) for g in groups.values()]
    parts.sort(key=min)
    return parts


def characteristic_element(island, C: CorrelationMatrix) -> int:
    """Member maximizing its summed correlation to the island, ties to the
    smallest id.

    The sum runs over all island members in ascending id order and includes
    the diagonal term.
    """
    members = island.members if isinstance(island, Island) else island
    ids = sorted(members)
    if not ids:
        raise ValueError("island is empty")
    pos = [C.index_of(m) for m in ids]
    best_id = ids[0]
    best_sum = -1.0
    for k, m in enumerate(ids):
        row = C.row_dense(pos[k])
        total = 0.0
        for p in pos:
            total += float(row[p])
        if total > best_sum:
            best_id, best_sum = m, total
    return best_id


def build_tree(C: CorrelationMatrix, grid: FilterGrid | None = None) -> IslandTree:
    """Sweep the grid over the matrix and assemble the island forest.

    Each level's islands partition the full member set (singletons
    included); an island's parent is the island one level up containing its
    members. The terminal all-singleton level is kept in the structure;
    exporters decide whether to draw it.
    """
    if C.size == 0:
        raise ValueError("cannot sweep an empty matrix")
    if grid is None:
        grid = FilterGrid()

    members = list(C.members)
    ii, jj, vv = _edge_arrays(C)

    islands: list[Island] = []
    root = Island(
        id=0,
        level=-1,
        phi=None,
        members=frozenset(members),
        parent=None,
        characteristic=characteristic_element(members, C),
    )
    islands.append(root)
    owner = {m: 0 for m in members}  # member -> island id at the previous level

    levels: list[float] = []
    t = 0
    while True:
        phi = grid.phi(t)
        if phi >= 1.0:
            break  # correlations of exactly 1 never erode within [0, 1)
        keep = vv > phi
        ii, jj, vv = ii[keep], jj[keep], vv[keep]
        parts = _position_partition(ii, jj, len(members))
        levels.append(phi)

        new_owner: dict[int, int] = {}
        member_parts = sorted(
            ([members[p] for p in part] for part in parts), key=min
        )
        for part in member_parts:
            island = Island(
                id=len(islands),
                level=t,
                phi=phi,
                members=frozenset(part),
                parent=owner[min(part)],
                characteristic=characteristic_element(part, C),
            )
            islands.append(island)
            for m in part:
                new_owner[m] = island.id
        owner = new_owner
        t += 1
        if all(len(part) == 1 for part in parts):
            break

    names = {m: C.names[k] for k, m in enumerate(members)}
    return IslandTree(C.family, levels, islands, names)


def _edge_arrays(C: CorrelationMatrix):
    """Upper-triangle (row, col, value) arrays of off-diagonal entries."""
    if C.is_dense:
        iu = np.triu_indices(C.size, 1)
        return iu[0], iu[1], C.values[iu]
    coo = sp.triu(C.values, 1).tocoo()
    return coo.row, coo.col, coo.data


def _position_partition(ii, jj, n: int) -> list[list[int]]:
    """Components over matrix positions 0..n-1 given surviving edges."""
    uf = UnionFind(range(n))
    for i, j in zip(ii.tolist(), jj.tolist()):
        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for p in range(n):
        groups.setdefault(uf.find(p), []).append(p)
    return list(groups.values())
