"""
Refinement Search
Digraph automorphism groups by equitable colour refinement and backtracking.

Colour refinement counts, for every vertex, its out- and in-neighbours in each
colour class; the sorted distinct rows become the next colouring, so colours
are canonical and traces can be compared between branches. Backtracking follows
the first path to a discrete leaf, then for every level (deepest first) searches
the branches of vertices not yet known to share an orbit with the first path.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import TooLarge

logger = logging.getLogger(__name__)


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def absorb(self, perm: Sequence[int]):
        for u, v in enumerate(perm):
            self.union(u, int(v))


@dataclass
class SearchResult:
    """Generators found, with the group order when the search ran to completion"""
    generators: List[np.ndarray] = field(default_factory=list)
    order: Optional[int] = None
    nodes: int = 0
    complete: bool = True


class DigraphRefiner:
    """
    Automorphism search on a simple digraph given by a boolean adjacency matrix
    """

    def __init__(self, adjacency: np.ndarray, max_vertices: Optional[int] = None):
        adjacency = np.asarray(adjacency, dtype=bool)
        if max_vertices is None:
            from utils.settings import get_settings
            max_vertices = get_settings().engine.max_graph_vertices
        if adjacency.shape[0] > max_vertices:
            raise TooLarge(f"{adjacency.shape[0]} vertices exceed the engine bound {max_vertices}")
        self.adjacency = adjacency
        self.size = adjacency.shape[0]
        self.src, self.dst = np.nonzero(adjacency)
        self.nodes = 0

    # --- partitions ---

    def refine(self, colours: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
        """Coarsest equitable refinement of `colours` plus its trace"""
        N = self.size
        colours = np.asarray(colours, dtype=np.int64)
        k = int(colours.max()) + 1 if N else 0
        trace = []
        while True:
            out = np.bincount(self.src * k + colours[self.dst], minlength=N * k).reshape(N, k)
            inn = np.bincount(self.dst * k + colours[self.src], minlength=N * k).reshape(N, k)
            key = np.hstack([colours[:, None], out, inn])
            uniq, inverse = np.unique(key, axis=0, return_inverse=True)
            inverse = inverse.reshape(-1)
            trace.append(hash(uniq.tobytes()))
            if len(uniq) == k:
                return inverse, tuple(trace)
            colours, k = inverse, len(uniq)

    @staticmethod
    def individualize(colours: np.ndarray, v: int) -> np.ndarray:
        """Split v off its cell: v keeps colour c, the rest of the cell becomes c+1"""
        c = colours[v]
        out = colours.copy()
        out[colours > c] += 1
        out[colours == c] = c + 1
        out[v] = c
        return out

    @staticmethod
    def target_cell(colours: np.ndarray) -> Optional[np.ndarray]:
        """Vertices of the first non-singleton cell, or None for a discrete colouring"""
        counts = np.bincount(colours)
        big = np.flatnonzero(counts > 1)
        if not big.size:
            return None
        return np.flatnonzero(colours == big[0])

    @staticmethod
    def leaf_map(leaf: np.ndarray, other: np.ndarray) -> np.ndarray:
        """g with other[g[u]] == leaf[u]"""
        by_colour = np.argsort(other)
        return by_colour[leaf]

    def is_automorphism(self, g: np.ndarray) -> bool:
        A = self.adjacency
        return bool(np.array_equal(A[np.ix_(g, g)], A))

    # --- search ---

    def _search_subtree(self, colours: np.ndarray, depth: int, traces: List[Tuple],
                        leaf: np.ndarray) -> Optional[np.ndarray]:
        stack = [(colours, depth)]
        while stack:
            cols, d = stack.pop()
            cols, trace = self.refine(cols)
            self.nodes += 1
            if d >= len(traces) or trace != traces[d]:
                continue
            cell = self.target_cell(cols)
            if cell is None:
                g = self.leaf_map(leaf, cols)
                if self.is_automorphism(g):
                    return g
                continue
            for v in cell[::-1]:
                stack.append((self.individualize(cols, int(v)), d + 1))
        return None

    def automorphisms(self, fixed: Sequence[int] = (), stop_at_first: bool = False) -> SearchResult:
        """
        Generators and order of the pointwise stabilizer of `fixed` in Aut(digraph)

        Args:
            fixed: Vertices individualized at the root
            stop_at_first: Return as soon as one nontrivial automorphism is found

        Returns:
            SearchResult (order is None when stopped early)
        """
        self.nodes = 0
        colours = np.zeros(self.size, dtype=np.int64)
        for v in fixed:
            colours = self.individualize(self.refine(colours)[0], int(v))

        levels = []
        traces = []
        cols, trace = self.refine(colours)
        traces.append(trace)
        while True:
            self.nodes += 1
            cell = self.target_cell(cols)
            if cell is None:
                break
            v = int(cell[0])
            levels.append((cols, cell, v))
            cols, trace = self.refine(self.individualize(cols, v))
            traces.append(trace)
        leaf = cols

        result = SearchResult()
        orbits = UnionFind(self.size)
        order = 1
        for level in range(len(levels) - 1, -1, -1):
            cols, cell, v = levels[level]
            for w in cell:
                w = int(w)
                if w == v or orbits.find(w) == orbits.find(v):
                    continue
                g = self._search_subtree(self.individualize(cols, w), level + 1, traces, leaf)
                if g is None:
                    continue
                result.generators.append(g)
                orbits.absorb(g)
                if stop_at_first:
                    result.complete = False
                    result.nodes = self.nodes
                    return result
            root = orbits.find(v)
            order *= sum(1 for w in cell if orbits.find(int(w)) == root)

        result.order = order
        result.nodes = self.nodes
        logger.debug("automorphism search: order %d, %d generators, %d nodes",
                     order, len(result.generators), self.nodes)
        return result
