"""Combinatorial patches of the singular-flat triangle complex H_n.

H_n pastes n unit equilateral Euclidean triangles around every vertex
(n = 6 is the flat plane, n >= 7 negatively curved cone surfaces).  The
patch is grown level by level as a planar triangulated disc carrying the
full rotation system, which is all the tree-embedding certificate needs:
consecutive image edges around a vertex must be at least three rotational
steps apart, i.e. subtend angle >= pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .treegeom import TreeBall, build_ball

__all__ = [
    "FlatComplex",
    "EmbeddingMap",
    "build_flat_patch",
    "embed_tree",
    "check_angle_certificate",
    "export_embedding",
]

MAX_DEPTH = 6
MIN_GAP = 3  # ring positions between image edges; 3 steps = angle pi


class FlatComplex:
    """Triangulated disc with n triangles around every completed vertex.

    ring[v] lists the neighbors of v in counterclockwise rotational
    order; consecutive ring entries a, b always span a triangle (v,a,b),
    and the ring of a completed (interior) vertex is the full n-cycle.
    """

    def __init__(self, n: int, depth: int):
        if n < 6:
            raise ValueError("need n >= 6 triangles per vertex")
        if not 0 <= depth <= MAX_DEPTH:
            raise ValueError(f"depth must lie in [0, {MAX_DEPTH}]")
        self.n = n
        self.depth = depth
        self.ring: list[list[int]] = [[]]
        self.level: list[int] = [0]
        self.complete: list[bool] = [False]
        self.triangles: list[tuple[int, int, int]] = []

        # base star: n spokes and n triangles around vertex 0
        spokes = []
        for i in range(n):
            spokes.append(self._new_vertex(1))
        self.ring[0] = spokes[:]
        for i in range(n):
            self.triangles.append((0, spokes[i], spokes[(i + 1) % n]))
        for i in range(n):
            nxt, prv = spokes[(i + 1) % n], spokes[(i - 1) % n]
            self.ring[spokes[i]] = [nxt, 0, prv]
        self.complete[0] = True
        self._boundary = spokes[:]

        for target in range(1, depth + 1):
            self._complete_level(target)

    def _new_vertex(self, level: int) -> int:
        self.ring.append([])
        self.level.append(level)
        self.complete.append(False)
        return len(self.ring) - 1

    def _complete_level(self, target: int) -> None:
        while True:
            pos = next(
                (i for i, v in enumerate(self._boundary) if self.level[v] <= target),
                None,
            )
            if pos is None:
                return
            self._complete_vertex(pos)

    def _complete_vertex(self, pos: int) -> None:
        v = self._boundary[pos]
        b_next = self.ring[v][0]
        b_prev = self.ring[v][-1]
        have = len(self.ring[v]) - 1
        k = self.n - have
        if k < 1:
            raise RuntimeError(f"vertex {v} already carries {have} triangles")

        fresh = [self._new_vertex(self.level[v] + 1) for _ in range(k - 1)]
        chain = [b_prev] + fresh + [b_next]
        for a, b in zip(chain, chain[1:]):
            self.triangles.append((v, a, b))
        self.ring[v].extend(fresh)
        self.complete[v] = True

        if fresh:
            self.ring[b_prev].insert(0, fresh[0])
            self.ring[b_next].append(fresh[-1])
            for i, w in enumerate(fresh):
                nxt = fresh[i + 1] if i + 1 < len(fresh) else b_next
                prv = fresh[i - 1] if i > 0 else b_prev
                self.ring[w] = [nxt, v, prv]
        else:
            # single closing triangle joins the two boundary neighbors
            self.ring[b_prev].insert(0, b_next)
            self.ring[b_next].append(b_prev)

        self._boundary[pos : pos + 1] = fresh

    @property
    def n_vertices(self) -> int:
        return len(self.ring)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if self.complete[v]]

    def edge_count(self) -> int:
        return sum(len(r) for r in self.ring) // 2

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.edge_count() + self.n_triangles


def build_flat_patch(n: int, depth: int) -> FlatComplex:
    """Patch of H_n whose vertices within depth steps have full valence."""
    return FlatComplex(n, depth)


@dataclass(frozen=True)
class EmbeddingMap:
    tree: TreeBall
    complex: FlatComplex
    vertex_map: dict[int, int]

    def image_edges(self) -> list[tuple[int, int]]:
        out = []
        for v, w in self.vertex_map.items():
            p = self.tree.base_parent[v]
            if p is not None and p in self.vertex_map:
                out.append((self.vertex_map[p], w))
        return out


def embed_tree(q: int, n: int, depth: int) -> EmbeddingMap:
    """Orientation-respecting embedding of the radius-depth ball of T_q.

    Around every image vertex the q (or q-1 plus incoming) image edges
    are spread three rotational steps apart, which needs q <= floor(n/3).
    """
    if q > n // 3:
        raise ValueError(f"q = {q} exceeds floor(n/3) = {n // 3}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    tree = build_ball(q, depth, depth + 1)
    patch = build_flat_patch(n, depth)

    vertex_map: dict[int, int] = {0: 0}
    incoming: dict[int, int] = {}  # tree vertex -> image of its base-parent
    used = {0}
    # base vertex: q branches at positions 0, 3, ..., 3(q-1)
    branches = tree.away_neighbors(0)
    queue = []
    for j, child in enumerate(branches):
        w = patch.ring[0][(MIN_GAP * j) % n]
        vertex_map[child] = w
        incoming[child] = 0
        used.add(w)
        queue.append(child)

    while queue:
        v = queue.pop(0)
        if tree.dist0[v] >= depth:
            continue
        w = vertex_map[v]
        ring = patch.ring[w]
        if not patch.complete[w]:
            raise RuntimeError(f"image vertex {w} lacks a full rotation ring")
        idx = ring.index(incoming[v])
        for j, child in enumerate(tree.away_neighbors(v), start=1):
            target = ring[(idx + MIN_GAP * j) % n]
            if target in used:
                raise RuntimeError(f"embedding collision at complex vertex {target}")
            vertex_map[child] = target
            incoming[child] = w
            used.add(target)
            queue.append(child)

    # restrict to the ball: drop the spine extension beyond the radius
    vertex_map = {v: w for v, w in vertex_map.items() if tree.dist0[v] <= depth}
    return EmbeddingMap(tree, patch, vertex_map)


def check_angle_certificate(emb: EmbeddingMap) -> tuple[bool, Optional[int]]:
    """Local-geodesy certificate: image edges >= 3 ring steps apart.

    Returns (True, None) when every image vertex passes, otherwise
    (False, witness tree vertex).
    """
    patch = emb.complex
    for v, w in emb.vertex_map.items():
        nbrs = [u for u in emb.tree.adj[v] if u in emb.vertex_map]
        images = [emb.vertex_map[u] for u in nbrs]
        if len(images) < 2:
            continue
        ring = patch.ring[w]
        try:
            positions = sorted(ring.index(img) for img in images)
        except ValueError:
            return False, v  # some image edge is not a complex edge
        if patch.complete[w]:
            gaps = [
                (positions[(i + 1) % len(positions)] - positions[i]) % patch.n
                for i in range(len(positions))
            ]
        else:
            gaps = [b - a for a, b in zip(positions, positions[1:])]
        if any(gap < MIN_GAP for gap in gaps):
            return False, v
    return True, None


def export_embedding(emb: EmbeddingMap, path) -> None:
    """One `treeId complexId` line per mapped vertex."""
    with open(path, "w") as fh:
        for v in sorted(emb.vertex_map):
            fh.write(f"{v} {emb.vertex_map[v]}\n")
