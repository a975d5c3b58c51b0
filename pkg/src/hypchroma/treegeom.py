"""Finite balls of the q-regular tree with a Busemann stratification.

A TreeBall materializes the radius-R ball around a base vertex x0 of T_q
together with a geodesic spine x0..xK toward a fixed end.  Rooting the
tree at that end gives every vertex one parent and q-1 children, integer
Busemann levels, and exact distances through lowest common ancestors.
All colorings, cliques and spindles for the tree chromatic problems are
built on top of this structure and verified exhaustively.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

__all__ = [
    "TreeBall",
    "TVertex",
    "build_ball",
    "busemann_level",
    "tree_distance",
    "color_odd",
    "color_even",
    "color_interval_tree",
    "clique_q",
    "moser_spindle",
    "SpindleWitness",
    "interval_clique_tree",
    "brooks_bound",
    "verify_tree_coloring",
    "TreeColoringReport",
    "export_edge_list",
    "export_coloring_csv",
]

SIZE_CAP = 10**7


def _guarded_floor(x: float) -> int:
    return math.floor(x + 1e-12 * max(1.0, abs(x)))


@dataclass(frozen=True)
class TVertex:
    id: int
    level: int


class TreeBall:
    """Ball of radius R around x0 in T_q plus the spine toward the end.

    Vertices are integer ids; the spine is ids 0..K with x0 = 0.  parent
    points one step toward the end, children away from it; children carry
    labels 0..q-2 in construction order.
    """

    def __init__(self, q: int, radius: int, spine_len: int, size_cap: int = SIZE_CAP):
        if q < 3:
            raise ValueError("need q >= 3")
        if radius < 1:
            raise ValueError("need radius >= 1")
        if spine_len < radius + 1:
            raise ValueError("need spine_len >= radius + 1")
        self.q = q
        self.radius = radius
        self.spine_len = spine_len

        est = 1 + q * ((q - 1) ** radius - 1) // (q - 2) + spine_len
        if est > size_cap:
            raise ValueError(f"ball would have ~{est} vertices, above cap {size_cap}")

        K = spine_len
        self.parent: list[Optional[int]] = [k + 1 for k in range(K)] + [None]
        self.children: list[list[int]] = [[] for _ in range(K + 1)]
        self.level: list[int] = [-k for k in range(K + 1)]
        self.dist0: list[int] = list(range(K + 1))
        self.child_label: list[int] = [0] * (K + 1)
        for k in range(1, K + 1):
            self.children[k].append(k - 1)
        self.spine = list(range(K + 1))

        # grow the ball: x0 gets q-1 children, spine vertices q-2 extra
        # side children, everything below q-1 children, cut at dist0 = R
        queue = deque(range(min(radius, K) + 1))
        while queue:
            v = queue.popleft()
            if self.dist0[v] >= radius:
                continue
            # spine vertices already own one child (the next spine vertex down)
            have = len(self.children[v])
            for _ in range(have, q - 1):
                c = len(self.parent)
                self.parent.append(v)
                self.child_label.append(len(self.children[v]))
                self.children[v].append(c)
                self.children.append([])
                self.level.append(self.level[v] + 1)
                self.dist0.append(self.dist0[v] + 1)
                queue.append(c)

        self.n = len(self.parent)
        self.adj: list[list[int]] = [
            ([self.parent[v]] if self.parent[v] is not None else []) + self.children[v]
            for v in range(self.n)
        ]
        # parent pointers rooted at x0, for "away from the base" walks
        self.base_parent: list[Optional[int]] = [None] * self.n
        seen = [False] * self.n
        seen[0] = True
        bfs = deque([0])
        while bfs:
            v = bfs.popleft()
            for u in self.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    self.base_parent[u] = v
                    bfs.append(u)

    def vertex(self, v: int) -> TVertex:
        return TVertex(v, self.level[v])

    def ball_vertices(self) -> list[int]:
        """Ids at distance <= radius from x0 (excludes the spine extension)."""
        return [v for v in range(self.n) if self.dist0[v] <= self.radius]

    def ancestor(self, v: int, height: int) -> Optional[int]:
        """Walk height steps toward the end; None if it leaves the ball."""
        for _ in range(height):
            p = self.parent[v]
            if p is None:
                return None
            v = p
        return v

    def away_neighbors(self, v: int) -> list[int]:
        """Neighbors of v not on the path back to x0."""
        return [u for u in self.adj[v] if u != self.base_parent[v]]


def build_ball(q: int, radius: int, spine_len: int, size_cap: int = SIZE_CAP) -> TreeBall:
    return TreeBall(q, radius, spine_len, size_cap)


def busemann_level(ball: TreeBall, v: int) -> int:
    """Busemann value of v: d(xK, v) - K, cached as a level at build time."""
    return ball.level[v]


def tree_distance(ball: TreeBall, u: int, v: int) -> int:
    """Exact graph distance via the end-rooted lowest common ancestor."""
    steps = 0
    while u != v:
        if ball.level[u] >= ball.level[v]:
            u = ball.parent[u]
            steps += 1
        else:
            v = ball.parent[v]
            steps += 1
        if u is None or v is None:
            raise RuntimeError("LCA walk left the materialized tree")
    return steps


def color_odd(ball: TreeBall, v: int) -> int:
    """Two-coloring by stratum parity; proper for every odd distance."""
    return ball.level[v] & 1


def color_even(ball: TreeBall, v: int, d: int) -> Optional[tuple[int, int]]:
    """Bundle coloring for even d: (branch at the half-distance ancestor,
    level class mod d+1); palette size at most (q-1)(d+1).

    Returns None when the required ancestor is missing (vertex too close
    to the top of the spine), which marks v as out of verification scope.
    """
    if d < 2 or d % 2:
        raise ValueError("d must be even and >= 2")
    bundle_root = ball.ancestor(v, d // 2 - 1)
    if bundle_root is None or ball.parent[bundle_root] is None:
        return None
    return ball.child_label[bundle_root], ball.level[v] % (d + 1)


def color_interval_tree(
    ball: TreeBall, v: int, d: int, c: float
) -> Optional[tuple[tuple[int, ...], int]]:
    """Coloring proper for every integer distance in [d, cd].

    The color is the child-label word along the descent from the ancestor
    at height floor(cd/2 + 1) down to the bundle root at height
    ceil((d-2)/2), paired with the level class mod floor(cd)+1.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if c <= 1.0:
        raise ValueError("need c > 1")
    h_top = _guarded_floor(c * d / 2.0 + 1.0)
    h_bot = math.ceil((d - 2) / 2)
    word = []
    node = ball.ancestor(v, h_bot)
    if node is None:
        return None
    for _ in range(h_top - h_bot):
        word.append(ball.child_label[node])
        node = ball.parent[node]
        if node is None:
            return None
    period = _guarded_floor(c * d) + 1
    return tuple(reversed(word)), ball.level[v] % period


def _descend_away(ball: TreeBall, v: int, steps: int) -> int:
    """Walk away from x0 for the given number of steps (smallest-id child)."""
    for _ in range(steps):
        nxt = ball.away_neighbors(v)
        if not nxt:
            raise ValueError("ball too small for the requested construction")
        v = min(nxt)
    return v


def clique_q(ball: TreeBall, d: int) -> list[int]:
    """q vertices pairwise at even distance d: one per branch of x0 at d/2."""
    if d < 2 or d % 2:
        raise ValueError("d must be even and >= 2")
    if ball.radius < d // 2:
        raise ValueError(f"need radius >= {d // 2}")
    picks = [_descend_away(ball, nb, d // 2 - 1) for nb in ball.adj[0]]
    for a in range(len(picks)):
        for b in range(a + 1, len(picks)):
            assert tree_distance(ball, picks[a], picks[b]) == d
    return picks


@dataclass(frozen=True)
class SpindleWitness:
    vertices: list[int]
    pairs: list[tuple[int, int]]
    labels: dict = field(default_factory=dict)


def moser_spindle(ball: TreeBall, d: int) -> SpindleWitness:
    """Generalized Moser spindle forcing q+1 colors at even d >= 4.

    Two distance-d/2 hubs z, z' in different branches of the base carry
    the two (q-1)-families; the tip vertices v_q, v_q' branch off one
    step from the base/hub so that they sit at distance d from their
    family and from each other.  Every listed pair is re-verified.
    """
    q = ball.q
    if d < 4 or d % 2:
        raise ValueError("d must be even and >= 4")
    if ball.radius < 3 * d // 2:
        raise ValueError(f"need radius >= {3 * d // 2}")
    half = d // 2

    base = 0
    branch_a, branch_b = ball.away_neighbors(base)[:2]
    z = _descend_away(ball, branch_a, half - 1)
    zp = _descend_away(ball, branch_b, half - 1)

    fam = [_descend_away(ball, c, half - 1) for c in ball.away_neighbors(z)]
    famp = [_descend_away(ball, c, half - 1) for c in ball.away_neighbors(zp)]

    def hub_path(first: int, hub: int) -> list[int]:
        path = [first]
        while path[-1] != hub:
            path.append(min(ball.away_neighbors(path[-1])))
        return path

    # unprimed tip: diverge one step below the base (distance d/2 - 1 from
    # the hub), a single side step puts it at distance d/2 from z and 2
    # from the base
    path_a = hub_path(branch_a, z)
    side_a = [w for w in ball.away_neighbors(branch_a) if w not in path_a]
    vq = side_a[0]

    # primed tip: diverge one step above the hub, then drop d/2 - 2 more,
    # landing at distance d/2 from z' and d - 2 from the base
    path_b = hub_path(branch_b, zp)
    u = path_b[-2]
    side_b = [w for w in ball.away_neighbors(u) if w != zp]
    vqp = _descend_away(ball, side_b[0], half - 2)

    vertices = [base] + fam + famp + [vq, vqp]
    pairs: list[tuple[int, int]] = []
    pairs += [(base, x) for x in fam + famp]
    pairs += [(fam[i], fam[j]) for i in range(len(fam)) for j in range(i + 1, len(fam))]
    pairs += [(famp[i], famp[j]) for i in range(len(famp)) for j in range(i + 1, len(famp))]
    pairs += [(vq, x) for x in fam]
    pairs += [(vqp, x) for x in famp]
    pairs.append((vq, vqp))

    for a, b in pairs:
        got = tree_distance(ball, a, b)
        if got != d:
            raise AssertionError(f"spindle pair ({a},{b}) at distance {got}, wanted {d}")
    labels = {"v0": base, "family": fam, "family_prime": famp, "tip": vq, "tip_prime": vqp}
    return SpindleWitness(vertices, pairs, labels)


def interval_clique_tree(ball: TreeBall, d: int, c: float) -> list[int]:
    """q(q-1)^m vertices pairwise at distance in [d, floor(cd)].

    m = floor(cd/2) - ceil(d/2).  Every vertex of the radius-m sphere is
    extended into each of its q-1 outward branches down to the radius
    floor(cd/2); diverging immediately keeps same-sphere companions at
    distance 2*ceil(d/2) >= d, and distinct sphere vertices already force
    distance >= d + 2.
    """
    if c <= 1.0 or d < 1:
        raise ValueError("need d >= 1 and c > 1")
    rho = _guarded_floor(c * d / 2.0)
    m = rho - math.ceil(d / 2)
    if m < 0:
        raise ValueError("interval too narrow: floor(cd/2) < ceil(d/2)")
    if ball.radius < rho:
        raise ValueError(f"need radius >= {rho}")
    drop = rho - m - 1
    sphere = [v for v in range(ball.n) if ball.dist0[v] == m]
    picks = []
    for v in sorted(sphere):
        for a in sorted(ball.away_neighbors(v)):
            picks.append(_descend_away(ball, a, drop))

    lo, hi = d, _guarded_floor(c * d)
    for i in range(len(picks)):
        for j in range(i + 1, len(picks)):
            dist = tree_distance(ball, picks[i], picks[j])
            if not lo <= dist <= hi:
                raise AssertionError(
                    f"companion pair at distance {dist} outside [{lo}, {hi}]"
                )
    return picks


def brooks_bound(q: int, d: int) -> int:
    """Degree bound for the distance-d graph of T_q: q(q-1)^(d-1) + 1."""
    if q < 3 or d < 1:
        raise ValueError("need q >= 3 and d >= 1")
    return q * (q - 1) ** (d - 1) + 1


@dataclass(frozen=True)
class TreeColoringReport:
    checked_vertices: int
    checked_pairs: int
    violations: list[tuple[int, int, int]]  # (u, v, distance)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_tree_coloring(
    ball: TreeBall,
    color_fn: Callable[[int], object],
    distance_set: Iterable[int],
    max_violations: int = 1000,
) -> TreeColoringReport:
    """Exhaustively scan all in-scope pairs at the forbidden distances.

    Vertices where color_fn returns None (missing ancestors near the top
    of the spine) are out of scope; everything else is compared pairwise
    through a depth-limited breadth-first sweep.
    """
    dset = set(distance_set)
    if not dset:
        return TreeColoringReport(0, 0, [])
    dmax = max(dset)
    colors: dict[int, object] = {}
    for v in range(ball.n):
        col = color_fn(v)
        if col is not None:
            colors[v] = col

    violations: list[tuple[int, int, int]] = []
    pairs = 0
    for u in colors:
        # BFS out to dmax; count each unordered pair once via id order
        dist = {u: 0}
        frontier = [u]
        depth = 0
        while frontier and depth < dmax:
            depth += 1
            nxt = []
            for w in frontier:
                for x in ball.adj[w]:
                    if x not in dist:
                        dist[x] = depth
                        nxt.append(x)
            frontier = nxt
        for v, dv in dist.items():
            if v <= u or dv not in dset or v not in colors:
                continue
            pairs += 1
            if colors[u] == colors[v]:
                if len(violations) < max_violations:
                    violations.append((u, v, dv))
                else:
                    return TreeColoringReport(len(colors), pairs, violations)
    return TreeColoringReport(len(colors), pairs, violations)


def export_edge_list(ball: TreeBall, path) -> None:
    """Adjacency as one `u v` line per edge, zero-based ids."""
    with open(path, "w") as fh:
        for v in range(ball.n):
            p = ball.parent[v]
            if p is not None:
                fh.write(f"{min(v, p)} {max(v, p)}\n")


def export_coloring_csv(ball: TreeBall, color_fn: Callable[[int], object], path) -> None:
    """Rows vertexId,level,colorIndex with colors indexed in first-seen order."""
    index: dict[object, int] = {}
    with open(path, "w") as fh:
        fh.write("vertexId,level,colorIndex\n")
        for v in range(ball.n):
            col = color_fn(v)
            if col is None:
                continue
            if col not in index:
                index[col] = len(index)
            fh.write(f"{v},{ball.level[v]},{index[col]}\n")
