"""Exact clique and chromatic-number search on finite distance graphs.

Vertices are points of a metric source (tree ball or half-plane point
list); edges join pairs whose distance falls in the forbidden set.  The
solver stack is deliberately small: bitset adjacency, a Tomita-style
branch-and-bound maximum clique, and a DSATUR backtracking k-colorability
kernel with clique pre-coloring.  Budgets count node expansions so runs
are reproducible; a DIMACS CNF export delegates stubborn instances to
external SAT solvers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .hypgeom import HPoint, hyp_distance
from .treegeom import TreeBall

__all__ = [
    "DistGraph",
    "Status",
    "CliqueResult",
    "ColoringResult",
    "build_distance_graph",
    "max_clique",
    "greedy_coloring",
    "k_colorable",
    "chromatic_number",
    "export_dimacs_cnf",
    "read_edge_list",
    "verify_coloring",
]

DIST_TOL = 1e-9


class Status(Enum):
    SOLVED = "SOLVED"
    BOUNDED = "BOUNDED"
    TIMEOUT = "TIMEOUT"


class SatStatus(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


@dataclass(frozen=True)
class DistGraph:
    n: int
    edges: list[tuple[int, int]]
    provenance: str = ""

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency_masks(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _forbidden_set(forbidden) -> set[int]:
    if isinstance(forbidden, int):
        return {forbidden}
    if isinstance(forbidden, tuple) and len(forbidden) == 2:
        lo, hi = forbidden
        return set(range(int(lo), int(hi) + 1))
    return {int(x) for x in forbidden}


def build_distance_graph(
    source: Union[TreeBall, Sequence[HPoint]],
    forbidden,
    tol: float = DIST_TOL,
) -> DistGraph:
    """Distance graph of a finite metric source.

    Tree balls use exact integer distances (depth-limited BFS per
    vertex); point lists compare hyperbolic distances with tolerance tol.
    forbidden is a single value, a (lo, hi) interval, or an iterable.
    """
    if isinstance(source, TreeBall):
        dset = _forbidden_set(forbidden)
        dmax = max(dset)
        edges = []
        for u in range(source.n):
            dist = {u: 0}
            frontier = [u]
            for depth in range(1, dmax + 1):
                nxt = []
                for w in frontier:
                    for x in source.adj[w]:
                        if x not in dist:
                            dist[x] = depth
                            nxt.append(x)
                frontier = nxt
            edges.extend((u, v) for v, dv in dist.items() if v > u and dv in dset)
        prov = f"T_{source.q} ball radius {source.radius}, forbidden {sorted(dset)}"
        return DistGraph(source.n, sorted(edges), prov)

    points = list(source)
    if isinstance(forbidden, tuple):
        lo, hi = float(forbidden[0]), float(forbidden[1])
    else:
        lo = hi = float(forbidden)
    edges = []
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            dist = hyp_distance(points[a], points[b])
            if lo - tol <= dist <= hi + tol:
                edges.append((a, b))
    return DistGraph(len(points), edges, f"{len(points)} half-plane points, [{lo}, {hi}]")


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: list[int]
    status: Status
    nodes: int = 0


def _greedy_clique(adj: list[int], order: list[int]) -> list[int]:
    best: list[int] = []
    for v in order:
        clique = [v]
        cand = adj[v]
        while cand:
            u = (cand & -cand).bit_length() - 1
            # deterministic: lowest remaining id fully joined to the clique
            clique.append(u)
            cand &= adj[u]
        if len(clique) > len(best):
            best = clique
    return best


def max_clique(g: DistGraph, budget: int = 10**7) -> CliqueResult:
    """Exact maximum clique via branch and bound with a coloring bound."""
    if g.n == 0:
        return CliqueResult(0, [], Status.SOLVED, 0)
    adj = g.adjacency_masks()
    degs = [m.bit_count() for m in adj]
    order = sorted(range(g.n), key=lambda v: (-degs[v], v))
    best = _greedy_clique(adj, order[: min(g.n, 64)])
    best_size = len(best)
    nodes = 0
    exhausted = False

    def color_bound(cand: int) -> list[tuple[int, int]]:
        # greedy coloring of the candidate set; vertices listed with the
        # number of their color class, ascending, for the usual prune
        classes: list[int] = []
        out = []
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            for ci, mask in enumerate(classes):
                if not (mask & adj[v]):
                    classes[ci] = mask | (1 << v)
                    out.append((v, ci + 1))
                    break
            else:
                classes.append(1 << v)
                out.append((v, len(classes)))
        return out

    def expand(clique: list[int], cand: int):
        nonlocal best, best_size, nodes, exhausted
        if exhausted:
            return
        colored = color_bound(cand)
        for v, bound in reversed(colored):
            if len(clique) + bound <= best_size:
                return
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            clique.append(v)
            sub = cand & adj[v]
            if sub:
                expand(clique, sub)
            elif len(clique) > best_size:
                best = clique.copy()
                best_size = len(clique)
            clique.pop()
            cand &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    status = Status.BOUNDED if exhausted else Status.SOLVED
    witness = sorted(best)
    for i in range(len(witness)):
        for j in range(i + 1, len(witness)):
            if not (adj[witness[i]] >> witness[j]) & 1:
                raise AssertionError("clique witness failed re-verification")
    return CliqueResult(best_size, witness, status, nodes)


def verify_coloring(g: DistGraph, coloring: Sequence[int]) -> bool:
    if len(coloring) != g.n:
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges)


def greedy_coloring(g: DistGraph) -> list[int]:
    """DSATUR greedy: deterministic upper bound and starting certificate."""
    adj = g.adjacency_masks()
    degs = [m.bit_count() for m in adj]
    colors = [-1] * g.n
    neigh_colors = [0] * g.n  # bitmask of colors seen in the neighborhood
    for _ in range(g.n):
        v = max(
            (u for u in range(g.n) if colors[u] < 0),
            key=lambda u: (neigh_colors[u].bit_count(), degs[u], -u),
        )
        c = 0
        while (neigh_colors[v] >> c) & 1:
            c += 1
        colors[v] = c
        rest = adj[v]
        while rest:
            u = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            neigh_colors[u] |= 1 << c
    return colors


@dataclass(frozen=True)
class SatResult:
    status: SatStatus
    certificate: Optional[list[int]] = None
    nodes: int = 0


def k_colorable(
    g: DistGraph,
    k: int,
    budget: int = 10**7,
    warm_start: Optional[Sequence[int]] = None,
) -> SatResult:
    """Decide k-colorability with DSATUR branch and bound.

    A warm start that is already a proper coloring with at most k colors
    certifies SAT immediately.  UNSAT is only reported when the search
    space was exhausted inside the budget.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if warm_start is not None and verify_coloring(g, warm_start) and max(warm_start, default=0) < k:
        return SatResult(SatStatus.SAT, list(warm_start), 0)
    if g.n == 0:
        return SatResult(SatStatus.SAT, [], 0)

    adj = g.adjacency_masks()
    degs = [m.bit_count() for m in adj]

    # symmetry breaking: pin one maximum clique to the first colors
    clique = max_clique(g, budget=min(budget, 10**5)).witness
    if len(clique) > k:
        return SatResult(SatStatus.UNSAT, None, 0)

    colors = [-1] * g.n
    neigh_colors = [0] * g.n
    used = 0

    def paint(v: int, c: int) -> list[int]:
        colors[v] = c
        touched = []
        rest = adj[v]
        bit = 1 << c
        while rest:
            u = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if colors[u] < 0 and not (neigh_colors[u] & bit):
                neigh_colors[u] |= bit
                touched.append(u)
        return touched

    def unpaint(v: int, c: int, touched: list[int]) -> None:
        colors[v] = -1
        bit = 1 << c
        for u in touched:
            neigh_colors[u] &= ~bit

    for i, v in enumerate(clique):
        paint(v, i)
    used = len(clique)

    nodes = 0
    full = (1 << k) - 1

    def search(remaining: int, used: int) -> Optional[bool]:
        # None = budget exhausted, True = SAT, False = exhausted UNSAT
        nonlocal nodes
        if remaining == 0:
            return True
        v = -1
        best_key = None
        for u in range(g.n):
            if colors[u] >= 0:
                continue
            sat = neigh_colors[u].bit_count()
            key = (sat, degs[u], -u)
            if best_key is None or key > best_key:
                best_key = key
                v = u
        avail = full & ~neigh_colors[v]
        if not avail:
            return False
        # try existing colors, plus at most one fresh color
        cap = min(k, used + 1)
        c_mask = avail & ((1 << cap) - 1)
        while c_mask:
            c = (c_mask & -c_mask).bit_length() - 1
            c_mask &= c_mask - 1
            nodes += 1
            if nodes > budget:
                return None
            touched = paint(v, c)
            res = search(remaining - 1, max(used, c + 1))
            unpaint(v, c, touched)
            if res is not False:
                return res
        return False

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, g.n * 4 + 100))
    try:
        res = search(g.n - len(clique), used)
    finally:
        sys.setrecursionlimit(old_limit)

    if res is None:
        return SatResult(SatStatus.TIMEOUT, None, nodes)
    if res:
        cert = colors.copy()
        if not verify_coloring(g, cert):
            raise AssertionError("SAT certificate failed re-verification")
        return SatResult(SatStatus.SAT, cert, nodes)
    return SatResult(SatStatus.UNSAT, None, nodes)


@dataclass(frozen=True)
class ColoringResult:
    lower_bound: int
    upper_bound: int
    exact: Optional[int] = None
    certificate: Optional[list[int]] = None
    status: Status = Status.SOLVED
    nodes: int = 0

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError("lower bound above upper bound")
        if self.exact is not None and self.exact != self.lower_bound:
            raise ValueError("exact value must match both bounds")

    def as_dict(self) -> dict:
        return {
            "lowerBound": self.lower_bound,
            "upperBound": self.upper_bound,
            "exact": self.exact,
            "status": self.status.value,
            "certificate": self.certificate,
            "nodes": self.nodes,
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2)


def chromatic_number(g: DistGraph, budget: int = 10**7) -> ColoringResult:
    """Exact chromatic number: clique bound, greedy bound, then decisions.

    Walks k upward from the clique lower bound, deciding k-colorability
    at each step; the first SAT is the chromatic number.  A timed-out
    decision yields the best certified bounds with status TIMEOUT.
    """
    if g.n == 0:
        return ColoringResult(0, 0, 0, [], Status.SOLVED)
    cl = max_clique(g, budget=budget)
    lb = cl.size if cl.status is Status.SOLVED else max(cl.size, 1)
    greedy = greedy_coloring(g)
    if not verify_coloring(g, greedy):
        raise AssertionError("greedy certificate failed re-verification")
    ub = max(greedy) + 1
    cert = greedy
    spent = cl.nodes

    k = lb
    while k < ub:
        res = k_colorable(g, k, budget=budget)
        spent += res.nodes
        if res.status is SatStatus.SAT:
            cert = res.certificate
            ub = k
            break
        if res.status is SatStatus.TIMEOUT:
            return ColoringResult(k, ub, None, cert, Status.TIMEOUT, spent)
        k += 1  # UNSAT: chromatic number exceeds k
    return ColoringResult(ub, ub, ub, cert, Status.SOLVED, spent)


def export_dimacs_cnf(g: DistGraph, k: int, destination) -> None:
    """Standard k-coloring CNF: x_{v,c} = v*k + c + 1.

    Clauses: one at-least-one per vertex, pairwise at-most-one per
    vertex, and one conflict clause per edge and color.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n_vars = g.n * k
    n_clauses = g.n + g.n * (k * (k - 1)) // 2 + g.m * k
    with open(destination, "w") as fh:
        fh.write(f"p cnf {n_vars} {n_clauses}\n")
        for v in range(g.n):
            fh.write(" ".join(str(v * k + c + 1) for c in range(k)) + " 0\n")
        for v in range(g.n):
            for c1 in range(k):
                for c2 in range(c1 + 1, k):
                    fh.write(f"-{v * k + c1 + 1} -{v * k + c2 + 1} 0\n")
        for u, v in g.edges:
            for c in range(k):
                fh.write(f"-{u * k + c + 1} -{v * k + c + 1} 0\n")


def read_edge_list(path, provenance: str = "") -> DistGraph:
    """Graph from `u v` lines, zero-based vertex ids."""
    edges = []
    n = 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, v = map(int, line.split())
            edges.append((min(u, v), max(u, v)))
            n = max(n, u + 1, v + 1)
    return DistGraph(n, sorted(set(edges)), provenance or str(path))
