"""Exact brute-force reference implementations.

These enumerate the full solution space of a shortest-path DAG and decide
instances by clique search over the pairwise-distance graph.  They are the
ground truth for the equivalence tests and back the hybrid solver mode.
Exactness matters here; speed is secondary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .colorcode import MinimalBypass
from .graph import Path, SpDag, hamming_distance


class OracleBudgetError(RuntimeError):
    """Enumeration exceeded its budget; the instance is too large here."""


@dataclass(frozen=True)
class PathCatalog:
    """All s-t paths of a dag in deterministic (lexicographic arc-id) order."""

    paths: tuple[Path, ...]
    count: int  # DP-counted, may exceed len(paths) when truncated
    truncated: bool


def count_st_paths(dag: SpDag, cap: int | None = None) -> int:
    """Number of s-t paths by dynamic programming, saturated at cap."""
    ways = [0] * (dag.n + 1)
    ways[dag.n] = 1
    for v in range(dag.n - 1, 0, -1):
        total = sum(ways[a.head] for a in dag.outgoing[v])
        if cap is not None and total > cap:
            total = cap
        ways[v] = total
    return ways[1]


def enumerate_st_paths(dag: SpDag, budget: int = 10**5) -> PathCatalog:
    """Depth-first enumeration in arc-id order, stopping at the budget."""
    if budget < 1:
        raise ValueError("budget must be positive")
    paths: list[Path] = []
    truncated = False
    prefix: list[int] = []

    def dfs(v: int) -> bool:
        nonlocal truncated
        if v == dag.n:
            if len(paths) >= budget:
                truncated = True
                return False
            paths.append(Path(tuple(prefix)))
            return True
        for arc in dag.outgoing[v]:
            prefix.append(arc.id)
            ok = dfs(arc.head)
            prefix.pop()
            if not ok:
                return False
        return True

    dfs(1)
    return PathCatalog(
        paths=tuple(paths), count=count_st_paths(dag), truncated=truncated
    )


def _require_complete(catalog: PathCatalog) -> None:
    if catalog.truncated:
        raise OracleBudgetError("instance too large for oracle")


def _pair_distances(paths: Sequence[Path]) -> list[list[int]]:
    masks = []
    id_to_bit: dict[int, int] = {}
    for p in paths:
        m = 0
        for aid in p.arc_set:
            bit = id_to_bit.setdefault(aid, len(id_to_bit))
            m |= 1 << bit
        masks.append(m)
    n = len(paths)
    dist = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = (masks[i] ^ masks[j]).bit_count()
            dist[i][j] = dist[j][i] = d
    return dist


def _find_clique(adj: list[set[int]], k: int) -> list[int] | None:
    """First k-clique by branch and bound over bitmask adjacency,
    vertices ordered by descending degree."""
    n = len(adj)
    if k == 0:
        return []
    if k > n:
        return None
    order = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    pos = {v: i for i, v in enumerate(order)}
    masks = [0] * n
    for v in range(n):
        m = 0
        for w in adj[v]:
            m |= 1 << pos[w]
        masks[pos[v]] = m

    def extend(clique: list[int], cand: int) -> list[int] | None:
        if len(clique) == k:
            return clique
        while cand:
            if len(clique) + cand.bit_count() < k:
                return None
            bit = cand & -cand
            cand ^= bit
            v = bit.bit_length() - 1
            found = extend(clique + [v], cand & masks[v])
            if found is not None:
                return found
        return None

    found = extend([], (1 << n) - 1)
    return [order[v] for v in found] if found is not None else None


def brute_farthest(
    dag: SpDag, refs: Sequence[Path], q: int, budget: int = 10**5
) -> Path | None:
    """First catalog path at distance >= q from every reference path."""
    catalog = enumerate_st_paths(dag, budget)
    _require_complete(catalog)
    for p in catalog.paths:
        if all(hamming_distance(p, ref) >= q for ref in refs):
            return p
    return None


def brute_ball(
    dag: SpDag, center: Path, q: int, r: int, d: int, budget: int = 10**5
) -> list[Path] | None:
    """r paths within distance q of center, pairwise at distance >= d."""
    if r == 0:
        return []
    catalog = enumerate_st_paths(dag, budget)
    _require_complete(catalog)
    ball = [p for p in catalog.paths if hamming_distance(p, center) <= q]
    if d == 0:
        # Repetition is allowed at d = 0; the center is always in its ball.
        return [center] * r if ball else None
    dist = _pair_distances(ball)
    adj = [
        {j for j in range(len(ball)) if j != i and dist[i][j] >= d}
        for i in range(len(ball))
    ]
    clique = _find_clique(adj, r)
    if clique is None:
        return None
    return [ball[i] for i in clique]


def brute_solve(
    dag: SpDag, k: int, d: int, budget: int = 10**5
) -> list[Path] | None:
    """k shortest paths pairwise at distance >= d, or None.

    At d = 0 paths need not be distinct, so any s-t path answers yes.
    """
    if k == 0:
        return []
    catalog = enumerate_st_paths(dag, budget)
    _require_complete(catalog)
    if not catalog.paths:
        return None
    if d == 0:
        return [catalog.paths[0]] * k
    dist = _pair_distances(catalog.paths)
    n = len(catalog.paths)
    adj = [{j for j in range(n) if j != i and dist[i][j] >= d} for i in range(n)]
    clique = _find_clique(adj, k)
    if clique is None:
        return None
    return [catalog.paths[i] for i in clique]


def brute_max_min(dag: SpDag, k: int, budget: int = 10**5) -> float:
    """Max over k-subsets of the min pairwise distance (inf for k <= 1)."""
    catalog = enumerate_st_paths(dag, budget)
    _require_complete(catalog)
    if k <= 1:
        return math.inf if catalog.paths else -math.inf
    if len(catalog.paths) < k:
        return -math.inf
    dist = _pair_distances(catalog.paths)
    n = len(catalog.paths)
    values = sorted({dist[i][j] for i in range(n) for j in range(i + 1, n)})
    best = -math.inf
    for d in values:
        adj = [{j for j in range(n) if j != i and dist[i][j] >= d} for i in range(n)]
        if _find_clique(adj, k) is not None:
            best = d
        else:
            break
    return best


def minimal_bypass_decomposition(
    dag: SpDag, center: Path, other: Path
) -> list[MinimalBypass]:
    """Split center XOR other into its minimal components.

    Scans both paths from s, emitting one component per maximal stretch on
    which they differ; the union of components is the symmetric difference
    and component windows overlap at most at their endpoint vertices.
    """
    if not dag.is_st_path(center) or not dag.is_st_path(other):
        raise ValueError("both inputs must be s-t paths of the dag")
    common = set(dag.path_vertices(center)) & set(dag.path_vertices(other))
    components: list[MinimalBypass] = []
    ci = oi = 0
    v = 1
    while v != dag.n:
        ca, oa = center.arcs[ci], other.arcs[oi]
        if ca == oa:
            v = dag.arc_by_id[ca].head
            ci += 1
            oi += 1
            continue
        start = v
        arcs: set[int] = set()
        while True:
            arc = dag.arc_by_id[center.arcs[ci]]
            arcs.add(arc.id)
            ci += 1
            if arc.head in common:
                end = arc.head
                break
        while True:
            arc = dag.arc_by_id[other.arcs[oi]]
            arcs.add(arc.id)
            oi += 1
            if arc.head in common:
                assert arc.head == end
                break
        components.append(MinimalBypass(arcs=frozenset(arcs), window=(start, end)))
        v = end
    return components
