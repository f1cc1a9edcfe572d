"""Demand-vector dynamic program: find a shortest path whose arc-set
Hamming distance to each of r reference paths is at least q.

States are (vertex, capped demand vector); demands start at q, are reduced
by per-arc label vectors, and are clamped at 0 (a negative residual demand
is vacuously satisfied).  Results are deterministic: traceback prefers the
smallest arc id.
"""

from __future__ import annotations

from typing import Sequence

from .graph import Path, SpDag


def arc_label_vector(dag: SpDag, refs: Sequence[Path], arc_id: int) -> tuple[int, ...]:
    """Per-reference demand decrement of one arc.

    For arc e = (v_i, v_j), component k is the size of the symmetric
    difference between {e} and the arcs of reference k whose head lies in
    topological positions i+1..j.
    """
    if arc_id not in dag.arc_by_id:
        raise ValueError(f"arc {arc_id} not in dag")
    idx = _RefIndex(dag, refs)
    return idx.label(arc_id)


class _RefIndex:
    """Prefix counts of reference-path arcs by head position."""

    def __init__(self, dag: SpDag, refs: Sequence[Path]):
        self.dag = dag
        self.refs = list(refs)
        n = dag.n
        self.prefix: list[list[int]] = []
        self.member: list[frozenset[int]] = []
        for ref in self.refs:
            cnt = [0] * (n + 1)
            for aid in ref.arcs:
                cnt[dag.arc_by_id[aid].head] += 1
            for v in range(1, n + 1):
                cnt[v] += cnt[v - 1]
            self.prefix.append(cnt)
            self.member.append(ref.arc_set)

    def label(self, arc_id: int) -> tuple[int, ...]:
        arc = self.dag.arc_by_id[arc_id]
        i, j = arc.tail, arc.head
        out = []
        for cnt, mem in zip(self.prefix, self.member):
            in_window = cnt[j] - cnt[i]
            out.append(in_window - 1 if arc_id in mem else in_window + 1)
        return tuple(out)


def _lex_smallest_path(dag: SpDag) -> Path:
    # Every vertex reaches t, so the greedy smallest-arc walk is the
    # lexicographically smallest arc-id sequence from s.
    arcs = []
    v = 1
    while v != dag.n:
        arc = dag.outgoing[v][0]
        arcs.append(arc.id)
        v = arc.head
    return Path(tuple(arcs))


def farthest_path(dag: SpDag, refs: Sequence[Path], q: int) -> Path | None:
    """Return a shortest path at distance >= q from every reference path,
    or None if none exists.
    """
    r = len(refs)
    if r == 0:
        return _lex_smallest_path(dag)
    if q == 0:
        return _lex_smallest_path(dag)

    idx = _RefIndex(dag, refs)
    labels: dict[int, tuple[int, ...]] = {
        a.id: idx.label(a.id) for a in dag.base.arcs
    }

    # State key: vertex index and demand vector in mixed radix base (q + 1).
    radix = q + 1

    def key(v: int, gamma: tuple[int, ...]) -> int:
        k = v
        for component in gamma:
            k = k * radix + component
        return k

    memo: dict[int, bool] = {}

    def evaluate(root_v: int, root_gamma: tuple[int, ...]) -> bool:
        root_key = key(root_v, root_gamma)
        if root_key in memo:
            return memo[root_key]
        stack: list[tuple[int, tuple[int, ...]]] = [(root_v, root_gamma)]
        while stack:
            v, gamma = stack[-1]
            kk = key(v, gamma)
            if kk in memo:
                stack.pop()
                continue
            if v == 1:
                memo[kk] = all(c == 0 for c in gamma)
                stack.pop()
                continue
            unresolved: list[tuple[int, tuple[int, ...]]] = []
            result = False
            for arc in dag.incoming[v]:
                lab = labels[arc.id]
                prev = tuple(max(0, g - l) for g, l in zip(gamma, lab))
                val = memo.get(key(arc.tail, prev))
                if val:
                    result = True
                    break
                if val is None:
                    unresolved.append((arc.tail, prev))
            if result:
                memo[kk] = True
                stack.pop()
            elif unresolved:
                stack.extend(unresolved)
            else:
                memo[kk] = False
                stack.pop()
        return memo[root_key]

    target = tuple([q] * r)
    if not evaluate(dag.n, target):
        return None

    # Traceback, smallest arc id first.
    arcs_rev: list[int] = []
    v, gamma = dag.n, target
    while v != 1:
        for arc in dag.incoming[v]:
            lab = labels[arc.id]
            prev = tuple(max(0, g - l) for g, l in zip(gamma, lab))
            if evaluate(arc.tail, prev):
                arcs_rev.append(arc.id)
                v, gamma = arc.tail, prev
                break
        else:  # pragma: no cover - the DP guarantees a predecessor
            raise AssertionError("traceback failed")
    path = Path(tuple(reversed(arcs_rev)))

    assert _check_prefix_decomposition(dag, refs, labels, path)
    assert all(len(path.arc_set ^ ref.arc_set) >= q for ref in refs)
    return path


def _check_prefix_decomposition(
    dag: SpDag,
    refs: Sequence[Path],
    labels: dict[int, tuple[int, ...]],
    path: Path,
) -> bool:
    """Debug check: prefix distances telescope through the arc labels."""
    ref_heads = []
    for ref in refs:
        ref_heads.append({dag.arc_by_id[aid].head: aid for aid in ref.arcs})
    prefix: set[int] = set()
    prev_dist = [0] * len(refs)
    for aid in path.arcs:
        head = dag.arc_by_id[aid].head
        prefix.add(aid)
        for k, heads in enumerate(ref_heads):
            ref_prefix = {a for h, a in heads.items() if h <= head}
            d = len(prefix ^ ref_prefix)
            if d != prev_dist[k] + labels[aid][k]:
                return False
            prev_dist[k] = d
    return True
