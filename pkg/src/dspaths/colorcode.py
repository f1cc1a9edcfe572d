"""Arc-coloring families and the colorful-bypass dynamic programs.

A bypass is the symmetric difference of the center path with some other
s-t path; it splits into minimal components, each a center window plus a
detour that is internally disjoint from the center.  Coloring the arcs
lets the tables below summarize every nearby path by the color set of its
bypass, and r pairwise-distant color sets pull back to r pairwise-distant
paths.

Color sets over [num_colors] are represented as int bitmasks (color c is
bit c - 1).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .graph import Path, SpDag, hamming_distance

EXHAUSTIVE = "exhaustive-verified"
SEEDED = "seeded-monte-carlo"

_MAX_CANDIDATES = 10**6
_EXHAUSTIVE_MAX_UNIVERSE = 16


class FamilyConstructionError(RuntimeError):
    """Family construction failed to converge or is out of range."""


@dataclass(frozen=True)
class MinimalBypass:
    """One minimal component: its arcs and the center window it replaces."""

    arcs: frozenset[int]
    window: tuple[int, int]  # (divergence vertex, reconvergence vertex)


@dataclass(frozen=True)
class HashFamily:
    """Colorings of universe positions 0..m-1 with colors 1..num_colors.

    In exhaustive-verified mode every subset of ``num_colors`` positions is
    rainbow under some member (checked at construction).  In seeded mode
    the members are pseudo-random and perfection is only probabilistic.
    """

    m: int
    num_colors: int
    mode: str
    seed: int
    members: tuple[tuple[int, ...], ...]


def exhaustive_family_feasible(m: int, s: int) -> bool:
    """Whether exhaustive-verified construction is supported for (m, s)."""
    return s >= m or m <= _EXHAUSTIVE_MAX_UNIVERSE


def _rainbow(member: tuple[int, ...], subset: tuple[int, ...]) -> bool:
    seen = 0
    for pos in subset:
        bit = 1 << (member[pos] - 1)
        if seen & bit:
            return False
        seen |= bit
    return True


@lru_cache(maxsize=None)
def build_hash_family(
    m: int,
    s: int,
    mode: str = EXHAUSTIVE,
    seed: int = 0,
    budget: int = 64,
) -> HashFamily:
    """Construct a family of colorings of [m] with s colors.

    Exhaustive-verified mode accumulates seeded random colorings until all
    s-subsets are rainbow under some member, prunes the family greedily,
    and then re-verifies the rainbow property exhaustively.
    """
    if not 1 <= s <= m:
        raise ValueError("need 1 <= s <= m")
    if mode == SEEDED:
        if budget < 1:
            raise ValueError("budget must be positive")
        members = tuple(
            tuple(
                random.Random(seed * 1_000_003 + idx).randint(1, s)
                for _ in range(m)
            )
            for idx in range(budget)
        )
        return HashFamily(m=m, num_colors=s, mode=SEEDED, seed=seed, members=members)
    if mode != EXHAUSTIVE:
        raise ValueError(f"unknown family mode {mode!r}")
    if s == m:
        member = tuple(range(1, m + 1))
        return HashFamily(m=m, num_colors=s, mode=EXHAUSTIVE, seed=seed, members=(member,))
    if m > _EXHAUSTIVE_MAX_UNIVERSE:
        raise FamilyConstructionError(
            f"exhaustive-verified mode supports universes up to "
            f"{_EXHAUSTIVE_MAX_UNIVERSE} positions, got {m}"
        )

    subsets = list(itertools.combinations(range(m), s))
    uncovered = set(subsets)
    rng = random.Random(seed)
    pool: list[tuple[int, ...]] = []
    for _ in range(_MAX_CANDIDATES):
        if not uncovered:
            break
        candidate = tuple(rng.randint(1, s) for _ in range(m))
        newly = [sub for sub in uncovered if _rainbow(candidate, sub)]
        if newly:
            pool.append(candidate)
            uncovered.difference_update(newly)
    if uncovered:
        raise FamilyConstructionError(
            f"no perfect family within {_MAX_CANDIDATES} candidates for (m={m}, s={s})"
        )

    # Greedy max-coverage re-selection keeps the family small.
    coverage = [
        frozenset(sub for sub in subsets if _rainbow(member, sub)) for member in pool
    ]
    remaining = set(subsets)
    selected: list[tuple[int, ...]] = []
    while remaining:
        best = max(range(len(pool)), key=lambda i: (len(coverage[i] & remaining), -i))
        selected.append(pool[best])
        remaining -= coverage[best]

    members = tuple(selected)
    for sub in subsets:
        if not any(_rainbow(member, sub) for member in members):
            raise FamilyConstructionError("verification failed")  # pragma: no cover
    return HashFamily(m=m, num_colors=s, mode=EXHAUSTIVE, seed=seed, members=members)


def coloring_from_member(arc_ids: Sequence[int], member: Sequence[int]) -> dict[int, int]:
    """Map sorted arc ids onto the universe positions of a family member."""
    return {aid: member[pos] for pos, aid in enumerate(sorted(arc_ids))}


class BypassTables:
    """Colorful-bypass tables for one (dag, center path, coloring).

    ``mbp(i, j, mask)`` decides a minimal mask-colorful bypass whose center
    window spans positions i..j; ``bp(i, mask)`` decides any mask-colorful
    bypass confined to the center prefix up to position i.  Only masks with
    at most ``max_size`` colors are populated.
    """

    def __init__(
        self,
        dag: SpDag,
        center: Path,
        coloring: dict[int, int],
        num_colors: int,
        max_size: int,
    ):
        self.dag = dag
        self.center = center
        self.coloring = coloring
        self.num_colors = num_colors
        self.max_size = max_size
        self.cverts = dag.path_vertices(center)
        if self.cverts[-1] != dag.n:
            raise ValueError("center must be an s-t path")
        self.ell = len(self.cverts)
        self.center_set = frozenset(self.cverts)
        self._window_masks = self._compute_window_masks()
        self._reach_cache: dict[int, dict[int, set[int]]] = {}
        self._detours = self._compute_detours()
        self._bp = self._compute_bp()

    # -- tables ------------------------------------------------------------

    def _arc_bit(self, arc_id: int) -> int:
        return 1 << (self.coloring[arc_id] - 1)

    def _compute_window_masks(self) -> dict[tuple[int, int], int]:
        masks: dict[tuple[int, int], int] = {}
        for i in range(1, self.ell):
            mask = 0
            for p in range(i, self.ell):
                bit = self._arc_bit(self.center.arcs[p - 1])
                if mask & bit:
                    break  # window not rainbow; longer ones are not either
                mask |= bit
                if mask.bit_count() > self.max_size:
                    break
                masks[(i, p + 1)] = mask
        return masks

    def _detour_reach(self, i: int) -> dict[int, set[int]]:
        """Masks of colorful start->v paths avoiding center vertices, for
        non-center v above the window start c_i."""
        cached = self._reach_cache.get(i)
        if cached is not None:
            return cached
        start = self.cverts[i - 1]
        cap = self.max_size - 1  # a window has at least one arc
        reach: dict[int, set[int]] = {}
        for v in range(start + 1, self.dag.n + 1):
            if v in self.center_set:
                continue
            acc: set[int] = set()
            for arc in self.dag.incoming[v]:
                bit = self._arc_bit(arc.id)
                if arc.tail == start:
                    acc.add(bit)
                elif arc.tail in reach:
                    for mask in reach[arc.tail]:
                        ext = mask | bit
                        if ext != mask and ext.bit_count() <= cap:
                            acc.add(ext)
            if acc:
                reach[v] = acc
        self._reach_cache[i] = reach
        return reach

    def _compute_detours(self) -> dict[tuple[int, int], set[int]]:
        detours: dict[tuple[int, int], set[int]] = {}
        for i in range(1, self.ell):
            start = self.cverts[i - 1]
            reach = self._detour_reach(i)
            for j in range(i + 1, self.ell + 1):
                target = self.cverts[j - 1]
                acc: set[int] = set()
                for arc in self.dag.incoming[target]:
                    bit = self._arc_bit(arc.id)
                    if arc.tail == start:
                        acc.add(bit)
                    elif arc.tail in reach:
                        for mask in reach[arc.tail]:
                            ext = mask | bit
                            if ext != mask and ext.bit_count() < self.max_size + (j - i):
                                acc.add(ext)
                if acc:
                    detours[(i, j)] = acc
        return detours

    def mbp(self, i: int, j: int, mask: int) -> bool:
        """Minimal mask-colorful bypass with center window i..j."""
        if mask == 0 or mask.bit_count() > self.max_size:
            return False
        w = self._window_masks.get((i, j))
        if w is None or (mask & w) != w:
            return False
        return (mask & ~w) in self._detours.get((i, j), ())

    def _compute_bp(self) -> list[set[int]]:
        bp: list[set[int]] = [set() for _ in range(self.ell + 1)]
        bp[1] = {0}
        for pos in range(2, self.ell + 1):
            cur = set(bp[pos - 1])
            for j in range(1, pos):
                w = self._window_masks.get((j, pos))
                if w is None:
                    continue
                for detour in self._detours.get((j, pos), ()):
                    if detour & w:
                        continue
                    comp = w | detour
                    if comp.bit_count() > self.max_size:
                        continue
                    for rest in bp[j]:
                        if rest & comp:
                            continue
                        full = rest | comp
                        if full.bit_count() <= self.max_size:
                            cur.add(full)
            bp[pos] = cur
        return bp

    def bp(self, i: int, mask: int) -> bool:
        return mask in self._bp[i]

    @property
    def realizable_sets(self) -> tuple[int, ...]:
        return tuple(sorted(self._bp[self.ell], key=lambda c: (c.bit_count(), c)))

    # -- reconstruction ----------------------------------------------------

    def _trace_detour(self, i: int, j: int, mask: int) -> list[int]:
        """Arc ids of the mask-colorful detour from window start to end,
        smallest arc id preferred at each backward step."""
        reach = self._detour_reach(i)
        start = self.cverts[i - 1]
        arcs_rev: list[int] = []
        v = self.cverts[j - 1]
        remaining = mask
        while True:
            for arc in self.dag.incoming[v]:
                bit = self._arc_bit(arc.id)
                if not remaining & bit:
                    continue
                rest = remaining & ~bit
                if arc.tail == start and rest == 0:
                    arcs_rev.append(arc.id)
                    return list(reversed(arcs_rev))
                if arc.tail in reach and rest in reach[arc.tail]:
                    arcs_rev.append(arc.id)
                    v = arc.tail
                    remaining = rest
                    break
            else:  # pragma: no cover - table guarantees a detour
                raise AssertionError("detour traceback failed")

    def reconstruct(self, mask: int) -> Path:
        """Path whose bypass against the center is mask-colorful."""
        if mask not in self._bp[self.ell]:
            raise ValueError("color set is not realizable")
        components: list[tuple[int, int, int, int]] = []
        pos, cur = self.ell, mask
        while cur:
            if pos > 1 and cur in self._bp[pos - 1]:
                pos -= 1
                continue
            found = None
            for j in range(1, pos):
                w = self._window_masks.get((j, pos))
                if w is None or (cur & w) != w:
                    continue
                for detour in sorted(self._detours.get((j, pos), ())):
                    if detour & w or (cur & detour) != detour:
                        continue
                    rest = cur & ~(w | detour)
                    if rest in self._bp[j]:
                        found = (j, pos, w, detour)
                        break
                if found:
                    break
            assert found is not None, "bp table inconsistent"
            components.append(found)
            j, _, w, detour = found
            cur &= ~(w | detour)
            pos = j

        bypass_arcs: set[int] = set()
        for j, pos2, _, detour in components:
            bypass_arcs.update(self.center.arcs[j - 1 : pos2 - 1])
            bypass_arcs.update(self._trace_detour(j, pos2, detour))
        assert len(bypass_arcs) == mask.bit_count()

        path_arcs = set(self.center.arc_set) ^ bypass_arcs
        by_tail = {self.dag.arc_by_id[aid].tail: aid for aid in path_arcs}
        ordered: list[int] = []
        v = 1
        while v != self.dag.n:
            aid = by_tail[v]
            ordered.append(aid)
            v = self.dag.arc_by_id[aid].head
        result = Path(tuple(ordered))
        assert len(result.arcs) == len(path_arcs) and self.dag.is_st_path(result)
        return result


def minimal_bypass_table(
    dag: SpDag,
    center: Path,
    coloring: dict[int, int],
    num_colors: int,
    max_size: int,
) -> dict[tuple[int, int], frozenset[int]]:
    """All (window, color set) pairs admitting a minimal colorful bypass."""
    tables = BypassTables(dag, center, coloring, num_colors, max_size)
    out: dict[tuple[int, int], frozenset[int]] = {}
    for (i, j), w in tables._window_masks.items():
        masks = {
            w | detour
            for detour in tables._detours.get((i, j), ())
            if not detour & w and (w | detour).bit_count() <= max_size
        }
        if masks:
            out[(i, j)] = frozenset(masks)
    return out


def bypass_table(
    dag: SpDag,
    center: Path,
    coloring: dict[int, int],
    num_colors: int,
    max_size: int,
) -> tuple[list[frozenset[int]], tuple[int, ...]]:
    """Prefix-confined bypass table and the realizable color sets."""
    tables = BypassTables(dag, center, coloring, num_colors, max_size)
    bp = [frozenset()] + [frozenset(s) for s in tables._bp[1:]]
    return bp, tables.realizable_sets


def reconstruct_path(
    dag: SpDag,
    center: Path,
    coloring: dict[int, int],
    mask: int,
    num_colors: int,
    max_size: int,
) -> Path:
    """Path realizing the given color set (requires it to be realizable)."""
    tables = BypassTables(dag, center, coloring, num_colors, max_size)
    return tables.reconstruct(mask)


def select_dissimilar_color_sets(
    realizables: Sequence[int], r: int, d: int
) -> list[int] | None:
    """r realizable color sets with pairwise symmetric difference >= d."""
    sets = list(realizables)
    chosen: list[int] = []

    def backtrack(start: int) -> bool:
        if len(chosen) == r:
            return True
        for idx in range(start, len(sets)):
            c = sets[idx]
            if all((c ^ prev).bit_count() >= d for prev in chosen):
                chosen.append(c)
                if backtrack(idx if d == 0 else idx + 1):
                    return True
                chosen.pop()
        return False

    return list(chosen) if backtrack(0) else None


def ball_search(
    dag: SpDag,
    center: Path,
    q: int,
    r: int,
    d: int,
    *,
    family: HashFamily | None = None,
    family_mode: str = EXHAUSTIVE,
    seed: int = 0,
    coloring_budget: int = 64,
) -> list[Path] | None:
    """r paths within Hamming distance q of center, pairwise >= d apart.

    Iterates the hash family in member order and returns the first
    feasible selection; every returned list is re-verified against both
    conditions.  None means no family member yields a selection (exact for
    verified families, probabilistic for seeded ones).
    """
    if r == 0:
        return []
    if d == 0 or r == 1:
        return [center] * r
    if q == 0:
        return None  # the radius-0 ball holds only the center

    arc_ids = sorted(a.id for a in dag.base.arcs)
    m = len(arc_ids)
    s = q * r
    if family is None:
        if s >= m:
            family = build_hash_family(m, m, EXHAUSTIVE, seed)
            s = m
        else:
            family = build_hash_family(m, s, family_mode, seed, coloring_budget)

    for member in family.members:
        coloring = coloring_from_member(arc_ids, member)
        tables = BypassTables(dag, center, coloring, family.num_colors, q)
        chosen = select_dissimilar_color_sets(tables.realizable_sets, r, d)
        if chosen is None:
            continue
        paths = [tables.reconstruct(c) for c in chosen]
        for p, c in zip(paths, chosen):
            assert hamming_distance(center, p) == c.bit_count() <= q
        for i in range(r):
            for j in range(i + 1, r):
                assert hamming_distance(paths[i], paths[j]) >= (
                    chosen[i] ^ chosen[j]
                ).bit_count()
        if all(hamming_distance(center, p) <= q for p in paths) and all(
            hamming_distance(paths[i], paths[j]) >= d
            for i in range(r)
            for j in range(i + 1, r)
        ):
            return paths
    return None
