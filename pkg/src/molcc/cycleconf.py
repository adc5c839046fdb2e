"""Chordless cycle enumeration and cycle configurations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence


@dataclass(frozen=True)
class ChordlessCycle:
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, order=True)
class CycleConfiguration:
    ranks: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.ranks)

    @property
    def name(self) -> str:
        return ",".join(map(str, self.ranks))

    @classmethod
    def parse(cls, text: str) -> "CycleConfiguration":
        return cls(tuple(int(x) for x in text.split(",")))

    def __str__(self) -> str:
        return self.name


def _canonical_rotation(cycle: Sequence[int]) -> tuple[int, ...]:
    k = len(cycle)
    i = min(range(k), key=lambda j: cycle[j])
    fwd = tuple(cycle[(i + j) % k] for j in range(k))
    back = tuple(cycle[(i - j) % k] for j in range(k))
    return fwd if fwd[1] < back[1] else back


def enumerate_chordless_cycles(adjacency: Mapping[int, object], c_min: int = 3, c_max: int | None = None) -> list[ChordlessCycle]:
    """All induced cycles with length in ``[c_min, c_max]``.

    ``adjacency`` maps each vertex to an iterable (or dict) of its neighbours.
    Each cycle is reported once, starting at its smallest vertex and continuing
    towards the smaller of that vertex's two cycle neighbours.
    """
    if c_min < 3:
        c_min = 3
    adj = {v: frozenset(nb) for v, nb in adjacency.items()}
    n = len(adj)
    if c_max is None:
        c_max = n
    found: list[tuple[int, ...]] = []

    for s in sorted(adj):
        higher = {v for v in adj if v > s}

        def extend(path: list[int], on_path: set[int]):
            last = path[-1]
            for w in sorted(adj[last]):
                if w not in higher or w in on_path:
                    continue
                # w may touch only the path's last vertex, plus s when it closes the cycle
                if any(w in adj[p] for p in path[1:-1]):
                    continue
                closes = s in adj[w]
                if closes and len(path) == 2:
                    # triangle s, path[1], w
                    if path[1] < w and 3 >= c_min and 3 <= c_max:
                        found.append((s, path[1], w))
                    continue
                if closes:
                    ln = len(path) + 1
                    if path[1] < w and c_min <= ln <= c_max:
                        found.append(tuple(path) + (w,))
                    continue
                if len(path) + 1 >= c_max:
                    continue
                path.append(w)
                on_path.add(w)
                extend(path, on_path)
                path.pop()
                on_path.discard(w)

        for v1 in sorted(adj[s]):
            if v1 > s:
                extend([s, v1], {s, v1})

    return [ChordlessCycle(_canonical_rotation(c)) for c in sorted(found)]


def rank_sequence(c: ChordlessCycle, fringe_masses: Mapping[int, int]) -> tuple[int, ...]:
    masses = [fringe_masses[v] for v in c.vertices]
    rank = {m: i + 1 for i, m in enumerate(sorted(set(masses)))}
    return tuple(rank[m] for m in masses)


def canonicalize_cycle(ranks: Sequence[int]) -> CycleConfiguration:
    seq = tuple(ranks)
    if not seq:
        raise ValueError("empty rank sequence")
    k = len(seq)
    rev = seq[::-1]
    best = min(min(seq[i:] + seq[:i] for i in range(k)), min(rev[i:] + rev[:i] for i in range(k)))
    return CycleConfiguration(best)


def cycle_configurations(adjacency, fringe_masses: Mapping[int, int], c_min: int, c_max: int) -> Counter:
    """Counter of cycle configurations over in-range chordless cycles."""
    out = Counter()
    for c in enumerate_chordless_cycles(adjacency, c_min, c_max):
        out[canonicalize_cycle(rank_sequence(c, fringe_masses))] += 1
    return out


def f_cc(counts: Mapping[CycleConfiguration, int], xi_set: Sequence[CycleConfiguration]) -> list[int]:
    known = set(xi_set)
    for xi in counts:
        if xi not in known:
            from .twolayer import OutOfDictionaryError

            raise OutOfDictionaryError(f"out-of-dictionary descriptor: cycle configuration {xi.name}")
    return [counts.get(xi, 0) for xi in xi_set]
