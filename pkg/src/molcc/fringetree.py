"""Canonical codes for rooted chemical trees (fringe configurations).

A code is built bottom-up: each heavy vertex is written as
``<symbol><valence>h<#H>`` followed, if it has heavy children, by the sorted
list of child codes in parentheses.  Each child code is prefixed with the bond
multiplicity of the edge to its parent.  Sorting child codes as strings makes
the result independent of vertex ids and child order.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .chemgraph import HYDROGEN, ChemGraphError, ChemicalGraph, Element, element


class TreeCodeError(ChemGraphError):
    pass


@dataclass(frozen=True)
class CanonicalTreeCode:
    code: str
    root_element: Element
    root_degree_heavy: int
    height: int
    mass_star: int
    heavy_non_root_count: int
    per_element_non_root_counts: dict = field(hash=False, compare=False)
    leaf_adjacency_counts: dict = field(hash=False, compare=False)
    # heavy non-root vertices by their degree inside the tree
    non_root_degree_counts: dict = field(hash=False, compare=False)
    # bond multiplicity sum at the root inside the tree, hydrogens included
    root_valence_used: int = field(default=0, compare=False)
    ion_valence: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return self.code


def _node_label(a: Element, n_h: int) -> str:
    return f"{a.symbol}{a.variant}h{n_h}"


def canonicalize(g: ChemicalGraph, root: int, vertices=None) -> CanonicalTreeCode:
    """Canonical code of the subtree of ``g`` induced by ``vertices`` and rooted at ``root``.

    ``vertices`` defaults to every vertex of ``g``; hydrogens must be included.
    """
    if vertices is None:
        vset = set(range(len(g.atoms)))
    else:
        vset = set(vertices)
    if root not in vset:
        raise TreeCodeError(f"root {root} is not among the tree vertices")
    if g.atoms[root].is_hydrogen:
        raise TreeCodeError("root of a fringe tree must be a non-hydrogen atom")
    adj = g.adjacency
    n_edges = sum(1 for v in vset for w in adj[v] if w in vset) // 2
    if n_edges != len(vset) - 1:
        raise TreeCodeError("vertex set does not induce a tree")

    parent = {root: None}
    order = [root]
    for v in order:
        for w in adj[v]:
            if w in vset and w not in parent:
                parent[w] = v
                order.append(w)
    if len(order) != len(vset):
        raise TreeCodeError("vertex set does not induce a connected tree")

    codes: dict[int, str] = {}
    depth_below: dict[int, int] = {}
    for v in reversed(order):
        if g.atoms[v].is_hydrogen:
            continue
        n_h = 0
        kids = []
        h = 0
        for w, m in adj[v].items():
            if w not in vset or w == parent[v]:
                continue
            if g.atoms[w].is_hydrogen:
                n_h += 1
            else:
                kids.append(f"{m}{codes[w]}")
                h = max(h, depth_below[w] + 1)
        depth_below[v] = h
        label = _node_label(g.atoms[v], n_h)
        codes[v] = f"{label}({','.join(sorted(kids))})" if kids else label

    heavy = [v for v in order if not g.atoms[v].is_hydrogen]
    heavy_deg = {v: sum(1 for w in adj[v] if w in vset and not g.atoms[w].is_hydrogen) for v in heavy}
    per_elem = Counter(g.atoms[v] for v in order if v != root)
    leaf_ac = Counter()
    deg_counts = Counter()
    for v in heavy:
        if v == root:
            continue
        deg_counts[heavy_deg[v]] += 1
        if heavy_deg[v] == 1:
            p = parent[v]
            leaf_ac[(g.atoms[v], g.atoms[p], adj[v][p])] += 1
    return CanonicalTreeCode(
        code=codes[root],
        root_element=g.atoms[root],
        root_degree_heavy=heavy_deg[root],
        height=depth_below[root],
        mass_star=sum(g.atoms[v].mass_times_ten for v in order),
        heavy_non_root_count=len(heavy) - 1,
        per_element_non_root_counts=dict(per_elem),
        leaf_adjacency_counts=dict(leaf_ac),
        non_root_degree_counts=dict(deg_counts),
        root_valence_used=sum(m for w, m in adj[root].items() if w in vset),
        ion_valence=0,
    )


def codes_equal_under_rooted_isomorphism(t1, t2) -> bool:
    """``t1``/``t2`` are ``(graph, root)`` or ``(graph, root, vertices)`` tuples."""
    return canonicalize(*t1).code == canonicalize(*t2).code


# ---------------------------------------------------------------- decoding

_NODE_RE = re.compile(r"([A-Z][a-z]?)(\d)h(\d+)")


def tree_from_code(code: str) -> ChemicalGraph:
    """Rebuild an explicit-hydrogen tree from a canonical code; the root is vertex 0."""
    atoms: list[Element] = []
    bonds: list[tuple[int, int, int]] = []
    pos = 0

    def parse_node() -> int:
        nonlocal pos
        m = _NODE_RE.match(code, pos)
        if not m:
            raise TreeCodeError(f"malformed tree code {code!r} at offset {pos}")
        pos = m.end()
        me = len(atoms)
        atoms.append(element(m.group(1), int(m.group(2))))
        for _ in range(int(m.group(3))):
            atoms.append(HYDROGEN)
            bonds.append((me, len(atoms) - 1, 1))
        if pos < len(code) and code[pos] == "(":
            pos += 1
            while True:
                if pos >= len(code) or code[pos] not in "123":
                    raise TreeCodeError(f"malformed tree code {code!r} at offset {pos}")
                mult = int(code[pos])
                pos += 1
                child = parse_node()
                bonds.append((me, child, mult))
                if pos < len(code) and code[pos] == ",":
                    pos += 1
                    continue
                if pos < len(code) and code[pos] == ")":
                    pos += 1
                    break
                raise TreeCodeError(f"malformed tree code {code!r} at offset {pos}")
        return me

    try:
        parse_node()
    except ChemGraphError as exc:
        if isinstance(exc, TreeCodeError):
            raise
        raise TreeCodeError(f"bad tree code {code!r}: {exc}") from None
    if pos != len(code):
        raise TreeCodeError(f"trailing characters in tree code {code!r}")
    return ChemicalGraph(tuple(atoms), tuple(bonds), code)


@lru_cache(maxsize=None)
def describe_code(code: str) -> CanonicalTreeCode:
    """Aggregates for a code given as text; rejects codes that are not in canonical form."""
    info = canonicalize(tree_from_code(code), 0)
    if info.code != code:
        raise TreeCodeError(f"tree code {code!r} is not canonical (expected {info.code!r})")
    return info
