"""Interior/exterior decomposition, fringe trees and per-molecule 2L descriptors."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .chemgraph import ChemGraphError, ChemicalGraph, Element, HydrogenSuppressedGraph, suppress_hydrogens
from .fringetree import CanonicalTreeCode, canonicalize


class NoInteriorError(ChemGraphError):
    """The graph has no vertex that survives the leaf-deletion rounds."""


@dataclass(frozen=True)
class TwoLayerDecomposition:
    h: HydrogenSuppressedGraph
    rho: int
    interior_vertices: frozenset
    exterior_vertices: frozenset
    interior_edges: frozenset
    exterior_edges: frozenset
    height: dict = field(hash=False, compare=False)

    def is_interior_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.interior_edges


@dataclass(frozen=True)
class FringeTreeInstance:
    root: int
    vertices: frozenset
    info: CanonicalTreeCode

    @property
    def canonical_code(self) -> str:
        return self.info.code

    @property
    def mass_star(self) -> int:
        return self.info.mass_star

    @property
    def height(self) -> int:
        return self.info.height


def decompose(h: HydrogenSuppressedGraph, rho: int = 2) -> TwoLayerDecomposition:
    if rho < 1:
        raise ValueError("rho must be at least 1")
    adj = {v: set(h.adjacency[v]) for v in h.kept_vertices}
    alive = set(h.kept_vertices)
    height: dict[int, int] = {}
    for i in range(rho):
        leaves = [v for v in alive if len(adj[v] & alive) == 1]
        for v in leaves:
            height[v] = i
        alive.difference_update(leaves)
    interior = frozenset(alive)
    if not interior:
        raise NoInteriorError(f"no interior vertex remains after {rho} rounds of leaf deletion")
    exterior = frozenset(v for v in h.kept_vertices if v not in interior)
    int_edges, ex_edges = set(), set()
    for u, v, _ in h.edges:
        (int_edges if u in interior and v in interior else ex_edges).add((u, v))
    return TwoLayerDecomposition(h, rho, interior, exterior, frozenset(int_edges), frozenset(ex_edges), height)


def extract_fringe_trees(d: TwoLayerDecomposition) -> dict[int, FringeTreeInstance]:
    g = d.h.base
    out = {}
    for u in sorted(d.interior_vertices):
        verts = {u}
        stack = [u]
        while stack:
            v = stack.pop()
            for w in g.adjacency[v]:
                if w in verts:
                    continue
                if g.atoms[w].is_hydrogen or w in d.exterior_vertices:
                    verts.add(w)
                    if not g.atoms[w].is_hydrogen:
                        stack.append(w)
        out[u] = FringeTreeInstance(u, frozenset(verts), canonicalize(g, u, verts))
    return out


# ---------------------------------------------------------------- configurations

EdgeConfig = tuple  # ((Element, deg), (Element, deg), m)
AdjConfig = tuple  # (Element, Element, m)


def _check_interior(e, d: TwoLayerDecomposition):
    u, v = e[0], e[1]
    if not d.is_interior_edge(u, v):
        raise ValueError(f"edge ({u}, {v}) is not an interior edge")
    return u, v, d.h.adjacency[u][v]


def edge_configuration(e, h: HydrogenSuppressedGraph, d: TwoLayerDecomposition) -> EdgeConfig:
    u, v, m = _check_interior(e, d)
    a = (h.element(u), h.degree(u))
    b = (h.element(v), h.degree(v))
    return (a, b, m) if a <= b else (b, a, m)


def adjacency_configuration(e, h: HydrogenSuppressedGraph) -> AdjConfig:
    u, v = e[0], e[1]
    m = h.adjacency[u][v]
    a, b = h.element(u), h.element(v)
    return (a, b, m) if a <= b else (b, a, m)


def leaf_adjacency_configuration(e, h: HydrogenSuppressedGraph) -> AdjConfig:
    u, v = e[0], e[1]
    if h.degree(u) != 1:
        if h.degree(v) != 1:
            raise ValueError(f"edge ({u}, {v}) is not a leaf edge")
        u, v = v, u
    return (h.element(u), h.element(v), h.adjacency[u][v])


def reverse_config(c):
    return (c[1], c[0], c[2])


def ec_name(c: EdgeConfig) -> str:
    (a, da), (b, db), m = c
    return f"{a.label}{da}-{b.label}{db}:{m}"


def ac_name(c: AdjConfig) -> str:
    a, b, m = c
    return f"{a.label}-{b.label}:{m}"


# ---------------------------------------------------------------- per-molecule record


@dataclass
class MoleculeDescriptors:
    """Raw descriptor counts of one molecule, before dictionary alignment."""

    n_heavy: int
    rank: int
    n_int: int
    mass_sum: int
    n_atoms: int
    dg: Counter
    dg_int: Counter
    bd_int: Counter
    na_int: Counter
    na_ex: Counter
    na_all: Counter
    ec: Counter
    ac_int: Counter
    fc: Counter
    ac_lf: Counter
    fringe: dict
    decomposition: TwoLayerDecomposition

    @property
    def ms_avg(self) -> Fraction:
        return Fraction(self.mass_sum, self.n_atoms)


def molecule_descriptors(g: ChemicalGraph, rho: int = 2) -> MoleculeDescriptors:
    h = suppress_hydrogens(g)
    d = decompose(h, rho)
    fringe = extract_fringe_trees(d)
    n_heavy = len(h.kept_vertices)
    rank = len(h.edges) - n_heavy + 1
    dg = Counter(h.degree(v) for v in h.kept_vertices)
    dg_int = Counter()
    for v in d.interior_vertices:
        k = sum(1 for w in h.adjacency[v] if w in d.interior_vertices)
        if k:
            dg_int[k] += 1
    bd_int = Counter()
    ec = Counter()
    ac_int = Counter()
    for u, v, m in h.edges:
        if d.is_interior_edge(u, v):
            bd_int[m] += 1
            ec[edge_configuration((u, v), h, d)] += 1
            ac_int[adjacency_configuration((u, v), h)] += 1
    ac_lf = Counter()
    for u, v, m in h.edges:
        if h.degree(u) == 1:
            ac_lf[leaf_adjacency_configuration((u, v), h)] += 1
        if h.degree(v) == 1:
            ac_lf[leaf_adjacency_configuration((v, u), h)] += 1
    na_int = Counter(h.element(v) for v in d.interior_vertices)
    na_ex = Counter(h.element(v) for v in d.exterior_vertices)
    na_all = Counter(g.atoms)
    return MoleculeDescriptors(
        n_heavy=n_heavy,
        rank=rank,
        n_int=len(d.interior_vertices),
        mass_sum=sum(a.mass_times_ten for a in g.atoms),
        n_atoms=len(g.atoms),
        dg=dg,
        dg_int=dg_int,
        bd_int=bd_int,
        na_int=na_int,
        na_ex=na_ex,
        na_all=na_all,
        ec=ec,
        ac_int=ac_int,
        fc=Counter(t.canonical_code for t in fringe.values()),
        ac_lf=ac_lf,
        fringe=fringe,
        decomposition=d,
    )


def descriptors_2l(desc: MoleculeDescriptors, dictionary) -> list:
    """Align a molecule's counts to a dictionary; raises KeyError for unknown configurations.

    The average-mass entry is returned as a ``Fraction``; every other entry is an int.
    """
    row: list = [desc.n_heavy, desc.rank, desc.n_int, desc.ms_avg]
    row += [desc.dg.get(k, 0) for k in range(1, 5)]
    row += [desc.dg_int.get(k, 0) for k in range(1, 5)]
    row += [desc.bd_int.get(2, 0), desc.bd_int.get(3, 0)]
    blocks = [
        ("interior element", desc.na_int, dictionary.lambda_int, lambda x: x.label),
        ("exterior element", desc.na_ex, dictionary.lambda_ex, lambda x: x.label),
        ("edge configuration", desc.ec, dictionary.gamma_int_ec, ec_name),
        ("fringe configuration", desc.fc, dictionary.fringe_codes, str),
        ("leaf adjacency configuration", desc.ac_lf, dictionary.gamma_lf_ac, ac_name),
    ]
    for what, counts, keys, fmt in blocks:
        known = set(keys)
        for k in counts:
            if k not in known:
                raise OutOfDictionaryError(f"out-of-dictionary descriptor: {what} {fmt(k)}")
        row += [counts.get(k, 0) for k in keys]
    return row


class OutOfDictionaryError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
