"""Structural layouts: expanding them into chemical graphs and encoding them as MILP solutions.

A layout is the combinatorial content of a MILP solution (which cycle
configuration each ring node takes, where ring edges and tree edges attach,
which fringe tree sits on every interior vertex, and all interior bond
multiplicities).  ``expand`` turns a layout into a ChemicalGraph and ``encode``
turns it into a full variable assignment of the model built by ``build_milp``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..chemgraph import ChemicalGraph, Element
from ..cycleconf import CycleConfiguration, canonicalize_cycle, cycle_configurations
from ..fringetree import describe_code, tree_from_code
from ..twolayer import molecule_descriptors, reverse_config
from .build import Gadget, Index, rank_at
from .model import MilpBuildError
from .spec import Specification


class LayoutError(MilpBuildError):
    pass


@dataclass
class RingLayout:
    xi: CycleConfiguration
    start: int  # position that receives xi's first rank
    direction: str  # "+" walks xi forwards along increasing positions
    fringe: list  # fringe code per position 1..len(xi)
    bonds: dict = field(default_factory=dict)  # gadget edge -> multiplicity, for active edges

    @property
    def length(self) -> int:
        return self.xi.length

    @classmethod
    def from_fringes(cls, fringe: list, bonds: dict | list | None = None, c_min: int = 3, c_max: int = 8) -> "RingLayout":
        """Derive the cycle configuration and its placement from the fringe codes around the cycle.

        ``bonds`` may be a list of multiplicities for the cycle edges in order
        (1-2, 2-3, ..., l-1) and is translated to gadget edge numbers.
        """
        masses = [describe_code(c).mass_star for c in fringe]
        rank = {m: i + 1 for i, m in enumerate(sorted(set(masses)))}
        seq = tuple(rank[m] for m in masses)
        xi = canonicalize_cycle(seq)
        ell = len(seq)
        place = None
        for d in "+-":
            for mu0 in range(1, ell + 1):
                if all(rank_at(xi, mu0, d, mu) == seq[mu - 1] for mu in range(1, ell + 1)):
                    place = (mu0, d)
                    break
            if place:
                break
        g = Gadget(c_min, c_max)
        if bonds is None:
            bonds = [1] * ell
        if isinstance(bonds, (list, tuple)):
            edges = g.cycle_edges(ell)
            # cycle_edges lists the path edges first, then the closing edge
            bonds = dict(zip(edges, bonds))
        return cls(xi, place[0], place[1], list(fringe), dict(bonds))


@dataclass
class Layout:
    ring: dict  # ring node -> RingLayout
    ring_edge_slot: dict  # (edge index, ring node) -> gadget edge
    tree_edge_slot: dict  # (edge index, ring node) -> cycle position
    tree_bond: dict  # edge index -> multiplicity (every seed-tree edge)
    node_fringe: dict  # non-ring node -> fringe code


@dataclass
class Expansion:
    graph: ChemicalGraph
    vertex: dict  # ("r", u, mu) or ("n", v) -> atom id of the interior vertex
    interior: list  # atom ids of interior vertices
    trace: list = field(default_factory=list)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def expand(spec: Specification, layout: Layout, name: str = "inferred") -> Expansion:
    ix = Index(spec)
    g = ix.g
    trace = []
    uf = _UnionFind()
    code_at = {}
    for u in ix.ring:
        rl = layout.ring.get(u)
        if rl is None:
            raise LayoutError(f"ring node {u} has no cycle layout")
        if len(rl.fringe) != rl.length:
            raise LayoutError(f"ring node {u}: {len(rl.fringe)} fringe codes for a {rl.length}-cycle")
        trace.append(f"ring node {u}: {rl.length}-cycle with configuration {rl.xi.name} starting at {rl.start} ({rl.direction})")
        for mu in range(1, rl.length + 1):
            key = ("r", u, mu)
            uf.find(key)
            code_at[key] = rl.fringe[mu - 1]
    for v in ix.nonring:
        key = ("n", v)
        uf.find(key)
        if v not in layout.node_fringe:
            raise LayoutError(f"non-ring node {v} has no fringe tree")
        code_at[key] = layout.node_fringe[v]

    for k, u, w in ix.ring_edges:
        i, j = layout.ring_edge_slot[(k, u)], layout.ring_edge_slot[(k, w)]
        i1, i2 = g.ends[i]
        j1, j2 = g.ends[j]
        for a, b in (((("r", u, i1)), ("r", w, j2)), (("r", u, i2), ("r", w, j1))):
            if a not in code_at or b not in code_at:
                raise LayoutError(f"ring edge {k}: slot outside the active cycle")
            if code_at[a] != code_at[b]:
                raise LayoutError(f"ring edge {k}: merged vertices carry different fringe trees {code_at[a]} / {code_at[b]}")
            uf.union(a, b)
        bu, bw = layout.ring[u].bonds.get(i), layout.ring[w].bonds.get(j)
        if not (bu == bw == layout.tree_bond.get(k)):
            raise LayoutError(f"ring edge {k}: shared edge multiplicities differ ({bu}, {bw}, {layout.tree_bond.get(k)})")
        trace.append(f"ring edge {k}: node {u} edge {i} ({i1},{i2}) shared with node {w} edge {j} ({j2},{j1})")

    reps = sorted({uf.find(k) for k in code_at}, key=lambda t: (t[0] != "r", t[1:]))
    atom_of = {r: n for n, r in enumerate(reps)}
    vertex = {k: atom_of[uf.find(k)] for k in code_at}
    atoms: list[Element] = [describe_code(code_at[r]).root_element for r in reps]
    bonds = {}

    def add_bond(a, b, m, what):
        key = (min(a, b), max(a, b))
        if key in bonds and bonds[key] != m:
            raise LayoutError(f"{what}: conflicting multiplicities on a merged edge")
        bonds[key] = m

    for u in ix.ring:
        rl = layout.ring[u]
        for i in g.cycle_edges(rl.length):
            if i not in rl.bonds:
                raise LayoutError(f"ring node {u}: no multiplicity for cycle edge {i}")
            p, q = g.ends[i]
            add_bond(vertex[("r", u, p)], vertex[("r", u, q)], rl.bonds[i], f"ring node {u}")
    for k, a, b in ix.nonring_edges:
        ends = []
        for n in (a, b):
            if ix.tree.is_ring(n):
                mu = layout.tree_edge_slot[(k, n)]
                if mu > layout.ring[n].length:
                    raise LayoutError(f"tree edge {k}: position {mu} outside the {layout.ring[n].length}-cycle of node {n}")
                ends.append(vertex[("r", n, mu)])
            else:
                ends.append(vertex[("n", n)])
        add_bond(ends[0], ends[1], layout.tree_bond[k], f"tree edge {k}")
        trace.append(f"tree edge {k}: atoms {ends[0]}-{ends[1]} multiplicity {layout.tree_bond[k]}")

    for r in reps:
        t = tree_from_code(code_at[r])
        base = len(atoms)
        root_id = atom_of[r]
        remap = {0: root_id}
        for v in range(1, len(t.atoms)):
            remap[v] = base + v - 1
            atoms.append(t.atoms[v])
        for a, b, m in t.bonds:
            add_bond(remap[a], remap[b], m, f"fringe tree {code_at[r]}")
    graph = ChemicalGraph(tuple(atoms), tuple((a, b, m) for (a, b), m in sorted(bonds.items())), name)
    return Expansion(graph, vertex, list(range(len(reps))), trace)


# ---------------------------------------------------------------- encoding


def _partner(ix: Index, layout: Layout, k, u, mu):
    """(partner node, partner position) of position ``mu`` of ``u`` if it lies on ring edge ``k``."""
    g = ix.g
    e = [(kk, a, b) for kk, a, b in ix.ring_edges if kk == k][0]
    _, lo, hi = e
    other = hi if u == lo else lo
    i = layout.ring_edge_slot[(k, u)]
    j = layout.ring_edge_slot[(k, other)]
    mine, theirs = g.ends[i], g.ends[j]
    if mu not in mine:
        return None
    # first end of one slot meets the second end of the other
    pos = theirs[1] if mu == mine[0] else theirs[0]
    return other, pos


def encode(spec: Specification, layout: Layout, model=None) -> dict:
    """Full variable assignment for ``layout`` under the model built from ``spec``."""
    ix = Index(spec)
    g = ix.g
    exp = expand(spec, layout)
    G = exp.graph
    desc = molecule_descriptors(G, spec.rho)
    h = desc.decomposition.h
    interior = desc.decomposition.interior_vertices
    masses = {u: t.mass_star for u, t in desc.fringe.items()}
    cc = cycle_configurations(h.adjacency, masses, spec.c_min, spec.c_max)
    sol: dict = {}

    def at(u, mu):
        return exp.vertex.get(("r", u, mu))

    def deg(a):
        return h.degree(a)

    def ideg(a):
        return sum(1 for w in h.adjacency[a] if w in interior)

    # cycle assignment
    for u in ix.ring:
        rl = layout.ring[u]
        if rl.xi not in spec.xi[u]:
            raise LayoutError(f"ring node {u}: configuration {rl.xi.name} not available")
        for x in spec.xi[u]:
            k = ix.xi_code[x]
            sol[f"xx_u{u}_x{k}"] = int(x == rl.xi)
            for mu0 in range(1, x.length + 1):
                for d in "+-":
                    sol[f"x_u{u}_x{k}_s{mu0}_{ix.sgn(d)}"] = int(x == rl.xi and mu0 == rl.start and d == rl.direction)
        fr_mass = {}
        for mu in g.vertices:
            sol[f"y_u{u}_{mu}"] = describe_code(rl.fringe[mu - 1]).mass_star if mu <= rl.length else 0
            if mu <= rl.length:
                fr_mass[rank_at(rl.xi, rl.start, rl.direction, mu)] = sol[f"y_u{u}_{mu}"]
        top = max(fr_mass)
        for r in g.vertices:
            sol[f"z_u{u}_r{r}"] = fr_mass[r] if r <= top else fr_mass[top] + (r - top) * ix.eps1
    for x in ix.xi_all:
        sol[f"cc_x{ix.xi_code[x]}"] = sum(1 for u in ix.ring if layout.ring[u].xi == x)

    # ring edges
    for u in ix.ring:
        rl = layout.ring[u]
        active = set(g.cycle_edges(rl.length))
        for i in g.edges:
            sol[f"e_u{u}_{i}"] = int(i in active)
        for k in ix.ring_inc[u]:
            for i in g.edges:
                sol[f"xe_u{u}_e{k}_{i}"] = int(layout.ring_edge_slot[(k, u)] == i)
        for k in ix.nonring_inc[u]:
            for mu in g.vertices:
                sol[f"xn_u{u}_e{k}_{mu}"] = int(layout.tree_edge_slot[(k, u)] == mu)

    # fringe
    for u in ix.ring:
        rl = layout.ring[u]
        for mu in g.vertices:
            for c in spec.fringe[u]:
                sol[f"dfr_u{u}_{mu}_f{ix.f_code[c]}"] = int(mu <= rl.length and rl.fringe[mu - 1] == c)
        for mu in range(1, rl.length + 1):
            if rl.fringe[mu - 1] not in spec.fringe[u]:
                raise LayoutError(f"ring node {u}: fringe tree {rl.fringe[mu - 1]} not available")
    for v in ix.nonring:
        if layout.node_fringe[v] not in spec.fringe[v]:
            raise LayoutError(f"node {v}: fringe tree {layout.node_fringe[v]} not available")
        for c in spec.fringe[v]:
            sol[f"dfrn_v{v}_f{ix.f_code[c]}"] = int(layout.node_fringe[v] == c)
    for k, u, w in ix.ring_edges:
        i1, i2 = g.ends[layout.ring_edge_slot[(k, u)]]
        shared = Counter([layout.ring[u].fringe[i1 - 1], layout.ring[u].fringe[i2 - 1]])
        for c in ix.f_all:
            sol[f"fce_e{k}_f{ix.f_code[c]}"] = shared.get(c, 0)
    sol["rank"] = desc.rank
    sol["n_G"] = desc.n_heavy
    sol["n_int"] = desc.n_int
    for c in ix.f_all:
        sol[f"fc_f{ix.f_code[c]}"] = desc.fc.get(c, 0)
    for c in ix.lf:
        sol[f"aclf_g{ix.lf_code[c]}"] = desc.ac_lf.get(c, 0)

    # degrees
    for u in ix.ring:
        for mu in g.vertices:
            a = at(u, mu)
            for d in range(1, 5):
                sol[f"ddeg_u{u}_{mu}_d{d}"] = int(a is not None and deg(a) == d)
                sol[f"ddi_u{u}_{mu}_d{d}"] = int(a is not None and ideg(a) == d)
    for v in ix.nonring:
        a = exp.vertex[("n", v)]
        for d in range(1, 5):
            sol[f"ddegn_v{v}_d{d}"] = int(deg(a) == d)
            sol[f"ddin_v{v}_d{d}"] = int(ideg(a) == d)
    interior_deg = Counter(deg(a) for a in interior)
    for d in range(1, 5):
        sol[f"dg_d{d}"] = interior_deg.get(d, 0)
        sol[f"dgi_d{d}"] = desc.dg_int.get(d, 0)
        sol[f"dgall_d{d}"] = desc.dg.get(d, 0)
    for k, u, w in ix.ring_edges:
        i1, i2 = g.ends[layout.ring_edge_slot[(k, u)]]
        for d in range(1, 5):
            sol[f"dge_e{k}_d{d}"] = sum(int(deg(at(u, p)) == d) for p in (i1, i2))
            sol[f"dgie_e{k}_d{d}"] = sum(int(ideg(at(u, p)) == d) for p in (i1, i2))

    def xn_count(u, mu):
        return sum(sol[f"xn_u{u}_e{k}_{mu}"] for k in ix.nonring_inc[u])

    def dgp(u, k, mu):
        i = layout.ring_edge_slot[(k, u)]
        return 1 + xn_count(u, mu) if mu in g.ends[i] else 0

    for u in ix.ring:
        for k in ix.ring_inc[u]:
            for mu in g.vertices:
                sol[f"dgp_u{u}_e{k}_{mu}"] = dgp(u, k, mu)
                p = _partner(ix, layout, k, u, mu)
                sol[f"dgm_u{u}_e{k}_{mu}"] = dgp(p[0], k, p[1]) if p else 0

    # bonds
    for u in ix.ring:
        rl = layout.ring[u]
        for i in g.edges:
            b = rl.bonds.get(i, 0) if sol[f"e_u{u}_{i}"] else 0
            sol[f"bt_u{u}_{i}"] = b
            for m in (1, 2, 3):
                sol[f"db_u{u}_{i}_m{m}"] = int(b == m)
    for k, _ in enumerate(ix.tree.edges):
        b = layout.tree_bond[k]
        sol[f"b_e{k}"] = b
        for m in (1, 2, 3):
            sol[f"dbt_e{k}_m{m}"] = int(b == m)
    for m in (1, 2, 3):
        sol[f"bd_m{m}"] = desc.bd_int.get(m, 0)

    # elements and valence
    def elem(u, mu):
        a = at(u, mu)
        return G.atoms[a] if a is not None else None

    for u in ix.ring:
        for mu in g.vertices:
            e = elem(u, mu)
            sol[f"a_u{u}_{mu}"] = ix.a_code[e] if e is not None else 0
            for a in ix.heavy:
                sol[f"da_u{u}_{mu}_a{ix.a_code[a]}"] = int(e == a)
        for k in ix.nonring_inc[u]:
            for mu in g.vertices:
                sol[f"bn_u{u}_e{k}_{mu}"] = layout.tree_bond[k] * sol[f"xn_u{u}_e{k}_{mu}"]
    for v in ix.nonring:
        e = G.atoms[exp.vertex[("n", v)]]
        if e not in ix.a_code:
            raise LayoutError(f"node {v}: element {e.label} not available")
        sol[f"an_v{v}"] = ix.a_code[e]
        for a in ix.heavy:
            sol[f"dan_v{v}_a{ix.a_code[a]}"] = int(e == a)

    def bp(u, k, mu):
        i = layout.ring_edge_slot[(k, u)]
        if mu not in g.ends[i]:
            return 0
        cyc = sum(sol[f"bt_u{u}_{ii}"] for ii in g.incident[mu])
        tree = sum(sol[f"bn_u{u}_e{kk}_{mu}"] for kk in ix.nonring_inc[u])
        return cyc + tree - layout.tree_bond[k]

    for u in ix.ring:
        for k in ix.ring_inc[u]:
            for mu in g.vertices:
                sol[f"bp_u{u}_e{k}_{mu}"] = bp(u, k, mu)
                p = _partner(ix, layout, k, u, mu)
                sol[f"bm_u{u}_e{k}_{mu}"] = bp(p[0], k, p[1]) if p else 0
    for k, u, w in ix.ring_edges:
        i1, i2 = g.ends[layout.ring_edge_slot[(k, u)]]
        cnt = Counter([elem(u, i1), elem(u, i2)])
        for a in ix.heavy:
            sol[f"nae_e{k}_a{ix.a_code[a]}"] = cnt.get(a, 0)
    n_h = sum(1 for a in G.atoms if a.is_hydrogen)
    for a in ix.elements:
        c = ix.a_code[a]
        if not a.is_hydrogen:
            sol[f"naint_a{c}"] = desc.na_int.get(a, 0)
            sol[f"naex_a{c}"] = desc.na_ex.get(a, 0)
        else:
            sol[f"naex_a{c}"] = n_h
        sol[f"na_a{c}"] = desc.na_all.get(a, 0)
    sol["Mass"] = desc.mass_sum
    for i in ix.atm_range:
        sol[f"datm_{i}"] = int(i == desc.n_atoms)
    sol["msbar"] = float(Fraction(desc.mass_sum, desc.n_atoms))

    # adjacency and edge configurations
    def ac_of(a, b, m):
        c = (G.atoms[a], G.atoms[b], m)
        if c not in ix.ac_code:
            raise LayoutError(f"adjacency configuration {c[0].label}-{c[1].label}:{m} not available")
        return c

    def ec_of(a, b, m):
        c = ((G.atoms[a], deg(a)), (G.atoms[b], deg(b)), m)
        if c not in ix.ec_code:
            raise LayoutError(f"edge configuration {c[0][0].label}{c[0][1]}-{c[1][0].label}{c[1][1]}:{m} not available")
        return c

    for u in ix.ring:
        for i in g.edges:
            on = sol[f"e_u{u}_{i}"]
            ac = ec = None
            if on:
                p, q = g.ends[i]
                ac = ac_of(at(u, p), at(u, q), sol[f"bt_u{u}_{i}"])
                ec = ec_of(at(u, p), at(u, q), sol[f"bt_u{u}_{i}"])
            for c in ix.ac:
                sol[f"dac_u{u}_{i}_g{ix.ac_code[c]}"] = int(c == ac)
            for c in ix.ec:
                sol[f"dec_u{u}_{i}_t{ix.ec_code[c]}"] = int(c == ec)
    for k, (u, v, ring) in enumerate(ix.tree.edges):
        if ring:
            p, q = g.ends[layout.ring_edge_slot[(k, u)]]
            a, b = at(u, p), at(u, q)
        else:
            a = at(u, layout.tree_edge_slot[(k, u)]) if ix.tree.is_ring(u) else exp.vertex[("n", u)]
            b = at(v, layout.tree_edge_slot[(k, v)]) if ix.tree.is_ring(v) else exp.vertex[("n", v)]
        ac = ac_of(a, b, layout.tree_bond[k])
        ec = ec_of(a, b, layout.tree_bond[k])
        for c in ix.ac:
            sol[f"dact_e{k}_g{ix.ac_code[c]}"] = int(c == ac)
        for c in ix.ec:
            sol[f"dect_e{k}_t{ix.ec_code[c]}"] = int(c == ec)
    for c in ix.ac:
        canon = min(c, reverse_config(c))
        sol[f"acint_g{ix.ac_code[c]}"] = desc.ac_int.get(canon, 0)
    for c in ix.ec:
        canon = min(c, reverse_config(c))
        sol[f"ecint_t{ix.ec_code[c]}"] = desc.ec.get(canon, 0)

    for x, n in cc.items():
        if x not in ix.xi_code:
            raise LayoutError(f"expanded graph has cycle configuration {x.name} outside the specification")
    if model is not None:
        missing = [v for v in model.variables if v not in sol]
        if missing:
            raise LayoutError(f"encoder left {len(missing)} variables unset, e.g. {missing[0]}")
    return sol
