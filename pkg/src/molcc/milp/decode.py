"""Turn a MILP variable assignment back into a layout and a chemical graph."""

from __future__ import annotations

from dataclasses import dataclass

from ..chemgraph import ChemicalGraph
from .build import Index
from .encode import Expansion, Layout, RingLayout, expand
from .model import INTEGER, BINARY, MilpBuildError
from .spec import Specification


class DecodeError(MilpBuildError):
    pass


@dataclass
class DecodedGraph:
    graph: ChemicalGraph
    layout: Layout
    expansion: Expansion
    trace: list


def _ival(sol, name, tol):
    if name not in sol:
        raise DecodeError(f"solution has no value for {name}")
    x = sol[name]
    r = round(x)
    if abs(x - r) > tol:
        raise DecodeError(f"{name}={x} is not integral")
    return int(r)


def _one(sol, names, what, tol):
    hits = [n for n in names if _ival(sol, n, tol) == 1]
    if len(hits) != 1:
        raise DecodeError(f"{what}: {len(hits)} selections instead of exactly one")
    return hits[0]


def decode_solution(sol: dict, model, spec: Specification, tol: float = 1e-5) -> DecodedGraph:
    if model is not None:
        missing = [v for v in model.variables if v not in sol]
        if missing:
            raise DecodeError(f"solution is missing {len(missing)} variables, e.g. {missing[0]}")
        for v in model.variables.values():
            if v.kind in (INTEGER, BINARY):
                _ival(sol, v.name, tol)
    ix = Index(spec)
    g = ix.g
    ring = {}
    for u in ix.ring:
        pick = {}
        for x in spec.xi[u]:
            k = ix.xi_code[x]
            for mu0 in range(1, x.length + 1):
                for d in "+-":
                    pick[f"x_u{u}_x{k}_s{mu0}_{ix.sgn(d)}"] = (x, mu0, d)
        xx = _one(sol, [f"xx_u{u}_x{ix.xi_code[x]}" for x in spec.xi[u]], f"ring node {u} cycle configuration", tol)
        x, mu0, d = pick[_one(sol, list(pick), f"ring node {u} start position", tol)]
        if xx != f"xx_u{u}_x{ix.xi_code[x]}":
            raise DecodeError(f"ring node {u}: start indicator disagrees with the selected configuration")
        fringe = []
        for mu in range(1, x.length + 1):
            name = _one(sol, [f"dfr_u{u}_{mu}_f{ix.f_code[c]}" for c in spec.fringe[u]], f"ring node {u} position {mu} fringe tree", tol)
            fringe.append(ix.f_all[int(name.rsplit("_f", 1)[1]) - 1])
        bonds = {i: _ival(sol, f"bt_u{u}_{i}", tol) for i in g.cycle_edges(x.length)}
        ring[u] = RingLayout(x, mu0, d, fringe, bonds)
    ring_slot = {}
    for k, u, w in ix.ring_edges:
        for n in (u, w):
            name = _one(sol, [f"xe_u{n}_e{k}_{i}" for i in g.edges], f"ring edge {k} slot at node {n}", tol)
            ring_slot[(k, n)] = int(name.rsplit("_", 1)[1])
    tree_slot = {}
    for k, u, v in ix.nonring_edges:
        for n in (u, v):
            if ix.tree.is_ring(n):
                name = _one(sol, [f"xn_u{n}_e{k}_{mu}" for mu in g.vertices], f"tree edge {k} position at node {n}", tol)
                tree_slot[(k, n)] = int(name.rsplit("_", 1)[1])
    tree_bond = {k: _ival(sol, f"b_e{k}", tol) for k in range(len(ix.tree.edges))}
    node_fringe = {}
    for v in ix.nonring:
        name = _one(sol, [f"dfrn_v{v}_f{ix.f_code[c]}" for c in spec.fringe[v]], f"node {v} fringe tree", tol)
        node_fringe[v] = ix.f_all[int(name.rsplit("_f", 1)[1]) - 1]
    layout = Layout(ring, ring_slot, tree_slot, tree_bond, node_fringe)
    exp = expand(spec, layout)
    return DecodedGraph(exp.graph, layout, exp, exp.trace)
