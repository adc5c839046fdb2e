"""Assemble the inverse-inference MILP for a seed-tree specification and a hyperplane."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..fringetree import describe_code
from ..twolayer import ac_name, ec_name, reverse_config
from .model import BINARY, CONTINUOUS, INTEGER, MilpBuildError, MilpModel
from .spec import Specification

FAMILIES = (
    "cycle_assignment",
    "ring_edges",
    "fringe",
    "degree",
    "bond",
    "element",
    "adjacency",
    "edge_config",
    "hyperplane",
)

# big-M for the bond-sum transfer across a shared ring edge; sums reach 5 with S(6)
BOND_TRANSFER_M = 6


class Gadget:
    """Vertex/edge template from which one cycle of length in [c_min, c_max] is activated."""

    def __init__(self, c_min: int, c_max: int):
        self.c_min, self.c_max = c_min, c_max
        self.n_edges = 2 * c_max - c_min
        self.edges = list(range(1, self.n_edges + 1))
        self.vertices = list(range(1, c_max + 1))
        self.ends = {}
        for i in self.edges:
            if i < c_max:
                self.ends[i] = (i, i + 1)
            elif i == c_max:
                self.ends[i] = (1, c_max)
            else:
                self.ends[i] = (1, i - c_max + c_min - 1)
        self.incident = {mu: [i for i in self.edges if mu in self.ends[i]] for mu in self.vertices}

    def active(self, i: int, length: int) -> bool:
        if i < self.c_max:
            return i <= length - 1
        if i == self.c_max:
            return length == self.c_max
        return length == i - self.c_max + self.c_min - 1

    def cycle_edges(self, length: int) -> list[int]:
        return [i for i in self.edges if self.active(i, length)]


def xi_hat(xi, r: int, mu: int, delta: str) -> set[int]:
    """Start points mu0 such that position ``mu`` receives rank ``r`` when ``xi`` starts at mu0."""
    ranks = xi.ranks if hasattr(xi, "ranks") else tuple(xi)
    ell = len(ranks)
    if not (1 <= mu <= ell):
        return set()
    out = set()
    for mu0 in range(1, ell + 1):
        k = (mu - mu0) % ell if delta == "+" else (mu0 - mu) % ell
        if ranks[k] == r:
            out.add(mu0)
    return out


def rank_at(xi, mu0: int, delta: str, mu: int) -> int:
    ell = len(xi.ranks)
    k = (mu - mu0) % ell if delta == "+" else (mu0 - mu) % ell
    return xi.ranks[k]


@dataclass
class Index:
    """Shared index sets and name helpers for building, encoding and decoding."""

    spec: Specification

    def __post_init__(self):
        s = self.spec
        t = s.seed_tree
        self.g = Gadget(s.c_min, s.c_max)
        self.tree = t
        self.ring = t.ring_nodes
        self.nonring = t.nonring_nodes
        self.edge_key = {(u, v): k for k, (u, v, _) in enumerate(t.edges)}
        self.ring_edges = [(k, u, v) for k, (u, v, r) in enumerate(t.edges) if r]
        self.nonring_edges = [(k, u, v) for k, (u, v, r) in enumerate(t.edges) if not r]
        self.ring_inc = {u: [k for k, a, b in self.ring_edges if u in (a, b)] for u in self.ring}
        self.nonring_inc = {n: [k for k, a, b in self.nonring_edges if n in (a, b)] for n in t.node_ids}
        self.xi_all = s.xi_all
        self.xi_code = {x: i + 1 for i, x in enumerate(self.xi_all)}
        self.f_all = s.fringe_all
        self.f_code = {c: i + 1 for i, c in enumerate(self.f_all)}
        self.f_info = {c: describe_code(c) for c in self.f_all}
        self.elements = s.elements
        self.heavy = s.heavy_elements
        self.a_code = {a: i + 1 for i, a in enumerate(self.elements)}
        self.ac = s.gamma_ac_int
        self.ac_code = {c: i + 1 for i, c in enumerate(self.ac)}
        self.ec = s.gamma_ec_int
        self.ec_code = {c: i + 1 for i, c in enumerate(self.ec)}
        self.lf = s.gamma_ac_lf
        self.lf_code = {c: i + 1 for i, c in enumerate(self.lf)}
        self.max_mass = max(info.mass_star for info in self.f_info.values())
        self.M1 = 10 * self.max_mass
        self.eps1 = 1
        n_lb, n_ub = s.n_bounds
        h = [a for a in self.elements if a.is_hydrogen][0]
        self.hydrogen = h
        self.atm_range = list(range(n_lb + s.na[h][0], n_ub + s.na[h][1] + 1))
        max_el = max(a.mass_times_ten for a in self.elements)
        self.max_el_mass = max_el
        lo = max(1, self.atm_range[0]) if self.atm_range else 1
        hi = self.atm_range[-1] if self.atm_range else 1
        self.M_ms = max_el * hi / lo + max_el + 1

    # names ---------------------------------------------------------------
    @staticmethod
    def sgn(delta):
        return "p" if delta == "+" else "n"


def _X(ix: Index, u, mu):
    """Terms of sum of x_xi over xi available at u with |xi| >= mu."""
    return [(1, f"xx_u{u}_x{ix.xi_code[x]}") for x in ix.spec.xi[u] if x.length >= mu]


def build_milp(spec: Specification, hyperplane=None, dictionary=None, objective: str = "feas") -> MilpModel:
    if dictionary is not None:
        for attr in ("rho", "c_min", "c_max"):
            if getattr(dictionary, attr) != getattr(spec, attr):
                raise MilpBuildError(
                    f"{attr} differs between dictionary ({getattr(dictionary, attr)}) and specification ({getattr(spec, attr)})"
                )
    ix = Index(spec)
    m = MilpModel()
    m.meta = {
        "c_min": spec.c_min,
        "c_max": spec.c_max,
        "rho": spec.rho,
        "ring_nodes": ix.ring,
        "nonring_nodes": ix.nonring,
        "tree_edges": [list(e) for e in spec.seed_tree.edges],
        "xi": {str(k): x.name for x, k in ix.xi_code.items()},
        "fringe": {str(k): c for c, k in ix.f_code.items()},
        "elements": {str(k): a.label for a, k in ix.a_code.items()},
        "gamma_ac_int": {str(k): ac_name(c) for c, k in ix.ac_code.items()},
        "gamma_ec_int": {str(k): ec_name(c) for c, k in ix.ec_code.items()},
        "gamma_ac_lf": {str(k): ac_name(c) for c, k in ix.lf_code.items()},
        "M1": ix.M1,
        "eps1": ix.eps1,
        "M_ms": ix.M_ms,
    }
    _cycle_assignment(m, ix)
    _ring_edges(m, ix)
    _fringe(m, ix)
    _degree(m, ix)
    _bond(m, ix)
    _element(m, ix)
    _adjacency(m, ix)
    _edge_config(m, ix)
    if hyperplane is not None:
        expr = hyperplane_expression(ix, hyperplane)
        const = float(hyperplane.bias)
        m.add("hyperplane", "eta_lb", expr, ">=", spec.y_lb - const)
        m.add("hyperplane", "eta_ub", expr, "<=", spec.y_ub - const)
        if objective in ("max", "min"):
            m.objective_sense = objective
            for c, v in expr:
                m.objective[v] = m.objective.get(v, 0) + c
            m.meta["objective_constant"] = const
    elif objective in ("max", "min"):
        raise MilpBuildError("an objective on the prediction needs a model")
    if objective not in ("feas", "max", "min"):
        raise MilpBuildError(f"unknown objective {objective!r}")
    m.meta["objective"] = objective
    return m


# ---------------------------------------------------------------- cycle assignment


def _cycle_assignment(m: MilpModel, ix: Index):
    F = "cycle_assignment"
    g, s = ix.g, ix.spec
    for u in ix.ring:
        for mu in g.vertices:
            m.add_var(f"y_u{u}_{mu}", CONTINUOUS, 0, ix.M1, ("y", u, mu))
        for r in g.vertices:
            m.add_var(f"z_u{u}_r{r}", CONTINUOUS, 0, ix.M1, ("z", u, r))
        for x in s.xi[u]:
            k = ix.xi_code[x]
            m.add_var(f"xx_u{u}_x{k}", BINARY, role=("xi", u, x.name))
            for mu0 in range(1, x.length + 1):
                for d in "+-":
                    m.add_var(f"x_u{u}_x{k}_s{mu0}_{ix.sgn(d)}", BINARY, role=("xi_start", u, x.name, mu0, d))
    for x in ix.xi_all:
        m.add_var(f"cc_x{ix.xi_code[x]}", INTEGER, 0, len(ix.ring), ("cc", x.name))

    for u in ix.ring:
        for r in range(1, s.c_max):
            m.add(F, f"zord_u{u}_r{r}", [(1, f"z_u{u}_r{r}"), (-1, f"z_u{u}_r{r + 1}")], "<=", -ix.eps1)
        for x in s.xi[u]:
            k = ix.xi_code[x]
            terms = [(1, f"xx_u{u}_x{k}")]
            terms += [(-1, f"x_u{u}_x{k}_s{mu0}_{ix.sgn(d)}") for mu0 in range(1, x.length + 1) for d in "+-"]
            m.add(F, f"xsel_u{u}_x{k}", terms, "=", 0)
        m.add(F, f"xone_u{u}", [(1, f"xx_u{u}_x{ix.xi_code[x]}") for x in s.xi[u]], "=", 1)
        for r in g.vertices:
            for mu in g.vertices:
                sel = []
                for x in s.xi[u]:
                    k = ix.xi_code[x]
                    for d in "+-":
                        for mu0 in sorted(xi_hat(x, r, mu, d)):
                            sel.append(f"x_u{u}_x{k}_s{mu0}_{ix.sgn(d)}")
                # y <= z + M(1 - sum)  ->  y - z + M*sum <= M
                m.add(F, f"ymz_ub_u{u}_r{r}_{mu}", [(1, f"y_u{u}_{mu}"), (-1, f"z_u{u}_r{r}")] + [(ix.M1, v) for v in sel], "<=", ix.M1)
                m.add(F, f"ymz_lb_u{u}_r{r}_{mu}", [(1, f"y_u{u}_{mu}"), (-1, f"z_u{u}_r{r}")] + [(-ix.M1, v) for v in sel], ">=", -ix.M1)
    for x in ix.xi_all:
        k = ix.xi_code[x]
        terms = [(1, f"cc_x{k}")] + [(-1, f"xx_u{u}_x{k}") for u in ix.ring if x in s.xi[u]]
        m.add(F, f"cc_x{k}", terms, "=", 0)


# ---------------------------------------------------------------- ring edges


def _ring_edges(m: MilpModel, ix: Index):
    F = "ring_edges"
    g, s = ix.g, ix.spec
    for u in ix.ring:
        for i in g.edges:
            m.add_var(f"e_u{u}_{i}", BINARY, role=("edge_used", u, i))
        for k in ix.ring_inc[u]:
            for i in g.edges:
                m.add_var(f"xe_u{u}_e{k}_{i}", BINARY, role=("ring_edge_slot", u, k, i))
        for k in ix.nonring_inc[u]:
            for mu in g.vertices:
                m.add_var(f"xn_u{u}_e{k}_{mu}", BINARY, role=("tree_edge_slot", u, k, mu))
    for u in ix.ring:
        for k in ix.ring_inc[u]:
            m.add(F, f"xe_one_u{u}_e{k}", [(1, f"xe_u{u}_e{k}_{i}") for i in g.edges], "=", 1)
        for k in ix.nonring_inc[u]:
            m.add(F, f"xn_one_u{u}_e{k}", [(1, f"xn_u{u}_e{k}_{mu}") for mu in g.vertices], "=", 1)
        for mu in g.vertices:
            terms = [(1, f"xe_u{u}_e{k}_{i}") for k in ix.ring_inc[u] for i in g.incident[mu]]
            m.add(F, f"xe_vcap_u{u}_{mu}", terms, "<=", 1)
        for i in g.edges:
            m.add(F, f"xe_ecap_u{u}_{i}", [(1, f"xe_u{u}_e{k}_{i}") for k in ix.ring_inc[u]], "<=", 1)
        for i in g.edges:
            if i <= s.c_min - 1:
                m.add(F, f"eact_u{u}_{i}", [(1, f"e_u{u}_{i}")], "=", 1)
            else:
                terms = [(1, f"e_u{u}_{i}")] + [(-1, f"xx_u{u}_x{ix.xi_code[x]}") for x in s.xi[u] if g.active(i, x.length)]
                m.add(F, f"eact_u{u}_{i}", terms, "=", 0)
        for k in ix.ring_inc[u]:
            for i in g.edges:
                m.add(F, f"xe_le_e_u{u}_e{k}_{i}", [(1, f"xe_u{u}_e{k}_{i}"), (-1, f"e_u{u}_{i}")], "<=", 0)
        for k in ix.nonring_inc[u]:
            for mu in range(s.c_min + 1, s.c_max + 1):
                m.add(F, f"xn_act_u{u}_e{k}_{mu}", [(1, f"xn_u{u}_e{k}_{mu}")] + [(-c, v) for c, v in _X(ix, u, mu)], "<=", 0)


def _ring_pairs(ix: Index):
    """For each ring edge (k, u, u') yield slot pairs (i, j) with merged endpoints."""
    g = ix.g
    for k, u, w in ix.ring_edges:
        for i in g.edges:
            for j in g.edges:
                yield k, u, w, i, j


# ---------------------------------------------------------------- fringe trees


def _fringe(m: MilpModel, ix: Index):
    F = "fringe"
    g, s = ix.g, ix.spec
    nF = len(ix.f_all)
    n_lb, n_ub = s.n_bounds
    for u in ix.ring:
        for mu in g.vertices:
            for c in s.fringe[u]:
                m.add_var(f"dfr_u{u}_{mu}_f{ix.f_code[c]}", BINARY, role=("fringe_at", u, mu, c))
    for v in ix.nonring:
        for c in s.fringe[v]:
            m.add_var(f"dfrn_v{v}_f{ix.f_code[c]}", BINARY, role=("fringe_node", v, c))
    for k, _, _ in ix.ring_edges:
        for c in ix.f_all:
            m.add_var(f"fce_e{k}_f{ix.f_code[c]}", INTEGER, 0, 2, ("fringe_ring_edge", k, c))
    m.add_var("rank", INTEGER, 0, len(ix.ring), ("rank",))
    m.add_var("n_G", INTEGER, n_lb, n_ub, ("n_heavy",))
    m.add_var("n_int", INTEGER, s.n_int_bounds[0], s.n_int_bounds[1], ("n_int",))
    for c in ix.f_all:
        lb, ub = s.fc[c]
        m.add_var(f"fc_f{ix.f_code[c]}", INTEGER, lb, ub, ("fc", c))
    for c in ix.lf:
        lb, ub = s.ac_lf[c]
        m.add_var(f"aclf_g{ix.lf_code[c]}", INTEGER, lb, ub, ("ac_lf", ac_name(c)))

    for u in ix.ring:
        for mu in g.vertices:
            d = [(1, f"dfr_u{u}_{mu}_f{ix.f_code[c]}") for c in s.fringe[u]]
            m.add(F, f"fr_one_u{u}_{mu}", d + [(-c, v) for c, v in _X(ix, u, mu)], "=", 0)
            terms = [(ix.f_info[c].mass_star, f"dfr_u{u}_{mu}_f{ix.f_code[c]}") for c in s.fringe[u]]
            m.add(F, f"fr_mass_u{u}_{mu}", terms + [(-1, f"y_u{u}_{mu}")], "=", 0)
    for v in ix.nonring:
        m.add(F, f"frn_one_v{v}", [(1, f"dfrn_v{v}_f{ix.f_code[c]}") for c in s.fringe[v]], "=", 1)
        if ix.tree.degree(v) <= 1:
            tall = [(1, f"dfrn_v{v}_f{ix.f_code[c]}") for c in s.fringe[v] if ix.f_info[c].height == s.rho]
            m.add(F, f"frn_leaf_v{v}", tall, "=", 1)

    def code_sum(node, pos, sign):
        return [(sign * ix.f_code[c], f"dfr_u{node}_{pos}_f{ix.f_code[c]}") for c in s.fringe[node]]

    for k, u, w, i, j in _ring_pairs(ix):
        i1, i2 = g.ends[i]
        j1, j2 = g.ends[j]
        xa, xb = f"xe_u{u}_e{k}_{i}", f"xe_u{w}_e{k}_{j}"
        for tag, p, q in (("a", i1, j2), ("b", i2, j1)):
            diff = code_sum(u, p, 1) + code_sum(w, q, -1)
            # diff <= nF(2 - xa - xb)
            m.add(F, f"fr_share_ub{tag}_e{k}_{i}_{j}", diff + [(nF, xa), (nF, xb)], "<=", 2 * nF)
            m.add(F, f"fr_share_lb{tag}_e{k}_{i}_{j}", diff + [(-nF, xa), (-nF, xb)], ">=", -2 * nF)
    for k, u, w in ix.ring_edges:
        for i in g.edges:
            i1, i2 = g.ends[i]
            xa = f"xe_u{u}_e{k}_{i}"
            for c in ix.f_all:
                p = ix.f_code[c]
                terms = [(1, f"fce_e{k}_f{p}")]
                if c in s.fringe[u]:
                    terms += [(-1, f"dfr_u{u}_{i1}_f{p}"), (-1, f"dfr_u{u}_{i2}_f{p}")]
                m.add(F, f"fce_ub_e{k}_{i}_f{p}", terms + [(2, xa)], "<=", 2)
                m.add(F, f"fce_lb_e{k}_{i}_f{p}", terms + [(-2, xa)], ">=", -2)
    for c in ix.f_all:
        p = ix.f_code[c]
        terms = [(1, f"fc_f{p}")]
        terms += [(-1, f"dfr_u{u}_{mu}_f{p}") for u in ix.ring if c in s.fringe[u] for mu in g.vertices]
        terms += [(-1, f"dfrn_v{v}_f{p}") for v in ix.nonring if c in s.fringe[v]]
        terms += [(1, f"fce_e{k}_f{p}") for k, _, _ in ix.ring_edges]
        m.add(F, f"fc_f{p}", terms, "=", 0)
    for c in ix.lf:
        q = ix.lf_code[c]
        terms = [(1, f"aclf_g{q}")]
        terms += [(-ix.f_info[f].leaf_adjacency_counts.get(c, 0), f"fc_f{ix.f_code[f]}") for f in ix.f_all]
        m.add(F, f"aclf_g{q}", terms, "=", 0)
    m.add(F, "rank_def", [(1, "rank")], "=", len(ix.ring))
    terms = [(1, "n_int")]
    for u in ix.ring:
        terms += [(-x.length, f"xx_u{u}_x{ix.xi_code[x]}") for x in s.xi[u]]
    m.add(F, "n_int_def", terms, "=", len(ix.nonring) - 2 * len(ix.ring_edges))
    terms = [(1, "n_G"), (-1, "n_int")] + [(-ix.f_info[c].heavy_non_root_count, f"fc_f{ix.f_code[c]}") for c in ix.f_all]
    m.add(F, "n_G_def", terms, "=", 0)


# ---------------------------------------------------------------- degrees


def _degree(m: MilpModel, ix: Index):
    F = "degree"
    g, s = ix.g, ix.spec
    n_ub = s.n_bounds[1]
    D = range(1, 5)
    for u in ix.ring:
        for mu in g.vertices:
            for d in D:
                m.add_var(f"ddeg_u{u}_{mu}_d{d}", BINARY, role=("deg_is", u, mu, d))
                m.add_var(f"ddi_u{u}_{mu}_d{d}", BINARY, role=("intdeg_is", u, mu, d))
    for v in ix.nonring:
        for d in D:
            m.add_var(f"ddegn_v{v}_d{d}", BINARY, role=("deg_is_node", v, d))
            m.add_var(f"ddin_v{v}_d{d}", BINARY, role=("intdeg_is_node", v, d))
    for d in D:
        m.add_var(f"dg_d{d}", INTEGER, 0, n_ub, ("dg_interior", d))
        m.add_var(f"dgi_d{d}", INTEGER, 0, n_ub, ("dg_int", d))
        m.add_var(f"dgall_d{d}", INTEGER, 0, n_ub, ("dg", d))
    for k, _, _ in ix.ring_edges:
        for d in D:
            m.add_var(f"dge_e{k}_d{d}", INTEGER, 0, 2, ("dg_ring_edge", k, d))
            m.add_var(f"dgie_e{k}_d{d}", INTEGER, 0, 2, ("dgi_ring_edge", k, d))
    for u in ix.ring:
        for k in ix.ring_inc[u]:
            for mu in g.vertices:
                m.add_var(f"dgp_u{u}_e{k}_{mu}", INTEGER, 0, 4, ("deg_plus", u, k, mu))
                m.add_var(f"dgm_u{u}_e{k}_{mu}", INTEGER, 0, 4, ("deg_minus", u, k, mu))

    for u in ix.ring:
        for mu in g.vertices:
            xnodes = [(1, f"xn_u{u}_e{k}_{mu}") for k in ix.nonring_inc[u]]
            for k in ix.ring_inc[u]:
                slot = [(4, f"xe_u{u}_e{k}_{i}") for i in g.incident[mu]]
                for tag in ("dgp", "dgm"):
                    m.add(F, f"{tag}_cap_u{u}_e{k}_{mu}", [(1, f"{tag}_u{u}_e{k}_{mu}")] + [(-c, v) for c, v in slot], "<=", 0)
                for i in g.incident[mu]:
                    xa = f"xe_u{u}_e{k}_{i}"
                    body = [(1, f"dgp_u{u}_e{k}_{mu}")] + [(-c, v) for c, v in xnodes]
                    # 4(x-1) <= dgp - 1 - sum xn <= 4(1-x)
                    m.add(F, f"dgp_lb_u{u}_e{k}_{mu}_{i}", body + [(-4, xa)], ">=", -3)
                    m.add(F, f"dgp_ub_u{u}_e{k}_{mu}_{i}", body + [(4, xa)], "<=", 5)
    for k, u, w, i, j in _ring_pairs(ix):
        i1, i2 = g.ends[i]
        j1, j2 = g.ends[j]
        xa, xb = f"xe_u{u}_e{k}_{i}", f"xe_u{w}_e{k}_{j}"
        for tag, (n1, p1), (n2, p2) in (
            ("a", (u, i1), (w, j2)),
            ("b", (u, i2), (w, j1)),
            ("c", (w, j2), (u, i1)),
            ("d", (w, j1), (u, i2)),
        ):
            diff = [(1, f"dgm_u{n1}_e{k}_{p1}"), (-1, f"dgp_u{n2}_e{k}_{p2}")]
            m.add(F, f"dgx_lb{tag}_e{k}_{i}_{j}", diff + [(-3, xa), (-3, xb)], ">=", -6)
            m.add(F, f"dgx_ub{tag}_e{k}_{i}_{j}", diff + [(3, xa), (3, xb)], "<=", 6)
    for u in ix.ring:
        for mu in g.vertices:
            X = _X(ix, u, mu)
            xnodes = [(1, f"xn_u{u}_e{k}_{mu}") for k in ix.nonring_inc[u]]
            minus = [(1, f"dgm_u{u}_e{k}_{mu}") for k in ix.ring_inc[u]]
            root = [(ix.f_info[c].root_degree_heavy, f"dfr_u{u}_{mu}_f{ix.f_code[c]}") for c in s.fringe[u]]
            for tag, extra, pre in (("deg", root, "ddeg"), ("ideg", [], "ddi")):
                ind = [(1, f"{pre}_u{u}_{mu}_d{d}") for d in D]
                wsum = [(d, f"{pre}_u{u}_{mu}_d{d}") for d in D]
                m.add(F, f"{tag}_one_u{u}_{mu}", ind + [(-c, v) for c, v in X], "=", 0)
                rest = [(-c, v) for c, v in extra + xnodes + minus]
                # 2(X-1) <= sum d*delta - (2 + rest)  and  sum d*delta <= 2 + rest
                m.add(F, f"{tag}_lb_u{u}_{mu}", wsum + rest + [(-2 * c, v) for c, v in X], ">=", 0)
                m.add(F, f"{tag}_ub_u{u}_{mu}", wsum + rest, "<=", 2)
    for v in ix.nonring:
        nb = ix.tree.degree(v)
        root = [(-ix.f_info[c].root_degree_heavy, f"dfrn_v{v}_f{ix.f_code[c]}") for c in s.fringe[v]]
        m.add(F, f"deg_one_v{v}", [(1, f"ddegn_v{v}_d{d}") for d in D], "=", 1)
        m.add(F, f"deg_val_v{v}", [(d, f"ddegn_v{v}_d{d}") for d in D] + root, "=", nb)
        m.add(F, f"ideg_one_v{v}", [(1, f"ddin_v{v}_d{d}") for d in D], "=", 1)
        m.add(F, f"ideg_val_v{v}", [(d, f"ddin_v{v}_d{d}") for d in D], "=", nb)
    for k, u, w in ix.ring_edges:
        for i in g.edges:
            i1, i2 = g.ends[i]
            xa = f"xe_u{u}_e{k}_{i}"
            for d in D:
                for tag, var, pre in (("dge", f"dge_e{k}_d{d}", "ddeg"), ("dgie", f"dgie_e{k}_d{d}", "ddi")):
                    body = [(1, var), (-1, f"{pre}_u{u}_{i1}_d{d}"), (-1, f"{pre}_u{u}_{i2}_d{d}")]
                    m.add(F, f"{tag}_ub_e{k}_{i}_d{d}", body + [(2, xa)], "<=", 2)
                    m.add(F, f"{tag}_lb_e{k}_{i}_d{d}", body + [(-2, xa)], ">=", -2)
    for d in D:
        for tag, var, pre, pren, edge in (
            ("dg", f"dg_d{d}", "ddeg", "ddegn", "dge"),
            ("dgi", f"dgi_d{d}", "ddi", "ddin", "dgie"),
        ):
            terms = [(1, var)]
            terms += [(-1, f"{pre}_u{u}_{mu}_d{d}") for u in ix.ring for mu in g.vertices]
            terms += [(-1, f"{pren}_v{v}_d{d}") for v in ix.nonring]
            terms += [(1, f"{edge}_e{k}_d{d}") for k, _, _ in ix.ring_edges]
            m.add(F, f"{tag}_total_d{d}", terms, "=", 0)
        terms = [(1, f"dgall_d{d}"), (-1, f"dg_d{d}")]
        terms += [(-ix.f_info[c].non_root_degree_counts.get(d, 0), f"fc_f{ix.f_code[c]}") for c in ix.f_all]
        m.add(F, f"dgall_d{d}", terms, "=", 0)


# ---------------------------------------------------------------- bonds


def _bond(m: MilpModel, ix: Index):
    F = "bond"
    g = ix.g
    for u in ix.ring:
        for i in g.edges:
            m.add_var(f"bt_u{u}_{i}", INTEGER, 0, 3, ("bond", u, i))
            for b in (1, 2, 3):
                m.add_var(f"db_u{u}_{i}_m{b}", BINARY, role=("bond_is", u, i, b))
    for k, _ in enumerate(ix.tree.edges):
        m.add_var(f"b_e{k}", INTEGER, 1, 3, ("tree_bond", k))
        for b in (1, 2, 3):
            m.add_var(f"dbt_e{k}_m{b}", BINARY, role=("tree_bond_is", k, b))
    for b in (1, 2, 3):
        m.add_var(f"bd_m{b}", INTEGER, 0, math.inf, ("bd_int", b))

    for u in ix.ring:
        for i in g.edges:
            m.add(F, f"bt_lb_u{u}_{i}", [(1, f"bt_u{u}_{i}"), (-1, f"e_u{u}_{i}")], ">=", 0)
            m.add(F, f"bt_ub_u{u}_{i}", [(1, f"bt_u{u}_{i}"), (-3, f"e_u{u}_{i}")], "<=", 0)
            m.add(F, f"db_one_u{u}_{i}", [(1, f"db_u{u}_{i}_m{b}") for b in (1, 2, 3)] + [(-1, f"e_u{u}_{i}")], "=", 0)
            m.add(F, f"db_val_u{u}_{i}", [(b, f"db_u{u}_{i}_m{b}") for b in (1, 2, 3)] + [(-1, f"bt_u{u}_{i}")], "=", 0)
    for k, _ in enumerate(ix.tree.edges):
        m.add(F, f"dbt_one_e{k}", [(1, f"dbt_e{k}_m{b}") for b in (1, 2, 3)], "=", 1)
        m.add(F, f"dbt_val_e{k}", [(b, f"dbt_e{k}_m{b}") for b in (1, 2, 3)] + [(-1, f"b_e{k}")], "=", 0)
    for u in ix.ring:
        for k in ix.ring_inc[u]:
            for i in g.edges:
                xa = f"xe_u{u}_e{k}_{i}"
                body = [(1, f"bt_u{u}_{i}"), (-1, f"b_e{k}")]
                m.add(F, f"bt_ring_lb_u{u}_e{k}_{i}", body + [(-3, xa)], ">=", -3)
                m.add(F, f"bt_ring_ub_u{u}_e{k}_{i}", body + [(3, xa)], "<=", 3)
    for b in (1, 2, 3):
        terms = [(1, f"bd_m{b}")]
        terms += [(-1, f"db_u{u}_{i}_m{b}") for u in ix.ring for i in g.edges]
        terms += [(-1, f"dbt_e{k}_m{b}") for k, _, _ in ix.nonring_edges]
        terms += [(1, f"dbt_e{k}_m{b}") for k, _, _ in ix.ring_edges]
        m.add(F, f"bd_total_m{b}", terms, "=", 0)


# ---------------------------------------------------------------- elements and valence


def _element(m: MilpModel, ix: Index):
    F = "element"
    g, s = ix.g, ix.spec
    nL = len(ix.elements)
    H = ix.hydrogen
    for u in ix.ring:
        for mu in g.vertices:
            m.add_var(f"a_u{u}_{mu}", INTEGER, 0, nL, ("element_code", u, mu))
            for a in ix.heavy:
                m.add_var(f"da_u{u}_{mu}_a{ix.a_code[a]}", BINARY, role=("element_is", u, mu, a.label))
        for k in ix.nonring_inc[u]:
            for mu in g.vertices:
                m.add_var(f"bn_u{u}_e{k}_{mu}", INTEGER, 0, 3, ("tree_bond_at", u, k, mu))
        for k in ix.ring_inc[u]:
            for mu in g.vertices:
                m.add_var(f"bp_u{u}_e{k}_{mu}", INTEGER, 0, 6, ("bond_plus", u, k, mu))
                m.add_var(f"bm_u{u}_e{k}_{mu}", INTEGER, 0, 6, ("bond_minus", u, k, mu))
    for v in ix.nonring:
        m.add_var(f"an_v{v}", INTEGER, 0, nL, ("element_code_node", v))
        for a in ix.heavy:
            m.add_var(f"dan_v{v}_a{ix.a_code[a]}", BINARY, role=("element_is_node", v, a.label))
    for k, _, _ in ix.ring_edges:
        for a in ix.heavy:
            m.add_var(f"nae_e{k}_a{ix.a_code[a]}", INTEGER, 0, 2, ("element_ring_edge", k, a.label))
    for a in ix.heavy:
        lb, ub = s.na_int[a]
        m.add_var(f"naint_a{ix.a_code[a]}", INTEGER, lb, ub, ("na_int", a.label))
    for a in ix.elements:
        lb, ub = s.na_ex[a]
        m.add_var(f"naex_a{ix.a_code[a]}", INTEGER, lb, ub, ("na_ex", a.label))
        lb, ub = s.na[a]
        m.add_var(f"na_a{ix.a_code[a]}", INTEGER, lb, ub, ("na", a.label))
    m.add_var("Mass", INTEGER, 0, math.inf, ("mass",))
    for i in ix.atm_range:
        m.add_var(f"datm_{i}", BINARY, role=("atoms_is", i))
    m.add_var("msbar", CONTINUOUS, 0, ix.max_el_mass, ("ms_avg",))

    for u in ix.ring:
        for mu in g.vertices:
            X = _X(ix, u, mu)
            roots = [(-ix.a_code[ix.f_info[c].root_element], f"dfr_u{u}_{mu}_f{ix.f_code[c]}") for c in s.fringe[u]]
            m.add(F, f"alpha_u{u}_{mu}", [(1, f"a_u{u}_{mu}")] + roots, "=", 0)
            m.add(F, f"da_one_u{u}_{mu}", [(1, f"da_u{u}_{mu}_a{ix.a_code[a]}") for a in ix.heavy] + [(-c, v) for c, v in X], "=", 0)
            m.add(F, f"da_val_u{u}_{mu}", [(ix.a_code[a], f"da_u{u}_{mu}_a{ix.a_code[a]}") for a in ix.heavy] + [(-1, f"a_u{u}_{mu}")], "=", 0)
    for v in ix.nonring:
        roots = [(-ix.a_code[ix.f_info[c].root_element], f"dfrn_v{v}_f{ix.f_code[c]}") for c in s.fringe[v]]
        m.add(F, f"alpha_v{v}", [(1, f"an_v{v}")] + roots, "=", 0)
        m.add(F, f"da_one_v{v}", [(1, f"dan_v{v}_a{ix.a_code[a]}") for a in ix.heavy], "=", 1)
        m.add(F, f"da_val_v{v}", [(ix.a_code[a], f"dan_v{v}_a{ix.a_code[a]}") for a in ix.heavy] + [(-1, f"an_v{v}")], "=", 0)
    for u in ix.ring:
        for mu in g.vertices:
            for k in ix.nonring_inc[u]:
                bn, xn = f"bn_u{u}_e{k}_{mu}", f"xn_u{u}_e{k}_{mu}"
                m.add(F, f"bn_cap_u{u}_e{k}_{mu}", [(1, bn), (-3, xn)], "<=", 0)
                body = [(1, f"b_e{k}"), (-1, bn)]
                m.add(F, f"bn_lb_u{u}_e{k}_{mu}", body + [(-3, xn)], ">=", -3)
                m.add(F, f"bn_ub_u{u}_e{k}_{mu}", body + [(3, xn)], "<=", 3)
            for k in ix.ring_inc[u]:
                slot = [(-6, f"xe_u{u}_e{k}_{i}") for i in g.incident[mu]]
                m.add(F, f"bp_cap_u{u}_e{k}_{mu}", [(1, f"bp_u{u}_e{k}_{mu}")] + slot, "<=", 0)
                m.add(F, f"bm_cap_u{u}_e{k}_{mu}", [(1, f"bm_u{u}_e{k}_{mu}")] + slot, "<=", 0)
                body = [(1, f"bp_u{u}_e{k}_{mu}"), (1, f"b_e{k}")]
                body += [(-1, f"bt_u{u}_{i}") for i in g.incident[mu]]
                body += [(-1, f"bn_u{u}_e{k2}_{mu}") for k2 in ix.nonring_inc[u]]
                for i in g.incident[mu]:
                    xa = f"xe_u{u}_e{k}_{i}"
                    m.add(F, f"bp_lb_u{u}_e{k}_{mu}_{i}", body + [(-6, xa)], ">=", -6)
                    m.add(F, f"bp_ub_u{u}_e{k}_{mu}_{i}", body + [(6, xa)], "<=", 6)
    M = BOND_TRANSFER_M
    for k, u, w, i, j in _ring_pairs(ix):
        i1, i2 = g.ends[i]
        j1, j2 = g.ends[j]
        xa, xb = f"xe_u{u}_e{k}_{i}", f"xe_u{w}_e{k}_{j}"
        for tag, (n1, p1), (n2, p2) in (
            ("a", (u, i1), (w, j2)),
            ("b", (u, i2), (w, j1)),
            ("c", (w, j2), (u, i1)),
            ("d", (w, j1), (u, i2)),
        ):
            diff = [(1, f"bm_u{n1}_e{k}_{p1}"), (-1, f"bp_u{n2}_e{k}_{p2}")]
            m.add(F, f"bx_lb{tag}_e{k}_{i}_{j}", diff + [(-M, xa), (-M, xb)], ">=", -2 * M)
            m.add(F, f"bx_ub{tag}_e{k}_{i}_{j}", diff + [(M, xa), (M, xb)], "<=", 2 * M)
    for u in ix.ring:
        for mu in g.vertices:
            terms = [(a.valence, f"da_u{u}_{mu}_a{ix.a_code[a]}") for a in ix.heavy]
            terms += [(-1, f"bt_u{u}_{i}") for i in g.incident[mu]]
            terms += [(-1, f"bn_u{u}_e{k}_{mu}") for k in ix.nonring_inc[u]]
            terms += [(-1, f"bm_u{u}_e{k}_{mu}") for k in ix.ring_inc[u]]
            terms += [
                (-(ix.f_info[c].root_valence_used - ix.f_info[c].ion_valence), f"dfr_u{u}_{mu}_f{ix.f_code[c]}")
                for c in s.fringe[u]
            ]
            m.add(F, f"valence_u{u}_{mu}", terms, "=", 0)
    for v in ix.nonring:
        terms = [(a.valence, f"dan_v{v}_a{ix.a_code[a]}") for a in ix.heavy]
        terms += [(-1, f"b_e{k}") for k in ix.nonring_inc[v]]
        terms += [
            (-(ix.f_info[c].root_valence_used - ix.f_info[c].ion_valence), f"dfrn_v{v}_f{ix.f_code[c]}")
            for c in s.fringe[v]
        ]
        m.add(F, f"valence_v{v}", terms, "=", 0)
    for k, _, _ in ix.ring_edges:
        for a in ix.heavy:
            terms = [(1, f"nae_e{k}_a{ix.a_code[a]}")]
            terms += [(-1, f"fce_e{k}_f{ix.f_code[c]}") for c in ix.f_all if ix.f_info[c].root_element == a]
            m.add(F, f"nae_e{k}_a{ix.a_code[a]}", terms, "=", 0)
    for a in ix.heavy:
        c = ix.a_code[a]
        terms = [(1, f"naint_a{c}")]
        terms += [(-1, f"da_u{u}_{mu}_a{c}") for u in ix.ring for mu in g.vertices]
        terms += [(-1, f"dan_v{v}_a{c}") for v in ix.nonring]
        terms += [(1, f"nae_e{k}_a{c}") for k, _, _ in ix.ring_edges]
        m.add(F, f"naint_a{c}", terms, "=", 0)
    for a in ix.elements:
        c = ix.a_code[a]
        terms = [(1, f"naex_a{c}")]
        terms += [(-ix.f_info[f].per_element_non_root_counts.get(a, 0), f"fc_f{ix.f_code[f]}") for f in ix.f_all]
        m.add(F, f"naex_a{c}", terms, "=", 0)
        terms = [(1, f"na_a{c}"), (-1, f"naex_a{c}")]
        if not a.is_hydrogen:
            terms.append((-1, f"naint_a{c}"))
        m.add(F, f"na_a{c}", terms, "=", 0)
    m.add(F, "mass_def", [(1, "Mass")] + [(-a.mass_times_ten, f"na_a{ix.a_code[a]}") for a in ix.elements], "=", 0)
    m.add(F, "atm_one", [(1, f"datm_{i}") for i in ix.atm_range], "=", 1)
    m.add(F, "atm_val", [(i, f"datm_{i}") for i in ix.atm_range] + [(-1, "n_G"), (-1, f"naex_a{ix.a_code[H]}")], "=", 0)
    Mm = ix.M_ms
    for i in ix.atm_range:
        if i <= 0:
            continue
        body = [(1, "msbar"), (-1.0 / i, "Mass")]
        m.add(F, f"msbar_lb_{i}", body + [(-Mm, f"datm_{i}")], ">=", -Mm)
        m.add(F, f"msbar_ub_{i}", body + [(Mm, f"datm_{i}")], "<=", Mm)


# ---------------------------------------------------------------- adjacency configurations


def _endpoint_code_constraints(m, F, name, total, u, mu_terms_var, x, M):
    pass


def _adjacency(m: MilpModel, ix: Index):
    F = "adjacency"
    g, s = ix.g, ix.spec
    nL = len(ix.elements)
    for u in ix.ring:
        for i in g.edges:
            for c in ix.ac:
                m.add_var(f"dac_u{u}_{i}_g{ix.ac_code[c]}", BINARY, role=("ac_is", u, i, ac_name(c)))
    for k, _ in enumerate(ix.tree.edges):
        for c in ix.ac:
            m.add_var(f"dact_e{k}_g{ix.ac_code[c]}", BINARY, role=("ac_is_tree", k, ac_name(c)))
    for c in ix.ac:
        lb, ub = s.ac_int[c]
        m.add_var(f"acint_g{ix.ac_code[c]}", INTEGER, lb, ub, ("ac_int", ac_name(c)))

    def part(prefix, pos):
        return [(ix.a_code[c[pos]] if pos < 2 else c[2], f"{prefix}_g{ix.ac_code[c]}") for c in ix.ac]

    for u in ix.ring:
        for i in g.edges:
            i1, i2 = g.ends[i]
            pre = f"dac_u{u}_{i}"
            e = f"e_u{u}_{i}"
            m.add(F, f"ac_one_u{u}_{i}", [(1, f"{pre}_g{ix.ac_code[c]}") for c in ix.ac] + [(-1, e)], "=", 0)
            mult = part(pre, 2)
            m.add(F, f"ac_m_lb_u{u}_{i}", mult + [(-1, f"bt_u{u}_{i}"), (-3, e)], ">=", -3)
            m.add(F, f"ac_m_ub_u{u}_{i}", mult + [(-1, f"bt_u{u}_{i}")], "<=", 0)
            for tag, pos, end in (("a", 0, i1), ("b", 1, i2)):
                body = part(pre, pos) + [(-1, f"a_u{u}_{end}")]
                m.add(F, f"ac_{tag}_lb_u{u}_{i}", body + [(-nL, e)], ">=", -nL)
                m.add(F, f"ac_{tag}_ub_u{u}_{i}", body, "<=", 0)
    for k, _ in enumerate(ix.tree.edges):
        pre = f"dact_e{k}"
        m.add(F, f"act_one_e{k}", [(1, f"{pre}_g{ix.ac_code[c]}") for c in ix.ac], "=", 1)
        m.add(F, f"act_m_e{k}", part(pre, 2) + [(-1, f"b_e{k}")], "=", 0)
    for k, u, v in ix.nonring_edges:
        pre = f"dact_e{k}"
        for tag, pos, node in (("a", 0, u), ("b", 1, v)):
            if not ix.tree.is_ring(node):
                m.add(F, f"act_{tag}_e{k}", part(pre, pos) + [(-1, f"an_v{node}")], "=", 0)
            else:
                for mu in g.vertices:
                    xn = f"xn_u{node}_e{k}_{mu}"
                    body = part(pre, pos) + [(-1, f"a_u{node}_{mu}")]
                    m.add(F, f"act_{tag}_lb_e{k}_{mu}", body + [(-nL, xn)], ">=", -nL)
                    m.add(F, f"act_{tag}_ub_e{k}_{mu}", body + [(nL, xn)], "<=", nL)
    for k, u, w in ix.ring_edges:
        pre = f"dact_e{k}"
        for i in g.edges:
            i1, i2 = g.ends[i]
            xa = f"xe_u{u}_e{k}_{i}"
            for tag, pos, end in (("a", 0, i1), ("b", 1, i2)):
                body = part(pre, pos) + [(-1, f"a_u{u}_{end}")]
                m.add(F, f"acr_{tag}_lb_e{k}_{i}", body + [(-nL, xa)], ">=", -nL)
                m.add(F, f"acr_{tag}_ub_e{k}_{i}", body + [(nL, xa)], "<=", nL)
    for c in ix.ac:
        both = {c, reverse_config(c)}
        codes = sorted(ix.ac_code[x] for x in both)
        terms = [(1, f"acint_g{ix.ac_code[c]}")]
        for q in codes:
            terms += [(-1, f"dac_u{u}_{i}_g{q}") for u in ix.ring for i in g.edges]
            terms += [(-1, f"dact_e{k}_g{q}") for k, _, _ in ix.nonring_edges]
            terms += [(1, f"dact_e{k}_g{q}") for k, _, _ in ix.ring_edges]
        m.add(F, f"acint_g{ix.ac_code[c]}", terms, "=", 0)


# ---------------------------------------------------------------- edge configurations


def _edge_config(m: MilpModel, ix: Index):
    F = "edge_config"
    g, s = ix.g, ix.spec
    D = range(1, 5)
    for u in ix.ring:
        for i in g.edges:
            for c in ix.ec:
                m.add_var(f"dec_u{u}_{i}_t{ix.ec_code[c]}", BINARY, role=("ec_is", u, i, ec_name(c)))
    for k, _ in enumerate(ix.tree.edges):
        for c in ix.ec:
            m.add_var(f"dect_e{k}_t{ix.ec_code[c]}", BINARY, role=("ec_is_tree", k, ec_name(c)))
    for c in ix.ec:
        lb, ub = s.ec_int[c]
        m.add_var(f"ecint_t{ix.ec_code[c]}", INTEGER, lb, ub, ("ec_int", ec_name(c)))

    def proj(prefix):
        return [(ix.ac_code[(c[0][0], c[1][0], c[2])], f"{prefix}_t{ix.ec_code[c]}") for c in ix.ec]

    def degs(prefix, pos):
        return [(c[pos][1], f"{prefix}_t{ix.ec_code[c]}") for c in ix.ec]

    def vdeg(u, mu, sign=-1):
        return [(sign * d, f"ddeg_u{u}_{mu}_d{d}") for d in D]

    for u in ix.ring:
        for i in g.edges:
            i1, i2 = g.ends[i]
            pre = f"dec_u{u}_{i}"
            e = f"e_u{u}_{i}"
            m.add(F, f"ec_one_u{u}_{i}", [(1, f"{pre}_t{ix.ec_code[c]}") for c in ix.ec] + [(-1, e)], "=", 0)
            acs = [(-ix.ac_code[c], f"dac_u{u}_{i}_g{ix.ac_code[c]}") for c in ix.ac]
            m.add(F, f"ec_ac_u{u}_{i}", proj(pre) + acs, "=", 0)
            for tag, pos, end in (("a", 0, i1), ("b", 1, i2)):
                body = degs(pre, pos) + vdeg(u, end)
                m.add(F, f"ec_d{tag}_lb_u{u}_{i}", body + [(-4, e)], ">=", -4)
                m.add(F, f"ec_d{tag}_ub_u{u}_{i}", body, "<=", 0)
    for k, _ in enumerate(ix.tree.edges):
        pre = f"dect_e{k}"
        m.add(F, f"ect_one_e{k}", [(1, f"{pre}_t{ix.ec_code[c]}") for c in ix.ec], "=", 1)
        acs = [(-ix.ac_code[c], f"dact_e{k}_g{ix.ac_code[c]}") for c in ix.ac]
        m.add(F, f"ect_ac_e{k}", proj(pre) + acs, "=", 0)
    for k, u, v in ix.nonring_edges:
        pre = f"dect_e{k}"
        for tag, pos, node in (("a", 0, u), ("b", 1, v)):
            if not ix.tree.is_ring(node):
                m.add(F, f"ect_d{tag}_e{k}", degs(pre, pos) + [(-d, f"ddegn_v{node}_d{d}") for d in D], "=", 0)
            else:
                for mu in g.vertices:
                    xn = f"xn_u{node}_e{k}_{mu}"
                    body = degs(pre, pos) + vdeg(node, mu)
                    m.add(F, f"ect_d{tag}_lb_e{k}_{mu}", body + [(-4, xn)], ">=", -4)
                    m.add(F, f"ect_d{tag}_ub_e{k}_{mu}", body + [(4, xn)], "<=", 4)
    for k, u, w in ix.ring_edges:
        pre = f"dect_e{k}"
        for i in g.edges:
            i1, i2 = g.ends[i]
            xa = f"xe_u{u}_e{k}_{i}"
            for tag, pos, end in (("a", 0, i1), ("b", 1, i2)):
                body = degs(pre, pos) + vdeg(u, end)
                m.add(F, f"ecr_d{tag}_lb_e{k}_{i}", body + [(-4, xa)], ">=", -4)
                m.add(F, f"ecr_d{tag}_ub_e{k}_{i}", body + [(4, xa)], "<=", 4)
    for c in ix.ec:
        both = {c, reverse_config(c)}
        codes = sorted(ix.ec_code[x] for x in both)
        terms = [(1, f"ecint_t{ix.ec_code[c]}")]
        for q in codes:
            terms += [(-1, f"dec_u{u}_{i}_t{q}") for u in ix.ring for i in g.edges]
            terms += [(-1, f"dect_e{k}_t{q}") for k, _, _ in ix.nonring_edges]
            terms += [(1, f"dect_e{k}_t{q}") for k, _, _ in ix.ring_edges]
        m.add(F, f"ecint_t{ix.ec_code[c]}", terms, "=", 0)


# ---------------------------------------------------------------- hyperplane


def descriptor_variables(ix: Index) -> dict[str, str]:
    """Feature column name -> model variable holding that descriptor."""
    out = {"n_heavy": "n_G", "rank": "rank", "n_int": "n_int", "ms_avg": "msbar"}
    for d in range(1, 5):
        out[f"dg{d}"] = f"dgall_d{d}"
        out[f"dg_int{d}"] = f"dgi_d{d}"
    for b in (2, 3):
        out[f"bd_int{b}"] = f"bd_m{b}"
    for a in ix.heavy:
        out[f"na_int:{a.label}"] = f"naint_a{ix.a_code[a]}"
        out[f"na_ex:{a.label}"] = f"naex_a{ix.a_code[a]}"
    for c in ix.ec:
        if c <= reverse_config(c):
            out[f"ec:{ec_name(c)}"] = f"ecint_t{ix.ec_code[c]}"
    for c in ix.f_all:
        out[f"fc:{c}"] = f"fc_f{ix.f_code[c]}"
    for c in ix.lf:
        out[f"aclf:{ac_name(c)}"] = f"aclf_g{ix.lf_code[c]}"
    for x in ix.xi_all:
        out[f"cc:{x.name}"] = f"cc_x{ix.xi_code[x]}"
    return out


def hyperplane_expression(ix: Index, hyperplane) -> list:
    lookup = descriptor_variables(ix)
    terms = []
    missing = []
    for name, w in zip(hyperplane.column_names, hyperplane.weights):
        w = float(w)
        if w == 0.0:
            continue
        if name not in lookup:
            missing.append(name)
            continue
        terms.append((w, lookup[name]))
    if missing:
        raise MilpBuildError(
            "model uses descriptors the specification cannot express: " + ", ".join(missing[:10])
            + (" ..." if len(missing) > 10 else "")
        )
    return terms
