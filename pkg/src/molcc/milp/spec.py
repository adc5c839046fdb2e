"""Seed trees and inference specifications (JSON in, validated objects out)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..chemgraph import HYDROGEN, Element, element_from_label
from ..cycleconf import CycleConfiguration, canonicalize_cycle
from ..fringetree import TreeCodeError, describe_code
from ..twolayer import ac_name, ec_name, reverse_config
from .model import MilpBuildError

SPEC_FORMAT = "molcc-spec/1"


class SpecError(MilpBuildError):
    pass


@dataclass
class SeedTree:
    nodes: list  # [(id, ring)]
    edges: list  # [(u, v, ring)] with index order of u before v

    def __post_init__(self):
        ids = [n for n, _ in self.nodes]
        if any(n < 0 for n in ids):
            raise SpecError("seed tree node ids must be non-negative integers")
        if len(set(ids)) != len(ids):
            raise SpecError("seed tree has duplicate node ids")
        if not ids:
            raise SpecError("seed tree has no nodes")
        self.nodes = sorted(self.nodes, key=lambda t: t[0])
        pos = {n: i for i, (n, _) in enumerate(self.nodes)}
        ring = dict(self.nodes)
        norm = []
        seen = set()
        for u, v, r in self.edges:
            if u not in pos or v not in pos:
                raise SpecError(f"seed tree edge ({u}, {v}) references an unknown node")
            if u == v:
                raise SpecError(f"seed tree edge ({u}, {v}) is a loop")
            if pos[u] > pos[v]:
                u, v = v, u
            if (u, v) in seen:
                raise SpecError(f"seed tree edge ({u}, {v}) is duplicated")
            seen.add((u, v))
            if r and not (ring[u] and ring[v]):
                raise SpecError(f"ring edge ({u}, {v}) must join two ring nodes")
            norm.append((u, v, bool(r)))
        self.edges = sorted(norm, key=lambda e: (pos[e[0]], pos[e[1]]))
        if len(self.edges) != len(self.nodes) - 1:
            raise SpecError("seed tree must have exactly |V|-1 edges")
        adj = {n: [] for n in ids}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen_n = {ids[0]}
        stack = [ids[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen_n:
                    seen_n.add(y)
                    stack.append(y)
        if len(seen_n) != len(ids):
            raise SpecError("seed tree is not connected")

    @property
    def node_ids(self) -> list:
        return [n for n, _ in self.nodes]

    @property
    def ring_nodes(self) -> list:
        return [n for n, r in self.nodes if r]

    @property
    def nonring_nodes(self) -> list:
        return [n for n, r in self.nodes if not r]

    @property
    def ring_edges(self) -> list:
        return [e for e in self.edges if e[2]]

    @property
    def nonring_edges(self) -> list:
        return [e for e in self.edges if not e[2]]

    def is_ring(self, n) -> bool:
        return dict(self.nodes)[n]

    def incident(self, n, ring: bool) -> list:
        return [e for e in self.edges if e[2] == ring and n in (e[0], e[1])]

    def degree(self, n) -> int:
        return sum(1 for e in self.edges if n in (e[0], e[1]))

    def to_obj(self) -> dict:
        return {
            "nodes": [{"id": n, "ring": r} for n, r in self.nodes],
            "edges": [{"u": u, "v": v, "ring": r} for u, v, r in self.edges],
        }

    @classmethod
    def from_obj(cls, obj) -> "SeedTree":
        try:
            nodes = [(int(n["id"]), bool(n.get("ring", False))) for n in obj["nodes"]]
            edges = [(int(e["u"]), int(e["v"]), bool(e.get("ring", False))) for e in obj.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed seed tree: {exc}") from None
        return cls(nodes, edges)


def _pair(v, what):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SpecError(f"bound {what} must be [lb, ub]")
    return int(v[0]), int(v[1])


def _ac_from(obj):
    return (element_from_label(obj[0]), element_from_label(obj[1]), int(obj[2]))


def _ec_from(obj):
    return ((element_from_label(obj[0]), int(obj[1])), (element_from_label(obj[2]), int(obj[3])), int(obj[4]))


def _canon(c):
    r = reverse_config(c)
    return min(c, r)


@dataclass
class Specification:
    seed_tree: SeedTree
    elements: list  # Element list incl. hydrogen
    xi: dict  # ring node -> [CycleConfiguration]
    fringe: dict  # node -> [code]
    gamma_ac_int: list
    gamma_ac_lf: list
    gamma_ec_int: list
    n_bounds: tuple
    n_int_bounds: tuple
    na_int: dict  # Element -> (lb, ub)
    na_ex: dict
    na: dict
    fc: dict  # code -> (lb, ub)
    ac_int: dict  # ac tuple -> (lb, ub), every orientation present
    ac_lf: dict
    ec_int: dict
    y_lb: float
    y_ub: float
    rho: int = 2
    c_min: int = 4
    c_max: int = 6

    # ------------------------------------------------------------ derived sets

    @property
    def heavy_elements(self) -> list:
        return [a for a in self.elements if not a.is_hydrogen]

    @property
    def xi_all(self) -> list:
        s = {x for v in self.xi.values() for x in v}
        return sorted(s, key=lambda x: (x.length, x.ranks))

    @property
    def fringe_all(self) -> list:
        return sorted({c for v in self.fringe.values() for c in v})

    def validate(self) -> "Specification":
        t = self.seed_tree
        if not (3 <= self.c_min <= self.c_max):
            raise SpecError(f"need 3 <= c_min <= c_max, got c_min={self.c_min}, c_max={self.c_max}")
        if self.rho < 1:
            raise SpecError("rho must be at least 1")
        if HYDROGEN not in self.elements:
            self.elements = sorted(set(self.elements) | {HYDROGEN})
        self.elements = sorted(set(self.elements))
        elems = set(self.elements)
        for u in t.ring_nodes:
            xs = self.xi.get(u)
            if not xs:
                raise SpecError(f"ring node {u} has no available cycle configurations")
            for x in xs:
                if not (self.c_min <= x.length <= self.c_max):
                    raise SpecError(f"cycle configuration {x.name} has length outside [{self.c_min}, {self.c_max}]")
                if canonicalize_cycle(x.ranks) != x:
                    raise SpecError(f"cycle configuration {x.name} is not in canonical form")
                if sorted(set(x.ranks)) != list(range(1, max(x.ranks) + 1)):
                    raise SpecError(f"cycle configuration {x.name} skips a rank")
        for n in t.node_ids:
            codes = self.fringe.get(n)
            if not codes:
                raise SpecError(f"node {n} has no available fringe trees")
            for c in codes:
                try:
                    info = describe_code(c)
                except TreeCodeError as exc:
                    raise SpecError(str(exc)) from None
                if info.height > self.rho:
                    raise SpecError(f"fringe tree {c} is taller than rho={self.rho}")
                used = {info.root_element} | set(info.per_element_non_root_counts)
                if not used <= elems:
                    bad = " ".join(sorted(a.label for a in used - elems))
                    raise SpecError(f"fringe tree {c} uses elements outside the element set: {bad}")
        for name, lst in (("gamma_ac_int", self.gamma_ac_int), ("gamma_ec_int", self.gamma_ec_int)):
            closed = set(lst) | {reverse_config(c) for c in lst}
            setattr(self, name, sorted(closed, key=_sort_key))
        self.gamma_ac_lf = sorted(set(self.gamma_ac_lf), key=_sort_key)
        ac = set(self.gamma_ac_int)
        for (a, _), (b, _), m in self.gamma_ec_int:
            if (a, b, m) not in ac:
                raise SpecError(f"edge configuration projection {ac_name((a, b, m))} missing from gamma_ac_int")
        for cfg in list(self.gamma_ac_int) + list(self.gamma_ac_lf):
            if not {cfg[0], cfg[1]} <= elems:
                raise SpecError(f"configuration {ac_name(cfg)} uses elements outside the element set")
        self._close_bounds()
        return self

    def _close_bounds(self):
        n_ub = self.n_bounds[1]
        cfg_ub = n_ub + len(self.seed_tree.ring_nodes) - 1

        def fill(bounds: dict, keys, default, label, fmt, closed=False):
            out = {}
            for k in keys:
                lb, ub = default(k)
                for kk in ((k, reverse_config(k)) if closed else (k,)):
                    if kk in bounds:
                        lb, ub = max(lb, bounds[kk][0]), min(ub, bounds[kk][1])
                if lb > ub:
                    raise SpecError(f"infeasible bound {label}[{fmt(k)}]: lower {lb} > upper {ub}")
                out[k] = (lb, ub)
            for k in bounds:
                if k not in out:
                    raise SpecError(f"bound {label}[{fmt(k)}] refers to an unavailable item")
            return out

        lab = lambda a: a.label
        hub = 4 * n_ub
        heavy = self.heavy_elements
        for what, pair in (("n", self.n_bounds), ("n_int", self.n_int_bounds)):
            if pair[0] > pair[1]:
                raise SpecError(f"infeasible bound {what}: lower {pair[0]} > upper {pair[1]}")
        self.na_int = fill(self.na_int, heavy, lambda a: (0, n_ub), "na_int", lab)
        self.na_ex = fill(self.na_ex, self.elements, lambda a: (0, hub if a.is_hydrogen else n_ub), "na_ex", lab)
        self.na = fill(self.na, self.elements, lambda a: (0, hub if a.is_hydrogen else n_ub), "na", lab)
        self.fc = fill(self.fc, self.fringe_all, lambda c: (0, n_ub), "fc", str)
        self.ac_lf = fill(self.ac_lf, self.gamma_ac_lf, lambda c: (0, n_ub), "ac_lf", ac_name)
        self.ac_int = fill(self.ac_int, self.gamma_ac_int, lambda c: (0, cfg_ub), "ac_int", ac_name, closed=True)
        self.ec_int = fill(self.ec_int, self.gamma_ec_int, lambda c: (0, cfg_ub), "ec_int", ec_name, closed=True)

    # ------------------------------------------------------------ JSON

    def to_json(self) -> str:
        t = self.seed_tree
        obj = {
            "format": SPEC_FORMAT,
            "rho": self.rho,
            "c_min": self.c_min,
            "c_max": self.c_max,
            "seed_tree": t.to_obj(),
            "elements": [a.label for a in self.elements],
            "xi": {str(u): [x.name for x in self.xi[u]] for u in t.ring_nodes},
            "fringe": {str(n): list(self.fringe[n]) for n in t.node_ids},
            "gamma_ac_int": [[a.label, b.label, m] for a, b, m in self.gamma_ac_int],
            "gamma_ac_lf": [[a.label, b.label, m] for a, b, m in self.gamma_ac_lf],
            "gamma_ec_int": [[a.label, da, b.label, db, m] for (a, da), (b, db), m in self.gamma_ec_int],
            "bounds": {
                "n": list(self.n_bounds),
                "n_int": list(self.n_int_bounds),
                "na_int": {a.label: list(v) for a, v in self.na_int.items()},
                "na_ex": {a.label: list(v) for a, v in self.na_ex.items()},
                "na": {a.label: list(v) for a, v in self.na.items()},
                "fc": {c: list(v) for c, v in self.fc.items()},
                "ac_int": {ac_name(c): list(v) for c, v in self.ac_int.items()},
                "ac_lf": {ac_name(c): list(v) for c, v in self.ac_lf.items()},
                "ec_int": {ec_name(c): list(v) for c, v in self.ec_int.items()},
            },
            "y_lb": self.y_lb,
            "y_ub": self.y_ub,
        }
        return json.dumps(obj, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str, seed_tree: SeedTree | None = None) -> "Specification":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid specification JSON: {exc}") from None
        if obj.get("format", SPEC_FORMAT) != SPEC_FORMAT:
            raise SpecError(f"unsupported specification format {obj.get('format')!r}")
        try:
            return cls._from_obj(obj, seed_tree)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed specification: {exc!r}") from None

    @classmethod
    def _from_obj(cls, obj, seed_tree):
        t = seed_tree or SeedTree.from_obj(obj["seed_tree"])

        def per_node(val, nodes, conv):
            if isinstance(val, dict):
                return {n: [conv(x) for x in val.get(str(n), val.get(n, []))] for n in nodes}
            return {n: [conv(x) for x in val] for n in nodes}

        xi = per_node(obj.get("xi", []), t.ring_nodes, CycleConfiguration.parse)
        fringe = per_node(obj["fringe"], t.node_ids, str)
        ac_int = [_ac_from(x) for x in obj.get("gamma_ac_int", [])]
        ac_lf = [_ac_from(x) for x in obj.get("gamma_ac_lf", [])]
        ec_int = [_ec_from(x) for x in obj.get("gamma_ec_int", [])]
        if obj.get("derive_gamma_ac_int", not ac_int):
            ac_int = sorted({(a, b, m) for (a, _), (b, _), m in ec_int} | set(ac_int), key=_sort_key)
        b = obj.get("bounds", {})
        ac_lookup = {ac_name(c): c for c in ac_int} | {ac_name(reverse_config(c)): reverse_config(c) for c in ac_int}
        lf_lookup = {ac_name(c): c for c in ac_lf}
        ec_lookup = {ec_name(c): c for c in ec_int} | {ec_name(reverse_config(c)): reverse_config(c) for c in ec_int}

        def keyed(d, lookup, what):
            out = {}
            for k, v in (d or {}).items():
                if k not in lookup:
                    raise SpecError(f"bound {what}[{k}] refers to an unavailable item")
                out[lookup[k]] = _pair(v, f"{what}[{k}]")
            return out

        elements = sorted({element_from_label(x) for x in obj["elements"]} | {HYDROGEN})
        el_lookup = {a.label: a for a in elements}
        spec = cls(
            seed_tree=t,
            elements=elements,
            xi=xi,
            fringe=fringe,
            gamma_ac_int=ac_int,
            gamma_ac_lf=ac_lf,
            gamma_ec_int=ec_int,
            n_bounds=_pair(b.get("n", [1, 50]), "n"),
            n_int_bounds=_pair(b.get("n_int", list(b.get("n", [1, 50]))), "n_int"),
            na_int=keyed(b.get("na_int"), el_lookup, "na_int"),
            na_ex=keyed(b.get("na_ex"), el_lookup, "na_ex"),
            na=keyed(b.get("na"), el_lookup, "na"),
            fc={k: _pair(v, f"fc[{k}]") for k, v in b.get("fc", {}).items()},
            ac_int=keyed(b.get("ac_int"), ac_lookup, "ac_int"),
            ac_lf=keyed(b.get("ac_lf"), lf_lookup, "ac_lf"),
            ec_int=keyed(b.get("ec_int"), ec_lookup, "ec_int"),
            y_lb=float(obj["y_lb"]),
            y_ub=float(obj["y_ub"]),
            rho=int(obj.get("rho", 2)),
            c_min=int(obj.get("c_min", 4)),
            c_max=int(obj.get("c_max", 6)),
        )
        return spec.validate()


def _sort_key(c):
    a, b, m = c
    return (a, b, m)


def load_specification(path, seed_tree_path=None) -> Specification:
    tree = None
    if seed_tree_path is not None:
        tree = SeedTree.from_obj(json.loads(Path(seed_tree_path).read_text()))
    return Specification.from_json(Path(path).read_text(), tree)


def spec_from_dictionary(dictionary, seed_tree: SeedTree, y_lb: float, y_ub: float, n_bounds=(1, 50)) -> Specification:
    """A permissive specification whose available sets are everything seen in a dictionary."""
    elements = sorted(set(dictionary.lambda_int) | set(dictionary.lambda_ex) | {HYDROGEN})
    for code in dictionary.fringe_codes:
        info = describe_code(code)
        elements = sorted(set(elements) | {info.root_element} | set(info.per_element_non_root_counts))
    xis = [x for x in dictionary.xi_set if dictionary.c_min <= x.length <= dictionary.c_max]
    ec = list(dictionary.gamma_int_ec)
    ac = sorted({(a, b, m) for (a, _), (b, _), m in ec}, key=_sort_key)
    spec = Specification(
        seed_tree=seed_tree,
        elements=elements,
        xi={u: list(xis) for u in seed_tree.ring_nodes},
        fringe={n: list(dictionary.fringe_codes) for n in seed_tree.node_ids},
        gamma_ac_int=ac,
        gamma_ac_lf=list(dictionary.gamma_lf_ac),
        gamma_ec_int=ec,
        n_bounds=tuple(n_bounds),
        n_int_bounds=tuple(n_bounds),
        na_int={},
        na_ex={},
        na={},
        fc={},
        ac_int={},
        ac_lf={},
        ec_int={},
        y_lb=y_lb,
        y_ub=y_ub,
        rho=dictionary.rho,
        c_min=dictionary.c_min,
        c_max=dictionary.c_max,
    )
    return spec.validate()
