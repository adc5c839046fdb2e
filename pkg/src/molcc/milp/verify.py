"""Independent re-featurization and bound checking of an inferred graph."""

from __future__ import annotations

import json
from fractions import Fraction

from ..chemgraph import ChemicalGraph
from ..cycleconf import cycle_configurations
from ..twolayer import OutOfDictionaryError, ac_name, ec_name, molecule_descriptors, reverse_config
from .build import Index, descriptor_variables
from .spec import Specification

ETA_TOL = 1e-6


class _Report:
    def __init__(self):
        self.checks = []

    def add(self, name, ok, value=None, detail=""):
        self.checks.append({"check": name, "passed": bool(ok), "value": value, "detail": detail})

    def bound(self, name, value, lb, ub):
        self.add(name, lb <= value <= ub, value, f"[{lb}, {ub}]")


def _canon(c):
    return min(c, reverse_config(c))


def verify_solution(graph: ChemicalGraph, spec: Specification, hyperplane=None, dictionary=None, sol: dict | None = None) -> dict:
    """Checks on a decoded graph; every failure is a report entry, never an exception."""
    rep = _Report()
    ix = Index(spec)
    unsat = [i for i, a in enumerate(graph.atoms) if graph.bond_sum(i) != a.valence]
    rep.add("valence_saturated", not unsat, len(unsat), "atoms with unused valence: " + " ".join(map(str, unsat[:10])))
    try:
        desc = molecule_descriptors(graph, spec.rho)
    except Exception as exc:  # any featurization failure is a failed check
        rep.add("featurize", False, None, str(exc))
        return _finish(rep)
    rep.add("featurize", True)
    h = desc.decomposition.h
    cc = cycle_configurations(h.adjacency, {u: t.mass_star for u, t in desc.fringe.items()}, spec.c_min, spec.c_max)

    # bounds
    rep.bound("n", desc.n_heavy, *spec.n_bounds)
    rep.bound("n_int", desc.n_int, *spec.n_int_bounds)
    rep.add("rank", desc.rank == len(ix.ring), desc.rank, f"{len(ix.ring)} ring nodes")
    elems = set(spec.elements)
    stray = sorted({a.label for a in graph.atoms if a not in elems})
    rep.add("elements_available", not stray, stray)
    for a in ix.heavy:
        rep.bound(f"na_int[{a.label}]", desc.na_int.get(a, 0), *spec.na_int[a])
    for a in ix.elements:
        ex = desc.na_all.get(a, 0) if a.is_hydrogen else desc.na_ex.get(a, 0)
        rep.bound(f"na_ex[{a.label}]", ex, *spec.na_ex[a])
        rep.bound(f"na[{a.label}]", desc.na_all.get(a, 0), *spec.na[a])
    extra = sorted(set(desc.fc) - set(ix.f_all))
    rep.add("fringe_trees_available", not extra, extra)
    for c in ix.f_all:
        rep.bound(f"fc[{c}]", desc.fc.get(c, 0), *spec.fc[c])
    extra = sorted(ac_name(c) for c in desc.ac_int if c not in ix.ac_code)
    rep.add("adjacency_configurations_available", not extra, extra)
    for c in ix.ac:
        if c == _canon(c):
            rep.bound(f"ac_int[{ac_name(c)}]", desc.ac_int.get(c, 0), *spec.ac_int[c])
    extra = sorted(ac_name(c) for c in desc.ac_lf if c not in ix.lf_code)
    rep.add("leaf_configurations_available", not extra, extra)
    for c in ix.lf:
        rep.bound(f"ac_lf[{ac_name(c)}]", desc.ac_lf.get(c, 0), *spec.ac_lf[c])
    extra = sorted(ec_name(c) for c in desc.ec if c not in ix.ec_code)
    rep.add("edge_configurations_available", not extra, extra)
    for c in ix.ec:
        if c == _canon(c):
            rep.bound(f"ec_int[{ec_name(c)}]", desc.ec.get(c, 0), *spec.ec_int[c])
    extra = sorted(x.name for x in cc if x not in ix.xi_code)
    rep.add("cycle_configurations_available", not extra, extra)

    # descriptor values held by the solution
    if sol is not None:
        lookup = descriptor_variables(ix)
        values = _named_values(desc, cc, ix)
        for col, var in sorted(lookup.items()):
            want = values.get(col, 0)
            got = sol.get(var)
            if got is None:
                rep.add(f"solution[{col}]", False, None, f"variable {var} missing")
                continue
            if isinstance(want, Fraction):
                ok = abs(float(want) - got) <= 1e-6
            else:
                ok = round(got) == want and abs(got - want) <= 1e-5
            rep.add(f"solution[{col}]", ok, got, f"recomputed {float(want) if isinstance(want, Fraction) else want}")
        for name, want in (("Mass", desc.mass_sum), ("rank", desc.rank), ("n_int", desc.n_int)):
            got = sol.get(name)
            rep.add(f"solution[{name}]", got is not None and abs(got - want) <= 1e-5, got, f"recomputed {want}")

    # prediction
    if hyperplane is not None and dictionary is not None:
        from ..features import Molecule, feature_row

        try:
            row = feature_row(Molecule("inferred", graph, desc, cc), dictionary)
        except OutOfDictionaryError as exc:
            rep.add("descriptors_in_dictionary", False, None, str(exc))
            return _finish(rep)
        rep.add("descriptors_in_dictionary", True)
        by_name = dict(zip(dictionary.column_names(), row))
        missing = [n for n in hyperplane.column_names if n not in by_name]
        if missing:
            rep.add("model_columns_in_dictionary", False, missing[:10])
            return _finish(rep)
        eta = float(hyperplane.bias) + sum(float(w) * float(by_name[n]) for n, w in zip(hyperplane.column_names, hyperplane.weights))
        rep.add("prediction_in_range", spec.y_lb - ETA_TOL <= eta <= spec.y_ub + ETA_TOL, eta, f"[{spec.y_lb}, {spec.y_ub}]")
    return _finish(rep)


def _named_values(desc, cc, ix: Index) -> dict:
    out = {"n_heavy": desc.n_heavy, "rank": desc.rank, "n_int": desc.n_int, "ms_avg": desc.ms_avg}
    for d in range(1, 5):
        out[f"dg{d}"] = desc.dg.get(d, 0)
        out[f"dg_int{d}"] = desc.dg_int.get(d, 0)
    for b in (2, 3):
        out[f"bd_int{b}"] = desc.bd_int.get(b, 0)
    for a in ix.heavy:
        out[f"na_int:{a.label}"] = desc.na_int.get(a, 0)
        out[f"na_ex:{a.label}"] = desc.na_ex.get(a, 0)
    for c, n in desc.ec.items():
        out[f"ec:{ec_name(c)}"] = n
    for c, n in desc.fc.items():
        out[f"fc:{c}"] = n
    for c, n in desc.ac_lf.items():
        out[f"aclf:{ac_name(c)}"] = n
    for x, n in cc.items():
        out[f"cc:{x.name}"] = n
    return out


def _finish(rep: _Report) -> dict:
    return {"passed": all(c["passed"] for c in rep.checks), "checks": rep.checks}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=1, default=str) + "\n"
