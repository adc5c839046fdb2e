from __future__ import annotations

import json
import time

import pytest

from helpers import five_ring_case, seed_tree_shapes, shaped_spec_json
from lp_reader import parse_lp, solve_with_scipy
from molcc.cycleconf import CycleConfiguration
from molcc.features import analyse, read_dictionary_json
from molcc.milp.build import FAMILIES, Gadget, build_milp, xi_hat
from molcc.milp.decode import DecodeError, decode_solution
from molcc.milp.encode import RingLayout, encode, expand
from molcc.milp.model import MilpBuildError, read_solution_text, solution_text
from molcc.milp.spec import SpecError, Specification, load_specification
from molcc.milp.verify import verify_solution
from molcc.regress import Hyperplane


@pytest.fixture
def toy(data_dir):
    spec = load_specification(data_dir / "toy_spec.json")
    hyper = Hyperplane.from_json((data_dir / "toy_model.json").read_text())
    dictionary = read_dictionary_json(data_dir / "toy_dict.json")
    model = build_milp(spec, hyper, dictionary)
    sol = read_solution_text((data_dir / "toy_solution.txt").read_text(), known=model.variables)
    return spec, hyper, dictionary, model, sol


def _toy_obj(data_dir):
    return json.loads((data_dir / "toy_spec.json").read_text())


# ---------------------------------------------------------------- gadget and start sets


def test_gadget_shape():
    g = Gadget(4, 6)
    assert len(g.edges) == 2 * 6 - 4 and g.vertices == list(range(1, 7))
    for ell in range(4, 7):
        es = g.cycle_edges(ell)
        assert len(es) == ell
        deg = {}
        for i in es:
            for v in g.ends[i]:
                deg[v] = deg.get(v, 0) + 1
        assert sorted(deg) == list(range(1, ell + 1)) and set(deg.values()) == {2}


def _mirror(p, ell):
    return (-p) % ell or ell


def test_xi_hat_examples():
    xi = CycleConfiguration((1, 1, 2, 3))
    assert xi_hat(xi, 1, 1, "+") == {1, 4}
    assert xi_hat(xi, 4, 1, "+") == set()
    assert xi_hat(xi, 1, 7, "+") == set()


def test_xi_hat_brute_force_and_mirror():
    for ranks in [(1, 1, 1, 2), (1, 1, 2, 3), (1, 2, 1, 2, 3), (1, 1, 2, 1, 3, 4)]:
        xi = CycleConfiguration(ranks)
        ell = len(ranks)
        for mu in range(1, ell + 1):
            for r in range(1, 5):
                plus = {m0 for m0 in range(1, ell + 1) if ranks[(mu - m0) % ell] == r}
                assert xi_hat(xi, r, mu, "+") == plus
                mirrored = {_mirror(s, ell) for s in xi_hat(xi, r, _mirror(mu, ell), "+")}
                assert xi_hat(xi, r, mu, "-") == mirrored


# ---------------------------------------------------------------- specification


def test_spec_infeasible_bound_named(data_dir):
    obj = _toy_obj(data_dir)
    obj["bounds"]["fc"] = {"C4h2": [3, 1]}
    with pytest.raises(SpecError, match=r"fc\[C4h2\]"):
        Specification.from_json(json.dumps(obj))
    obj = _toy_obj(data_dir)
    obj["bounds"]["n"] = [9, 4]
    with pytest.raises(SpecError, match="infeasible bound n"):
        Specification.from_json(json.dumps(obj))


def test_spec_rejects_bad_items(data_dir):
    obj = _toy_obj(data_dir)
    obj["xi"] = ["1,2,1,1"]
    with pytest.raises(SpecError, match="canonical"):
        Specification.from_json(json.dumps(obj))
    obj = _toy_obj(data_dir)
    obj["fringe"] = ["C4h1(1N3h2)"]
    with pytest.raises(SpecError, match="element"):
        Specification.from_json(json.dumps(obj))
    obj = _toy_obj(data_dir)
    obj["bounds"]["fc"] = {"C4h0": [0, 1]}
    with pytest.raises(SpecError, match="unavailable"):
        Specification.from_json(json.dumps(obj))


def test_spec_json_round_trip(data_dir):
    spec = load_specification(data_dir / "toy_spec.json")
    again = Specification.from_json(spec.to_json())
    assert again.to_json() == spec.to_json()


# ---------------------------------------------------------------- model text


def test_lp_text_is_well_formed(toy):
    _, _, _, model, _ = toy
    text = model.lp_text()
    prob = parse_lp(text)
    assert len(prob.rows) == model.n_constraints
    assert set(prob.names) == set(model.variables)
    assert max(len(n) for n in model.variables) <= 255
    assert all(len(line) <= 255 for line in text.splitlines())
    assert set(model.family_counts()) <= set(FAMILIES)


def test_varmap_and_solution_text(toy, tmp_path):
    _, _, _, model, sol = toy
    model.write(tmp_path / "m.lp", tmp_path / "m.json")
    vm = json.loads((tmp_path / "m.json").read_text())
    assert list(vm["variables"]) == list(model.variables)
    assert vm["constraint_families"] == dict(sorted(model.family_counts().items()))
    assert (tmp_path / "m.lp").read_text() == model.lp_text()
    assert read_solution_text(solution_text(sol)) == sol


def test_cycle_assignment_count_formula(data_dir):
    # per ring node: rank order, one selector link per configuration, one choice,
    # and two big-M rows per (rank, position); plus one count row per configuration
    spec = load_specification(data_dir / "toy_spec.json")
    m = build_milp(spec)
    c = spec.c_max
    xis = spec.xi[0]
    expect = (c - 1) + len(xis) + 1 + 2 * c * c + len(spec.xi_all)
    assert m.family_counts()["cycle_assignment"] == expect
    starts = sum(2 * x.length for x in xis)
    vars_expect = 2 * c + len(xis) + starts + len(spec.xi_all)
    vc = m.var_counts()
    assert vc["y"] + vc["z"] + vc["xi"] + vc["xi_start"] + vc["cc"] == vars_expect


def test_model_size_independent_of_seed_tree_shape(data_dir):
    base = _toy_obj(data_dir)
    (n1, e1), (n2, e2), (n3, e3) = seed_tree_shapes()
    a = build_milp(Specification.from_json(shaped_spec_json(base, n1, e1)))
    b = build_milp(Specification.from_json(shaped_spec_json(base, n2, e2)))
    c = build_milp(Specification.from_json(shaped_spec_json(base, n3, e3)))
    assert (a.n_vars, a.n_constraints) == (b.n_vars, b.n_constraints)
    assert c.n_vars > a.n_vars


def test_objectives(toy):
    spec, hyper, dictionary, _, _ = toy
    m = build_milp(spec, hyper, dictionary, objective="max")
    assert "\nMaximize\n" in m.lp_text()
    with pytest.raises(MilpBuildError, match="needs a model"):
        build_milp(spec, objective="min")
    with pytest.raises(MilpBuildError, match="unknown objective"):
        build_milp(spec, hyper, dictionary, objective="best")


def test_unmappable_weight_raises(toy):
    spec, hyper, dictionary, _, _ = toy
    hyper.column_names = list(hyper.column_names) + ["fc:C4h0(1N3h2)"]
    hyper.weights = list(hyper.weights) + [0.5]
    with pytest.raises(MilpBuildError, match=r"fc:C4h0\(1N3h2\)"):
        build_milp(spec, hyper, dictionary)
    hyper.weights[-1] = 0.0
    build_milp(spec, hyper, dictionary)


# ---------------------------------------------------------------- encode / decode / verify


def test_five_ring_round_trip():
    spec, layout = five_ring_case()
    model = build_milp(spec)
    exp = expand(spec, layout)
    mol = analyse("x", exp.graph, 2, 5, 6)
    assert mol.desc.rank == 5 and sum(mol.cc.values()) == 5
    sol = encode(spec, layout, model)
    assert model.violations(sol) == []
    dec = decode_solution(sol, model, spec)
    assert dec.graph.atoms == exp.graph.atoms and dec.graph.bonds == exp.graph.bonds
    assert verify_solution(dec.graph, spec, sol=sol)["passed"]


def test_ring_layout_from_fringes():
    r = RingLayout.from_fringes(["C4h1", "C4h1", "C4h2", "C4h1(1O2h1)"], c_min=4, c_max=6)
    assert r.length == 4 and r.xi.ranks == (1, 1, 2, 3)


def test_toy_solution_round_trip(toy):
    spec, hyper, dictionary, model, sol = toy
    assert model.violations(sol) == []
    dec = decode_solution(sol, model, spec)
    rep = verify_solution(dec.graph, spec, hyper, dictionary, sol)
    assert rep["passed"], [c for c in rep["checks"] if not c["passed"]]
    eta = next(c for c in rep["checks"] if c["check"] == "prediction_in_range")["value"]
    assert spec.y_lb <= eta <= spec.y_ub


def test_decode_rejects_bad_assignments(toy):
    spec, _, _, model, sol = toy
    broken = dict(sol)
    broken["xx_u0_x1"] = 0
    with pytest.raises(DecodeError, match="0 selections"):
        decode_solution(broken, model, spec)
    broken = dict(sol)
    del broken["xx_u0_x1"]
    with pytest.raises(DecodeError, match="missing"):
        decode_solution(broken, model, spec)
    broken = dict(sol)
    broken["xx_u0_x1"] = 0.5
    with pytest.raises(DecodeError, match="integral"):
        decode_solution(broken, model, spec)


def test_verify_flags_exactly_the_tightened_bound(data_dir, toy):
    _, _, _, model, sol = toy
    spec = load_specification(data_dir / "toy_spec.json")
    graph = decode_solution(sol, model, spec).graph
    used = analyse("g", graph, 2, 4, 6).desc.fc
    code, count = sorted(used.items())[0]
    obj = _toy_obj(data_dir)
    obj["bounds"]["fc"] = {code: [0, count - 1]}
    tight = Specification.from_json(json.dumps(obj))
    rep = verify_solution(graph, tight)
    assert [c["check"] for c in rep["checks"] if not c["passed"]] == [f"fc[{code}]"]


def test_toy_lp_solves_with_scipy(toy):
    pytest.importorskip("scipy.optimize")
    spec, hyper, dictionary, model, _ = toy
    t = time.time()
    res, sol = solve_with_scipy(parse_lp(model.lp_text()), 120)
    assert sol is not None, res.message
    assert time.time() - t < 120
    assert model.violations(sol, 1e-5) == []
    dec = decode_solution(sol, model, spec)
    assert verify_solution(dec.graph, spec, hyper, dictionary, sol)["passed"]
