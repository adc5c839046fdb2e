"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest -v tests/test_acceptance.py`` or directly with
``python3 tests/test_acceptance.py``; both print the nine summary lines.
"""

from __future__ import annotations

import filecmp
import json
import random
import sys
import tempfile
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import seed_tree_shapes, shaped_spec_json  # noqa: E402
from oracles import (  # noqa: E402
    all_symmetries,
    brute_canonical,
    chordless_cycles_oracle,
    ols_normal_equations,
    random_graph,
    random_rooted_tree,
    rooted_isomorphic,
    shuffled,
    soft_threshold,
)

from molcc.chemgraph import element  # noqa: E402
from molcc.cli import main as cli_main  # noqa: E402
from molcc.cycleconf import ChordlessCycle, CycleConfiguration, canonicalize_cycle, enumerate_chordless_cycles, rank_sequence  # noqa: E402
from molcc.features import build_dictionary, featurize_all, load_molecules, read_dataset, read_dictionary_json  # noqa: E402
from molcc.fringetree import canonicalize  # noqa: E402
from molcc.milp.build import build_milp  # noqa: E402
from molcc.milp.decode import decode_solution  # noqa: E402
from molcc.milp.model import read_solution_text  # noqa: E402
from molcc.milp.spec import Specification, load_specification  # noqa: E402
from molcc.milp.verify import verify_solution  # noqa: E402
from molcc.regress import Hyperplane, cross_validate, kkt_residuals, lasso_fit, standardize  # noqa: E402
from molcc.twolayer import descriptors_2l  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "molcc" / "data"


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    capman = _CAPTURE.get("capsys")
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


# ---------------------------------------------------------------- 1


def criterion_1():
    t = time.perf_counter()
    mols, _ = load_molecules((DATA / "phenols.sdf").read_text(), 2, 4, 6)
    by = {m.id: m for m in mols}
    d = build_dictionary(mols, 2, 4, 6)
    f = {k: descriptors_2l(m.desc, d) for k, m in by.items()}
    elapsed = time.perf_counter() - t
    C = element("C")
    want_ec = Counter({((C, 2), (C, 2), 1): 1, ((C, 2), (C, 2), 2): 2, ((C, 2), (C, 3), 1): 2, ((C, 3), (C, 3), 2): 1})
    names = d.column_names()
    diff = {names[j] for j in range(len(f["catechol"])) if f["catechol"][j] != f["resorcinol"][j]}
    checks = {
        "f_2L(resorcinol) == f_2L(hydroquinone)": f["resorcinol"] == f["hydroquinone"],
        "catechol differs only in the edge-configuration block": bool(diff) and all(n.startswith("ec:") for n in diff),
        "catechol edge configurations": by["catechol"].desc.ec == want_ec,
        "cc(resorcinol)": by["resorcinol"].cc == Counter({CycleConfiguration((1, 1, 1, 2, 1, 2)): 1}),
        "cc(hydroquinone)": by["hydroquinone"].cc == Counter({CycleConfiguration((1, 1, 2, 1, 1, 2)): 1}),
        "runtime < 1 s": elapsed < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"phenol discrimination ({elapsed:.3f} s){'; failed: ' + ', '.join(bad) if bad else ''}"


def test_criterion_1_phenol_discrimination():
    ok, detail = criterion_1()
    report(1, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 2


def criterion_2():
    t = time.perf_counter()
    mols, _ = load_molecules((DATA / "n_methyl_2_piperidone.sdf").read_text(), 2, 4, 6)
    cc = mols[0].cc
    elapsed = time.perf_counter() - t
    want = Counter({CycleConfiguration((1, 1, 1, 1, 2, 3)): 1})
    ok = cc == want and elapsed < 1.0
    got = ", ".join(x.name for x in cc)
    return ok, f"ring of N-methyl-2-piperidone has cycle configuration ({got}) in {elapsed:.3f} s, expected (1,1,1,1,2,3)"


def test_criterion_2_ring_cycle_configuration():
    ok, detail = criterion_2()
    report(2, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 3


def criterion_3():
    results = []
    for sdf, vals, cc in (("demo.sdf", "demo_values.csv", True), ("demo.sdf", "demo_values.csv", False), ("phenols.sdf", None, True)):
        ds = read_dataset(DATA / sdf, DATA / vals if vals else None)
        d = build_dictionary(ds.molecules, 2, 4, 6, use_cc=cc)
        fm = featurize_all(ds.molecules, d)
        k = 14 + len(d.lambda_int) + len(d.lambda_ex) + len(d.gamma_int_ec) + len(d.fringe_codes) + len(d.gamma_lf_ac) + (len(d.xi_set) if cc else 0)
        widths = {len(r) for r in fm.rows}
        results.append((sdf, cc, k, len(fm.header), widths == {k} and len(fm.header) == k))
    ok = all(r[-1] for r in results)
    detail = "; ".join(f"{s} cc={'on' if c else 'off'}: formula {k}, emitted {w}" for s, c, k, w, _ in results)
    return ok, f"feature width formula ({detail})"


def test_criterion_3_feature_width():
    ok, detail = criterion_3()
    report(3, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 4


def criterion_4():
    rng = random.Random(20240604)
    t = time.perf_counter()
    mismatches = 0
    total = 0
    for _ in range(500):
        adj = random_graph(rng, 12, 0.3)
        got = [frozenset(c.vertices) for c in enumerate_chordless_cycles(adj, 3, 12)]
        want = chordless_cycles_oracle(adj, 3, 12)
        total += len(want)
        if len(got) != len(set(got)) or set(got) != want:
            mismatches += 1
    elapsed = time.perf_counter() - t
    ok = mismatches == 0 and elapsed < 30
    return ok, f"chordless cycles on 500 random graphs: {mismatches} mismatches, {total} cycles, {elapsed:.2f} s"


def test_criterion_4_chordless_cycle_oracle():
    ok, detail = criterion_4()
    report(4, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 5


def criterion_5():
    rng = random.Random(7)
    t = time.perf_counter()
    seq_fail = 0
    for _ in range(10_000):
        ell = rng.randint(3, 8)
        masses = [rng.choice((130, 140, 150, 290, 300)) for _ in range(ell)]
        ranks = list(rank_sequence(ChordlessCycle(tuple(range(ell))), dict(enumerate(masses))))
        canon = canonicalize_cycle(ranks)
        if canon.ranks != brute_canonical(ranks) or any(canonicalize_cycle(list(s)) != canon for s in all_symmetries(ranks)):
            seq_fail += 1
    tree_fail = 0
    iso_pairs = 0
    for _ in range(1_000):
        g1, r1 = random_rooted_tree(rng, 7)
        if rng.random() < 0.5:
            g2, r2 = shuffled(g1, r1, rng)
        else:
            g2, r2 = random_rooted_tree(rng, 7)
        same = canonicalize(g1, r1).code == canonicalize(g2, r2).code
        iso = rooted_isomorphic(g1, r1, g2, r2)
        iso_pairs += iso
        tree_fail += same != iso
    elapsed = time.perf_counter() - t
    ok = seq_fail == 0 and tree_fail == 0 and elapsed < 60
    return ok, (
        f"canonical forms: {seq_fail}/10000 rank sequences and {tree_fail}/1000 tree pairs "
        f"({iso_pairs} isomorphic) disagree with oracles, {elapsed:.2f} s"
    )


def test_criterion_5_canonical_forms():
    ok, detail = criterion_5()
    report(5, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 6


def criterion_6():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(50, 6))
    y = X @ rng.normal(size=6) + 0.4 + 0.2 * rng.normal(size=50)
    h = lasso_fit(X, y, 0.0, tol=1e-14)
    w_ref, b_ref = ols_normal_equations(X, y)
    rel = float(np.max(np.abs(h.weights - w_ref) / np.abs(w_ref)))
    rel_b = abs(h.bias - b_ref) / abs(b_ref)

    x = rng.normal(size=30)
    yy = 2.0 * x + rng.normal(size=30)
    soft_err = 0.0
    for lam in (0.0, 0.1, 0.5, 1.0, 5.0):
        z = (x - x.mean()) / x.std()
        want = soft_threshold(float(z @ (yy - yy.mean())) / len(yy), lam) / x.std()
        soft_err = max(soft_err, abs(lasso_fit(x[:, None], yy, lam).weights[0] - want))

    tol = 1e-10
    Xk = rng.normal(size=(80, 15))
    yk = Xk[:, :4] @ np.array([1.0, -2.0, 0.5, 3.0]) + 0.3 * rng.normal(size=80)
    kkt = max(float(kkt_residuals(lasso_fit(Xk, yk, lam, tol=tol), Xk, yk).max()) for lam in (1e-3, 0.03, 0.3))

    Xn = rng.normal(size=(60, 5))
    yn = Xn @ np.array([1.0, 2.0, -1.0, 0.5, 0.0]) + 3.0
    med = cross_validate(Xn, yn, 0.0, seed=0).median_r2

    ok = rel <= 1e-8 and rel_b <= 1e-8 and soft_err <= 1e-10 and kkt <= 10 * tol and abs(med - 1.0) <= 1e-9
    return ok, (
        f"lasso: OLS rel err {max(rel, rel_b):.2e} (<= 1e-8), soft-threshold err {soft_err:.2e} (<= 1e-10), "
        f"KKT {kkt:.2e} (<= {10 * tol:.0e}), noiseless CV median R2 {med:.12f}"
    )


def test_criterion_6_lasso():
    ok, detail = criterion_6()
    report(6, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 7


def criterion_7():
    base = json.loads((DATA / "toy_spec.json").read_text())
    (n1, e1), (n2, e2), (n3, e3) = seed_tree_shapes()
    chain = build_milp(Specification.from_json(shaped_spec_json(base, n1, e1)))
    star = build_milp(Specification.from_json(shaped_spec_json(base, n2, e2)))
    grown = build_milp(Specification.from_json(shaped_spec_json(base, n3, e3)))
    same = (chain.n_vars, chain.n_constraints) == (star.n_vars, star.n_constraints)
    grows = grown.n_vars > chain.n_vars
    return same and grows, (
        f"model size: chain #V={chain.n_vars} #C={chain.n_constraints}, star #V={star.n_vars} #C={star.n_constraints}, "
        f"one more ring node #V={grown.n_vars}"
    )


def test_criterion_7_model_size():
    ok, detail = criterion_7()
    report(7, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 8


def criterion_8():
    spec = load_specification(DATA / "toy_spec.json")
    hyper = Hyperplane.from_json((DATA / "toy_model.json").read_text())
    dictionary = read_dictionary_json(DATA / "toy_dict.json")
    model = build_milp(spec, hyper, dictionary)
    sol = read_solution_text((DATA / "toy_solution.txt").read_text(), known=model.variables)
    dec = decode_solution(sol, model, spec)
    rep = verify_solution(dec.graph, spec, hyper, dictionary, sol)
    failed = [c["check"] for c in rep["checks"] if not c["passed"]]
    desc_checks = [c for c in rep["checks"] if c["check"].startswith("solution[")]
    eta = next((c["value"] for c in rep["checks"] if c["check"] == "prediction_in_range"), None)
    ok = rep["passed"] and bool(desc_checks) and eta is not None
    detail = f"toy round trip: {len(rep['checks'])} checks, {len(desc_checks)} descriptor variables matched, eta={eta}"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    try:
        from lp_reader import parse_lp, solve_with_scipy

        import scipy.optimize  # noqa: F401
    except ImportError:
        return ok, detail + "; no MILP solver available, bundled solution only"
    t = time.perf_counter()
    res, solved = solve_with_scipy(parse_lp(model.lp_text()), 120)
    elapsed = time.perf_counter() - t
    if solved is None:
        return False, detail + f"; HiGHS found no solution: {res.message}"
    rep2 = verify_solution(decode_solution(solved, model, spec).graph, spec, hyper, dictionary, solved)
    ok = ok and rep2["passed"] and elapsed < 120
    return ok, detail + f"; HiGHS solve {elapsed:.2f} s, solver solution verified={rep2['passed']}"


def test_criterion_8_round_trip():
    ok, detail = criterion_8()
    report(8, ok, detail)
    assert ok, detail


# ---------------------------------------------------------------- 9


def _pipeline(out: Path) -> None:
    def run(*argv):
        rc = cli_main([str(a) for a in argv])
        if rc != 0:
            raise RuntimeError(f"molcc {argv[0]} exited with {rc}")

    run("featurize", "--sdf", DATA / "demo.sdf", "--values", DATA / "demo_values.csv", "--dict", out / "dict.json", "--features", out / "features.csv")
    run("train", "--features", out / "features.csv", "--values", DATA / "demo_values.csv", "--lambda-grid", "0.1,1", "--seed", 42, "--model", out / "model.json")
    tree = out / "tree.json"
    tree.write_text(json.dumps({"nodes": [{"id": 0, "ring": True}], "edges": []}))
    run("infer", "--dict", out / "dict.json", "--seed-tree", tree, "--model", out / "model.json", "--ylb", 8, "--yub", 9, "--lp", out / "model.lp", "--varmap", out / "model.map.json")


def criterion_9():
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        pa, pb = Path(a), Path(b)
        _pipeline(pa)
        _pipeline(pb)
        names = sorted(p.name for p in pa.iterdir())
        match, mismatch, errors = filecmp.cmpfiles(pa, pb, names, shallow=False)
    ok = not mismatch and not errors and len(match) == len(names)
    detail = f"featurize/train/infer reruns: {len(match)}/{len(names)} outputs byte-identical"
    if mismatch or errors:
        detail += "; differing: " + ", ".join(mismatch + errors)
    return ok, detail


def test_criterion_9_determinism():
    ok, detail = criterion_9()
    report(9, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for n in range(1, 10):
        try:
            ok, detail = globals()[f"criterion_{n}"]()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        report(n, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)
