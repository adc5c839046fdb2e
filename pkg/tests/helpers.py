"""Test-only builders: a tiny SMILES-like reader and common molecules."""

from __future__ import annotations

import re

from molcc.chemgraph import ChemicalGraph, with_implicit_hydrogens


def smi(text: str, name: str = "") -> ChemicalGraph:
    """Build a hydrogen-filled graph from a small SMILES subset (no aromatics, no charges)."""
    toks = re.findall(r"Cl|Br|\[S6\]|[A-Z]|[=#]|\(|\)|\d", text)
    syms, vals, bonds, stack, ring = [], [], [], [], {}
    prev, order = None, 1
    for t in toks:
        if t in "=#":
            order = 2 if t == "=" else 3
        elif t == "(":
            stack.append(prev)
        elif t == ")":
            prev = stack.pop()
        elif t.isdigit():
            if t in ring:
                a, o = ring.pop(t)
                bonds.append((a, prev, max(o, order)))
            else:
                ring[t] = (prev, order)
            order = 1
        else:
            if t == "[S6]":
                syms.append("S")
                vals.append(6)
            else:
                syms.append(t)
                vals.append(None)
            i = len(syms) - 1
            if prev is not None:
                bonds.append((prev, i, order))
            prev, order = i, 1
    return with_implicit_hydrogens(syms, bonds, name or text, valences=vals)


CATECHOL = "OC1=C(O)C=CC=C1"
RESORCINOL = "OC1=CC(O)=CC=C1"
HYDROQUINONE = "OC1=CC=C(O)C=C1"
BENZENE = "C1=CC=CC=C1"
CYCLOHEXANE = "C1CCCCC1"
NAPHTHALENE = "C1=CC=C2C=CC=CC2=C1"


# ---------------------------------------------------------------- inverse-model fixtures

TALL = "C4h2(1C4h2(1C4h3))"


def five_ring_case():
    """Five six-membered rings fused along three ring edges, with one tree edge between blocks.

    Returns the specification and a hand-made layout that realizes it.
    """
    import json

    from molcc.milp.encode import Layout, RingLayout
    from molcc.milp.spec import Specification

    h1, h2 = "C4h1", "C4h2"
    rings = {
        0: [h1, h1, h2, h2, h2, h2],
        1: [h1, h1, h2, h1, h1, h2],
        2: [h1, h1, h2, h1, h2, h2],
        3: [h1, h2, h1, h1, h2, h2],
        4: [h1, h1, h2, h1, h2, h2],
    }
    ring = {u: RingLayout.from_fringes(f, c_min=5, c_max=6) for u, f in rings.items()}
    tree = {
        "nodes": [{"id": i, "ring": i < 5} for i in range(6)],
        "edges": [
            {"u": 0, "v": 1, "ring": True},
            {"u": 1, "v": 2, "ring": True},
            {"u": 2, "v": 3},
            {"u": 3, "v": 4, "ring": True},
            {"u": 4, "v": 5},
        ],
    }
    obj = {
        "rho": 2,
        "c_min": 5,
        "c_max": 6,
        "seed_tree": tree,
        "elements": ["C"],
        "xi": sorted({r.xi.name for r in ring.values()}),
        "fringe": [h1, h2, TALL],
        "gamma_ec_int": [["C", a, "C", b, 1] for a in range(1, 5) for b in range(a, 5)],
        "gamma_ac_lf": [["C", "C", 1]],
        "bounds": {"n": [10, 60]},
        "y_lb": 0,
        "y_ub": 1,
    }
    spec = Specification.from_json(json.dumps(obj))
    layout = Layout(
        ring,
        {(0, 0): 1, (0, 1): 1, (1, 1): 4, (1, 2): 1, (3, 3): 3, (3, 4): 1},
        {(2, 2): 4, (2, 3): 1, (4, 4): 4},
        {k: 1 for k in range(5)},
        {5: TALL},
    )
    return spec, layout


def shaped_spec_json(base: dict, nodes, edges) -> str:
    import json

    obj = dict(base)
    obj["seed_tree"] = {"nodes": nodes, "edges": edges}
    obj["xi"] = ["1,1,2,3", "1,1,1,1,2,2"]
    obj["fringe"] = list(base["fringe"]) + [TALL]
    return json.dumps(obj)


def seed_tree_shapes():
    """A chain and a star with four ring nodes, three ring edges and one tree edge to a leaf."""
    nodes = [{"id": i, "ring": i < 4} for i in range(5)]
    chain = [{"u": 0, "v": 1, "ring": True}, {"u": 1, "v": 2, "ring": True}, {"u": 2, "v": 3, "ring": True}, {"u": 3, "v": 4}]
    star = [{"u": 0, "v": 1, "ring": True}, {"u": 0, "v": 2, "ring": True}, {"u": 0, "v": 3, "ring": True}, {"u": 1, "v": 4}]
    bigger = nodes[:4] + [{"id": 4, "ring": True}, {"id": 5, "ring": False}]
    grown = chain[:3] + [{"u": 3, "v": 4, "ring": True}, {"u": 4, "v": 5}]
    return (nodes, chain), (nodes, star), (bigger, grown)
