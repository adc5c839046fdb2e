"""Independent reference implementations used as test oracles."""

from __future__ import annotations

import itertools
import random

import networkx as nx
import numpy as np

from molcc.chemgraph import ChemicalGraph, with_implicit_hydrogens

# ---------------------------------------------------------------- rooted trees

_TREE_ELEMENTS = [("C", 4), ("N", 3), ("O", 2)]


def random_rooted_tree(rng: random.Random, max_vertices: int = 7):
    """A random hydrogen-filled chemical tree and a random heavy root."""
    while True:
        k = rng.randint(1, max_vertices)
        parent = [None] + [rng.randrange(i) for i in range(1, k)]
        deg = [0] * k
        for i in range(1, k):
            deg[i] += 1
            deg[parent[i]] += 1
        syms = []
        ok = True
        for i in range(k):
            choices = [s for s, v in _TREE_ELEMENTS if v >= deg[i]]
            if not choices:
                ok = False
                break
            syms.append(rng.choice(choices))
        if not ok:
            continue
        val = {s: v for s, v in _TREE_ELEMENTS}
        used = list(deg)
        bonds = []
        for i in range(1, k):
            p = parent[i]
            room = min(val[syms[i]] - used[i], val[syms[p]] - used[p])
            m = 1 + (rng.randint(0, min(room, 2)) if room > 0 and rng.random() < 0.3 else 0)
            used[i] += m - 1
            used[p] += m - 1
            bonds.append((p, i, m))
        g = with_implicit_hydrogens(syms, bonds)
        return g, rng.randrange(k)


def shuffled(g: ChemicalGraph, root: int, rng: random.Random):
    perm = list(range(len(g.atoms)))
    rng.shuffle(perm)
    return g.relabeled(perm), perm[root]


def rooted_isomorphic(g1: ChemicalGraph, r1: int, g2: ChemicalGraph, r2: int) -> bool:
    """Exhaustive search for a root-fixing, label- and multiplicity-preserving bijection of heavy atoms."""
    h1 = [v for v, a in enumerate(g1.atoms) if not a.is_hydrogen]
    h2 = [v for v, a in enumerate(g2.atoms) if not a.is_hydrogen]
    if len(h1) != len(h2) or g1.atoms[r1] != g2.atoms[r2]:
        return False
    e1 = {(min(i, j), max(i, j)): m for i, j, m in g1.bonds if i in h1 and j in h1}
    e2 = {(min(i, j), max(i, j)): m for i, j, m in g2.bonds if i in set(h2) and j in set(h2)}
    rest1 = [v for v in h1 if v != r1]
    rest2 = [v for v in h2 if v != r2]
    for perm in itertools.permutations(rest2):
        f = dict(zip(rest1, perm))
        f[r1] = r2
        if any(g1.atoms[v] != g2.atoms[f[v]] for v in h1):
            continue
        if all(e2.get((min(f[i], f[j]), max(f[i], f[j]))) == m for (i, j), m in e1.items()):
            return True
    return False


# ---------------------------------------------------------------- cycles


def chordless_cycles_oracle(adjacency, c_min: int, c_max: int) -> set:
    """Vertex sets of induced cycles, via networkx simple cycles plus a chord test."""
    G = nx.Graph()
    G.add_nodes_from(adjacency)
    for u, nb in adjacency.items():
        for v in nb:
            G.add_edge(u, v)
    out = set()
    for cyc in nx.simple_cycles(G, length_bound=c_max):
        if len(cyc) < max(3, c_min):
            continue
        vs = set(cyc)
        n_edges = sum(1 for u, v in G.subgraph(vs).edges())
        if n_edges == len(cyc):
            out.add(frozenset(vs))
    return out


def random_graph(rng: random.Random, max_vertices: int = 12, p: float = 0.3) -> dict:
    n = rng.randint(1, max_vertices)
    adj = {v: set() for v in range(n)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u].add(v)
                adj[v].add(u)
    return adj


def all_symmetries(seq) -> list[tuple]:
    k = len(seq)
    rot = [tuple(seq[i:] + seq[:i]) for i in range(k)]
    rev = list(seq)[::-1]
    return rot + [tuple(rev[i:] + rev[:i]) for i in range(k)]


def brute_canonical(seq) -> tuple:
    return min(all_symmetries(list(seq)))


# ---------------------------------------------------------------- regression


def ols_normal_equations(X, y):
    """Least squares with intercept by solving the normal equations directly."""
    A = np.hstack([X, np.ones((X.shape[0], 1))])
    coef = np.linalg.solve(A.T @ A, A.T @ y)
    return coef[:-1], coef[-1]


def soft_threshold(x: float, t: float) -> float:
    return float(np.sign(x) * max(abs(x) - t, 0.0))

