"""Chemical graph model: element table, validation, SDF/JSON I/O, hydrogen suppression."""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class ChemGraphError(ValueError):
    """Raised for malformed or chemically invalid input graphs."""


@dataclass(frozen=True, order=True)
class Element:
    symbol: str
    variant: int
    valence: int = field(compare=False)
    mass_times_ten: int = field(compare=False)

    @property
    def label(self) -> str:
        if len(VALENCES[self.symbol]) > 1:
            return f"{self.symbol}({self.variant})"
        return self.symbol

    @property
    def is_hydrogen(self) -> bool:
        return self.symbol == "H"

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"Element({self.label})"


# Standard atomic weights abridged to four significant figures.
ATOMIC_MASS = {
    "H": 1.008,
    "C": 12.01,
    "N": 14.01,
    "O": 16.00,
    "F": 19.00,
    "Si": 28.09,
    "P": 30.97,
    "S": 32.06,
    "Cl": 35.45,
}

VALENCES = {
    "H": (1,),
    "C": (4,),
    "N": (3,),
    "O": (2,),
    "F": (1,),
    "Si": (4,),
    "P": (5,),
    "S": (2, 4, 6),
    "Cl": (1,),
}


def _mass_star(symbol: str) -> int:
    # round() guards against 10*16.00 landing at 159.99999
    return int(round(10 * ATOMIC_MASS[symbol], 6) // 1)


ELEMENTS: dict[tuple[str, int], Element] = {
    (sym, val): Element(sym, val, val, _mass_star(sym))
    for sym, vals in VALENCES.items()
    for val in vals
}

HYDROGEN = ELEMENTS[("H", 1)]

_LABEL_RE = re.compile(r"^([A-Z][a-z]?)(?:\((\d)\))?$")


def element(symbol: str, variant: int | None = None) -> Element:
    """Look up an element; ``variant`` may be omitted for single-valence elements."""
    if symbol not in VALENCES:
        raise ChemGraphError(f"unknown element symbol {symbol!r}")
    vals = VALENCES[symbol]
    if variant is None:
        if len(vals) > 1:
            raise ChemGraphError(f"element {symbol} needs a valence variant, one of {vals}")
        variant = vals[0]
    if variant not in vals:
        raise ChemGraphError(f"element {symbol} has no valence variant {variant}")
    return ELEMENTS[(symbol, variant)]


def element_from_label(label: str) -> Element:
    m = _LABEL_RE.match(label)
    if not m:
        raise ChemGraphError(f"bad element label {label!r}")
    return element(m.group(1), int(m.group(2)) if m.group(2) else None)


@dataclass(frozen=True)
class ChemicalGraph:
    """Simple connected chemical graph; vertex ids are indexes into ``atoms``.

    Bonds are stored as ``(i, j, multiplicity)`` with ``i < j``.
    """

    atoms: tuple[Element, ...]
    bonds: tuple[tuple[int, int, int], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        norm = []
        for b in self.bonds:
            i, j, m = (int(x) for x in b)
            norm.append((min(i, j), max(i, j), m))
        object.__setattr__(self, "bonds", tuple(norm))
        self._validate()

    def _validate(self):
        n = len(self.atoms)
        if n == 0:
            raise ChemGraphError("graph has no atoms")
        seen = set()
        bond_sum = [0] * n
        degree = [0] * n
        for i, j, m in self.bonds:
            if not (0 <= i < n and 0 <= j < n):
                raise ChemGraphError(f"bond ({i}, {j}) references a vertex id out of range")
            if i == j:
                raise ChemGraphError(f"self-loop on vertex {i}")
            if (i, j) in seen:
                raise ChemGraphError(f"duplicate bond ({i}, {j})")
            if m not in (1, 2, 3):
                raise ChemGraphError(f"bond ({i}, {j}) has multiplicity {m}; expected 1-3")
            seen.add((i, j))
            for v in (i, j):
                bond_sum[v] += m
                degree[v] += 1
        for v, a in enumerate(self.atoms):
            if bond_sum[v] > a.valence:
                raise ChemGraphError(
                    f"valence overflow at vertex {v} ({a.label}): bonds sum to {bond_sum[v]} > {a.valence}"
                )
            if a.is_hydrogen and degree[v] != 1 and n > 1:
                raise ChemGraphError(f"hydrogen vertex {v} has degree {degree[v]}")
        if not _connected(n, self.bonds):
            raise ChemGraphError("graph is disconnected")

    @cached_property
    def adjacency(self) -> tuple[dict[int, int], ...]:
        adj: list[dict[int, int]] = [dict() for _ in self.atoms]
        for i, j, m in self.bonds:
            adj[i][j] = m
            adj[j][i] = m
        return tuple(adj)

    def bond_sum(self, v: int) -> int:
        return sum(self.adjacency[v].values())

    @property
    def hydrogen_ids(self) -> list[int]:
        return [v for v, a in enumerate(self.atoms) if a.is_hydrogen]

    @property
    def n_heavy(self) -> int:
        return sum(1 for a in self.atoms if not a.is_hydrogen)

    def relabeled(self, perm: Sequence[int]) -> "ChemicalGraph":
        """Return a copy where old vertex ``v`` becomes ``perm[v]``."""
        atoms = [None] * len(self.atoms)
        for v, a in enumerate(self.atoms):
            atoms[perm[v]] = a
        bonds = sorted((min(perm[i], perm[j]), max(perm[i], perm[j]), m) for i, j, m in self.bonds)
        return ChemicalGraph(tuple(atoms), tuple(bonds), self.name)


def _connected(n: int, bonds: Iterable[tuple[int, int, int]]) -> bool:
    adj = defaultdict(list)
    for i, j, _ in bonds:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _choose_element(symbol: str, bond_sum: int, valence: int | None = None) -> Element:
    if symbol not in VALENCES:
        raise ChemGraphError(f"unknown element symbol {symbol!r}")
    if valence is not None:
        return element(symbol, valence)
    for val in VALENCES[symbol]:
        if val >= bond_sum:
            return ELEMENTS[(symbol, val)]
    raise ChemGraphError(
        f"valence overflow: {symbol} with bond sum {bond_sum} exceeds every allowed valence"
    )


def with_implicit_hydrogens(
    symbols: Sequence[str | Element],
    bonds: Sequence[tuple[int, int, int]],
    name: str = "",
    valences: Sequence[int | None] | None = None,
) -> ChemicalGraph:
    """Build a graph from heavy atoms (and any explicit H), filling remaining valence with H.

    Multi-valence elements given by symbol take the smallest valence that fits their bonds.
    """
    n = len(symbols)
    bond_sum = [0] * n
    for i, j, m in bonds:
        if not (0 <= i < n and 0 <= j < n):
            raise ChemGraphError(f"bond ({i}, {j}) references a vertex id out of range")
        bond_sum[i] += m
        bond_sum[j] += m
    atoms: list[Element] = []
    for v, s in enumerate(symbols):
        if isinstance(s, Element):
            atoms.append(s)
        else:
            val = valences[v] if valences is not None else None
            atoms.append(_choose_element(s, bond_sum[v], val))
    all_bonds = [tuple(b) for b in bonds]
    for v in range(n):
        a = atoms[v]
        if a.is_hydrogen:
            continue
        missing = a.valence - bond_sum[v]
        if missing < 0:
            raise ChemGraphError(
                f"valence overflow at vertex {v} ({a.label}): bonds sum to {bond_sum[v]} > {a.valence}"
            )
        for _ in range(missing):
            atoms.append(HYDROGEN)
            all_bonds.append((v, len(atoms) - 1, 1))
    return ChemicalGraph(tuple(atoms), tuple(all_bonds), name)


# ---------------------------------------------------------------- SDF (V2000)


def iter_sdf_records(text: str) -> Iterator[list[str]]:
    """Split an SDF stream into molfile blocks (lists of lines, without ``$$$$``)."""
    block: list[str] = []
    for line in text.splitlines():
        if line.strip() == "$$$$":
            yield block
            block = []
        else:
            block.append(line)
    if any(l.strip() for l in block):
        yield block


def parse_molblock(lines: Sequence[str]) -> ChemicalGraph:
    """Parse one V2000 molfile block; implicit hydrogens are materialised as vertices."""
    if len(lines) < 4:
        raise ChemGraphError("molfile block too short")
    name = lines[0].strip()
    counts = lines[3]
    try:
        n_atoms = int(counts[0:3])
        n_bonds = int(counts[3:6])
    except ValueError:
        raise ChemGraphError(f"malformed counts line: {counts!r}") from None
    if "V3000" in counts:
        raise ChemGraphError("V3000 molfiles are not supported")
    if len(lines) < 4 + n_atoms + n_bonds:
        raise ChemGraphError("molfile truncated: fewer atom/bond lines than the counts line declares")
    symbols: list[str] = []
    valences: list[int | None] = []
    for k in range(n_atoms):
        line = lines[4 + k]
        sym = line[31:34].strip()
        if not sym:
            raise ChemGraphError(f"atom line {k + 1} has no element symbol")
        symbols.append(sym)
        vvv = line[48:51].strip()
        if vvv and int(vvv) != 0:
            val = int(vvv)
            valences.append(0 if val == 15 else val)
        else:
            valences.append(None)
    bonds: list[tuple[int, int, int]] = []
    for k in range(n_bonds):
        line = lines[4 + n_atoms + k]
        try:
            i = int(line[0:3]) - 1
            j = int(line[3:6]) - 1
            code = int(line[6:9])
        except ValueError:
            raise ChemGraphError(f"malformed bond line {k + 1}: {line!r}") from None
        if code == 4:
            raise ChemGraphError("aromatic bonds unsupported; supply kekulized structures")
        if code not in (1, 2, 3):
            raise ChemGraphError(f"unsupported bond code {code}")
        bonds.append((i, j, code))
    for line in lines[4 + n_atoms + n_bonds:]:
        if line.startswith("M  CHG"):
            fields = line.split()
            charges = [int(c) for c in fields[4::2]]
            if any(charges):
                raise ChemGraphError("charged atoms (M  CHG) are not supported")
        if line.startswith("M  END"):
            break
    for s in symbols:
        if s not in VALENCES:
            raise ChemGraphError(f"unknown element symbol {s!r}")
    vals = []
    for s, v in zip(symbols, valences):
        if v is not None and v not in VALENCES[s]:
            raise ChemGraphError(f"element {s} has no valence variant {v}")
        vals.append(v)
    return with_implicit_hydrogens(symbols, bonds, name=name, valences=vals)


def parse_sdf(data: bytes | str) -> list[ChemicalGraph]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    return [parse_molblock(block) for block in iter_sdf_records(text)]


def write_molblock(g: ChemicalGraph) -> str:
    lines = [g.name, "  molcc", ""]
    lines.append(f"{len(g.atoms):3d}{len(g.bonds):3d}  0  0  0  0  0  0  0  0999 V2000")
    for a in g.atoms:
        vvv = a.valence if len(VALENCES[a.symbol]) > 1 else 0
        lines.append(
            f"{0.0:10.4f}{0.0:10.4f}{0.0:10.4f} {a.symbol:<3} 0  0  0  0  0{vvv:3d}  0  0  0  0  0  0"
        )
    for i, j, m in g.bonds:
        lines.append(f"{i + 1:3d}{j + 1:3d}{m:3d}  0")
    lines.append("M  END")
    return "\n".join(lines) + "\n"


def write_sdf(graphs: Iterable[ChemicalGraph]) -> str:
    return "".join(write_molblock(g) + "$$$$\n" for g in graphs)


# ---------------------------------------------------------------- JSON


def parse_graph_json(text: str) -> ChemicalGraph:
    """Parse ``{"atoms": [{"element": "S", "variant": 6}, ...], "bonds": [[i, j, m], ...]}``.

    Set ``"implicit_hydrogens": true`` to fill free valences with hydrogens.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChemGraphError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise ChemGraphError("graph JSON needs an 'atoms' list")
    atoms = [element(a["element"], a.get("variant")) for a in obj["atoms"]]
    bonds = [tuple(int(x) for x in b) for b in obj.get("bonds", [])]
    for b in bonds:
        if len(b) != 3:
            raise ChemGraphError(f"bond {list(b)} must be [i, j, m]")
    name = obj.get("name", "")
    if obj.get("implicit_hydrogens"):
        return with_implicit_hydrogens(atoms, bonds, name=name)
    return ChemicalGraph(tuple(atoms), tuple(bonds), name)


def graph_to_json(g: ChemicalGraph) -> str:
    atoms = []
    for a in g.atoms:
        d = {"element": a.symbol}
        if len(VALENCES[a.symbol]) > 1:
            d["variant"] = a.variant
        atoms.append(d)
    return json.dumps({"name": g.name, "atoms": atoms, "bonds": [list(b) for b in g.bonds]})


# ---------------------------------------------------------------- suppression


@dataclass(frozen=True)
class HydrogenSuppressedGraph:
    base: ChemicalGraph
    kept_vertices: tuple[int, ...]
    implicit_h_count: dict[int, int]
    adjacency: dict[int, dict[int, int]]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def element(self, v: int) -> Element:
        return self.base.atoms[v]

    @cached_property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(
            (u, v, m) for u in self.kept_vertices for v, m in sorted(self.adjacency[u].items()) if u < v
        )


def suppress_hydrogens(g: ChemicalGraph) -> HydrogenSuppressedGraph:
    kept = tuple(v for v, a in enumerate(g.atoms) if not a.is_hydrogen)
    if not kept:
        raise ChemGraphError("graph has no non-hydrogen atoms")
    keep = set(kept)
    hcount = {v: 0 for v in kept}
    adj: dict[int, dict[int, int]] = {v: {} for v in kept}
    for i, j, m in g.bonds:
        if i in keep and j in keep:
            adj[i][j] = m
            adj[j][i] = m
        elif i in keep:
            hcount[i] += 1
        elif j in keep:
            hcount[j] += 1
    for v in kept:
        if len(adj[v]) > 4:
            raise ChemGraphError(
                f"vertex {v} ({g.atoms[v].label}) has {len(adj[v])} non-hydrogen neighbours; at most 4 allowed"
            )
    return HydrogenSuppressedGraph(g, kept, hcount, adj)


def mass_star_sum(g: ChemicalGraph, vertices: Iterable[int] | None = None) -> int:
    if vertices is None:
        return sum(a.mass_times_ten for a in g.atoms)
    return sum(g.atoms[v].mass_times_ten for v in vertices)
