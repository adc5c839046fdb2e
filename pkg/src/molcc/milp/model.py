"""Named-variable MILP container with a CPLEX LP writer."""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]{0,254}$")

BINARY, INTEGER, CONTINUOUS = "B", "I", "C"


class MilpBuildError(ValueError):
    pass


@dataclass
class Var:
    name: str
    kind: str
    lb: float
    ub: float
    role: tuple


@dataclass
class Constraint:
    name: str
    coeffs: dict  # var name -> coefficient
    sense: str  # "<=", ">=", "="
    rhs: float
    family: str


@dataclass
class MilpModel:
    variables: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)
    objective_sense: str = "min"
    objective: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _cnames: set = field(default_factory=set, repr=False)

    # ------------------------------------------------------------ building

    def add_var(self, name: str, kind: str, lb: float = 0, ub: float = math.inf, role: tuple = ()) -> str:
        if not _NAME_RE.match(name):
            raise MilpBuildError(f"invalid variable name {name!r}")
        if name in self.variables:
            raise MilpBuildError(f"duplicate variable {name}")
        if kind == BINARY:
            lb, ub = max(0, lb), min(1, ub)
        if lb > ub:
            raise MilpBuildError(f"variable {name}: lower bound {lb} exceeds upper bound {ub}")
        self.variables[name] = Var(name, kind, lb, ub, tuple(role))
        return name

    def add(self, family: str, name: str, terms, sense: str, rhs: float = 0.0) -> None:
        """Add ``sum(terms) sense rhs``; ``terms`` is an iterable of (coef, var) pairs."""
        if sense not in ("<=", ">=", "="):
            raise MilpBuildError(f"bad constraint sense {sense!r}")
        coeffs: dict = {}
        for c, v in terms:
            if v not in self.variables:
                raise MilpBuildError(f"constraint {name} references unknown variable {v}")
            coeffs[v] = coeffs.get(v, 0) + c
        coeffs = {v: c for v, c in coeffs.items() if c != 0}
        if not _NAME_RE.match(name):
            raise MilpBuildError(f"invalid constraint name {name!r}")
        if name in self._cnames:
            raise MilpBuildError(f"duplicate constraint {name}")
        if not coeffs:
            ok = (sense == "<=" and 0 <= rhs) or (sense == ">=" and 0 >= rhs) or (sense == "=" and rhs == 0)
            if not ok:
                raise MilpBuildError(f"constraint {name} is infeasible: 0 {sense} {rhs}")
        self._cnames.add(name)
        self.constraints.append(Constraint(name, coeffs, sense, rhs, family))

    # ------------------------------------------------------------ stats

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def family_counts(self) -> Counter:
        return Counter(c.family for c in self.constraints)

    def var_counts(self) -> Counter:
        return Counter(v.role[0] for v in self.variables.values())

    # ------------------------------------------------------------ output

    def lp_text(self) -> str:
        out = ["\\ molcc inverse model", "\\ variables: %d  constraints: %d" % (self.n_vars, self.n_constraints)]
        out.append("Maximize" if self.objective_sense == "max" else "Minimize")
        obj = self.objective or {next(iter(self.variables)): 0}
        out.extend(_wrap(" obj:", _expr(obj)))
        out.append("Subject To")
        for c in self.constraints:
            if c.coeffs:
                body = _expr(c.coeffs)
            else:
                body = ["0", next(iter(self.variables))]
            out.extend(_wrap(f" {c.name}:", body + [c.sense, _num(c.rhs)]))
        out.append("Bounds")
        for v in self.variables.values():
            if v.kind == BINARY:
                continue
            lo = "-inf" if v.lb == -math.inf else _num(v.lb)
            hi = "+inf" if v.ub == math.inf else _num(v.ub)
            if v.lb == -math.inf and v.ub == math.inf:
                out.append(f" {v.name} free")
            elif lo == hi:
                out.append(f" {v.name} = {lo}")
            else:
                out.append(f" {lo} <= {v.name} <= {hi}")
        gens = [v.name for v in self.variables.values() if v.kind == INTEGER]
        bins = [v.name for v in self.variables.values() if v.kind == BINARY]
        if gens:
            out.append("Generals")
            out.extend(_wrap("", gens))
        if bins:
            out.append("Binaries")
            out.extend(_wrap("", bins))
        out.append("End")
        return "\n".join(out) + "\n"

    def var_map(self) -> dict:
        return {
            "format": "molcc-varmap/1",
            "meta": self.meta,
            "variables": {v.name: {"kind": v.kind, "lb": _jnum(v.lb), "ub": _jnum(v.ub), "role": list(v.role)} for v in self.variables.values()},
            "constraint_families": dict(sorted(self.family_counts().items())),
        }

    def write(self, lp_path, varmap_path=None) -> None:
        Path(lp_path).write_text(self.lp_text())
        if varmap_path is not None:
            Path(varmap_path).write_text(json.dumps(self.var_map(), indent=1) + "\n")

    # ------------------------------------------------------------ checking

    def violations(self, sol: dict, tol: float = 1e-6) -> list[str]:
        """Constraint, bound and integrality violations of an assignment (missing vars read as 0)."""
        bad = []
        for v in self.variables.values():
            x = sol.get(v.name, 0.0)
            if x < v.lb - tol or x > v.ub + tol:
                bad.append(f"bound {v.name}={x} not in [{v.lb}, {v.ub}]")
            if v.kind != CONTINUOUS and abs(x - round(x)) > tol:
                bad.append(f"integrality {v.name}={x}")
        for c in self.constraints:
            lhs = sum(a * sol.get(n, 0.0) for n, a in c.coeffs.items())
            scale = tol * max(1.0, abs(c.rhs))
            if (c.sense == "<=" and lhs > c.rhs + scale) or (c.sense == ">=" and lhs < c.rhs - scale) or (
                c.sense == "=" and abs(lhs - c.rhs) > scale
            ):
                bad.append(f"constraint {c.name}: {lhs} {c.sense} {c.rhs}")
        return bad


def _num(x) -> str:
    if isinstance(x, int) or (isinstance(x, float) and x.is_integer() and abs(x) < 1e15):
        return str(int(x))
    return repr(float(x))


def _jnum(x):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return x


def _expr(coeffs: dict) -> list[str]:
    toks = []
    for i, (v, c) in enumerate(coeffs.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            toks.append(f"-{_num(mag)}" if sign == "-" else _num(mag))
        else:
            toks.append(sign)
            toks.append(_num(mag))
        toks.append(v)
    return toks


def _wrap(head: str, toks: list[str], width: int = 200) -> list[str]:
    lines = []
    cur = head
    for t in toks:
        if len(cur) + 1 + len(t) > width and cur.strip():
            lines.append(cur)
            cur = "  " + t
        else:
            cur = f"{cur} {t}" if cur else f" {t}"
    if cur.strip():
        lines.append(cur)
    return lines


def read_solution_text(text: str, known=None) -> dict[str, float]:
    """Read ``name value`` lines; blank lines, ``#`` comments and unknown names are skipped."""
    sol = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ValueError(f"solution line {ln}: expected 'name value'")
        name, val = parts[0], parts[1]
        if known is not None and name not in known:
            continue
        try:
            sol[name] = float(val)
        except ValueError:
            raise ValueError(f"solution line {ln}: bad value {val!r} for {name}") from None
    return sol


def solution_text(sol: dict) -> str:
    return "".join(f"{k} {_num(v)}\n" for k, v in sol.items())
