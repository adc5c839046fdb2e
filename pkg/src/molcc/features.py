"""Dataset ingestion, descriptor dictionaries and feature matrices."""

from __future__ import annotations

import csv
import io
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .chemgraph import ChemGraphError, ChemicalGraph, Element, element_from_label, iter_sdf_records, parse_molblock, suppress_hydrogens
from .cycleconf import CycleConfiguration, cycle_configurations, f_cc
from .twolayer import (
    MoleculeDescriptors,
    NoInteriorError,
    ac_name,
    descriptors_2l,
    ec_name,
    molecule_descriptors,
)

log = logging.getLogger(__name__)

DICT_FORMAT = "molcc-dictionary/1"
STATIC_COLUMNS = (
    ["n_heavy", "rank", "n_int", "ms_avg"]
    + [f"dg{d}" for d in range(1, 5)]
    + [f"dg_int{d}" for d in range(1, 5)]
    + ["bd_int2", "bd_int3"]
)


class DatasetError(ValueError):
    pass


@dataclass
class Molecule:
    id: str
    graph: ChemicalGraph
    desc: MoleculeDescriptors
    cc: Counter


@dataclass
class Dataset:
    molecules: list  # list[Molecule]
    values: dict = field(default_factory=dict)
    property_name: str = "value"
    skipped: list = field(default_factory=list)  # (id, reason)

    @property
    def ids(self) -> list[str]:
        return [m.id for m in self.molecules]

    def y(self) -> list[float]:
        return [self.values[m.id] for m in self.molecules]


def analyse(mol_id: str, g: ChemicalGraph, rho: int, c_min: int, c_max: int) -> Molecule:
    desc = molecule_descriptors(g, rho)
    masses = {u: t.mass_star for u, t in desc.fringe.items()}
    cc = cycle_configurations(desc.decomposition.h.adjacency, masses, c_min, c_max)
    return Molecule(mol_id, g, desc, cc)


def _skip_reason(g: ChemicalGraph, elements: set | None) -> str | None:
    if g.n_heavy < 4:
        return "fewer than 4 heavy atoms"
    if elements is not None:
        bad = sorted({a.label for a in g.atoms if a.label not in elements and not a.is_hydrogen})
        if bad:
            return "elements outside the allowed set: " + " ".join(bad)
    return None


def load_molecules(
    sdf_text: str,
    rho: int = 2,
    c_min: int = 4,
    c_max: int = 6,
    elements: Iterable[str] | None = None,
) -> tuple[list[Molecule], list[tuple[str, str]]]:
    """Parse and analyse every SDF record, collecting per-record skip reasons instead of failing."""
    allowed = set(elements) if elements is not None else None
    mols: list[Molecule] = []
    skipped: list[tuple[str, str]] = []
    seen = set()
    for k, block in enumerate(iter_sdf_records(sdf_text)):
        mol_id = (block[0].strip() if block else "") or f"record{k + 1}"
        if mol_id in seen:
            raise DatasetError(f"duplicate molecule id {mol_id!r}")
        seen.add(mol_id)
        try:
            g = parse_molblock(block)
        except ChemGraphError as exc:
            skipped.append((mol_id, f"parse error: {exc}"))
            continue
        reason = _skip_reason(g, allowed)
        if reason is None:
            try:
                suppress_hydrogens(g)
            except ChemGraphError as exc:
                reason = str(exc)
        if reason is None:
            try:
                mols.append(analyse(mol_id, g, rho, c_min, c_max))
                continue
            except NoInteriorError:
                reason = "empty interior"
        skipped.append((mol_id, reason))
    return mols, skipped


def read_values_csv(text: str) -> dict[str, float]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DatasetError("values CSV is empty")
    values: dict[str, float] = {}
    for ln, row in enumerate(rows[1:], start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 2:
            raise DatasetError(f"values CSV line {ln}: expected 'id,value'")
        key = row[0].strip()
        if key in values:
            raise DatasetError(f"duplicate id {key!r} in values CSV")
        try:
            values[key] = float(row[1])
        except ValueError:
            raise DatasetError(f"values CSV line {ln}: non-numeric value {row[1]!r} for {key!r}") from None
    return values


def read_dataset(
    sdf_path,
    values_csv_path=None,
    rho: int = 2,
    c_min: int = 4,
    c_max: int = 6,
    elements: Iterable[str] | None = None,
) -> Dataset:
    mols, skipped = load_molecules(Path(sdf_path).read_text(), rho, c_min, c_max, elements)
    values: dict[str, float] = {}
    prop = "value"
    if values_csv_path is not None:
        text = Path(values_csv_path).read_text()
        header = next(csv.reader(io.StringIO(text)), ["id", "value"])
        prop = header[1].strip() if len(header) > 1 else "value"
        values = read_values_csv(text)
        known = {m.id for m in mols} | {s[0] for s in skipped}
        for key in values:
            if key not in known:
                raise DatasetError(f"value given for {key!r} but no SDF record has that id")
        kept = []
        for m in mols:
            if m.id in values:
                kept.append(m)
            else:
                skipped.append((m.id, "missing value"))
        mols = kept
    for mol_id, reason in skipped:
        log.info("skipping %s: %s", mol_id, reason)
    return Dataset(mols, values, prop, skipped)


def write_skip_report(skipped: Sequence[tuple[str, str]], path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "reason"])
    w.writerows(skipped)
    Path(path).write_text(buf.getvalue())


# ---------------------------------------------------------------- dictionary


def _ec_key(c):
    (a, da), (b, db), m = c
    return (a.symbol, a.variant, da, b.symbol, b.variant, db, m)


def _xi_key(x: CycleConfiguration):
    return (x.length, x.ranks)


@dataclass
class DescriptorDictionary:
    rho: int
    c_min: int
    c_max: int
    lambda_int: list
    lambda_ex: list
    gamma_int_ec: list
    fringe_codes: list
    gamma_lf_ac: list
    xi_set: list
    use_cc: bool = True

    @property
    def k_2l(self) -> int:
        return (
            14
            + len(self.lambda_int)
            + len(self.lambda_ex)
            + len(self.gamma_int_ec)
            + len(self.fringe_codes)
            + len(self.gamma_lf_ac)
        )

    @property
    def k_cc(self) -> int:
        return len(self.xi_set) if self.use_cc else 0

    def column_names(self) -> list[str]:
        names = list(STATIC_COLUMNS)
        names += [f"na_int:{a.label}" for a in self.lambda_int]
        names += [f"na_ex:{a.label}" for a in self.lambda_ex]
        names += [f"ec:{ec_name(c)}" for c in self.gamma_int_ec]
        names += [f"fc:{c}" for c in self.fringe_codes]
        names += [f"aclf:{ac_name(c)}" for c in self.gamma_lf_ac]
        if self.use_cc:
            names += [f"cc:{x.name}" for x in self.xi_set]
        return names

    def to_json(self) -> str:
        obj = {
            "format": DICT_FORMAT,
            "rho": self.rho,
            "c_min": self.c_min,
            "c_max": self.c_max,
            "cc": self.use_cc,
            "lambda_int": [a.label for a in self.lambda_int],
            "lambda_ex": [a.label for a in self.lambda_ex],
            "gamma_int_ec": [[a.label, da, b.label, db, m] for (a, da), (b, db), m in self.gamma_int_ec],
            "fringe_codes": list(self.fringe_codes),
            "gamma_lf_ac": [[a.label, b.label, m] for a, b, m in self.gamma_lf_ac],
            "xi_set": [x.name for x in self.xi_set],
            "columns": self.column_names(),
        }
        return json.dumps(obj, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DescriptorDictionary":
        obj = json.loads(text)
        if obj.get("format") != DICT_FORMAT:
            raise DatasetError(f"unsupported dictionary format {obj.get('format')!r}")
        el = element_from_label
        return cls(
            rho=obj["rho"],
            c_min=obj["c_min"],
            c_max=obj["c_max"],
            lambda_int=[el(x) for x in obj["lambda_int"]],
            lambda_ex=[el(x) for x in obj["lambda_ex"]],
            gamma_int_ec=[((el(a), da), (el(b), db), m) for a, da, b, db, m in obj["gamma_int_ec"]],
            fringe_codes=list(obj["fringe_codes"]),
            gamma_lf_ac=[(el(a), el(b), m) for a, b, m in obj["gamma_lf_ac"]],
            xi_set=[CycleConfiguration.parse(x) for x in obj["xi_set"]],
            use_cc=obj.get("cc", True),
        )


def build_dictionary(molecules: Sequence[Molecule], rho: int, c_min: int, c_max: int, use_cc: bool = True) -> DescriptorDictionary:
    if not molecules:
        raise DatasetError("no molecules left after feasibility filtering")
    li, le, ec, fc, lf, xi = set(), set(), set(), set(), set(), set()
    for m in molecules:
        li.update(m.desc.na_int)
        le.update(m.desc.na_ex)
        ec.update(m.desc.ec)
        fc.update(m.desc.fc)
        lf.update(m.desc.ac_lf)
        xi.update(m.cc)
    return DescriptorDictionary(
        rho,
        c_min,
        c_max,
        sorted(li),
        sorted(le),
        sorted(ec, key=_ec_key),
        sorted(fc),
        sorted(lf, key=lambda c: (c[0], c[1], c[2])),
        sorted(xi, key=_xi_key),
        use_cc,
    )


# ---------------------------------------------------------------- feature matrix


@dataclass
class FeatureMatrix:
    ids: list
    header: list
    rows: list  # exact values: int or Fraction

    def as_floats(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self.rows]

    def column(self, name: str) -> list:
        j = self.header.index(name)
        return [r[j] for r in self.rows]


def feature_row(m: Molecule, dictionary: DescriptorDictionary) -> list:
    row = descriptors_2l(m.desc, dictionary)
    if dictionary.use_cc:
        row += f_cc(m.cc, dictionary.xi_set)
    return row


def featurize_all(molecules: Sequence[Molecule], dictionary: DescriptorDictionary) -> FeatureMatrix:
    ids = [m.id for m in molecules]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise DatasetError(f"duplicate molecule id {dup!r}")
    rows = [feature_row(m, dictionary) for m in molecules]
    return FeatureMatrix(ids, dictionary.column_names(), rows)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{float(x):.6f}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def feature_csv_text(fm: FeatureMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id"] + fm.header)
    for i, r in zip(fm.ids, fm.rows):
        w.writerow([i] + [_fmt(x) for x in r])
    return buf.getvalue()


def write_feature_csv(fm: FeatureMatrix, path) -> None:
    Path(path).write_text(feature_csv_text(fm))


def read_feature_csv(path) -> FeatureMatrix:
    rows = list(csv.reader(io.StringIO(Path(path).read_text())))
    if not rows or rows[0][:1] != ["id"]:
        raise DatasetError("feature CSV must start with an 'id' column")
    header = rows[0][1:]
    ids, data = [], []
    for r in rows[1:]:
        if not r:
            continue
        ids.append(r[0])
        data.append([float(x) for x in r[1:]])
    return FeatureMatrix(ids, header, data)


def write_dictionary_json(dictionary: DescriptorDictionary, path) -> None:
    Path(path).write_text(dictionary.to_json())


def read_dictionary_json(path) -> DescriptorDictionary:
    return DescriptorDictionary.from_json(Path(path).read_text())
