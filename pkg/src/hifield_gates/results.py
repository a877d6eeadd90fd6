"""Tabular results with units and metadata; lossless CSV and JSON round trips."""

from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass, field

from . import __version__

LABEL = "label"  # unit tag for text columns
FLAG = "flag"  # 0/1 integer columns


def _fmt(v):
    if isinstance(v, str):
        if "," in v or "\n" in v or "\r" in v:
            raise ValueError(f"text value {v!r} may not contain commas or line breaks")
        return v
    if isinstance(v, (bool, int)) and not isinstance(v, float):
        return str(int(v))
    return format(float(v), ".17g")


def species_hash(species):
    """Short digest of the physical constants a result depends on."""
    key = f"{species.name}|{species.mass!r}|{species.omega0!r}|{species.omega_fs!r}|{species.gamma!r}|{__version__}"
    return hashlib.sha256(key.encode()).hexdigest()[:16]


@dataclass
class ResultTable:
    columns: list  # [(name, unit), ...]
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = [tuple(c) for c in self.columns]
        names = [c[0] for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names")
        for name, unit in self.columns:
            if not unit:
                raise ValueError(f"column {name!r} has no unit tag")
        self.rows = [tuple(r) for r in self.rows]
        for r in self.rows:
            self._check_row(r)

    def _check_row(self, r):
        if len(r) != len(self.columns):
            raise ValueError(f"row has {len(r)} values, table has {len(self.columns)} columns")

    @property
    def names(self):
        return [c[0] for c in self.columns]

    def add(self, *values, **named):
        if named:
            if values:
                raise ValueError("pass values positionally or by name, not both")
            missing = set(self.names) - set(named)
            if missing:
                raise ValueError(f"missing columns {sorted(missing)}")
            values = tuple(named[n] for n in self.names)
        self._check_row(values)
        self.rows.append(tuple(values))

    def column(self, name):
        i = self.names.index(name)
        return [r[i] for r in self.rows]

    def where(self, **eq):
        idx = {k: self.names.index(k) for k in eq}
        return [r for r in self.rows if all(r[i] == eq[k] for k, i in idx.items())]

    def sort(self, *keys):
        idx = [self.names.index(k) for k in keys]

        def key(r):
            out = []
            for i in idx:
                v = r[i]
                out.append((0, v, 0.0) if isinstance(v, str) else (1, "", float(v)))
            return out

        self.rows.sort(key=key)
        return self

    def __len__(self):
        return len(self.rows)

    # ------------------------------------------------------------ CSV

    def to_csv(self):
        buf = io.StringIO()
        for k in sorted(self.metadata):
            buf.write(f"# {k} = {json.dumps(self.metadata[k], sort_keys=True)}\n")
        buf.write(",".join(f"{n}({u})" for n, u in self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        meta, header, rows = {}, None, []
        for line in text.split("\n"):
            if not line.strip():
                continue
            if header is None and line.startswith("#"):
                k, v = line[1:].split("=", 1)
                meta[k.strip()] = json.loads(v)
                continue
            if header is None:
                header = [_split_header(h) for h in line.split(",")]
                continue
            rows.append(tuple(_parse(v, u) for v, (_, u) in zip(line.split(","), header)))
        if header is None:
            raise ValueError("no header row")
        return cls(header, rows, meta)

    # ------------------------------------------------------------ JSON

    def to_json(self):
        def enc(v, unit):
            if unit == LABEL:
                return v
            if unit == FLAG:
                return int(v)
            v = float(v)
            return None if math.isnan(v) else v

        payload = {
            "metadata": self.metadata,
            "columns": [{"name": n, "unit": u} for n, u in self.columns],
            "rows": [[enc(v, u) for v, (_, u) in zip(r, self.columns)] for r in self.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=1, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        cols = [(c["name"], c["unit"]) for c in d["columns"]]

        def dec(v, unit):
            if unit in (LABEL, FLAG):
                return v
            return math.nan if v is None else float(v)

        rows = [tuple(dec(v, u) for v, (_, u) in zip(r, cols)) for r in d["rows"]]
        return cls(cols, rows, d.get("metadata", {}))

    def dump(self, fmt="csv"):
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def _split_header(h):
    h = h.strip()
    if not h.endswith(")") or "(" not in h:
        raise ValueError(f"header {h!r} lacks a unit tag")
    i = h.index("(")
    return h[:i], h[i + 1 : -1]


def _parse(v, unit):
    if unit == LABEL:
        return v
    if unit == FLAG:
        return int(v)
    return float(v)


def tables_equal(a, b):
    """Value-level equality, treating NaN == NaN."""
    if a.columns != b.columns or len(a.rows) != len(b.rows):
        return False
    for ra, rb in zip(a.rows, b.rows):
        for x, y in zip(ra, rb):
            if isinstance(x, float) and isinstance(y, float) and math.isnan(x) and math.isnan(y):
                continue
            if x != y:
                return False
    return True
