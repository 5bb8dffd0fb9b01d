"""Result serialization: .reds files and the run manifest.

One block per redescription: a header line with the report numbers, one
`Q<view>:` line per view query, and optionally the support indices.  Files
carry no timestamps so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .dataset import MultiViewDataset
from .errors import QueryParseError
from .miner import RedescriptionFamily
from .queries import parse_query
from .redescriptions import MinerConfig, Redescription, from_supports

_HEADER = re.compile(
    r"^RED (\d+) J=([0-9.]+) p=([0-9.eE+-]+) supp=(\d+) union=(\d+)$")
_QUERY = re.compile(r"^Q(\d+): (.*)$")
_SAFE = re.compile(r"[^A-Za-z0-9._-]")


def sanitize_name(name: str) -> str:
    return _SAFE.sub("-", name)


def format_redescription(red: Redescription, idx: int,
                         write_support: bool = False) -> str:
    lines = [
        f"RED {idx} J={red.jaccard:.6f} p={red.pvalue:.5e} "
        f"supp={red.support.count} union={red.union.count}"
    ]
    for view, q in red.queries:
        lines.append(f"Q{view}: {q.serialize()}")
    if write_support:
        joined = ",".join(str(i) for i in red.support.indices().tolist())
        lines.append(f"SUPP: {joined}")
    return "\n".join(lines)


def write_reds(reds: Sequence[Redescription], write_supports: bool = False) -> str:
    blocks = [format_redescription(r, i, write_supports)
              for i, r in enumerate(reds)]
    return "\n\n".join(blocks) + ("\n" if blocks else "")


@dataclass
class RedsRecord:
    index: int
    jaccard: float
    pvalue: float
    support_size: int
    union_size: int
    queries: dict[int, str]
    support_indices: list[int] | None = None


def read_reds(text: str) -> list[RedsRecord]:
    records: list[RedsRecord] = []
    current: RedsRecord | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            current = None
            continue
        m = _HEADER.match(line)
        if m:
            current = RedsRecord(int(m.group(1)), float(m.group(2)),
                                 float(m.group(3)), int(m.group(4)),
                                 int(m.group(5)), {})
            records.append(current)
            continue
        if current is None:
            raise QueryParseError(f"unexpected line outside a block: {line!r}")
        m = _QUERY.match(line)
        if m:
            current.queries[int(m.group(1))] = m.group(2)
            continue
        if line.startswith("SUPP:"):
            body = line[len("SUPP:"):].strip()
            current.support_indices = (
                [int(t) for t in body.split(",")] if body else [])
            continue
        raise QueryParseError(f"unrecognized line: {line!r}")
    return records


def reconstruct(record: RedsRecord, ds: MultiViewDataset) -> Redescription:
    """Parse the stored queries and recompute the report on this dataset."""
    pairs = tuple(sorted(
        (view, parse_query(text, view)) for view, text in record.queries.items()))
    from .queries import evaluate

    supports = [evaluate(q, ds) for _, q in pairs]
    return from_supports(pairs, supports)


def family_filenames(view: int, attribute: str) -> tuple[str, str]:
    stem = f"{view}_{sanitize_name(attribute)}"
    return f"{stem}.ind.reds", f"{stem}.int.reds"


def write_family(family: RedescriptionFamily, ds: MultiViewDataset,
                 cfg: MinerConfig, outdir: str | Path,
                 write_supports: bool = False,
                 name: str = "redescriptions") -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    manifest_entries = []
    for entry in family.entries:
        ind_name, int_name = family_filenames(entry.view, entry.attribute)
        for fname, reds in ((ind_name, entry.individual),
                            (int_name, entry.interactions)):
            path = out / fname
            path.write_text(write_reds(reds, write_supports), encoding="utf-8")
            written.append(path)
        manifest_entries.append({
            "view": entry.view,
            "attribute": entry.attribute,
            "individual": len(entry.individual),
            "interactions": len(entry.interactions),
            "files": [ind_name, int_name],
        })
    # thread count deliberately left out: worker split must not leak into bytes
    manifest = {
        "format": 1,
        "name": name,
        "n_entities": ds.n_entities,
        "views": [
            {"name": v.name, "n_attributes": len(v.attributes)}
            for v in ds.views
        ],
        "config": {
            "min_jaccard": cfg.min_jaccard,
            "max_pvalue": cfg.max_pvalue,
            "min_support": cfg.min_support,
            "max_support": cfg.max_support,
            "num_ret_red": cfg.num_ret_red,
            "tree_depth": cfg.tree_depth,
            "num_random_restarts": cfg.num_random_restarts,
            "seed": cfg.seed,
        },
        "config_hash": family.config_hash,
        "entries": manifest_entries,
    }
    meta = out / "meta.json"
    meta.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")
    written.append(meta)
    return written


@dataclass
class FamilyRecords:
    """A stored family re-read from disk, queries still in text form."""

    view: int
    attribute: str
    individual: list[RedsRecord]
    interactions: list[RedsRecord]


def read_family(outdir: str | Path) -> tuple[dict, list[FamilyRecords]]:
    """Load a family directory back: the manifest plus per-entry records."""
    out = Path(outdir)
    manifest = json.loads((out / "meta.json").read_text(encoding="utf-8"))
    entries: list[FamilyRecords] = []
    for e in manifest["entries"]:
        ind_name, int_name = e["files"]
        ind = read_reds((out / ind_name).read_text(encoding="utf-8"))
        inter = read_reds((out / int_name).read_text(encoding="utf-8"))
        entries.append(FamilyRecords(e["view"], e["attribute"], ind, inter))
    return manifest, entries
