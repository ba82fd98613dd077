"""CSV ingestion and tree serialization for the command-line front end.

CSV dialect: comma-separated, decimal-point reals, optional header row
(auto-detected when any first-row cell fails to parse as a number).
Missing values are an error, never imputed -- silent imputation would
corrupt the rank statistics downstream.  String columns are rejected
unless ordinal encoding is requested, in which case each distinct value
maps to 1, 2, ... in first-appearance order.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .data import SampleMatrix
from .orientation import DirectedPolytree
from .xicor import XiMatrix

__all__ = [
    "DataError",
    "read_sample_csv",
    "write_sample_csv",
    "write_truth_edges",
    "render_dot",
    "render_edgelist",
    "report_dict",
]


class DataError(ValueError):
    """Problem with the contents of an input file (CLI exit code 2)."""


def _try_float(cell: str) -> float | None:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v


def read_sample_csv(path: str | Path, ordinal_encode: bool = False) -> SampleMatrix:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path} is empty")

    header: list[str] | None = None
    first = rows[0]
    if any(_try_float(cell.strip()) is None for cell in first):
        header = [cell.strip() for cell in first]
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path} has a header but no data rows")

    width = len(rows[0])
    names = header if header is not None else [f"X{i + 1}" for i in range(width)]
    if header is not None and len(header) != width:
        raise DataError(f"{path}: header has {len(header)} fields, data rows have {width}")

    columns: list[list[str]] = [[] for _ in range(width)]
    for rownum, row in enumerate(rows, start=2 if header is not None else 1):
        if len(row) != width:
            raise DataError(f"{path}: row {rownum} has {len(row)} fields, expected {width}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                raise DataError(f"{path}: missing value at row {rownum}, column '{names[j]}'")
            columns[j].append(cell)

    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(rows)}")
    if width < 2:
        raise DataError(f"{path}: need at least 2 columns, got {width}")

    numeric = np.empty((len(rows), width))
    for j, col in enumerate(columns):
        parsed = [_try_float(cell) for cell in col]
        bad = next((k for k, v in enumerate(parsed) if v is None), None)
        if bad is None:
            numeric[:, j] = parsed
            continue
        if not ordinal_encode:
            rownum = bad + (2 if header is not None else 1)
            raise DataError(
                f"{path}: non-numeric value {col[bad]!r} at row {rownum}, "
                f"column '{names[j]}' (use --ordinal-encode for string columns)"
            )
        levels: dict[str, int] = {}
        for cell in col:
            if cell not in levels:
                levels[cell] = len(levels) + 1
        numeric[:, j] = [levels[cell] for cell in col]

    if not np.isfinite(numeric).all():
        loc = np.argwhere(~np.isfinite(numeric))[0]
        rownum = int(loc[0]) + (2 if header is not None else 1)
        raise DataError(
            f"{path}: non-finite value at row {rownum}, column '{names[int(loc[1])]}'"
        )
    return SampleMatrix(values=numeric, names=tuple(names))


def write_sample_csv(data: SampleMatrix, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(data.name_of(j) for j in range(data.p))
        for row in data.values:
            writer.writerow(repr(float(v)) for v in row)


def write_truth_edges(tree: DirectedPolytree, names, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target"])
        for src, dst in sorted(tree.edges):
            writer.writerow([names[src], names[dst]])


def _edge_rows(tree: DirectedPolytree, names, xi: XiMatrix | None):
    for src, dst in sorted(tree.edges):
        prov = tree.provenance.get((src, dst))
        weight = xi.weight(src, dst) if xi is not None else float("nan")
        yield src, dst, names[src], names[dst], prov.value if prov else "", weight


def render_dot(tree: DirectedPolytree, names, xi: XiMatrix | None = None) -> str:
    lines = ["digraph polytree {"]
    for _, _, sname, dname, prov, weight in _edge_rows(tree, names, xi):
        attrs = [f'provenance="{prov}"', f'label="{weight:.6f}"']
        lines.append(f'    "{sname}" -> "{dname}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_edgelist(tree: DirectedPolytree, names, xi: XiMatrix | None = None) -> str:
    lines = ["# source target provenance weight"]
    for _, _, sname, dname, prov, weight in _edge_rows(tree, names, xi):
        lines.append(f"{sname} {dname} {prov} {weight:.6f}")
    return "\n".join(lines) + "\n"


def report_dict(
    tree: DirectedPolytree,
    names,
    xi: XiMatrix,
    n: int,
    seed: int,
) -> dict:
    """Machine-readable run report: edges, conflicts, matrix summary."""
    off_diag = xi.entries[~np.eye(xi.p, dtype=bool)]
    edges = [
        {
            "source": sname,
            "target": dname,
            "provenance": prov,
            "weight": round(weight, 9),
        }
        for _, _, sname, dname, prov, weight in _edge_rows(tree, names, xi)
    ]
    return {
        "p": tree.p,
        "n": n,
        "seed": seed,
        "names": list(names),
        "edges": edges,
        "conflict_count": tree.conflict_count,
        "xi_summary": {
            "min": round(float(off_diag.min()), 9) if off_diag.size else None,
            "max": round(float(off_diag.max()), 9) if off_diag.size else None,
            "mean": round(float(off_diag.mean()), 9) if off_diag.size else None,
        },
    }


def dump_json(obj: dict, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
