"""Run reports (JSON) and Wavefront OBJ export."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

from .complex import CellComplex
from .gf2 import Chain

REPORT_VERSION = 1


@dataclass
class Report:
    input_digest: str
    counts: dict[str, list[int]] = field(default_factory=dict)
    critical_vertices: int | None = None
    termination: dict | None = None
    diagonal: str | None = None
    betti: list[int] | None = None
    cup: list[dict[str, int]] = field(default_factory=list)
    pairing_rank: int | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict, compare=False)

    def set_cup(self, triples: Iterable[tuple[int, int, int]]) -> None:
        self.cup = [{"i": i, "j": j, "k": k} for i, j, k in sorted(triples)]

    def to_dict(self, include_timings: bool = False) -> dict:
        d = asdict(self)
        d["cup"] = sorted(d["cup"], key=lambda t: (t["i"], t["j"], t["k"]))
        d["version"] = REPORT_VERSION
        d["timings"] = {k: round(v, 6) for k, v in self.timings.items()} if include_timings else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = dict(d)
        version = d.pop("version", REPORT_VERSION)
        if version != REPORT_VERSION:
            raise ValueError(f"unsupported report version {version}")
        d["timings"] = d.get("timings") or {}
        return cls(**d)


def report_json(r: Report, include_timings: bool = False) -> str:
    return json.dumps(r.to_dict(include_timings), sort_keys=True, indent=2) + "\n"


def export_report_json(r: Report, path: str | Path, include_timings: bool = False) -> None:
    Path(path).write_text(report_json(r, include_timings), encoding="utf-8")


def read_report_json(path: str | Path) -> Report:
    return Report.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def obj_text(X: CellComplex, cycles: Iterable[Chain] = ()) -> str:
    """Wavefront text: live vertices, one ``f`` per polygon, ``l`` per cycle edge."""
    verts = X.cells(0)
    index = {v: n + 1 for n, v in enumerate(verts)}
    lines = [f"# {len(verts)} vertices, {len(X.cells(2))} polygons"]
    for v in verts:
        c = X.coords[v]
        if c is None:
            raise ValueError(f"vertex {v} has no coordinates")
        lines.append("v %d %d %d" % tuple(c))
    for p in X.cells(2):
        lines.append("f " + " ".join(str(index[v]) for v in X.verts[p]))
    for n, cyc in enumerate(cycles):
        lines.append(f"# cycle {n}")
        lines.append(f"g cycle_{n}")
        for e in cyc:
            a, b = X.boundary[e]
            lines.append(f"l {index[a]} {index[b]}")
    return "\n".join(lines) + "\n"


def export_obj(X: CellComplex, cycles: Iterable[Chain], path: str | Path) -> None:
    Path(path).write_text(obj_text(X, cycles), encoding="utf-8")
