"""JSON formats for complexes, cones, and reduced representatives.

Three rings share one layout: generators plus a list of differential
entries. Serialization is canonical (generator order kept, entries sorted
by source position then target position), so parse then dump is the
identity on any canonical document.
"""

from __future__ import annotations

import json
from typing import Any

from .algebra import ComplexUV
from .cone import FilteredCone
from .filtered import FGen, FilteredComplex

RING_UV = "F2[U,V]"
RING_INF = "F2[U,Uinv]"


def _edge_order(ids: list[str]):
    pos = {g: k for k, g in enumerate(ids)}
    return lambda e: (pos[e[0]], pos[e[1]]) + tuple(e[2:])


# ------------------------------------------------------------ F2[U, V]

def complex_to_json(c: ComplexUV) -> dict:
    ids = c.ids
    edges = sorted(c.edges(), key=_edge_order(ids))
    return {
        "ring": RING_UV,
        "generators": [{"id": g.id, "grU": g.gr_u, "grV": g.gr_v} for g in c.generators],
        "differential": [{"from": x, "to": y, "u": u, "v": v} for x, y, u, v in edges],
    }


def complex_from_json(obj: dict) -> ComplexUV:
    if obj.get("ring") != RING_UV:
        raise ValueError(f"expected ring {RING_UV}, got {obj.get('ring')!r}")
    gens = [(g["id"], int(g["grU"]), int(g["grV"])) for g in obj["generators"]]
    seen = set()
    edges = []
    for e in obj.get("differential", []):
        key = (e["from"], e["to"], int(e["u"]), int(e["v"]))
        if key[2] < 0 or key[3] < 0:
            raise ValueError(f"negative exponent in differential entry {e}")
        if key in seen:
            raise ValueError(f"duplicate differential entry {e}")
        seen.add(key)
        edges.append(key)
    ids = {g[0] for g in gens}
    if len(ids) != len(gens):
        raise ValueError("duplicate generator id")
    for x, y, _, _ in edges:
        if x not in ids or y not in ids:
            raise ValueError(f"differential entry {x} -> {y} names an unknown generator")
    return ComplexUV.from_edges(gens, edges)


# ------------------------------------------------------- F2[U, U^-1]

_META_KEYS = ("part", "s", "baseId")


def filtered_to_json(cx: FilteredComplex) -> dict:
    ids = list(cx.gens)
    gens = []
    for g in cx.gens.values():
        if cx.axes == ("I", "J"):
            rec: dict[str, Any] = {"id": g.id, "filtI": g.filt[0], "filtJ": g.filt[1],
                                   "maslov": g.maslov}
            if "part" in g.meta:
                rec.update(part=g.meta["part"], s=g.meta["s"], baseId=g.meta["base"])
        else:
            rec = {"id": g.id, "i": g.filt[0], "j": g.filt[1], "maslov": g.maslov}
        gens.append(rec)
    terms = sorted(cx.terms(), key=_edge_order(ids))
    return {
        "ring": RING_INF,
        "axes": list(cx.axes),
        "generators": gens,
        "differential": [{"from": x, "to": y, "uPower": c} for x, y, c in terms],
    }


def filtered_from_json(obj: dict) -> FilteredComplex:
    if obj.get("ring") != RING_INF:
        raise ValueError(f"expected ring {RING_INF}, got {obj.get('ring')!r}")
    axes = tuple(obj.get("axes", ("i", "j")))
    gens = []
    for g in obj["generators"]:
        if "filtI" in g:
            filt = (int(g["filtI"]), int(g["filtJ"]))
        else:
            filt = (int(g["i"]), int(g["j"]))
        meta = {}
        if "part" in g:
            meta = {"part": g["part"], "s": int(g["s"]), "base": g["baseId"]}
        gens.append(FGen(g["id"], filt, int(g["maslov"]), meta))
    diff: dict[str, dict[str, int]] = {g.id: {} for g in gens}
    for e in obj.get("differential", []):
        x, y = e["from"], e["to"]
        if x not in diff or y not in diff:
            raise ValueError(f"differential entry {x} -> {y} names an unknown generator")
        if y in diff[x]:
            raise ValueError(f"duplicate differential entry {x} -> {y}")
        diff[x][y] = int(e["uPower"])
    return FilteredComplex(gens, diff, axes)


# ------------------------------------------------------------------ cones

def cone_to_json(cone: FilteredCone, n: int | None = None) -> dict:
    out = filtered_to_json(cone.complex)
    out["cone"] = {
        "p": cone.p, "genus": cone.genus, "n": n,
        "aRange": list(cone.a_range), "bRange": list(cone.b_range),
        "knot": filtered_to_json(cone.knot),
        "sym": [{"from": x, "to": y, "uPower": k} for x, (y, k) in cone.sym.items()],
    }
    return out


def cone_from_json(obj: dict) -> tuple[FilteredCone, int | None]:
    meta = obj.get("cone")
    if meta is None:
        raise ValueError("document carries no cone metadata")
    cx = filtered_from_json(obj)
    knot = filtered_from_json(meta["knot"])
    sym = {e["from"]: (e["to"], int(e["uPower"])) for e in meta["sym"]}
    cone = FilteredCone(int(meta["p"]), int(meta["genus"]), knot, sym, cx,
                        tuple(meta["aRange"]), tuple(meta["bRange"]))
    return cone, meta.get("n")


# ---------------------------------------------------------------- helpers

def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def parse_any(obj: dict) -> ComplexUV | FilteredComplex:
    ring = obj.get("ring")
    if ring == RING_UV:
        return complex_from_json(obj)
    if ring == RING_INF:
        return filtered_from_json(obj)
    raise ValueError(f"unknown ring {ring!r}")
