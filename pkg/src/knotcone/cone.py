"""The doubly filtered mapping cone X_p for the (p,1)-cable of the dual knot in +1 surgery."""

from __future__ import annotations

from dataclasses import dataclass

from .filtered import FGen, FilteredComplex, toggle
from .staircase import knot_genus

Sym = dict[str, tuple[str, int]]


def f_shift(n: int, s: int) -> int:
    return -(n - 1) * n // 2 + n * s


def cone_id(part: str, s: int, base: str) -> str:
    return f"{part}{s}:{base}"


def split_id(gid: str) -> tuple[str, int, str]:
    head, base = gid.split(":", 1)
    return head[0], int(head[1:]), base


def infer_flip(knot: FilteredComplex) -> Sym:
    """Reflection across i = j for a staircase: reverse the corners.

    The result is checked to be a chain map swapping coordinates.
    """
    from .staircase import check_symmetry
    order = sorted(knot.gens.values(), key=lambda g: -(g.filt[1] - g.filt[0]))
    # x at (i, j) goes to U^k y with U^k y at (j, i)
    sym ={x.id: (y.id, y.filt[0] - x.filt[1]) for x, y in zip(order, reversed(order))}
    bad = check_symmetry(knot, sym)
    if bad:
        raise ValueError("cannot infer a coordinate flip; pass one explicitly: " + bad[0])
    return sym


@dataclass
class FilteredCone:
    p: int
    genus: int
    knot: FilteredComplex
    sym: Sym
    complex: FilteredComplex
    a_range: tuple[int, int]
    b_range: tuple[int, int]

    def a_towers(self) -> range:
        return range(self.a_range[0], self.a_range[1] + 1)

    def b_towers(self) -> range:
        return range(self.b_range[0], self.b_range[1] + 1)


def tower_ranges(g: int, p: int) -> tuple[tuple[int, int], tuple[int, int]]:
    hi = g + p - 1
    lo = min(-g + 1, hi)
    return (lo, hi), (lo + 1, hi)


def a_gen(x: FGen, s: int, p: int) -> FGen:
    i, j = x.filt
    cs = p * s - p * (p - 1) // 2
    return FGen(cone_id("A", s, x.id), (max(i, j - s), max(i - p, j - s) + cs),
                x.maslov + s * (s - 1), {"part": "A", "s": s, "base": x.id, "i": i, "j": j})


def b_gen(x: FGen, s: int, p: int) -> FGen:
    i, j = x.filt
    cs = p * s - p * (p - 1) // 2
    return FGen(cone_id("B", s, x.id), (i, i - p + cs),
                x.maslov + s * (s - 1) - 1, {"part": "B", "s": s, "base": x.id, "i": i, "j": j})


def filtrations(gen: FGen) -> tuple[int, int]:
    return gen.filt


def maslov(gen: FGen) -> int:
    return gen.maslov


def _tower(knot, part, s, p):
    make = a_gen if part == "A" else b_gen
    gens = [make(x, s, p) for x in knot.gens.values()]
    diff = {cone_id(part, s, x): {cone_id(part, s, y): c for y, c in row.items()}
            for x, row in knot.diff.items()}
    return gens, diff


def v_map(knot, s) -> dict[str, tuple[str, int]]:
    return {cone_id("A", s, x): (cone_id("B", s, x), 0) for x in knot.gens}


def h_map(knot, sym, s) -> dict[str, tuple[str, int]]:
    return {cone_id("A", s, x): (cone_id("B", s + 1, y), k + s) for x, (y, k) in sym.items()}


def build_cone(knot: FilteredComplex, p: int, sym: Sym | None = None) -> FilteredCone:
    if not isinstance(p, int) or p <= 0:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    g = knot_genus(knot)
    if any(x.filt[0] != 0 for x in knot.gens.values()):
        raise ValueError("knot generators must be stored at i = 0")
    if sym is None:
        sym = infer_flip(knot)
    (alo, ahi), (blo, bhi) = tower_ranges(g, p)
    gens, diff = [], {}
    for s in range(alo, ahi + 1):
        tg, td = _tower(knot, "A", s, p)
        gens += tg
        diff.update(td)
        if blo <= s <= bhi:
            for a, (b, c) in v_map(knot, s).items():
                diff[a][b] = c
        if blo <= s + 1 <= bhi:
            for a, (b, c) in h_map(knot, sym, s).items():
                toggle(diff[a], b, c)
    for s in range(blo, bhi + 1):
        tg, td = _tower(knot, "B", s, p)
        gens += tg
        diff.update(td)
    order = {gid: k for k, gid in enumerate(g_.id for g_ in gens)}
    gens.sort(key=lambda x: pivot_key(x, order))
    cx = FilteredComplex(gens, diff, ("I", "J"))
    return FilteredCone(p, g, knot, sym, cx, (alo, ahi), (blo, bhi))


def pivot_key(gen: FGen, base_order: dict | None = None):
    """(tower s, B before A, position of the base generator)."""
    m = gen.meta
    idx = base_order.get(gen.id, 0) if base_order else 0
    return (m["s"], 0 if m["part"] == "B" else 1, idx)


def symmetry_psi(cone: FilteredCone) -> dict[str, tuple[str, int]]:
    """The involution swapping I and J, as a generator map x -> U^k x'."""
    p = cone.p
    out = {}
    for s in cone.a_towers():
        e = (p - 1) * (p - 2 * s) // 2
        for x, (y, k) in cone.sym.items():
            out[cone_id("A", s, x)] = (cone_id("A", p - s, y), e + k)
    for s in cone.b_towers():
        e = p * (p - 2 * s + 1) // 2
        for x in cone.knot.gens:
            out[cone_id("B", s, x)] = (cone_id("B", p - s + 1, x), e)
    return out


def apply_gen_map(cx: FilteredComplex, f: dict[str, tuple[str, int]], elem: dict[str, int]):
    out: dict[str, int] = {}
    for x, k in elem.items():
        y, c = f[x]
        toggle(out, y, c + k)
    return out


def check_psi(cone: FilteredCone) -> list[str]:
    """Chain map, filtration swap, Maslov preservation, and Psi^2 a U-power per tower."""
    cx = cone.complex
    psi = symmetry_psi(cone)
    bad = []
    for x, (y, k) in psi.items():
        gx, gy = cx[x], cx[y]
        if gy.at(k) != (gx.filt[1], gx.filt[0]):
            bad.append(f"Psi({x}) at {gy.at(k)}, expected swap of {gx.filt}")
        if gy.maslov - 2 * k != gx.maslov:
            bad.append(f"Psi({x}) shifts Maslov")
        lhs = cx.d({y: k})
        rhs = apply_gen_map(cx, psi, cx.diff[x])
        if lhs != rhs:
            bad.append(f"Psi does not commute with d at {x}")
    per_tower: dict[tuple, set] = {}
    for x, (y, k) in psi.items():
        z, k2 = psi[y]
        if z != x:
            bad.append(f"Psi^2({x}) = {z}")
        part, s, _ = split_id(x)
        per_tower.setdefault((part, s), set()).add(k + k2)
    for key, ks in per_tower.items():
        if len(ks) != 1:
            bad.append(f"Psi^2 on tower {key} is not a single U-power: {sorted(ks)}")
    return bad


def check_psi_intertwines(cone: FilteredCone) -> list[str]:
    """Psi v_s = h_{p-s} Psi on every A-tower where both sides are defined."""
    p, knot = cone.p, cone.knot
    psi = symmetry_psi(cone)
    bad = []
    blo, bhi = cone.b_range
    for s in cone.a_towers():
        t = p - s
        if not (blo <= s <= bhi and blo <= t + 1 <= bhi):
            continue
        v, h = v_map(knot, s), h_map(knot, cone.sym, t)
        for x in knot.gens:
            a = cone_id("A", s, x)
            b, c = v[a]
            lhs = psi[b][0], psi[b][1] + c
            y, k = psi[a]
            b2, c2 = h[y]
            if lhs != (b2, c2 + k):
                bad.append(f"Psi v != h Psi at {a}")
    return bad


def truncation_witness(cone: FilteredCone, depth: int = 2) -> list[dict]:
    """Check the omitted towers are redundant.

    For s >= g+p the map v_s is a filtered isomorphism A_s -> B_s, and for
    s <= -g the map h_s is a filtered isomorphism A_s -> B_{s+1}; so the
    towers beyond the kept range cancel in pairs. Returns one record per
    sampled tower.
    """
    g, p, knot = cone.genus, cone.p, cone.knot
    if g == 0:
        return []
    out = []
    for s in range(g + p, g + p + depth):
        ok = all(_same_level(a_gen(x, s, p), b_gen(x, s, p), 0, 1) for x in knot.gens.values())
        out.append({"map": "v", "s": s, "filtered_iso": ok})
    for s in range(-g, -g - depth, -1):
        ok = True
        for x, (y, k) in cone.sym.items():
            ok &= _same_level(a_gen(knot[x], s, p), b_gen(knot[y], s + 1, p), k + s, 1)
        out.append({"map": "h", "s": s, "filtered_iso": ok})
    return out


def _same_level(src: FGen, tgt: FGen, power: int, mdrop: int) -> bool:
    return tgt.at(power) == src.filt and tgt.maslov - 2 * power == src.maslov - mdrop


def collapse_to_surgery(cone: FilteredCone | FilteredComplex) -> FilteredComplex:
    """Forget J, keeping only I and the Maslov grading."""
    cx = cone.complex if isinstance(cone, FilteredCone) else cone
    gens = [FGen(g.id, g.filt[:1], g.maslov, g.meta) for g in cx.gens.values()]
    return FilteredComplex(gens, cx.diff, ("I",))
