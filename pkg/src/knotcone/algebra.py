"""Bigraded free chain complexes over F_2[U, V].

A formal sum is a frozenset of terms (gen_id, u, v) meaning U^u V^v gen_id;
addition is symmetric difference since coefficients live in F_2.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from . import f2
from .pid import Summand, graded_homology

Term = tuple[str, int, int]
FormalSum = frozenset


def fsum(terms: Iterable[Term]) -> FormalSum:
    """Build a formal sum, cancelling repeated terms in pairs."""
    out: set = set()
    for t in terms:
        out ^= {t}
    return frozenset(out)


def mul(m: tuple[int, int], s: Iterable[Term]) -> FormalSum:
    a, b = m
    return frozenset((g, u + a, v + b) for g, u, v in s)


@dataclass(frozen=True)
class BigradedGen:
    id: str
    gr_u: int
    gr_v: int

    @property
    def alexander(self) -> int:
        return (self.gr_u - self.gr_v) // 2


@dataclass(frozen=True)
class ComplexUV:
    generators: tuple[BigradedGen, ...]
    differential: Mapping[str, FormalSum] = field(default_factory=dict)

    def __post_init__(self):
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate generator ids")
        d = {i: frozenset(self.differential.get(i, frozenset())) for i in ids}
        extra = set(self.differential) - set(ids)
        if extra:
            raise ValueError(f"differential on unknown generators {sorted(extra)}")
        object.__setattr__(self, "differential", d)
        object.__setattr__(self, "_index", {g.id: g for g in self.generators})

    @classmethod
    def from_edges(cls, gens: Iterable[tuple[str, int, int]],
                   edges: Iterable[tuple[str, str, int, int]]) -> "ComplexUV":
        gens = tuple(BigradedGen(*g) for g in gens)
        d: dict[str, set] = {g.id: set() for g in gens}
        for src, tgt, u, v in edges:
            d[src] ^= {(tgt, u, v)}
        return cls(gens, {k: frozenset(s) for k, s in d.items()})

    def __getitem__(self, gid: str) -> BigradedGen:
        return self._index[gid]

    @property
    def ids(self) -> list[str]:
        return [g.id for g in self.generators]

    def d(self, elem: Iterable[Term]) -> FormalSum:
        out: set = set()
        for g, u, v in elem:
            out ^= mul((u, v), self.differential[g])
        return frozenset(out)

    def edges(self) -> list[tuple[str, str, int, int]]:
        return sorted((x, y, u, v) for x, s in self.differential.items() for y, u, v in s)

    def __len__(self):
        return len(self.generators)


def unit_complex(gid: str = "x", gr: tuple[int, int] = (0, 0)) -> ComplexUV:
    return ComplexUV((BigradedGen(gid, *gr),), {})


# ---------------------------------------------------------------- validation

def validate_complex(c: ComplexUV) -> list[str]:
    """List every violation of d^2 = 0 and of the (-1,-1) grading law."""
    problems = []
    for x, s in c.differential.items():
        gx = c[x]
        for y, u, v in s:
            if y not in c._index:
                problems.append(f"d({x}) hits unknown generator {y}")
                continue
            if u < 0 or v < 0:
                problems.append(f"d({x}) term U^{u}V^{v} {y}: negative exponent")
            gy = c[y]
            if gy.gr_u - 2 * u != gx.gr_u - 1 or gy.gr_v - 2 * v != gx.gr_v - 1:
                problems.append(
                    f"d({x}) term U^{u}V^{v} {y}: grading "
                    f"({gy.gr_u - 2 * u},{gy.gr_v - 2 * v}) != ({gx.gr_u - 1},{gx.gr_v - 1})")
    for x in c.ids:
        try:
            dd = c.d(c.differential[x])
        except KeyError:
            continue
        if dd:
            problems.append(f"d^2({x}) = {sorted(dd)} != 0")
    for g in c.generators:
        if (g.gr_u - g.gr_v) % 2:
            problems.append(f"{g.id}: gr_U - gr_V is odd")
    return problems


# ------------------------------------------------------- basic constructions

def dualize(c: ComplexUV, suffix: str = "*") -> ComplexUV:
    """Dual complex: negate gradings and reverse every arrow.

    A name already ending in suffix loses it, so dualizing twice restores
    the original names.
    """
    def name(g):
        return g[:-len(suffix)] if suffix and g.endswith(suffix) else g + suffix

    gens = [(name(g.id), -g.gr_u, -g.gr_v) for g in c.generators]
    edges = [(name(y), name(x), u, v) for x, y, u, v in c.edges()]
    return ComplexUV.from_edges(gens, edges)


def tensor(c1: ComplexUV, c2: ComplexUV, sep: str = "|") -> ComplexUV:
    gens = []
    edges = []
    for a in c1.generators:
        for b in c2.generators:
            gid = f"{a.id}{sep}{b.id}"
            gens.append((gid, a.gr_u + b.gr_u, a.gr_v + b.gr_v))
            for y, u, v in c1.differential[a.id]:
                edges.append((gid, f"{y}{sep}{b.id}", u, v))
            for y, u, v in c2.differential[b.id]:
                edges.append((gid, f"{a.id}{sep}{y}", u, v))
    return ComplexUV.from_edges(gens, edges)


def shift(c: ComplexUV, delta: tuple[int, int]) -> ComplexUV:
    du, dv = delta
    gens = tuple(BigradedGen(g.id, g.gr_u + du, g.gr_v + dv) for g in c.generators)
    return ComplexUV(gens, dict(c.differential))


def rename(c: ComplexUV, mapping: Mapping[str, str]) -> ComplexUV:
    gens = [(mapping.get(g.id, g.id), g.gr_u, g.gr_v) for g in c.generators]
    edges = [(mapping.get(x, x), mapping.get(y, y), u, v) for x, y, u, v in c.edges()]
    return ComplexUV.from_edges(gens, edges)


def isomorphic(c1: ComplexUV, c2: ComplexUV) -> dict[str, str] | None:
    """Find a relabeling c1 -> c2 preserving bigradings and every arrow."""
    def graph(c):
        g = nx.DiGraph()
        for x in c.generators:
            g.add_node(x.id, gr=(x.gr_u, x.gr_v))
        for x, y, u, v in c.edges():
            g.add_edge(x, y, mono=(u, v))
        return g

    g1, g2 = graph(c1), graph(c2)
    gm = nx.algorithms.isomorphism.DiGraphMatcher(
        g1, g2,
        node_match=lambda a, b: a["gr"] == b["gr"],
        edge_match=lambda a, b: a["mono"] == b["mono"])
    for m in gm.isomorphisms_iter():
        return dict(m)
    return None


# ----------------------------------------------------------------- quotients

@dataclass(frozen=True)
class QuotientSpec:
    """Coefficient quotient of F_2[U, V]; see ring()."""

    set_u_to_one: bool = False
    set_u_to_zero: bool = False
    u_power_zero: int | None = None
    set_v_to_one: bool = False
    set_v_to_zero: bool = False
    v_power_zero: int | None = None

    def __post_init__(self):
        for var in "uv":
            flags = [getattr(self, f"set_{var}_to_one"), getattr(self, f"set_{var}_to_zero"),
                     getattr(self, f"{var}_power_zero") is not None]
            if sum(flags) > 1:
                raise ValueError(f"contradictory constraints on {var.upper()}")
            k = getattr(self, f"{var}_power_zero")
            if k is not None and k < 1:
                raise ValueError(f"{var.upper()}^k = 0 needs k >= 1")

    def state(self, var: str) -> tuple[str, int | None]:
        if getattr(self, f"set_{var}_to_one"):
            return "one", None
        if getattr(self, f"set_{var}_to_zero"):
            return "zero", None
        k = getattr(self, f"{var}_power_zero")
        if k is not None:
            return ("zero", None) if k == 1 else ("trunc", k)
        return "free", None

    def normalize(self, elem: Iterable[Term]) -> FormalSum:
        """Image of a formal sum in the quotient (exponents of a variable set
        to one are dropped)."""
        out: set = set()
        su, ku = self.state("u")
        sv, kv = self.state("v")
        for g, u, v in elem:
            if su == "one":
                u = 0
            elif (su == "zero" and u > 0) or (su == "trunc" and u >= ku):
                continue
            if sv == "one":
                v = 0
            elif (sv == "zero" and v > 0) or (sv == "trunc" and v >= kv):
                continue
            out ^= {(g, u, v)}
        return frozenset(out)


NONE = QuotientSpec()


@dataclass(frozen=True)
class QuotientComplex:
    base: ComplexUV
    spec: QuotientSpec

    def d(self, elem: Iterable[Term]) -> FormalSum:
        return self.spec.normalize(self.base.d(self.spec.normalize(elem)))

    def degree(self, term: Term) -> tuple[int | None, int | None]:
        """Retained gradings of a monomial multiple of a generator."""
        g, u, v = term
        gen = self.base[g]
        du = gen.gr_u - 2 * u
        dv = gen.gr_v - 2 * v
        su, sv = self.spec.state("u")[0], self.spec.state("v")[0]
        return (None if su == "one" else du, None if sv == "one" else dv)

    def _piece(self, deg) -> list[Term]:
        """F_2 basis of the graded piece of the quotient module in degree deg."""
        su, ku = self.spec.state("u")
        sv, kv = self.spec.state("v")
        out = []
        for gen in self.base.generators:
            us = self._exps(gen.gr_u, deg[0], su, ku)
            vs = self._exps(gen.gr_v, deg[1], sv, kv)
            out.extend((gen.id, u, v) for u in us for v in vs)
        return out

    @staticmethod
    def _exps(gr, target, state, k):
        if state == "one":
            return [0]
        diff = gr - target
        if diff < 0 or diff % 2:
            return []
        e = diff // 2
        if state == "zero" and e > 0:
            return []
        if state == "trunc" and e >= k:
            return []
        return [e]

    def is_boundary(self, elem: Iterable[Term]) -> bool:
        elem = self.spec.normalize(elem)
        if self.d(elem):
            raise ValueError("element is not a cycle in the quotient")
        by_deg: dict = {}
        for t in elem:
            by_deg.setdefault(self.degree(t), set()).add(t)
        for deg, part in by_deg.items():
            src_deg = tuple(None if x is None else x + 1 for x in deg)
            if not self._solvable(src_deg, deg, frozenset(part)):
                return False
        return True

    def _solvable(self, src_deg, deg, target: FormalSum) -> bool:
        if self.spec.state("u")[0] == "one" and self.spec.state("v")[0] == "one":
            raise ValueError("ungraded quotient; use localized_rank")
        src = self._piece(src_deg)
        index: dict = {}
        for t in target:
            index.setdefault(t, len(index))
        cols = []
        for t in src:
            vec = 0
            for img in self.d([t]):
                if img not in index:
                    index[img] = len(index)
                vec |= 1 << index[img]
            cols.append(vec)
        goal = 0
        for t in target:
            goal |= 1 << index[t]
        ech = f2.RowEchelon()
        for v in cols:
            ech.add(v)
        return ech.solve(goal) is not None

    def homology(self) -> "Homology":
        su, ku = self.spec.state("u")
        sv, kv = self.spec.state("v")
        live = [var for var, s in (("u", su), ("v", sv)) if s in ("free", "trunc")]
        if len(live) > 1:
            raise ValueError("homology needs a principal coefficient ring; "
                             "set one variable to 0 or 1")
        if su == "one" and sv == "one":
            raise ValueError("ungraded quotient; use localized_rank")
        var = live[0] if live else ("u" if sv == "one" else "v")
        state, k = (su, ku) if var == "u" else (sv, kv)
        grading = {}
        diff: dict[str, dict[str, int]] = {}
        for gen in self.base.generators:
            grading[gen.id] = gen.gr_u if var == "u" else gen.gr_v
        for x in self.base.ids:
            row: dict[str, int] = {}
            for y, u, v in self.d([(x, 0, 0)]):
                e = u if var == "u" else v
                if y in row:
                    if row[y] == e:
                        del row[y]
                        continue
                    raise ValueError("quotient is not homogeneous")
                row[y] = e
            diff[x] = row
        trunc = k if state == "trunc" else (1 if state == "zero" else None)
        summands = graded_homology(grading, diff, trunc)
        return Homology(ring=_ring_name(self.spec), variable=var.upper(),
                        summands=tuple(summands),
                        bigradings={s.gen: (self.base[s.gen].gr_u, self.base[s.gen].gr_v)
                                    for s in summands})


def _ring_name(q: QuotientSpec) -> str:
    parts = []
    for var in "uv":
        s, k = q.state(var)
        V = var.upper()
        parts.append({"free": V, "one": f"{V}=1", "zero": f"{V}=0",
                      "trunc": f"{V}^{k}=0"}[s])
    return "F2[" + ",".join(parts) + "]"


@dataclass(frozen=True)
class Homology:
    ring: str
    variable: str
    summands: tuple[Summand, ...]
    bigradings: Mapping[str, tuple[int, int]]

    @property
    def free_rank(self) -> int:
        return sum(1 for s in self.summands if s.order is None)

    @property
    def torsion(self) -> list[tuple[int, int]]:
        return [(s.grading, s.order) for s in self.summands if s.order is not None]

    @property
    def free(self) -> list[Summand]:
        return [s for s in self.summands if s.order is None]


def quotient(c: ComplexUV, q: QuotientSpec) -> QuotientComplex:
    return QuotientComplex(c, q)


def homology(qc: QuotientComplex) -> Homology:
    return qc.homology()


V_EQ_1 = QuotientSpec(set_v_to_one=True)
U_EQ_0 = QuotientSpec(set_u_to_zero=True)
U_EQ_1 = QuotientSpec(set_u_to_one=True)
V_EQ_0 = QuotientSpec(set_v_to_zero=True)


def is_s3_knotlike(c: ComplexUV) -> bool:
    h = homology(quotient(c, V_EQ_1))
    return h.free_rank == 1 and not h.torsion


def is_boundary(c: ComplexUV, cycle: Iterable[Term], q: QuotientSpec = NONE) -> bool:
    return quotient(c, q).is_boundary(cycle)


# -------------------------------------------------------------- localization

def _at_one(c: ComplexUV) -> dict[str, set[str]]:
    d = {}
    for x, s in c.differential.items():
        row: set = set()
        for y, _, _ in s:
            row ^= {y}
        d[x] = row
    return d


def _homology_at_one(c: ComplexUV):
    """Cycle representatives of a basis of H(C with U = V = 1) over F_2."""
    ids = c.ids
    pos = {g: i for i, g in enumerate(ids)}
    d = _at_one(c)
    cols = []
    for x in ids:
        v = 0
        for y in d[x]:
            v |= 1 << pos[y]
        cols.append(v)
    cycles = f2.kernel(cols)
    bnd = f2.RowEchelon()
    for v in cols:
        bnd.add(v)
    reps = []
    for z in cycles:
        if bnd.add(z):
            reps.append(z)
    return ids, pos, cols, reps


def localized_rank(c: ComplexUV) -> int:
    """Rank of homology after inverting both U and V."""
    return len(_homology_at_one(c)[3])


@dataclass(frozen=True)
class LocalMapReport:
    is_chain_map: bool
    homogeneous: bool
    bigrading: tuple[int, int] | None
    is_local: bool
    failures: tuple[str, ...] = ()


def compose(f: Mapping[str, FormalSum], g: Mapping[str, FormalSum]) -> dict[str, FormalSum]:
    """(g after f) on generators."""
    out = {}
    for x, s in f.items():
        acc: set = set()
        for y, u, v in s:
            acc ^= mul((u, v), g.get(y, frozenset()))
        out[x] = frozenset(acc)
    return out


def apply_map(f: Mapping[str, FormalSum], elem: Iterable[Term]) -> FormalSum:
    acc: set = set()
    for y, u, v in elem:
        acc ^= mul((u, v), f.get(y, frozenset()))
    return frozenset(acc)


def verify_local_map(f: Mapping[str, FormalSum], src: ComplexUV, dst: ComplexUV) -> LocalMapReport:
    failures = []
    f = {x: frozenset(f.get(x, frozenset())) for x in src.ids}
    chain = True
    for x in src.ids:
        lhs = dst.d(f[x])
        rhs = apply_map(f, src.differential[x])
        if lhs != rhs:
            chain = False
            failures.append(f"d f({x}) != f d({x}): differ by {sorted(lhs ^ rhs)}")
    shifts = set()
    for x, s in f.items():
        gx = src[x]
        for y, u, v in s:
            gy = dst[y]
            shifts.add((gy.gr_u - 2 * u - gx.gr_u, gy.gr_v - 2 * v - gx.gr_v))
    homogeneous = len(shifts) <= 1
    bigrading = next(iter(shifts)) if len(shifts) == 1 else None
    if not homogeneous:
        failures.append(f"map is not homogeneous: shifts {sorted(shifts)}")

    local = False
    if chain:
        _, _, _, reps_s = _homology_at_one(src)
        ids_d, pos_d, cols_d, reps_d = _homology_at_one(dst)
        if len(reps_s) == len(reps_d):
            ech = f2.RowEchelon()
            for v in cols_d:
                ech.add(v)
            base = ech.rank
            ids_s = src.ids
            for z in reps_s:
                img: set = set()
                for i, x in enumerate(ids_s):
                    if z >> i & 1:
                        for y, _, _ in f[x]:
                            img ^= {y}
                vec = 0
                for y in img:
                    vec |= 1 << pos_d[y]
                ech.add(vec)
            local = ech.rank - base == len(reps_d)
        if not local:
            failures.append("not an isomorphism on (U,V)-localized homology")
    return LocalMapReport(chain, homogeneous, bigrading, local, tuple(failures))


def identity_map(c: ComplexUV) -> dict[str, FormalSum]:
    return {x: frozenset({(x, 0, 0)}) for x in c.ids}
