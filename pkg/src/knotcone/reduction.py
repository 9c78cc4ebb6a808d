"""Filtered Gaussian elimination, truncation, and extraction of the local representative."""

from __future__ import annotations

import heapq
import json
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .algebra import ComplexUV
from .cone import FilteredCone, split_id
from .filtered import FGen, FilteredComplex, Row, toggle


@dataclass(frozen=True)
class Cancel:
    source: str
    target: str
    power: int

    def to_json(self):
        return {"step": "cancel", "source": self.source, "target": self.target, "uPower": self.power}


@dataclass(frozen=True)
class ChangeBasis:
    """target := target + sum of U^k x over the added terms."""

    target: str
    added: tuple[tuple[str, int], ...]

    def to_json(self):
        return {"step": "change", "target": self.target,
                "added": [{"gen": g, "uPower": k} for g, k in self.added]}


@dataclass(frozen=True)
class Discard:
    """Drop generators spanning an acyclic direct summand."""

    gens: tuple[str, ...]

    def to_json(self):
        return {"step": "discard", "gens": list(self.gens)}


Step = Cancel | ChangeBasis | Discard


def step_from_json(obj: dict) -> Step:
    if obj["step"] == "cancel":
        return Cancel(obj["source"], obj["target"], obj["uPower"])
    if obj["step"] == "change":
        return ChangeBasis(obj["target"], tuple((a["gen"], a["uPower"]) for a in obj["added"]))
    if obj["step"] == "discard":
        return Discard(tuple(obj["gens"]))
    raise ValueError(f"unknown log step {obj['step']!r}")


@dataclass
class BasisChangeLog:
    steps: list[Step] = field(default_factory=list)

    def dumps(self) -> str:
        return "".join(json.dumps(s.to_json(), sort_keys=True) + "\n" for s in self.steps)

    @classmethod
    def loads(cls, text: str) -> "BasisChangeLog":
        return cls([step_from_json(json.loads(line)) for line in text.splitlines() if line.strip()])


class Workspace:
    """Mutable copy of a filtered complex with a reverse index for elimination."""

    def __init__(self, cx: FilteredComplex):
        self.gens: dict[str, FGen] = dict(cx.gens)
        self.axes = cx.axes
        self.rows: dict[str, Row] = {x: dict(r) for x, r in cx.diff.items()}
        self.cols: dict[str, Row] = {x: {} for x in self.gens}
        for x, r in self.rows.items():
            for y, c in r.items():
                self.cols[y][x] = c

    def _toggle(self, x, y, c):
        toggle(self.rows[x], y, c)
        if y in self.rows[x]:
            self.cols[y][x] = c
        else:
            del self.cols[y][x]

    def drop(self, x, y) -> tuple[int, ...]:
        c = self.rows[x][y]
        return tuple(a - b for a, b in zip(self.gens[x].filt, self.gens[y].at(c)))

    def cancel(self, x: str, y: str) -> list[tuple[str, str]]:
        """Cancel the invertible term x -> y; return the (source, target) pairs touched."""
        c = self.rows[x][y]
        touched = []
        dx = [(w, e) for w, e in self.rows[x].items() if w != y]
        for z, e in list(self.cols[y].items()):
            if z == x:
                continue
            k = e - c
            for w, d in dx:
                self._toggle(z, w, d + k)
                touched.append((z, w))
        for g in (x, y):
            for w in list(self.rows[g]):
                del self.cols[w][g]
            for z in list(self.cols[g]):
                del self.rows[z][g]
            del self.rows[g], self.cols[g], self.gens[g]
        return touched

    def change_basis(self, target: str, added: Iterable[tuple[str, int]]) -> None:
        """Replace the basis element target by target + sum U^k x.

        d(new target) = d(target) + sum U^k d(x); every term hitting an added
        x gets an extra term on target with the same coefficient shifted.
        """
        added = list(added)
        for x, k in added:
            for w, d in list(self.rows[x].items()):
                self._toggle(target, w, d + k)
        # old target = new target + sum U^k x, so each term U^e target spawns U^{e+k} x
        for z, e in list(self.cols[target].items()):
            for x, k in added:
                self._toggle(z, x, e + k)

    def remove_summand(self, gens: Iterable[str]) -> None:
        """Delete generators spanning an acyclic direct summand."""
        gens = list(gens)
        gs = set(gens)
        for x in gens:
            if any(y not in gs for y in self.rows[x]) or any(z not in gs for z in self.cols[x]):
                raise ValueError(f"{x} is not in a direct summand")
        sub = FilteredComplex([self.gens[x] for x in gens], {x: self.rows[x] for x in gens})
        if sub.localized_rank() != 0:
            raise ValueError(f"summand {gens} is not acyclic")
        for x in gens:
            del self.rows[x], self.cols[x], self.gens[x]

    def complex(self) -> FilteredComplex:
        return FilteredComplex(self.gens.values(), self.rows, self.axes)


@dataclass
class ReducedComplex:
    complex: FilteredComplex
    log: BasisChangeLog
    labels: dict[str, str] = field(default_factory=dict)
    unlabeled: list[str] = field(default_factory=list)


def default_key(cx: FilteredComplex) -> Callable[[str], tuple]:
    pos = {g: k for k, g in enumerate(cx.gens)}
    return lambda g: (pos[g],)


def reduce_filtered(cx: FilteredComplex | FilteredCone,
                    key: Callable[[str], tuple] | None = None) -> ReducedComplex:
    """Cancel filtration-preserving terms until every term drops I or J.

    Pivots are taken in increasing (key(source), key(target)) order; for a
    built cone the generator order is (tower s, B before A, base index).
    """
    if isinstance(cx, FilteredCone):
        cx = cx.complex
    key = key or default_key(cx)
    ws = Workspace(cx)
    heap = []

    def push(x, y):
        if y in ws.rows.get(x, ()) and not any(ws.drop(x, y)):
            heapq.heappush(heap, (key(x), key(y), x, y))

    for x, y, _ in cx.preserving_terms():
        push(x, y)
    log = BasisChangeLog()
    while heap:
        _, _, x, y = heapq.heappop(heap)
        if x not in ws.rows or y not in ws.rows[x] or any(ws.drop(x, y)):
            continue
        log.steps.append(Cancel(x, y, ws.rows[x][y]))
        for z, w in ws.cancel(x, y):
            push(z, w)
    return ReducedComplex(ws.complex(), log)


def replay(cx: FilteredComplex, log: BasisChangeLog) -> FilteredComplex:
    ws = Workspace(cx)
    for st in log.steps:
        if isinstance(st, Cancel):
            if ws.rows.get(st.source, {}).get(st.target) != st.power:
                raise ValueError(f"log step {st} does not match the complex")
            if any(ws.drop(st.source, st.target)):
                raise ValueError(f"log step {st} is not filtration preserving")
            ws.cancel(st.source, st.target)
        elif isinstance(st, Discard):
            ws.remove_summand(st.gens)
        else:
            ws.change_basis(st.target, st.added)
    return ws.complex()


def _pick_preserving(ws: Workspace, x: str, candidates: Iterable[str]) -> str | None:
    for y in candidates:
        if y in ws.rows.get(x, ()) and not any(ws.drop(x, y)):
            return y
    return None


def scripted_reduction(cone: FilteredCone) -> ReducedComplex:
    """Reduce a cone over a mirrored T(2n,2n+1) staircase in the hand order.

    1. inside each B_s cancel a'_i against b'_{i-1} (2 <= i <= 2n);
    2. inside each A_s cancel every a_i (2 <= i <= 2n-1) that has a
       filtration-preserving internal term;
    3. cancel a_{2n}^{(s)} against a'_1^{(s+1)} for s <= g, then
       a_1^{(s)} against a'_1^{(s)} for s >= g+2.

    Each pivot is checked to be invertible and filtration preserving when
    it is used, and the result is checked to be reduced.
    """
    from .cone import cone_id as cid
    m = len(cone.knot) // 2 + 1  # number of a-generators = 2n
    g, p = cone.genus, cone.p
    ws = Workspace(cone.complex)
    log = BasisChangeLog()

    def do(x, y):
        if y not in ws.rows.get(x, {}) or any(ws.drop(x, y)):
            raise AssertionError(f"scripted pivot {x} -> {y} is not an invertible preserving term")
        log.steps.append(Cancel(x, y, ws.rows[x][y]))
        ws.cancel(x, y)

    for s in cone.b_towers():
        for i in range(2, m + 1):
            do(cid("B", s, f"a{i}"), cid("B", s, f"b{i - 1}"))
    for s in cone.a_towers():
        for i in range(2, m):
            x = cid("A", s, f"a{i}")
            y = _pick_preserving(ws, x, [cid("A", s, f"b{i}"), cid("A", s, f"b{i - 1}")])
            if y is not None:
                do(x, y)
    blo, bhi = cone.b_range
    for s in cone.a_towers():
        if s <= g and blo <= s + 1 <= bhi:
            do(cid("A", s, f"a{m}"), cid("B", s + 1, "a1"))
    for s in cone.a_towers():
        if s >= g + 2 and blo <= s <= bhi:
            do(cid("A", s, "a1"), cid("B", s, "a1"))
    out = ws.complex()
    left = list(out.preserving_terms())
    if left:
        raise AssertionError(f"scripted reduction left preserving terms: {left[:3]}")
    return ReducedComplex(out, log)


def label_generators(cx: FilteredComplex, n: int) -> tuple[dict[str, str], list[str]]:
    """Names for survivors of the scripted reduction.

    a_1 in A_s is alpha_s; any other a_i with 1 < i < 2n is the extra
    generator alpha~_s; b_k in A_s is b_k^(s); a_2n in A_s keeps its name.
    """
    m = 2 * n
    labels, unknown = {}, []
    for gid in cx.gens:
        part, s, base = split_id(gid)
        kind, idx = base[0], int(base[1:])
        if part != "A":
            unknown.append(gid)
        elif kind == "a" and idx == 1:
            labels[gid] = f"alpha{s}"
        elif kind == "a" and idx == m:
            labels[gid] = f"a{m}^({s})"
        elif kind == "a":
            labels[gid] = f"alphat{s}"
        else:
            labels[gid] = f"b{idx}^({s})"
    return labels, unknown


def position(gid: str) -> int:
    """Doubled position: alpha_s straddles towers s-1 and s, everything else sits at 2s."""
    part, s, base = split_id(gid)
    if part != "A":
        raise ValueError(f"{gid} is not an A-tower generator")
    return 2 * s - 1 if base == "a1" else 2 * s


def window(n: int, ell: int) -> tuple[int, int]:
    """Doubled positions kept by X<ell>: alpha_s for 2n-1-ell <= s <= ell+1, b-towers 2n-1-ell..ell."""
    return 2 * (2 * n - 1 - ell) - 1, 2 * ell + 1


@dataclass
class LocalMaps:
    inclusion: dict      # truncated -> reduced, over F[U,V]
    projection: dict     # reduced -> truncated, over F[U,V]


class Truncator:
    """Successive splitting of a reduced cone complex down to X<ell>.

    Keeps, for every current basis element, its expression in the starting
    basis and vice versa, so the comparison maps can be written down.
    """

    def __init__(self, reduced: ReducedComplex | FilteredComplex, n: int,
                 genus: int, p: int, use_recipes: bool = True):
        base = reduced.complex if isinstance(reduced, ReducedComplex) else reduced
        self.start = base
        self.n, self.g, self.p = n, genus, p
        self.ws = Workspace(base)
        self.log = BasisChangeLog()
        self.use_recipes = use_recipes and n >= 3
        self.incl = {x: {x: 0} for x in base.gens}
        self.proj = {x: {x: 0} for x in base.gens}
        self.discarded: list[str] = []

    # -- primitive steps -------------------------------------------------
    def change(self, target: str, added: list[tuple[str, int]]) -> None:
        ws = self.ws
        tf = ws.gens[target].filt
        tm = ws.gens[target].maslov
        for x, k in added:
            lv = ws.gens[x].at(k)
            if any(a > b for a, b in zip(lv, tf)):
                raise AssertionError(
                    f"basis change {target} += U^{k} {x} is not filtered: {lv} vs {tf}")
            if ws.gens[x].maslov - 2 * k != tm:
                raise AssertionError(f"basis change {target} += U^{k} {x} is not homogeneous")
        ws.change_basis(target, added)
        self.log.steps.append(ChangeBasis(target, tuple(added)))
        for x, k in added:
            for y, e in self.incl[x].items():
                toggle(self.incl[target], y, e + k)
        for g, expr in self.proj.items():
            e = expr.get(target)
            if e is not None:
                for x, k in added:
                    toggle(expr, x, e + k)

    def discard(self, gens: Iterable[str]) -> None:
        gens = list(gens)
        try:
            self.ws.remove_summand(gens)
        except ValueError as err:
            raise AssertionError(str(err)) from None
        for x in gens:
            del self.incl[x]
        for expr in self.proj.values():
            for x in gens:
                expr.pop(x, None)
        self.log.steps.append(Discard(tuple(gens)))
        self.discarded += gens

    # -- end stripping -----------------------------------------------------
    def _neighbours(self, x):
        return list(self.ws.rows[x]) + list(self.ws.cols[x])

    def _path_from(self, end: str, length: int) -> list[str]:
        path, prev = [end], None
        while len(path) < length:
            nxt = [y for y in self._neighbours(path[-1]) if y != prev and y not in path]
            if not nxt:
                break
            prev = path[-1]
            path.append(nxt[0])
        return path

    def _solve_segment(self, seg: list[str], w: str):
        """Filtered basis change isolating seg from its outside neighbour w, or None."""
        ws = self.ws
        last = seg[-1]
        segset = set(seg)
        if last in ws.rows[w]:
            # w -> last: replace w by w + x with x in span(seg), d x = U^d last
            want = {last: ws.rows[w][last]}
            mw, fw = ws.gens[w].maslov, ws.gens[w].filt
            opts = []
            for u in seg:
                k2 = ws.gens[u].maslov - mw
                if k2 % 2 == 0 and all(a <= b for a, b in zip(ws.gens[u].at(k2 // 2), fw)):
                    opts.append((u, k2 // 2))
            for mask in range(1, 1 << len(opts)):
                pick = [opts[i] for i in range(len(opts)) if mask >> i & 1]
                try:
                    dx: dict[str, int] = {}
                    for u, k in pick:
                        for y, e in ws.rows[u].items():
                            toggle(dx, y, e + k)
                except ValueError:
                    continue
                if dx == want:
                    return [("change", w, pick)]
            return None
        # last -> w: replace targets t in seg by t + U^k w so that no term of seg reaches w
        mw = ws.gens[w].maslov
        opts = []
        for t in seg:
            k2 = mw - ws.gens[t].maslov
            if k2 % 2 == 0 and all(a <= b for a, b in zip(ws.gens[w].at(k2 // 2), ws.gens[t].filt)):
                opts.append((t, k2 // 2))
        for mask in range(1, 1 << len(opts)):
            pick = [opts[i] for i in range(len(opts)) if mask >> i & 1]
            ok = True
            for z in seg:
                acc: set = set()
                for t, k in pick:
                    if t in ws.rows[z]:
                        acc ^= {ws.rows[z][t] + k}
                need = {ws.rows[z][w]} if w in ws.rows[z] else set()
                if acc != need:
                    ok = False
                    break
            if ok and not any(ws.rows[w].get(y) is not None for y in segset):
                return [("change", t, [(w, k)]) for t, k in pick]
        return None

    def strip_end(self, end: str, lo: int | None = None, hi: int | None = None,
                  max_len: int = 8) -> list[str]:
        """Split off the shortest filtered end segment of the zigzag starting at end."""
        for length in range(2, max_len + 1, 2):
            path = self._path_from(end, length + 1)
            seg = path[:length]
            if len(seg) < length:
                break
            if lo is not None and any(lo <= position(x) <= hi for x in seg):
                break
            if len(path) == length:
                self.discard(seg)
                return seg
            plan = self._solve_segment(seg, path[length])
            if plan is None:
                continue
            for _, tgt, added in plan:
                self.change(tgt, added)
            self.discard(seg)
            return seg
        raise AssertionError(f"no filtered splitting of an end segment at {end}")

    def ends(self) -> list[str]:
        return [x for x in self.ws.gens if len(self._neighbours(x)) <= 1]

    def strip_outside(self, lo: int, hi: int, side: str) -> None:
        """Strip end segments from one side until that end lies in [lo, hi]."""
        while self.ws.gens:
            cands = self.ends()
            end = min(cands, key=position) if side == "low" else max(cands, key=position)
            if lo <= position(end) <= hi:
                return
            if not self._neighbours(end):
                self.discard([end])
                continue
            self.strip_end(end, lo, hi)

    # -- the hand recipes for the low side ----------------------------------
    def _gid(self, s, base):
        from .cone import cone_id
        return cone_id("A", s, base)

    def recipe(self, s: int) -> None:
        """Basis change that splits off the generators at positions 2s-3 and 2s-2."""
        n, g = self.n, self.g
        alpha = lambda t: self._gid(t, "a1")
        added = [(alpha(s - 1), -s + 1)]
        case = None
        if -g + 2 <= s <= -g + 2 * n + 1:
            case = 1
        else:
            for j in range(1, n):
                if -g + 2 * j * n + 2 <= s <= -g + 2 * (j + 1) * n - 1 and s <= 1:
                    case = 2
                    added.append((self._gid(s - 1, f"a{j + 1}"), -s + 1 + j * (j + 1) // 2))
                    break
            else:
                if any(s in (-g + 2 * j * n, -g + 2 * j * n + 1) for j in range(2, n)):
                    case = 3
        if case is None:
            raise ValueError(f"no splitting recipe for s = {s}")
        self.change(alpha(s), added)
        gone = [x for x in self.ws.gens if position(x) <= 2 * s - 2]
        self.discard(gone)

    # -- public ----------------------------------------------------------
    def step(self, ell: int) -> None:
        """Pass from X<ell> to X<ell-1>."""
        lo, hi = window(self.n, ell - 1)
        if self.use_recipes:
            self.recipe(2 * self.n - ell)
        else:
            self.strip_outside(lo, hi, "low")
        self.strip_outside(lo, hi, "high")
        bad = [x for x in self.ws.gens if not lo <= position(x) <= hi]
        if bad:
            raise AssertionError(f"generators outside X<{ell - 1}> remain: {bad[:4]}")

    def complex(self) -> FilteredComplex:
        return self.ws.complex()

    def maps(self) -> LocalMaps:
        cur = self.complex()
        incl = {x: _to_uv_terms(cur[x], self.start, e) for x, e in self.incl.items()}
        proj = {g: _to_uv_terms(self.start[g], cur, e) for g, e in self.proj.items()}
        return LocalMaps(incl, proj)


def _to_uv_terms(src: FGen, dst: FilteredComplex, expr: dict[str, int]) -> frozenset:
    out = set()
    for y, k in expr.items():
        di, dj = (a - b for a, b in zip(src.filt, dst[y].at(k)))
        if di < 0 or dj < 0:
            raise AssertionError(f"map term {src.id} -> U^{k} {y} raises a filtration")
        out ^= {(y, di, dj)}
    return frozenset(out)


def full_level(cone: FilteredCone) -> int:
    return cone.genus + cone.p - 1


def truncate_local(trunc: Truncator, ell: int) -> Truncator:
    """Split X<ell> as X<ell-1> plus an acyclic summand, for 2n <= ell <= g+p-1."""
    n, g, p = trunc.n, trunc.g, trunc.p
    if not 2 * n <= ell <= g + p - 1:
        raise ValueError(f"ell must lie in [{2 * n}, {g + p - 1}], got {ell}")
    trunc.step(ell)
    return trunc


def trim_to_core(trunc: Truncator) -> Truncator:
    """Split X<2n-1> once more, leaving alpha_1..alpha_{2n-1} and b-towers 1..2n-2.

    X<2n-1> still carries the acyclic ends sitting in A_0 and A_{2n-1}.
    """
    trunc.step(2 * trunc.n - 1)
    return trunc


def truncate_to(reduced: ReducedComplex, cone: FilteredCone, n: int, target: int | None = None,
                use_recipes: bool = True, trim: bool = True) -> Truncator:
    """Iterate truncate_local from the full cone down to X<target> (default 2n-1).

    With trim (the default) and target 2n-1 the acyclic ends of X<2n-1> are
    split off as well, so the result is the local representative itself.
    """
    target = 2 * n - 1 if target is None else target
    top = full_level(cone)
    if not 2 * n - 1 <= target <= top:
        raise ValueError(f"target must lie in [{2 * n - 1}, {top}], got {target}")
    tr = Truncator(reduced, n, cone.genus, cone.p, use_recipes)
    for ell in range(top, target, -1):
        truncate_local(tr, ell)
    if trim and target == 2 * n - 1:
        trim_to_core(tr)
    return tr


def quotient_chain(cx: FilteredComplex, pairs: Iterable[tuple[str, str]]) -> ReducedComplex:
    """Quotient out the acyclic pieces {x, d x} one pair at a time.

    Each pair (x, y) names a filtration preserving term U^c y of d(x); the
    pieces are removed by Gaussian elimination in the given order.
    """
    ws = Workspace(cx)
    log = BasisChangeLog()
    for x, y in pairs:
        if x not in ws.rows or y not in ws.rows[x]:
            raise ValueError(f"{y} does not occur in d({x}); {{{x}, d{x}}} is not acyclic")
        if any(ws.drop(x, y)):
            raise ValueError(f"term {x} -> {y} drops a filtration; cannot quotient filtered")
        log.steps.append(Cancel(x, y, ws.rows[x][y]))
        ws.cancel(x, y)
    return ReducedComplex(ws.complex(), log)


def delta_IJ(cx: FilteredComplex, source: str, target: str) -> tuple[int, int]:
    """(I, J)(source) - (I, J)(U^c target) for the term U^c target of d(source)."""
    if target not in cx.diff.get(source, {}):
        raise ValueError(f"{target} does not occur in d({source})")
    return cx.drop(source, target)


def expected_drops(n: int) -> dict[str, dict[tuple[str, str], tuple[int, int]]]:
    """Expected filtration drops of the local representative, grouped by family.

    Eight families for n >= 3; for n = 2 a single family of four pairs.
    """
    from .invariants import alpha, alphat, bgen
    lo, hi = n * (n - 1) // 2, n * (n + 1) // 2
    if n == 2:
        return {"n=2": {(alpha(1), bgen(2, 1)): (3, 1), (alpha(2), bgen(2, 1)): (2, 3),
                        (alpha(2), bgen(2, 2)): (3, 2), (alpha(3), bgen(2, 2)): (1, 3)}}
    if n < 3:
        raise ValueError("the table is stated for n >= 2")
    fam: dict[str, dict] = {f"D{k}": {} for k in range(1, 9)}
    for s in range(1, n - 1):
        fam["D1"][(alpha(s), bgen(n - 1, s))] = (lo, lo)
    for s in range(n + 2, 2 * n):
        fam["D2"][(alpha(s), bgen(n + 1, s - 1))] = (lo, lo)
    for s in range(2, n + 1):
        fam["D3"][(alpha(s), bgen(n, s - 1))] = (hi - s + 1, hi)
    for s in range(n, 2 * n - 1):
        fam["D4"][(alpha(s), bgen(n, s))] = (hi, lo + s - n + 1)
    fam["D5"][(alpha(n - 1), bgen(n, n - 1))] = (hi, lo)
    fam["D6"][(alpha(n + 1), bgen(n, n))] = (lo, hi)
    for s in range(1, n - 1):
        fam["D7"][(alphat(s), bgen(n - 1, s))] = (0, n - 1 - s)
        fam["D7"][(alphat(s), bgen(n, s))] = (n, 0)
    for s in range(n + 1, 2 * n - 1):
        fam["D8"][(alphat(s), bgen(n, s))] = (0, n)
        fam["D8"][(alphat(s), bgen(n + 1, s))] = (s - n, 0)
    return fam


def check_delta_table(cx: FilteredComplex, labels: dict[str, str], n: int) -> dict[str, list[str]]:
    """Compare the observed drops with expected_drops; empty lists mean agreement."""
    back = {v: k for k, v in labels.items()}
    out: dict[str, list[str]] = {}
    for name, table in expected_drops(n).items():
        bad = []
        for (src, tgt), want in table.items():
            if src not in back or tgt not in back:
                bad.append(f"{src} or {tgt} missing")
                continue
            try:
                got = delta_IJ(cx, back[src], back[tgt])
            except ValueError as err:
                bad.append(str(err))
                continue
            if got != want:
                bad.append(f"Delta({src}, {tgt}) = {got}, expected {want}")
        out[name] = bad
    return out


def to_local_fuv(cx: FilteredComplex | Truncator, shift: tuple[int, int] = (0, 0),
                 labels: dict[str, str] | None = None) -> ComplexUV:
    """Translate a reduced representative to F[U, V], optionally renaming generators."""
    from .algebra import rename
    if isinstance(cx, Truncator):
        cx = cx.complex()
    if not cx.is_reduced():
        raise ValueError("input is not reduced: some term preserves both filtrations")
    out = cx.to_uv(shift)
    return rename(out, labels) if labels else out


@dataclass
class PipelineResult:
    cone: FilteredCone
    reduced: ReducedComplex
    truncated: Truncator
    labels: dict[str, str]
    local: ComplexUV


def pipeline(n: int, use_recipes: bool = True) -> PipelineResult:
    """Cone of the mirrored T(2n,2n+1) with p = 2n-1, reduced, truncated and labelled."""
    from .cone import build_cone
    from .staircase import mirror_staircase
    cone = build_cone(mirror_staircase(n), 2 * n - 1)
    red = scripted_reduction(cone)
    tr = truncate_to(red, cone, n, use_recipes=use_recipes)
    cx = tr.complex()
    labels, unknown = label_generators(cx, n)
    if unknown:
        raise AssertionError(f"unlabelled survivors: {unknown}")
    red.labels = labels
    return PipelineResult(cone, red, tr, labels, to_local_fuv(cx, labels=labels))
