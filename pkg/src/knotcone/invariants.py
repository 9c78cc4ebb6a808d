"""The local complexes C_n, their duals, and the invariants read off them."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .algebra import (U_EQ_0, U_EQ_1, V_EQ_1, ComplexUV, dualize, homology, quotient,
                      unit_complex)
from .filtered import FilteredComplex
from .f2 import RowEchelon
from .pid import graded_homology

Edge = tuple[str, str, int, int]


def alpha(s: int) -> str:
    return f"alpha{s}"


def alphat(s: int) -> str:
    return f"alphat{s}"


def bgen(k: int, s: int) -> str:
    return f"b{k}^({s})"


def _cn_edges(n: int) -> list[Edge]:
    lo, hi = n * (n - 1) // 2, n * (n + 1) // 2
    e: list[Edge] = []
    for s in range(1, 2 * n):
        a = alpha(s)
        if s == 1:
            e.append((a, bgen(n - 1, 1), lo, lo))
        elif s <= n - 2:
            e.append((a, bgen(n, s - 1), hi - s + 1, hi))
            e.append((a, bgen(n - 1, s), lo, lo))
        elif s <= n + 1:
            e.append((a, bgen(n, s - 1), lo + n - s + 1, hi))
            e.append((a, bgen(n, s), hi, lo - n + s + 1))
        elif s <= 2 * n - 2:
            e.append((a, bgen(n + 1, s - 1), lo, lo))
            e.append((a, bgen(n, s), hi, lo - n + s + 1))
        else:
            e.append((a, bgen(n + 1, 2 * n - 2), lo, lo))
    for s in range(1, n - 1):
        e.append((alphat(s), bgen(n, s), n, 0))
        e.append((alphat(s), bgen(n - 1, s), 0, n - s - 1))
    for s in range(n + 1, 2 * n - 1):
        e.append((alphat(s), bgen(n + 1, s), s - n, 0))
        e.append((alphat(s), bgen(n, s), 0, n))
    return e


def _c2_edges() -> list[Edge]:
    return [(alpha(1), bgen(2, 1), 3, 1),
            (alpha(2), bgen(2, 1), 2, 3),
            (alpha(2), bgen(2, 2), 3, 2),
            (alpha(3), bgen(2, 2), 1, 3)]


def relative_gradings(edges: list[Edge]) -> dict[str, tuple[int, int]]:
    """Solve the (-1,-1) drop law along a connected edge set, first vertex at (0, 0)."""
    adj: dict[str, list] = {}
    for x, y, u, v in edges:
        adj.setdefault(x, []).append((y, u, v, +1))
        adj.setdefault(y, []).append((x, u, v, -1))
    start = edges[0][0]
    gr = {start: (0, 0)}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        gu, gv = gr[x]
        for y, u, v, sign in adj[x]:
            # x -> y: gr(y) = gr(x) - 1 + 2 exps; reversed for y -> x
            cand = (gu - 1 + 2 * u, gv - 1 + 2 * v) if sign > 0 else (gu + 1 - 2 * u, gv + 1 - 2 * v)
            if y in gr:
                if gr[y] != cand:
                    raise ValueError(f"inconsistent gradings at {y}")
            else:
                gr[y] = cand
                todo.append(y)
    return gr


def tower_top(c: ComplexUV, var: str = "U") -> int:
    """Grading of the free generator of H(C/(V=1)) over F[U] (var U) or H(C/(U=1)) over F[V]."""
    h = homology(quotient(c, V_EQ_1 if var == "U" else U_EQ_1))
    if h.free_rank != 1:
        raise ValueError(f"homology has free rank {h.free_rank}, expected 1")
    return h.free[0].grading


def normalize(c: ComplexUV, d: int = 0) -> ComplexUV:
    """Shift so that both towers start in grading d."""
    from .algebra import shift
    return shift(c, (d - tower_top(c, "U"), d - tower_top(c, "V")))


def local_class_Cn(n: int) -> ComplexUV:
    """The local representative C_n, normalized with d = 0 in both gradings."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return unit_complex(alpha(1))
    edges = _c2_edges() if n == 2 else _cn_edges(n)
    gr = relative_gradings(edges)
    c = ComplexUV.from_edges([(g, a, b) for g, (a, b) in gr.items()], edges)
    return normalize(c)


def dual_class(n: int) -> ComplexUV:
    return dualize(local_class_Cn(n))


# ------------------------------------------------------------------ tau

def tau_vertical(c: ComplexUV) -> int:
    """Alexander grading of the free generator of H(C/(U=0)) over F[V].

    Only meaningful when that homology has free rank one, as for knots in S^3.
    """
    h = homology(quotient(c, U_EQ_0))
    if h.free_rank != 1:
        raise ValueError(f"vertical homology has free rank {h.free_rank}, expected 1")
    top = h.free[0]
    g, e = min(top.expr, key=lambda t: t[1])
    return (c[g].gr_u - top.grading) // 2


def _hat_vector(expr, pos) -> int:
    v = 0
    for g, e in expr:
        if e == 0:
            v ^= 1 << pos[g]
    return v


def tau(c: ComplexUV) -> int:
    """Least Alexander level carrying the image of the F[U]-tower in the hat complex.

    Take the tower generator z of H(C/(V=1)) and reduce it mod U; call that
    z_hat, a cycle of C/(U=0, V=1). The hat complex is filtered by the
    Alexander grading of generators. tau is the least s with z_hat in
    F_s + boundaries + (U=0 images of torsion classes in the grading of z).
    Torsion is allowed because a local map only fixes the tower modulo it,
    which makes the result a local-equivalence invariant. When the vertical
    homology is F[V] plus torsion this agrees with tau_vertical.
    """
    h = homology(quotient(c, V_EQ_1))
    if h.free_rank != 1:
        raise ValueError(f"V=1 homology has free rank {h.free_rank}, expected 1")
    top = h.free[0]
    ids = c.ids
    pos = {g: k for k, g in enumerate(ids)}
    ech = RowEchelon()
    for x in ids:
        v = 0
        for y, u, _ in c.differential.get(x, ()):
            if u == 0:
                v ^= 1 << pos[y]
        ech.add(v)
    for s in h.summands:
        if s.order is None:
            continue
        k = (s.grading - top.grading) // 2
        if s.grading >= top.grading and (s.grading - top.grading) % 2 == 0 and k < s.order:
            # U^k times a torsion generator sits in the grading of z
            ech.add(_hat_vector({(g, e + k) for g, e in s.expr}, pos))
    target = _hat_vector(top.expr, pos)
    if not target:
        raise ValueError("tower generator vanishes mod U")
    if ech.solve(target) is not None:
        raise ValueError("tower generator is a boundary mod U")
    by_level: dict[int, list[str]] = {}
    for x in ids:
        by_level.setdefault(c[x].alexander, []).append(x)
    for level in sorted(by_level):
        for x in by_level[level]:
            ech.add(1 << pos[x])
        if ech.solve(target) is not None:
            return level
    raise AssertionError("unreachable: target lies in the full span")


# ----------------------------------------------------- standard parameters

@dataclass(frozen=True)
class StandardParams:
    """Signed pairs a_1, a_2, ... read along a zigzag; sign +1 or -1."""

    params: tuple[tuple[int, tuple[int, int]], ...]
    start: str | None = None

    def odd(self) -> list[tuple[int, tuple[int, int]]]:
        return list(self.params[0::2])

    def __str__(self):
        return ", ".join(("+" if s > 0 else "-") + f"({x},{y})" for s, (x, y) in self.params)


def zigzag_path(c: ComplexUV) -> list[str]:
    """Generators of a zigzag complex in path order (one end first)."""
    nb: dict[str, set] = {g: set() for g in c.ids}
    count = 0
    for x, y, _, _ in c.edges():
        if y in nb[x]:
            raise ValueError(f"double edge between {x} and {y}; not a zigzag")
        nb[x].add(y)
        nb[y].add(x)
        count += 1
    if len(c) == 1:
        return list(c.ids)
    bad = [g for g, s in nb.items() if len(s) > 2]
    if bad or count != len(c) - 1:
        raise ValueError(f"not a zigzag: {len(c)} generators, {count} edges, branch points {bad[:3]}")
    ends = [g for g, s in nb.items() if len(s) == 1]
    if len(ends) != 2:
        raise ValueError("not a zigzag: expected two ends")
    path, prev = [ends[0]], None
    while len(path) < len(c):
        nxt = [y for y in nb[path[-1]] if y != prev]
        prev = path[-1]
        path.append(nxt[0])
    return path


def _read_params(c: ComplexUV, path: list[str]) -> StandardParams:
    term = {(x, y): (u, v) for x, y, u, v in c.edges()}
    out = []
    for i in range(1, len(path)):
        a, b = path[i - 1], path[i]
        if (b, a) in term:
            sign, (u, v) = +1, term[(b, a)]
        else:
            sign, (u, v) = -1, term[(a, b)]
        out.append((sign, (u, v) if i % 2 == 1 else (v, u)))
    return StandardParams(tuple(out), path[0])


def standard_params(c: ComplexUV) -> StandardParams:
    """Standard-complex parameters of a zigzag, read from its distinguished end.

    The distinguished end is the one from which every odd parameter has a
    positive first entry; a tie is broken by the end that carries the
    F[U]-tower of H(C/(V=1)) with coefficient U^0.
    """
    if len(c) == 1:
        return StandardParams((), c.ids[0])
    path = zigzag_path(c)
    cands = [_read_params(c, p) for p in (path, path[::-1])]
    good = [sp for sp in cands if all(x >= 1 for _, (x, _) in sp.odd())]
    if len(good) == 1:
        return good[0]
    pool = good or cands
    h = homology(quotient(c, V_EQ_1))
    if h.free_rank != 1:
        raise ValueError("cannot pick a distinguished end: V=1 homology is not F[U]")
    lead = {g for g, e in h.free[0].expr if e == 0}
    pick = [sp for sp in pool if sp.start in lead]
    if len(pick) != 1:
        raise ValueError("cannot pick a distinguished end of the zigzag")
    return pick[0]


def phi(params: StandardParams) -> dict[tuple[int, int], int]:
    """phi_{i,j} = #(+(i,j)) - #(-(i,j)) over odd-index parameters."""
    cnt: Counter = Counter()
    for sign, pair in params.odd():
        cnt[pair] += sign
    return {k: v for k, v in sorted(cnt.items()) if v}


def phi_expected(n: int) -> dict[tuple[int, int], int]:
    """The closed-form phi table of C_n (n >= 2)."""
    if n == 2:
        return {(3, 1): -1, (3, 2): -1}
    lo, hi = n * (n - 1) // 2, n * (n + 1) // 2
    out: Counter = Counter()
    for i in range(1, n - 1):
        out[(i, 0)] += -1
    out[(n, 0)] += -n + 2
    out[(lo, lo)] += -n + 2
    for j in range(lo, hi):
        out[(hi, j)] += -1
    return {k: v for k, v in sorted(out.items()) if v}


# ------------------------------------------------------------ d-invariant

def d_invariant(m: FilteredComplex) -> int:
    """Top grading of the free part of H of the I <= 0 subcomplex.

    Each generator x is replaced by U^{I(x)} x, which sits at I = 0; the
    F[U]-complex on these has exponents I(x) - I(y) + c >= 0.
    """
    if m.localized_rank() != 1:
        raise ValueError("d-invariant needs localized homology of rank 1")
    grading = {x: g.maslov - 2 * g.filt[0] for x, g in m.gens.items()}
    diff = {}
    for x, row in m.diff.items():
        ix = m[x].filt[0]
        diff[x] = {y: ix - m[y].filt[0] + c for y, c in row.items()}
    summ = graded_homology(grading, diff)
    free = [s for s in summ if s.order is None]
    if len(free) != 1:
        raise ValueError(f"expected one tower, found {len(free)}")
    return free[0].grading
