"""Homology of graded free complexes over F_2[W] and F_2[W]/(W^k).

Every matrix entry is a single power W^e (homogeneous complexes only), so
elimination never leaves monomial form.
"""

from __future__ import annotations

from dataclasses import dataclass


class NonHomogeneousError(ValueError):
    pass


@dataclass(frozen=True)
class Summand:
    """One cyclic summand of a homology module.

    order is None for a free summand, otherwise the summand is F[W]/(W^order).
    gen is the original generator id most responsible for it; expr is the
    summand generator written in the original basis as (gen, W-exponent) pairs.
    """

    grading: int
    order: int | None
    gen: str
    expr: frozenset = frozenset()


class _Sparse:
    def __init__(self, cols: dict[str, dict[str, int]], trunc: int | None):
        self.trunc = trunc
        self.cols: dict[str, dict[str, int]] = {}
        self.rows: dict[str, dict[str, int]] = {}
        for x, tgts in cols.items():
            self.cols.setdefault(x, {})
            self.rows.setdefault(x, {})
        for x, tgts in cols.items():
            for y, e in tgts.items():
                self.rows.setdefault(y, {})
                self.cols.setdefault(y, {})
                self._toggle(x, y, e)

    def _toggle(self, x, y, e):
        if self.trunc is not None and e >= self.trunc:
            return
        col = self.cols[x]
        old = col.get(y)
        if old is None:
            col[y] = e
            self.rows[y][x] = e
        elif old == e:
            del col[y]
            del self.rows[y][x]
        else:
            raise NonHomogeneousError(f"entry {x}->{y}: W^{old} + W^{e}")

    def add_col(self, dst, src, c):
        # col_dst += W^c col_src
        for y, e in list(self.cols[src].items()):
            self._toggle(dst, y, e + c)

    def add_row(self, dst, src, c):
        # row_dst += W^c row_src
        for x, e in list(self.rows[src].items()):
            self._toggle(x, dst, e + c)

    def remove(self, g):
        for y in self.cols.pop(g):
            del self.rows[y][g]
        for x in self.rows.pop(g):
            del self.cols[x][g]


def _xor_expr(a: dict, b: dict, shift: int, trunc):
    out = dict(a)
    for key in b:
        g, e = key
        k2 = (g, e + shift)
        if trunc is not None and k2[1] >= trunc:
            continue
        if k2 in out:
            del out[k2]
        else:
            out[k2] = True
    return out


def graded_homology(grading: dict[str, int], diff: dict[str, dict[str, int]],
                    trunc: int | None = None) -> list[Summand]:
    """Decompose H of a graded complex over F[W] (or over F[W]/W^trunc).

    diff[x][y] = e means the term W^e y in d(x); W has degree -2, d degree -1.
    The complex is split over the PID F[W] first and then truncated, which
    is exact on each two-term piece.
    """
    m = _Sparse({x: dict(diff.get(x, {})) for x in grading}, None)
    expr = {x: {(x, 0): True} for x in grading}
    pairs = []
    while True:
        best = None
        for x, col in m.cols.items():
            for y, e in col.items():
                if best is None or e < best[2]:
                    best = (x, y, e)
                    if e == 0:
                        break
            if best is not None and best[2] == 0:
                break
        if best is None:
            break
        x, y, e = best
        for y2, e2 in list(m.cols[x].items()):
            if y2 == y:
                continue
            # new basis element y + W^(e2-e) y2
            c = e2 - e
            m.add_col(y, y2, c)
            m.add_row(y2, y, c)
            expr[y] = _xor_expr(expr[y], expr[y2], c, None)
        for z, e2 in list(m.rows[y].items()):
            if z == x:
                continue
            c = e2 - e
            m.add_col(z, x, c)
            m.add_row(x, z, c)
            expr[z] = _xor_expr(expr[z], expr[x], c, None)
        if m.cols[x] != {y: e} or m.rows[y] != {x: e} or m.cols[y] or m.rows[x]:
            raise NonHomogeneousError("elimination failed to split a pair; is d^2 = 0?")
        m.remove(x)
        m.remove(y)
        pairs.append((x, y, e, expr.pop(x), expr.pop(y)))

    def cut(ex, shift=0):
        return frozenset(k for k in _xor_expr({}, ex, shift, trunc))

    out: list[Summand] = []
    for g in m.cols:
        out.append(Summand(grading[g], None, g, cut(expr[g])))
    for x, y, e, ex, ey in pairs:
        if e == 0:
            continue
        if trunc is None:
            out.append(Summand(grading[y], e, y, cut(ey)))
        elif e >= trunc:
            out.append(Summand(grading[y], None, y, cut(ey)))
            out.append(Summand(grading[x], None, x, cut(ex)))
        else:
            out.append(Summand(grading[y], e, y, cut(ey)))
            sh = trunc - e
            out.append(Summand(grading[x] - 2 * sh, e, x, cut(ex, sh)))
    out.sort(key=lambda s: (-s.grading, s.order is not None, s.order or 0, s.gen))
    return out
