"""Filtered free complexes over F_2[U, U^-1].

Generators are stored U-normalized; every U-power lives on a differential
entry. U lowers each filtration coordinate by 1 and the Maslov grading by 2.
A homogeneous differential has at most one U-power per (source, target),
so a row is a plain dict target -> exponent.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .algebra import ComplexUV

Row = dict[str, int]


@dataclass(frozen=True)
class FGen:
    id: str
    filt: tuple[int, ...]
    maslov: int
    meta: Mapping = field(default_factory=dict, compare=False, hash=False)

    def at(self, power: int) -> tuple[int, ...]:
        """Filtration levels of U^power times this generator."""
        return tuple(f - power for f in self.filt)


def toggle(row: Row, tgt: str, power: int) -> None:
    old = row.get(tgt)
    if old is None:
        row[tgt] = power
    elif old == power:
        del row[tgt]
    else:
        raise ValueError(f"inhomogeneous sum: U^{old} + U^{power} on {tgt}")


class FilteredComplex:
    """Generators (ordered) plus a sparse differential.

    Treated as immutable once built; reduction routines copy before editing.
    """

    def __init__(self, gens: Iterable[FGen], diff: Mapping[str, Mapping[str, int]],
                 axes: tuple[str, ...] = ("i", "j")):
        self.gens: dict[str, FGen] = {}
        for g in gens:
            if g.id in self.gens:
                raise ValueError(f"duplicate generator {g.id}")
            self.gens[g.id] = g
        self.diff: dict[str, Row] = {g: dict(diff.get(g, {})) for g in self.gens}
        self.axes = axes

    def __len__(self):
        return len(self.gens)

    def __getitem__(self, gid: str) -> FGen:
        return self.gens[gid]

    def d(self, elem: Mapping[str, int]) -> Row:
        out: Row = {}
        for x, k in elem.items():
            for y, c in self.diff[x].items():
                toggle(out, y, c + k)
        return out

    def terms(self):
        for x, row in self.diff.items():
            for y, c in row.items():
                yield x, y, c

    def n_terms(self) -> int:
        return sum(len(r) for r in self.diff.values())

    def copy(self) -> "FilteredComplex":
        return FilteredComplex(self.gens.values(), self.diff, self.axes)

    def validate(self) -> list[str]:
        """d^2 = 0, Maslov drop of exactly one, and filtration monotonicity."""
        bad = []
        for x, y, c in self.terms():
            if y not in self.gens:
                bad.append(f"d({x}) hits unknown {y}")
                continue
            gx, gy = self.gens[x], self.gens[y]
            if gy.maslov - 2 * c != gx.maslov - 1:
                bad.append(f"d({x}) term U^{c} {y}: Maslov {gy.maslov - 2 * c} != {gx.maslov - 1}")
            lv = gy.at(c)
            if any(a > b for a, b in zip(lv, gx.filt)):
                bad.append(f"d({x}) term U^{c} {y}: filtration {lv} exceeds {gx.filt}")
        for x in self.gens:
            try:
                dd = self.d(self.diff[x])
            except ValueError as err:
                bad.append(f"d^2({x}): {err}")
                continue
            if dd:
                bad.append(f"d^2({x}) = {sorted(dd.items())} != 0")
        return bad

    def drop(self, x: str, y: str) -> tuple[int, ...]:
        """Componentwise filtration drop of the term U^c y in d(x)."""
        c = self.diff[x][y]
        return tuple(a - b for a, b in zip(self.gens[x].filt, self.gens[y].at(c)))

    def is_reduced(self) -> bool:
        return all(any(t > 0 for t in self.drop(x, y)) for x, y, _ in self.terms())

    def preserving_terms(self):
        for x, y, c in self.terms():
            if not any(self.drop(x, y)):
                yield x, y, c

    def dual(self, suffix: str = "*") -> "FilteredComplex":
        def name(g):
            return g[:-len(suffix)] if suffix and g.endswith(suffix) else g + suffix

        gens = [FGen(name(g.id), tuple(-f for f in g.filt), -g.maslov, dict(g.meta))
                for g in self.gens.values()]
        diff: dict[str, Row] = {name(g): {} for g in self.gens}
        for x, y, c in self.terms():
            diff[name(y)][name(x)] = c
        return FilteredComplex(gens, diff, self.axes)

    def restrict(self, keep: Iterable[str]) -> "FilteredComplex":
        """Subquotient spanned by the given generators (terms leaving it are dropped)."""
        keep = [g for g in self.gens if g in set(keep)]
        ks = set(keep)
        diff = {x: {y: c for y, c in self.diff[x].items() if y in ks} for x in keep}
        return FilteredComplex([self.gens[g] for g in keep], diff, self.axes)

    def to_uv(self, shift: tuple[int, int] = (0, 0)) -> ComplexUV:
        """Translate a doubly filtered complex to F_2[U, V].

        A term U^c y in d(x) with filtration drops (dI, dJ) becomes U^dI V^dJ;
        gradings are gr_U = M - 2I and gr_V = M - 2J, plus the shift.
        """
        if len(self.axes) != 2:
            raise ValueError("need exactly two filtrations")
        gens = [(g.id, g.maslov - 2 * g.filt[0] + shift[0], g.maslov - 2 * g.filt[1] + shift[1])
                for g in self.gens.values()]
        edges = []
        for x, y, c in self.terms():
            di, dj = self.drop(x, y)
            if di < 0 or dj < 0:
                raise ValueError(f"term {x}->{y} raises a filtration")
            edges.append((x, y, di, dj))
        return ComplexUV.from_edges(gens, edges)

    def localized_rank(self) -> int:
        from . import f2
        ids = list(self.gens)
        pos = {g: i for i, g in enumerate(ids)}
        cols = []
        for x in ids:
            v = 0
            for y in self.diff[x]:
                v ^= 1 << pos[y]
            cols.append(v)
        return len(ids) - 2 * f2.rank(cols)

