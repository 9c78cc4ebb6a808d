"""Staircase complexes of L-space knots, in particular T(2n, 2n+1) and its mirror."""

from __future__ import annotations

from collections.abc import Sequence

from .filtered import FGen, FilteredComplex

InftyComplex = FilteredComplex


def genus(n: int) -> int:
    return n * (2 * n - 1)


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def alexander_poly(n: int) -> list[int]:
    """Coefficients (index = exponent) of the Alexander polynomial of T(2n, 2n+1)."""
    _check_n(n)
    coeffs = [0] * (2 * genus(n) + 1)
    coeffs[0] += 1
    for i in range(2 * n - 1):
        coeffs[(2 * n - i) * (2 * n - 1) - i] += 1
        coeffs[(2 * n - i) * (2 * n - 1) - 2 * i - 1] -= 1
    return coeffs


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def partial_term(n: int, i: int) -> list[int]:
    """(t^{(2n-i)(2n-1)-i} - t^{(2n-i)(2n-1)-2i-1}) (1 + t + ... + t^{2n-1})."""
    hi = (2 * n - i) * (2 * n - 1) - i
    lo = (2 * n - i) * (2 * n - 1) - 2 * i - 1
    mono = [0] * (hi + 1)
    mono[hi] += 1
    mono[lo] -= 1
    return poly_mul(mono, [1] * (2 * n))


def telescoped_sum(n: int, ell: int) -> list[int]:
    """Closed form of partial_term(n, 0) + ... + partial_term(n, ell)."""
    top = (2 * n - 1) * (2 * n + 1)
    out = [0] * (top + 1)
    for k in range(ell + 1):
        out[(2 * n - 1 - k) * (2 * n + 1)] += 1
    base = (2 * n - ell) * (2 * n - 1)
    for e in range(base - 2 * ell - 1, base - ell):
        out[e] -= 1
    return out


def staircase_exponents(coeffs: Sequence[int]) -> list[int]:
    """Symmetrized Alexander gradings of the staircase corners, top first.

    The nonzero coefficients of an L-space knot polynomial alternate in sign
    starting with +1 at the top degree.
    """
    nz = [(e, c) for e, c in enumerate(coeffs) if c]
    if not nz:
        raise ValueError("zero polynomial")
    top = nz[-1][0]
    if top % 2:
        raise ValueError("polynomial has odd degree, not symmetric")
    g = top // 2
    out = []
    for k, (e, c) in enumerate(reversed(nz)):
        if c != (1 if k % 2 == 0 else -1):
            raise ValueError("coefficients do not alternate +1, -1; not an L-space knot polynomial")
        out.append(e - g)
    if out != [-x for x in reversed(out)]:
        raise ValueError("polynomial is not symmetric")
    return out


def staircase_from_exponents(levels: Sequence[int],
                             names: Sequence[str] | None = None) -> FilteredComplex:
    """Staircase with corners at Alexander levels levels[0] > levels[1] > ...

    Odd-indexed corners carry the differential: d x_{2k+1} = U^{h} x_{2k} + x_{2k+2},
    where h is the horizontal step length. x_0 sits at Maslov 0.
    """
    if len(levels) % 2 != 1:
        raise ValueError("a staircase has an odd number of corners")
    if any(a <= b for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly decreasing")
    names = list(names) if names is not None else [f"x{k}" for k in range(len(levels))]
    maslov = [0]
    for k in range(1, len(levels)):
        if k % 2:
            maslov.append(maslov[-1] - 2 * (levels[k - 1] - levels[k]) + 1)
        else:
            maslov.append(maslov[-1] - 1)
    gens = [FGen(nm, (0, lv), m) for nm, lv, m in zip(names, levels, maslov)]
    diff = {nm: {} for nm in names}
    for k in range(1, len(levels), 2):
        diff[names[k]] = {names[k - 1]: levels[k - 1] - levels[k], names[k + 1]: 0}
    return FilteredComplex(gens, diff)


def staircase_from_poly(coeffs: Sequence[int]) -> FilteredComplex:
    return staircase_from_exponents(staircase_exponents(coeffs))


def _corner_names(n: int, star: str) -> list[str]:
    out = []
    for i in range(1, 2 * n + 1):
        out.append(f"a{star}{i}")
        if i < 2 * n:
            out.append(f"b{star}{i}")
    return out


def staircase(n: int) -> FilteredComplex:
    """CFK-infinity of T(2n, 2n+1) with generators a*_i, b*_i."""
    _check_n(n)
    levels = []
    for i in range(1, 2 * n + 1):
        levels.append((2 * n - i) * (2 * n - i + 1) // 2 - i * (i - 1) // 2)
        if i < 2 * n:
            levels.append((2 * n - i) * (2 * n - i + 1) // 2 - i * (i + 1) // 2)
    return staircase_from_exponents(levels, _corner_names(n, "*"))


def g_a(n: int, i: int) -> int:
    return -(2 * n - i) * (2 * n - i + 1) // 2 + i * (i - 1) // 2


def g_b(n: int, i: int) -> int:
    return -(2 * n - i) * (2 * n - i + 1) // 2 + i * (i + 1) // 2


def mirror_staircase(n: int) -> FilteredComplex:
    """CFK-infinity of the mirror of T(2n, 2n+1), built from the closed forms.

    d a_1 = U b_1, d a_{2n} = b_{2n-1}, otherwise d a_i = U^i b_i + b_{i-1}.
    """
    _check_n(n)
    gens, diff = [], {}
    for i in range(1, 2 * n + 1):
        gens.append(FGen(f"a{i}", (0, g_a(n, i)), i * (i - 1)))
        row = {}
        if i < 2 * n:
            row[f"b{i}"] = i
        if i > 1:
            row[f"b{i - 1}"] = 0
        diff[f"a{i}"] = row
        if i < 2 * n:
            gens.append(FGen(f"b{i}", (0, g_b(n, i)), i * i + i - 1))
    return FilteredComplex(gens, diff)


def flip_symmetry(n: int) -> dict[str, tuple[str, int]]:
    """The (i, j) -> (j, i) symmetry of mirror_staircase(n) as x -> U^k x'."""
    m = 2 * n
    out = {}
    for i in range(1, m + 1):
        out[f"a{i}"] = (f"a{m + 1 - i}", -g_a(n, i))
        if i < m:
            out[f"b{i}"] = (f"b{m - i}", -g_b(n, i))
    return out


def knot_genus(k: FilteredComplex) -> int:
    if not len(k):
        raise ValueError("knot complex has no generators")
    return max(g.filt[1] - g.filt[0] for g in k.gens.values())


def check_symmetry(k: FilteredComplex, sym: dict[str, tuple[str, int]]) -> list[str]:
    """Check that sym is a chain map swapping the two coordinates."""
    bad = []
    for x, (y, k_) in sym.items():
        gx, gy = k[x], k[y]
        i, j = gy.at(k_)
        if (i, j) != (gx.filt[1], gx.filt[0]):
            bad.append(f"{x} -> U^{k_} {y} lands at {(i, j)}, expected {(gx.filt[1], gx.filt[0])}")
        if gy.maslov - 2 * k_ != gx.maslov:
            bad.append(f"{x} -> U^{k_} {y} changes Maslov")
    for x in k.gens:
        lhs: dict[str, int] = {}
        from .filtered import toggle
        y, c = sym[x]
        for z, e in k.diff[y].items():
            toggle(lhs, z, e + c)
        rhs: dict[str, int] = {}
        for z, e in k.diff[x].items():
            w, c2 = sym[z]
            toggle(rhs, w, e + c2)
        if lhs != rhs:
            bad.append(f"symmetry fails to commute with d at {x}")
    return bad
