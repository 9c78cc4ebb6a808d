import pytest

from knotcone.cone import (build_cone, check_psi, check_psi_intertwines, collapse_to_surgery,
                           cone_id, f_shift, split_id, symmetry_psi, tower_ranges,
                           truncation_witness)
from knotcone.algebra import localized_rank
from knotcone.filtered import FGen, FilteredComplex
from knotcone.staircase import genus, mirror_staircase


def cone(n, p=None):
    return build_cone(mirror_staircase(n), 2 * n - 1 if p is None else p)


def test_n3_p5_tower_ranges():
    c = cone(3, 5)
    assert c.a_range == (-14, 19)
    assert c.b_range == (-13, 19)


@pytest.mark.parametrize("n", range(1, 7))
def test_generator_count(n):
    g, p = genus(n), 2 * n - 1
    a = (g + p - 1) - (-g + 1) + 1
    b = a - 1
    assert len(cone(n).complex) == (a + b) * (4 * n - 1)


@pytest.mark.parametrize("n", range(1, 4))
def test_cone_validates(n):
    assert cone(n).complex.validate() == []


def test_known_sizes():
    sizes = [len(cone(n).complex) for n in range(1, 7)]
    assert sizes == [9, 189, 737, 1845, 3705, 6509]


def test_unknot_cone_is_the_unknot():
    u = FilteredComplex([FGen("x", (0, 0), 0)], {})
    c = build_cone(u, 1, {"x": ("x", 0)})
    assert c.a_range == (0, 0) and c.b_range == (1, 0)
    assert list(c.b_towers()) == []
    assert len(c.complex) == 1 and list(c.complex.terms()) == []


def test_tower_range_for_genus_zero():
    assert tower_ranges(0, 1) == ((0, 0), (1, 0))
    assert tower_ranges(3, 5) == ((-2, 7), (-1, 7))


def test_filtration_formulas_on_a_generator():
    c = cone(3, 5)
    k = mirror_staircase(3)
    for s in (-14, 0, 7, 19):
        for x in k.gens.values():
            i, j = x.filt
            a = c.complex[cone_id("A", s, x.id)]
            shift = 5 * s - 10
            assert a.filt == (max(i, j - s), max(i - 5, j - s) + shift)
            assert a.maslov == x.maslov + s * (s - 1)
            if s >= -13:
                b = c.complex[cone_id("B", s, x.id)]
                assert b.filt == (i, i - 5 + shift)
                assert b.maslov == x.maslov + s * (s - 1) - 1


def test_b_tower_j_grows_by_p_per_tower():
    # J of B_s a1 is i - p + ps - p(p-1)/2 with i = 0, so consecutive towers differ by p
    n, p = 3, 5
    c = cone(n, p)
    for s in c.b_towers():
        assert c.complex[cone_id("B", s, "a1")].filt == (0, -p + p * s - p * (p - 1) // 2)
        if s > c.b_range[0]:
            assert (c.complex[cone_id("B", s, "a1")].filt[1]
                    - c.complex[cone_id("B", s - 1, "a1")].filt[1]) == p


def test_f_shift_recursion():
    for n in range(1, 6):
        for s in range(-5, 5):
            assert f_shift(n, s - 1) + n == f_shift(n, s)


def test_split_id_round_trip():
    assert split_id(cone_id("B", -3, "b2")) == ("B", -3, "b2")


@pytest.mark.parametrize("n", range(1, 5))
def test_psi_is_a_filtration_swapping_chain_involution(n):
    c = cone(n)
    assert check_psi(c) == []
    assert check_psi_intertwines(c) == []


def test_psi_weights():
    c = cone(3, 5)
    psi = symmetry_psi(c)
    # B_3 is fixed for p = 5 and carries no weight
    assert psi[cone_id("B", 3, "a1")] == (cone_id("B", 3, "a1"), 0)
    # A_1 -> A_4 carries U^6 times the flip's own power
    y, k = psi[cone_id("A", 1, "a1")]
    base_y, base_k = c.sym["a1"]
    assert y == cone_id("A", 4, base_y) and k == 6 + base_k


@pytest.mark.parametrize("n", [1, 2, 3])
def test_truncation_witness(n):
    recs = truncation_witness(cone(n))
    assert recs and all(r["filtered_iso"] for r in recs)
    assert {r["map"] for r in recs} == {"v", "h"}


def test_truncation_witness_of_unknot_is_empty():
    u = FilteredComplex([FGen("x", (0, 0), 0)], {})
    assert truncation_witness(build_cone(u, 1, {"x": ("x", 0)})) == []


@pytest.mark.parametrize("n", [1, 2])
def test_collapse_is_a_homology_sphere(n):
    m = collapse_to_surgery(cone(n))
    assert m.axes == ("I",)
    assert m.localized_rank() == 1


@pytest.mark.parametrize("p", [0, -1, 1.5])
def test_bad_p_rejected(p):
    with pytest.raises(ValueError):
        build_cone(mirror_staircase(1), p)


def test_knot_not_on_axis_rejected():
    k = FilteredComplex([FGen("x", (1, 1), 0)], {})
    with pytest.raises(ValueError):
        build_cone(k, 1, {"x": ("x", 0)})
