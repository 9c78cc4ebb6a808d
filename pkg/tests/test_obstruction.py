import json

import pytest

from knotcone.algebra import ComplexUV
from knotcone.invariants import alpha, bgen, dual_class
from knotcone.obstruction import (boundary_relation_check, check_grading_gaps, classify_cycles,
                                  composite_argument, cycle_basis, divisibility_gate,
                                  divisibility_table, genus_bound, grading_identities,
                                  pipeline_dual)


def perturbed(c: ComplexUV, gid: str, du: int, dv: int) -> ComplexUV:
    """Move one generator's bigrading; edge exponents are left alone."""
    gens = [(g.id, g.gr_u + (du if g.id == gid else 0), g.gr_v + (dv if g.id == gid else 0))
            for g in c.generators]
    return ComplexUV.from_edges(gens, c.edges())


def without_edges_from(c: ComplexUV, gid: str) -> ComplexUV:
    gens = [(g.id, g.gr_u, g.gr_v) for g in c.generators]
    return ComplexUV.from_edges(gens, [e for e in c.edges() if e[0] != gid])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_certificate_gives_n_minus_one(n):
    cert = genus_bound(n)
    assert cert.passed, [c.name for c in cert.checks if not c.passed]
    assert cert.bound == n - 1
    assert len(cert.checks) == 9
    json.loads(cert.dumps())


def test_n2_certificate_rests_on_phi():
    cert = genus_bound(2)
    assert cert.passed and cert.bound == 1
    assert cert.checks[0].witness["off_axis"] == {"3,1": -1, "3,2": -1}


@pytest.mark.parametrize("n", [1, 0, -2])
def test_no_claim_for_small_n(n):
    with pytest.raises(ValueError):
        genus_bound(n)


def test_pipeline_dual_is_the_fixture():
    assert pipeline_dual(3) == dual_class(3)


def test_certificate_on_supplied_fixture_skips_recomputation():
    cert = genus_bound(4, dual_class(4))
    assert cert.passed and cert.bound == 3
    assert "pipeline_matches_fixture" not in {c.name for c in cert.checks}


@pytest.mark.parametrize("n", range(3, 7))
def test_grading_identities(n):
    assert grading_identities(dual_class(n), n) == []
    assert check_grading_gaps(dual_class(n), n).passed


def test_corrupted_grading_is_caught():
    c = perturbed(dual_class(4), alpha(3) + "*", 0, 2)
    assert grading_identities(c, 4)
    assert not check_grading_gaps(c, 4).passed
    assert not genus_bound(4, c).passed
    assert genus_bound(4, c).bound is None


def test_corrupted_exponent_breaks_boundary_relation():
    n = 4
    c = without_edges_from(dual_class(n), bgen(n, n - 1) + "*")
    assert not boundary_relation_check(c, n).passed
    assert boundary_relation_check(dual_class(n), n).passed


def test_divisibility_gate_n3():
    c = dual_class(3)
    assert divisibility_gate(c, 3, (2, 0))
    assert not divisibility_gate(c, 3, (1, 0))
    assert not divisibility_gate(c, 3, (0, 0))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_divisibility_table(n):
    chk = divisibility_table(dual_class(n), n)
    assert chk.passed
    assert [r["boundary"] for r in chk.witness["table"]] == [a >= n - 1 for a in range(n + 2)]


def test_window_at_origin_sees_only_alpha_n():
    chk = classify_cycles(dual_class(3), 3, (0, 0))
    assert chk.passed
    assert chk.witness["multiples_of_alpha_n"] == [[[0, 0]]]


def test_wide_window_finds_foreign_cycles():
    n = 3
    chk = classify_cycles(dual_class(n), n, (-4 * n * n, -4 * n * n))
    assert not chk.passed and chk.witness["failures"]


def test_cycle_basis_of_alpha_n_bigrading():
    c = dual_class(3)
    top = c[alpha(3) + "*"]
    basis = cycle_basis(c, top.gr_u, top.gr_v)
    assert frozenset({(alpha(3) + "*", 0, 0)}) in basis


@pytest.mark.parametrize("n", [3, 4])
def test_composite_cases(n):
    chk = composite_argument(dual_class(n), n)
    assert chk.passed
    assert [row["g"] for row in chk.witness["cases"]] == list(range(n - 1))


def test_unlabelled_complex_rejected():
    c = ComplexUV.from_edges([("x", 0, 0)], [])
    with pytest.raises(ValueError):
        classify_cycles(c, 3)
    with pytest.raises(ValueError):
        check_grading_gaps(c, 2)
