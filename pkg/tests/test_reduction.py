import pytest

from knotcone.algebra import isomorphic, verify_local_map
from knotcone.cone import build_cone, cone_id
from knotcone.filtered import FGen, FilteredComplex
from knotcone.invariants import local_class_Cn
from knotcone.reduction import (BasisChangeLog, Cancel, ChangeBasis, Discard, Truncator,
                                check_delta_table, delta_IJ, full_level, expected_drops,
                                pipeline, quotient_chain, reduce_filtered, replay,
                                scripted_reduction, step_from_json, to_local_fuv,
                                truncate_local, truncate_to)
from knotcone.staircase import mirror_staircase


def snapshot(cx: FilteredComplex):
    return ({g.id: (g.filt, g.maslov) for g in cx.gens.values()},
            {x: dict(r) for x, r in cx.diff.items()})


def cone(n):
    return build_cone(mirror_staircase(n), 2 * n - 1)


def labelled(n):
    r = pipeline(n)
    return r.truncated.complex(), {v: k for k, v in r.labels.items()}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_scripted_and_greedy_reductions_are_reduced(n):
    c = cone(n)
    for red in (scripted_reduction(c), reduce_filtered(c)):
        assert red.complex.is_reduced()
        assert red.complex.validate() == []
        assert red.complex.localized_rank() == 1


def test_greedy_and_scripted_agree_on_size():
    c = cone(3)
    assert len(reduce_filtered(c).complex) == len(scripted_reduction(c).complex) == 101


@pytest.mark.parametrize("n", [2, 3])
def test_reduction_log_replays(n):
    c = cone(n)
    red = scripted_reduction(c)
    again = replay(c.complex, BasisChangeLog.loads(red.log.dumps()))
    assert snapshot(again) == snapshot(red.complex)


@pytest.mark.parametrize("n", [2, 3])
def test_truncation_log_replays_with_discards(n):
    c = cone(n)
    red = scripted_reduction(c)
    tr = truncate_to(red, c, n)
    kinds = {type(s) for s in tr.log.steps}
    assert Discard in kinds and ChangeBasis in kinds
    again = replay(red.complex, BasisChangeLog.loads(tr.log.dumps()))
    assert snapshot(again) == snapshot(tr.complex())


def test_replay_rejects_foreign_steps():
    c = cone(2).complex
    with pytest.raises(ValueError):
        replay(c, BasisChangeLog([Cancel(cone_id("A", 0, "a1"), cone_id("A", 0, "b3"), 0)]))
    with pytest.raises(ValueError):
        replay(c, BasisChangeLog([Discard((cone_id("A", 0, "a1"),))]))


def test_step_json_round_trip_and_unknown_kind():
    for st in (Cancel("x", "y", 2), ChangeBasis("x", (("y", 1), ("z", 0))), Discard(("x", "y"))):
        assert step_from_json(st.to_json()) == st
    with pytest.raises(ValueError):
        step_from_json({"step": "rotate"})


def test_quotient_chain_empty_is_identity():
    c = cone(2).complex
    assert snapshot(quotient_chain(c, []).complex) == snapshot(c)


def test_b_tower_cleanup_leaves_a_single_generator():
    n, s = 3, 2
    c = cone(n)
    pairs = [(cone_id("B", s, f"a{i}"), cone_id("B", s, f"b{i - 1}")) for i in range(2, 2 * n + 1)]
    out = quotient_chain(c.complex, pairs).complex
    left = [g for g in out.gens if g.startswith(f"B{s}:")]
    assert left == [cone_id("B", s, "a1")]


def test_a2n_cleanup_within_range():
    n = 3
    c = cone(n)
    s = 0
    x = cone_id("A", s, f"a{2 * n}")
    y = cone_id("B", s + 1, "a1")
    assert not any(c.complex.drop(x, y))
    out = quotient_chain(c.complex, [(x, y)]).complex
    assert x not in out.gens and y not in out.gens


def test_quotient_chain_rejects_non_terms_and_filtration_drops():
    c = cone(2).complex
    with pytest.raises(ValueError):
        quotient_chain(c, [(cone_id("A", 0, "a1"), cone_id("A", 0, "b3"))])
    dropping = next((x, y) for x, y, _ in c.terms() if any(c.drop(x, y)))
    with pytest.raises(ValueError):
        quotient_chain(c, [dropping])


def test_delta_examples_n3():
    cx, b = labelled(3)
    assert delta_IJ(cx, b["alpha1"], b["b2^(1)"]) == (3, 3)
    assert delta_IJ(cx, b["alphat1"], b["b2^(1)"]) == (0, 1)
    assert delta_IJ(cx, b["alphat1"], b["b3^(1)"]) == (3, 0)


def test_delta_example_n2():
    cx, b = labelled(2)
    assert delta_IJ(cx, b["alpha2"], b["b2^(1)"]) == (2, 3)


def test_delta_rejects_unrelated_pair():
    cx, b = labelled(3)
    with pytest.raises(ValueError):
        delta_IJ(cx, b["alpha1"], b["alpha5"])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_delta_tables(n):
    cx, b = labelled(n)
    labels = {v: k for k, v in b.items()}
    assert all(not bad for bad in check_delta_table(cx, labels, n).values())


def test_delta_table_families():
    assert sorted(expected_drops(4)) == [f"D{k}" for k in range(1, 9)]
    assert len(expected_drops(2)["n=2"]) == 4
    with pytest.raises(ValueError):
        expected_drops(1)


def test_corrupted_complex_fails_the_table():
    cx, b = labelled(3)
    gens = [FGen(g.id, (g.filt[0], g.filt[1] + (1 if g.id == b["alpha1"] else 0)), g.maslov)
            for g in cx.gens.values()]
    bent = FilteredComplex(gens, cx.diff, cx.axes)
    labels = {v: k for k, v in b.items()}
    assert check_delta_table(bent, labels, 3)["D1"]


def test_to_local_fuv_rejects_unreduced_input():
    with pytest.raises(ValueError):
        to_local_fuv(cone(2).complex)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pipeline_matches_local_class(n):
    assert pipeline(n).local == local_class_Cn(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_local_representative_size(n):
    assert len(pipeline(n).truncated.complex()) == 8 * n - 11


@pytest.mark.parametrize("n", [3, 4])
def test_generic_end_stripping_agrees_with_recipes(n):
    c = cone(n)
    tr = truncate_to(scripted_reduction(c), c, n, use_recipes=False)
    assert isomorphic(to_local_fuv(tr), local_class_Cn(n)) is not None


def test_truncate_local_range():
    n = 3
    c = cone(n)
    tr = Truncator(scripted_reduction(c), n, c.genus, c.p)
    for bad in (2 * n - 1, full_level(c) + 1):
        with pytest.raises(ValueError):
            truncate_local(tr, bad)


def test_top_level_truncation_keeps_homology():
    n = 3
    c = cone(n)
    red = scripted_reduction(c)
    tr = truncate_local(Truncator(red, n, c.genus, c.p), full_level(c))
    assert len(tr.complex()) < len(red.complex)
    assert tr.complex().localized_rank() == 1


def test_truncate_to_target_range():
    c = cone(2)
    with pytest.raises(ValueError):
        truncate_to(scripted_reduction(c), c, 2, target=1)


@pytest.mark.parametrize("n", [2, 3])
def test_comparison_maps_are_local(n):
    r = pipeline(n)
    maps = r.truncated.maps()
    small = to_local_fuv(r.truncated)
    big = r.reduced.complex.to_uv()
    for f, src, dst in ((maps.inclusion, small, big), (maps.projection, big, small)):
        rep = verify_local_map(f, src, dst)
        assert rep.is_chain_map and rep.is_local and rep.bigrading == (0, 0), rep.failures[:3]


def test_unfiltered_basis_change_is_refused():
    cx = FilteredComplex([FGen("x", (0, 0), 0), FGen("y", (1, 0), 0)], {})
    tr = Truncator(cx, 3, 0, 1)
    with pytest.raises(AssertionError):
        tr.change("x", [("y", 0)])
    tr.change("y", [("x", 0)])


def test_discarding_a_non_summand_is_refused():
    cx = FilteredComplex([FGen("x", (0, 0), 0), FGen("y", (0, 0), -1)], {"x": {"y": 0}})
    tr = Truncator(cx, 3, 0, 1)
    with pytest.raises(AssertionError):
        tr.discard(["x"])
    tr.discard(["x", "y"])
    assert len(tr.complex()) == 0
