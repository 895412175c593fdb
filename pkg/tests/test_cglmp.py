from fractions import Fraction

import pytest

from bellpoly import linalg
from bellpoly.cglmp import (
    RSTU,
    SCHEME_EXAMPLE1,
    SCHEME_EXAMPLE2,
    SCHEME_EXAMPLE2_VARIANT,
    cglmp_inequality,
    classify_case,
    constructive_witness,
    eval_on_generator,
    evaluate,
    f_value,
    from_witness_frame,
    rstu,
    saturating_generators,
    scheme_patterns,
    tightness_rank,
    to_witness_frame,
    verify_condition1,
    window_bounds,
    witness_frame_permutation,
    witness_steps,
)
from bellpoly.scenario import Scenario, all_strategies, generator, uniform_behavior


def test_rstu_spec_examples():
    assert tuple(rstu((0, 0, 0, 0), 3)) == (0, 0, -1, 0)
    assert tuple(rstu((1, 0, 0, 0), 3)) == (1, -1, -1, 0)
    assert tuple(rstu((0, 1, 1, 1), 2)) == (-1, -1, -1, 0)


def test_rstu_window_and_congruence_exhaustive():
    for d in range(2, 7):
        lo, hi = window_bounds(d)
        for lam in all_strategies(Scenario(d)):
            v = rstu(lam, d)
            assert all(lo <= x <= hi for x in v)
            assert sum(v) % d == (d - 1) % d
            assert sum(v) in (d - 1, -1, -d - 1)


def test_f_values():
    for d in range(2, 9):
        assert f_value(0, d) == 1
    assert f_value(-1, 2) == -1
    assert f_value(-1, 3) == -1
    assert f_value(1, 3) == 0
    assert f_value(2, 5) == 0


def test_eval_on_generator_examples():
    assert eval_on_generator((0, 0, 0, 0), 3) == 2
    assert eval_on_generator((1, 0, 0, 0), 3) == Fraction(-2, 3 - 1)
    assert max(eval_on_generator(lam, 3) for lam in all_strategies(Scenario(3))) == 2


def test_coefficient_form_agrees_with_f_form():
    for d in (2, 3, 4):
        q = cglmp_inequality(d)
        for lam in all_strategies(Scenario(d)):
            assert evaluate(q, generator(Scenario(d), lam)) == eval_on_generator(lam, d)


def test_cglmp_on_uniform_is_zero():
    for d in range(2, 7):
        assert evaluate(cglmp_inequality(d), uniform_behavior(d)) == 0


def test_cglmp_d2_values():
    q = cglmp_inequality(2)
    values = {evaluate(q, g) for g in (generator(Scenario(2), lam) for lam in all_strategies(Scenario(2)))}
    assert values == {Fraction(2), Fraction(-2)}


def test_evaluate_space_mismatch():
    from bellpoly.correlators import projected_generators

    q = cglmp_inequality(2)
    with pytest.raises(ValueError):
        evaluate(q, projected_generators(2)[0])


def test_verify_condition1_small():
    rep2 = verify_condition1(2)
    assert rep2.max_value == 2
    assert rep2.histogram == {Fraction(2): 8, Fraction(-2): 8}
    rep3 = verify_condition1(3)
    assert rep3.max_value == 2
    assert set(rep3.histogram) == {Fraction(2), Fraction(-1), Fraction(-4)}
    assert rep3.histogram == {Fraction(2): 30, Fraction(-1): 48, Fraction(-4): 3}
    assert sum(rep3.histogram.values()) == 81
    assert rep3.case_histogram == {
        "case1": 18,
        "case2a": 12,
        "case2b": 12,
        "case3": 36,
        "case5": 3,
    }


def test_value_set_property():
    for d in (2, 3, 4, 5):
        rep = verify_condition1(d)
        allowed = {Fraction(2), Fraction(-2, d - 1), Fraction(-2 * (d + 1), d - 1)}
        assert set(rep.histogram) <= allowed
        if d == 2:
            assert Fraction(-2 * (d + 1), d - 1) not in rep.histogram


def test_classify_case_examples():
    c = classify_case(RSTU(0, 0, -1, 0), 3)
    assert (c.tag, c.total, c.value) == ("case2b", -1, Fraction(2))
    c = classify_case(RSTU(1, -1, -1, 0), 3)
    assert (c.tag, c.value) == ("case3", Fraction(-1))
    c = classify_case(RSTU(1, 1, 1, 1), 5)
    assert (c.tag, c.value) == ("case1", Fraction(2))
    with pytest.raises(ValueError):
        classify_case(RSTU(3, 0, 0, 0), 3)  # out of window
    with pytest.raises(ValueError):
        classify_case(RSTU(0, 0, 0, 0), 3)  # sum not congruent to -1


def test_saturating_generators():
    sat2 = saturating_generators(2)
    assert len(sat2) == 8
    sat3 = saturating_generators(3)
    assert len(sat3) == 30
    q3 = cglmp_inequality(3)
    for lam in sat3:
        assert evaluate(q3, generator(Scenario(3), lam)) == 2
        assert classify_case(rstu(lam, 3), 3).tag in ("case1", "case2b")


def test_tightness_rank():
    assert tightness_rank(2).rank == 8
    assert tightness_rank(3).rank == 24
    rep7 = tightness_rank(7)
    assert rep7.rank == 168 == rep7.h
    assert rep7.tight


def test_witness_steps_d4_match_table():
    steps = witness_steps(4)
    assert steps == [
        (SCHEME_EXAMPLE1, (0, 1, 1, 1)),
        (SCHEME_EXAMPLE1, (-1, 0, 0, 0)),
        (SCHEME_EXAMPLE1, (-2, 1, 0, 0)),
    ]


def test_witness_steps_d5_schemes():
    steps = witness_steps(5)
    assert [s for s, _ in steps] == [
        SCHEME_EXAMPLE2,
        SCHEME_EXAMPLE2_VARIANT,
        SCHEME_EXAMPLE1,
        SCHEME_EXAMPLE1,
    ]
    assert steps[0][1] == (2, 0, 0)
    assert steps[2][1] == (-1, 0, 0, 0)
    assert steps[3][1] == (-2, 1, 0, 0)


def test_witness_steps_d3():
    assert witness_steps(3) == [
        (SCHEME_EXAMPLE2, (1, 0, 0)),
        (SCHEME_EXAMPLE1, (-1, 0, 0, 0)),
    ]


def test_scheme_patterns_shapes():
    rows = scheme_patterns(SCHEME_EXAMPLE1, (9, 7, 5, 3))
    assert rows == [(9, 7, 5, 3), (3, 9, 7, 5), (5, 3, 9, 7), (7, 5, 3, 9)]
    rows = scheme_patterns(SCHEME_EXAMPLE2, (9, 7, 5))
    assert rows == [(9, 9, 7, 5), (9, 7, 9, 5), (9, 7, 5, 9), (7, 9, 9, 5)]
    rows = scheme_patterns(SCHEME_EXAMPLE2_VARIANT, (9, 7, 5))
    assert rows == [(7, 5, 9, 9), (9, 5, 9, 7), (5, 9, 9, 7), (9, 5, 7, 9)]


def test_constructive_witness_small_d():
    for d in range(2, 9):
        batches = constructive_witness(d)
        assert len(batches) == d - 1
        for j, batch in enumerate(batches):
            assert len(batch.vectors) == 4 * d
            assert batch.rank_after == 4 * d * (j + 1)
        assert batches[-1].rank_after == 4 * d * (d - 1)


def test_witness_d3_shape():
    batches = constructive_witness(3)
    assert len(batches) == 2
    assert all(len(b.vectors) == 12 for b in batches)
    assert batches[0].scheme == SCHEME_EXAMPLE2
    assert batches[-1].rank_after == 24


def test_witness_vectors_are_permuted_saturating_generators():
    for d in (2, 3, 5):
        q = cglmp_inequality(d)
        for batch in constructive_witness(d):
            for lam, vec in zip(batch.strategies, batch.vectors):
                assert evaluate(q, generator(Scenario(d), lam)) == 2
                back = from_witness_frame(vec, d)
                assert tuple(back) == tuple(int(x) for x in generator(Scenario(d), lam).coords)


def test_witness_frame_is_permutation():
    import random

    rng = random.Random(61)
    for d in (2, 3, 4, 5):
        perm = witness_frame_permutation(d)
        assert sorted(perm) == list(range(4 * d * d))
        coords = tuple(range(4 * d * d))
        assert from_witness_frame(to_witness_frame(coords, d), d) == coords
        # orthogonality: pairwise inner products survive the relabeling
        u = [rng.randint(-3, 3) for _ in range(4 * d * d)]
        v = [rng.randint(-3, 3) for _ in range(4 * d * d)]
        pu, pv = to_witness_frame(u, d), to_witness_frame(v, d)
        assert sum(a * b for a, b in zip(u, v)) == sum(a * b for a, b in zip(pu, pv))


def test_witness_rank_agrees_with_tightness_rank():
    for d in (2, 3, 4, 5):
        assert constructive_witness(d)[-1].rank_after == tightness_rank(d).rank


@pytest.mark.slow
def test_witness_at_scale_covers_all_branches_again():
    # a second pass over the four d mod 4 branches, an order of magnitude up
    for d in (14, 15, 16, 17):
        batches = constructive_witness(d)
        assert len(batches) == d - 1
        assert batches[-1].rank_after == 4 * d * (d - 1)


def test_example2_minor_is_the_documented_one():
    from bellpoly.cglmp import _example2_minor

    minor = _example2_minor(SCHEME_EXAMPLE2, (1, 0, 0), 3)
    assert minor == [[1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 0, 0]]
    assert linalg.int_rank(minor) == 4
    for d in (5, 9, 13):
        for scheme, params in witness_steps(d):
            if scheme in (SCHEME_EXAMPLE2, SCHEME_EXAMPLE2_VARIANT):
                assert linalg.int_rank(_example2_minor(scheme, params, d)) == 4
