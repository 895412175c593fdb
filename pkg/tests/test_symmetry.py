import random
from fractions import Fraction

import pytest

from bellpoly.cglmp import cglmp_inequality, evaluate
from bellpoly.correlators import (
    cglmp_corr_inequality,
    chsh_inequality,
    corr_index,
    project,
    projected_generators,
)
from bellpoly.facets import classify_trivial, enumerate_facets, saturation_count, vrep_of
from bellpoly.scenario import (
    Behavior,
    Inequality,
    Scenario,
    all_generators,
    all_strategies,
    generator,
)
from bellpoly.symmetry import (
    apply_behavior,
    apply_corr,
    apply_inequality,
    behavior_group,
    behavior_symmetry,
    canonical_class,
    correlator_group,
    correlator_symmetry,
    equivalent,
    identity_op,
    label_classes,
)


def test_identity():
    d = 3
    p = generator(Scenario(d), (1, 2, 0, 1))
    op = identity_op("behavior", d)
    assert apply_behavior(op, p) == p


def test_party_swap_is_involution():
    for d in (2, 3):
        op = behavior_symmetry(d, swap_parties=True)
        assert op.compose(op).perm == identity_op("behavior", d).perm


def test_party_swap_on_generators():
    d = 3
    op = behavior_symmetry(d, swap_parties=True)
    for lam in ((0, 1, 2, 0), (1, 1, 0, 2), (2, 0, 1, 1)):
        a1, a2, b1, b2 = lam
        got = apply_behavior(op, generator(Scenario(d), lam))
        want = generator(Scenario(d), (b1, b2, a1, a2))
        assert got == want


def test_relabeling_maps_generators_to_generators():
    d = 3
    sigma = (1, 2, 0)
    op = behavior_symmetry(d, outcome_perms=(sigma, (0, 1, 2), (2, 1, 0), (0, 2, 1)))
    for lam in all_strategies(Scenario(d))[:10]:
        got = apply_behavior(op, generator(Scenario(d), lam))
        want = generator(
            Scenario(d), (sigma[lam.a1], lam.a2, (2, 1, 0)[lam.b1], (0, 2, 1)[lam.b2])
        )
        assert got == want


def test_group_sizes():
    assert len(behavior_group(2)) == 8 * 2**4
    grp3 = correlator_group(3)
    assert len(grp3) == 16 * 27  # shifts act modulo a global offset: 16 d^3
    assert len({op.perm for op in grp3}) == len(grp3)


def test_behavior_group_guard():
    with pytest.raises(ValueError):
        behavior_group(4)


def test_group_action_law():
    rng = random.Random(11)
    d = 2
    grp = behavior_group(d)
    p = Behavior(d, tuple(Fraction(rng.randint(0, 9), 11) for _ in range(16)))
    for _ in range(25):
        g = rng.choice(grp)
        h = rng.choice(grp)
        assert apply_behavior(g.compose(h), p) == apply_behavior(g, apply_behavior(h, p))
    grpc = correlator_group(3)
    c = project(Behavior(3, tuple(Fraction(rng.randint(0, 9), 11) for _ in range(36))))
    for _ in range(25):
        g = rng.choice(grpc)
        h = rng.choice(grpc)
        assert apply_corr(g.compose(h), c) == apply_corr(g, apply_corr(h, c))


def test_group_preserves_generator_sets():
    d = 2
    gens = {g.coords for g in all_generators(Scenario(d))}
    for op in behavior_group(d):
        assert {apply_behavior(op, Behavior(d, c)).coords for c in gens} == gens
    pgens = {g.coords for g in projected_generators(3)}
    rng = random.Random(13)
    grpc = correlator_group(3)
    from bellpoly.correlators import CorrVector

    for _ in range(40):
        op = rng.choice(grpc)
        assert {apply_corr(op, CorrVector(3, c)).coords for c in pgens} == pgens


def test_eval_invariance():
    rng = random.Random(17)
    d = 2
    grp = behavior_group(d)
    q = cglmp_inequality(d)
    for _ in range(30):
        op = rng.choice(grp)
        p = Behavior(d, tuple(Fraction(rng.randint(-5, 9), 11) for _ in range(16)))
        assert evaluate(apply_inequality(op, q), apply_behavior(op, p)) == evaluate(q, p)


def test_inverse():
    rng = random.Random(19)
    grp = correlator_group(2)
    for _ in range(20):
        op = rng.choice(grp)
        assert op.compose(op.inverse()).perm == identity_op("correlator", 2).perm


def test_canonical_class_constant_on_orbit():
    rng = random.Random(23)
    q = cglmp_corr_inequality(3)
    rep = canonical_class(q)
    grp = correlator_group(3)
    for _ in range(20):
        op = rng.choice(grp)
        assert canonical_class(apply_inequality(op, q)) == rep


def test_party_swapped_chsh_same_class():
    q = chsh_inequality()
    swapped = apply_inequality(correlator_symmetry(2, swap_parties=True), q)
    assert canonical_class(swapped) == canonical_class(q)
    assert equivalent(q, swapped)


def test_d2_nontrivial_facets_single_class():
    gens = projected_generators(2)
    hrep = enumerate_facets(vrep_of(gens), space="correlator", d=2)
    nontrivial = [q for q in hrep.facets if not classify_trivial(q)]
    assert len(nontrivial) == 8
    labels, reps = label_classes(nontrivial)
    assert set(labels) == {0}
    assert all(equivalent(q, chsh_inequality()) for q in nontrivial)


def test_equivalences():
    assert equivalent(chsh_inequality(), cglmp_corr_inequality(2))
    q3 = cglmp_corr_inequality(3)
    swapped = apply_inequality(correlator_symmetry(3, swap_a=True), q3)
    assert equivalent(q3, swapped)
    coeffs = [Fraction(0)] * 12
    coeffs[corr_index(3, 1, 1, 1)] = Fraction(-1)
    nonneg = Inequality("correlator", 3, tuple(coeffs), Fraction(0))
    assert not equivalent(q3, nonneg)
    with pytest.raises(ValueError):
        equivalent(q3, chsh_inequality())


def test_trivial_status_is_orbit_invariant():
    rng = random.Random(29)
    grp = correlator_group(2)
    q = chsh_inequality()
    coeffs = [Fraction(0)] * 8
    coeffs[corr_index(2, 2, 1, 0)] = Fraction(-1)
    triv = Inequality("correlator", 2, tuple(coeffs), Fraction(0))
    for _ in range(10):
        op = rng.choice(grp)
        assert classify_trivial(apply_inequality(op, q)) is False
        assert classify_trivial(apply_inequality(op, triv)) is True


def test_facet_images_are_facets():
    rng = random.Random(31)
    gens = projected_generators(2)
    hrep = enumerate_facets(vrep_of(gens), space="correlator", d=2)
    grp = correlator_group(2)
    for q in hrep.facets[:6]:
        op = rng.choice(grp)
        image = apply_inequality(op, q)
        count, rk = saturation_count(image, gens)
        assert rk == hrep.reduced_dim
        assert (count, rk) == saturation_count(q, gens)


def test_local_max_invariant_under_group():
    from bellpoly.membership import local_max

    rng = random.Random(37)
    q = cglmp_inequality(2)
    grp = behavior_group(2)
    for _ in range(10):
        op = rng.choice(grp)
        assert local_max(apply_inequality(op, q)) == local_max(q)
