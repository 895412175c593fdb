from fractions import Fraction

import pytest

from bellpoly.cglmp import cglmp_inequality, evaluate
from bellpoly.correlators import (
    CorrVector,
    cglmp_corr_inequality,
    chsh_inequality,
    corr_index,
    lift,
    project,
    projected_generators,
)
from bellpoly.lp import lp_max
from bellpoly.membership import (
    corr_local_decompose,
    local_decompose,
    local_max,
    nosignaling_max,
)
from bellpoly.scenario import (
    Behavior,
    Inequality,
    Scenario,
    all_strategies,
    constraint_matrix,
    coord_index,
    generator,
    uniform_behavior,
)
from bellpoly.symmetry import equivalent


def pr_box(flip_block=(2, 1)):
    """Uniform-marginal box with deterministic outcome differences; the
    difference is 1 on one block and 0 elsewhere."""
    coords = [Fraction(0)] * 16
    for a, b in ((1, 1), (1, 2), (2, 1), (2, 2)):
        n = 1 if (a, b) == flip_block else 0
        for j in range(2):
            coords[coord_index(2, a, b, (n + j) % 2, j)] = Fraction(1, 2)
    return Behavior(2, tuple(coords))


def _verify_decomposition(res, p):
    assert res.local
    total = Fraction(0)
    recon = [Fraction(0)] * len(p.coords)
    for lam, w in res.weights.items():
        assert w > 0
        total += w
        g = generator(Scenario(p.d), lam)
        for i, x in enumerate(g.coords):
            if x:
                recon[i] += w
    assert total == 1
    assert tuple(recon) == p.coords


def test_uniform_is_local():
    for d in (2, 3):
        u = uniform_behavior(d)
        res = local_decompose(u)
        _verify_decomposition(res, u)


def test_generators_are_local_d2():
    for lam in all_strategies(Scenario(2)):
        g = generator(Scenario(2), lam)
        res = local_decompose(g)
        _verify_decomposition(res, g)


def test_pr_box_is_nonlocal_with_chsh_certificate():
    box = pr_box()
    # the independent check: the CGLMP form itself reaches 4 on this box
    assert evaluate(cglmp_inequality(2), box) == 4
    res = local_decompose(box)
    assert not res.local
    cert = res.certificate
    assert res.violation > 0
    # certificate soundness, re-verified from scratch
    for lam in all_strategies(Scenario(2)):
        assert evaluate(cert, generator(Scenario(2), lam)) <= cert.bound
    assert evaluate(cert, box) == cert.bound + res.violation > cert.bound
    assert equivalent(cert, cglmp_inequality(2))
    assert equivalent(cert, lift(chsh_inequality()))
    assert res.certificate_class == "cglmp"


def test_membership_preconditions():
    bad = list(uniform_behavior(2).coords)
    bad[0] += Fraction(1, 7)
    with pytest.raises(ValueError):
        local_decompose(Behavior(2, tuple(bad)))
    neg = list(uniform_behavior(2).coords)
    neg[0] -= Fraction(1, 2)
    neg[1] += Fraction(1, 2)
    with pytest.raises(ValueError):
        local_decompose(Behavior(2, tuple(neg)))


def test_corr_membership_local_cases():
    for d in (2, 3):
        u = project(uniform_behavior(d))
        res = corr_local_decompose(u)
        assert res.local
        gens = projected_generators(d)
        cols = [g.coords for g in gens]
        recon = [Fraction(0)] * (4 * d)
        total = Fraction(0)
        lookup = {
            tuple(
                next(n for n in range(d) if g.coords[corr_index(d, a, b, n)] == 1)
                for a, b in ((1, 1), (1, 2), (2, 1), (2, 2))
            ): g
            for g in gens
        }
        for label, w in res.weights.items():
            total += w
            g = lookup[label]
            for i, x in enumerate(g.coords):
                if x:
                    recon[i] += w
        assert total == 1
        assert tuple(recon) == u.coords


def test_projection_of_local_stays_local():
    box = pr_box()
    mixed = Behavior(
        2, tuple((x + u) / 2 for x, u in zip(generator(Scenario(2), (0, 1, 1, 0)).coords, uniform_behavior(2).coords))
    )
    assert local_decompose(mixed).local
    assert corr_local_decompose(project(mixed)).local


def test_corr_maximizer_d3_is_nonlocal_with_cglmp_certificate():
    # get a no-signaling behavior maximizing the CGLMP form, then project
    q = lift(cglmp_corr_inequality(3))
    rows, rhs = constraint_matrix(Scenario(3))
    res = lp_max(q.coeffs, eq_rows=rows, eq_rhs=rhs, nonneg=True)
    assert res.status == "optimal"
    assert res.optimum == 4  # all four difference terms at their best weight
    maximizer = Behavior(3, res.primal)
    c = project(maximizer)
    verdict = corr_local_decompose(c)
    assert not verdict.local
    assert verdict.certificate_class == "cglmp"
    assert equivalent(verdict.certificate, cglmp_corr_inequality(3))
    for g in projected_generators(3):
        assert evaluate(verdict.certificate, g) <= verdict.certificate.bound
    value = sum(a * b for a, b in zip(verdict.certificate.coeffs, c.coords))
    assert value - verdict.certificate.bound == verdict.violation > 0


def test_local_max_values():
    for d in range(2, 8):
        assert local_max(cglmp_inequality(d)) == 2
    assert local_max(chsh_inequality()) == 2
    assert local_max(cglmp_corr_inequality(3)) == 2


def test_nosignaling_max_values():
    assert nosignaling_max(cglmp_inequality(2)) == 4
    assert nosignaling_max(chsh_inequality()) == 4
    assert nosignaling_max(cglmp_corr_inequality(3)) == 4


def test_zero_inequality():
    z = Inequality("behavior", 2, tuple([Fraction(0)] * 16), Fraction(0))
    assert local_max(z) == 0
    assert nosignaling_max(z) == 0


def test_corr_membership_precondition():
    bad = CorrVector(2, tuple([Fraction(1, 3)] * 8))
    with pytest.raises(ValueError):
        corr_local_decompose(bad)


def test_every_nosignaling_vertex_classified_correctly():
    # the d=2 no-signaling polytope has 16 local vertices and 8 boxes that
    # violate one CHSH variant each; membership must sort them perfectly
    from oracles import nosignaling_vertices

    verts = nosignaling_vertices(2)
    assert len(verts) == 24
    local = nonlocal_ = 0
    for v in verts:
        res = local_decompose(Behavior(2, tuple(v)))
        if res.local:
            local += 1
            assert all(x in (0, 1) for x in v)  # deterministic strategies
        else:
            nonlocal_ += 1
            assert res.certificate_class == "cglmp"
            assert equivalent(res.certificate, lift(chsh_inequality()))
    assert (local, nonlocal_) == (16, 8)
