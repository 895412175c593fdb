"""Is a behavior local-realistic?  Exact decision with certificates.

Feasibility of the convex decomposition over deterministic strategies is
an exact LP.  A feasible point comes back as explicit weights that
reconstruct the queried vector coordinate by coordinate.  An infeasible
one (the LP's Farkas certificate proves that much) is turned into a
separating Bell inequality by an interior-ray argument: shoot the segment
from the uniform point (relative interior of the local polytope) towards
the query, maximize how far along it the polytope reaches, and read the
supporting hyperplane of the exit face off the exact dual.  The resulting
functional is valid on every generator by construction, is normalized so
its bound equals its exact maximum over the generators, and strictly cuts
off the query.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .cglmp import cglmp_inequality
from .correlators import (
    CorrVector,
    cglmp_corr_inequality,
    corr_index,
    is_corr_probability,
    lift,
    projected_generators,
)
from .facets import canonicalize, standard_equations
from .lp import lp_max
from .scenario import (
    Behavior,
    Inequality,
    Scenario,
    all_strategies,
    constraint_matrix,
    coord_index,
    generator,
    is_normalized,
    is_nosignaling,
    uniform_behavior,
)


@dataclass(frozen=True)
class MembershipResult:
    """Verdict plus the exact object backing it (weights or certificate)."""

    local: bool
    weights: dict | None = None
    certificate: Inequality | None = None
    violation: Fraction | None = None  # eval(certificate, query) - bound
    certificate_class: str | None = None


def _strategy_values(ineq: Inequality):
    """Exact value of a behavior inequality on every generator (sparse)."""
    d = ineq.d
    cs = ineq.coeffs
    for lam in all_strategies(Scenario(d)):
        yield lam, (
            cs[coord_index(d, 1, 1, lam.a1, lam.b1)]
            + cs[coord_index(d, 1, 2, lam.a1, lam.b2)]
            + cs[coord_index(d, 2, 1, lam.a2, lam.b1)]
            + cs[coord_index(d, 2, 2, lam.a2, lam.b2)]
        )


def _corr_generator_values(ineq: Inequality):
    d = ineq.d
    cs = ineq.coeffs
    for gen in projected_generators(d):
        val = sum(c * x for c, x in zip(cs, gen.coords) if c)
        yield gen, val


def local_max(ineq: Inequality) -> Fraction:
    """Exact maximum over the (projected) generators."""
    if ineq.space == "behavior":
        return max(v for _, v in _strategy_values(ineq))
    if ineq.space == "correlator":
        return max(v for _, v in _corr_generator_values(ineq))
    raise ValueError(f"no generators for space {ineq.space!r}")


def nosignaling_max(ineq: Inequality) -> Fraction:
    """Exact LP maximum over the no-signaling polytope (lift first)."""
    if ineq.space == "correlator":
        ineq = lift(ineq)
    rows, rhs = constraint_matrix(Scenario(ineq.d))
    res = lp_max(ineq.coeffs, eq_rows=rows, eq_rhs=rhs, nonneg=True)
    if res.status != "optimal":
        raise AssertionError(f"no-signaling LP came back {res.status}")
    return res.optimum


def _decompose(query, columns, labels, uniform, space: str, d: int) -> MembershipResult:
    """Shared core: columns are the generator vectors, labels their names."""
    ncoords = len(query)
    eq_rows = [[col[i] for col in columns] for i in range(ncoords)]
    eq_rows.append([Fraction(1)] * len(columns))
    eq_rhs = list(query) + [Fraction(1)]
    feas = lp_max([Fraction(0)] * len(columns), eq_rows=eq_rows, eq_rhs=eq_rhs, nonneg=True)
    if feas.status == "optimal":
        weights = {}
        recon = [Fraction(0)] * ncoords
        total = Fraction(0)
        for lab, col, w in zip(labels, columns, feas.primal):
            if w < 0:
                raise AssertionError("negative weight from the feasibility LP")
            if w:
                weights[lab] = w
                total += w
                for i, x in enumerate(col):
                    if x:
                        recon[i] += w * x
        if total != 1 or recon != list(query):
            raise AssertionError("decomposition does not reconstruct the query exactly")
        return MembershipResult(local=True, weights=weights)
    if feas.status != "infeasible":
        raise AssertionError(f"feasibility LP came back {feas.status}")

    # interior ray: max t with  sum_w w G = u + t (p - u),  sum w = 1, w >= 0
    delta = [q - u for q, u in zip(query, uniform)]
    ray_rows = []
    for i in range(ncoords):
        ray_rows.append([col[i] for col in columns] + [-delta[i]])
    ray_rows.append([Fraction(1)] * len(columns) + [Fraction(0)])
    ray_obj = [Fraction(0)] * len(columns) + [Fraction(1)]
    res = lp_max(
        ray_obj,
        eq_rows=ray_rows,
        eq_rhs=list(uniform) + [Fraction(1)],
        nonneg=range(len(columns)),
    )
    if res.status != "optimal":
        raise AssertionError(f"interior-ray LP came back {res.status}")
    t_star = res.optimum
    if t_star >= 1:
        raise AssertionError("interior ray exits beyond the query on an infeasible instance")
    y = res.dual
    coeffs = tuple(-y[i] for i in range(ncoords))
    raw = Inequality(space, d, coeffs, y[ncoords])
    bound = local_max(raw)
    cert = canonicalize(
        Inequality(space, d, coeffs, bound), equations=standard_equations(space, d)
    )
    value = sum(c * x for c, x in zip(cert.coeffs, query) if c)
    violation = value - cert.bound
    if violation <= 0:
        raise AssertionError("separating certificate fails to cut off the query")
    if local_max(cert) != cert.bound:
        raise AssertionError("certificate bound is not the exact local maximum")
    return MembershipResult(
        local=False,
        certificate=cert,
        violation=violation,
        certificate_class=_catalog_label(cert),
    )


def _catalog_label(cert: Inequality) -> str:
    """Match a certificate against the known classes where feasible."""
    from .symmetry import equivalent  # deferred: symmetry imports facets

    d = cert.d
    if cert.space == "behavior" and d >= 4:
        return "unclassified"
    try:
        reference = cglmp_inequality(d) if cert.space == "behavior" else cglmp_corr_inequality(d)
        if equivalent(cert, reference):
            return "cglmp"
        if cert.space == "behavior":
            nonneg = [Fraction(0)] * (4 * d * d)
            nonneg[coord_index(d, 1, 1, 0, 0)] = Fraction(-1)
            trivial_rep = Inequality("behavior", d, tuple(nonneg), Fraction(0))
        else:
            nonneg = [Fraction(0)] * (4 * d)
            nonneg[corr_index(d, 1, 1, 0)] = Fraction(-1)
            trivial_rep = Inequality("correlator", d, tuple(nonneg), Fraction(0))
        if equivalent(cert, trivial_rep):
            return "nonnegativity"
    except ValueError:
        return "unclassified"
    return "uncataloged"


def local_decompose(p: Behavior) -> MembershipResult:
    """Exact convex decomposition over the d^4 strategies, or a separating
    Bell inequality the behavior strictly violates."""
    if any(x < 0 for x in p.coords):
        raise ValueError("behavior has negative entries; not a probability table")
    if not is_normalized(p):
        raise ValueError("behavior is not normalized")
    if not is_nosignaling(p):
        raise ValueError("behavior is signaling; locality is not defined for it")
    d = p.d
    labels = all_strategies(Scenario(d))
    columns = [generator(Scenario(d), lam).coords for lam in labels]
    return _decompose(p.coords, columns, labels, uniform_behavior(d).coords, "behavior", d)


def corr_local_decompose(c: CorrVector) -> MembershipResult:
    """Same contract over the d^3 projected generators."""
    if not is_corr_probability(c):
        raise ValueError("correlation vector must be nonnegative with unit block sums")
    d = c.d
    gens = projected_generators(d)
    columns = [g.coords for g in gens]
    # a projected generator is named by its four outcome differences
    labels = [
        tuple(next(n for n in range(d) if g.coords[corr_index(d, a, b, n)] == 1) for a, b in ((1, 1), (1, 2), (2, 1), (2, 2)))
        for g in gens
    ]
    uniform = [Fraction(1, d)] * (4 * d)
    return _decompose(c.coords, columns, labels, uniform, "correlator", d)
