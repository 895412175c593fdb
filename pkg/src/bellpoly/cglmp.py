"""The CGLMP functional I_d and its two facet conditions.

On a deterministic strategy the functional depends only on four centered
outcome differences

    r = A1 - B1,   s = -A1 + B2,   t = -A2 + B1 - 1,   u = A2 - B2,

each shifted by a multiple of d into the window [-floor(d/2), floor((d-1)/2)],
which forces r+s+t+u into {d-1, -1, -d-1}.  The value is then
f(r)+f(s)+f(t)+f(u) with f(x) = -2x/(d-1)+1 for x >= 0 and
f(x) = -2x/(d-1)-(d+1)/(d-1) for x < 0, giving exactly three possible
outcomes: 2, -2/(d-1) and -2(d+1)/(d-1).

Two independent certificates are computed exhaustively:

* the bound: every one of the d^4 generators evaluates to at most 2, with
  the coefficient form and the f form agreeing strategy by strategy;
* tightness: the generators on the hyperplane I_d = 2 contain 4d(d-1)
  linearly independent vectors, exhibited constructively in d-1 staged
  batches of 4d vectors whose rank is checked to grow by exactly 4d at
  every step.

The staged batches live in permuted coordinates in which a generator reads
|A,r> + |A,s> + |A-r,t> + |A+s,u> blockwise; the permutation is orthogonal
(a relabeling of coordinates), so ranks agree with the behavior frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg
from .scenario import DeterministicStrategy, Inequality, Scenario, all_strategies, coord_index


class RSTU(NamedTuple):
    r: int
    s: int
    t: int
    u: int


@dataclass(frozen=True)
class CaseClass:
    """Sign-pattern case of an RSTU tuple: negatives count plus sum branch."""

    tag: str  # case1, case2a, case2b, case3, case4a, case4b, case5
    negatives: int
    total: int
    value: Fraction


class VerificationError(AssertionError):
    """An exhaustive check found a counterexample (carries the offender)."""


def window_bounds(d: int) -> tuple[int, int]:
    return -(d // 2), (d - 1) // 2


def center_mod(x: int, d: int) -> int:
    """Shift x by a multiple of d into [-floor(d/2), floor((d-1)/2)]."""
    lo, _ = window_bounds(d)
    return (x - lo) % d + lo


def rstu(lam: DeterministicStrategy, d: int) -> RSTU:
    lam = DeterministicStrategy(*lam)
    for v in lam:
        if not 0 <= v < d:
            raise ValueError(f"strategy {lam} out of range for d={d}")
    v = RSTU(
        center_mod(lam.a1 - lam.b1, d),
        center_mod(-lam.a1 + lam.b2, d),
        center_mod(-lam.a2 + lam.b1 - 1, d),
        center_mod(lam.a2 - lam.b2, d),
    )
    if sum(v) not in (d - 1, -1, -d - 1):
        raise AssertionError(f"window arithmetic broke for {lam}: {v}")
    return v


def f_value(x: int, d: int) -> Fraction:
    """The per-variable weight; exact rational."""
    if x >= 0:
        return Fraction(-2 * x, d - 1) + 1
    return Fraction(-2 * x, d - 1) - Fraction(d + 1, d - 1)


def _f_scaled(x: int, d: int) -> int:
    # f times (d-1); integer arithmetic for the exhaustive sweeps
    return -2 * x + (d - 1) if x >= 0 else -2 * x - (d + 1)


def eval_on_generator(lam: DeterministicStrategy, d: int) -> Fraction:
    """I_d of a generator through the f form."""
    v = rstu(lam, d)
    return sum(f_value(x, d) for x in v)


def classify_case(v: RSTU, d: int) -> CaseClass:
    lo, hi = window_bounds(d)
    if not all(lo <= x <= hi for x in v):
        raise ValueError(f"{v} violates the window for d={d}")
    total = sum(v)
    if total % d != (-1) % d or total not in (d - 1, -1, -d - 1):
        raise ValueError(f"{v} violates the sum constraint for d={d}")
    neg = sum(1 for x in v if x < 0)
    value = Fraction(sum(_f_scaled(x, d) for x in v), d - 1)
    branches = {
        (0, d - 1): "case1",
        (1, d - 1): "case2a",
        (1, -1): "case2b",
        (2, -1): "case3",
        (3, -1): "case4a",
        (3, -d - 1): "case4b",
        (4, -d - 1): "case5",
    }
    tag = branches.get((neg, total))
    if tag is None:
        raise ValueError(f"{v} matches no sign/sum case for d={d}")
    return CaseClass(tag=tag, negatives=neg, total=total, value=value)


def cglmp_inequality(d: int) -> Inequality:
    """I_d over behavior coordinates, bound 2.

    Each probability-of-difference term P(A_a - B_b = m mod d) is expanded
    into its d joint coordinates (k, s) with k = m + s mod d; built here
    directly from the eight-term sum, independently of the correlator-space
    construction, so the two can be cross-checked.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    coeffs = [Fraction(0)] * (4 * d * d)

    def add_term(a: int, b: int, m: int, c: Fraction) -> None:
        for s in range(d):
            coeffs[coord_index(d, a, b, (m + s) % d, s)] += c

    for k in range(d // 2):
        c = 1 - Fraction(2 * k, d - 1)
        add_term(1, 1, k, c)
        add_term(1, 1, -k - 1, -c)
        add_term(1, 2, -k, c)
        add_term(1, 2, k + 1, -c)
        add_term(2, 1, -k - 1, c)
        add_term(2, 1, k, -c)
        add_term(2, 2, k, c)
        add_term(2, 2, -k - 1, -c)
    return Inequality("behavior", d, tuple(coeffs), Fraction(2))


def evaluate(ineq: Inequality, p) -> Fraction:
    """Exact inner product of an inequality's coefficients with a vector."""
    coords = p.coords if hasattr(p, "coords") else tuple(p)
    if hasattr(p, "d"):
        expected = 4 * ineq.d * ineq.d if ineq.space == "behavior" else 4 * ineq.d
        if p.d != ineq.d or len(coords) != expected:
            raise ValueError(f"cannot evaluate {ineq.space} inequality on {type(p).__name__} with d={p.d}")
    if len(coords) != len(ineq.coeffs):
        raise ValueError("coefficient/vector length mismatch")
    return sum(c * x for c, x in zip(ineq.coeffs, coords) if c)


def _strategy_value_coeff(ineq: Inequality, lam: DeterministicStrategy) -> Fraction:
    # a generator has exactly four unit coordinates
    d = ineq.d
    return (
        ineq.coeffs[coord_index(d, 1, 1, lam.a1, lam.b1)]
        + ineq.coeffs[coord_index(d, 1, 2, lam.a1, lam.b2)]
        + ineq.coeffs[coord_index(d, 2, 1, lam.a2, lam.b1)]
        + ineq.coeffs[coord_index(d, 2, 2, lam.a2, lam.b2)]
    )


@dataclass(frozen=True)
class Condition1Report:
    """Outcome of the exhaustive bound check over all d^4 generators."""

    d: int
    total: int
    max_value: Fraction
    histogram: dict[Fraction, int]
    case_histogram: dict[str, int]


def verify_condition1(d: int) -> Condition1Report:
    """Evaluate I_d on every generator by both forms and check everything.

    Both evaluations run in integers scaled by d-1.  Any disagreement
    between the forms, any value outside {2, -2/(d-1), -2(d+1)/(d-1)}, or a
    maximum different from 2 raises VerificationError naming the strategy.
    """
    ineq = cglmp_inequality(d)
    scale = d - 1
    coeffs_scaled = [c * scale for c in ineq.coeffs]
    if any(c.denominator != 1 for c in coeffs_scaled):
        raise AssertionError("scaled coefficients must be integers")
    cs = [int(c) for c in coeffs_scaled]
    allowed = {2 * scale, -2, -2 * (d + 1)}
    hist: dict[int, int] = {}
    cases: dict[str, int] = {}
    best = None
    for lam in all_strategies(Scenario(d)):
        v = rstu(lam, d)
        by_f = sum(_f_scaled(x, d) for x in v)
        by_coeff = (
            cs[coord_index(d, 1, 1, lam.a1, lam.b1)]
            + cs[coord_index(d, 1, 2, lam.a1, lam.b2)]
            + cs[coord_index(d, 2, 1, lam.a2, lam.b1)]
            + cs[coord_index(d, 2, 2, lam.a2, lam.b2)]
        )
        if by_f != by_coeff:
            raise VerificationError(
                f"coefficient form and f form disagree on {lam}: "
                f"{Fraction(by_coeff, scale)} vs {Fraction(by_f, scale)}"
            )
        if by_f not in allowed:
            raise VerificationError(f"{lam} evaluates to {Fraction(by_f, scale)}, outside the value set")
        hist[by_f] = hist.get(by_f, 0) + 1
        tag = classify_case(v, d).tag
        cases[tag] = cases.get(tag, 0) + 1
        if best is None or by_f > best:
            best = by_f
    if best != 2 * scale:
        raise VerificationError(f"maximum over generators is {Fraction(best, scale)}, not 2")
    histogram = {Fraction(k, scale): n for k, n in sorted(hist.items(), reverse=True)}
    return Condition1Report(
        d=d,
        total=d**4,
        max_value=Fraction(2),
        histogram=histogram,
        case_histogram=dict(sorted(cases.items())),
    )


def saturating_generators(d: int) -> list[DeterministicStrategy]:
    """All strategies with I_d = 2; equals case1 plus case2b exactly."""
    by_value = []
    by_case = []
    for lam in all_strategies(Scenario(d)):
        v = rstu(lam, d)
        if sum(_f_scaled(x, d) for x in v) == 2 * (d - 1):
            by_value.append(lam)
        if classify_case(v, d).tag in ("case1", "case2b"):
            by_case.append(lam)
    if by_value != by_case:
        raise VerificationError("value-saturating set differs from the case-pattern set")
    return by_value


def _saturating_matrix(d: int) -> np.ndarray:
    """0/1 behavior rows of all saturating generators, vectorized."""
    grid = np.indices((d, d, d, d)).reshape(4, -1)
    a1, a2, b1, b2 = grid
    lo = -(d // 2)
    cen = lambda x: (x - lo) % d + lo
    r, s = cen(a1 - b1), cen(-a1 + b2)
    t, u = cen(-a2 + b1 - 1), cen(a2 - b2)
    neg = (r < 0).astype(int) + (s < 0).astype(int) + (t < 0).astype(int) + (u < 0).astype(int)
    tot = r + s + t + u
    mask = ((neg == 0) & (tot == d - 1)) | ((neg == 1) & (tot == -1))
    idx = np.nonzero(mask)[0]
    mat = np.zeros((idx.size, 4 * d * d), dtype=np.int64)
    rows = np.arange(idx.size)
    for (a, b), ka, kb in (
        ((1, 1), a1[idx], b1[idx]),
        ((1, 2), a1[idx], b2[idx]),
        ((2, 1), a2[idx], b1[idx]),
        ((2, 2), a2[idx], b2[idx]),
    ):
        mat[rows, ((a - 1) * 2 + (b - 1)) * d * d + ka * d + kb] = 1
    return mat


@dataclass(frozen=True)
class TightnessReport:
    d: int
    h: int  # 4d(d-1), the affine dimension the rank must reach
    saturating: int
    rank: int

    @property
    def tight(self) -> bool:
        return self.rank == self.h


def tightness_rank(d: int) -> TightnessReport:
    """Rank of the saturating generators; tight means it reaches 4d(d-1)."""
    mat = _saturating_matrix(d)
    return TightnessReport(d=d, h=4 * d * (d - 1), saturating=mat.shape[0], rank=linalg.int_rank(mat))


# --- staged witness -------------------------------------------------------

SCHEME_EXAMPLE1 = "example1"
SCHEME_EXAMPLE2 = "example2"
SCHEME_EXAMPLE2_VARIANT = "example2-variant"


@dataclass(frozen=True)
class WitnessBatch:
    """One step of the staged independence certificate: 4d vectors."""

    step_index: int
    scheme: str
    params: tuple[int, ...]
    patterns: tuple[tuple[int, int, int, int], ...]
    strategies: tuple[DeterministicStrategy, ...]
    vectors: tuple[tuple[int, ...], ...]  # permuted-frame 0/1 coordinates
    rank_after: int


class WitnessError(VerificationError):
    """A witness batch failed to raise the rank by 4d."""


def witness_steps(d: int) -> list[tuple[str, tuple[int, ...]]]:
    """The step table: scheme plus parameters for each of the d-1 batches.

    First phase walks through all-nonnegative difference tuples summing to
    d-1, introducing one previously unused value per step (two steps per
    fresh pair of values); second phase covers one strictly negative value
    per step with sum -1.  The branch shape depends on d mod 4.
    """
    e, m = divmod(d, 4)
    first: list[tuple[str, tuple[int, ...]]] = []
    if m == 0:
        for k in range(1, e + 1):
            first.append((SCHEME_EXAMPLE1, (e - k, e + k - 1, e, e)))
            if k < e:
                first.append((SCHEME_EXAMPLE1, (e + k, e - k, e - 1, e)))
        negatives = 2 * e
    elif m == 1:
        first.append((SCHEME_EXAMPLE2, (e + 1, e - 1, e - 1)))
        first.append((SCHEME_EXAMPLE2_VARIANT, (e, e - 1, e + 1)))
        for k in range(2, e + 1):
            first.append((SCHEME_EXAMPLE1, (e + k, e - k + 1, e - 1, e)))
            first.append((SCHEME_EXAMPLE1, (e - k, e + k, e, e)))
        negatives = 2 * e
    elif m == 2:
        for k in range(1, e + 1):
            first.append((SCHEME_EXAMPLE1, (e + k, e - k + 1, e, e)))
            first.append((SCHEME_EXAMPLE1, (e - k, e + k, e + 1, e)))
        negatives = 2 * e + 1
    else:
        first.append((SCHEME_EXAMPLE2, (e + 1, e, e)))
        for k in range(1, e + 1):
            first.append((SCHEME_EXAMPLE1, (e - k, e + k, e + 1, e + 1)))
            first.append((SCHEME_EXAMPLE1, (e + k + 1, e - k, e + 1, e)))
        negatives = 2 * e + 1
    second = [(SCHEME_EXAMPLE1, (-k, k - 1, 0, 0)) for k in range(1, negatives + 1)]
    steps = first + second
    if len(steps) != d - 1:
        raise AssertionError(f"step table for d={d} has {len(steps)} entries")
    return steps


def scheme_patterns(scheme: str, params: tuple[int, ...]) -> list[tuple[int, int, int, int]]:
    """The four (r,s,t,u) assignments a step contributes."""
    if scheme == SCHEME_EXAMPLE1:
        a, b1, b2, b3 = params
        return [(a, b1, b2, b3), (b3, a, b1, b2), (b2, b3, a, b1), (b1, b2, b3, a)]
    if scheme == SCHEME_EXAMPLE2:
        a, b1, b2 = params
        return [(a, a, b1, b2), (a, b1, a, b2), (a, b1, b2, a), (b1, a, a, b2)]
    if scheme == SCHEME_EXAMPLE2_VARIANT:
        # the example-2 rows with the roles of (r,s) and (t,u) exchanged,
        # used when the step's fresh value sits in the last two slots
        a, b1, b2 = params
        return [(b1, b2, a, a), (a, b2, a, b1), (b2, a, a, b1), (a, b2, b1, a)]
    raise ValueError(f"unknown scheme {scheme!r}")


def witness_frame_permutation(d: int) -> tuple[int, ...]:
    """perm with permuted_vector[j] = behavior_vector[perm[j]].

    Blockwise bijection sending the joint-outcome coordinate to the
    (first outcome, outcome difference) coordinate, so a generator becomes
    |A,r> + |A,s> + |A-r,t> + |A+s,u> across the four blocks.
    """
    size = 4 * d * d
    perm = [0] * size
    for k in range(d):
        for s in range(d):
            perm[coord_index(d, 1, 1, k, (k - s) % d)] = coord_index(d, 1, 1, k, s)
            perm[coord_index(d, 1, 2, k, (s - k) % d)] = coord_index(d, 1, 2, k, s)
            perm[coord_index(d, 2, 1, s, (s - k - 1) % d)] = coord_index(d, 2, 1, k, s)
            perm[coord_index(d, 2, 2, s, (k - s) % d)] = coord_index(d, 2, 2, k, s)
    return tuple(perm)


def to_witness_frame(coords: Sequence, d: int) -> tuple:
    perm = witness_frame_permutation(d)
    return tuple(coords[perm[j]] for j in range(4 * d * d))


def from_witness_frame(coords: Sequence, d: int) -> tuple:
    perm = witness_frame_permutation(d)
    out = [None] * (4 * d * d)
    for j in range(4 * d * d):
        out[perm[j]] = coords[j]
    return tuple(out)


def _pattern_strategy(pattern: tuple[int, int, int, int], first: int, d: int) -> DeterministicStrategy:
    r, s, t, u = pattern
    a1 = first % d
    b1 = (a1 - r) % d
    b2 = (a1 + s) % d
    a2 = (b1 - t - 1) % d
    if a2 != (b2 + u) % d:
        raise AssertionError(f"pattern {pattern} is not congruent to -1 mod {d}")
    return DeterministicStrategy(a1, a2, b1, b2)


def _witness_vector(pattern: tuple[int, int, int, int], first: int, d: int) -> tuple[int, ...]:
    r, s, t, u = pattern
    a1 = first % d
    vec = [0] * (4 * d * d)
    vec[coord_index(d, 1, 1, a1, r % d)] = 1
    vec[coord_index(d, 1, 2, a1, s % d)] = 1
    vec[coord_index(d, 2, 1, (a1 - r) % d, t % d)] = 1
    vec[coord_index(d, 2, 2, (a1 + s) % d, u % d)] = 1
    return tuple(vec)


def _example2_minor(scheme: str, params: tuple[int, ...], d: int) -> list[list[int]]:
    """Projection of a step's four rows (at A=0) onto its four key coordinates."""
    a, b1, b2 = params
    if scheme == SCHEME_EXAMPLE2:
        cols = [
            coord_index(d, 1, 1, 0, a % d),
            coord_index(d, 1, 2, 0, a % d),
            coord_index(d, 2, 1, (-a) % d, a % d),
            coord_index(d, 2, 2, b1 % d, a % d),
        ]
    else:
        cols = [
            coord_index(d, 1, 1, 0, a % d),
            coord_index(d, 1, 2, 0, a % d),
            coord_index(d, 2, 1, (-b1) % d, a % d),
            coord_index(d, 2, 2, b2 % d, a % d),
        ]
    rows = []
    for pattern in scheme_patterns(scheme, params):
        vec = _witness_vector(pattern, 0, d)
        rows.append([vec[c] for c in cols])
    return rows


def constructive_witness(d: int) -> list[WitnessBatch]:
    """Build and verify the d-1 staged batches of 4d saturating vectors.

    Every vector is checked to be a saturating generator, every example-2
    style step is checked to have a nonsingular 4x4 key minor, and the
    incremental rank is required to grow by exactly 4d per batch, ending at
    4d(d-1).  Raises WitnessError naming the first failing step otherwise.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    lo, hi = window_bounds(d)
    basis = linalg.IntRowBasis(4 * d * d)
    batches: list[WitnessBatch] = []
    for step_index, (scheme, params) in enumerate(witness_steps(d)):
        patterns = scheme_patterns(scheme, params)
        strategies: list[DeterministicStrategy] = []
        vectors: list[tuple[int, ...]] = []
        for pattern in patterns:
            if not all(lo <= x <= hi for x in pattern):
                raise WitnessError(f"step {step_index}: pattern {pattern} leaves the window for d={d}")
            for first in range(d):
                lam = _pattern_strategy(pattern, first, d)
                if rstu(lam, d) != pattern:
                    raise WitnessError(f"step {step_index}: {pattern} does not reproduce itself from {lam}")
                if classify_case(RSTU(*pattern), d).value != 2:
                    raise WitnessError(f"step {step_index}: pattern {pattern} is not saturating")
                strategies.append(lam)
                vectors.append(_witness_vector(pattern, first, d))
        if scheme in (SCHEME_EXAMPLE2, SCHEME_EXAMPLE2_VARIANT):
            minor = _example2_minor(scheme, params, d)
            if linalg.int_rank(minor) != 4:
                raise WitnessError(f"step {step_index}: singular key minor for {scheme} {params}")
        before = basis.rank
        for vec in vectors:
            basis.add(vec)
        if basis.rank != before + 4 * d:
            raise WitnessError(
                f"step {step_index} ({scheme} {params}) raised the rank by "
                f"{basis.rank - before}, expected {4 * d}"
            )
        batches.append(
            WitnessBatch(
                step_index=step_index,
                scheme=scheme,
                params=tuple(params),
                patterns=tuple(patterns),
                strategies=tuple(strategies),
                vectors=tuple(vectors),
                rank_after=basis.rank,
            )
        )
    if basis.rank != 4 * d * (d - 1):
        raise WitnessError(f"witness ends at rank {basis.rank}, expected {4 * d * (d - 1)}")
    return batches
