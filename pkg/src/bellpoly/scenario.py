"""The two-party, two-setting, d-outcome measurement scenario.

A behavior is the table of joint outcome probabilities P(A_a=k, B_b=s)
flattened into a single vector of length 4d^2.  The coordinate order is
fixed globally:

    index(a, b, k, s) = ((a-1)*2 + (b-1)) * d^2 + k*d + s

with settings a, b in {1, 2} and outcomes k, s in {0, ..., d-1}.  A
deterministic strategy preassigns one outcome to each observable; its
behavior is a 0/1 vertex of the local polytope, and the d^4 of them
generate everything a local-realistic model can produce.

Behaviors are not forced to be normalized or nonnegative at construction:
facet normals, LP intermediates and hyperplane probes reuse the same
vector plumbing, so the physical conditions are separate predicates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import linalg
from .jsonio import decode_rational, encode_rational

_BLOCKS = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class Scenario:
    """Two observables per party, d outcomes per observable."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("scenario needs d >= 2 outcomes")


class DeterministicStrategy(NamedTuple):
    """Preassigned outcomes for A1, A2, B1, B2."""

    a1: int
    a2: int
    b1: int
    b2: int


@dataclass(frozen=True)
class Behavior:
    """Joint probability table as one coordinate vector of length 4d^2."""

    d: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != 4 * self.d * self.d:
            raise ValueError("behavior needs 4*d^2 coordinates")

    def __getitem__(self, absk) -> Fraction:
        a, b, k, s = absk
        return self.coords[coord_index(self.d, a, b, k, s)]


@dataclass(frozen=True)
class Inequality:
    """Linear functional with an upper bound: coeffs . x <= bound."""

    space: str  # "behavior" | "correlator"
    d: int
    coeffs: tuple[Fraction, ...]
    bound: Fraction


def coord_index(d: int, a: int, b: int, k: int, s: int) -> int:
    return ((a - 1) * 2 + (b - 1)) * d * d + k * d + s


def strategy_outcome(lam: DeterministicStrategy, party: str, setting: int) -> int:
    if party == "A":
        return lam.a1 if setting == 1 else lam.a2
    return lam.b1 if setting == 1 else lam.b2


def _check_strategy(d: int, lam: DeterministicStrategy) -> None:
    for v in lam:
        if not 0 <= v < d:
            raise ValueError(f"strategy {lam} out of range for d={d}")


def generator(s: Scenario, lam: DeterministicStrategy) -> Behavior:
    """0/1 behavior of a deterministic strategy; exactly four ones."""
    lam = DeterministicStrategy(*lam)
    _check_strategy(s.d, lam)
    coords = [Fraction(0)] * (4 * s.d * s.d)
    for a, b in _BLOCKS:
        k = strategy_outcome(lam, "A", a)
        t = strategy_outcome(lam, "B", b)
        coords[coord_index(s.d, a, b, k, t)] = Fraction(1)
    return Behavior(s.d, tuple(coords))


def all_strategies(s: Scenario) -> list[DeterministicStrategy]:
    return [DeterministicStrategy(*lam) for lam in itertools.product(range(s.d), repeat=4)]


def all_generators(s: Scenario) -> list[Behavior]:
    """The d^4 generators in lexicographic strategy order."""
    return [generator(s, lam) for lam in all_strategies(s)]


def generator_matrix(d: int) -> np.ndarray:
    """All d^4 generators as one 0/1 integer matrix, one row per strategy.

    Vectorized construction used by the rank pipelines; row order matches
    all_generators.
    """
    grid = np.indices((d, d, d, d)).reshape(4, -1)
    a1, a2, b1, b2 = grid
    n = d**4
    mat = np.zeros((n, 4 * d * d), dtype=np.int64)
    rows = np.arange(n)
    for (a, b), ka, kb in (((1, 1), a1, b1), ((1, 2), a1, b2), ((2, 1), a2, b1), ((2, 2), a2, b2)):
        offset = ((a - 1) * 2 + (b - 1)) * d * d
        mat[rows, offset + ka * d + kb] = 1
    return mat


def uniform_behavior(d: int) -> Behavior:
    q = Fraction(1, d * d)
    return Behavior(d, tuple([q] * (4 * d * d)))


def constraint_matrix(s: Scenario) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Normalization plus no-signaling as one linear system.

    Four normalization rows (right-hand side 1, blocks in order a1b1, a1b2,
    a2b1, a2b2) followed by 4d no-signaling rows (right-hand side 0): for
    each observable and each outcome, the marginal computed against the
    partner's first setting minus the one against the second.  All 4d rows
    are included even though only a subset is independent; the rank of the
    system is computed, never assumed.
    """
    d = s.d
    ncols = 4 * d * d
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    one = Fraction(1)
    for a, b in _BLOCKS:
        row = [Fraction(0)] * ncols
        for k in range(d):
            for t in range(d):
                row[coord_index(d, a, b, k, t)] = one
        rows.append(row)
        rhs.append(one)
    for a in (1, 2):  # Alice's marginals must not see Bob's setting
        for k in range(d):
            row = [Fraction(0)] * ncols
            for t in range(d):
                row[coord_index(d, a, 1, k, t)] += one
                row[coord_index(d, a, 2, k, t)] -= one
            rows.append(row)
            rhs.append(Fraction(0))
    for b in (1, 2):  # and symmetrically for Bob
        for t in range(d):
            row = [Fraction(0)] * ncols
            for k in range(d):
                row[coord_index(d, 1, b, k, t)] += one
                row[coord_index(d, 2, b, k, t)] -= one
            rows.append(row)
            rhs.append(Fraction(0))
    return rows, rhs


def is_normalized(p: Behavior) -> bool:
    d = p.d
    for a, b in _BLOCKS:
        total = sum(p.coords[coord_index(d, a, b, k, t)] for k in range(d) for t in range(d))
        if total != 1:
            return False
    return True


def is_nosignaling(p: Behavior) -> bool:
    d = p.d
    for a in (1, 2):
        for k in range(d):
            m1 = sum(p.coords[coord_index(d, a, 1, k, t)] for t in range(d))
            m2 = sum(p.coords[coord_index(d, a, 2, k, t)] for t in range(d))
            if m1 != m2:
                return False
    for b in (1, 2):
        for t in range(d):
            m1 = sum(p.coords[coord_index(d, 1, b, k, t)] for k in range(d))
            m2 = sum(p.coords[coord_index(d, 2, b, k, t)] for k in range(d))
            if m1 != m2:
                return False
    return True


def is_probability(p: Behavior) -> bool:
    return all(x >= 0 for x in p.coords) and is_normalized(p) and is_nosignaling(p)


def polytope_affine_dim(s: Scenario) -> int:
    """Affine dimension of the hull of all d^4 generators."""
    mat = generator_matrix(s.d)
    diffs = mat[1:] - mat[0]
    return linalg.int_rank(diffs)


def spanning_strategy_grid(d: int) -> list[DeterministicStrategy]:
    """A (2d-1)^2 family of strategies whose generators are independent.

    Per-party setting pairs run through (0,0), (0,1), ..., (0,d-1),
    (1,d-1), ..., (d-1,d-1); the grid of all combinations gives the
    explicit independent family whose size pins the polytope dimension
    from below.
    """
    pairs = [(0, j) for j in range(d)] + [(i, d - 1) for i in range(1, d)]
    return [
        DeterministicStrategy(x1, x2, y1, y2) for (x1, x2) in pairs for (y1, y2) in pairs
    ]


def behavior_to_json(p: Behavior) -> dict:
    blocks = {}
    for a, b in _BLOCKS:
        blocks[f"a{a}b{b}"] = [
            [encode_rational(p.coords[coord_index(p.d, a, b, k, t)]) for t in range(p.d)]
            for k in range(p.d)
        ]
    return {"d": p.d, "P": blocks}


def behavior_from_json(data: dict) -> Behavior:
    d = int(data["d"])
    coords = [Fraction(0)] * (4 * d * d)
    table = data["P"]
    for a, b in _BLOCKS:
        block = table[f"a{a}b{b}"]
        if len(block) != d or any(len(r) != d for r in block):
            raise ValueError(f"block a{a}b{b} must be {d}x{d}")
        for k in range(d):
            for t in range(d):
                coords[coord_index(d, a, b, k, t)] = decode_rational(block[k][t])
    return Behavior(d, tuple(coords))


def inequality_to_json(ineq: Inequality) -> dict:
    return {
        "space": ineq.space,
        "d": ineq.d,
        "coeffs": [encode_rational(c) for c in ineq.coeffs],
        "bound": encode_rational(ineq.bound),
    }


def inequality_from_json(data: dict) -> Inequality:
    return Inequality(
        space=str(data["space"]),
        d=int(data["d"]),
        coeffs=tuple(decode_rational(c) for c in data["coeffs"]),
        bound=decode_rational(data["bound"]),
    )
