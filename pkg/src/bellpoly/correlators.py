"""Generalized correlation functions: the 4d quantities P(A_a - B_b = n mod d).

Projecting the 4d^2 joint probabilities down to outcome differences keeps
exactly the information the CGLMP functional consumes, and shrinks the
polytope from d^4 generators in dimension 4d^2 to d^3 projected generators
in dimension 4d, which is what makes complete facet enumeration tractable.
Coordinates: index(a, b, n) = ((a-1)*2 + (b-1))*d + n.

For d=2 this reduces to the familiar two-outcome correlators via the sign
convention outcome 0 -> +1, outcome 1 -> -1, under which
<A_a B_b> = P(A_a - B_b = 0) - P(A_a - B_b = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .jsonio import decode_rational, encode_rational
from .scenario import Behavior, Inequality, coord_index

_BLOCKS = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class CorrVector:
    """The 4d generalized correlation probabilities as one vector."""

    d: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != 4 * self.d:
            raise ValueError("correlation vector needs 4*d coordinates")

    def __getitem__(self, abn) -> Fraction:
        a, b, n = abn
        return self.coords[corr_index(self.d, a, b, n)]


def corr_index(d: int, a: int, b: int, n: int) -> int:
    return ((a - 1) * 2 + (b - 1)) * d + n


def project(p: Behavior) -> CorrVector:
    """Sum joint probabilities along constant outcome difference."""
    d = p.d
    coords = []
    for a, b in _BLOCKS:
        for n in range(d):
            coords.append(
                sum(p.coords[coord_index(d, a, b, (n + j) % d, j)] for j in range(d))
            )
    return CorrVector(d, tuple(coords))


def is_corr_probability(c: CorrVector) -> bool:
    """Entries nonnegative and each setting block summing to one."""
    d = c.d
    if any(x < 0 for x in c.coords):
        return False
    return all(
        sum(c.coords[corr_index(d, a, b, n)] for n in range(d)) == 1 for a, b in _BLOCKS
    )


def projected_generator_matrix(d: int) -> np.ndarray:
    """Deduplicated 0/1 rows of projected generators, in lexicographic order."""
    grid = np.indices((d, d, d, d)).reshape(4, -1)
    a1, a2, b1, b2 = grid
    n = d**4
    mat = np.zeros((n, 4 * d), dtype=np.int64)
    rows = np.arange(n)
    for (a, b), ka, kb in (((1, 1), a1, b1), ((1, 2), a1, b2), ((2, 1), a2, b1), ((2, 2), a2, b2)):
        mat[rows, ((a - 1) * 2 + (b - 1)) * d + (ka - kb) % d] = 1
    return np.unique(mat, axis=0)


def projected_generators(d: int) -> list[CorrVector]:
    """The d^3 distinct projections of the d^4 generators, sorted."""
    if d < 2:
        raise ValueError("need d >= 2")
    mat = projected_generator_matrix(d)
    if mat.shape[0] != d**3:
        raise AssertionError(f"expected {d**3} projected generators, got {mat.shape[0]}")
    return [CorrVector(d, tuple(Fraction(int(x)) for x in row)) for row in mat]


def corr_affine_dim(d: int) -> int:
    """Affine dimension of the projected generator hull (comes out 4(d-1))."""
    mat = projected_generator_matrix(d)
    return linalg.int_rank(mat[1:] - mat[0])


def chsh_correlators(p: Behavior) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """The four two-outcome correlation functions of a d=2 behavior."""
    if p.d != 2:
        raise ValueError("two-outcome correlators need d=2")
    out = []
    for a, b in _BLOCKS:
        out.append(
            p.coords[coord_index(2, a, b, 0, 0)]
            + p.coords[coord_index(2, a, b, 1, 1)]
            - p.coords[coord_index(2, a, b, 0, 1)]
            - p.coords[coord_index(2, a, b, 1, 0)]
        )
    return tuple(out)


def chsh_inequality() -> Inequality:
    """<A1B1> + <A1B2> + <A2B1> - <A2B2> <= 2, in correlator coordinates."""
    coeffs = [Fraction(0)] * 8
    for (a, b), sign in (((1, 1), 1), ((1, 2), 1), ((2, 1), 1), ((2, 2), -1)):
        coeffs[corr_index(2, a, b, 0)] = Fraction(sign)
        coeffs[corr_index(2, a, b, 1)] = Fraction(-sign)
    return Inequality("correlator", 2, tuple(coeffs), Fraction(2))


def cglmp_corr_inequality(d: int) -> Inequality:
    """The CGLMP functional over the 4d correlator coordinates, bound 2.

    Summing k from 0 to floor(d/2)-1 with weight 1 - 2k/(d-1), the eight
    probability terms per k contribute signed weight to the coordinate
    carrying their outcome difference.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    w = [Fraction(0)] * (4 * d)
    for k in range(d // 2):
        c = 1 - Fraction(2 * k, d - 1)
        w[corr_index(d, 1, 1, k % d)] += c
        w[corr_index(d, 1, 1, (-k - 1) % d)] -= c
        w[corr_index(d, 1, 2, (-k) % d)] += c
        w[corr_index(d, 1, 2, (k + 1) % d)] -= c
        w[corr_index(d, 2, 1, (-k - 1) % d)] += c
        w[corr_index(d, 2, 1, k % d)] -= c
        w[corr_index(d, 2, 2, k % d)] += c
        w[corr_index(d, 2, 2, (-k - 1) % d)] -= c
    return Inequality("correlator", d, tuple(w), Fraction(2))


def lift(ineq: Inequality) -> Inequality:
    """Pull a correlator inequality back to behavior coordinates.

    The projection is linear, so a correlator coefficient on difference n
    lands on every joint coordinate (k, s) with k - s = n mod d; the bound
    is untouched.  eval(lift(q), p) == eval(q, project(p)) for every p.
    """
    if ineq.space != "correlator":
        raise ValueError(f"can only lift correlator inequalities, got {ineq.space!r}")
    d = ineq.d
    coeffs = [Fraction(0)] * (4 * d * d)
    for a, b in _BLOCKS:
        for k in range(d):
            for s in range(d):
                coeffs[coord_index(d, a, b, k, s)] = ineq.coeffs[
                    corr_index(d, a, b, (k - s) % d)
                ]
    return Inequality("behavior", d, tuple(coeffs), ineq.bound)


def corr_to_json(c: CorrVector) -> dict:
    blocks = {
        f"a{a}b{b}": [encode_rational(c.coords[corr_index(c.d, a, b, n)]) for n in range(c.d)]
        for a, b in _BLOCKS
    }
    return {"d": c.d, "C": blocks}


def corr_from_json(data: dict) -> CorrVector:
    d = int(data["d"])
    coords = [Fraction(0)] * (4 * d)
    for a, b in _BLOCKS:
        block = data["C"][f"a{a}b{b}"]
        if len(block) != d:
            raise ValueError(f"block a{a}b{b} must have length {d}")
        for n in range(d):
            coords[corr_index(d, a, b, n)] = decode_rational(block[n])
    return CorrVector(d, tuple(coords))
