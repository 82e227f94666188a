"""Shared checking utilities for the test suite."""

from fractions import Fraction

from padicsat.linalg import (
    determinant,
    dims,
    inverse_permutation,
    mat_mul,
    permutation_matrix,
)
from padicsat.rational import INF, NEG_INF, is_finite, pivot_sum, valuation


def rand_matrix(rng, m, n, mag=9, density=1.0):
    return [
        [
            Fraction(rng.randint(-mag, mag)) if rng.random() < density else Fraction(0)
            for _ in range(n)
        ]
        for _ in range(m)
    ]


def rand_vector(rng, n, mag=9):
    return [Fraction(rng.randint(-mag, mag)) for _ in range(n)]


def assert_echelon_shape(B):
    """Rows of zeros at the bottom; pivot columns strictly increasing; zeros
    below and left of every pivot."""
    m, n = dims(B)
    leads = []
    seen_zero_row = False
    for i in range(m):
        lead = next((j for j in range(n) if B[i][j] != 0), None)
        if lead is None:
            seen_zero_row = True
        else:
            assert not seen_zero_row, "nonzero row below a zero row"
            leads.append(lead)
    assert leads == sorted(set(leads)), "pivot columns not strictly increasing"
    for i, lead in enumerate(leads):
        for r in range(i + 1, m):
            for c in range(lead + 1):
                assert B[r][c] == 0, "nonzero entry below/left of a pivot"
    return leads


def assert_echelon_result(A, costs, result):
    """Full audit of a cost-minimal echelon result.

    Checks the factorization B = U A P, invertibility of U, echelon shape,
    pivot cost minimality along each pivot row, and the two derived
    minimality facts (cost without bias, cost with full bias) that the
    >=-solver relies on.
    """
    m, n = dims(A) if A else (0, 0)
    B, U, sigma = result.echelon, result.transform, result.sigma
    P = permutation_matrix(sigma)
    assert mat_mul(U, mat_mul(A, P)) == B
    assert determinant(U) != 0
    leads = assert_echelon_shape(B)
    assert list(result.pivots) == leads
    col_of = inverse_permutation(sigma)
    p = costs.prime
    offs = [costs.offsets[col_of[j]] for j in range(n)]
    bias = [costs.biases[col_of[j]] for j in range(n)]

    def doubled(a, j, b):
        if a == 0:
            return INF
        if offs[j] == NEG_INF:
            return NEG_INF
        return 2 * valuation(a, p) + 2 * offs[j] + b

    for i, piv in enumerate(result.pivots):
        tail = range(piv, n)
        # (b) pivot minimizes the full cost over the remaining columns
        full = [doubled(B[i][j], j, bias[j]) for j in tail]
        assert doubled(B[i][piv], piv, bias[piv]) == min(full)
        # derived: also minimal without any bias ...
        plain = [doubled(B[i][j], j, 0) for j in tail]
        assert doubled(B[i][piv], piv, 0) == min(plain)
        # ... and with the bias counted in full (doubled) on every column
        heavy = [doubled(B[i][j], j, 2 * bias[j]) for j in tail]
        assert doubled(B[i][piv], piv, 2 * bias[piv]) == min(heavy)
