"""Smith form, solve, determinant: frozen hand-derived values plus structural checks."""
import random
from fractions import Fraction

import pytest

from binmc.matrix import (Matrix, block_diag, column_space_basis, det, hstack,
                          kernel_basis, rank, rank_over_fractions, smith, solve, vstack)
from binmc.rings import GF, QQ, ZZ, polynomial_ring


def M(rows, ring=ZZ):
    return Matrix.from_int_rows(ring, rows)


def test_smith_identity():
    d = smith(Matrix.identity(ZZ, 3))
    assert d.S == Matrix.identity(ZZ, 3)
    assert d.verify(Matrix.identity(ZZ, 3))


def test_smith_zero_matrix():
    a = Matrix.zeros(ZZ, 2, 3)
    d = smith(a)
    assert d.S == a
    assert d.rank == 0
    assert d.verify(a)


def test_smith_hand_example():
    # gcd of entries is 2 and the determinant is 12, so the factors are 2, 6
    a = M([[2, 4], [0, 6]])
    d = smith(a)
    assert d.diagonal() == [2, 6]
    assert d.verify(a)


def test_smith_divisibility_fixup():
    # diag(4, 6) is not a valid Smith form; gcd 2 and lcm 12 are
    a = M([[4, 0], [0, 6]])
    d = smith(a)
    assert d.diagonal() == [2, 12]
    assert d.verify(a)


def test_smith_negative_entries_normalized():
    a = M([[-3]])
    d = smith(a)
    assert d.diagonal() == [3]
    assert d.verify(a)


def test_smith_rationals_rank_form():
    a = Matrix.from_rows(QQ, [[Fraction(2), Fraction(4)], [Fraction(1), Fraction(2)]])
    d = smith(a)
    assert d.diagonal() == [Fraction(1), Fraction(0)]
    assert d.verify(a)


def test_smith_prime_field():
    a = M([[2, 0], [0, 3]], GF(7))
    d = smith(a)
    assert d.diagonal() == [1, 1]
    assert d.verify(a)


def test_smith_polynomials():
    R = polynomial_ring(QQ)
    x = (QQ.zero, QQ.one)
    one = R.one
    a = Matrix.from_rows(R, [[x, one], [R.zero, x]])
    d = smith(a)
    # unimodular row/col moves peel off a unit, leaving 1 and x^2
    assert d.diagonal() == [one, R.mul(x, x)]
    assert d.verify(a)


def test_smith_polynomial_monic_normalization():
    R = polynomial_ring(GF(5))
    a = Matrix.from_rows(R, [[(0, 2)]])  # the 1x1 matrix (2x)
    d = smith(a)
    assert d.diagonal() == [(0, 1)]  # monic x
    assert d.verify(a)


def test_solve_integer_divisibility():
    assert solve(M([[2]]), M([[3]])) is None
    x = solve(M([[2]]), M([[6]]))
    assert x == M([[3]])


def test_solve_rational():
    a = Matrix.from_rows(QQ, [[Fraction(2)]])
    b = Matrix.from_rows(QQ, [[Fraction(3)]])
    assert solve(a, b) == Matrix.from_rows(QQ, [[Fraction(3, 2)]])


def test_solve_inconsistent():
    a = M([[1, 0], [1, 0]])
    b = M([[1], [2]])
    assert solve(a, b) is None


def test_solve_underdetermined_reproducible():
    a = M([[1, 1]])
    b = M([[5]])
    x1 = solve(a, b)
    x2 = solve(a, b)
    assert x1 == x2
    assert a @ x1 == b


def test_solve_zero_width_cases():
    # A with no columns: solvable iff B == 0
    a = Matrix.zeros(ZZ, 2, 0)
    assert solve(a, Matrix.zeros(ZZ, 2, 1)) == Matrix.zeros(ZZ, 0, 1)
    assert solve(a, M([[1], [0]])) is None
    # A with no rows: anything with matching shape solves, canonical answer is 0
    b = Matrix.zeros(ZZ, 0, 2)
    x = solve(Matrix.zeros(ZZ, 0, 3), b)
    assert x == Matrix.zeros(ZZ, 3, 2)


def test_kernel_basis_line():
    k = kernel_basis(M([[1, 1, 1]]))
    assert k.cols == 2
    assert (M([[1, 1, 1]]) @ k).is_zero()


def test_kernel_saturated():
    # kernel of [2 2] is spanned by (1, -1), not (2, -2)
    k = kernel_basis(M([[2, 2]]))
    assert k.cols == 1
    a, b = k.get(0, 0), k.get(1, 0)
    assert abs(a) == 1 and a == -b


def test_column_space_basis_scaling():
    b = column_space_basis(M([[2, 4], [0, 0]]))
    assert b.cols == 1
    assert abs(b.get(0, 0)) == 2 and b.get(1, 0) == 0


def test_det_hand_values():
    assert det(M([[1, 2], [3, 4]])) == -2
    assert det(M([[1, 2, 3], [4, 5, 6], [7, 8, 9]])) == 0
    assert det(Matrix.identity(ZZ, 4)) == 1
    assert det(Matrix(ZZ, 0, 0, [])) == 1


def test_det_matches_cofactor_expansion():
    rng = random.Random(7)

    def cofactor(rows):
        n = len(rows)
        if n == 0:
            return 1
        total = 0
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = rows[0][j] * cofactor(minor)
            total += term if j % 2 == 0 else -term
        return total

    for _ in range(40):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        assert det(M(rows)) == cofactor(rows)


def test_rank_two_ways_agree():
    rng = random.Random(11)
    for _ in range(60):
        n, m = rng.randint(0, 4), rng.randint(0, 4)
        rows = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(n)]
        a = M(rows)
        assert rank(a) == rank_over_fractions(a)


def test_smith_randomized_contract():
    rng = random.Random(23)
    rings = [ZZ, QQ, GF(5)]
    for tick in range(80):
        ring = rings[tick % len(rings)]
        n, m = rng.randint(0, 4), rng.randint(0, 4)
        a = Matrix.from_int_rows(ring, [[rng.randint(-6, 6) for _ in range(m)] for _ in range(n)])
        assert smith(a).verify(a)


def test_smith_deterministic_across_runs():
    rng = random.Random(5)
    rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
    d1 = smith(M(rows))
    d2 = smith(M(rows))
    assert (d1.U, d1.S, d1.V) == (d2.U, d2.S, d2.V)


def test_stack_and_block_helpers():
    a, b = M([[1, 2]]), M([[3, 4]])
    assert vstack([a, b]) == M([[1, 2], [3, 4]])
    assert hstack([a, b]) == M([[1, 2, 3, 4]])
    assert block_diag(ZZ, [M([[1]]), M([[2]])]) == M([[1, 0], [0, 2]])


def test_matmul_shapes_and_zero_width():
    a = Matrix.zeros(ZZ, 2, 0)
    b = Matrix.zeros(ZZ, 0, 3)
    assert (a @ b) == Matrix.zeros(ZZ, 2, 3)
    with pytest.raises(Exception):
        M([[1]]) @ M([[1, 2], [3, 4]])
