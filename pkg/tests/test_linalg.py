import pytest

from prym import linalg
from prym.errors import NonGenericPivot
from prym.scalars import DualScalar


def _random_matrix(field_, rng, nrows, ncols, rank=None):
    if rank is None:
        return [[field_.random(rng) for _ in range(ncols)] for _ in range(nrows)]
    if rank == 0:
        return [[field_.zero] * ncols for _ in range(nrows)]
    left = [[field_.random(rng) for _ in range(rank)] for _ in range(nrows)]
    right = [[field_.random(rng) for _ in range(ncols)] for _ in range(rank)]
    return [[sum((a * b for a, b in zip(row, col)), field_.zero) for col in zip(*right)] for row in left]


def test_rank_and_kernel_agree(F101, rng):
    for r in range(0, 6):
        A = _random_matrix(F101, rng, 7, 9, rank=r)
        rank = linalg.rank(A, F101, 9)
        kernel = linalg.kernel(A, F101, 9)
        assert rank <= r
        assert rank + len(kernel) == 9
        for v in kernel:
            for row in A:
                assert sum((a * b for a, b in zip(row, v)), F101.zero) == 0


def test_greedy_rank_matches_domain_matrix(F101, rng):
    for _ in range(20):
        A = _random_matrix(F101, rng, 12, 10, rank=int(rng.integers(0, 10)))
        ints = [[F101.residue(x) for x in row] for row in A]
        assert linalg.greedy_rank(ints, 101) == linalg.rank(A, F101, 10)


def test_rank_ignores_duplicates_and_order(F101, rng):
    A = _random_matrix(F101, rng, 6, 8)
    assert linalg.rank(A + A[:2], F101, 8) == linalg.rank(A, F101, 8)
    assert linalg.rank(A[::-1], F101, 8) == linalg.rank(A, F101, 8)


def test_rref_pivots(F101):
    rows, pivots = linalg.rref([[0, 2, 4], [0, 1, 2], [1, 0, 1]], F101, 3)
    assert pivots == (0, 1)
    assert [[F101.residue(x) for x in r] for r in rows] == [[1, 0, 1], [0, 1, 2]]


def test_kernel_of_empty_system_is_everything(F101):
    basis = linalg.kernel([], F101, 3)
    assert len(basis) == 3


def test_dual_kernel_lifts_the_base_kernel(F101, rng):
    base = _random_matrix(F101, rng, 4, 7)
    tangent = _random_matrix(F101, rng, 4, 7)
    rows = [[DualScalar(a, b) for a, b in zip(r, t)] for r, t in zip(base, tangent)]
    kernel = linalg.dual_kernel(rows, 7)
    assert len(kernel) == 3
    reduced = linalg.reduce_rows(kernel)
    assert reduced == linalg.kernel(base, F101, 7)
    for v in kernel:
        for row in rows:
            assert sum((a * b for a, b in zip(row, v)), F101.dual()) == 0


def test_dual_kernel_rejects_rank_jump(F101):
    # rank 1 at ε = 0 but rank 2 over the dual ring
    rows = [[F101.dual(1, 0), F101.dual(0, 0)], [F101.dual(0, 0), F101.dual(0, 1)]]
    with pytest.raises(NonGenericPivot):
        linalg.dual_kernel(rows, 2)


def test_solve(F101):
    x = linalg.solve([[2, 1], [1, 3]], [F101(3), F101(4)], F101)
    assert [F101.residue(v) for v in x] == [1, 1]
    with pytest.raises(NonGenericPivot):
        linalg.solve([[1, 2], [2, 4]], [F101(1), F101(2)], F101)
