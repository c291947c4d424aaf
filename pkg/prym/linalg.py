"""Linear algebra over F_p (sympy DomainMatrix) and over F_p[ε]/(ε²)"""

from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .errors import NonGenericPivot
from .scalars import DualScalar, PrimeField, dual_inv

Row = List


def to_matrix(rows: Sequence[Sequence], field: PrimeField, ncols: Optional[int] = None) -> DomainMatrix:
    """Build a DomainMatrix over F_p from rows of ints or residues."""
    rows = [[field.residue(e) for e in row] for row in rows]
    if not rows:
        return DomainMatrix.zeros((0, ncols or 0), field.domain)
    if ncols is not None and any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix rows")
    return DomainMatrix.from_list(rows, field.domain)


def to_rows(M: DomainMatrix) -> List[List]:
    return M.to_list()


def rank(rows: Sequence[Sequence], field: PrimeField, ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    return to_matrix(rows, field, ncols).rank()


def rref(rows: Sequence[Sequence], field: PrimeField, ncols: Optional[int] = None) -> Tuple[List[List], Tuple[int, ...]]:
    """Reduced row echelon form with zero rows removed, and the pivot columns."""
    if not rows:
        return [], ()
    R, pivots = to_matrix(rows, field, ncols).rref()
    return R.to_list()[: len(pivots)], tuple(pivots)


def kernel(rows: Sequence[Sequence], field: PrimeField, ncols: int) -> List[List]:
    """Basis of {v : A v = 0}, itself put in reduced row echelon form."""
    if not rows:
        return [[field.one if i == j else field.zero for j in range(ncols)] for i in range(ncols)]
    R, pivots = to_matrix(rows, field, ncols).rref()
    if len(pivots) == ncols:
        return []
    null = R.nullspace_from_rref(pivots).to_list()
    basis, _ = rref(null, field, ncols)
    return basis


def greedy_rank(rows: Sequence[Sequence], p: int) -> int:
    """Rank mod p by incremental reduction against an echelon basis on plain ints.

    Independent of DomainMatrix; used as a second opinion on certificate ranks.
    """
    basis = {}  # pivot column -> row normalized to 1 at the pivot
    for row in rows:
        v = [int(x) % p for x in row]
        for col, b in basis.items():
            c = v[col]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            continue
        inv = pow(v[lead], p - 2, p)
        v = [(x * inv) % p for x in v]
        for col, b in list(basis.items()):
            c = b[lead]
            if c:
                basis[col] = [(x - c * y) % p for x, y in zip(b, v)]
        basis[lead] = v
    return len(basis)


def lift_rows(rows: Sequence[Sequence]) -> List[List[DualScalar]]:
    return [[DualScalar.lift(e) for e in row] for row in rows]


def dual_rref(rows: Sequence[Sequence[DualScalar]], ncols: int) -> Tuple[List[List[DualScalar]], Tuple[int, ...], List[List[DualScalar]]]:
    """Gauss-Jordan over F_p[ε]/(ε²) pivoting only on units.

    Columns are scanned left to right; a column gets a pivot when some
    remaining row has a unit entry there. Returns the pivot rows, the pivot
    columns and the leftover rows, which contain no unit entries.
    """
    work = [list(r) for r in lift_rows(rows)]
    pivot_rows: List[List[DualScalar]] = []
    pivots: List[int] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(work) if r[col].is_unit), None)
        if idx is None:
            continue
        row = work.pop(idx)
        inv = dual_inv(row[col])
        row = [inv * x for x in row]
        work = [_eliminate(r, row, col) for r in work]
        pivot_rows = [_eliminate(r, row, col) for r in pivot_rows]
        pivot_rows.append(row)
        pivots.append(col)
    return pivot_rows, tuple(pivots), work


def _eliminate(target: List[DualScalar], pivot: List[DualScalar], col: int) -> List[DualScalar]:
    c = target[col]
    if not c:
        return target
    return [t - c * x for t, x in zip(target, pivot)]


def dual_kernel(rows: Sequence[Sequence], ncols: int) -> List[List[DualScalar]]:
    """Free F_p[ε]/(ε²)-module kernel of a matrix with generic pivots.

    The residual rows after unit pivoting must vanish; otherwise the base
    matrix rank drops under deformation and NonGenericPivot is raised. The
    returned basis is in reduced row echelon form over the dual ring, so the
    ε-parts of its pivot coordinates are zero.
    """
    pivot_rows, pivots, rest = dual_rref(rows, ncols)
    if any(any(x for x in r) for r in rest):
        raise NonGenericPivot(
            f"{len(rest)} residual rows after {len(pivots)} unit pivots are not zero"
        )
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return []
    zero = _zero_like(rows)
    one = DualScalar(zero.a.__class__(1), zero.b)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, pc in zip(pivot_rows, pivots):
            v[pc] = -r[f]
        basis.append(v)
    normalized, _, _ = dual_rref(basis, ncols)
    return normalized


def _zero_like(rows: Sequence[Sequence]) -> DualScalar:
    for r in rows:
        for x in r:
            x = DualScalar.lift(x)
            return DualScalar(x.a.__class__(0), x.a.__class__(0))
    raise ValueError("cannot infer the field of an empty matrix")


def reduce_rows(rows: Sequence[Sequence[DualScalar]]) -> List[List]:
    """ε → 0 image of a dual matrix."""
    return [[x.reduce() for x in r] for r in rows]


def tangent_rows(rows: Sequence[Sequence[DualScalar]]) -> List[List]:
    return [[x.b for x in r] for r in rows]


def solve(rows: Sequence[Sequence], rhs: Sequence, field: PrimeField) -> List:
    """Solve a square nonsingular system A x = b over F_p."""
    A = to_matrix(rows, field)
    b = to_matrix([[x] for x in rhs], field)
    if A.rank() < A.shape[0]:
        raise NonGenericPivot("singular linear system")
    return [r[0] for r in A.lu_solve(b).to_list()]
