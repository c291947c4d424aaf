"""Canonical model of the five-nodal sextic: cubics through the nodes and the three quadrics"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .errors import DegenerateNodes, UnexpectedKernelDim
from .geometry import CertReport, ProjPoint, QuarticModel, det3, general_position_p2, p2_ring
from .ideals import IdealSpec, hilbert_value, is_empty_projective, point_conditions
from .polys import (
    DualPoly,
    coeff_vector,
    format_poly,
    from_coeff_vector,
    gradient,
    monomial_basis,
    poly_ring,
    ring_field,
    substitute,
    variables,
)
from .scalars import DualScalar, PrimeField

QUADRIC_COUNT = 3
CUBIC_COUNT = 5


def p4_ring(field_: PrimeField) -> PolyRing:
    return poly_ring(variables("y", 5), field_)


@dataclass
class CubicSystem:
    """Five independent plane cubics through the sextic's nodes (over F_p or the dual numbers)."""

    basis: Tuple
    nodes: Tuple

    @property
    def dual(self) -> bool:
        return any(isinstance(c, DualPoly) for c in self.basis)

    def reduce(self) -> "CubicSystem":
        return CubicSystem(tuple(c.reduce() if isinstance(c, DualPoly) else c for c in self.basis), self.nodes)


@dataclass
class CanonicalCurve:
    quadrics: Tuple
    cubic_system: CubicSystem
    sextic: Any
    multipliers: Tuple = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quadrics": [format_poly(h) for h in self.quadrics],
            "cubics": [format_poly(c) for c in self.cubic_system.basis],
        }


def cubic_system(nodes: Sequence[ProjPoint]) -> CubicSystem:
    if len(nodes) != CUBIC_COUNT or not general_position_p2(nodes):
        raise DegenerateNodes("the sextic nodes are not five points in linear general position")
    field_ = nodes[0].field
    ring = p2_ring(field_)
    rows = point_conditions([q.coords for q in nodes], ring, 3)
    rank = linalg.rank(rows, field_, 10)
    if rank < CUBIC_COUNT:
        raise DegenerateNodes(f"cubic conditions have rank {rank}, expected {CUBIC_COUNT}")
    basis = [from_coeff_vector(v, 3, ring) for v in linalg.kernel(rows, field_, 10)]
    return CubicSystem(tuple(basis), tuple(nodes))


def dual_cubic_system(points: Sequence[Sequence[DualScalar]], ring: PolyRing) -> CubicSystem:
    """Cubics through points with coordinates in F_p[ε]/(ε²)."""
    monoms = monomial_basis(ring, 3)
    rows = []
    for pt in points:
        row = []
        for m in monoms:
            value = DualScalar.lift(ring.domain.one)
            for x, e in zip(pt, m):
                if e:
                    value = value * x ** e
            row.append(value)
        rows.append(row)
    kernel = linalg.dual_kernel(rows, len(monoms))
    if len(kernel) != CUBIC_COUNT:
        raise DegenerateNodes(f"{len(kernel)} cubics through the moved nodes, expected {CUBIC_COUNT}")
    return CubicSystem(tuple(DualPoly.lift(from_coeff_vector(v, 3, ring)) for v in kernel), tuple(points))


def quadric_conditions(cubics: Sequence, f, ring4: PolyRing) -> List[List]:
    """28 × 16 matrix: columns are pullbacks of the 15 quadric monomials, then −f."""
    ring2 = cubics[0].ring
    columns = []
    for m in monomial_basis(ring4, 2):
        pullback = None
        for i, e in enumerate(m):
            for _ in range(e):
                pullback = cubics[i] if pullback is None else pullback * cubics[i]
        columns.append(coeff_vector(pullback, 6, ring2))
    columns.append([-c for c in coeff_vector(f, 6, ring2)])
    return [list(row) for row in zip(*columns)]


def canonical_quadrics(f, C: CubicSystem) -> CanonicalCurve:
    """Quadrics Q with Q(c0, ..., c4) ∈ span{f}, as a reduced echelon basis."""
    ring2 = C.basis[0].ring
    field_ = ring_field(ring2)
    ring4 = p4_ring(field_)
    ncols = len(monomial_basis(ring4, 2)) + 1
    dual = C.dual or isinstance(f, DualPoly)
    cubics = [DualPoly.lift(c) for c in C.basis] if dual else list(C.basis)
    if dual:
        f = DualPoly.lift(f)
    rows = quadric_conditions(cubics, f, ring4)
    if dual:
        kernel = linalg.dual_kernel(rows, ncols)
    else:
        kernel = linalg.kernel(rows, field_, ncols)
    if len(kernel) != QUADRIC_COUNT:
        raise UnexpectedKernelDim(f"quadric kernel has dimension {len(kernel)}, expected {QUADRIC_COUNT}")
    quadrics = tuple(from_coeff_vector(v[:-1], 2, ring4) for v in kernel)
    if any(not q for q in quadrics):
        raise UnexpectedKernelDim("a kernel vector has no quadric part")
    return CanonicalCurve(quadrics, CubicSystem(tuple(cubics), C.nodes), f, tuple(v[-1] for v in kernel))


def canonical_curve(model: QuarticModel) -> CanonicalCurve:
    return canonical_quadrics(model.f, cubic_system(model.sextic_nodes))


def jacobian_minors(quadrics: Sequence[PolyElement]) -> List[PolyElement]:
    """All 3×3 minors of the 3×5 Jacobian matrix of the quadrics."""
    J = [gradient(h) for h in quadrics]
    minors = []
    for cols in combinations(range(len(J[0])), 3):
        minors.append(det3([[row[c] for c in cols] for row in J]))
    return minors


def certify_smooth_ci(curve: CanonicalCurve) -> CertReport:
    """The quadrics cut out a smooth canonical curve of genus 5."""
    report = CertReport()
    H = list(curve.quadrics)
    ring4 = H[0].ring
    field_ = ring_field(ring4)
    rank = linalg.rank([coeff_vector(h, 2) for h in H], field_)
    report.add("canonical.independent", rank == QUADRIC_COUNT, f"span of the quadrics has dimension {rank}")

    cubics = list(curve.cubic_system.basis)
    bad = [i for i, (h, lam) in enumerate(zip(H, curve.multipliers))
           if substitute(h, cubics) != curve.sextic.mul_ground(lam)]
    report.add("canonical.pullback", not bad, "each quadric pulls back to a multiple of f" if not bad else f"quadrics {bad} do not")

    I = IdealSpec.of(H, ring4)
    smooth = is_empty_projective(IdealSpec.of(H + jacobian_minors(H), ring4))
    report.add("canonical.smooth", smooth, "Jacobian criterion holds everywhere" if smooth else "singular point on the intersection")

    values = {d: hilbert_value(I, d) for d in (2, 3, 4)}
    linear = all(v == 8 * d - 4 for d, v in values.items())
    report.add("canonical.hilbert", linear, ", ".join(f"H({d}) = {v}" for d, v in values.items()))
    return report


def remix_cubics(C: CubicSystem, M: Sequence[Sequence[int]]) -> CubicSystem:
    """Cubic system with basis c'_i = Σ M_ik c_k."""
    ring = C.basis[0].ring
    field_ = ring_field(ring)
    basis = []
    for row in M:
        basis.append(sum((c.mul_ground(field_(m)) for c, m in zip(C.basis, row) if field_(m)), ring.zero))
    return CubicSystem(tuple(basis), C.nodes)


def random_invertible(n: int, field_: PrimeField, rng: np.random.Generator) -> List[List[int]]:
    while True:
        M = [[int(rng.integers(0, field_.p)) for _ in range(n)] for _ in range(n)]
        if linalg.rank(M, field_) == n:
            return M
