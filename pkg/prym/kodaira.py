"""First-order deformations of the family and the Kodaira-Spencer rank certificate"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.rings import PolyElement

from . import linalg
from .canonical import CanonicalCurve, canonical_curve, canonical_quadrics, dual_cubic_system, random_invertible
from .errors import EpsilonReductionMismatch, NotSingularAtP0, UnexpectedTangentDim
from .geometry import QuarticModel, apply_transform, p2_ring, quartics_with_nodes, x3_layers
from .polys import (
    DualPoly,
    coeff_vector,
    evaluate,
    gradient,
    partial_derivative,
    quadratic_form_matrix,
    quadric_from_matrix,
    ring_field,
    substitute,
)
from .scalars import DualScalar, PrimeField, field_inv, make_rng

MAX_RANK = 45
MIN_FAMILY_ROWS = 12
SL5_LABEL = "sl5"


@dataclass
class TangentVector:
    Fdot: PolyElement
    Pdot: Tuple
    coefficients: Tuple


@dataclass
class TangentBasis:
    """Kernel of the linearized node-at-P₀ conditions in the chart fixing F's scale and P₀'s chart."""

    vectors: List[TangentVector]
    directions: List[PolyElement]
    chart: int
    condition_rank: int

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass
class KSMatrix:
    rows: List[List[int]]
    provenance: List[str]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else MAX_RANK

    def select(self, prefix: str) -> List[List[int]]:
        return [r for r, tag in zip(self.rows, self.provenance) if tag.startswith(prefix)]


@dataclass
class KSCertificate:
    matrix: KSMatrix
    rank: int
    n_family: int
    greedy_rank: int
    trivial_rank: int
    gl3_rank: int
    sl5_rank: int
    tangent_condition_rank: int
    convention: Dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        ok = self.rank == MAX_RANK and self.n_family >= MIN_FAMILY_ROWS and self.greedy_rank == self.rank
        return "pass" if ok else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_family": self.n_family,
            "rank": self.rank,
            "max_rank": MAX_RANK,
            "verdict": self.verdict,
            "rank_check": {"domain_matrix": self.rank, "greedy": self.greedy_rank},
            "trivial_ranks": {"gl3": self.gl3_rank, "sl5": self.sl5_rank, "joint": self.trivial_rank},
            "tangent_condition_rank": self.tangent_condition_rank,
            "shape": list(self.matrix.shape),
            "row_provenance": list(self.matrix.provenance),
            "convention": dict(self.convention),
        }


@dataclass
class KSOptions:
    """Seeded changes that must leave the rank unchanged."""

    seed: int = 0
    remix_tangent: bool = False
    remix_sl5: bool = False
    remix_quadrics: bool = False
    perturb_lift: bool = False
    zero_family: bool = False
    debug: bool = False


# -- the tangent space of B₀ ----------------------------------------------------

def _chart_directions(F: PolyElement, basis: Sequence[PolyElement], field_: PrimeField) -> List[PolyElement]:
    rows = [coeff_vector(F, 4)]
    kept = []
    for b in basis:
        candidate = rows + [coeff_vector(b, 4)]
        if linalg.rank(candidate, field_) > len(rows):
            rows = candidate
            kept.append(b)
    basis_rows = [coeff_vector(b, 4) for b in basis]
    if linalg.rank(basis_rows + [coeff_vector(F, 4)], field_) != linalg.rank(basis_rows, field_):
        raise UnexpectedTangentDim("F is not in the span of the quartic basis")
    return kept


def tangent_space_B0(model: QuarticModel, quartic_basis: Optional[Sequence[PolyElement]] = None) -> TangentBasis:
    """Tangent vectors (Ḟ, Ṗ) to {(F, P₀) : F singular at P₀} inside quartics nodal at P₁..P₅."""
    field_ = model.field
    F = model.F
    if quartic_basis is None:
        quartic_basis = quartics_with_nodes(model.nodes[1:], field_)
    directions = _chart_directions(F, quartic_basis, field_)
    P0 = model.nodes[0]
    j = P0.chart
    free = [i for i in range(4) if i != j]
    point = P0.values()
    grads = gradient(F)
    rows = []
    for k in range(4):
        row = [evaluate(partial_derivative(g, k), point) for g in directions]
        row += [evaluate(partial_derivative(grads[k], i), point) for i in free]
        rows.append(row)
    ncols = len(directions) + len(free)
    cond_rank = linalg.rank(rows, field_, ncols)
    kernel = linalg.kernel(rows, field_, ncols)
    expected = len(quartic_basis) - 1 + 3 - 4
    if cond_rank != 4 or len(kernel) != expected:
        raise UnexpectedTangentDim(f"tangent space has dimension {len(kernel)}, expected {expected} (condition rank {cond_rank})")
    vectors = []
    zero = F.ring.zero
    for v in kernel:
        Fdot = sum((g.mul_ground(c) for g, c in zip(directions, v) if c), zero)
        Pdot = [field_.zero] * 4
        for i, c in zip(free, v[len(directions):]):
            Pdot[i] = c
        vectors.append(TangentVector(Fdot, tuple(Pdot), tuple(v)))
    return TangentBasis(vectors, list(directions), j, cond_rank)


def recombine(basis: TangentBasis, M: Sequence[Sequence[int]]) -> TangentBasis:
    """Tangent basis v'_i = Σ M_ik v_k."""
    field_ = ring_field(basis.directions[0].ring)
    zero = basis.directions[0].ring.zero
    out = []
    for row in M:
        Fdot = sum((v.Fdot.mul_ground(field_(m)) for v, m in zip(basis.vectors, row)), zero)
        Pdot = tuple(sum((v.Pdot[i] * field_(m) for v, m in zip(basis.vectors, row)), field_.zero) for i in range(4))
        coeffs = tuple(sum((v.coefficients[i] * field_(m) for v, m in zip(basis.vectors, row)), field_.zero)
                       for i in range(len(basis.vectors[0].coefficients)))
        out.append(TangentVector(Fdot, Pdot, coeffs))
    return TangentBasis(out, basis.directions, basis.chart, basis.condition_rank)


# -- first-order pipeline --------------------------------------------------------

@dataclass
class FirstOrderResult:
    H_dot: Tuple
    curve: CanonicalCurve
    f: DualPoly
    nodes: List[List[DualScalar]]


def _check(debug: bool, ok: bool, stage: str):
    if debug and not ok:
        raise EpsilonReductionMismatch(f"ε → 0 image differs from the base computation at {stage}")


def _matrix_vector(M, v, field_):
    return [sum((field_(a) * b for a, b in zip(row, v)), field_.zero) for row in M]


def first_order_pipeline(model: QuarticModel, v: TangentVector, base: Optional[CanonicalCurve] = None,
                         debug: bool = False) -> FirstOrderResult:
    """Push (F + εḞ, P₀ + εṖ) through normalization, discriminant, nodes, cubics and quadrics."""
    field_ = model.field
    base = base or canonical_curve(model)
    T = model.transform

    # move P₀ to (0:0:0:1), then absorb the first-order motion of the node
    G = apply_transform(DualPoly(model.F, v.Fdot), T)
    T_inv = linalg.to_matrix(T, field_).inv().to_list()
    w = _matrix_vector(T_inv, v.Pdot, field_)
    ring3 = G.ring
    y = ring3.gens
    images = [DualPoly(y[i], y[3].mul_ground(w[i])) for i in range(3)] + [DualPoly.lift(y[3])]
    H = substitute(G, images)

    base_layers = x3_layers(H.base)
    tangent_layers = x3_layers(H.tangent)
    if tangent_layers.get(4) or tangent_layers.get(3):
        raise NotSingularAtP0("the tangent vector does not keep P0 singular")
    ring2 = p2_ring(field_)
    half = field_inv(field_(2))

    def layer(k):
        return DualPoly(base_layers.get(k, ring2.zero), tangent_layers.get(k, ring2.zero))

    u2, u3, u4 = layer(2), layer(1).scale(half), layer(0)
    _check(debug, (u2.base, u3.base, u4.base) == (model.u2, model.u3, model.u4), "u-forms")
    f = u3 ** 2 - u2 * u4
    _check(debug, f.base == model.f, "discriminant")

    nodes = [_track_node(f, q) for q in model.sextic_nodes]
    if debug:
        for q, pt, P in zip(model.sextic_nodes, nodes, model.nodes[1:]):
            _check(True, [x.a for x in pt] == q.values(), "node tracking")
            _check(True, not evaluate(f, pt), "moved node lies on the sextic")

    C = dual_cubic_system(nodes, ring2)
    _check(debug, C.reduce().basis == base.cubic_system.basis, "cubic system")
    curve = canonical_quadrics(f, C)
    _check(debug, tuple(h.base for h in curve.quadrics) == tuple(base.quadrics), "quadrics")
    return FirstOrderResult(tuple(h.tangent for h in curve.quadrics), curve, f, nodes)


def _track_node(f: DualPoly, q) -> List[DualScalar]:
    """q + εδ with Hess f(q)·δ = −∇ḟ(q) in the affine chart of q."""
    field_ = ring_field(f.ring)
    j = q.chart
    free = [i for i in range(3) if i != j]
    point = q.values()
    grad_base = gradient(f.base)
    hess = [[evaluate(partial_derivative(grad_base[k], l), point) for l in free] for k in free]
    rhs = [-evaluate(partial_derivative(f.tangent, k), point) for k in free]
    delta = linalg.solve(hess, rhs, field_)
    moved = [DualScalar(c, field_.zero) for c in point]
    for i, d in zip(free, delta):
        moved[i] = DualScalar(point[i], field_(d))
    return moved


# -- trivial deformations --------------------------------------------------------

def sl5_basis(rng: Optional[np.random.Generator] = None, field_: Optional[PrimeField] = None) -> List[Tuple[str, List[List[int]]]]:
    """24 traceless 5×5 matrices: off-diagonal units and δ₀₀ − δᵢᵢ, optionally recombined at random."""
    basis = []
    for i in range(5):
        for j in range(5):
            if i != j:
                D = [[0] * 5 for _ in range(5)]
                D[i][j] = 1
                basis.append((f"E{i}{j}", D))
    for i in range(1, 5):
        D = [[0] * 5 for _ in range(5)]
        D[0][0], D[i][i] = 1, -1
        basis.append((f"D{i}", D))
    if rng is None:
        return basis
    M = random_invertible(len(basis), field_, rng)
    mixed = []
    for k, row in enumerate(M):
        D = [[sum(m * B[a][b] for m, (_, B) in zip(row, basis)) % field_.p for b in range(5)] for a in range(5)]
        mixed.append((f"mix{k}", D))
    return mixed


def _sl_action(Q, D, field_):
    """ᵗD·Q + Q·D."""
    n = len(Q)
    out = [[field_.zero] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            s = field_.zero
            for k in range(n):
                s = s + field_(D[k][a]) * Q[k][b] + Q[a][k] * field_(D[k][b])
            out[a][b] = s
    return out


def trivial_rows(quadrics: Sequence[PolyElement], sl5: Optional[List] = None) -> Tuple[List[List], List[str]]:
    """9 gl(3) rows and 24 sl(5) rows of coefficient vectors of length 45."""
    ring4 = quadrics[0].ring
    field_ = ring_field(ring4)
    vecs = [coeff_vector(h, 2) for h in quadrics]
    width = len(vecs[0])
    zero = [field_.zero] * width
    rows, tags = [], []
    for i, v in enumerate(vecs):
        for j in range(len(quadrics)):
            rows.append([x for k in range(len(quadrics)) for x in (v if k == j else zero)])
            tags.append(f"gl3:H{i + 1}->{j + 1}")
    Qs = [quadratic_form_matrix(h) for h in quadrics]
    for label, D in (sl5 if sl5 is not None else sl5_basis()):
        row = []
        for Q in Qs:
            row.extend(coeff_vector(quadric_from_matrix(_sl_action(Q, D, field_), ring4), 2))
        rows.append(row)
        tags.append(f"{SL5_LABEL}:{label}")
    return rows, tags


# -- assembly -----------------------------------------------------------------

def _mix(polys: Sequence, M, field_):
    zero = polys[0].ring.zero
    return tuple(sum((p.mul_ground(field_(m)) for p, m in zip(polys, row)), zero) for row in M)


def assemble_and_rank(model: QuarticModel, options: Optional[KSOptions] = None,
                      base: Optional[CanonicalCurve] = None, tangent: Optional[TangentBasis] = None) -> KSCertificate:
    options = options or KSOptions()
    field_ = model.field
    rng = make_rng(options.seed)
    base = base or canonical_curve(model)
    tangent = tangent or tangent_space_B0(model)
    if options.remix_tangent:
        tangent = recombine(tangent, random_invertible(len(tangent), field_, rng))

    H = tuple(base.quadrics)
    M = random_invertible(3, field_, rng) if options.remix_quadrics else None
    if M is not None:
        H = _mix(H, M, field_)

    rows, tags = [], []
    for j, v in enumerate(tangent.vectors, start=1):
        H_dot = first_order_pipeline(model, v, base, debug=options.debug).H_dot
        if M is not None:
            H_dot = _mix(H_dot, M, field_)
        if options.perturb_lift:
            shift = [[int(rng.integers(0, field_.p)) for _ in range(3)] for _ in range(3)]
            H_dot = tuple(h + s for h, s in zip(H_dot, _mix(H, shift, field_)))
        row = [x for h in H_dot for x in coeff_vector(h, 2)]
        rows.append([field_.zero] * len(row) if options.zero_family else row)
        tags.append(f"family:{j}")

    sl5 = sl5_basis(rng, field_) if options.remix_sl5 else None
    trivial, trivial_tags = trivial_rows(H, sl5)
    rows += trivial
    tags += trivial_tags

    int_rows = [[field_.residue(x) for x in r] for r in rows]
    matrix = KSMatrix(int_rows, tags)
    gl3 = matrix.select("gl3")
    sl5_rows = matrix.select(SL5_LABEL)
    return KSCertificate(
        matrix=matrix,
        rank=linalg.rank(int_rows, field_, MAX_RANK),
        n_family=len(tangent),
        greedy_rank=linalg.greedy_rank(int_rows, field_.p),
        trivial_rank=linalg.rank(gl3 + sl5_rows, field_, MAX_RANK),
        gl3_rank=linalg.rank(gl3, field_, MAX_RANK),
        sl5_rank=linalg.rank(sl5_rows, field_, MAX_RANK),
        tangent_condition_rank=tangent.condition_rank,
        convention={
            "u3_reading": model.convention,
            "P1P2": [list(n.coords) for n in model.nodes[1:3]],
            "sl5_basis": "off-diagonal units and d00 - dii for i = 1..4" if not options.remix_sl5 else "random recombination",
            "family_rows": "all tangent directions",
        },
    )
