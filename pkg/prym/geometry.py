"""Nodal quartic surfaces, their discriminant sextics, and the certificates around them"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .errors import (
    DegenerateNodes,
    IncompatibleDegrees,
    Inconclusive,
    InputError,
    MathematicalFailure,
    NoGeneralMemberFound,
    NotOrdinaryNode,
    NotSingularAtP0,
    PointNotOnVariety,
    PositiveDimensional,
)
from .ideals import (
    IdealSpec,
    groebner,
    is_empty_projective,
    is_reduced_projective,
    points_ideal,
    projective_degree,
    saturate_irrelevant,
    vanishing_piece,
)
from .polys import (
    evaluate,
    format_poly,
    gradient,
    graded_part,
    homogeneous_degree,
    is_homogeneous,
    poly_ring,
    quadratic_form_matrix,
    ring_field,
    substitute,
    to_ring,
    variables,
)
from .scalars import PrimeField, Prime, field_inv, make_rng


def p3_ring(field_: PrimeField) -> PolyRing:
    return poly_ring(variables("x", 4), field_)


def p2_ring(field_: PrimeField) -> PolyRing:
    return poly_ring(variables("x", 3), field_)


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^n over F_p, scaled so its last nonzero coordinate is 1."""

    coords: Tuple[int, ...]
    p: int

    @classmethod
    def of(cls, coords: Sequence, field_: PrimeField) -> "ProjPoint":
        values = [field_(c) for c in coords]
        nonzero = [i for i, v in enumerate(values) if v]
        if not nonzero:
            raise InputError("the zero vector is not a projective point")
        inv = field_inv(values[nonzero[-1]])
        return cls(tuple(field_.residue(v * inv) for v in values), field_.p)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def chart(self) -> int:
        """Index of the last nonzero coordinate (equal to 1)."""
        return max(i for i, c in enumerate(self.coords) if c)

    def values(self) -> List:
        field_ = PrimeField(self.p)
        return [field_(c) for c in self.coords]

    def project(self) -> "ProjPoint":
        """(x0 : x1 : x2) of a point of P³ other than (0:0:0:1)."""
        head = self.coords[:3]
        if not any(head):
            raise DegenerateNodes("cannot project the centre of projection")
        return ProjPoint.of(head, PrimeField(self.p))

    def __str__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coords) + ")"


class Singularity(str, Enum):
    SMOOTH = "smooth"
    ORDINARY_NODE = "ordinary_node"
    WORSE = "worse"


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Check:
    name: str
    status: Status
    detail: str = ""
    mandatory: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": self.status.value, "detail": self.detail}


@dataclass
class CertReport:
    """Named check results; the verdict passes iff every mandatory check passes."""

    checks: List[Check] = field(default_factory=list)

    def add(self, name: str, passed: Optional[bool], detail: str = "", mandatory: bool = True) -> Check:
        status = Status.INCONCLUSIVE if passed is None else (Status.PASS if passed else Status.FAIL)
        check = Check(name, status, detail, mandatory)
        self.checks.append(check)
        return check

    def extend(self, other: "CertReport") -> "CertReport":
        self.checks.extend(other.checks)
        return self

    def get(self, name: str) -> Optional[Check]:
        return next((c for c in self.checks if c.name == name), None)

    def failed(self) -> List[Check]:
        return [c for c in self.checks if c.mandatory and c.status != Status.PASS]

    @property
    def verdict(self) -> Status:
        bad = self.failed()
        if not bad:
            return Status.PASS
        if any(c.status == Status.FAIL for c in bad):
            return Status.FAIL
        return Status.INCONCLUSIVE

    @property
    def passed(self) -> bool:
        return self.verdict == Status.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {"checks": [c.to_dict() for c in self.checks], "verdict": self.verdict.value}


@dataclass
class QuarticModel:
    """A quartic F with six marked nodes and its conic-bundle data relative to P₀ = nodes[0].

    F is kept in the input coordinates; u2, u3, u4, f and sextic_nodes are
    computed after the change of coordinates `transform` sending (0:0:0:1)
    to P₀, so that F∘transform = u2·x3² + 2·u3·x3 + u4.
    """

    prime: Prime
    F: PolyElement
    nodes: List[ProjPoint]
    u2: PolyElement
    u3: PolyElement
    u4: PolyElement
    f: PolyElement
    sextic_nodes: List[ProjPoint]
    transform: List[List[int]]
    convention: str = "half"
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.prime)

    @property
    def normalized_F(self) -> PolyElement:
        return assemble_quartic(self.u2, self.u3, self.u4, p3_ring(self.field))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "prime": self.prime.value,
            "nodes": [list(n.coords) for n in self.nodes],
            "F": format_poly(self.F),
            "u2": format_poly(self.u2),
            "u3": format_poly(self.u3),
            "u4": format_poly(self.u4),
            "f": format_poly(self.f),
            "sextic_nodes": [list(n.coords) for n in self.sextic_nodes],
            "transform": self.transform,
            "convention": self.convention,
            "provenance": dict(self.provenance),
        }


# -- configurations of points --------------------------------------------------

def _det(rows: Sequence[Sequence[int]], field_: PrimeField):
    return linalg.to_matrix(rows, field_).det()


def _general_position(points: Sequence[ProjPoint], size: int) -> bool:
    if any(pt.dim != size - 1 for pt in points):
        raise InputError(f"expected points of P^{size - 1}")
    if len(points) < size:
        return False
    field_ = points[0].field
    return all(_det([pt.coords for pt in subset], field_) for subset in combinations(points, size))


def general_position_p3(points: Sequence[ProjPoint]) -> bool:
    """Every four of the points span P³."""
    return _general_position(points, 4)


def general_position_p2(points: Sequence[ProjPoint]) -> bool:
    """No three of the points are collinear."""
    return _general_position(points, 3)


def quartics_with_nodes(points: Sequence[ProjPoint], field_: Optional[PrimeField] = None) -> List[PolyElement]:
    """Basis of the quartics singular at every point (degree-4 part of ⋂ pᵢ²)."""
    if len(set(points)) != len(points):
        raise DegenerateNodes("repeated node")
    field_ = field_ or points[0].field
    return vanishing_piece([pt.coords for pt in points], p3_ring(field_), 4, multiplicity=2)


# -- normalization and the conic-bundle structure ------------------------------------

def node_transform(P0: ProjPoint) -> List[List[int]]:
    """Invertible T with T·e₃ = P₀: the identity with a column replaced by P₀."""
    n = len(P0.coords)
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    j = P0.chart
    if j != n - 1:
        # swap roles of e_j and e_{n-1} so that the replaced column keeps T invertible
        T[j][j], T[n - 1][j] = 0, 1
    for i in range(n):
        T[i][n - 1] = P0.coords[i]
    return T


def apply_transform(F, T: Sequence[Sequence[int]]):
    """F(T·x)."""
    ring = F.ring
    field_ = ring_field(ring)
    images = []
    for row in T:
        images.append(sum((g.mul_ground(field_(c)) for g, c in zip(ring.gens, row) if c % field_.p), ring.zero))
    return substitute(F, images)


def transform_point(T: Sequence[Sequence[int]], pt: ProjPoint) -> ProjPoint:
    """T⁻¹·pt, the coordinates of pt after the change of variables x = T·y."""
    field_ = pt.field
    inv = linalg.to_matrix(T, field_).inv().to_list()
    coords = [sum((a * b for a, b in zip(row, pt.values())), field_.zero) for row in inv]
    return ProjPoint.of(coords, field_)


def normalize_node(F: PolyElement, P0: ProjPoint) -> Tuple[PolyElement, List[List[int]]]:
    """(F∘T, T) with T·(0:0:0:1) = P₀."""
    T = node_transform(P0)
    return apply_transform(F, T), T


def x3_layers(G: PolyElement, ring2: Optional[PolyRing] = None) -> Dict[int, PolyElement]:
    """Coefficients of powers of the last variable, as forms in the others."""
    ring2 = ring2 or p2_ring(ring_field(G.ring))
    layers: Dict[int, Dict] = {}
    for m, c in G.items():
        layers.setdefault(m[-1], {})[m[:-1]] = c
    return {k: ring2.from_dict(v) for k, v in layers.items()}


def split_quartic(F: PolyElement, P0: ProjPoint) -> Tuple[PolyElement, PolyElement, PolyElement]:
    """(u2, u3, u4) with F∘T = u2·x3² + 2·u3·x3 + u4."""
    if homogeneous_degree(F) != 4:
        raise IncompatibleDegrees("expected a quartic form")
    G, _ = normalize_node(F, P0)
    return split_normalized(G)


def split_normalized(G: PolyElement) -> Tuple[PolyElement, PolyElement, PolyElement]:
    layers = x3_layers(G)
    ring2 = p2_ring(ring_field(G.ring))
    if layers.get(4) or layers.get(3):
        raise NotSingularAtP0("the quartic has nonzero x3^4 or x3^3 terms at the node")
    u2 = layers.get(2, ring2.zero)
    u3 = layers.get(1, ring2.zero).mul_ground(field_inv(ring2.domain(2)))
    u4 = layers.get(0, ring2.zero)
    if linalg.rank(quadratic_form_matrix(u2), ring_field(ring2)) < 3:
        raise NotOrdinaryNode("tangent cone u2 is a degenerate conic")
    return u2, u3, u4


def assemble_quartic(u2, u3, u4, ring3: PolyRing) -> PolyElement:
    """u2·x3² + 2·u3·x3 + u4 in the ring of P³."""
    x3 = ring3.gens[3]
    lift = lambda u: to_ring(u, ring3) if u else ring3.zero
    return lift(u2) * x3 ** 2 + lift(u3) * x3 * 2 + lift(u4)


def discriminant_sextic(u2: PolyElement, u3: PolyElement, u4: PolyElement) -> PolyElement:
    """f = u3² − u2·u4."""
    for u, d in ((u2, 2), (u3, 3), (u4, 4)):
        if not is_homogeneous(u, d):
            raise IncompatibleDegrees(f"expected a form of degree {d}, got {format_poly(u)}")
    return u3 ** 2 - u2 * u4


def classify_singular_point(g: PolyElement, q: ProjPoint) -> Singularity:
    n = g.ring.ngens
    if len(q.coords) != n:
        raise InputError("point and polynomial live in different spaces")
    j = q.chart
    field_ = ring_field(g.ring)
    local_ring = poly_ring(variables("t", n - 1), field_)
    images, k = [], 0
    for i, c in enumerate(q.values()):
        if i == j:
            images.append(local_ring.one)
        else:
            images.append(local_ring.gens[k] + c)
            k += 1
    local = substitute(g, images)
    if graded_part(local, 0):
        raise PointNotOnVariety(f"{q} is not on {format_poly(g)}")
    if graded_part(local, 1):
        return Singularity.SMOOTH
    quad = graded_part(local, 2)
    if linalg.rank(quadratic_form_matrix(quad), field_) == n - 1:
        return Singularity.ORDINARY_NODE
    return Singularity.WORSE


def jacobian_ideal(g: PolyElement) -> IdealSpec:
    return IdealSpec.of([g] + gradient(g), g.ring)


# -- certificates ------------------------------------------------------------------

def _classify_all(report: CertReport, name: str, g: PolyElement, points: Sequence[ProjPoint]):
    kinds = []
    for pt in points:
        try:
            kinds.append(classify_singular_point(g, pt).value)
        except PointNotOnVariety:
            kinds.append("not_on_variety")
    report.add(name, all(k == Singularity.ORDINARY_NODE.value for k in kinds),
               ", ".join(f"{pt}: {k}" for pt, k in zip(points, kinds)))


def _degree_check(report: CertReport, name: str, S: IdealSpec, expected: int):
    try:
        degree = projective_degree(S, saturated=True)
    except PositiveDimensional as exc:
        report.add(name, False, f"positive-dimensional: {exc}")
        return False
    report.add(name, degree == expected, f"degree {degree}, expected {expected}")
    return degree == expected


def certify_singular_locus(F: PolyElement, nodes: Sequence[ProjPoint]) -> CertReport:
    """Sing(F) is exactly the listed points, each an ordinary double point."""
    report = CertReport()
    S = saturate_irrelevant(jacobian_ideal(F))
    _degree_check(report, "surface.singular_degree", S, len(nodes))
    same = groebner(S) == groebner(points_ideal([n.coords for n in nodes], F.ring))
    report.add("surface.singular_support", same, "saturated Jacobian ideal equals the ideal of the nodes" if same else "singular scheme differs from the node set")
    _classify_all(report, "surface.node_types", F, nodes)
    return report


def certify_sextic_nodes(f: PolyElement, expected: Sequence[ProjPoint], u_forms: Optional[Tuple] = None,
                         rng: Optional[np.random.Generator] = None, trials: int = 8) -> CertReport:
    """Sing(f) is reduced, of length 5, supported on `expected`, with ordinary nodes."""
    report = CertReport()
    S = saturate_irrelevant(jacobian_ideal(f))
    if _degree_check(report, "sextic.singular_degree", S, len(expected)):
        try:
            reduced = is_reduced_projective(S, rng, trials)
            report.add("sextic.singular_reduced", reduced, "singular scheme is reduced" if reduced else "non-reduced singular scheme")
        except Inconclusive as exc:
            report.add("sextic.singular_reduced", None, str(exc))
    else:
        report.add("sextic.singular_reduced", False, "skipped: singular scheme has the wrong size")
    same = groebner(S) == groebner(points_ideal([q.coords for q in expected], f.ring))
    report.add("sextic.singular_support", same, ", ".join(str(q) for q in expected))
    _classify_all(report, "sextic.node_types", f, expected)
    if u_forms is not None:
        empty = is_empty_projective(IdealSpec.of(list(u_forms), f.ring))
        report.add("sextic.genericity", empty, "u2, u3, u4 have no common zero" if empty else "u2, u3, u4 vanish simultaneously")
    return report


def certify_contact_conic(u2: PolyElement, u3: PolyElement, f: PolyElement,
                          rng: Optional[np.random.Generator] = None, trials: int = 8) -> CertReport:
    """The conic u2 = 0 meets the sextic in six reduced contact points away from its nodes."""
    report = CertReport()
    ring = f.ring
    same = groebner(IdealSpec.of([u2, f], ring)) == groebner(IdealSpec.of([u2, u3 ** 2], ring))
    report.add("contact.ideal_identity", same, "(u2, f) = (u2, u3^2)")
    contact = IdealSpec.of([u2, u3], ring)
    S = saturate_irrelevant(contact)
    if _degree_check(report, "contact.degree", S, 6):
        try:
            reduced = is_reduced_projective(S, rng, trials)
            report.add("contact.reduced", reduced, "six distinct contact points" if reduced else "non-reduced contact")
        except Inconclusive as exc:
            report.add("contact.reduced", None, str(exc))
    else:
        report.add("contact.reduced", False, "skipped: contact scheme has the wrong size")
    away = is_empty_projective(contact + jacobian_ideal(f))
    report.add("contact.away_from_nodes", away, "no contact point is singular on f" if away else "a contact point is a node of f")
    return report


def fiber_matrix(u2, u3, u4) -> List[List[PolyElement]]:
    """Matrix of -z2² + z1²·u2 + 2·z1·z0·u3 + z0²·u4 in (z0, z1, z2)."""
    ring = u2.ring
    zero, minus_one = ring.zero, -ring.one
    return [[u4, u3, zero], [u3, u2, zero], [zero, zero, minus_one]]


def det3(M) -> PolyElement:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _minors2(M) -> List[PolyElement]:
    out = []
    for r in combinations(range(3), 2):
        for c in combinations(range(3), 2):
            out.append(M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]])
    return out


def conic_bundle_fiber_check(u2, u3, u4, f) -> CertReport:
    """Fibers over the sextic are line pairs: det M = unit·f and rank M never drops to 1."""
    report = CertReport()
    M = fiber_matrix(u2, u3, u4)
    det = det3(M)
    ratio = None
    if f and det:
        ratio = det.LC * field_inv(f.LC)
        matches = det == f.mul_ground(ratio)
    else:
        matches = not f and not det
    report.add("fiber.determinant", matches, f"det M = {ring_field(f.ring).symmetric(ratio)} * f" if matches else "det M is not a unit multiple of f")
    empty = is_empty_projective(IdealSpec.of([f] + _minors2(M), f.ring))
    report.add("fiber.rank_two", empty, "fibers over the sextic are line pairs" if empty else "a fiber conic is a double line")
    return report


def projection_provenance(model: QuarticModel) -> CertReport:
    """The projections of P₁..P₅ are singular points of the sextic."""
    report = CertReport()
    bad = []
    for q in model.sextic_nodes:
        values = [evaluate(model.f, q.values())] + [evaluate(d, q.values()) for d in gradient(model.f)]
        if any(values):
            bad.append(str(q))
    report.add("sextic.projected_nodes", not bad, "all projected nodes are singular" if not bad else "not singular: " + ", ".join(bad))
    return report


def certify_polynomial_identity(model: QuarticModel) -> CertReport:
    """u2·F = (u2·x3 + u3)² − f on the normalized quartic."""
    report = CertReport()
    ring3 = p3_ring(model.field)
    u2, u3, f = (to_ring(u, ring3) for u in (model.u2, model.u3, model.f))
    lhs = u2 * model.normalized_F
    rhs = (u2 * ring3.gens[3] + u3) ** 2 - f
    report.add("quartic.discriminant_identity", lhs == rhs, "u2 F = (u2 x3 + u3)^2 - f")
    return report


def sextic_genus(node_count: int, degree: int = 6) -> int:
    """Geometric genus of a plane curve of the given degree with only ordinary nodes."""
    return (degree - 1) * (degree - 2) // 2 - node_count


def dimension_ladder(nodes: Sequence[ProjPoint]) -> Dict[str, int]:
    """Dimensions behind the parameter count: quartics through the nodes, the family, and its image."""
    field_ = nodes[0].field
    five = len(quartics_with_nodes(nodes[1:], field_))
    six = len(quartics_with_nodes(nodes, field_))
    return {
        "quartics_singular_at_five_nodes": five,
        "quartics_singular_at_six_nodes": six,
        "conditions_from_p0": five - six,
        "family_dimension": (five - 1) + 3 - (five - six),
    }


# -- building models ------------------------------------------------------------

def model_from_quartic(F: PolyElement, nodes: Sequence[ProjPoint], prime: Prime,
                       convention: str = "half", provenance: Optional[Dict[str, Any]] = None) -> QuarticModel:
    if len(nodes) != 6:
        raise InputError("a model needs exactly six nodes")
    for pt in nodes:
        if any(evaluate(g, pt.values()) for g in [F] + gradient(F)):
            raise NotSingularAtP0(f"F is not singular at {pt}") if pt == nodes[0] else DegenerateNodes(f"F is not singular at {pt}")
    G, T = normalize_node(F, nodes[0])
    u2, u3, u4 = split_normalized(G)
    f = discriminant_sextic(u2, u3, u4)
    sextic_nodes = [transform_point(T, pt).project() for pt in nodes[1:]]
    return QuarticModel(prime, F, list(nodes), u2, u3, u4, f, sextic_nodes,
                        [[int(c) for c in row] for row in T], convention, dict(provenance or {}))


def model_from_forms(u2, u3, u4, nodes: Sequence[ProjPoint], prime: Prime, convention: str = "half",
                     provenance: Optional[Dict[str, Any]] = None) -> QuarticModel:
    """Rebuild F from printed u-forms relative to P₀ = (0:0:0:1).

    With convention "full" the printed u3 is the whole x3-coefficient of F.
    """
    field_ = PrimeField(prime)
    if nodes[0] != ProjPoint.of((0, 0, 0, 1), field_):
        raise InputError("u-forms are given relative to P0 = (0:0:0:1)")
    if convention == "full":
        u3 = u3.mul_ground(field_inv(field_(2)))
    elif convention != "half":
        raise InputError(f"unknown convention {convention!r}")
    F = assemble_quartic(u2, u3, u4, p3_ring(field_))
    return model_from_quartic(F, nodes, prime, convention, provenance)


def _sextic_singular_at(f: PolyElement, points: Sequence[ProjPoint]) -> bool:
    return all(not evaluate(g, q.values()) for q in points for g in [f] + gradient(f))


def resolve_convention(u2, u3, u4, nodes: Sequence[ProjPoint], prime: Prime,
                       expected_sextic_nodes: Sequence[ProjPoint]) -> QuarticModel:
    """Try both readings of the printed u3 and keep the one matching the listed sextic nodes."""
    candidates, failures = [], []
    for convention in ("half", "full"):
        try:
            model = model_from_forms(u2, u3, u4, nodes, prime, convention)
        except (DegenerateNodes, NotSingularAtP0, NotOrdinaryNode) as exc:
            failures.append(exc)
            continue
        if _sextic_singular_at(model.f, expected_sextic_nodes):
            candidates.append(model)
    if len(failures) == 2:
        raise failures[0]
    if len(candidates) == 2:
        candidates = [m for m in candidates
                      if certify_sextic_nodes(m.f, expected_sextic_nodes).get("sextic.singular_support").status == Status.PASS]
    if len(candidates) != 1:
        raise InputError(f"{len(candidates)} readings of u3 fit the listed nodes; expected exactly one")
    return candidates[0]


def certify_model(model: QuarticModel, rng: Optional[np.random.Generator] = None, trials: int = 8) -> CertReport:
    """All geometric certificates for a model."""
    rng = rng if rng is not None else make_rng(0)
    report = CertReport()
    report.add("nodes.general_position_p3", general_position_p3(model.nodes[1:]), "P1..P5 span P^3 four at a time")
    report.add("nodes.general_position_p2", general_position_p2(model.sextic_nodes), "no three sextic nodes collinear")
    report.extend(certify_polynomial_identity(model))
    report.extend(certify_singular_locus(model.F, model.nodes))
    report.extend(projection_provenance(model))
    report.extend(certify_sextic_nodes(model.f, model.sextic_nodes, (model.u2, model.u3, model.u4), rng, trials))
    report.extend(certify_contact_conic(model.u2, model.u3, model.f, rng, trials))
    report.extend(conic_bundle_fiber_check(model.u2, model.u3, model.u4, model.f))
    genus = sextic_genus(len(model.sextic_nodes))
    report.add("sextic.genus", genus == 5, f"geometric genus {genus}")
    return report


Acceptance = Callable[[QuarticModel], Optional[str]]


def random_quartic(prime: Prime, seed: int = 0, max_tries: int = 50,
                   nodes: Optional[Sequence[ProjPoint]] = None, trials: int = 8,
                   accept: Optional[Acceptance] = None) -> Tuple[QuarticModel, CertReport]:
    """Draw quartics singular at the six nodes until one passes every geometric certificate.

    `accept` may add a further condition: it returns None to keep the model
    or a reason to move on to the next try. Every rejected try is listed in
    the accepted model's provenance under "rejected".
    """
    from .fixtures import paper_nodes

    field_ = PrimeField(prime)
    nodes = list(nodes) if nodes is not None else paper_nodes(field_)
    basis = quartics_with_nodes(nodes, field_)
    rng = make_rng(seed)
    rejected: List[Dict[str, Any]] = []
    for attempt in range(1, max_tries + 1):
        coeffs = [field_.random(rng) for _ in basis]
        F = sum((b.mul_ground(c) for b, c in zip(basis, coeffs)), p3_ring(field_).zero)
        if not F:
            rejected.append({"try": attempt, "reason": "zero quartic"})
            continue
        try:
            model = model_from_quartic(F, nodes, prime, provenance={"seed": seed, "tries": attempt, "rng": "numpy.PCG64"})
        except (NotOrdinaryNode, NotSingularAtP0, DegenerateNodes) as exc:
            rejected.append({"try": attempt, "reason": f"{type(exc).__name__}: {exc}"})
            continue
        report = certify_model(model, rng, trials)
        if not report.passed:
            rejected.append({"try": attempt, "reason": "failed " + ", ".join(c.name for c in report.failed())})
            continue
        if accept is not None:
            try:
                reason = accept(model)
            except MathematicalFailure as exc:
                reason = f"{type(exc).__name__}: {exc}"
            if reason is not None:
                rejected.append({"try": attempt, "reason": reason})
                continue
        model.provenance["rejected"] = rejected
        return model, report
    raise NoGeneralMemberFound(f"no quartic passed all certificates in {max_tries} tries (seed {seed})")
