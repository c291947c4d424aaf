"""Gröbner-basis machinery over F_p

Buchberger bases come from sympy.polys.groebnertools; everything built on
top (elimination, intersection, saturation, Hilbert values, zero-dimensional
degree and reducedness) lives here.
"""

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.groebnertools import groebner as _sympy_groebner
from sympy.polys.groebnertools import is_groebner, is_reduced
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .errors import Inconclusive, IncompatibleVariables, NotHomogeneous, PositiveDimensional
from .polys import (
    GREVLEX,
    MonomialOrder,
    from_coeff_vector,
    is_homogeneous,
    monomial_basis,
    poly_ring,
    ring_field,
    to_ring,
    var_names,
)
from .scalars import make_rng

TAG = "t_"


@dataclass(frozen=True)
class IdealSpec:
    """Generators of an ideal in a fixed polynomial ring."""

    ring: PolyRing
    generators: Tuple[PolyElement, ...]

    @classmethod
    def of(cls, generators: Iterable[PolyElement], ring: Optional[PolyRing] = None) -> "IdealSpec":
        gens = list(generators)
        ring = ring or (gens[0].ring if gens else None)
        if ring is None:
            raise IncompatibleVariables("cannot infer the ring of an empty ideal")
        for g in gens:
            if g.ring != ring:
                if var_names(g.ring) != var_names(ring):
                    raise IncompatibleVariables(f"generator over {var_names(g.ring)} in ideal over {var_names(ring)}")
        gens = tuple(to_ring(g, ring) for g in gens if g)
        return cls(ring, gens)

    @property
    def homogeneous(self) -> bool:
        return all(is_homogeneous(g) for g in self.generators)

    @property
    def nvars(self) -> int:
        return self.ring.ngens

    def __add__(self, other: "IdealSpec") -> "IdealSpec":
        if var_names(other.ring) != var_names(self.ring):
            raise IncompatibleVariables("sum of ideals over different variables")
        return IdealSpec.of(self.generators + tuple(to_ring(g, self.ring) for g in other.generators), self.ring)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Gröbner basis sorted by descending leading monomial."""

    order: MonomialOrder
    elements: Tuple[PolyElement, ...]
    source: IdealSpec = field(compare=False, repr=False)

    @property
    def ring(self) -> PolyRing:
        return self.source.ring if not self.elements else self.elements[0].ring

    @property
    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0] == self.elements[0].ring.one

    @property
    def is_zero(self) -> bool:
        return not self.elements

    def leading_monomials(self) -> List[Tuple[int, ...]]:
        return [g.LM for g in self.elements]

    def normal_form(self, f: PolyElement) -> PolyElement:
        return normal_form(f, self)

    def contains(self, f: PolyElement) -> bool:
        return not self.normal_form(f)

    def verify(self) -> bool:
        """Buchberger criterion, reducedness, and membership of every source generator."""
        G = list(self.elements)
        if not G:
            return not self.source.generators
        ring = G[0].ring
        if not is_groebner(G, ring) or not is_reduced(list(G), ring):
            return False
        return all(not self.normal_form(g) for g in self.source.generators)

    def as_ideal(self) -> IdealSpec:
        return IdealSpec.of(self.elements, self.ring)


def groebner(I: IdealSpec, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    ring = poly_ring(var_names(I.ring), ring_field(I.ring), order)
    gens = [to_ring(g, ring) for g in I.generators]
    if not gens:
        return GroebnerBasis(order, (), I)
    elements = _sympy_groebner(gens, ring, method="buchberger")
    return GroebnerBasis(order, tuple(elements), I)


def normal_form(f: PolyElement, G: GroebnerBasis) -> PolyElement:
    if not G.elements:
        return f
    ring = G.elements[0].ring
    return to_ring(f, ring).rem(list(G.elements))


def _relabel(f: PolyElement, ring: PolyRing, positions: Sequence[int]) -> PolyElement:
    """Map f into `ring`, sending variable i of f to variable positions[i]."""
    terms = {}
    n = ring.ngens
    for monom, coeff in f.items():
        e = [0] * n
        for i, k in enumerate(monom):
            if k:
                e[positions[i]] += k
        terms[tuple(e)] = coeff
    return ring.from_dict(terms)


def eliminate(I: IdealSpec, vars_to_remove: Iterable[str]) -> IdealSpec:
    """I ∩ K[remaining variables], read off a block-order basis."""
    names = var_names(I.ring)
    drop = [v for v in names if v in set(vars_to_remove)]
    unknown = set(vars_to_remove) - set(names)
    if unknown:
        raise IncompatibleVariables(f"cannot eliminate unknown variables {sorted(unknown)}")
    if not drop:
        return IdealSpec.of(groebner(I).elements, I.ring)
    keep = [v for v in names if v not in drop]
    field_ = ring_field(I.ring)
    block = poly_ring(drop + keep, field_, MonomialOrder("block", len(drop)))
    positions = [(drop + keep).index(v) for v in names]
    G = groebner(IdealSpec.of([_relabel(g, block, positions) for g in I.generators], block), MonomialOrder("block", len(drop)))
    target = poly_ring(keep, field_, GREVLEX)
    k = len(drop)
    out = []
    for g in G.elements:
        if all(not any(m[:k]) for m in g.keys()):
            out.append(target.from_dict({m[k:]: c for m, c in g.items()}))
    return IdealSpec.of(out, target)


def _with_tag(ring: PolyRing) -> Tuple[PolyRing, PolyElement, List[int]]:
    names = var_names(ring)
    tagged = poly_ring((TAG,) + names, ring_field(ring), GREVLEX)
    return tagged, tagged.gens[0], list(range(1, len(names) + 1))


def intersect(I: IdealSpec, J: IdealSpec) -> IdealSpec:
    """I ∩ J = (t·I + (1 − t)·J) ∩ K[x]."""
    if var_names(I.ring) != var_names(J.ring):
        raise IncompatibleVariables("intersection of ideals over different variables")
    if not I.generators or not J.generators:
        return IdealSpec.of([], I.ring)
    R, t, pos = _with_tag(I.ring)
    gens = [t * _relabel(f, R, pos) for f in I.generators]
    gens += [(1 - t) * _relabel(g, R, pos) for g in J.generators]
    return _back(eliminate(IdealSpec.of(gens, R), [TAG]), I.ring)


def _back(I: IdealSpec, ring: PolyRing) -> IdealSpec:
    return IdealSpec.of([to_ring(g, ring) for g in I.generators], ring)


def _single_variable(g: PolyElement) -> Optional[int]:
    if len(g) != 1:
        return None
    (monom,) = g.keys()
    hits = [i for i, e in enumerate(monom) if e]
    return hits[0] if len(hits) == 1 else None


def saturate(I: IdealSpec, g: PolyElement, method: str = "auto") -> IdealSpec:
    """I : g^∞.

    For homogeneous I and g a power of a variable the grevlex basis with that
    variable last is divided through by its powers; otherwise the tag variable
    construction (I + (1 − t·g)) ∩ K[x] is used.
    """
    if not g:
        raise ValueError("cannot saturate by zero")
    g = to_ring(g, I.ring)
    if g.is_ground:
        return I
    var = _single_variable(g)
    if method == "auto" and var is not None and I.homogeneous:
        return _saturate_by_variable(I, var)
    R, t, pos = _with_tag(I.ring)
    gens = [_relabel(f, R, pos) for f in I.generators] + [1 - t * _relabel(g, R, pos)]
    return _back(eliminate(IdealSpec.of(gens, R), [TAG]), I.ring)


def _saturate_by_variable(I: IdealSpec, var: int) -> IdealSpec:
    names = list(var_names(I.ring))
    order = names[:var] + names[var + 1:] + [names[var]]
    R = poly_ring(order, ring_field(I.ring), GREVLEX)
    G = groebner(IdealSpec.of([to_ring(f, R) for f in I.generators], R))
    last = R.ngens - 1
    out = []
    for h in G.elements:
        k = min(m[last] for m in h.keys())
        if k:
            h = R.from_dict({m[:last] + (m[last] - k,): c for m, c in h.items()})
        out.append(h)
    return _back(IdealSpec.of(out, R), I.ring)


def saturate_irrelevant(I: IdealSpec, method: str = "auto") -> IdealSpec:
    """I : m^∞ = ⋂ᵢ (I : xᵢ^∞) for the irrelevant ideal m = (x0, ..., xn)."""
    parts = [saturate(I, x, method=method) for x in I.ring.gens]
    bases = []
    distinct = []
    for part in parts:
        G = groebner(part)
        if G.is_unit:
            continue
        if G.elements not in bases:
            bases.append(G.elements)
            distinct.append(part)
    if not distinct:
        return IdealSpec.of([I.ring.one], I.ring)
    return reduce(intersect, distinct)


# -- graded pieces and Hilbert values ----------------------------------------

def _divides(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def standard_monomials(G: GroebnerBasis, d: int) -> List[Tuple[int, ...]]:
    lead = G.leading_monomials()
    return [m for m in monomial_basis(G.ring, d) if not any(_divides(l, m) for l in lead)]


def _require_homogeneous(I: IdealSpec):
    if not I.homogeneous:
        raise NotHomogeneous("Hilbert values need a homogeneous ideal")


def hilbert_value(I: IdealSpec, d: int, G: Optional[GroebnerBasis] = None) -> int:
    """dim_K (K[x]/I)_d."""
    _require_homogeneous(I)
    if d < 0:
        return 0
    G = G or groebner(I)
    return len(standard_monomials(G, d))


def graded_piece_basis(I: IdealSpec, d: int, G: Optional[GroebnerBasis] = None) -> List[PolyElement]:
    """Basis of I_d in reduced row echelon form over the descending monomial basis."""
    _require_homogeneous(I)
    G = G or groebner(I)
    ring = G.ring if G.elements else I.ring
    field_ = ring_field(ring)
    monoms = monomial_basis(ring, d)
    index = {m: i for i, m in enumerate(monoms)}
    rows = []
    for g in G.elements:
        dg = sum(g.LM)
        if dg > d:
            continue
        for shift in monomial_basis(ring, d - dg):
            row = [field_.zero] * len(monoms)
            for m, c in g.items():
                row[index[tuple(a + b for a, b in zip(m, shift))]] = c
            rows.append(row)
    basis, _ = linalg.rref(rows, field_, len(monoms))
    return [to_ring(from_coeff_vector(v, d, ring), I.ring) for v in basis]


def point_conditions(points: Sequence[Sequence], ring: PolyRing, d: int, multiplicity: int = 1) -> List[List]:
    """Rows of the degree-d Macaulay matrix imposing vanishing (to order 2 if asked) at points."""
    if multiplicity not in (1, 2):
        raise ValueError("multiplicity must be 1 or 2")
    field_ = ring_field(ring)
    monoms = monomial_basis(ring, d)
    rows = []
    for pt in points:
        pt = [field_(x) for x in pt]
        rows.append([_monomial_value(m, pt, field_) for m in monoms])
        if multiplicity == 2:
            for i in range(ring.ngens):
                row = []
                for m in monoms:
                    if m[i] == 0:
                        row.append(field_.zero)
                    else:
                        dm = m[:i] + (m[i] - 1,) + m[i + 1:]
                        row.append(_monomial_value(dm, pt, field_) * m[i])
                rows.append(row)
    return rows


def _monomial_value(m, pt, field_):
    v = field_.one
    for x, e in zip(pt, m):
        if e:
            v = v * x ** e
    return v


def vanishing_piece(points: Sequence[Sequence], ring: PolyRing, d: int, multiplicity: int = 1) -> List[PolyElement]:
    """Basis of forms of degree d vanishing at the points (singular there when multiplicity = 2)."""
    field_ = ring_field(ring)
    ncols = len(monomial_basis(ring, d))
    rows = point_conditions(points, ring, d, multiplicity)
    return [from_coeff_vector(v, d, ring) for v in linalg.kernel(rows, field_, ncols)]


def points_ideal(points: Sequence[Sequence], ring: PolyRing, multiplicity: int = 1) -> IdealSpec:
    """Saturated ideal of a finite set of projective points (or of their first-order neighbourhoods).

    Generated by its graded pieces up to one past the degree where the Hilbert
    function of the point conditions stops growing.
    """
    gens: List[PolyElement] = []
    previous = None
    d = 1
    while True:
        piece = vanishing_piece(points, ring, d, multiplicity)
        gens.extend(piece)
        h = len(monomial_basis(ring, d)) - len(piece)
        if previous is not None and h == previous:
            gens.extend(vanishing_piece(points, ring, d + 1, multiplicity))
            break
        previous = h
        d += 1
    return IdealSpec.of(gens, ring)


# -- zero-dimensional ideals ----------------------------------------------------

def _affine_standard_monomials(G: GroebnerBasis) -> List[Tuple[int, ...]]:
    n = G.ring.ngens
    lead = G.leading_monomials()
    bounds = []
    for i in range(n):
        pure = [l[i] for l in lead if all(e == 0 for j, e in enumerate(l) if j != i) and l[i] > 0]
        if not pure:
            raise PositiveDimensional(f"no pure power of {var_names(G.ring)[i]} among leading terms")
        bounds.append(min(pure))
    return [m for m in product(*(range(b) for b in bounds)) if not any(_divides(l, m) for l in lead)]


def zero_dim_degree(I: IdealSpec, G: Optional[GroebnerBasis] = None) -> int:
    """Length of K[x]/I for a zero-dimensional affine ideal."""
    G = G or groebner(I)
    if G.is_unit:
        return 0
    return len(_affine_standard_monomials(G))


def is_reduced_zero_dim(I: IdealSpec, rng: Optional[np.random.Generator] = None, trials: int = 8) -> bool:
    """Reducedness via the minimal polynomial of a random linear form.

    If the minimal polynomial of ℓ has degree equal to the length of K[x]/I,
    the algebra is K[ℓ]/(m) and it is reduced exactly when m is squarefree.
    A smaller degree means ℓ does not separate, and another ℓ is drawn.
    """
    G = groebner(I)
    if G.is_unit:
        return True
    basis = _affine_standard_monomials(G)
    length = len(basis)
    rng = rng if rng is not None else make_rng(0)
    ring = G.ring
    field_ = ring_field(ring)
    index = {m: i for i, m in enumerate(basis)}

    def vector(h):
        v = [field_.zero] * length
        for m, c in normal_form(h, G).items():
            v[index[m]] = c
        return v

    for _ in range(max(trials, 1)):
        ell = sum((g.mul_ground(field_.random(rng)) for g in ring.gens), ring.zero)
        powers = [ring.one]
        vecs = [vector(ring.one)]
        while len(vecs) <= length:
            powers.append(normal_form(powers[-1] * ell, G))
            vecs.append(vector(powers[-1]))
            if linalg.rank(vecs, field_, length) < len(vecs):
                break
        k = len(vecs) - 1
        if k < length:
            continue
        minpoly = _minimal_polynomial(vecs, field_)
        return bool(minpoly.gcd(minpoly.diff(minpoly.ring.gens[0])).is_ground)
    raise Inconclusive(f"no separating linear form found in {trials} trials")


def _minimal_polynomial(vecs, field_) -> PolyElement:
    """Monic relation Σ cᵢ Tⁱ among the columns vecs[0..k]."""
    k = len(vecs) - 1
    columns = [list(row) for row in zip(*vecs)]
    (relation,) = linalg.kernel(columns, field_, k + 1)
    T = poly_ring(("T",), field_, GREVLEX)
    m = T.from_dict({(i,): c for i, c in enumerate(relation) if c})
    return m.monic()


# -- projective helpers -------------------------------------------------------

def dehomogenize(I: IdealSpec, index: int) -> IdealSpec:
    """Restrict a homogeneous ideal to the affine chart {x_index = 1}."""
    names = var_names(I.ring)
    keep = names[:index] + names[index + 1:]
    chart = poly_ring(keep, ring_field(I.ring), GREVLEX)
    out = []
    for g in I.generators:
        terms = {}
        for m, c in g.items():
            key = m[:index] + m[index + 1:]
            terms[key] = terms.get(key, chart.domain.zero) + c
        out.append(chart.from_dict({m: c for m, c in terms.items() if c}))
    return IdealSpec.of(out, chart)


def is_empty_projective(I: IdealSpec) -> bool:
    """True iff V(I) ⊂ P^n has no points over the algebraic closure."""
    return all(groebner(dehomogenize(I, i)).is_unit for i in range(I.nvars))


def is_zero_dim_projective(I: IdealSpec) -> bool:
    try:
        for i in range(I.nvars):
            zero_dim_degree(dehomogenize(I, i))
    except PositiveDimensional:
        return False
    return True


def projective_degree(I: IdealSpec, saturated: bool = False) -> int:
    """Length of the zero-dimensional subscheme V(I), read off the stable Hilbert value."""
    _require_homogeneous(I)
    if not is_zero_dim_projective(I):
        raise PositiveDimensional("projective scheme has positive dimension")
    S = I if saturated else saturate_irrelevant(I)
    G = groebner(S)
    if G.is_unit:
        return 0
    d, previous = 0, hilbert_value(S, 0, G)
    while True:
        d += 1
        value = hilbert_value(S, d, G)
        if value == previous:
            return value
        previous = value


def is_reduced_projective(I: IdealSpec, rng: Optional[np.random.Generator] = None, trials: int = 8) -> bool:
    """Chart-wise reducedness of a zero-dimensional projective scheme."""
    rng = rng if rng is not None else make_rng(0)
    for i in range(I.nvars):
        chart = dehomogenize(I, i)
        if groebner(chart).is_unit:
            continue
        if not is_reduced_zero_dim(chart, rng, trials):
            return False
    return True
