"""Multivariate polynomials over F_p and F_p[ε]/(ε²), backed by sympy PolyRing"""

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.orderings import MonomialOrder as _SympyOrder
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import IncompatibleVariables, NotHomogeneous, PolynomialParseError
from .scalars import DualScalar, PrimeField, field_inv, field_of

Monomial = Tuple[int, ...]


class BlockGrevlex(_SympyOrder):
    """Elimination order: grevlex on the first `k` variables, ties broken by grevlex on the rest."""

    alias = "block"
    is_global = True

    def __init__(self, k: int):
        self.k = k

    def __call__(self, monomial):
        head, tail = monomial[: self.k], monomial[self.k:]
        return (grevlex(head), grevlex(tail))

    def __eq__(self, other):
        return isinstance(other, BlockGrevlex) and other.k == self.k

    def __hash__(self):
        return hash(("BlockGrevlex", self.k))

    def __repr__(self):
        return f"BlockGrevlex({self.k})"


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, or a block order eliminating the leading `elim` variables."""

    kind: str = "grevlex"
    elim: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.elim < 1:
            raise ValueError("block order needs at least one eliminated variable")

    def to_sympy(self):
        if self.kind == "grevlex":
            return grevlex
        if self.kind == "lex":
            return lex
        return BlockGrevlex(self.elim)

    @classmethod
    def of_ring(cls, ring: PolyRing) -> "MonomialOrder":
        order = ring.order
        if isinstance(order, BlockGrevlex):
            return cls("block", order.k)
        if order == lex:
            return cls("lex")
        return cls("grevlex")

    def __str__(self) -> str:
        return f"block({self.elim}, grevlex)" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def variables(prefix: str, n: int) -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


@lru_cache(maxsize=None)
def _ring(names: Tuple[str, ...], p: int, order: MonomialOrder) -> PolyRing:
    return PolyRing(",".join(names), PrimeField(p).domain, order.to_sympy())


def poly_ring(names: Sequence[str], field: PrimeField, order: MonomialOrder = GREVLEX) -> PolyRing:
    names = tuple(names)
    if len(set(names)) != len(names):
        raise IncompatibleVariables(f"duplicate variable names in {names}")
    return _ring(names, field.p, order)


def var_names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def ring_field(ring: PolyRing) -> PrimeField:
    return field_of(ring.domain)


def with_order(ring: PolyRing, order: MonomialOrder) -> PolyRing:
    return poly_ring(var_names(ring), ring_field(ring), order)


def to_ring(f: PolyElement, ring: PolyRing) -> PolyElement:
    """Move f into a ring over the same variables (possibly reordered or with another order)."""
    if f.ring == ring:
        return f
    if set(var_names(f.ring)) - set(var_names(ring)):
        raise IncompatibleVariables(f"{var_names(f.ring)} is not contained in {var_names(ring)}")
    if f.ring.domain != ring.domain:
        raise IncompatibleVariables("coefficient fields differ")
    return f.set_ring(ring)


# -- parsing and printing ---------------------------------------------------

MAX_EXPONENT = 12

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][0-9]*)|(\*\*|\^|[-+*()]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialParseError(f"unexpected character {text[pos]!r} at offset {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.pos = 0
        self.gens = dict(zip(var_names(ring), ring.gens))

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, msg: str):
        raise PolynomialParseError(f"{msg} in {self.text!r}")

    def parse(self) -> PolyElement:
        if not self.tokens:
            self.fail("empty polynomial")
        result = self.expr()
        if self.pos != len(self.tokens):
            self.fail(f"trailing token {self.peek()[1]!r}")
        return result

    def expr(self) -> PolyElement:
        sign = 1
        if self.peek() in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self) -> PolyElement:
        value = self.power()
        while self.peek() == ("op", "*"):
            self.take()
            value = value * self.power()
        return value

    def power(self) -> PolyElement:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, exp = self.take()
            if kind != "num":
                self.fail("exponent must be a non-negative integer")
            if int(exp) > MAX_EXPONENT:
                self.fail(f"exponent {exp} exceeds {MAX_EXPONENT}")
            return base ** int(exp)
        return base

    def atom(self) -> PolyElement:
        kind, value = self.take()
        if kind == "num":
            return self.ring(int(value))
        if kind == "var":
            if value not in self.gens:
                self.fail(f"unknown variable {value!r} (ring has {', '.join(self.gens)})")
            return self.gens[value]
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                self.fail("unbalanced parenthesis")
            return inner
        self.fail(f"unexpected token {value!r}")


def parse_poly(text: str, ring: PolyRing) -> PolyElement:
    """Parse `19*x0^2-33*x0*x1+...` into `ring`; integer coefficients are reduced mod p."""
    if not isinstance(text, str):
        raise PolynomialParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text, ring).parse()


def format_poly(f: PolyElement) -> str:
    """Inverse of parse_poly, printing coefficients in the symmetric range."""
    if isinstance(f, DualPoly):
        return f"({format_poly(f.base)}) + ε({format_poly(f.tangent)})"
    if not f:
        return "0"
    field = ring_field(f.ring)
    names = var_names(f.ring)
    out = []
    for monom, coeff in f.terms():
        c = field.symmetric(coeff)
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, monom) if e]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(c)] + factors)
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    return text + "".join(s + b for s, b in out[1:])


# -- arithmetic --------------------------------------------------------------

def _check_same_ring(f, g):
    rf = f.ring if hasattr(f, "ring") else None
    rg = g.ring if hasattr(g, "ring") else None
    if rf is not None and rg is not None and rf != rg:
        raise IncompatibleVariables(f"{var_names(rf)} vs {var_names(rg)}")


def poly_add(f, g):
    _check_same_ring(f, g)
    return f + g


def poly_sub(f, g):
    _check_same_ring(f, g)
    return f - g


def poly_mul(f, g):
    _check_same_ring(f, g)
    return f * g


def poly_scale(f, c):
    if isinstance(c, DualScalar):
        return DualPoly.lift(f).scale(c) if not isinstance(f, DualPoly) else f.scale(c)
    if isinstance(f, DualPoly):
        return f.scale(c)
    return f.mul_ground(ring_field(f.ring)(c))


def partial_derivative(f, var: int):
    if isinstance(f, DualPoly):
        return DualPoly(partial_derivative(f.base, var), partial_derivative(f.tangent, var))
    return f.diff(f.ring.gens[var])


def gradient(f) -> List:
    return [partial_derivative(f, i) for i in range(f.ring.ngens)]


def total_degree(monom: Monomial) -> int:
    return sum(monom)


def graded_part(f, d: int):
    if isinstance(f, DualPoly):
        return DualPoly(graded_part(f.base, d), graded_part(f.tangent, d))
    return f.ring.from_dict({m: c for m, c in f.items() if sum(m) == d})


def homogeneous_degree(f) -> Optional[int]:
    """Degree of a nonzero homogeneous f; None for zero or inhomogeneous input."""
    if isinstance(f, DualPoly):
        degs = {homogeneous_degree(g) for g in (f.base, f.tangent) if g}
        return degs.pop() if len(degs) == 1 and None not in degs else None
    degs = {sum(m) for m in f.keys()}
    return degs.pop() if len(degs) == 1 else None


def is_homogeneous(f, d: Optional[int] = None) -> bool:
    if not f:
        return True
    deg = homogeneous_degree(f)
    return deg is not None and (d is None or deg == d)


def evaluate(f, point: Sequence):
    """f(point) with point coordinates in F_p or F_p[ε]/(ε²)."""
    if isinstance(f, DualPoly):
        base = evaluate(f.base, point)
        tangent = evaluate(f.tangent, [DualScalar.lift(x).reduce() for x in point])
        return DualScalar.lift(base) + DualScalar(tangent.__class__(0), tangent)
    if len(point) != f.ring.ngens:
        raise IncompatibleVariables(f"point of length {len(point)} for {f.ring.ngens} variables")
    field = ring_field(f.ring)
    dual = any(isinstance(x, DualScalar) for x in point)
    if dual:
        pt = [x if isinstance(x, DualScalar) else DualScalar.lift(field(x)) for x in point]
    else:
        pt = [field(x) for x in point]
    total = DualScalar(field.zero, field.zero) if dual else field.zero
    powers: Dict[Tuple[int, int], object] = {}
    for monom, coeff in f.items():
        term = DualScalar(coeff, field.zero) if dual else coeff
        for i, e in enumerate(monom):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = pt[i] ** e
                term = term * powers[key]
        total = total + term
    return total


def substitute(f, images: Sequence):
    """f(images): compose with a list of polynomials (or DualPolys) over a common ring."""
    if isinstance(f, DualPoly):
        # (b + εt)(g + εh) = b(g + εh) + ε t(g)
        base = DualPoly.lift(substitute(f.base, images))
        return base + DualPoly.lift(substitute(f.tangent, [_reduce(g) for g in images])).times_epsilon()
    if len(images) != f.ring.ngens:
        raise IncompatibleVariables(f"{len(images)} images for {f.ring.ngens} variables")
    dual = any(isinstance(g, DualPoly) for g in images)
    if dual:
        images = [DualPoly.lift(g) for g in images]
    target = images[0].ring if images else None
    for g in images:
        if g.ring != target:
            raise IncompatibleVariables("substitution images live in different rings")
    field = ring_field(f.ring)
    one = DualPoly.lift(target.one) if dual else target.one
    total = DualPoly.lift(target.zero) if dual else target.zero
    powers: Dict[Tuple[int, int], object] = {}
    for monom, coeff in f.items():
        term = one
        for i, e in enumerate(monom):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = images[i] ** e
                term = term * powers[key]
        total = total + poly_scale(term, field(coeff))
    return total


def _reduce(g):
    return g.base if isinstance(g, DualPoly) else g


# -- coefficient vectors -----------------------------------------------------

@lru_cache(maxsize=None)
def _monomials(n: int, d: int, order: MonomialOrder) -> Tuple[Monomial, ...]:
    monoms = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        monoms.append(tuple(e))
    key = order.to_sympy()
    return tuple(sorted(monoms, key=key, reverse=True))


def monomial_basis(ring: PolyRing, d: int) -> Tuple[Monomial, ...]:
    """Degree-d monomials of `ring`, descending in its order."""
    if d < 0:
        return ()
    return _monomials(ring.ngens, d, MonomialOrder.of_ring(ring))


def coeff_vector(f, d: int, ring: Optional[PolyRing] = None) -> List:
    ring = ring or f.ring
    if isinstance(f, DualPoly):
        base = coeff_vector(f.base, d, ring)
        tangent = coeff_vector(f.tangent, d, ring)
        return [DualScalar(a, b) for a, b in zip(base, tangent)]
    if not is_homogeneous(f, d):
        raise NotHomogeneous(f"{format_poly(f)} is not a form of degree {d}")
    zero = ring.domain.zero
    return [f.get(m, zero) for m in monomial_basis(ring, d)]


def from_coeff_vector(vec: Sequence, d: int, ring: PolyRing):
    monoms = monomial_basis(ring, d)
    if len(vec) != len(monoms):
        raise NotHomogeneous(f"vector of length {len(vec)} for {len(monoms)} degree-{d} monomials")
    if any(isinstance(x, DualScalar) for x in vec):
        base = [DualScalar.lift(x).a for x in vec]
        tangent = [DualScalar.lift(x).b for x in vec]
        return DualPoly(from_coeff_vector(base, d, ring), from_coeff_vector(tangent, d, ring))
    field = ring_field(ring)
    return ring.from_dict({m: field(c) for m, c in zip(monoms, vec) if field(c)})


def quadratic_form_matrix(f: PolyElement) -> List[List]:
    """Symmetric Q with f = ᵗx Q x."""
    if not is_homogeneous(f, 2):
        raise NotHomogeneous(f"{format_poly(f)} is not a quadric")
    n = f.ring.ngens
    field = ring_field(f.ring)
    half = field_inv(field(2))
    Q = [[field.zero] * n for _ in range(n)]
    for monom, coeff in f.items():
        idx = [i for i, e in enumerate(monom) for _ in range(e)]
        i, j = idx
        if i == j:
            Q[i][i] = coeff
        else:
            Q[i][j] = Q[j][i] = coeff * half
    return Q


def quadric_from_matrix(S: Sequence[Sequence], ring: PolyRing) -> PolyElement:
    """ᵗx S x for a symmetric matrix S."""
    field = ring_field(ring)
    n = ring.ngens
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = field(S[i][j]) if i == j else field(S[i][j]) + field(S[j][i])
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
    return ring.from_dict(terms)


# -- dual polynomials --------------------------------------------------------

@dataclass(frozen=True)
class DualPoly:
    """base + ε·tangent with both parts in the same PolyRing."""

    base: PolyElement
    tangent: PolyElement

    def __post_init__(self):
        if self.base.ring != self.tangent.ring:
            raise IncompatibleVariables("dual polynomial parts live in different rings")

    @classmethod
    def lift(cls, f) -> "DualPoly":
        if isinstance(f, DualPoly):
            return f
        return cls(f, f.ring.zero)

    @property
    def ring(self) -> PolyRing:
        return self.base.ring

    def _coerce(self, other) -> "DualPoly":
        if isinstance(other, DualPoly):
            _check_same_ring(self, other)
            return other
        if isinstance(other, PolyElement):
            _check_same_ring(self, other)
            return DualPoly.lift(other)
        if isinstance(other, DualScalar):
            return DualPoly(self.ring(other.a), self.ring(other.b))
        return DualPoly.lift(self.ring(other))

    def __add__(self, other):
        o = self._coerce(other)
        return DualPoly(self.base + o.base, self.tangent + o.tangent)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return DualPoly(self.base - o.base, self.tangent - o.tangent)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return DualPoly(-self.base, -self.tangent)

    def __mul__(self, other):
        o = self._coerce(other)
        return DualPoly(self.base * o.base, self.base * o.tangent + self.tangent * o.base)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if n == 0:
            return DualPoly.lift(self.ring.one)
        # (b + εt)^n = b^n + ε n b^(n-1) t
        prev = self.base ** (n - 1)
        return DualPoly(prev * self.base, (prev * self.tangent).mul_ground(self.ring.domain(n)))

    def scale(self, c) -> "DualPoly":
        c = DualScalar.lift(ring_field(self.ring)(c) if not isinstance(c, DualScalar) else c)
        return DualPoly(self.base.mul_ground(c.a), self.base.mul_ground(c.b) + self.tangent.mul_ground(c.a))

    def times_epsilon(self) -> "DualPoly":
        return DualPoly(self.ring.zero, self.base)

    def reduce(self) -> PolyElement:
        return self.base

    def __bool__(self) -> bool:
        return bool(self.base) or bool(self.tangent)

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyElement):
            other = DualPoly.lift(other)
        if not isinstance(other, DualPoly):
            return NotImplemented
        return self.base == other.base and self.tangent == other.tangent

    def __hash__(self):
        return hash((self.base, self.tangent))

    def __repr__(self) -> str:
        return format_poly(self)
