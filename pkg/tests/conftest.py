"""Shared fixtures: the F_101 test point, its canonical curve and rank certificate"""

from itertools import chain

import pytest

from prym import linalg
from prym.canonical import canonical_curve
from prym.fixtures import paper_model as load_paper_model
from prym.kodaira import KSOptions, assemble_and_rank, tangent_space_B0
from prym.polys import from_coeff_vector, monomial_basis, ring_field
from prym.scalars import PrimeField, make_rng


@pytest.fixture(scope="session")
def F101():
    return PrimeField(101)


@pytest.fixture(scope="session")
def paper_model():
    return load_paper_model()


@pytest.fixture(scope="session")
def paper_curve(paper_model):
    return canonical_curve(paper_model)


@pytest.fixture(scope="session")
def paper_tangent(paper_model):
    return tangent_space_B0(paper_model)


@pytest.fixture(scope="session")
def paper_certificate(paper_model, paper_curve, paper_tangent):
    return assemble_and_rank(paper_model, KSOptions(), paper_curve, paper_tangent)


@pytest.fixture
def rng():
    return make_rng(1234)


def random_form(ring, d, rng):
    field_ = ring_field(ring)
    return from_coeff_vector([field_.random(rng) for _ in monomial_basis(ring, d)], d, ring)


def _shifted_rows(generators, ring, bound):
    """Coefficient rows of m·g for every monomial m with deg(m·g) ≤ bound."""
    field_ = ring_field(ring)
    columns = list(chain.from_iterable(monomial_basis(ring, d) for d in range(bound + 1)))
    index = {m: i for i, m in enumerate(columns)}
    rows = []
    for g in generators:
        top = max(sum(m) for m in g.keys())
        for k in range(bound - top + 1):
            for shift in monomial_basis(ring, k):
                row = [field_.zero] * len(columns)
                for m, c in g.items():
                    row[index[tuple(a + b for a, b in zip(m, shift))]] = c
                rows.append(row)
    return rows, index, columns


def macaulay_member(f, generators, bound):
    """Is f a combination Σ hᵢgᵢ with deg(hᵢgᵢ) ≤ bound? Brute force over the Macaulay matrix."""
    ring = f.ring
    field_ = ring_field(ring)
    rows, index, columns = _shifted_rows(generators, ring, bound)
    target = [field_.zero] * len(columns)
    for m, c in f.items():
        if m not in index:
            return False
        target[index[m]] = c
    if not rows:
        return not f
    before = linalg.rank(rows, field_, len(columns))
    return linalg.rank(rows + [target], field_, len(columns)) == before


@pytest.fixture(scope="session")
def membership_oracle():
    return macaulay_member


@pytest.fixture(scope="session")
def form_sampler():
    return random_form
