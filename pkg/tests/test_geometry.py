import json

import pytest

from prym.errors import (
    DegenerateNodes,
    FixtureMismatch,
    IncompatibleDegrees,
    InputError,
    MathematicalFailure,
    ModelFormatError,
    NoGeneralMemberFound,
    NotOrdinaryNode,
    NotSingularAtP0,
    PointNotOnVariety,
)
from prym.fixtures import load_model, load_paper_data, model_to_data, paper_nodes
from prym.fixtures import paper_model as build_paper_model
from prym.geometry import (
    ProjPoint,
    Singularity,
    Status,
    apply_transform,
    certify_contact_conic,
    certify_model,
    certify_polynomial_identity,
    certify_sextic_nodes,
    certify_singular_locus,
    classify_singular_point,
    conic_bundle_fiber_check,
    dimension_ladder,
    discriminant_sextic,
    general_position_p2,
    general_position_p3,
    model_from_quartic,
    node_transform,
    p2_ring,
    p3_ring,
    projection_provenance,
    quartics_with_nodes,
    random_quartic,
    sextic_genus,
    split_quartic,
    transform_point,
)
from prym.polys import evaluate, gradient, homogeneous_degree
from prym.scalars import Prime, make_rng


@pytest.fixture(scope="module")
def P2(F101):
    return p2_ring(F101)


@pytest.fixture(scope="module")
def P3(F101):
    return p3_ring(F101)


def _points(F101, *coords):
    return [ProjPoint.of(c, F101) for c in coords]


def test_projective_point_normalization(F101):
    pt = ProjPoint.of((2, 4, 6), F101)
    assert pt.coords == (34, 68, 1)
    assert pt.chart == 2
    assert ProjPoint.of((3, 0, 0), F101).coords == (1, 0, 0)
    assert ProjPoint.of((-1, 0), F101) == ProjPoint.of((5, 0), F101)
    with pytest.raises(InputError):
        ProjPoint.of((0, 0, 0), F101)


def test_projection_from_p0(F101):
    assert ProjPoint.of((1, 2, 3, 4), F101).project() == ProjPoint.of((1, 2, 3), F101)
    with pytest.raises(DegenerateNodes):
        ProjPoint.of((0, 0, 0, 5), F101).project()


def test_general_position(F101):
    nodes = paper_nodes(F101)
    assert general_position_p3(nodes[1:])
    coplanar = nodes[1:4] + _points(F101, (0, 1, 1, 0), (1, 2, 3, 4))
    assert not general_position_p3(coplanar)
    assert general_position_p2(_points(F101, (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 2, 3)))
    assert not general_position_p2(_points(F101, (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)))
    assert not general_position_p2(_points(F101, (1, 0, 0), (0, 1, 0)))
    with pytest.raises(InputError):
        general_position_p2(nodes)


def test_quartics_with_nodes(F101):
    nodes = paper_nodes(F101)
    assert len(quartics_with_nodes(nodes[:1], F101)) == 31
    assert len(quartics_with_nodes(nodes[1:], F101)) == 15
    six = quartics_with_nodes(nodes, F101)
    assert len(six) == 11
    for F in six:
        for pt in nodes:
            assert not any(evaluate(g, pt.values()) for g in [F] + gradient(F))
    with pytest.raises(DegenerateNodes):
        quartics_with_nodes(nodes[:2] + nodes[:1], F101)


def test_dimension_ladder(F101):
    ladder = dimension_ladder(paper_nodes(F101))
    assert ladder == {
        "quartics_singular_at_five_nodes": 15,
        "quartics_singular_at_six_nodes": 11,
        "conditions_from_p0": 4,
        "family_dimension": 13,
    }


def test_sextic_genus():
    assert sextic_genus(5) == 5
    assert sextic_genus(0) == 10
    assert sextic_genus(1, degree=4) == 2


def test_split_recovers_forms(paper_model):
    u2, u3, u4 = split_quartic(paper_model.F, paper_model.nodes[0])
    assert (u2, u3, u4) == (paper_model.u2, paper_model.u3, paper_model.u4)


def test_split_of_a_cone(P2, P3, F101):
    x0, x1, x2, x3 = P3.gens
    q = x0 ** 2 + x1 ** 2 + x2 ** 2
    u2, u3, u4 = split_quartic(x3 ** 2 * q, ProjPoint.of((0, 0, 0, 1), F101))
    y0, y1, y2 = P2.gens
    assert u2 == y0 ** 2 + y1 ** 2 + y2 ** 2
    assert not u3 and not u4


def test_split_rejects_bad_nodes(P3, F101):
    x0, x1, x2, x3 = P3.gens
    e3 = ProjPoint.of((0, 0, 0, 1), F101)
    with pytest.raises(NotSingularAtP0):
        split_quartic(x3 ** 3 * x0 + x1 ** 4, e3)
    with pytest.raises(NotSingularAtP0):
        split_quartic(x3 ** 4 + x1 ** 4, e3)
    with pytest.raises(NotOrdinaryNode):
        split_quartic(x3 ** 2 * x0 ** 2 + x1 ** 4, e3)
    with pytest.raises(IncompatibleDegrees):
        split_quartic(x3 ** 2 * x0, e3)


def test_node_transform_moves_p0(F101):
    for coords in [(0, 0, 0, 1), (1, 0, 0, 0), (1, 2, 3, 4), (0, 5, 1, 0)]:
        P0 = ProjPoint.of(coords, F101)
        T = node_transform(P0)
        assert transform_point(T, P0) == ProjPoint.of((0, 0, 0, 1), F101)


def test_discriminant_sextic(P2):
    x0, x1, x2 = P2.gens
    f = discriminant_sextic(x0 ** 2, P2.zero, x1 ** 4)
    assert f == -(x0 ** 2 * x1 ** 4)
    f = discriminant_sextic(x0 * x1, x2 ** 3, x0 ** 4)
    assert f == x2 ** 6 - x0 ** 5 * x1
    assert homogeneous_degree(f) == 6
    with pytest.raises(IncompatibleDegrees):
        discriminant_sextic(x0 ** 2, x1 ** 2, x2 ** 4)
    with pytest.raises(IncompatibleDegrees):
        discriminant_sextic(x0 ** 2, x1 ** 3, x2 ** 3 + x0 ** 4)


def test_polynomial_identity(paper_model):
    assert certify_polynomial_identity(paper_model).passed
    assert paper_model.normalized_F == paper_model.F


def test_classify_singular_point(P3, F101):
    x0, x1, x2, x3 = P3.gens
    e3 = ProjPoint.of((0, 0, 0, 1), F101)
    assert classify_singular_point(x0 * x3 - x1 * x2, e3) == Singularity.SMOOTH
    assert classify_singular_point(x0 * x1 - x2 ** 2, e3) == Singularity.ORDINARY_NODE
    assert classify_singular_point(x0 * x1, e3) == Singularity.WORSE
    with pytest.raises(PointNotOnVariety):
        classify_singular_point(x3 ** 2, e3)
    with pytest.raises(InputError):
        classify_singular_point(x0, ProjPoint.of((0, 1), F101))


def test_paper_nodes_are_ordinary(paper_model):
    for pt in paper_model.nodes:
        assert classify_singular_point(paper_model.F, pt) == Singularity.ORDINARY_NODE
    for q in paper_model.sextic_nodes:
        assert classify_singular_point(paper_model.f, q) == Singularity.ORDINARY_NODE


def test_singular_locus_of_a_cusp(P3, F101):
    x0, x1, x2, x3 = P3.gens
    F = x3 ** 2 * x0 ** 2 + x0 ** 4 + x1 ** 4 + x2 ** 4
    report = certify_singular_locus(F, _points(F101, (0, 0, 0, 1)))
    assert report.get("surface.node_types").status == Status.FAIL
    assert not report.passed


def test_smooth_quartic_has_no_nodes(P3, F101):
    x0, x1, x2, x3 = P3.gens
    fermat = x0 ** 4 + x1 ** 4 + x2 ** 4 + x3 ** 4
    report = certify_singular_locus(fermat, _points(F101, (0, 0, 0, 1)))
    assert report.get("surface.singular_degree").status == Status.FAIL
    assert "not_on_variety" in report.get("surface.node_types").detail


@pytest.mark.slow
def test_paper_certificates(paper_model):
    assert certify_singular_locus(paper_model.F, paper_model.nodes).passed
    sextic = certify_sextic_nodes(paper_model.f, paper_model.sextic_nodes,
                                  (paper_model.u2, paper_model.u3, paper_model.u4), make_rng(0))
    assert sextic.passed, sextic.to_dict()
    contact = certify_contact_conic(paper_model.u2, paper_model.u3, paper_model.f, make_rng(0))
    assert contact.passed, contact.to_dict()


@pytest.mark.slow
def test_certify_model_on_paper_point(paper_model):
    report = certify_model(paper_model, make_rng(0))
    assert report.passed, [c.to_dict() for c in report.failed()]
    assert report.get("sextic.genus").status == Status.PASS


def test_square_sextic_has_a_singular_curve(paper_model):
    f = paper_model.u3 ** 2
    report = certify_sextic_nodes(f, paper_model.sextic_nodes)
    assert report.get("sextic.singular_degree").status == Status.FAIL
    assert "positive-dimensional" in report.get("sextic.singular_degree").detail
    assert report.get("sextic.singular_support").status == Status.FAIL
    assert report.verdict == Status.FAIL


def test_forms_with_a_common_factor_fail_genericity(paper_model, P2):
    x0, x1, x2 = P2.gens
    u2 = x0 * x1
    u3 = x0 * (x1 ** 2 + x2 ** 2)
    u4 = x0 * (x0 ** 3 + x1 ** 3 + x2 ** 3)
    f = discriminant_sextic(u2, u3, u4)
    report = certify_sextic_nodes(f, paper_model.sextic_nodes, (u2, u3, u4))
    assert report.get("sextic.genericity").status == Status.FAIL
    assert report.get("sextic.singular_degree").status == Status.FAIL
    assert report.verdict == Status.FAIL


def test_contact_failure(paper_model, P2):
    u3 = paper_model.u2 * P2.gens[0]
    report = certify_contact_conic(paper_model.u2, u3, paper_model.f)
    assert report.get("contact.degree").status == Status.FAIL
    assert report.verdict == Status.FAIL


def test_fiber_checks(paper_model, P2):
    assert conic_bundle_fiber_check(paper_model.u2, paper_model.u3, paper_model.u4, paper_model.f).passed
    x0, x1, x2 = P2.gens
    u2 = x0 * x1 + x2 ** 2
    u3 = x0 * (x0 ** 2 + x1 ** 2 + x2 ** 2)
    u4 = x0 ** 4 + x2 ** 4 + x0 * x1 ** 3
    f = discriminant_sextic(u2, u3, u4)
    report = conic_bundle_fiber_check(u2, u3, u4, f)
    assert report.get("fiber.determinant").status == Status.PASS
    assert report.get("fiber.rank_two").status == Status.FAIL


def test_projection_provenance(paper_model):
    assert projection_provenance(paper_model).passed
    assert [list(q.coords) for q in paper_model.sextic_nodes] == [[0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1], [34, 68, 1]]


def test_model_after_moving_p0(paper_model, F101):
    swap = [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]]
    F = apply_transform(paper_model.F, swap)
    nodes = [ProjPoint.of((n.coords[3], n.coords[1], n.coords[2], n.coords[0]), F101) for n in paper_model.nodes]
    assert nodes[0] == ProjPoint.of((1, 0, 0, 0), F101)
    model = model_from_quartic(F, nodes, Prime(101))
    assert projection_provenance(model).passed
    assert certify_polynomial_identity(model).passed
    assert homogeneous_degree(model.f) == 6
    # the swap is an involution, so normalizing undoes it
    assert model.f == paper_model.f


def test_model_requires_singular_nodes(paper_model, F101):
    nodes = list(paper_model.nodes)
    moved = nodes[:5] + [ProjPoint.of((1, 3, 5, 7), F101)]
    with pytest.raises(DegenerateNodes):
        model_from_quartic(paper_model.F, moved, Prime(101))
    with pytest.raises(NotSingularAtP0):
        model_from_quartic(paper_model.F, moved[::-1], Prime(101))
    with pytest.raises(InputError):
        model_from_quartic(paper_model.F, nodes[:5], Prime(101))


def test_paper_convention_is_resolved(paper_model):
    assert paper_model.convention in ("half", "full")
    assert paper_model.provenance["convention_resolved"]
    wrong = "full" if paper_model.convention == "half" else "half"
    with pytest.raises(MathematicalFailure):
        build_paper_model(101, wrong)
    assert build_paper_model(101, paper_model.convention).F == paper_model.F


def test_paper_model_needs_its_prime():
    with pytest.raises(FixtureMismatch):
        build_paper_model(7)


def test_load_model_errors(tmp_path):
    with pytest.raises(ModelFormatError):
        load_model(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ModelFormatError):
        load_model(bad)
    bad.write_text("[1, 2]")
    with pytest.raises(ModelFormatError):
        load_model(bad)
    bad.write_text(json.dumps({"prime": 101, "nodes": [[0, 0, 0, 1]]}))
    with pytest.raises(ModelFormatError):
        load_model(bad)
    bad.write_text(json.dumps({"prime": 101, "nodes": [[0, 0, 0, 1]] * 5, "u2": "x0^2", "u3": "0", "u4": "0"}))
    with pytest.raises(ModelFormatError):
        load_model(bad)


@pytest.mark.parametrize("coordinate", [2.5, 2.0, "2", True, None])
def test_node_coordinates_must_be_integers(tmp_path, coordinate):
    data = {k: v for k, v in load_paper_data().items() if k in ("prime", "nodes", "u2", "u3", "u4")}
    data["nodes"] = [list(n) for n in data["nodes"]]
    data["nodes"][5][1] = coordinate
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ModelFormatError, match="integers"):
        load_model(path, "half")


def test_model_data_round_trip(paper_model, tmp_path):
    data = model_to_data(paper_model)
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    loaded = load_model(path, "half")
    assert loaded.F == paper_model.F
    assert loaded.f == paper_model.f
    assert load_model(path).F == paper_model.F
    with pytest.raises(ModelFormatError):
        load_model(path, "u3=third")


def test_random_quartic_gives_up(F101):
    with pytest.raises(NoGeneralMemberFound):
        random_quartic(Prime(101), seed=0, max_tries=0)


def test_random_quartic_gives_up_when_nothing_is_accepted(F101):
    with pytest.raises(NoGeneralMemberFound):
        random_quartic(Prime(101), seed=0, max_tries=1, accept=lambda model: "never")


@pytest.mark.slow
def test_random_quartic_moves_on_after_a_rejection(F101):
    seen = []

    def accept(model):
        seen.append(model.provenance["tries"])
        if len(seen) == 1:
            return "held back"
        if len(seen) == 2:
            raise DegenerateNodes("held back again")
        return None

    model, report = random_quartic(Prime(101), seed=0, max_tries=20, accept=accept)
    assert report.passed
    assert model.provenance["tries"] == seen[2] > seen[1] > seen[0]
    reasons = {entry["try"]: entry["reason"] for entry in model.provenance["rejected"]}
    assert reasons[seen[0]] == "held back"
    assert reasons[seen[1]] == "DegenerateNodes: held back again"
    assert all(entry["try"] < model.provenance["tries"] for entry in model.provenance["rejected"])


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_quartic(seed):
    model, report = random_quartic(Prime(101), seed=seed, max_tries=20)
    assert report.passed
    assert model.provenance["seed"] == seed
    again, _ = random_quartic(Prime(101), seed=seed, max_tries=20)
    assert again.F == model.F
    for pt in model.nodes:
        assert not any(evaluate(g, pt.values()) for g in [model.F] + gradient(model.F))
