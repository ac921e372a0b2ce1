import pytest
from algebra.ring import RationalRing, ZModRing, parse_ring
from geometry.affine import (
    DerivedAffinePlane, aff_apart, aff_incident, aff_line, aff_line_through, aff_li_apart, aff_meet,
    aff_outside, aff_point, affine_plane, derive_affine, derived_to_affine, desargues_small_check,
    desargues_variants_check, from_projective_point, pappus_affine_check,
    parallel, parallel_through, verify_affine_axioms, verify_desargues_variant,
)
from geometry.axioms import DESARGUES_VARIANTS, HOLDS, PREMISES_FAIL
from geometry.morphisms import PlaneMorphism, check_isomorphism
from geometry.projective import NotAPointError, NotApartError, meet, mk_line, mk_point, projective_plane


@pytest.fixture(scope="module")
def z4():
    return ZModRing(4)


@pytest.mark.parametrize("descriptor,points,lines", [
    ("zmod:2", 4, 6), ("zmod:3", 9, 12), ("zmod:4", 16, 24), ("dual:2", 16, 24),
])
def test_affine_plane_sizes(descriptor, points, lines):
    A = affine_plane(parse_ring(descriptor))
    assert len(A.points) == points
    assert len(A.lines) == lines


def test_line_at_infinity_is_not_an_affine_line(z4):
    with pytest.raises(NotAPointError):
        aff_line(z4, (0, 0, 1))
    with pytest.raises(NotAPointError):
        aff_line(z4, (2, 2, 1))


def test_projective_points_at_infinity(z4):
    assert from_projective_point(mk_point(z4, (2, 3, 3))) == aff_point(z4, (2, 1))
    with pytest.raises(NotAPointError):
        from_projective_point(mk_point(z4, (1, 0, 2)))


def test_apart_lines_need_not_meet_over_z4(z4):
    k, l = aff_line(z4, (1, 0, 2)), aff_line(z4, (1, 2, 1))
    assert aff_li_apart(k, l)
    assert not parallel(k, l)
    assert aff_meet(k, l) is None
    assert meet(k.embed(), l.embed()) == mk_point(z4, (0, 1, 2))


def test_meet_of_axes(z4):
    x_axis, y_axis = aff_line(z4, (0, 1, 0)), aff_line(z4, (1, 0, 0))
    assert aff_meet(x_axis, y_axis) == aff_point(z4, (0, 0))


def test_join_of_apart_points(z4):
    A, B = aff_point(z4, (0, 0)), aff_point(z4, (1, 2))
    l = aff_line_through(A, B)
    assert aff_incident(A, l) and aff_incident(B, l)
    with pytest.raises(NotApartError):
        aff_line_through(A, aff_point(z4, (2, 2)))


def test_parallel_through_a_point(z4):
    k = aff_line(z4, (1, 2, 0))
    for A in affine_plane(z4).points:
        l = parallel_through(A, k)
        assert aff_incident(A, l)
        assert parallel(k, l)


def test_parallel_lines_are_disjoint(z4):
    k, l = aff_line(z4, (0, 1, 0)), aff_line(z4, (0, 1, 1))
    assert parallel(k, l) and aff_li_apart(k, l)
    for A in affine_plane(z4).points:
        assert aff_outside(A, k) or aff_outside(A, l)


def test_not_apart_points_over_z4(z4):
    assert not aff_apart(aff_point(z4, (0, 0)), aff_point(z4, (2, 0)))
    assert aff_apart(aff_point(z4, (0, 0)), aff_point(z4, (2, 1)))


@pytest.mark.parametrize("descriptor", ["zmod:2", "zmod:3", "zmod:4", "dual:2"])
def test_derived_plane_is_the_coordinate_plane(descriptor):
    R = parse_ring(descriptor)
    derived = derive_affine(R, mk_line(R, (0, 0, 1)))
    point_map, line_map = derived_to_affine(R)
    phi = PlaneMorphism(derived.export(), affine_plane(R).export(), point_map, line_map)
    report = check_isomorphism(phi)
    assert report.passed, report.lines()


def test_derived_plane_rejects_bad_inputs():
    P = projective_plane(ZModRing(2)).export()
    with pytest.raises(ValueError):
        DerivedAffinePlane(P, P.n_lines)
    A = affine_plane(ZModRing(2)).export()
    with pytest.raises(ValueError):
        DerivedAffinePlane(A, 0)


def test_derived_plane_from_any_line_of_fano():
    P = projective_plane(ZModRing(2)).export()
    for linf in range(P.n_lines):
        derived = DerivedAffinePlane(P, linf)
        assert len(derived.point_map) == 4
        assert len(derived.line_map) == 6
        report = verify_affine_axioms(derived)
        assert report.passed, report.lines()


def test_z2_affine_plane_passes_suite():
    report = verify_affine_axioms(ZModRing(2))
    assert report.passed, report.lines()
    assert report.finding("pappus_affine").mode == "exhaustive"


@pytest.mark.parametrize("descriptor", ["zmod:4", "dual:2"])
def test_order_four_affine_planes_pass_sampled_suite(descriptor):
    report = verify_affine_axioms(parse_ring(descriptor), seed=0, samples=300, exhaustive_limit=0)
    assert report.passed, report.lines()
    assert report.finding("desargues_small").mode == "sampled"


def test_z6_affine_plane_fails_cotransitivity():
    report = verify_affine_axioms(ZModRing(6), samples=10, exhaustive_limit=0)
    assert not report.passed
    assert not report.finding("pt_apart_cotransitive").passed


@pytest.mark.parametrize("variant", DESARGUES_VARIANTS)
def test_desargues_variants_z3(variant):
    tally = verify_desargues_variant(ZModRing(3), variant, seed=0, samples=200, exhaustive_limit=100_000)
    assert tally.passed, tally.witness
    assert tally.checked > 0


def test_unknown_desargues_variant():
    with pytest.raises(ValueError):
        verify_desargues_variant(ZModRing(2), "six-point")


@pytest.mark.slow
def test_z3_affine_plane_passes_suite():
    report = verify_affine_axioms(ZModRing(3))
    assert report.passed, report.lines()


def _rational_triangles():
    Q = RationalRing()
    pts = {name: aff_point(Q, v) for name, v in (
        ("A", (0, 0)), ("B", (1, 1)), ("C", (3, 0)), ("A2", (0, 2)), ("B2", (1, 3)), ("C2", (3, 2)),
    )}
    lines = {name: aff_line(Q, v) for name, v in (
        ("k", (1, 0, 0)), ("l", (1, 0, -1)), ("m", (1, 0, -3)),
        ("nA", (1, -1, 0)), ("nA2", (1, -1, 2)), ("nC", (1, 2, -3)), ("nC2", (1, 2, -7)),
    )}
    return pts, lines


def test_small_desargues_over_the_rationals():
    pts, lines = _rational_triangles()
    result = desargues_small_check({**pts, **lines})
    assert result.outcome == HOLDS
    moved = dict(pts, C2=aff_point(RationalRing(), (3, 5)))
    assert desargues_small_check({**moved, **lines}).outcome == PREMISES_FAIL


def test_parallel_variant_over_the_rationals():
    pts, lines = _rational_triangles()
    config = {**pts, "k": lines["k"], "l": lines["l"], "m": lines["m"]}
    assert desargues_variants_check("parallel-3", config).outcome == HOLDS
    with pytest.raises(ValueError):
        desargues_variants_check("six-point", config)


def test_affine_pappus_over_the_rationals():
    Q = RationalRing()
    # bb' = ac' = a'c with a, b, c = 1, 2, 4 on the x-axis
    config = {
        "k": aff_line(Q, (0, 1, 0)), "l": aff_line(Q, (1, 0, 0)), "P": aff_point(Q, (0, 0)),
        "A": aff_point(Q, (1, 0)), "B": aff_point(Q, (2, 0)), "C": aff_point(Q, (4, 0)),
        "A2": aff_point(Q, (0, 1)), "B2": aff_point(Q, (0, 2)), "C2": aff_point(Q, (0, 4)),
    }
    assert pappus_affine_check(config).outcome == HOLDS


def test_coordinate_and_synthetic_checks_agree_on_z3():
    R = ZModRing(3)
    A = affine_plane(R)
    plane = A.export()
    pts, lines = (
        {name: A.point(*v) for name, v in (
            ("A", (0, 0)), ("B", (1, 1)), ("C", (2, 0)), ("A2", (0, 2)), ("B2", (1, 0)), ("C2", (2, 2)),
        )},
        {name: A.line(*v) for name, v in (
            ("k", (1, 0, 0)), ("l", (1, 0, 2)), ("m", (1, 0, 1)),
            ("nA", (1, 2, 0)), ("nA2", (1, 2, 2)), ("nC", (1, 1, 1)), ("nC2", (1, 1, 2)),
        )},
    )
    coords = desargues_small_check({**pts, **lines})
    indices = {**{n: A.point_index[p] for n, p in pts.items()}, **{n: A.line_index[l] for n, l in lines.items()}}
    assert desargues_small_check(indices, plane) == coords
    assert coords.outcome == HOLDS
