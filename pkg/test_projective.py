import random
import pytest
from hypothesis import given, strategies as st
from algebra.ring import InfiniteRingError, RationalRing, ZModRing, parse_ring
from algebra.linalg import Mat3, enumerate_H
from geometry.axioms import HOLDS, PREMISES_FAIL, VIOLATED, CheckResult
from geometry.projective import (
    DeltaSideConditionError, Frame4, GeneralPositionError, NotAPointError, NotApartError, collinear_det,
    act_H, canonicalize, check_locality_sequents, delta, delta_criterion, delta_det, delta_search,
    delta_side_conditions, desargues_check, dualize, frame_to_H, incident, is_collinear_with,
    li_apart, line_through, matrix_action_failure, meet, mk_line, mk_point, mk_proj, non_collinear,
    non_collinear_symmetric, non_concurrent, outside, pairing, pappus_check, projective_plane, pt_apart,
    standard_frame, verify_projective_axioms,
)


@pytest.fixture(scope="module")
def z4():
    return ZModRing(4)


@pytest.mark.parametrize("descriptor,size", [("zmod:2", 7), ("zmod:3", 13), ("zmod:4", 28), ("dual:2", 28)])
def test_plane_sizes(descriptor, size):
    P = projective_plane(parse_ring(descriptor))
    assert len(P.points) == size
    assert len(P.lines) == size


def test_infinite_ring_has_no_enumeration():
    with pytest.raises(InfiniteRingError):
        projective_plane(RationalRing())


def test_canonical_representative(z4):
    assert canonicalize(z4, (2, 3, 1)) == (2, 1, 3)
    assert mk_point(z4, (3, 0, 2)) == mk_point(z4, (1, 0, 2))
    with pytest.raises(NotAPointError):
        mk_point(z4, (2, 2, 0))


@given(st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)), st.sampled_from([1, 2, 4, 5, 7, 8]))
def test_points_do_not_depend_on_representative(vec, unit):
    R = ZModRing(9)
    if not any(R.is_invertible(x) for x in vec):
        return
    scaled = tuple(R.mul(unit, x) for x in vec)
    assert mk_point(R, vec) == mk_point(R, scaled)


def test_join_and_meet_over_the_rationals():
    Q = RationalRing()
    A, B = mk_point(Q, (1, 0, 1)), mk_point(Q, (0, 1, 1))
    l = line_through(A, B)
    assert incident(A, l) and incident(B, l)
    k = mk_line(Q, (1, -1, 0))
    X = meet(k, l)
    assert incident(X, k) and incident(X, l)
    assert X == mk_point(Q, (1, 1, 2))


def test_join_needs_apart_points(z4):
    with pytest.raises(NotApartError):
        line_through(mk_point(z4, (2, 2, 1)), mk_point(z4, (2, 0, 1)))


def test_points_on_two_lines_over_z4(z4):
    A, B = mk_point(z4, (2, 2, 1)), mk_point(z4, (2, 0, 1))
    l, m = mk_line(z4, (1, 0, 2)), mk_line(z4, (1, 2, 2))
    assert all(incident(P, x) for P in (A, B) for x in (l, m))
    assert A != B and l != m
    assert not pt_apart(A, B)
    assert not li_apart(l, m)


def test_neither_on_nor_outside_over_z4(z4):
    A, B = mk_point(z4, (1, 0, 0)), mk_point(z4, (0, 2, 1))
    l = mk_line(z4, (0, 1, 0))
    assert incident(A, l) and pt_apart(A, B)
    assert not incident(B, l) and not outside(B, l)
    assert pairing(B, l) == 2


def test_collinearity(z4):
    A, B, C = mk_point(z4, (1, 0, 0)), mk_point(z4, (0, 1, 0)), mk_point(z4, (1, 1, 0))
    assert is_collinear_with(A, B, C)
    assert not non_collinear(C, A, B)
    O = mk_point(z4, (0, 0, 1))
    assert non_collinear(O, A, B)
    assert non_collinear_symmetric(O, A, B)


def test_dual_statements(z4):
    A, B = mk_point(z4, (1, 0, 0)), mk_point(z4, (0, 1, 0))
    assert dualize(dualize(A)) == A
    assert li_apart(dualize(A), dualize(B)) == pt_apart(A, B)
    k, l, m = mk_line(z4, (1, 0, 0)), mk_line(z4, (0, 1, 0)), mk_line(z4, (0, 0, 1))
    assert non_concurrent(k, l, m)


def _side_condition_tuples(P):
    for k in P.lines:
        for l in P.lines:
            for A in P.points:
                for B in P.points:
                    if delta_side_conditions(k, l, A, B):
                        yield k, l, A, B


def test_delta_criterion_matches_search_on_fano():
    P = projective_plane(ZModRing(2))
    count = 0
    for k, l, A, B in _side_condition_tuples(P):
        count += 1
        assert delta_det(k, l, A, B) == (delta_search(k, l, A, B) is not None)
    assert count > 0


def _check_delta_samples(P, count, seed=0):
    rng = random.Random(seed)
    checked = 0
    while checked < count:
        k, l = rng.choice(P.lines), rng.choice(P.lines)
        A, B = rng.choice(P.points), rng.choice(P.points)
        if not delta_side_conditions(k, l, A, B):
            continue
        checked += 1
        found = delta_search(k, l, A, B) is not None
        assert delta_det(k, l, A, B) == found
        if found:
            assert delta_criterion(k, l, A, B).raw == 0


def test_delta_criterion_matches_search_sampled_z4(z4):
    _check_delta_samples(projective_plane(z4), 2000)


@pytest.mark.slow
def test_delta_criterion_matches_search_on_100k_z4_tuples(z4):
    _check_delta_samples(projective_plane(z4), 100_000, seed=1)


def test_delta_without_side_conditions(z4):
    k = mk_line(z4, (1, 0, 2))
    A = mk_point(z4, (2, 2, 1))
    with pytest.raises(DeltaSideConditionError):
        delta_det(k, k, A, A)
    # A on k: the witness X = A, r any line through A
    assert delta(k, k, A, A)


def test_delta_field_shortcut():
    Q = RationalRing()
    k = mk_line(Q, (1, 0, 0))
    A = mk_point(Q, (0, 1, 1))
    assert delta(k, k, A, A)


def test_desargues_premises_fail_when_b_is_on_every_line():
    Q = RationalRing()
    A, B, C, D = (mk_point(Q, v) for v in ((1, 0, 1), (0, 0, 1), (0, 1, 1), (1, 1, 1)))
    k, l, m, n = (mk_line(Q, v) for v in ((1, -2, 0), (2, 1, 0), (-2, 1, 0), (2, 2, -3)))
    result = desargues_check(A, B, C, D, k, l, m, n)
    assert result.outcome == PREMISES_FAIL
    assert result.reason == "B outside one of k,l,m"


def test_standard_frame_gives_identity(z4):
    h = frame_to_H(standard_frame(z4))
    assert h.matrix == Mat3.identity(z4)


def test_frame_to_H_inverts_the_action_z3():
    R = ZModRing(3)
    standard = standard_frame(R)
    for h in enumerate_H(R)[:200]:
        frame = act_H(h, standard)
        assert frame.in_general_position()
        assert frame_to_H(frame) == h


def test_frame_general_position_is_symmetric(z4):
    A, B, O, I = standard_frame(z4).points()
    assert Frame4(I, O, B, A).in_general_position()
    assert not Frame4(A, B, O, mk_point(z4, (1, 1, 0))).in_general_position()
    # third coordinate 2 is not a unit, so I sits on AB modulo the maximal ideal
    assert not Frame4(A, B, O, mk_point(z4, (1, 3, 2))).in_general_position()


def test_frame_over_z6_fails():
    R = ZModRing(6)
    frame = Frame4(mk_point(R, (1, 0, 0)), mk_point(R, (3, -1, 0)),
                   mk_point(R, (3, 2, 1)), mk_point(R, (1, 1, 1)))
    assert frame.in_general_position()
    with pytest.raises(GeneralPositionError) as info:
        frame_to_H(frame)
    m = info.value.matrix
    assert m == Mat3.from_ints(R, ((1, 3, 3), (0, -1, 2), (0, 0, 1)))
    # first failing point in enumeration order
    assert tuple(info.value.point) == (0, 1, 2)
    assert tuple(info.value.image) == (3, 3, 2)
    assert m.apply((3, 1, 2)) == (0, 3, 2)


def test_matrix_over_z6_fails_on_first_point():
    R = ZModRing(6)
    m = Mat3.from_ints(R, ((3, 0, 1), (0, 1, 0), (2, 0, 1)))
    point, image = matrix_action_failure(m)
    assert point.coords == (1, 0, 0)
    assert image == (3, 0, 2)


def test_locality_sequents():
    assert all(check_locality_sequents(ZModRing(4)).values())
    z6 = check_locality_sequents(ZModRing(6))
    assert not z6["ring_local"]
    assert not z6["pt_apart_cotransitive"]


def test_fano_passes_projective_suite():
    report = verify_projective_axioms(ZModRing(2))
    assert report.passed, report.lines()
    assert report.finding("desargues").mode == "exhaustive"
    assert report.finding("pappus").mode == "exhaustive"
    assert report.finding("pappus").premises_ok > 0


@pytest.mark.parametrize("descriptor", ["zmod:4", "dual:2"])
def test_order_four_planes_pass_sampled_suite(descriptor):
    report = verify_projective_axioms(parse_ring(descriptor), seed=0, samples=300, exhaustive_limit=0)
    assert report.passed, report.lines()
    pappus = report.finding("pappus")
    assert pappus.mode == "sampled"
    # the budget counts configurations that reach the conclusion, not walks
    assert pappus.premises_ok == pappus.target == 300
    assert pappus.walks >= 300
    assert pappus.line().endswith(f"sampled=300/300 walks={pappus.walks}")


def test_pappus_needs_the_conclusion_side_condition(z4):
    pts = [mk_point(z4, v) for v in ((2, 1, 0), (0, 2, 1), (1, 2, 2), (2, 1, 3), (2, 2, 1), (1, 0, 2))]
    sides = [mk_line(z4, v) for v in ((1, 2, 0), (2, 1, 2), (0, 1, 1), (1, 0, 2), (0, 1, 2), (2, 0, 1))]
    result = pappus_check(*pts, *sides)
    assert result == CheckResult(PREMISES_FAIL, "k_A#k_D or F#C")
    # every other premise holds, and the conclusion really fails
    kA, kD, F, C = sides[0], sides[3], pts[5], pts[2]
    assert not li_apart(kA, kD) and not pt_apart(F, C)
    assert delta_search(kA, kD, F, C) is None


def test_pappus_line_branch_uses_opposite_sides():
    R = ZModRing(2)
    A = B = C = mk_point(R, (0, 0, 1))
    D = E = F = mk_point(R, (0, 1, 0))
    sides = [mk_line(R, v) for v in ((0, 1, 0), (0, 1, 0), (1, 0, 0), (0, 0, 1), (1, 0, 0), (1, 0, 0))]
    result = pappus_check(A, B, C, D, E, F, *sides)
    assert result == CheckResult(PREMISES_FAIL, "A#B and D#E, or k_B#k_C and k_E#k_F")
    assert delta_search(sides[0], sides[3], F, C) is None


def test_z6_plane_fails_cotransitivity():
    report = verify_projective_axioms(ZModRing(6), samples=10, exhaustive_limit=0)
    finding = report.finding("pt_apart_cotransitive")
    assert not finding.passed
    assert finding.witness is not None


@pytest.mark.slow
def test_z3_plane_passes_projective_suite():
    report = verify_projective_axioms(ZModRing(3))
    assert report.passed, report.lines()
    assert report.finding("desargues").mode == "exhaustive"
    assert report.finding("pappus").mode == "exhaustive"


@pytest.mark.slow
def test_z4_plane_passes_full_sampled_suite():
    report = verify_projective_axioms(ZModRing(4), seed=0, samples=100000)
    assert report.passed, report.lines()
    for name in ("desargues", "pappus"):
        finding = report.finding(name)
        assert finding.mode == "sampled"
        assert finding.premises_ok == 100000


def test_mk_proj_and_collinear_det(z4):
    A = mk_proj(z4, (1, 0, 0))
    l = mk_proj(z4, (0, 1, 0), kind="line")
    assert incident(A, l)
    B, C = mk_point(z4, (0, 1, 0)), mk_point(z4, (1, 1, 2))
    assert collinear_det(A, B, C).raw == 2
    assert not is_collinear_with(A, B, C)
    assert not non_collinear(C, A, B)


def test_configurations_never_violated_on_fano():
    P = projective_plane(ZModRing(2))
    rng = random.Random(3)
    held = 0
    for _ in range(3000):
        pts = [rng.choice(P.points) for _ in range(6)]
        # sides of the hexagon through consecutive points
        sides = [line_through(pts[i], pts[(i + 1) % 6]) if pt_apart(pts[i], pts[(i + 1) % 6])
                 else rng.choice(P.lines) for i in range(6)]
        result = pappus_check(*pts, *sides)
        assert result.outcome != VIOLATED
        held += result.outcome == HOLDS
        d = desargues_check(*pts[:4], *(rng.choice(P.lines) for _ in range(4)))
        assert d.outcome != VIOLATED
    assert held > 0
