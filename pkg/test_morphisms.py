import pytest
from algebra.ring import DualNumberRing, RingHom, ZModRing, ring_homs
from algebra.linalg import Mat3, enumerate_G, enumerate_H, h_canonicalize, h_mul
from geometry.affine import affine_plane, derive_affine
from geometry.morphisms import (
    DecompositionError, MatrixActionError, PlaneMorphism, auto_from_G, auto_from_H, check_isomorphism,
    decompose_aff, decompose_proj, extend_affine_to_projective, from_ring_hom, identity_morphism,
    parse_morphism, restrict_to_affine, serialize_morphism, verify_morphism,
)
from geometry.projective import mk_line, projective_plane
from geometry.synthetic import PlaneFormatError


@pytest.fixture(scope="module")
def z3():
    return ZModRing(3)


@pytest.fixture(scope="module")
def reduction():
    return ring_homs(ZModRing(4), ZModRing(2))[0]


def test_identity_is_an_isomorphism():
    plane = projective_plane(ZModRing(2)).export()
    report = check_isomorphism(identity_morphism(plane))
    assert report.passed, report.lines()
    assert all(line.startswith("CHECK ") for line in report.lines())


@pytest.mark.parametrize("kind", ["projective", "affine"])
def test_reduction_mod_two_is_a_morphism(reduction, kind):
    phi = from_ring_hom(reduction, kind)
    report = verify_morphism(phi)
    assert report.passed, report.lines()
    # sixteen affine points collapse onto four
    assert not check_isomorphism(phi).passed


def test_killing_epsilon_is_not_an_isomorphism():
    D = DualNumberRing(2)
    homs = ring_homs(D, D)
    kill = next(h for h in homs if not h.equals(RingHom.identity(D)))
    phi = from_ring_hom(kill, "projective")
    assert verify_morphism(phi).passed
    report = check_isomorphism(phi)
    assert not report.passed


def test_broken_table_fails_verification():
    plane = projective_plane(ZModRing(2)).export()
    points = list(range(plane.n_points))
    points[0], points[1] = points[1], points[0]
    phi = PlaneMorphism(plane, plane, points, list(range(plane.n_lines)))
    assert not verify_morphism(phi).passed


def test_morphism_tables_must_cover_source():
    plane = projective_plane(ZModRing(2)).export()
    with pytest.raises(ValueError):
        PlaneMorphism(plane, plane, [0], list(range(plane.n_lines)))


def test_projective_automorphisms_z3(z3):
    for h in enumerate_H(z3)[::500]:
        phi = auto_from_H(h)
        assert check_isomorphism(phi).passed
        h2, f = decompose_proj(phi)
        assert h2 == h
        assert f.equals(RingHom.identity(z3))


def test_affine_automorphisms_z3(z3):
    for g in enumerate_G(z3)[::37]:
        phi = auto_from_G(g)
        assert check_isomorphism(phi).passed
        g2, f = decompose_aff(phi)
        assert g2 == g
        assert f.equals(RingHom.identity(z3))


def test_decompose_composite_over_z4(reduction):
    Z2 = ZModRing(2)
    h = h_canonicalize(Mat3.from_ints(Z2, ((0, 1, 0), (1, 1, 0), (0, 0, 1))))
    phi = auto_from_H(h).compose(from_ring_hom(reduction, "projective"))
    h2, f = decompose_proj(phi)
    assert h2 == h
    assert f.table() == reduction.table()


def test_decompose_affine_composite_over_z4(reduction):
    g = enumerate_G(ZModRing(2))[7]
    phi = auto_from_G(g).compose(from_ring_hom(reduction, "affine"))
    g2, f = decompose_aff(phi)
    assert g2 == g
    assert f.table() == reduction.table()


def test_decompose_needs_ring_planes():
    plane = projective_plane(ZModRing(2)).export()
    with pytest.raises(DecompositionError):
        decompose_proj(identity_morphism(plane))


def test_decompose_over_non_local_ring():
    Z6 = ZModRing(6)
    plane = projective_plane(Z6).export()
    with pytest.raises(DecompositionError):
        decompose_proj(identity_morphism(plane, Z6))


def test_matrix_over_z6_is_not_an_automorphism():
    m = Mat3.from_ints(ZModRing(6), ((3, 0, 1), (0, 1, 0), (2, 0, 1)))
    with pytest.raises(MatrixActionError) as info:
        auto_from_H(m)
    assert tuple(info.value.point) == (1, 0, 0)
    assert tuple(info.value.image) == (3, 0, 2)


def test_composition_checks_planes(z3):
    P2 = projective_plane(ZModRing(2)).export()
    P3 = projective_plane(z3).export()
    with pytest.raises(ValueError):
        identity_morphism(P2).compose(identity_morphism(P3))


def test_affine_morphism_extends_to_projective(z3):
    derived = derive_affine(z3, mk_line(z3, (0, 0, 1)))
    for g in enumerate_G(z3)[::53]:
        psi = auto_from_H(h_canonicalize(g.matrix))
        phi = restrict_to_affine(psi, derived, derived)
        assert verify_morphism(phi).passed
        extended = extend_affine_to_projective(phi, derived, derived)
        assert extended.point_map == psi.point_map
        assert extended.line_map == psi.line_map


def test_restriction_needs_line_at_infinity_fixed(z3):
    derived = derive_affine(z3, mk_line(z3, (0, 0, 1)))
    swap = auto_from_H(Mat3.from_ints(z3, ((0, 0, 1), (0, 1, 0), (1, 0, 0))))
    with pytest.raises(ValueError):
        restrict_to_affine(swap, derived, derived)


def test_morphism_file_roundtrip(reduction):
    phi = from_ring_hom(reduction, "affine")
    text = serialize_morphism(phi)
    assert text.startswith("morphism affine\npoints 16\nlines 24\n")
    again = parse_morphism(text, phi.source, phi.target)
    assert again.point_map == phi.point_map
    assert again.line_map == phi.line_map


@pytest.mark.parametrize("text,line_no", [
    ("morphism projective\npoints 7\n", 2),
    ("morphism affine\npoints 7\nlines 7\n", 1),
    ("morphism projective\npoints 6\nlines 7\n", 2),
    ("morphism projective\npoints 7\nlines 7\npoint 0 9\n", 4),
    ("morphism projective\npoints 7\nlines 7\narrow 0 0\n", 4),
])
def test_morphism_format_errors(text, line_no):
    plane = projective_plane(ZModRing(2)).export()
    with pytest.raises(PlaneFormatError) as info:
        parse_morphism(text, plane, plane)
    assert info.value.line_no == line_no


def test_unmapped_entries_are_reported():
    plane = projective_plane(ZModRing(2)).export()
    text = "morphism projective\npoints 7\nlines 7\n" + "".join(f"point {i} {i}\n" for i in range(7))
    with pytest.raises(PlaneFormatError) as info:
        parse_morphism(text, plane, plane)
    assert "line 0 is not mapped" in str(info.value)


@pytest.fixture(scope="module")
def z2():
    return ZModRing(2)


def test_every_projective_automorphism_z2_decomposes(z2):
    identity = RingHom.identity(z2)
    group = enumerate_H(z2)
    assert len(group) == 168
    for h in group:
        phi = auto_from_H(h)
        h2, f = decompose_proj(phi)
        assert h2 == h
        assert f.equals(identity)
        assert auto_from_H(h2).compose(from_ring_hom(f, "projective")) == phi


def test_every_affine_automorphism_z2_decomposes(z2):
    identity = RingHom.identity(z2)
    group = enumerate_G(z2)
    assert len(group) == 24
    for g in group:
        phi = auto_from_G(g)
        g2, f = decompose_aff(phi)
        assert g2 == g
        assert f.equals(identity)
        assert auto_from_G(g2).compose(from_ring_hom(f, "affine")) == phi


def test_every_composite_over_z4_decomposes(z2):
    for f in ring_homs(ZModRing(4), z2):
        projective, affine = from_ring_hom(f, "projective"), from_ring_hom(f, "affine")
        for h in enumerate_H(z2):
            h2, f2 = decompose_proj(auto_from_H(h).compose(projective))
            assert h2 == h
            assert f2.table() == f.table()
        for g in enumerate_G(z2):
            g2, f2 = decompose_aff(auto_from_G(g).compose(affine))
            assert g2 == g
            assert f2.table() == f.table()


@pytest.mark.slow
def test_matrix_action_respects_composition_z2(z2):
    group = enumerate_H(z2)
    autos = [auto_from_H(h) for h in group]
    for i, h1 in enumerate(group):
        for j, h2 in enumerate(group):
            composite = autos[i].compose(autos[j])
            product = h_mul(h1, h2)
            assert composite == autos[group.index(product)]
            assert decompose_proj(composite)[0] == product


def test_every_line_fixing_automorphism_z2_extends(z2):
    derived = derive_affine(z2, mk_line(z2, (0, 0, 1)))
    extended_count = 0
    for h in enumerate_H(z2):
        psi = auto_from_H(h)
        if psi.line_map[derived.linf] != derived.linf:
            with pytest.raises(ValueError):
                restrict_to_affine(psi, derived, derived)
            continue
        phi = restrict_to_affine(psi, derived, derived)
        assert verify_morphism(phi).passed
        extended = extend_affine_to_projective(phi, derived, derived)
        assert extended.point_map == psi.point_map
        assert extended.line_map == psi.line_map
        extended_count += 1
    assert extended_count == len(enumerate_G(z2))
