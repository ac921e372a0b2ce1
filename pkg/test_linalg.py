import pytest
from hypothesis import given, strategies as st
from algebra.ring import NotInvertibleError, RationalRing, ZModRing, parse_ring
from algebra.linalg import (
    AffMatrix, Mat2, Mat3, adjugate3, cross, det2, det3, dot, enumerate_G, enumerate_H, g_identity, g_inverse,
    g_mul, h_canonicalize, h_identity, h_inverse, h_mul, inverse3,
)


def test_cross_is_orthogonal_to_both():
    R = ZModRing(4)
    a, b = (1, 2, 3), (2, 3, 1)
    c = cross(R, a, b)
    assert dot(R, a, c) == 0
    assert dot(R, b, c) == 0


def test_cross_known_value():
    Q = RationalRing()
    assert cross(Q, (1, 0, 0), (0, 1, 0)) == (0, 0, 1)


def test_det_and_adjugate():
    R = ZModRing(6)
    m = Mat3.from_ints(R, ((3, 0, 1), (0, 1, 0), (2, 0, 1)))
    assert det3(m) == 1
    assert m.mul(adjugate3(m)) == Mat3.identity(R).scaled(det3(m))


def test_inverse_over_z4():
    R = ZModRing(4)
    m = Mat3.from_ints(R, ((1, 2, 0), (0, 1, 3), (2, 0, 1)))
    assert R.is_invertible(det3(m))
    assert m.mul(inverse3(m)) == Mat3.identity(R)
    assert inverse3(m).mul(m) == Mat3.identity(R)


def test_inverse_of_singular_matrix_raises():
    R = ZModRing(4)
    m = Mat3.from_ints(R, ((2, 0, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(NotInvertibleError):
        inverse3(m)


def test_aff_matrix_rejects_bad_bottom_row():
    R = ZModRing(3)
    with pytest.raises(ValueError):
        AffMatrix.from_ints(R, ((1, 0, 0), (0, 1, 0), (1, 0, 1)))
    with pytest.raises(NotInvertibleError):
        AffMatrix.from_ints(R, ((0, 0, 1), (0, 1, 0), (0, 0, 1)))


def test_g_group_laws_z3():
    R = ZModRing(3)
    g = AffMatrix.from_ints(R, ((2, 1, 1), (0, 1, 2), (0, 0, 1)))
    assert g_mul(g, g_inverse(g)) == g_identity(R)
    assert g.apply_point((0, 0)) == (1, 2)


def test_h_canonical_form():
    R = ZModRing(4)
    m = Mat3.from_ints(R, ((0, 3, 0), (3, 0, 0), (0, 0, 3)))
    h = h_canonicalize(m)
    assert h.matrix.rows[0] == (0, 1, 0)
    # unit multiples share a class
    assert h_canonicalize(m.scaled(3)) == h


def test_h_group_laws_z4():
    R = ZModRing(4)
    h = h_canonicalize(Mat3.from_ints(R, ((1, 2, 0), (0, 1, 3), (2, 0, 1))))
    assert h_mul(h, h_inverse(h)) == h_identity(R)
    assert h_mul(h_identity(R), h) == h


@pytest.mark.parametrize("descriptor,order", [("zmod:2", 24), ("zmod:3", 432)])
def test_order_of_G(descriptor, order):
    assert len(enumerate_G(parse_ring(descriptor))) == order


def test_order_of_G_by_brute_force_z2():
    R = ZModRing(2)
    count = 0
    for a in range(2 ** 6):
        bits = [(a >> k) & 1 for k in range(6)]
        m = Mat3(R, ((bits[0], bits[1], bits[2]), (bits[3], bits[4], bits[5]), (0, 0, 1)))
        count += R.is_invertible(det3(m))
    assert count == len(enumerate_G(R))


@pytest.mark.parametrize("descriptor,order", [("zmod:2", 168), ("zmod:3", 5616)])
def test_order_of_H(descriptor, order):
    H = enumerate_H(parse_ring(descriptor))
    assert len(H) == order
    assert len(set(H)) == order


def test_h_closed_under_product_z2():
    H = enumerate_H(ZModRing(2))
    members = set(H)
    for g in H[:20]:
        for h in H:
            assert h_mul(g, h) in members


@given(st.lists(st.integers(min_value=0, max_value=8), min_size=9, max_size=9),
       st.sampled_from([1, 2, 4, 5, 7, 8]))
def test_h_canonical_form_independent_of_unit(entries, unit):
    R = ZModRing(9)
    m = Mat3(R, (tuple(entries[0:3]), tuple(entries[3:6]), tuple(entries[6:9])))
    if not R.is_invertible(det3(m)):
        return
    assert h_canonicalize(m) == h_canonicalize(m.scaled(unit))


@given(st.lists(st.integers(min_value=0, max_value=8), min_size=9, max_size=9))
def test_inverse_roundtrip_z9(entries):
    R = ZModRing(9)
    m = Mat3(R, (tuple(entries[0:3]), tuple(entries[3:6]), tuple(entries[6:9])))
    if R.is_invertible(det3(m)):
        assert inverse3(m).mul(m) == Mat3.identity(R)


def test_det2_over_z6():
    R = ZModRing(6)
    assert det2(Mat2.from_ints(R, ((3, 2), (1, 1)))) == 1
    assert not R.is_invertible(det2(Mat2.from_ints(R, ((2, 0), (0, 1)))))
