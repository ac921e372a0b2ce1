import pytest
from algebra.ring import ZModRing
from geometry.affine import affine_plane
from geometry.projective import projective_plane
from geometry.synthetic import (
    ConstructionError, PlaneFormatError, SyntheticPlane, bits, export_plane, lowest, parse_plane,
    serialize_plane, verify_synthetic,
)


@pytest.fixture(scope="module")
def fano():
    return projective_plane(ZModRing(2)).export()


@pytest.fixture(scope="module")
def z4_plane():
    return projective_plane(ZModRing(4)).export()


def test_bit_helpers():
    assert list(bits(0b101001)) == [0, 3, 5]
    assert lowest(0b1000) == 3
    assert lowest(0) is None


def test_fano_relations(fano):
    counts = fano.relation_counts()
    assert counts["apart_pt"] == 21
    assert counts["apart_li"] == 21
    assert counts["incident"] == 21
    assert counts["outside"] == 28
    assert counts["parallel"] == 0


def test_serialized_text_parses_back(fano):
    text = serialize_plane(fano, with_labels=True)
    assert text.startswith("plane projective\npoints 7\nlines 7\n")
    again = parse_plane(text)
    assert again == fano
    assert again.point_labels == fano.point_labels


def test_serialization_is_canonical(fano):
    assert serialize_plane(parse_plane(serialize_plane(fano))) == serialize_plane(fano)


def test_affine_export_keeps_parallel_classes():
    A = affine_plane(ZModRing(2)).export()
    assert A.kind == "affine"
    # three classes of two lines, each line parallel to itself
    assert A.relation_counts()["parallel"] == 6 + 3


def test_comments_and_blank_lines_are_skipped():
    plane = parse_plane("# a tiny plane\n\nplane affine\npoints 2\nlines 1\napart_pt 0 1\nincident 0 0\nincident 1 0\n")
    assert plane.n_points == 2
    assert plane.pt_apart(1, 0)
    assert plane.points_on(0) == [0, 1]


@pytest.mark.parametrize("text,line_no", [
    ("plane projective\npoints 2\n", 2),
    ("plane conic\npoints 2\nlines 1\n", 1),
    ("plane affine\npoints x\nlines 1\n", 2),
    ("plane affine\npoints 2\nlines 1\nmeets 0 0\n", 4),
    ("plane affine\npoints 2\nlines 1\nincident 0\n", 4),
    ("plane affine\npoints 2\nlines 1\nincident 5 0\n", 4),
    ("plane affine\npoints 2\nlines 1\nincident 0 1\n", 4),
    ("plane affine\npoints 2\nlines 1\napart_pt 1 1\n", 4),
    ("plane affine\npoints 2\nlines 1\nincident 0 0\n\noutside 0 0\n", 6),
    ("plane projective\npoints 2\nlines 2\nparallel 0 1\n", 4),
    ("plane affine\npoints 2\nlines 1\napart_pt -1 0\n", 4),
])
def test_format_errors_carry_line_numbers(text, line_no):
    with pytest.raises(PlaneFormatError) as info:
        parse_plane(text)
    assert info.value.line_no == line_no
    assert f"at line {line_no}" in str(info.value)


def test_projective_plane_rejects_parallel_relation():
    with pytest.raises(PlaneFormatError):
        SyntheticPlane("projective", 2, 2, parallel=[(0, 1)])


def test_constructions_pick_first_witness(fano):
    k = fano.join(0, 1)
    assert fano.is_incident(0, k) and fano.is_incident(1, k)
    assert fano.join(0, 1) == k
    l = fano.join(0, 2)
    assert fano.meet_strict(k, l) == 0
    p = fano.first_outside(k)
    assert fano.is_outside(p, k)
    assert fano.first_outside(k, avoid=1 << p) != p
    assert fano.non_collinear(p, 0, 1)


def test_constructions_without_witness(z4_plane):
    # (2,2,1) and (2,0,1) are distinct but not apart over Z/4
    P = projective_plane(ZModRing(4))
    a = P.point_index[P.point(2, 2, 1)]
    b = P.point_index[P.point(2, 0, 1)]
    with pytest.raises(ConstructionError):
        z4_plane.join(a, b)
    with pytest.raises(ConstructionError):
        z4_plane.parallel_through(a, 0)


def test_first_apart(fano):
    p = fano.first_apart(0, 1)
    assert p not in (0, 1)
    assert fano.pt_apart(p, 0) and fano.pt_apart(p, 1)


def test_export_plane():
    plane = export_plane(affine_plane(ZModRing(2)))
    assert (plane.n_points, plane.n_lines) == (4, 6)


def test_verify_synthetic_on_a_parsed_plane(fano):
    report = verify_synthetic(parse_plane(serialize_plane(fano)), samples=50)
    assert report.theory == "projective"
    assert report.passed, report.lines()


def test_verify_synthetic_reports_witness():
    # two points, one line, no outside point
    plane = parse_plane("plane affine\npoints 2\nlines 1\napart_pt 0 1\nincident 0 0\nincident 1 0\nparallel 0 0\n")
    report = verify_synthetic(plane, configurations=False)
    finding = report.finding("line_has_outside_point")
    assert not finding.passed
    assert finding.witness == [0]
    assert report.lines()[0].startswith("AXIOM pt_apart_irreflexive PASS")
