import pytest
from algebra.ring import ZModRing, ring_homs
from geometry.affine import DerivedAffinePlane
from geometry.morphisms import from_ring_hom, identity_morphism, serialize_morphism
from geometry.projective import projective_plane
from geometry.synthetic import parse_plane
from manage import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def fano_file(tmp_path):
    path = tmp_path / "fano.txt"
    assert main(["build", "--ring", "zmod:2", "--output", str(path)]) == EXIT_OK
    return path


def test_build_reports_plane(tmp_path, capsys):
    path = tmp_path / "a4.txt"
    assert main(["export", "--ring", "zmod:4", "--kind", "affine", "--output", str(path)]) == EXIT_OK
    assert "PLANE affine zmod:4 points=16 lines=24" in capsys.readouterr().out
    assert parse_plane(path.read_text()).n_points == 16


def test_build_to_stdout(capsys):
    assert main(["build", "--ring", "zmod:2"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("plane projective\npoints 7\nlines 7\n")


def test_verify_fano(fano_file, capsys):
    assert main(["verify", str(fano_file)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "AXIOM join_exists PASS witness=()" in out
    assert "FAIL" not in out


def test_verify_z6_plane_fails(tmp_path, capsys):
    path = tmp_path / "z6.txt"
    main(["build", "--ring", "zmod:6", "--output", str(path)])
    assert main(["verify", str(path), "--samples", "10"]) == EXIT_FAILURE
    assert "AXIOM pt_apart_cotransitive FAIL" in capsys.readouterr().out


def test_verify_missing_file(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "nope.txt")]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err


def test_verify_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("plane projective\npoints 2\nlines 1\nincident 0 3\n")
    assert main(["verify", str(path)]) == EXIT_USAGE
    assert "at line 4" in capsys.readouterr().err


def test_counterexamples(capsys):
    assert main(["counterexamples"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "7/7 counterexamples reproduced" in out
    assert "DRIFT" not in out


def test_coordinatize_affine_plane(tmp_path, capsys):
    path = tmp_path / "a3.txt"
    main(["build", "--ring", "zmod:3", "--kind", "affine", "--output", str(path)])
    capsys.readouterr()
    assert main(["coordinatize", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "RING Tp size=3" in out
    assert "RING isomorphic to zmod:3" in out
    assert out.count("POINT ") == 9


def test_coordinatize_projective_plane_with_frame(fano_file, capsys):
    assert main(["coordinatize", str(fano_file), "--frame", "3,1,0,6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "RING Tp size=2 frame=(3,1,0,6)" in out
    assert "POINT (0,0,1) -> 0" in out


def test_coordinatize_with_sampling_budget(fano_file, capsys):
    assert main(["coordinatize", str(fano_file), "--seed", "3", "--samples", "50"]) == EXIT_OK
    assert "RING Tp size=2" in capsys.readouterr().out


def test_coordinatize_bad_frame(fano_file, capsys):
    assert main(["coordinatize", str(fano_file), "--frame", "1,2"]) == EXIT_USAGE


def test_coordinatize_non_local_plane(tmp_path, capsys):
    path = tmp_path / "a6.txt"
    main(["build", "--ring", "zmod:6", "--kind", "affine", "--output", str(path)])
    capsys.readouterr()
    assert main(["coordinatize", str(path)]) == EXIT_FAILURE
    assert "AXIOM pt_apart_cotransitive FAIL" in capsys.readouterr().out


def test_decompose_reduction(tmp_path, capsys):
    phi = from_ring_hom(ring_homs(ZModRing(4), ZModRing(2))[0], "projective")
    path = tmp_path / "phi.txt"
    path.write_text(serialize_morphism(phi))
    args = ["decompose", "--ring", "zmod:4", "--target-ring", "zmod:2", "--morphism", str(path)]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("MATRIX ")
    assert "HOM 3 -> 1" in out
    assert "HOM 2 -> 0" in out


def test_decompose_into_non_local_ring(tmp_path, capsys):
    Z6 = ZModRing(6)
    path = tmp_path / "id6.txt"
    path.write_text(serialize_morphism(identity_morphism(projective_plane(Z6).export())))
    args = ["decompose", "--ring", "zmod:6", "--target-ring", "zmod:6", "--morphism", str(path)]
    assert main(args) == EXIT_FAILURE
    assert "non-local" in capsys.readouterr().err


def test_check_morphism(fano_file, tmp_path, capsys):
    path = tmp_path / "id.txt"
    path.write_text(serialize_morphism(identity_morphism(parse_plane(fano_file.read_text()))))
    base = ["check-morphism", "--source", str(fano_file), "--target", str(fano_file), "--morphism", str(path)]
    assert main(base) == EXIT_OK
    assert main(base + ["--isomorphism"]) == EXIT_OK
    assert "CHECK points_bijective PASS" in capsys.readouterr().out


def test_extend_identity(fano_file, tmp_path, capsys):
    derived = DerivedAffinePlane(parse_plane(fano_file.read_text()), 0)
    morph = tmp_path / "aff.txt"
    morph.write_text(serialize_morphism(identity_morphism(derived.export())))
    out_path = tmp_path / "ext.txt"
    args = ["extend", "--source", str(fano_file), "--target", str(fano_file), "--source-line", "0",
            "--target-line", "0", "--morphism", str(morph), "--output", str(out_path)]
    assert main(args) == EXIT_OK
    text = out_path.read_text()
    assert text.startswith("morphism projective\npoints 7\nlines 7\n")
    assert all(f"point {i} {i}" in text for i in range(7))


def test_extend_rejects_line_out_of_range(fano_file, tmp_path):
    morph = tmp_path / "aff.txt"
    morph.write_text("morphism affine\npoints 4\nlines 6\n")
    args = ["extend", "--source", str(fano_file), "--target", str(fano_file), "--source-line", "9",
            "--target-line", "0", "--morphism", str(morph)]
    assert main(args) == EXIT_USAGE


def test_torsor(capsys):
    assert main(["torsor", "--ring", "zmod:2", "--kind", "affine"]) == EXIT_OK
    assert "TORSOR free PASS" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["build", "--ring", "field:5"]) == EXIT_USAGE
    assert main(["torsor", "--ring", "zmod:2", "--seed", "-1"]) == EXIT_USAGE
    with pytest.raises(SystemExit):
        main(["build", "--kind", "conic"])
