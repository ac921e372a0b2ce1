from typing import Dict, List, Optional, Sequence, Tuple
from pydantic import BaseModel, Field
from algebra.ring import (
    InfiniteRingError, NotInvertibleError, RingContext, RingDescriptorError, TableRing,
    ZModRing, check_local, find_ring_isomorphism, parse_ring,
)
from algebra.linalg import Mat3, det3, h_canonicalize
from config import settings, debug_print
from geometry import projective as proj
from geometry.affine import (
    DerivedAffinePlane, aff_li_apart, aff_line, aff_meet, affine_plane, parallel,
)
from geometry.axioms import PREMISES_FAIL, verify_plane
from geometry.coordinatize import (
    AxiomSuiteError, build_tp_ring, coord_map, default_affine_frame, proj_coordinatize,
    torsor_verify_H, torsor_verify_left, torsor_verify_right,
)
from geometry.morphisms import (
    DecompositionError, MatrixActionError, auto_from_H, check_isomorphism, decompose_aff,
    decompose_proj, extend_affine_to_projective, parse_morphism, serialize_morphism, verify_morphism,
)
from geometry.synthetic import (
    PLANE_KINDS, ConstructionError, PlaneFormatError, SyntheticPlane, parse_plane, serialize_plane,
)


# Bad input: unreadable files, unknown rings, wrong shapes
USAGE_ERRORS = (PlaneFormatError, RingDescriptorError, InfiniteRingError)

# The input was understood but the mathematics does not go through
MATH_ERRORS = (
    AxiomSuiteError, ConstructionError, DecompositionError, MatrixActionError,
    NotInvertibleError, proj.NotAPointError, proj.NotApartError, proj.GeneralPositionError,
    proj.DeltaSideConditionError,
)

TORSOR_KINDS = ("affine", "projective", "right")


class CounterexampleFinding(BaseModel):
    name: str = Field(..., description="Short identifier of the counterexample")
    description: str = Field(..., description="What the counterexample shows")
    reproduced: bool = Field(..., description="True when every recorded fact was re-checked")
    detail: str = Field("", description="The recomputed data, or the first fact that drifted")

    def line(self) -> str:
        status = "REPRODUCED" if self.reproduced else "DRIFT"
        return f"COUNTEREXAMPLE {self.name} {status} {self.detail}".rstrip()


def _facts(checks: Sequence[Tuple[str, bool]]) -> Tuple[bool, str]:
    """All facts hold, or the name of the first one that does not"""
    for name, ok in checks:
        if not ok:
            return False, f"failed: {name}"
    return True, ""


class GeometryOrchestrator:
    """
    Facade over the ring, plane, morphism and coordinatization engines.
    The CLI and the HTTP API both call into this class; every method returns
    plain data so the callers decide how to render it.
    """

    def __init__(self, verbose: bool = False):
        self.verbose = verbose
        self._progress("Initializing Geometry Orchestrator...")
        self._progress(f"✓ default ring {settings.default_ring}, seed {settings.seed}, samples {settings.samples}")

    def _progress(self, message: str):
        if self.verbose:
            print(message)

    # ------------------------------------------------------------------
    # Rings and planes
    # ------------------------------------------------------------------

    def check_local(self, ring: Optional[str] = None) -> Dict:
        ctx = parse_ring(ring or settings.default_ring)
        result = check_local(ctx)
        witness = [ctx.format(x) for x in result.witness] if result.witness else None
        sequents = proj.check_locality_sequents(ctx) if ctx.is_finite else {}
        self._progress(f"{'✓' if result.is_local else '✗'} {ctx.descriptor} local={result.is_local}")
        return {
            "ring": ctx.descriptor,
            "is_local": result.is_local,
            "witness": witness,
            "reason": result.reason,
            "sequents": sequents,
        }

    def build_plane(self, ring: str, kind: str) -> Dict:
        if kind not in PLANE_KINDS:
            raise PlaneFormatError(f"unknown plane kind '{kind}'")
        ctx = parse_ring(ring)
        ctx.require_finite(f"building {kind} plane")
        ring_plane = proj.projective_plane(ctx) if kind == "projective" else affine_plane(ctx)
        plane = ring_plane.export()
        self._progress(f"✓ built {kind} plane over {ctx.descriptor}: {plane.n_points} points, {plane.n_lines} lines")
        return {
            "ring": ctx.descriptor,
            "kind": kind,
            "n_points": plane.n_points,
            "n_lines": plane.n_lines,
            "plane_text": serialize_plane(plane, with_labels=True),
        }

    def verify_plane_text(
        self,
        plane_text: str,
        theory: Optional[str] = None,
        seed: Optional[int] = None,
        samples: Optional[int] = None,
    ) -> Dict:
        plane = parse_plane(plane_text)
        if theory is not None and theory not in PLANE_KINDS:
            raise PlaneFormatError(f"unknown theory '{theory}'")
        report = verify_plane(plane, theory, seed=seed, samples=samples)
        self._progress(f"{'✓' if report.passed else '✗'} {report.theory} suite on {plane.n_points} points")
        return {
            "theory": report.theory,
            "passed": report.passed,
            "lines": report.lines(),
            "report": report,
        }

    # ------------------------------------------------------------------
    # Counterexample regression suite
    # ------------------------------------------------------------------

    def counterexamples(self) -> List[CounterexampleFinding]:
        """Re-check every recorded counterexample; drift shows up as reproduced=False"""
        checks = [
            self._z4_points_on_two_lines,
            self._z4_neither_on_nor_outside,
            self._z6_locality_witness,
            self._z6_frame_failure,
            self._z6_matrix_failure,
            self._rational_desargues_premises,
            self._z4_affine_lines_do_not_meet,
        ]
        findings = []
        for check in checks:
            try:
                finding = check()
            except ValueError as e:
                name = check.__name__.lstrip("_")
                finding = CounterexampleFinding(
                    name=name, description=check.__doc__ or "", reproduced=False, detail=f"raised: {str(e)}",
                )
            self._progress(f"{'✓' if finding.reproduced else '✗'} {finding.name}")
            findings.append(finding)
        return findings

    def _z4_points_on_two_lines(self) -> CounterexampleFinding:
        """Over Z/4 two distinct points lie on two distinct lines"""
        R = parse_ring("zmod:4")
        A, B = proj.mk_point(R, (2, 2, 1)), proj.mk_point(R, (2, 0, 1))
        l, m = proj.mk_line(R, (1, 0, 2)), proj.mk_line(R, (1, 2, 2))
        ok, detail = _facts([
            ("A on l", proj.incident(A, l)),
            ("A on m", proj.incident(A, m)),
            ("B on l", proj.incident(B, l)),
            ("B on m", proj.incident(B, m)),
            ("A != B", A != B),
            ("l != m", l != m),
            ("not A#B", not proj.pt_apart(A, B)),
            ("not l#m", not proj.li_apart(l, m)),
        ])
        return CounterexampleFinding(
            name="z4_points_on_two_lines", description=self._z4_points_on_two_lines.__doc__,
            reproduced=ok, detail=detail or f"A={A} B={B} l={l} m={m}",
        )

    def _z4_neither_on_nor_outside(self) -> CounterexampleFinding:
        """Over Z/4 a point apart from a point of l is neither on l nor outside l"""
        R = parse_ring("zmod:4")
        A, B = proj.mk_point(R, (1, 0, 0)), proj.mk_point(R, (0, 2, 1))
        l = proj.mk_line(R, (0, 1, 0))
        ok, detail = _facts([
            ("A on l", proj.incident(A, l)),
            ("A#B", proj.pt_apart(A, B)),
            ("B not on l", not proj.incident(B, l)),
            ("B not outside l", not proj.outside(B, l)),
        ])
        return CounterexampleFinding(
            name="z4_neither_on_nor_outside", description=self._z4_neither_on_nor_outside.__doc__,
            reproduced=ok, detail=detail or f"A={A} B={B} l={l} pairing={R.format(proj.pairing(B, l))}",
        )

    def _z6_locality_witness(self) -> CounterexampleFinding:
        """Z/6 is not local: 3+2 is a unit while 3 and 2 are not"""
        R = parse_ring("zmod:6")
        result = check_local(R)
        ok, detail = _facts([
            ("Z/6 not local", not result.is_local),
            ("witness (3,2)", result.witness == (3, 2)),
        ])
        return CounterexampleFinding(
            name="z6_locality_witness", description=self._z6_locality_witness.__doc__,
            reproduced=ok, detail=detail or f"witness=({result.witness[0]},{result.witness[1]})",
        )

    def _z6_frame_failure(self) -> CounterexampleFinding:
        """Over Z/6 the matrix of a frame in general position sends (3,1,2) to a non-point"""
        R = parse_ring("zmod:6")
        frame = proj.Frame4(
            proj.mk_point(R, (1, 0, 0)), proj.mk_point(R, (3, -1, 0)),
            proj.mk_point(R, (3, 2, 1)), proj.mk_point(R, (1, 1, 1)),
        )
        expected = Mat3.from_ints(R, ((1, 3, 3), (0, -1, 2), (0, 0, 1)))
        try:
            proj.frame_to_H(frame)
        except proj.GeneralPositionError as e:
            if e.matrix is None:
                return CounterexampleFinding(
                    name="z6_frame_failure", description=self._z6_frame_failure.__doc__,
                    reproduced=False, detail=f"failed: {str(e)}",
                )
            image = e.matrix.apply((3, 1, 2))
            ok, detail = _facts([
                ("frame in general position", frame.in_general_position()),
                ("matrix is a unit multiple of the recorded one",
                 h_canonicalize(e.matrix) == h_canonicalize(expected)),
                ("(3,1,2) not sent to a point", not any(R.is_invertible(x) for x in image)),
            ])
            return CounterexampleFinding(
                name="z6_frame_failure", description=self._z6_frame_failure.__doc__,
                reproduced=ok,
                detail=detail or f"matrix={e.matrix.format()} image(3,1,2)={proj.format_vec(R, image)}",
            )
        return CounterexampleFinding(
            name="z6_frame_failure", description=self._z6_frame_failure.__doc__,
            reproduced=False, detail="failed: frame matrix acts on every point",
        )

    def _z6_matrix_failure(self) -> CounterexampleFinding:
        """An invertible matrix over Z/6 that sends (1,0,0) to a non-point"""
        R = parse_ring("zmod:6")
        m = Mat3.from_ints(R, ((3, 0, 1), (0, 1, 0), (2, 0, 1)))
        try:
            auto_from_H(m)
        except MatrixActionError as e:
            image = tuple(e.image) if e.image is not None else ()
            ok, detail = _facts([
                ("det is a unit", R.is_invertible(det3(m))),
                ("failing point (1,0,0)", tuple(e.point) == (1, 0, 0)),
                ("image (3,0,2)", image == (3, 0, 2)),
            ])
            return CounterexampleFinding(
                name="z6_matrix_failure", description=self._z6_matrix_failure.__doc__,
                reproduced=ok, detail=detail or f"matrix={m.format()} image={proj.format_vec(R, image)}",
            )
        return CounterexampleFinding(
            name="z6_matrix_failure", description=self._z6_matrix_failure.__doc__,
            reproduced=False, detail="failed: matrix acts on every point",
        )

    def _rational_desargues_premises(self) -> CounterexampleFinding:
        """Over the rationals a configuration with B on k, l and m fails the Desargues premises"""
        Q = parse_ring("rational")
        A, B, C, D = (proj.mk_point(Q, v) for v in ((1, 0, 1), (0, 0, 1), (0, 1, 1), (1, 1, 1)))
        k, l, m, n = (proj.mk_line(Q, v) for v in ((1, -2, 0), (2, 1, 0), (-2, 1, 0), (2, 2, -3)))
        result = proj.desargues_check(A, B, C, D, k, l, m, n)
        ok, detail = _facts([
            ("B on k, l and m", all(proj.incident(B, x) for x in (k, l, m))),
            ("premises fail", result.outcome == PREMISES_FAIL),
            ("reason names B", result.reason == "B outside one of k,l,m"),
        ])
        return CounterexampleFinding(
            name="rational_desargues_premises", description=self._rational_desargues_premises.__doc__,
            reproduced=ok, detail=detail or f"outcome={result.outcome} reason='{result.reason}'",
        )

    def _z4_affine_lines_do_not_meet(self) -> CounterexampleFinding:
        """Over Z/4 two apart, non-parallel affine lines have no common affine point"""
        R = parse_ring("zmod:4")
        k, l = aff_line(R, (1, 0, 2)), aff_line(R, (1, 2, 1))
        X = proj.meet(k.embed(), l.embed())
        ok, detail = _facts([
            ("k#l", aff_li_apart(k, l)),
            ("not parallel", not parallel(k, l)),
            ("no affine meet", aff_meet(k, l) is None),
            ("projective meet (0,1,2)", X == proj.mk_point(R, (0, 1, 2))),
        ])
        return CounterexampleFinding(
            name="z4_affine_lines_do_not_meet", description=self._z4_affine_lines_do_not_meet.__doc__,
            reproduced=ok, detail=detail or f"k={k.format()} l={l.format()} meet={X}",
        )

    # ------------------------------------------------------------------
    # Coordinatization
    # ------------------------------------------------------------------

    def coordinatize(self, plane_text: str, frame: Optional[Sequence[int]] = None,
                     seed: Optional[int] = None, samples: Optional[int] = None) -> Dict:
        plane = parse_plane(plane_text)
        if frame is not None:
            expected = 3 if plane.kind == "affine" else 4
            if len(frame) != expected:
                raise PlaneFormatError(f"a {plane.kind} frame has {expected} points, got {len(frame)}")
            if any(not 0 <= p < plane.n_points for p in frame):
                raise PlaneFormatError(f"frame {tuple(frame)} names points outside the plane")

        if plane.kind == "affine":
            tp = build_tp_ring(plane, seed=seed, samples=samples)
            X, Y, O = tuple(frame) if frame is not None else default_affine_frame(plane)
            phi = coord_map(plane, X, Y, O, tp)
            source = affine_plane(tp.ring)
            report = check_isomorphism(phi)
            result = {"kind": "affine", "frame": [X, Y, O]}
        else:
            coords = proj_coordinatize(plane, tuple(frame) if frame is not None else None,
                                       seed=seed, samples=samples)
            tp, phi = coords.tp, coords.psi
            source = proj.projective_plane(tp.ring)
            report = check_isomorphism(phi)
            A, B, O, I = (phi.point_map[source.point_index[proj.mk_point(tp.ring, v)]]
                          for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))
            result = {"kind": "projective", "frame": [A, B, O, I]}

        self._progress(f"✓ Tp has {tp.ring.size} elements")
        self._progress(f"{'✓' if report.passed else '✗'} coordinate map is an isomorphism")
        result.update({
            "ring_size": tp.ring.size,
            "labels": list(tp.ring.labels),
            "add_table": [[tp.ring.add(x, y) for y in tp.ring.elements()] for x in tp.ring.elements()],
            "mul_table": [[tp.ring.mul(x, y) for y in tp.ring.elements()] for x in tp.ring.elements()],
            "identified_as": self._identify(tp.ring),
            "point_table": [[p.format(), phi.point_map[i]] for i, p in enumerate(source.points)],
            "isomorphism": report.passed,
            "isomorphism_lines": report.lines(),
        })
        return result

    def _identify(self, ring: TableRing) -> Optional[str]:
        """Name of a known ring isomorphic to ring, if any"""
        n = ring.size
        candidates = [f"zmod:{n}"]
        p = int(round(n ** 0.5))
        if p * p == n and ZModRing(p).is_field:
            candidates.append(f"dual:{p}")
        for descriptor in candidates:
            if find_ring_isomorphism(ring, parse_ring(descriptor)) is not None:
                debug_print(f"Tp identified as {descriptor}")
                return descriptor
        return None

    # ------------------------------------------------------------------
    # Morphisms
    # ------------------------------------------------------------------

    def _ring_plane(self, ctx: RingContext, kind: str) -> SyntheticPlane:
        if kind not in PLANE_KINDS:
            raise PlaneFormatError(f"unknown plane kind '{kind}'")
        ctx.require_finite(f"{kind} plane")
        return (proj.projective_plane(ctx) if kind == "projective" else affine_plane(ctx)).export()

    def decompose(self, ring: str, target_ring: str, kind: str, morphism_text: str) -> Dict:
        R, S = parse_ring(ring), parse_ring(target_ring)
        phi = parse_morphism(morphism_text, self._ring_plane(R, kind), self._ring_plane(S, kind))
        phi.source_ring, phi.target_ring = R, S
        if kind == "projective":
            h, f = decompose_proj(phi)
            matrix = h.matrix
        else:
            g, f = decompose_aff(phi)
            matrix = g.matrix
        self._progress(f"✓ decomposed into {matrix.format()} and {f.name}")
        return {
            "kind": kind,
            "matrix": matrix.format(),
            "homomorphism": [[R.format(a), S.format(b)] for a, b in f.table().items()],
        }

    def check_morphism(self, source_text: str, target_text: str, morphism_text: str,
                       isomorphism: bool = False) -> Dict:
        source, target = parse_plane(source_text), parse_plane(target_text)
        phi = parse_morphism(morphism_text, source, target)
        report = check_isomorphism(phi) if isomorphism else verify_morphism(phi)
        self._progress(f"{'✓' if report.passed else '✗'} morphism checks")
        return {"passed": report.passed, "lines": report.lines()}

    def extend(self, source_text: str, target_text: str, source_line: int, target_line: int,
               morphism_text: str) -> Dict:
        P, Q = parse_plane(source_text), parse_plane(target_text)
        for plane, k in ((P, source_line), (Q, target_line)):
            if plane.kind != "projective":
                raise PlaneFormatError("extension needs projective planes")
            if not 0 <= k < plane.n_lines:
                raise PlaneFormatError(f"line {k} is not a line of the plane")
        source, target = DerivedAffinePlane(P, source_line), DerivedAffinePlane(Q, target_line)
        phi = parse_morphism(morphism_text, source.export(), target.export())
        psi = extend_affine_to_projective(phi, source, target)
        report = verify_morphism(psi)
        self._progress(f"{'✓' if report.passed else '✗'} extension to the projective planes")
        return {
            "passed": report.passed,
            "lines": report.lines(),
            "morphism_text": serialize_morphism(psi),
        }

    # ------------------------------------------------------------------
    # Torsors
    # ------------------------------------------------------------------

    def torsor(self, ring: str, kind: str, seed: Optional[int] = None, limit: Optional[int] = None) -> Dict:
        if kind not in TORSOR_KINDS:
            raise PlaneFormatError(f"unknown torsor kind '{kind}'")
        ctx = parse_ring(ring)
        ctx.require_finite("torsor verification")
        if kind == "affine":
            report = torsor_verify_left(ctx, seed=seed, limit=limit)
        elif kind == "projective":
            report = torsor_verify_H(ctx, seed=seed, limit=limit)
        else:
            report = torsor_verify_right(affine_plane(ctx).export(), seed=seed, limit=limit)
        self._progress(f"{'✓' if report.passed else '✗'} {report.group} torsor")
        return {"passed": report.passed, "lines": report.lines(), "report": report}

    # ------------------------------------------------------------------
    # Health
    # ------------------------------------------------------------------

    def health_check(self) -> Dict:
        """Smoke-check the engines on the smallest plane"""
        status = {}
        try:
            status["ring"] = check_local(parse_ring(settings.default_ring)).is_local
        except ValueError:
            status["ring"] = False
        try:
            fano = proj.projective_plane(parse_ring("zmod:2")).export()
            status["projective"] = fano.n_points == 7 and fano.n_lines == 7
        except ValueError:
            status["projective"] = False
        status["default_ring"] = settings.default_ring
        return status
