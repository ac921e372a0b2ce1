from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from algebra.ring import RingContext, RingValue, check_local
from algebra.linalg import Mat2, Mat3, ProjClassMatrix, cross, det2, det3, dot, h_canonicalize, inverse3
from config import debug_print
from geometry.axioms import (
    CheckResult, VerificationReport, desargues_config, pappus_config, pt_apart_cotransitive, verify_plane,
)
from geometry.synthetic import SyntheticPlane, bits, lowest


class NotAPointError(ValueError):
    """Raised for coordinate vectors with no invertible coordinate"""


class NotApartError(ValueError):
    """Raised when a join or meet is requested for elements that are not apart"""


class DeltaSideConditionError(ValueError):
    """Raised when δ cannot be decided by the determinant and no search is possible"""


class GeneralPositionError(ValueError):
    """Raised for frames that do not determine an element of H(R)"""

    def __init__(self, message: str, point: Optional[Tuple] = None, image: Optional[Tuple] = None,
                 matrix: Optional[Mat3] = None):
        self.point = point
        self.image = image
        self.matrix = matrix
        super().__init__(message)


Vec3 = Tuple[Any, Any, Any]


def _coerce(ctx: RingContext, x: Any) -> Any:
    return ctx.coerce(x)


def format_vec(ctx: RingContext, vec: Sequence[Any]) -> str:
    return "(" + ",".join(ctx.format(x) for x in vec) + ")"


def canonicalize(ctx: RingContext, vec: Sequence[Any]) -> Vec3:
    """Scale so that the first invertible coordinate becomes 1"""
    vec = tuple(_coerce(ctx, x) for x in vec)
    for x in vec:
        u = ctx.try_inverse(x)
        if u is not None:
            return tuple(ctx.mul(u, y) for y in vec)
    raise NotAPointError(f"{format_vec(ctx, vec)} is not a point of ℙ({ctx.descriptor})")


@dataclass(frozen=True)
class ProjPoint:
    ctx: RingContext
    coords: Vec3

    def format(self) -> str:
        return format_vec(self.ctx, self.coords)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class ProjLine:
    ctx: RingContext
    coords: Vec3

    def format(self) -> str:
        return format_vec(self.ctx, self.coords)

    def __str__(self):
        return self.format()


PlaneElement = Union[ProjPoint, ProjLine]


def mk_point(ctx: RingContext, vec: Sequence[Any]) -> ProjPoint:
    return ProjPoint(ctx, canonicalize(ctx, vec))


def mk_line(ctx: RingContext, vec: Sequence[Any]) -> ProjLine:
    return ProjLine(ctx, canonicalize(ctx, vec))


def mk_proj(ctx: RingContext, vec: Sequence[Any], kind: str = "point") -> PlaneElement:
    return mk_point(ctx, vec) if kind == "point" else mk_line(ctx, vec)


def _some_invertible(ctx: RingContext, vec: Sequence[Any]) -> bool:
    return any(ctx.is_invertible(x) for x in vec)


def pt_apart(A: ProjPoint, B: ProjPoint) -> bool:
    """Some 2×2 minor of [a|b] is invertible"""
    return _some_invertible(A.ctx, cross(A.ctx, A.coords, B.coords))


def li_apart(k: ProjLine, l: ProjLine) -> bool:
    return _some_invertible(k.ctx, cross(k.ctx, k.coords, l.coords))


def pairing(A: ProjPoint, l: ProjLine) -> Any:
    return dot(A.ctx, A.coords, l.coords)


def incident(A: ProjPoint, l: ProjLine) -> bool:
    return pairing(A, l) == A.ctx.zero


def outside(A: ProjPoint, l: ProjLine) -> bool:
    return A.ctx.is_invertible(pairing(A, l))


def line_through(A: ProjPoint, B: ProjPoint) -> ProjLine:
    if not pt_apart(A, B):
        raise NotApartError(f"points {A} and {B} are not apart")
    return mk_line(A.ctx, cross(A.ctx, A.coords, B.coords))


def meet(k: ProjLine, l: ProjLine) -> ProjPoint:
    if not li_apart(k, l):
        raise NotApartError(f"lines {k} and {l} are not apart")
    return mk_point(k.ctx, cross(k.ctx, k.coords, l.coords))


def dualize(x: PlaneElement) -> PlaneElement:
    if isinstance(x, ProjPoint):
        return ProjLine(x.ctx, x.coords)
    return ProjPoint(x.ctx, x.coords)


def collinear_det(A: ProjPoint, B: ProjPoint, C: ProjPoint) -> RingValue:
    m = Mat3.from_columns(A.ctx, (A.coords, B.coords, C.coords))
    return A.ctx.value(det3(m))


def is_collinear_with(A: ProjPoint, B: ProjPoint, C: ProjPoint) -> bool:
    """C lies on the line through the apart points A and B"""
    if not pt_apart(A, B):
        raise NotApartError(f"points {A} and {B} are not apart")
    return collinear_det(A, B, C).raw == A.ctx.zero


def non_collinear(A: ProjPoint, B: ProjPoint, C: ProjPoint) -> bool:
    """B # C and A ∉ BC"""
    return pt_apart(B, C) and outside(A, line_through(B, C))


def non_collinear_symmetric(A: ProjPoint, B: ProjPoint, C: ProjPoint) -> bool:
    """All three points pairwise apart and each outside the join of the other two"""
    if not (pt_apart(A, B) and pt_apart(B, C) and pt_apart(C, A)):
        return False
    return (outside(A, line_through(B, C)) and outside(B, line_through(C, A))
            and outside(C, line_through(A, B)))


def non_concurrent(k: ProjLine, l: ProjLine, m: ProjLine) -> bool:
    return li_apart(l, m) and outside(dualize(k), dualize(meet(l, m)))


# ---------------------------------------------------------------------------
# δ(k, l, A, B): some point X on k and l shares a line r with A and B
# ---------------------------------------------------------------------------

def delta_side_conditions(k: ProjLine, l: ProjLine, A: ProjPoint, B: ProjPoint) -> bool:
    """(k#l or A#B) and one of A,B outside one of k,l"""
    if not (li_apart(k, l) or pt_apart(A, B)):
        return False
    return any(outside(p, x) for p in (A, B) for x in (k, l))


def delta_criterion(k: ProjLine, l: ProjLine, A: ProjPoint, B: ProjPoint) -> RingValue:
    """(κ·a)(λ·b) − (κ·b)(λ·a)"""
    ctx = k.ctx
    m = Mat2(ctx, ((pairing(A, k), pairing(B, k)), (pairing(A, l), pairing(B, l))))
    return ctx.value(det2(m))


def delta_det(k: ProjLine, l: ProjLine, A: ProjPoint, B: ProjPoint) -> bool:
    if not delta_side_conditions(k, l, A, B):
        raise DeltaSideConditionError(
            f"side conditions fail for delta({k},{l},{A},{B}); use delta_search"
        )
    return delta_criterion(k, l, A, B).raw == k.ctx.zero


def delta_search(k: ProjLine, l: ProjLine, A: ProjPoint, B: ProjPoint) -> Optional[Tuple[ProjLine, ProjPoint]]:
    """First witness (r, X) in enumeration order, lines before points"""
    plane = projective_plane(k.ctx)
    meets = [X for X in plane.points if incident(X, k) and incident(X, l)]
    if not meets:
        return None
    for r in plane.lines:
        if not (incident(A, r) and incident(B, r)):
            continue
        for X in meets:
            if incident(X, r):
                return r, X
    return None


def delta(k: ProjLine, l: ProjLine, A: ProjPoint, B: ProjPoint) -> bool:
    """Decide δ: determinant when the side conditions hold, otherwise the field
    shortcut or an exhaustive witness search"""
    if delta_side_conditions(k, l, A, B):
        return delta_criterion(k, l, A, B).raw == k.ctx.zero
    ctx = k.ctx
    if ctx.is_field:
        # either k = l and A = B, or both points lie on both lines
        return True
    if not ctx.is_finite:
        raise DeltaSideConditionError(f"delta over {ctx.descriptor} needs the side conditions")
    return delta_search(k, l, A, B) is not None


class _CoordinateOps:
    """Predicate adapter for the configuration checkers over coordinates"""

    pt_apart = staticmethod(pt_apart)
    li_apart = staticmethod(li_apart)
    is_incident = staticmethod(incident)
    is_outside = staticmethod(outside)
    delta = staticmethod(delta)


def desargues_check(A, B, C, D, k, l, m, n) -> CheckResult:
    return desargues_config(_CoordinateOps, A, B, C, D, k, l, m, n)


def pappus_check(A, B, C, D, E, F, kA, kB, kC, kD, kE, kF) -> CheckResult:
    return pappus_config(_CoordinateOps, A, B, C, D, E, F, kA, kB, kC, kD, kE, kF)


# ---------------------------------------------------------------------------
# Frames and H(R)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Frame4:
    A: ProjPoint
    B: ProjPoint
    O: ProjPoint
    I: ProjPoint

    def points(self) -> Tuple[ProjPoint, ProjPoint, ProjPoint, ProjPoint]:
        return (self.A, self.B, self.O, self.I)

    def in_general_position(self) -> bool:
        return all(non_collinear_symmetric(*trio) for trio in combinations(self.points(), 3))


def standard_frame(ctx: RingContext) -> Frame4:
    return Frame4(mk_point(ctx, (1, 0, 0)), mk_point(ctx, (0, 1, 0)),
                  mk_point(ctx, (0, 0, 1)), mk_point(ctx, (1, 1, 1)))


def transform_point(m: Mat3, A: ProjPoint) -> ProjPoint:
    return mk_point(m.ctx, m.apply(A.coords))


def transform_line(m: Mat3, l: ProjLine) -> ProjLine:
    """Lines move by the inverse transpose"""
    return mk_line(m.ctx, inverse3(m).transpose().apply(l.coords))


def act_H(h: ProjClassMatrix, frame: Frame4) -> Frame4:
    return Frame4(*(transform_point(h.matrix, p) for p in frame.points()))


def matrix_action_failure(m: Mat3) -> Optional[Tuple[ProjPoint, Vec3]]:
    """First point of the finite plane whose image has no invertible coordinate"""
    ctx = m.ctx
    for p in projective_plane(ctx).points:
        image = m.apply(p.coords)
        if not _some_invertible(ctx, image):
            return p, image
    return None


def frame_to_H(frame: Frame4) -> ProjClassMatrix:
    """The H(R) class sending the standard frame to (A, B, O, I)"""
    A, B, C, D = frame.points()
    ctx = A.ctx
    m = Mat3.from_columns(ctx, (A.coords, B.coords, C.coords))
    if not ctx.is_invertible(det3(m)):
        raise GeneralPositionError(f"{A}, {B}, {C} are collinear")
    lam, mu, nu = inverse3(m).apply(D.coords)
    if not all(ctx.is_invertible(x) for x in (lam, mu, nu)):
        raise GeneralPositionError(f"frame ({A},{B},{C},{D}) is not in general position")
    cols = [tuple(ctx.mul(s, x) for x in v) for s, v in ((lam, A.coords), (mu, B.coords), (nu, C.coords))]
    result = Mat3.from_columns(ctx, cols)
    if ctx.is_finite and not check_local(ctx).is_local:
        failure = matrix_action_failure(result)
        if failure is not None:
            point, image = failure
            raise GeneralPositionError(
                f"matrix {result.format()} sends {point} to {format_vec(ctx, image)}, which is not a point",
                point=point.coords, image=image, matrix=result,
            )
    return h_canonicalize(result)


# ---------------------------------------------------------------------------
# The finite plane ℙ(R)
# ---------------------------------------------------------------------------

def _canonical_vectors(ctx: RingContext) -> List[Vec3]:
    one = ctx.one
    out = []
    for vec in product(ctx.elements(), repeat=3):
        lead = next((x for x in vec if ctx.is_invertible(x)), None)
        if lead == one:
            out.append(vec)
    return out


class ProjectivePlane:
    """ℙ(R) for a finite ring, points and lines in lexicographic order"""

    kind = "projective"

    def __init__(self, ctx: RingContext):
        ctx.require_finite("enumeration of ℙ(R)")
        self.ctx = ctx
        vecs = _canonical_vectors(ctx)
        self.points = [ProjPoint(ctx, v) for v in vecs]
        self.lines = [ProjLine(ctx, v) for v in vecs]
        self.point_index: Dict[ProjPoint, int] = {p: i for i, p in enumerate(self.points)}
        self.line_index: Dict[ProjLine, int] = {l: i for i, l in enumerate(self.lines)}
        self._synthetic: Optional[SyntheticPlane] = None
        debug_print(f"ℙ({ctx.descriptor}): {len(self.points)} points")

    def point(self, *coords) -> ProjPoint:
        return mk_point(self.ctx, coords)

    def line(self, *coords) -> ProjLine:
        return mk_line(self.ctx, coords)

    def export(self) -> SyntheticPlane:
        if self._synthetic is None:
            self._synthetic = SyntheticPlane.from_predicates(
                "projective", self.points, self.lines, pt_apart, li_apart, incident, outside,
                point_labels=[p.format() for p in self.points],
                line_labels=[l.format() for l in self.lines],
            )
        return self._synthetic


@lru_cache(maxsize=None)
def projective_plane(ctx: RingContext) -> ProjectivePlane:
    return ProjectivePlane(ctx)


def verify_projective_axioms(source, seed: Optional[int] = None, samples: Optional[int] = None,
                             exhaustive_limit: Optional[int] = None) -> VerificationReport:
    """source is a ring context, a ProjectivePlane or a SyntheticPlane"""
    if isinstance(source, RingContext):
        source = projective_plane(source)
    plane = source if isinstance(source, SyntheticPlane) else source.export()
    return verify_plane(plane, "projective", seed=seed, samples=samples, exhaustive_limit=exhaustive_limit)


# ---------------------------------------------------------------------------
# Plane-level statements equivalent to locality
# ---------------------------------------------------------------------------

def apart_incidence_witness(plane: SyntheticPlane) -> Optional[Tuple[int, int, int, int]]:
    """First (A, B, l, m) breaking A#B ∧ l#m ∧ A∈l ∧ B∈l ∧ B∈m ⊢ A∉m"""
    for A in range(plane.n_points):
        for B in bits(plane.pt_apart_mask[A]):
            for l in bits(plane.through[A] & plane.through[B]):
                bad = plane.through[B] & plane.li_apart_mask[l] & ~plane.out_point[A]
                if bad:
                    return A, B, l, lowest(bad)
    return None


def lines_apart_witness(plane: SyntheticPlane) -> Optional[Tuple[int, int]]:
    """First (k, l) where k#l disagrees with ∃A. A∈k ∧ A∉l"""
    for k in range(plane.n_lines):
        for l in range(plane.n_lines):
            if plane.li_apart(k, l) != bool(plane.on_line[k] & plane.out_line[l]):
                return k, l
    return None


def check_locality_sequents(ctx: RingContext) -> Dict[str, bool]:
    """Ring locality next to the plane statements it is equivalent to"""
    plane = projective_plane(ctx).export()
    return {
        "ring_local": check_local(ctx).is_local,
        "pt_apart_cotransitive": pt_apart_cotransitive(plane)[0],
        "apart_incidence": apart_incidence_witness(plane) is None,
        "lines_apart_iff_outside_point": lines_apart_witness(plane) is None,
    }
