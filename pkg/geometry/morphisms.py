from typing import Dict, List, Optional, Tuple, Union
from pydantic import BaseModel
from algebra.ring import RingContext, RingHom, check_local
from algebra.linalg import AffMatrix, Mat3, ProjClassMatrix, g_inverse, h_inverse
from config import debug_print
from geometry import projective as proj
from geometry.affine import AffLine, AffPoint, DerivedAffinePlane, affine_plane, from_projective_point
from geometry.axioms import AxiomFinding
from geometry.synthetic import ConstructionError, PlaneFormatError, SyntheticPlane, bits, lowest


class MatrixActionError(ValueError):
    """Raised when a matrix sends a point to a vector with no invertible coordinate"""

    def __init__(self, message: str, point: Optional[Tuple] = None, image: Optional[Tuple] = None):
        self.point = point
        self.image = image
        super().__init__(message)


class DecompositionError(ValueError):
    """Raised when a morphism does not split into a matrix and a ring homomorphism"""


class PlaneMorphism:
    """
    A map of finite planes given on point and line indices. Planes built from
    rings remember their rings so the morphism can be decomposed.
    """

    def __init__(
        self,
        source: SyntheticPlane,
        target: SyntheticPlane,
        point_map: List[int],
        line_map: List[int],
        name: str = "",
        source_ring: Optional[RingContext] = None,
        target_ring: Optional[RingContext] = None,
    ):
        if len(point_map) != source.n_points or len(line_map) != source.n_lines:
            raise ValueError("morphism tables do not cover the source plane")
        self.source = source
        self.target = target
        self.point_map = list(point_map)
        self.line_map = list(line_map)
        self.name = name
        self.source_ring = source_ring
        self.target_ring = target_ring

    @property
    def kind(self) -> str:
        return self.source.kind

    def compose(self, inner: "PlaneMorphism") -> "PlaneMorphism":
        """self ∘ inner"""
        if inner.target != self.source:
            raise ValueError(f"cannot compose {self.name} after {inner.name}")
        return PlaneMorphism(
            inner.source, self.target,
            [self.point_map[p] for p in inner.point_map],
            [self.line_map[k] for k in inner.line_map],
            f"{self.name}∘{inner.name}", inner.source_ring, self.target_ring,
        )

    def __eq__(self, other):
        if not isinstance(other, PlaneMorphism):
            return NotImplemented
        return (self.point_map == other.point_map and self.line_map == other.line_map
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash((tuple(self.point_map), tuple(self.line_map)))

    def __repr__(self):
        return f"<PlaneMorphism {self.name or 'unnamed'} {self.kind}>"


def identity_morphism(plane: SyntheticPlane, ring: Optional[RingContext] = None) -> PlaneMorphism:
    return PlaneMorphism(plane, plane, list(range(plane.n_points)), list(range(plane.n_lines)),
                         "id", ring, ring)


def _ring_plane(ctx: RingContext, kind: str):
    return proj.projective_plane(ctx) if kind == "projective" else affine_plane(ctx)


def from_ring_hom(f: RingHom, kind: str) -> PlaneMorphism:
    """Apply f componentwise to canonical representatives"""
    P, Q = _ring_plane(f.source, kind), _ring_plane(f.target, kind)
    if kind == "projective":
        points = [Q.point_index[proj.mk_point(f.target, tuple(f(x) for x in p.coords))] for p in P.points]
    else:
        points = [Q.point_index[AffPoint(f.target, tuple(f(x) for x in p.coords))] for p in P.points]
    lines = []
    for l in P.lines:
        image = proj.canonicalize(f.target, tuple(f(x) for x in l.coords))
        lines.append(Q.line_index[proj.ProjLine(f.target, image) if kind == "projective" else AffLine(f.target, image)])
    return PlaneMorphism(P.export(), Q.export(), points, lines, f"{kind}({f.name})", f.source, f.target)


def _matrix_image(m: Mat3, point: proj.ProjPoint) -> proj.ProjPoint:
    image = m.apply(point.coords)
    try:
        return proj.mk_point(m.ctx, image)
    except proj.NotAPointError:
        raise MatrixActionError(
            f"{m.format()} sends {point} to {proj.format_vec(m.ctx, image)}, which is not a point",
            point=point.coords, image=image,
        )


def auto_from_H(h: Union[ProjClassMatrix, Mat3]) -> PlaneMorphism:
    m = h.matrix if isinstance(h, ProjClassMatrix) else h
    P = proj.projective_plane(m.ctx)
    points = [P.point_index[_matrix_image(m, p)] for p in P.points]
    lines = [P.line_index[proj.transform_line(m, l)] for l in P.lines]
    plane = P.export()
    return PlaneMorphism(plane, plane, points, lines, f"H{m.format()}", m.ctx, m.ctx)


def auto_from_G(g: AffMatrix) -> PlaneMorphism:
    m = g.matrix
    A = affine_plane(m.ctx)
    points = []
    for p in A.points:
        image = _matrix_image(m, p.embed())
        points.append(A.point_index[from_projective_point(image)])
    lines = [A.line_index[AffLine(m.ctx, proj.transform_line(m, l.embed()).coords)] for l in A.lines]
    plane = A.export()
    return PlaneMorphism(plane, plane, points, lines, f"G{m.format()}", m.ctx, m.ctx)


class MorphismReport(BaseModel):
    checks: List[AxiomFinding] = []

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> List[str]:
        return [c.line("CHECK") for c in self.checks]


def _finding(name: str, witness: Optional[Tuple[int, ...]], checked: int) -> AxiomFinding:
    return AxiomFinding(name=name, passed=witness is None, witness=list(witness) if witness else None,
                        checked=checked)


def _relation_checks(phi: PlaneMorphism, reflect: bool) -> List[AxiomFinding]:
    S, T = phi.source, phi.target
    fp, fl = phi.point_map, phi.line_map
    checks = []

    def scan(name, pairs, src, tgt):
        count = 0
        for a, b in pairs:
            count += 1
            s, t = src(a, b), tgt(a, b)
            if (s and not t) or (reflect and t and not s):
                return _finding(name, (a, b), count)
        return _finding(name, None, count)

    pp = [(a, b) for a in range(S.n_points) for b in range(S.n_points)]
    ll = [(k, l) for k in range(S.n_lines) for l in range(S.n_lines)]
    pl = [(a, k) for a in range(S.n_points) for k in range(S.n_lines)]
    suffix = "reflected" if reflect else "preserved"
    checks.append(scan(f"pt_apart_{suffix}", pp, S.pt_apart, lambda a, b: T.pt_apart(fp[a], fp[b])))
    checks.append(scan(f"li_apart_{suffix}", ll, S.li_apart, lambda k, l: T.li_apart(fl[k], fl[l])))
    checks.append(scan(f"incident_{suffix}", pl, S.is_incident, lambda a, k: T.is_incident(fp[a], fl[k])))
    checks.append(scan(f"outside_{suffix}", pl, S.is_outside, lambda a, k: T.is_outside(fp[a], fl[k])))
    if S.kind == "affine":
        checks.append(scan(f"parallel_{suffix}", ll, S.is_parallel, lambda k, l: T.is_parallel(fl[k], fl[l])))
    return checks


def spanning_pair(plane: SyntheticPlane, l: int) -> Optional[Tuple[int, int]]:
    """First pair of apart points on line l"""
    on = plane.on_line[l]
    for a in bits(on):
        b = lowest(on & plane.pt_apart_mask[a])
        if b is not None:
            return a, b
    return None


def _determined_lines(phi: PlaneMorphism) -> AxiomFinding:
    """f_L(l) is the join of the images of two apart points on l"""
    S, T = phi.source, phi.target
    for l in range(S.n_lines):
        pair = spanning_pair(S, l)
        if pair is None:
            continue
        fa, fb = (phi.point_map[a] for a in pair)
        if not (T.pt_apart(fa, fb) and T.join(fa, fb) == phi.line_map[l]):
            return _finding("line_map_determined", (l, *pair), l + 1)
    return _finding("line_map_determined", None, S.n_lines)


def verify_morphism(phi: PlaneMorphism) -> MorphismReport:
    if phi.source.kind != phi.target.kind:
        raise ValueError("morphism between planes of different kinds")
    report = MorphismReport(checks=_relation_checks(phi, reflect=False))
    report.checks.append(_determined_lines(phi))
    return report


def check_isomorphism(phi: PlaneMorphism) -> MorphismReport:
    """Bijective on points and lines, and reflecting every relation"""
    report = verify_morphism(phi)
    S, T = phi.source, phi.target
    for name, table, size in (("points_bijective", phi.point_map, T.n_points),
                              ("lines_bijective", phi.line_map, T.n_lines)):
        seen: Dict[int, int] = {}
        witness = None
        for i, j in enumerate(table):
            if j in seen:
                witness = (seen[j], i)
                break
            seen[j] = i
        if witness is None and len(seen) != size:
            witness = (len(seen), size)
        report.checks.append(_finding(name, witness, len(table)))
    report.checks.extend(_relation_checks(phi, reflect=True))
    return report


# ---------------------------------------------------------------------------
# Decomposition into a matrix and a ring homomorphism
# ---------------------------------------------------------------------------

def _require_rings(phi: PlaneMorphism) -> Tuple[RingContext, RingContext]:
    if phi.source_ring is None or phi.target_ring is None:
        raise DecompositionError("decomposition needs planes built from rings")
    R, S = phi.source_ring, phi.target_ring
    if not check_local(S).is_local:
        raise DecompositionError(f"decomposition over the non-local ring {S.descriptor} is unsupported")
    return R, S


def transport_matrix(f: RingHom, m: Mat3) -> Mat3:
    """Entrywise image of a matrix under a ring homomorphism"""
    return Mat3(f.target, tuple(tuple(f(x) for x in row) for row in m.rows))


def decompose_proj(phi: PlaneMorphism) -> Tuple[ProjClassMatrix, RingHom]:
    R, S = _require_rings(phi)
    P, Q = proj.projective_plane(R), proj.projective_plane(S)

    def image(*coords) -> proj.ProjPoint:
        return Q.points[phi.point_map[P.point_index[proj.mk_point(R, coords)]]]

    z, o = R.zero, R.one
    frame = proj.Frame4(image(o, z, z), image(z, o, z), image(z, z, o), image(o, o, o))
    try:
        h = proj.frame_to_H(frame)
    except ValueError as e:
        raise DecompositionError(f"standard frame is not sent to a frame: {str(e)}")
    back = h_inverse(h).matrix
    table = {}
    for a in R.elements():
        x0, x1, x2 = back.apply(image(a, z, o).coords)
        u = S.try_inverse(x2)
        if u is None or S.mul(u, x1) != S.zero:
            raise DecompositionError(f"image of ({R.format(a)},0,1) is not of the form (s,0,1)")
        table[a] = S.mul(u, x0)
    f = RingHom.from_table(R, S, table, f"{R.descriptor}->{S.descriptor}")
    problem = f.verify()
    if problem:
        raise DecompositionError(f"recovered map is not a ring homomorphism: {problem}")
    if auto_from_H(h).compose(from_ring_hom(f, "projective")) != phi:
        raise DecompositionError("recomposition mismatch")
    debug_print(f"decomposed {phi.name}: H{h.matrix.format()}")
    return h, f


def decompose_aff(phi: PlaneMorphism) -> Tuple[AffMatrix, RingHom]:
    R, S = _require_rings(phi)
    A, B = affine_plane(R), affine_plane(S)

    def image(x, y) -> AffPoint:
        return B.points[phi.point_map[A.point_index[AffPoint(R, (R.from_int(x), R.from_int(y)))]]]

    o, x, y = image(0, 0), image(1, 0), image(0, 1)
    sub = S.sub
    rows = (
        (sub(x.coords[0], o.coords[0]), sub(y.coords[0], o.coords[0]), o.coords[0]),
        (sub(x.coords[1], o.coords[1]), sub(y.coords[1], o.coords[1]), o.coords[1]),
        (S.zero, S.zero, S.one),
    )
    try:
        g = AffMatrix(Mat3(S, rows))
    except ValueError as e:
        raise DecompositionError(f"images of the standard frame are collinear: {str(e)}")
    back = g_inverse(g)
    table = {}
    for a in R.elements():
        p = back.apply_point(B.points[phi.point_map[A.point_index[AffPoint(R, (a, R.zero))]]].coords)
        if p[1] != S.zero:
            raise DecompositionError(f"image of ({R.format(a)},0) is not of the form (s,0)")
        table[a] = p[0]
    f = RingHom.from_table(R, S, table, f"{R.descriptor}->{S.descriptor}")
    problem = f.verify()
    if problem:
        raise DecompositionError(f"recovered map is not a ring homomorphism: {problem}")
    if auto_from_G(g).compose(from_ring_hom(f, "affine")) != phi:
        raise DecompositionError("recomposition mismatch")
    return g, f


# ---------------------------------------------------------------------------
# Projective and affine morphisms
# ---------------------------------------------------------------------------

def extend_affine_to_projective(
    phi: PlaneMorphism,
    source: DerivedAffinePlane,
    target: DerivedAffinePlane,
) -> PlaneMorphism:
    """
    Extend a morphism of derived affine planes to the projective planes.
    Each point goes to the meet of the images of two lines through it that
    are apart from each other and from l∞; lines follow their points.
    """
    P, Q = source.base, target.base
    if phi.source.n_points != len(source.point_map) or phi.target.n_points != len(target.point_map):
        raise ValueError("morphism does not match the derived planes")

    def line_image(k: int) -> int:
        return target.line_map[phi.line_map[source.line_index[k]]]

    points = []
    for A in range(P.n_points):
        candidates = P.through[A] & P.li_apart_mask[source.linf]
        k = lowest(candidates)
        l = lowest(candidates & P.li_apart_mask[k]) if k is not None else None
        if l is None:
            raise ConstructionError(f"no two apart lines through point {A} apart from l∞")
        points.append(Q.meet_strict(line_image(k), line_image(l)))

    lines = []
    for m in range(P.n_lines):
        pair = spanning_pair(P, m)
        if pair is None:
            raise ConstructionError(f"line {m} has no two apart points")
        a, b = pair
        lines.append(Q.join(points[a], points[b]))
    return PlaneMorphism(P, Q, points, lines, f"extend({phi.name})")


def restrict_to_affine(psi: PlaneMorphism, source: DerivedAffinePlane, target: DerivedAffinePlane) -> PlaneMorphism:
    """Restriction of a projective morphism sending l∞ to l∞"""
    if psi.line_map[source.linf] != target.linf:
        raise ValueError("morphism does not send l∞ to l∞")
    try:
        points = [target.point_index[psi.point_map[p]] for p in source.point_map]
        lines = [target.line_index[psi.line_map[k]] for k in source.line_map]
    except KeyError as e:
        raise ValueError(f"element {e} leaves the affine part")
    return PlaneMorphism(source.export(), target.export(), points, lines, f"restrict({psi.name})")


# ---------------------------------------------------------------------------
# Morphism file format
# ---------------------------------------------------------------------------

def serialize_morphism(phi: PlaneMorphism) -> str:
    out = [f"morphism {phi.kind}", f"points {len(phi.point_map)}", f"lines {len(phi.line_map)}"]
    out += [f"point {i} {j}" for i, j in enumerate(phi.point_map)]
    out += [f"line {k} {l}" for k, l in enumerate(phi.line_map)]
    return "\n".join(out) + "\n"


def parse_morphism(text: str, source: SyntheticPlane, target: SyntheticPlane) -> PlaneMorphism:
    rows = [(n, line.split()) for n, line in enumerate(text.splitlines(), start=1)]
    rows = [(n, t) for n, t in rows if t and not t[0].startswith("#")]
    if len(rows) < 3:
        raise PlaneFormatError("morphism header is incomplete", rows[-1][0] if rows else 1)
    header = {}
    for (n, tokens), key in zip(rows[:3], ("morphism", "points", "lines")):
        if len(tokens) != 2 or tokens[0] != key:
            raise PlaneFormatError(f"expected '{key}' header", n)
        header[key] = tokens[1]
    if header["morphism"] != source.kind or source.kind != target.kind:
        raise PlaneFormatError(f"morphism kind '{header['morphism']}' does not match the planes", rows[0][0])
    counts = {}
    for key, size, n in (("points", source.n_points, rows[1][0]), ("lines", source.n_lines, rows[2][0])):
        if not header[key].isdigit() or int(header[key]) != size:
            raise PlaneFormatError(f"{key} count does not match the source plane", n)
        counts[key] = size
    tables: Dict[str, List[Optional[int]]] = {"point": [None] * counts["points"], "line": [None] * counts["lines"]}
    bounds = {"point": target.n_points, "line": target.n_lines}
    for n, tokens in rows[3:]:
        if tokens[0] not in tables:
            raise PlaneFormatError(f"unknown entry '{tokens[0]}'", n)
        if len(tokens) != 3 or not all(t.isdigit() for t in tokens[1:]):
            raise PlaneFormatError(f"'{tokens[0]}' takes two indices", n)
        i, j = int(tokens[1]), int(tokens[2])
        table = tables[tokens[0]]
        if i >= len(table) or j >= bounds[tokens[0]]:
            raise PlaneFormatError(f"{tokens[0]} index out of range", n)
        table[i] = j
    for key, table in tables.items():
        if None in table:
            raise PlaneFormatError(f"{key} {table.index(None)} is not mapped", rows[-1][0])
    return PlaneMorphism(source, target, tables["point"], tables["line"], "file")
