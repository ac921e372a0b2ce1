import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Tuple
from pydantic import BaseModel
from algebra.ring import NotInvertibleError, RingContext, TableRing, check_local, check_ring_axioms
from algebra.linalg import (
    AffMatrix, enumerate_G, enumerate_H, g_identity, g_mul, h_identity, h_mul,
)
from config import debug_print, settings
from geometry import projective as proj
from geometry.affine import AffPoint, DerivedAffinePlane, affine_plane, derive_affine, derived_to_affine
from geometry.axioms import VerificationReport, verify_plane
from geometry.morphisms import PlaneMorphism, extend_affine_to_projective, spanning_pair
from geometry.synthetic import ConstructionError, SyntheticPlane, bits


BASE_POINT = 0


class AxiomSuiteError(ValueError):
    """Raised when a plane fails the axioms a construction relies on"""

    def __init__(self, report: VerificationReport):
        self.report = report
        names = ", ".join(f.name for f in report.failures())
        super().__init__(f"plane fails the {report.theory} axioms: {names}")


def _base_pair(plane: SyntheticPlane) -> Tuple[int, int]:
    """Lexicographically first apart pair"""
    return BASE_POINT, plane.first_apart(BASE_POINT)


# ---------------------------------------------------------------------------
# Translations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Translation:
    """τ_PP′ on a synthetic affine plane; equal when they agree on the base point"""
    plane: SyntheticPlane
    source: int
    target: int

    def __call__(self, R: int) -> int:
        return translation_apply(self, R)

    def __eq__(self, other):
        if not isinstance(other, Translation):
            return NotImplemented
        return translation_eq(self, other)

    def __hash__(self):
        return hash(translation_apply(self, BASE_POINT))


def _parallelogram(p: SyntheticPlane, P: int, P2: int, R: int) -> int:
    # R outside PP′
    return p.meet_strict(p.parallel_through(R, p.join(P, P2)), p.parallel_through(P2, p.join(P, R)))


@lru_cache(maxsize=None)
def _apply_apart(p: SyntheticPlane, P: int, P2: int, R: int) -> int:
    l = p.join(P, P2)
    if p.is_outside(R, l):
        return _parallelogram(p, P, P2, R)
    for Q in bits(p.out_line[l]):
        Q2 = _parallelogram(p, P, P2, Q)
        if p.is_outside(R, p.join(Q, Q2)):
            return _parallelogram(p, Q, Q2, R)
    raise ConstructionError(f"no auxiliary point for the translation {P}->{P2} at {R}")


def translation_apply(tau: Translation, R: int) -> int:
    p, P, P2 = tau.plane, tau.source, tau.target
    if P == P2:
        return R
    if p.pt_apart(P, P2):
        return _apply_apart(p, P, P2, R)
    Q = p.first_apart(P, P2)
    debug_print(f"translation {P}->{P2} routed through {Q}")
    return _apply_apart(p, Q, P2, _apply_apart(p, P, Q, R))


def translation_compose(t1: Translation, t2: Translation) -> Translation:
    """t1 ∘ t2"""
    return Translation(t1.plane, BASE_POINT, translation_apply(t1, translation_apply(t2, BASE_POINT)))


def translation_inverse(tau: Translation) -> Translation:
    return Translation(tau.plane, translation_apply(tau, BASE_POINT), BASE_POINT)


def translation_eq(t1: Translation, t2: Translation) -> bool:
    return t1.plane == t2.plane and translation_apply(t1, BASE_POINT) == translation_apply(t2, BASE_POINT)


def translation_identity(plane: SyntheticPlane) -> Translation:
    return Translation(plane, BASE_POINT, BASE_POINT)


def translation_plane_map(plane: SyntheticPlane, O: int = BASE_POINT) -> Dict[Translation, int]:
    """Translations as points: τ ↦ τ(O) is a bijection onto the points of the plane"""
    return {Translation(plane, O, P): P for P in range(plane.n_points)}


# ---------------------------------------------------------------------------
# Dilatations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Dilatation:
    """The dilatation sending P ↦ P′ and Q ↦ Q′"""
    plane: SyntheticPlane
    P: int
    Q: int
    P2: int
    Q2: int

    def __post_init__(self):
        p = self.plane
        if not (p.pt_apart(self.P, self.Q) and p.pt_apart(self.P2, self.Q2)):
            raise ConstructionError("a dilatation needs two pairs of apart points")
        if not p.is_parallel(p.join(self.P, self.Q), p.join(self.P2, self.Q2)):
            raise ConstructionError("PQ is not parallel to P′Q′")

    def __call__(self, A: int) -> int:
        return dilatation_apply(self, A)

    def __eq__(self, other):
        if not isinstance(other, Dilatation):
            return NotImplemented
        return dilatation_eq(self, other)

    def __hash__(self):
        O, E = _base_pair(self.plane)
        return hash((dilatation_apply(self, O), dilatation_apply(self, E)))


def _fixed_outside(p: SyntheticPlane, P: int, Q: int, Q2: int, A: int) -> int:
    # A outside PQ
    return p.meet_strict(p.join(P, A), p.parallel_through(Q2, p.join(Q, A)))


@lru_cache(maxsize=None)
def _fixed_apply(p: SyntheticPlane, P: int, Q: int, Q2: int, A: int) -> int:
    if A == P:
        return P
    k = p.join(P, Q)
    if p.is_outside(A, k):
        return _fixed_outside(p, P, Q, Q2, A)
    # σ(A) lies on the parallels to XA and YA through σ(X) and σ(Y)
    for X in bits(p.out_line[k] & p.pt_apart_mask[A]):
        lx = p.join(X, A)
        for Y in bits(p.out_line[k] & p.out_line[lx]):
            ly = p.join(Y, A)
            return p.meet_strict(p.parallel_through(_fixed_outside(p, P, Q, Q2, X), lx),
                                 p.parallel_through(_fixed_outside(p, P, Q, Q2, Y), ly))
    raise ConstructionError(f"no auxiliary points for the dilatation about {P} at {A}")


def dilatation_from_fixed(plane: SyntheticPlane, P: int, Q: int, Q2: int) -> Dilatation:
    """The dilatation fixing P and sending Q to Q′"""
    if not (plane.pt_apart(P, Q) and plane.pt_apart(P, Q2)):
        raise ConstructionError(f"point {P} must be apart from {Q} and {Q2}")
    if not plane.is_incident(Q2, plane.join(P, Q)):
        raise ConstructionError(f"point {Q2} is not on the line through {P} and {Q}")
    return Dilatation(plane, P, Q, P, Q2)


def dilatation_apply(sigma: Dilatation, A: int) -> int:
    p = sigma.plane
    if sigma.P == sigma.P2:
        return _fixed_apply(p, sigma.P, sigma.Q, sigma.Q2, A)
    # σ = π ∘ τ with τ = τ_PP′ and π fixing P′
    tau = Translation(p, sigma.P, sigma.P2)
    return _fixed_apply(p, sigma.P2, translation_apply(tau, sigma.Q), sigma.Q2, translation_apply(tau, A))


def dilatation_compose(s1: Dilatation, s2: Dilatation) -> Dilatation:
    """s1 ∘ s2"""
    O, E = _base_pair(s1.plane)
    return Dilatation(s1.plane, O, E, dilatation_apply(s1, dilatation_apply(s2, O)),
                      dilatation_apply(s1, dilatation_apply(s2, E)))


def dilatation_inverse(sigma: Dilatation) -> Dilatation:
    O, E = _base_pair(sigma.plane)
    return Dilatation(sigma.plane, dilatation_apply(sigma, O), dilatation_apply(sigma, E), O, E)


def dilatation_eq(s1: Dilatation, s2: Dilatation) -> bool:
    """Dilatations agreeing on two apart points agree everywhere"""
    if s1.plane != s2.plane:
        return False
    O, E = _base_pair(s1.plane)
    return all(dilatation_apply(s1, X) == dilatation_apply(s2, X) for X in (O, E))


def translation_as_dilatation(tau: Translation) -> Dilatation:
    O, E = _base_pair(tau.plane)
    return Dilatation(tau.plane, O, E, translation_apply(tau, O), translation_apply(tau, E))


def is_translation(sigma: Dilatation) -> bool:
    O, E = _base_pair(sigma.plane)
    tau = Translation(sigma.plane, O, dilatation_apply(sigma, O))
    return translation_apply(tau, E) == dilatation_apply(sigma, E)


def conjugate_translation(sigma: Dilatation, tau: Translation) -> Dilatation:
    """σ τ σ⁻¹"""
    return dilatation_compose(sigma, dilatation_compose(translation_as_dilatation(tau), dilatation_inverse(sigma)))


# ---------------------------------------------------------------------------
# Trace preserving homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TpElement:
    """α_ABC: the trace preserving homomorphism with τ_AB ↦ τ_AC"""
    plane: SyntheticPlane
    A: int
    B: int
    C: int

    def __post_init__(self):
        p = self.plane
        if not p.pt_apart(self.A, self.B):
            raise ConstructionError(f"points {self.A} and {self.B} are not apart")
        if not p.is_incident(self.C, p.join(self.A, self.B)):
            raise ConstructionError(f"point {self.C} is not on the line through {self.A} and {self.B}")

    def __eq__(self, other):
        if not isinstance(other, TpElement):
            return NotImplemented
        return tp_eq(self, other)

    def __hash__(self):
        return hash(_canonical_third(self))


def _tp_outside(p: SyntheticPlane, A: int, B: int, C: int, Y: int) -> int:
    # Y outside AB
    return p.meet_strict(p.join(A, Y), p.parallel_through(C, p.join(B, Y)))


@lru_cache(maxsize=None)
def _tp_target(p: SyntheticPlane, A: int, B: int, C: int, Y: int) -> int:
    """Z with (τ_AY)^α = τ_AZ for α = α_ABC"""
    if Y == A:
        return A
    k = p.join(A, B)
    if p.is_outside(Y, k):
        return _tp_outside(p, A, B, C, Y)
    # τ_AY = τ_AW ∘ τ_AY′ with Y′ and W outside AB
    for Y2 in bits(p.out_line[k]):
        W = translation_apply(Translation(p, Y2, Y), A)
        if p.is_outside(W, k):
            Z1, Z2 = _tp_outside(p, A, B, C, W), _tp_outside(p, A, B, C, Y2)
            return translation_apply(Translation(p, A, Z1), Z2)
    raise ConstructionError(f"no auxiliary point outside the line through {A} and {B}")


def tp_apply(alpha: TpElement, tau: Translation) -> Translation:
    p, A = alpha.plane, alpha.A
    return Translation(p, A, _tp_target(p, A, alpha.B, alpha.C, translation_apply(tau, A)))


def _canonical_third(alpha: TpElement) -> int:
    """C with α = α_OEC over the base pair"""
    O, E = _base_pair(alpha.plane)
    return translation_apply(tp_apply(alpha, Translation(alpha.plane, O, E)), O)


def _canonical(plane: SyntheticPlane, C: int) -> TpElement:
    O, E = _base_pair(plane)
    return TpElement(plane, O, E, C)


def tp_eq(alpha: TpElement, beta: TpElement) -> bool:
    if alpha.plane != beta.plane:
        return False
    p = alpha.plane
    return translation_eq(tp_apply(beta, Translation(p, alpha.A, alpha.B)), Translation(p, alpha.A, alpha.C))


def tp_zero(plane: SyntheticPlane) -> TpElement:
    O, _ = _base_pair(plane)
    return _canonical(plane, O)


def tp_one(plane: SyntheticPlane) -> TpElement:
    _, E = _base_pair(plane)
    return _canonical(plane, E)


def tp_add(alpha: TpElement, beta: TpElement) -> TpElement:
    """τ ↦ τ^α ∘ τ^β"""
    p = alpha.plane
    O, _ = _base_pair(p)
    return _canonical(p, translation_apply(Translation(p, O, _canonical_third(alpha)), _canonical_third(beta)))


def tp_neg(alpha: TpElement) -> TpElement:
    p = alpha.plane
    O, _ = _base_pair(p)
    return _canonical(p, translation_apply(Translation(p, _canonical_third(alpha), O), O))


def tp_mul(alpha: TpElement, beta: TpElement) -> TpElement:
    """
    Move β to a pair (A, B′) with B′ outside AB, read off τ_AB′^β = τ_AC′,
    then the parallel to BC′ through C meets AB′ in the point D with
    τ_AB′^{αβ} = τ_AD.
    """
    p = alpha.plane
    A, B, C = alpha.A, alpha.B, alpha.C
    k = p.join(A, B)
    B1 = p.first_outside(k)
    C1 = translation_apply(tp_apply(beta, Translation(p, A, B1)), A)
    D = p.meet_strict(p.parallel_through(C, p.join(B, C1)), p.join(A, B1))
    return TpElement(p, A, B1, D)


def tp_compose(alpha: TpElement, beta: TpElement) -> TpElement:
    """τ ↦ (τ^β)^α"""
    p = alpha.plane
    O, E = _base_pair(p)
    return _canonical(p, translation_apply(tp_apply(alpha, tp_apply(beta, Translation(p, O, E))), O))


def tp_is_invertible(alpha: TpElement) -> bool:
    return alpha.plane.pt_apart(alpha.A, alpha.C)


def tp_inverse(alpha: TpElement) -> TpElement:
    if not tp_is_invertible(alpha):
        raise NotInvertibleError(f"α({alpha.A},{alpha.B},{alpha.C}) is not invertible")
    return TpElement(alpha.plane, alpha.A, alpha.C, alpha.B)


def tp_from_translations(tau: Translation, tau2: Translation) -> TpElement:
    """The α with τ^α = τ′, for τ moving its source to an apart point"""
    p, P, Q = tau.plane, tau.source, translation_apply(tau, tau.source)
    if not p.pt_apart(P, Q):
        raise ConstructionError(f"translation {tau.source}->{tau.target} does not move its source apart")
    return TpElement(p, P, Q, translation_apply(tau2, P))


@dataclass(frozen=True, eq=False)
class TpRing:
    """
    Tp as a table ring. Element i is α_OEC for the i-th point C of the line OE,
    so 0 is zero and 1 is one.
    """
    ring: TableRing
    plane: SyntheticPlane
    points: Tuple[int, ...]
    O: int
    E: int

    def element(self, x: int) -> TpElement:
        return TpElement(self.plane, self.O, self.E, self.points[x])

    def index_of(self, alpha: TpElement) -> int:
        return self.points.index(_canonical_third(alpha))


def build_tp_ring(
    plane: SyntheticPlane,
    report: Optional[VerificationReport] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    exhaustive_limit: Optional[int] = None,
) -> TpRing:
    """Tp of an affine plane passing the full affine suite.

    Pass `report` when the caller already verified the plane; otherwise the
    suite runs here, configuration sweeps included, with the given budgets.
    """
    if plane.kind != "affine":
        raise ValueError("Tp is built from an affine plane")
    if report is None:
        report = verify_plane(plane, "affine", configurations=False)
        if report.passed:
            report = verify_plane(plane, "affine", seed=seed, samples=samples,
                                  exhaustive_limit=exhaustive_limit)
    elif report.theory != "affine" or (report.n_points, report.n_lines) != (plane.n_points, plane.n_lines):
        raise ValueError(f"report is for a {report.theory} plane with {report.n_points} points, not this plane")
    if not report.passed:
        raise AxiomSuiteError(report)
    O, E = _base_pair(plane)
    points = [O, E] + [c for c in bits(plane.on_line[plane.join(O, E)]) if c not in (O, E)]
    index = {c: i for i, c in enumerate(points)}
    elements = [TpElement(plane, O, E, c) for c in points]
    try:
        add = [[index[translation_apply(Translation(plane, O, a), b)] for b in points] for a in points]
        mul = [[index[_canonical_third(tp_mul(x, y))] for y in elements] for x in elements]
    except KeyError as e:
        raise ConstructionError(f"point {e} left the line OE")
    ring = TableRing("Tp", [str(i) for i in range(len(points))], add, mul, 0, 1)
    problem = check_ring_axioms(ring)
    if problem:
        raise ConstructionError(f"Tp fails the ring axioms: {problem}")
    locality = check_local(ring)
    if not locality.is_local:
        raise ConstructionError(f"Tp is not local: {locality.reason}")
    debug_print(f"Tp built with {len(points)} elements")
    return TpRing(ring, plane, tuple(points), O, E)


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------

def default_affine_frame(plane: SyntheticPlane) -> Tuple[int, int, int]:
    """(X, Y, O) with O the base point"""
    O = BASE_POINT
    X = plane.first_apart(O)
    return X, plane.first_outside(plane.join(O, X)), O


def _check_affine_frame(plane: SyntheticPlane, X: int, Y: int, O: int) -> None:
    if not (plane.pt_apart(O, X) and plane.is_outside(Y, plane.join(O, X))):
        raise ConstructionError(f"points {X}, {Y}, {O} are collinear")


def _phi(tp: TpRing, O: int, tx: Translation, ty: Translation, a, b) -> int:
    return translation_apply(tp_apply(tp.element(a), tx), translation_apply(tp_apply(tp.element(b), ty), O))


def coord_map(plane: SyntheticPlane, X: int, Y: int, O: int, tp: Optional[TpRing] = None) -> PlaneMorphism:
    """φ(α, β) = τ_OX^α τ_OY^β(O) as a morphism 𝔸(Tp) → plane"""
    _check_affine_frame(plane, X, Y, O)
    tp = tp or build_tp_ring(plane)
    A = affine_plane(tp.ring)
    source = A.export()
    tx, ty = Translation(plane, O, X), Translation(plane, O, Y)
    points = [_phi(tp, O, tx, ty, *pt.coords) for pt in A.points]
    lines = []
    for l in range(source.n_lines):
        a, b = spanning_pair(source, l)
        lines.append(plane.join(points[a], points[b]))
    return PlaneMorphism(source, plane, points, lines, "phi", tp.ring, None)


def coord_inverse(plane: SyntheticPlane, X: int, Y: int, O: int, point: int,
                  tp: Optional[TpRing] = None) -> Tuple[int, int]:
    _check_affine_frame(plane, X, Y, O)
    tp = tp or build_tp_ring(plane)
    kx, ky = plane.join(O, X), plane.join(O, Y)
    Px = plane.meet_strict(kx, plane.parallel_through(point, ky))
    Py = plane.meet_strict(ky, plane.parallel_through(point, kx))
    return tp.index_of(TpElement(plane, O, X, Px)), tp.index_of(TpElement(plane, O, Y, Py))


@dataclass(frozen=True, eq=False)
class ProjCoordinatization:
    tp: TpRing
    psi: PlaneMorphism
    X: int
    Y: int
    linf: int


def _general_position(plane: SyntheticPlane, frame: Tuple[int, int, int, int]) -> bool:
    A, B, O, I = frame
    return all(plane.non_collinear(*trio) for trio in ((A, B, O), (A, B, I), (A, O, I), (B, O, I)))


def default_projective_frame(plane: SyntheticPlane) -> Tuple[int, int, int, int]:
    for frame in permutations(range(plane.n_points), 4):
        if _general_position(plane, frame):
            return frame
    raise ConstructionError("plane has no four points in general position")


def proj_coordinatize(
    plane: SyntheticPlane,
    frame: Optional[Tuple[int, int, int, int]] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    exhaustive_limit: Optional[int] = None,
) -> ProjCoordinatization:
    """ψ_ABOI: ℙ(Tp) → plane sending the standard frame to (A, B, O, I).

    The budgets apply to the affine suite run on the derived plane.
    """
    if plane.kind != "projective":
        raise ValueError("projective coordinates need a projective plane")
    frame = frame or default_projective_frame(plane)
    if not _general_position(plane, frame):
        raise proj.GeneralPositionError(f"frame {frame} is not in general position")
    A, B, O, I = frame
    linf = plane.join(A, B)
    X = plane.meet_strict(plane.join(I, B), plane.join(O, A))
    Y = plane.meet_strict(plane.join(I, A), plane.join(O, B))
    derived = DerivedAffinePlane(plane, linf)
    affine = derived.export()
    tp = build_tp_ring(affine, seed=seed, samples=samples, exhaustive_limit=exhaustive_limit)
    phi = coord_map(affine, derived.point_index[X], derived.point_index[Y], derived.point_index[O], tp)

    ring = tp.ring
    z, o = ring.zero, ring.one
    ring_plane = proj.projective_plane(ring)
    at_origin = derive_affine(ring_plane, proj.mk_line(ring, (z, z, o)))
    point_map, line_map = derived_to_affine(ring)
    to_affine = PlaneMorphism(at_origin.export(), affine_plane(ring).export(), point_map, line_map, "derived")
    psi = extend_affine_to_projective(phi.compose(to_affine), at_origin, derived)
    psi.name, psi.source_ring = "psi", ring

    standard = [ring_plane.point_index[proj.mk_point(ring, v)]
                for v in ((o, z, z), (z, o, z), (z, z, o), (o, o, o))]
    images = tuple(psi.point_map[i] for i in standard)
    if images != tuple(frame):
        raise ConstructionError(f"standard frame maps to {images}, expected {tuple(frame)}")
    return ProjCoordinatization(tp, psi, X, Y, linf)


# ---------------------------------------------------------------------------
# Torsors
# ---------------------------------------------------------------------------

class TorsorReport(BaseModel):
    group: str
    group_order: int
    set_size: int
    free: bool
    transitive: bool
    identity: bool
    action_law: bool
    law_checks: int = 0

    @property
    def passed(self) -> bool:
        return (self.free and self.transitive and self.identity and self.action_law
                and self.group_order == self.set_size)

    def lines(self) -> List[str]:
        def mark(ok: bool) -> str:
            return "PASS" if ok else "FAIL"

        return [
            f"TORSOR {self.group} order={self.group_order} set={self.set_size}",
            f"TORSOR free {mark(self.free)}",
            f"TORSOR transitive {mark(self.transitive)}",
            f"TORSOR identity {mark(self.identity)}",
            f"TORSOR action_law {mark(self.action_law)} checked={self.law_checks}",
        ]


def omega(plane: SyntheticPlane) -> List[Tuple[int, int, int]]:
    """Ordered non-collinear triples"""
    n = range(plane.n_points)
    return [(a, b, c) for a in n for b in n for c in n if plane.non_collinear(a, b, c)]


def omega4(plane: SyntheticPlane) -> List[Tuple[int, int, int, int]]:
    """Ordered quadruples in general position"""
    out = []
    for a, b, c in omega(plane):
        for d in range(plane.n_points):
            if plane.non_collinear(a, b, d) and plane.non_collinear(a, c, d) and plane.non_collinear(b, c, d):
                out.append((a, b, c, d))
    return out


def _law_sample(group, elements, seed: Optional[int], limit: Optional[int]):
    """All (g, h, x) when few enough, else a seeded sample of that size"""
    limit = settings.torsor_sample_limit if limit is None else limit
    total = len(group) ** 2 * len(elements)
    if total <= limit:
        for g in group:
            for h in group:
                for x in elements:
                    yield g, h, x
        return
    rng = random.Random(settings.seed if seed is None else seed)
    for _ in range(limit):
        yield rng.choice(group), rng.choice(group), rng.choice(elements)


def _torsor_report(name: str, group, elements, base, act, identity_element, law,
                   seed: Optional[int], limit: Optional[int]) -> TorsorReport:
    orbit = [act(g, base) for g in group]
    image = set(orbit)
    checks, ok = 0, True
    for g, h, x in _law_sample(group, elements, seed, limit):
        checks += 1
        if not law(g, h, x):
            ok = False
            break
    report = TorsorReport(
        group=name, group_order=len(group), set_size=len(elements),
        free=len(image) == len(orbit), transitive=image == set(elements),
        identity=all(act(identity_element, x) == x for x in elements),
        action_law=ok, law_checks=checks,
    )
    debug_print(f"torsor {name}: {'✓' if report.passed else '✗'}")
    return report


def torsor_verify_left(ctx: RingContext, seed: Optional[int] = None, limit: Optional[int] = None) -> TorsorReport:
    """ω(𝔸(R)) as a left G(R)-torsor, g·(A,B,C) = (gA, gB, gC)"""
    A = affine_plane(ctx)
    z, o = ctx.zero, ctx.one
    base = tuple(A.point_index[AffPoint(ctx, v)] for v in ((o, z), (z, o), (z, z)))

    def act(g: AffMatrix, t):
        return tuple(A.point_index[AffPoint(ctx, g.apply_point(A.points[i].coords))] for i in t)

    return _torsor_report(
        f"G({ctx.descriptor})", enumerate_G(ctx), omega(A.export()), base, act, g_identity(ctx),
        lambda g, h, t: act(g_mul(g, h), t) == act(g, act(h, t)), seed, limit,
    )


def act_right(plane: SyntheticPlane, tp: TpRing, triple: Tuple[int, int, int], g: AffMatrix) -> Tuple[int, int, int]:
    """(A,B,C)·g = (τ_CA^{α₀+γ₀}τ_CB^{α₁+γ₁}(C), τ_CA^{β₀+γ₀}τ_CB^{β₁+γ₁}(C), τ_CA^{γ₀}τ_CB^{γ₁}(C))"""
    A, B, C = triple
    add = tp.ring.add
    (a0, b0, c0), (a1, b1, c1), _ = g.matrix.rows
    ta, tb = Translation(plane, C, A), Translation(plane, C, B)
    return (
        _phi(tp, C, ta, tb, add(a0, c0), add(a1, c1)),
        _phi(tp, C, ta, tb, add(b0, c0), add(b1, c1)),
        _phi(tp, C, ta, tb, c0, c1),
    )


def torsor_verify_right(plane: SyntheticPlane, tp: Optional[TpRing] = None, seed: Optional[int] = None,
                        limit: Optional[int] = None) -> TorsorReport:
    """ω(plane) as a right G(Tp)-torsor"""
    tp = tp or build_tp_ring(plane)
    triples = omega(plane)

    def act(g, t):
        return act_right(plane, tp, t, g)

    return _torsor_report(
        "G(Tp)", enumerate_G(tp.ring), triples, default_affine_frame(plane), act, g_identity(tp.ring),
        lambda g, h, t: act(h, act(g, t)) == act(g_mul(g, h), t), seed, limit,
    )


def torsor_verify_H(ctx: RingContext, seed: Optional[int] = None, limit: Optional[int] = None) -> TorsorReport:
    """ω₄(ℙ(R)) as a right H(R)-torsor, frame·h = (frame's matrix · h) applied to the standard frame"""
    P = proj.projective_plane(ctx)
    standard = proj.standard_frame(ctx)
    base = tuple(P.point_index[p] for p in standard.points())

    def act(h, f):
        frame = proj.Frame4(*(P.points[i] for i in f))
        moved = proj.act_H(h_mul(proj.frame_to_H(frame), h), standard)
        return tuple(P.point_index[p] for p in moved.points())

    return _torsor_report(
        f"H({ctx.descriptor})", enumerate_H(ctx), omega4(P.export()), base, act, h_identity(ctx),
        lambda g, h, f: act(h, act(g, f)) == act(h_mul(g, h), f), seed, limit,
    )
