from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from algebra.ring import RingContext
from config import debug_print
from geometry import projective as proj
from geometry.axioms import (
    CheckResult, ConfigurationTally, DESARGUES_VARIANTS, SyntheticOps, VerificationReport,
    desargues_big_config, desargues_small_config, pappus_affine_config, parallel3_config,
    parallel4_config, concurrent3_config, concurrent4_config, five_point_config,
    run_configurations, verify_plane,
)
from geometry.projective import NotAPointError, NotApartError, ProjectivePlane, format_vec
from geometry.synthetic import SyntheticPlane, bits, lowest


@dataclass(frozen=True)
class AffPoint:
    ctx: RingContext
    coords: Tuple[Any, Any]

    def embed(self) -> proj.ProjPoint:
        return proj.ProjPoint(self.ctx, (self.coords[0], self.coords[1], self.ctx.one))

    def format(self) -> str:
        return format_vec(self.ctx, self.coords)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class AffLine:
    """Canonical projective line apart from (0,0,1)"""
    ctx: RingContext
    coords: Tuple[Any, Any, Any]

    def embed(self) -> proj.ProjLine:
        return proj.ProjLine(self.ctx, self.coords)

    def format(self) -> str:
        return format_vec(self.ctx, self.coords)

    def __str__(self):
        return self.format()


def aff_point(ctx: RingContext, coords: Sequence[Any]) -> AffPoint:
    x, y = (proj._coerce(ctx, c) for c in coords)
    return AffPoint(ctx, (x, y))


def aff_line(ctx: RingContext, vec: Sequence[Any]) -> AffLine:
    coords = proj.canonicalize(ctx, vec)
    if not (ctx.is_invertible(coords[0]) or ctx.is_invertible(coords[1])):
        raise NotAPointError(f"{format_vec(ctx, coords)} is not a line of 𝔸({ctx.descriptor})")
    return AffLine(ctx, coords)


def from_projective_point(A: proj.ProjPoint) -> AffPoint:
    ctx = A.ctx
    u = ctx.try_inverse(A.coords[2])
    if u is None:
        raise NotAPointError(f"{A} lies at infinity")
    return AffPoint(ctx, (ctx.mul(u, A.coords[0]), ctx.mul(u, A.coords[1])))


def aff_apart(A: AffPoint, B: AffPoint) -> bool:
    ctx = A.ctx
    return any(ctx.is_invertible(ctx.sub(a, b)) for a, b in zip(A.coords, B.coords))


def aff_li_apart(k: AffLine, l: AffLine) -> bool:
    return proj.li_apart(k.embed(), l.embed())


def aff_incident(A: AffPoint, l: AffLine) -> bool:
    return proj.incident(A.embed(), l.embed())


def aff_outside(A: AffPoint, l: AffLine) -> bool:
    return proj.outside(A.embed(), l.embed())


def parallel(k: AffLine, l: AffLine) -> bool:
    """det [[λ₀, μ₀], [λ₁, μ₁]] = 0"""
    ctx = k.ctx
    (l0, l1, _), (m0, m1, _) = k.coords, l.coords
    return ctx.sub(ctx.mul(l0, m1), ctx.mul(m0, l1)) == ctx.zero


def aff_line_through(A: AffPoint, B: AffPoint) -> AffLine:
    if not aff_apart(A, B):
        raise NotApartError(f"points {A} and {B} are not apart")
    return AffLine(A.ctx, proj.line_through(A.embed(), B.embed()).coords)


def parallel_through(A: AffPoint, k: AffLine) -> AffLine:
    ctx = A.ctx
    l0, l1, _ = k.coords
    c = ctx.neg(ctx.add(ctx.mul(l0, A.coords[0]), ctx.mul(l1, A.coords[1])))
    return aff_line(ctx, (l0, l1, c))


def aff_meet(k: AffLine, l: AffLine) -> Optional[AffPoint]:
    """None when the projective meet has a non-invertible third coordinate"""
    X = proj.meet(k.embed(), l.embed())
    if not k.ctx.is_invertible(X.coords[2]):
        debug_print(f"meet of {k} and {l} is {X}, outside the affine plane")
        return None
    return from_projective_point(X)


class AffinePlane:
    """𝔸(R) for a finite ring; points (a₀,a₁) and lines in lexicographic order"""

    kind = "affine"

    def __init__(self, ctx: RingContext):
        ctx.require_finite("enumeration of 𝔸(R)")
        self.ctx = ctx
        elems = ctx.elements()
        self.points = [AffPoint(ctx, (x, y)) for x, y in product(elems, repeat=2)]
        self.lines = [
            AffLine(ctx, v) for v in proj._canonical_vectors(ctx)
            if ctx.is_invertible(v[0]) or ctx.is_invertible(v[1])
        ]
        self.point_index: Dict[AffPoint, int] = {p: i for i, p in enumerate(self.points)}
        self.line_index: Dict[AffLine, int] = {l: i for i, l in enumerate(self.lines)}
        self._synthetic: Optional[SyntheticPlane] = None
        debug_print(f"𝔸({ctx.descriptor}): {len(self.points)} points, {len(self.lines)} lines")

    def point(self, x, y) -> AffPoint:
        return aff_point(self.ctx, (x, y))

    def line(self, *coords) -> AffLine:
        return aff_line(self.ctx, coords)

    def export(self) -> SyntheticPlane:
        if self._synthetic is None:
            self._synthetic = SyntheticPlane.from_predicates(
                "affine", self.points, self.lines, aff_apart, aff_li_apart, aff_incident, aff_outside,
                parallel=parallel,
                point_labels=[p.format() for p in self.points],
                line_labels=[l.format() for l in self.lines],
            )
        return self._synthetic


@lru_cache(maxsize=None)
def affine_plane(ctx: RingContext) -> AffinePlane:
    return AffinePlane(ctx)


class DerivedAffinePlane:
    """
    The affine plane left when a line l∞ is removed from a projective plane:
    points outside l∞, lines apart from l∞, two lines parallel when they meet
    l∞ in the same point. Index maps point back into the underlying plane.
    """

    kind = "affine"

    def __init__(self, base: SyntheticPlane, linf: int):
        if base.kind != "projective":
            raise ValueError("derived affine planes need a projective plane")
        if not 0 <= linf < base.n_lines:
            raise ValueError(f"line {linf} is not a line of the plane")
        self.base = base
        self.linf = linf
        self.point_map: List[int] = list(bits(base.out_line[linf]))
        self.line_map: List[int] = list(bits(base.li_apart_mask[linf]))
        self.point_index = {p: i for i, p in enumerate(self.point_map)}
        self.line_index = {k: i for i, k in enumerate(self.line_map)}
        self._synthetic: Optional[SyntheticPlane] = None

    def at_infinity(self, k: int) -> Optional[int]:
        """Meet of base line k with l∞"""
        return lowest(self.base.on_line[k] & self.base.on_line[self.linf])

    def export(self) -> SyntheticPlane:
        if self._synthetic is None:
            b = self.base
            pts, lns = self.point_map, self.line_map
            ends = [self.at_infinity(k) for k in lns]
            self._synthetic = SyntheticPlane.from_predicates(
                "affine", range(len(pts)), range(len(lns)),
                lambda i, j: b.pt_apart(pts[i], pts[j]),
                lambda i, j: b.li_apart(lns[i], lns[j]),
                lambda i, k: b.is_incident(pts[i], lns[k]),
                lambda i, k: b.is_outside(pts[i], lns[k]),
                parallel=lambda i, j: ends[i] is not None and ends[i] == ends[j],
                point_labels=[b.point_labels[p] for p in pts],
                line_labels=[b.line_labels[k] for k in lns],
            )
        return self._synthetic


def derive_affine(P: Union[ProjectivePlane, SyntheticPlane, RingContext],
                  linf: Union[int, proj.ProjLine]) -> DerivedAffinePlane:
    if isinstance(P, RingContext):
        P = proj.projective_plane(P)
    if isinstance(linf, proj.ProjLine):
        if not isinstance(P, ProjectivePlane) or linf not in P.line_index:
            raise ValueError(f"line {linf} is not a line of the plane")
        linf = P.line_index[linf]
    base = P if isinstance(P, SyntheticPlane) else P.export()
    return DerivedAffinePlane(base, linf)


def derived_to_affine(ctx: RingContext) -> Tuple[List[int], List[int]]:
    """Index maps from the plane derived from ℙ(R) with l∞ = (0,0,1) onto 𝔸(R)"""
    P = proj.projective_plane(ctx)
    A = affine_plane(ctx)
    derived = derive_affine(P, proj.mk_line(ctx, (0, 0, 1)))
    point_map = [A.point_index[from_projective_point(P.points[p])] for p in derived.point_map]
    line_map = [A.line_index[AffLine(ctx, P.lines[k].coords)] for k in derived.line_map]
    return point_map, line_map


# ---------------------------------------------------------------------------
# Configuration checks over coordinates or over a synthetic plane
# ---------------------------------------------------------------------------

def _lines_through_both(a: AffPoint, b: AffPoint) -> List[AffLine]:
    if aff_apart(a, b):
        return [aff_line_through(a, b)]
    a.ctx.require_finite("lines through points that are not apart")
    return [l for l in affine_plane(a.ctx).lines if aff_incident(a, l) and aff_incident(b, l)]


class _CoordinateOps:
    pt_apart = staticmethod(aff_apart)
    li_apart = staticmethod(aff_li_apart)
    is_incident = staticmethod(aff_incident)
    is_outside = staticmethod(aff_outside)
    is_parallel = staticmethod(parallel)

    @staticmethod
    def par_joins(a, b, c, d) -> bool:
        targets = _lines_through_both(c, d)
        return any(parallel(k, l) for k in _lines_through_both(a, b) for l in targets)

    @staticmethod
    def on_parallel_through(x, n, y) -> bool:
        return aff_incident(y, parallel_through(x, n))

    @staticmethod
    def outside_join(d, a, b) -> bool:
        return aff_apart(a, b) and aff_outside(d, aff_line_through(a, b))


_CHECKERS = {
    "desargues_small": desargues_small_config,
    "desargues_big": desargues_big_config,
    "pappus_affine": pappus_affine_config,
    "parallel-3": parallel3_config,
    "parallel-4": parallel4_config,
    "concurrent-3": concurrent3_config,
    "concurrent-4": concurrent4_config,
    "5-point": five_point_config,
}


def _ops(plane: Optional[SyntheticPlane]):
    return SyntheticOps(plane) if plane is not None else _CoordinateOps


def desargues_small_check(config: Dict[str, Any], plane: Optional[SyntheticPlane] = None) -> CheckResult:
    """config maps k,l,m,nA,nA2,nC,nC2,A,A2,B,B2,C,C2 to elements; primes are spelled 2"""
    return desargues_small_config(_ops(plane), **config)


def desargues_big_check(config: Dict[str, Any], plane: Optional[SyntheticPlane] = None) -> CheckResult:
    return desargues_big_config(_ops(plane), **config)


def pappus_affine_check(config: Dict[str, Any], plane: Optional[SyntheticPlane] = None) -> CheckResult:
    return pappus_affine_config(_ops(plane), **config)


def desargues_variants_check(variant: str, config: Dict[str, Any],
                             plane: Optional[SyntheticPlane] = None) -> CheckResult:
    if variant not in DESARGUES_VARIANTS:
        raise ValueError(f"Unknown Desargues variant: {variant}")
    return _CHECKERS[variant](_ops(plane), **config)


def _synthetic(source) -> SyntheticPlane:
    if isinstance(source, RingContext):
        source = affine_plane(source)
    return source if isinstance(source, SyntheticPlane) else source.export()


def verify_desargues_variant(source, variant: str, seed: Optional[int] = None, samples: Optional[int] = None,
                             exhaustive_limit: Optional[int] = None) -> ConfigurationTally:
    if variant not in DESARGUES_VARIANTS:
        raise ValueError(f"Unknown Desargues variant: {variant}")
    return run_configurations(_synthetic(source), variant, seed=seed, samples=samples,
                              exhaustive_limit=exhaustive_limit)


def verify_affine_axioms(source, seed: Optional[int] = None, samples: Optional[int] = None,
                         exhaustive_limit: Optional[int] = None) -> VerificationReport:
    """source is a ring context, an AffinePlane, a DerivedAffinePlane or a SyntheticPlane"""
    return verify_plane(_synthetic(source), "affine", seed=seed, samples=samples,
                        exhaustive_limit=exhaustive_limit)
