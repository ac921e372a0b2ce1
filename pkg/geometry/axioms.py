import random
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple
from pydantic import BaseModel, Field
from config import settings, debug_print
from geometry.synthetic import SyntheticPlane, bits, lowest


PREMISES_FAIL = "premises_fail"
HOLDS = "holds"
VIOLATED = "violated"


@dataclass(frozen=True)
class CheckResult:
    """Three-way outcome of a configuration check"""
    outcome: str
    reason: str = ""

    @property
    def violated(self) -> bool:
        return self.outcome == VIOLATED


def _three_way(premises: Sequence[Tuple[str, Callable[[], bool]]],
               conclusion: Tuple[str, Callable[[], bool]]) -> CheckResult:
    for reason, premise in premises:
        if not premise():
            return CheckResult(PREMISES_FAIL, reason)
    name, check = conclusion
    return CheckResult(HOLDS, name) if check() else CheckResult(VIOLATED, name)


class SyntheticOps:
    """Predicate adapter over a SyntheticPlane used by the configuration checkers.

    Adds δ and the derived affine notions on top of the plane's bitmasks.
    The collinearity and line-union caches are filled lazily.
    """

    def __init__(self, plane: SyntheticPlane):
        self.plane = plane
        self._colin: Dict[Tuple[int, int], int] = {}
        self._union: Dict[int, int] = {}

    # basic relations
    def pt_apart(self, a: int, b: int) -> bool:
        return self.plane.pt_apart(a, b)

    def li_apart(self, k: int, l: int) -> bool:
        return self.plane.li_apart(k, l)

    def is_incident(self, p: int, k: int) -> bool:
        return self.plane.is_incident(p, k)

    def is_outside(self, p: int, k: int) -> bool:
        return self.plane.is_outside(p, k)

    def is_parallel(self, k: int, l: int) -> bool:
        return self.plane.is_parallel(k, l)

    # masks
    def colin(self, a: int, b: int) -> int:
        """Points X such that some line holds a, b and X"""
        key = (a, b) if a <= b else (b, a)
        mask = self._colin.get(key)
        if mask is None:
            p = self.plane
            mask = 0
            for r in bits(p.through[a] & p.through[b]):
                mask |= p.on_line[r]
            self._colin[key] = mask
        return mask

    def through_union(self, points: int) -> int:
        mask = self._union.get(points)
        if mask is None:
            mask = 0
            for x in bits(points):
                mask |= self.plane.through[x]
            self._union[points] = mask
        return mask

    def delta_lines(self, k: int, a: int, b: int) -> int:
        """Lines l with δ(k, l, a, b)"""
        return self.through_union(self.plane.on_line[k] & self.colin(a, b))

    def delta(self, k: int, l: int, a: int, b: int) -> bool:
        p = self.plane
        return bool(p.on_line[k] & p.on_line[l] & self.colin(a, b))

    def joins(self, a: int, b: int) -> int:
        return self.plane.through[a] & self.plane.through[b]

    def par_joins(self, a: int, b: int, c: int, d: int) -> bool:
        """Some line through a, b is parallel to some line through c, d"""
        target = self.joins(c, d)
        return any(self.plane.par_mask[n] & target for n in bits(self.joins(a, b)))

    def parallel_points(self, x: int, n: int) -> int:
        """Points on the lines through x parallel to n"""
        p = self.plane
        mask = 0
        for r in bits(p.through[x] & p.par_mask[n]):
            mask |= p.on_line[r]
        return mask

    def on_parallel_through(self, x: int, n: int, y: int) -> bool:
        return bool(self.parallel_points(x, n) >> y & 1)

    def outside_join(self, d: int, a: int, b: int) -> bool:
        """a # b and d lies outside the line through a and b"""
        return self.pt_apart(a, b) and bool(self.joins(a, b) & self.plane.out_point[d])


# ---------------------------------------------------------------------------
# Configuration checkers. Each takes a predicate adapter g and the named
# elements of the configuration, checks the premises in order and then the
# conclusion.
# ---------------------------------------------------------------------------

def desargues_config(g, A, B, C, D, k, l, m, n) -> CheckResult:
    premises = (
        ("delta(k,l,A,B)", lambda: g.delta(k, l, A, B)),
        ("delta(l,m,B,C)", lambda: g.delta(l, m, B, C)),
        ("delta(m,n,C,D)", lambda: g.delta(m, n, C, D)),
        ("delta(n,k,D,A)", lambda: g.delta(n, k, D, A)),
        ("delta(k,m,B,D)", lambda: g.delta(k, m, B, D)),
        ("l#n or A#C", lambda: g.li_apart(l, n) or g.pt_apart(A, C)),
        ("one of A,C outside one of l,n",
         lambda: any(g.is_outside(p, x) for p in (A, C) for x in (l, n))),
        ("B outside one of k,l,m", lambda: any(g.is_outside(B, x) for x in (k, l, m))),
        ("D outside one of m,n,k", lambda: any(g.is_outside(D, x) for x in (m, n, k))),
        ("one of D,A,B outside k", lambda: any(g.is_outside(p, k) for p in (D, A, B))),
        ("one of B,C,D outside m", lambda: any(g.is_outside(p, m) for p in (B, C, D))),
    )
    return _three_way(premises, ("delta(l,n,A,C)", lambda: g.delta(l, n, A, C)))


def pappus_config(g, A, B, C, D, E, F, kA, kB, kC, kD, kE, kF) -> CheckResult:
    on = g.is_incident
    premises = (
        ("A,B on k_A", lambda: on(A, kA) and on(B, kA)),
        ("B,C on k_B", lambda: on(B, kB) and on(C, kB)),
        ("C,D on k_C", lambda: on(C, kC) and on(D, kC)),
        ("D,E on k_D", lambda: on(D, kD) and on(E, kD)),
        ("E,F on k_E", lambda: on(E, kE) and on(F, kE)),
        ("F,A on k_F", lambda: on(F, kF) and on(A, kF)),
        ("delta(k_C,k_F,B,E)", lambda: g.delta(kC, kF, B, E)),
        ("delta(k_B,k_E,A,D)", lambda: g.delta(kB, kE, A, D)),
        # the line branch is the point branch read in the dual hexagon kB..kA
        ("A#B and D#E, or k_B#k_C and k_E#k_F",
         lambda: (g.pt_apart(A, B) and g.pt_apart(D, E))
         or (g.li_apart(kB, kC) and g.li_apart(kE, kF))),
        ("one of C,F outside one of k_A,k_D",
         lambda: any(g.is_outside(p, x) for p in (C, F) for x in (kA, kD))),
        ("k_A#k_D or F#C", lambda: g.li_apart(kA, kD) or g.pt_apart(F, C)),
    )
    return _three_way(premises, ("delta(k_A,k_D,F,C)", lambda: g.delta(kA, kD, F, C)))


def desargues_small_config(g, k, l, m, nA, nA2, nC, nC2, A, A2, B, B2, C, C2) -> CheckResult:
    on = g.is_incident
    premises = (
        ("k||l||m", lambda: g.is_parallel(k, l) and g.is_parallel(l, m)),
        ("n_A||n_A'", lambda: g.is_parallel(nA, nA2)),
        ("n_C||n_C'", lambda: g.is_parallel(nC, nC2)),
        ("A,B on n_A", lambda: on(A, nA) and on(B, nA)),
        ("B,C on n_C", lambda: on(B, nC) and on(C, nC)),
        ("A',B' on n_A'", lambda: on(A2, nA2) and on(B2, nA2)),
        ("B',C' on n_C'", lambda: on(B2, nC2) and on(C2, nC2)),
        ("A,A' on k", lambda: on(A, k) and on(A2, k)),
        ("B,B' on l", lambda: on(B, l) and on(B2, l)),
        ("C,C' on m", lambda: on(C, m) and on(C2, m)),
        ("A#C", lambda: g.pt_apart(A, C)),
        ("A'#C'", lambda: g.pt_apart(A2, C2)),
        ("n_A#l", lambda: g.li_apart(nA, l)),
        ("n_C#l", lambda: g.li_apart(nC, l)),
    )
    return _three_way(premises, ("AC||A'C'", lambda: g.par_joins(A, C, A2, C2)))


def desargues_big_config(g, k, l, m, nAB, nBC, nAC, P, A, A2, B, B2, C, C2) -> CheckResult:
    on = g.is_incident
    premises = (
        ("P on k,l,m", lambda: on(P, k) and on(P, l) and on(P, m)),
        ("A,B on n_AB", lambda: on(A, nAB) and on(B, nAB)),
        ("B,C on n_BC", lambda: on(B, nBC) and on(C, nBC)),
        ("A,C on n_AC", lambda: on(A, nAC) and on(C, nAC)),
        ("A,A' on k", lambda: on(A, k) and on(A2, k)),
        ("B,B' on l", lambda: on(B, l) and on(B2, l)),
        ("C,C' on m", lambda: on(C, m) and on(C2, m)),
        ("P outside n_AB and n_BC", lambda: g.is_outside(P, nAB) and g.is_outside(P, nBC)),
        ("B' on the parallel to n_AB through A'", lambda: g.on_parallel_through(A2, nAB, B2)),
        ("C' on the parallel to n_BC through B'", lambda: g.on_parallel_through(B2, nBC, C2)),
    )
    return _three_way(premises, ("C' on the parallel to n_AC through A'",
                                 lambda: g.on_parallel_through(A2, nAC, C2)))


def pappus_affine_config(g, k, l, P, A, A2, B, B2, C, C2) -> CheckResult:
    on = g.is_incident
    premises = (
        ("P,A,B,C on k", lambda: all(on(x, k) for x in (P, A, B, C))),
        ("P,A',B',C' on l", lambda: all(on(x, l) for x in (P, A2, B2, C2))),
        ("k#l", lambda: g.li_apart(k, l)),
        ("A,A',B,B',C,C' apart from P", lambda: all(g.pt_apart(P, x) for x in (A, A2, B, B2, C, C2))),
        ("AB'||BC'", lambda: g.par_joins(A, B2, B, C2)),
        ("A'B||B'C", lambda: g.par_joins(A2, B, B2, C)),
    )
    return _three_way(premises, ("AA'||CC'", lambda: g.par_joins(A, A2, C, C2)))


def _on_pairs(g, pairs):
    return lambda: all(g.is_incident(p, x) for p, x in pairs)


def parallel3_config(g, k, l, m, A, A2, B, B2, C, C2) -> CheckResult:
    premises = (
        ("k||l||m", lambda: g.is_parallel(k, l) and g.is_parallel(l, m)),
        ("k#l#m", lambda: g.li_apart(k, l) and g.li_apart(l, m)),
        ("A#C", lambda: g.pt_apart(A, C)),
        ("A'#C'", lambda: g.pt_apart(A2, C2)),
        ("A,A' on k; B,B' on l; C,C' on m",
         _on_pairs(g, ((A, k), (A2, k), (B, l), (B2, l), (C, m), (C2, m)))),
        ("AB||A'B'", lambda: g.par_joins(A, B, A2, B2)),
        ("BC||B'C'", lambda: g.par_joins(B, C, B2, C2)),
    )
    return _three_way(premises, ("AC||A'C'", lambda: g.par_joins(A, C, A2, C2)))


def parallel4_config(g, k, l, m, n, A, A2, B, B2, C, C2, D, D2) -> CheckResult:
    premises = (
        ("k,l,m,n parallel", lambda: g.is_parallel(k, l) and g.is_parallel(l, m) and g.is_parallel(m, n)),
        ("k#l#m#n", lambda: g.li_apart(k, l) and g.li_apart(l, m) and g.li_apart(m, n)),
        ("A#D", lambda: g.pt_apart(A, D)),
        ("A'#D'", lambda: g.pt_apart(A2, D2)),
        ("A,A' on k; B,B' on l; C,C' on m; D,D' on n",
         _on_pairs(g, ((A, k), (A2, k), (B, l), (B2, l), (C, m), (C2, m), (D, n), (D2, n)))),
        ("AB||A'B'", lambda: g.par_joins(A, B, A2, B2)),
        ("BC||B'C'", lambda: g.par_joins(B, C, B2, C2)),
        ("CD||C'D'", lambda: g.par_joins(C, D, C2, D2)),
    )
    return _three_way(premises, ("AD||A'D'", lambda: g.par_joins(A, D, A2, D2)))


def concurrent3_config(g, k, l, m, P, A, A2, B, B2, C, C2) -> CheckResult:
    premises = (
        ("P on k,l,m", _on_pairs(g, ((P, k), (P, l), (P, m)))),
        ("k#l#m", lambda: g.li_apart(k, l) and g.li_apart(l, m)),
        ("P apart from A,A',B,B',C,C'", lambda: all(g.pt_apart(P, x) for x in (A, A2, B, B2, C, C2))),
        ("A,A' on k; B,B' on l; C,C' on m",
         _on_pairs(g, ((A, k), (A2, k), (B, l), (B2, l), (C, m), (C2, m)))),
        ("A#C and A'#C'", lambda: g.pt_apart(A, C) and g.pt_apart(A2, C2)),
        ("AB||A'B'", lambda: g.par_joins(A, B, A2, B2)),
        ("BC||B'C'", lambda: g.par_joins(B, C, B2, C2)),
    )
    return _three_way(premises, ("AC||A'C'", lambda: g.par_joins(A, C, A2, C2)))


def concurrent4_config(g, k, l, m, n, P, A, A2, B, B2, C, C2, D, D2) -> CheckResult:
    premises = (
        ("P on k,l,m,n", _on_pairs(g, ((P, k), (P, l), (P, m), (P, n)))),
        ("k#l#m#n", lambda: g.li_apart(k, l) and g.li_apart(l, m) and g.li_apart(m, n)),
        ("A#D", lambda: g.pt_apart(A, D)),
        ("A'#D'", lambda: g.pt_apart(A2, D2)),
        ("P apart from A,A',B,B',C,C',D,D'",
         lambda: all(g.pt_apart(P, x) for x in (A, A2, B, B2, C, C2, D, D2))),
        ("A,A' on k; B,B' on l; C,C' on m; D,D' on n",
         _on_pairs(g, ((A, k), (A2, k), (B, l), (B2, l), (C, m), (C2, m), (D, n), (D2, n)))),
        ("AB||A'B'", lambda: g.par_joins(A, B, A2, B2)),
        ("BC||B'C'", lambda: g.par_joins(B, C, B2, C2)),
        ("CD||C'D'", lambda: g.par_joins(C, D, C2, D2)),
    )
    return _three_way(premises, ("AD||A'D'", lambda: g.par_joins(A, D, A2, D2)))


def five_point_config(g, k, l, m, P, A, A2, B, B2, C, C2, D, D2) -> CheckResult:
    premises = (
        ("P on k,l,m", _on_pairs(g, ((P, k), (P, l), (P, m)))),
        ("k#l#m", lambda: g.li_apart(k, l) and g.li_apart(l, m)),
        ("P apart from A,A',B,B',C,C'", lambda: all(g.pt_apart(P, x) for x in (A, A2, B, B2, C, C2))),
        ("A,A' on k; B,B' on l; C,C' on m",
         _on_pairs(g, ((A, k), (A2, k), (B, l), (B2, l), (C, m), (C2, m)))),
        ("D outside AB and BC", lambda: g.outside_join(D, A, B) and g.outside_join(D, B, C)),
        ("D' outside A'B' and B'C'", lambda: g.outside_join(D2, A2, B2) and g.outside_join(D2, B2, C2)),
        ("AB||A'B'", lambda: g.par_joins(A, B, A2, B2)),
        ("BC||B'C'", lambda: g.par_joins(B, C, B2, C2)),
        ("BD||B'D'", lambda: g.par_joins(B, D, B2, D2)),
        ("CD||C'D'", lambda: g.par_joins(C, D, C2, D2)),
    )
    return _three_way(premises, ("AD||A'D'", lambda: g.par_joins(A, D, A2, D2)))


# ---------------------------------------------------------------------------
# Premise-driven generators. `pick` turns a bitmask or an iterable into the
# choices to explore: every option when enumerating, one random option when
# sampling. Each generator yields keyword dicts for the matching checker.
# ---------------------------------------------------------------------------

def _every(options) -> List[int]:
    return list(bits(options)) if isinstance(options, int) else list(options)


class _Sampler:
    """Random depth-first walk: options come shuffled and a walk may back
    off a dead end, up to `budget` choices per walk"""

    def __init__(self, rng: random.Random, budget: int = 64):
        self.rng = rng
        self.budget = budget
        self.left = budget

    def start_walk(self):
        self.left = self.budget

    def __call__(self, options) -> List[int]:
        if self.left <= 0:
            return []
        self.left -= 1
        opts = _every(options)
        self.rng.shuffle(opts)
        return opts


def _desargues_tuples(g: SyntheticOps, pick) -> Iterator[Dict[str, int]]:
    p = g.plane
    for A in pick(range(p.n_points)):
        for B in pick(range(p.n_points)):
            for C in pick(range(p.n_points)):
                for D in pick(range(p.n_points)):
                    for k in pick(range(p.n_lines)):
                        ls = g.delta_lines(k, A, B)
                        mk = g.delta_lines(k, B, D)
                        nk = g.delta_lines(k, D, A)
                        if not (ls and mk and nk):
                            continue
                        for l in pick(ls):
                            for m in pick(mk & g.delta_lines(l, B, C)):
                                for n in pick(nk & g.delta_lines(m, C, D)):
                                    yield dict(A=A, B=B, C=C, D=D, k=k, l=l, m=m, n=n)


def _pappus_tuples(g: SyntheticOps, pick) -> Iterator[Dict[str, int]]:
    p = g.plane
    for A in pick(range(p.n_points)):
        for kA in pick(p.through[A]):
            for B in pick(p.on_line[kA]):
                for kB in pick(p.through[B]):
                    for C in pick(p.on_line[kB]):
                        for kC in pick(p.through[C]):
                            for D in pick(p.on_line[kC]):
                                for kD in pick(p.through[D]):
                                    for E in pick(p.on_line[kD]):
                                        for kE in pick(p.through[E] & g.delta_lines(kB, A, D)):
                                            for F in pick(p.on_line[kE]):
                                                kFs = p.through[F] & p.through[A] & g.delta_lines(kC, B, E)
                                                for kF in pick(kFs):
                                                    yield dict(A=A, B=B, C=C, D=D, E=E, F=F, kA=kA, kB=kB,
                                                               kC=kC, kD=kD, kE=kE, kF=kF)


def _desargues_small_tuples(g: SyntheticOps, pick) -> Iterator[Dict[str, int]]:
    p = g.plane
    for B in pick(range(p.n_points)):
        for l in pick(p.through[B]):
            for nA in pick(p.through[B] & p.li_apart_mask[l]):
                for nC in pick(p.through[B] & p.li_apart_mask[l]):
                    for A in pick(p.on_line[nA]):
                        for k in pick(p.through[A] & p.par_mask[l]):
                            for C in pick(p.on_line[nC] & p.pt_apart_mask[A]):
                                for m in pick(p.through[C] & p.par_mask[l]):
                                    for B2 in pick(p.on_line[l]):
                                        for nA2 in pick(p.through[B2] & p.par_mask[nA]):
                                            for A2 in pick(p.on_line[nA2] & p.on_line[k]):
                                                for nC2 in pick(p.through[B2] & p.par_mask[nC]):
                                                    C2s = p.on_line[nC2] & p.on_line[m] & p.pt_apart_mask[A2]
                                                    for C2 in pick(C2s):
                                                        yield dict(k=k, l=l, m=m, nA=nA, nA2=nA2, nC=nC,
                                                                   nC2=nC2, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2)


def _desargues_big_tuples(g: SyntheticOps, pick) -> Iterator[Dict[str, int]]:
    p = g.plane
    for P in pick(range(p.n_points)):
        for k in pick(p.through[P]):
            for l in pick(p.through[P]):
                for m in pick(p.through[P]):
                    for B in pick(p.on_line[l]):
                        for nAB in pick(p.through[B] & p.out_point[P]):
                            for A in pick(p.on_line[nAB] & p.on_line[k]):
                                for nBC in pick(p.through[B] & p.out_point[P]):
                                    for C in pick(p.on_line[nBC] & p.on_line[m]):
                                        for nAC in pick(p.through[A] & p.through[C]):
                                            for A2 in pick(p.on_line[k]):
                                                for B2 in pick(p.on_line[l] & g.parallel_points(A2, nAB)):
                                                    C2s = p.on_line[m] & g.parallel_points(B2, nBC)
                                                    for C2 in pick(C2s):
                                                        yield dict(k=k, l=l, m=m, nAB=nAB, nBC=nBC, nAC=nAC,
                                                                   P=P, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2)


def _pappus_affine_tuples(g: SyntheticOps, pick) -> Iterator[Dict[str, int]]:
    p = g.plane
    for P in pick(range(p.n_points)):
        for k in pick(p.through[P]):
            for l in pick(p.through[P] & p.li_apart_mask[k]):
                on_k = p.on_line[k] & p.pt_apart_mask[P]
                on_l = p.on_line[l] & p.pt_apart_mask[P]
                for A, B, A2, B2 in product(pick(on_k), pick(on_k), pick(on_l), pick(on_l)):
                    for C in pick(on_k):
                        if not g.par_joins(A2, B, B2, C):
                            continue
                        for C2 in pick(on_l):
                            if g.par_joins(A, B2, B, C2):
                                yield dict(k=k, l=l, P=P, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2)


def _parallel_lines(p: SyntheticPlane, pick, count: int) -> Iterator[Tuple[int, ...]]:
    """Chains k#l#... of mutually parallel lines"""
    def extend(chain):
        if len(chain) == count:
            yield tuple(chain)
            return
        last = chain[-1]
        for nxt in pick(p.par_mask[last] & p.li_apart_mask[last]):
            yield from extend(chain + [nxt])
    for k in pick(range(p.n_lines)):
        yield from extend([k])


def _concurrent_lines(p: SyntheticPlane, pick, count: int) -> Iterator[Tuple[int, ...]]:
    """A point P and a chain k#l#... of lines through it"""
    def extend(P, chain):
        if len(chain) == count:
            yield (P,) + tuple(chain)
            return
        for nxt in pick(p.through[P] & p.li_apart_mask[chain[-1]]):
            yield from extend(P, chain + [nxt])
    for P in pick(range(p.n_points)):
        for k in pick(p.through[P]):
            yield from extend(P, [k])


def _pairs_on(g: SyntheticOps, pick, lines: Sequence[int], avoid: Optional[int] = None):
    """Primed and unprimed points on each line, pruned by the parallel premises"""
    p = g.plane
    masks = [p.on_line[x] & (p.pt_apart_mask[avoid] if avoid is not None else p.all_points) for x in lines]

    def walk(i, pts, pts2):
        if i == len(lines):
            yield pts, pts2
            return
        for x in pick(masks[i]):
            for x2 in pick(masks[i]):
                if i and not g.par_joins(pts[-1], x, pts2[-1], x2):
                    continue
                yield from walk(i + 1, pts + [x], pts2 + [x2])
    yield from walk(0, [], [])


def _parallel3_tuples(g, pick):
    for k, l, m in _parallel_lines(g.plane, pick, 3):
        for (A, B, C), (A2, B2, C2) in _pairs_on(g, pick, (k, l, m)):
            yield dict(k=k, l=l, m=m, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2)


def _parallel4_tuples(g, pick):
    for k, l, m, n in _parallel_lines(g.plane, pick, 4):
        for (A, B, C, D), (A2, B2, C2, D2) in _pairs_on(g, pick, (k, l, m, n)):
            yield dict(k=k, l=l, m=m, n=n, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2, D=D, D2=D2)


def _concurrent3_tuples(g, pick):
    for P, k, l, m in _concurrent_lines(g.plane, pick, 3):
        for (A, B, C), (A2, B2, C2) in _pairs_on(g, pick, (k, l, m), avoid=P):
            yield dict(k=k, l=l, m=m, P=P, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2)


def _concurrent4_tuples(g, pick):
    for P, k, l, m, n in _concurrent_lines(g.plane, pick, 4):
        for (A, B, C, D), (A2, B2, C2, D2) in _pairs_on(g, pick, (k, l, m, n), avoid=P):
            yield dict(k=k, l=l, m=m, n=n, P=P, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2, D=D, D2=D2)


def _five_point_tuples(g, pick):
    p = g.plane
    for P, k, l, m in _concurrent_lines(p, pick, 3):
        for (A, B, C), (A2, B2, C2) in _pairs_on(g, pick, (k, l, m), avoid=P):
            for D in pick(range(p.n_points)):
                if not (g.outside_join(D, A, B) and g.outside_join(D, B, C)):
                    continue
                for D2 in pick(range(p.n_points)):
                    if g.par_joins(B, D, B2, D2) and g.par_joins(C, D, C2, D2):
                        yield dict(k=k, l=l, m=m, P=P, A=A, A2=A2, B=B, B2=B2, C=C, C2=C2, D=D, D2=D2)


def _degrees(p: SyntheticPlane) -> Tuple[int, int]:
    d = max((bin(x).count("1") for x in p.through), default=0)
    r = max((bin(x).count("1") for x in p.on_line), default=0)
    return d, r


# name -> (checker, generator, search-space estimate)
CONFIGURATIONS: Dict[str, Tuple[Callable, Callable, Callable[[SyntheticPlane], int]]] = {
    "desargues": (desargues_config, _desargues_tuples,
                  lambda p: p.n_points ** 4 * p.n_lines * _degrees(p)[0]),
    # k_E and k_F are pinned by the δ premises up to degenerate cases
    "pappus": (pappus_config, _pappus_tuples,
               lambda p: p.n_points * _degrees(p)[0] ** 4 * _degrees(p)[1] ** 5),
    "desargues_small": (desargues_small_config, _desargues_small_tuples,
                        lambda p: p.n_points * _degrees(p)[0] ** 3 * _degrees(p)[1] ** 3),
    "desargues_big": (desargues_big_config, _desargues_big_tuples,
                      lambda p: p.n_points * _degrees(p)[0] ** 5 * _degrees(p)[1] ** 2),
    "pappus_affine": (pappus_affine_config, _pappus_affine_tuples,
                      lambda p: p.n_points * _degrees(p)[0] ** 2 * _degrees(p)[1] ** 6),
    "parallel-3": (parallel3_config, _parallel3_tuples,
                   lambda p: p.n_lines * 4 * _degrees(p)[1] ** 6),
    "parallel-4": (parallel4_config, _parallel4_tuples,
                   lambda p: p.n_lines * 8 * _degrees(p)[1] ** 8),
    "concurrent-3": (concurrent3_config, _concurrent3_tuples,
                     lambda p: p.n_points * _degrees(p)[0] ** 3 * _degrees(p)[1] ** 6),
    "concurrent-4": (concurrent4_config, _concurrent4_tuples,
                     lambda p: p.n_points * _degrees(p)[0] ** 4 * _degrees(p)[1] ** 8),
    "5-point": (five_point_config, _five_point_tuples,
                lambda p: p.n_points ** 3 * _degrees(p)[0] ** 3 * _degrees(p)[1] ** 6),
}

DESARGUES_VARIANTS = ("parallel-3", "parallel-4", "concurrent-3", "concurrent-4", "5-point")


@dataclass
class ConfigurationTally:
    name: str
    mode: str
    checked: int = 0
    premises_ok: int = 0
    walks: int = 0
    target: Optional[int] = None
    witness: Optional[Tuple[int, ...]] = None

    @property
    def passed(self) -> bool:
        return self.witness is None

    @property
    def short_of_target(self) -> bool:
        """A sampled sweep that ran out of walks before reaching its target"""
        return self.target is not None and self.passed and self.premises_ok < self.target


def run_configurations(
    plane: SyntheticPlane,
    name: str,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    exhaustive_limit: Optional[int] = None,
    ops: Optional[SyntheticOps] = None,
) -> ConfigurationTally:
    """Check one configuration axiom over a finite plane.

    Enumerates every premise-driven tuple when the estimated search space fits
    in `exhaustive_limit`. Otherwise runs seeded random walks until `samples`
    configurations satisfying the premises have been checked, giving up after
    `samples * settings.sample_walk_factor` walks. Stops at the first violation.
    """
    if name not in CONFIGURATIONS:
        raise ValueError(f"Unknown configuration: {name}")
    seed = settings.seed if seed is None else seed
    samples = settings.samples if samples is None else samples
    exhaustive_limit = settings.exhaustive_limit if exhaustive_limit is None else exhaustive_limit
    checker, generator, estimate = CONFIGURATIONS[name]
    g = ops or SyntheticOps(plane)

    def check(tally: ConfigurationTally, cfg: Dict[str, int]) -> bool:
        """False once a violation is found"""
        tally.checked += 1
        result = checker(g, **cfg)
        if result.outcome == PREMISES_FAIL:
            return True
        tally.premises_ok += 1
        if result.violated:
            tally.witness = tuple(cfg.values())
            return False
        return True

    space = estimate(plane)
    if space <= exhaustive_limit:
        tally = ConfigurationTally(name, "exhaustive")
        debug_print(f"{name}: estimated space {space}, enumerating")
        for cfg in generator(g, _every):
            if not check(tally, cfg):
                break
    else:
        tally = ConfigurationTally(name, "sampled", target=samples)
        debug_print(f"{name}: estimated space {space}, sampling {samples} configurations")
        sampler = _Sampler(random.Random(f"{seed}:{name}"))
        max_walks = samples * settings.sample_walk_factor
        while tally.premises_ok < samples and tally.walks < max_walks:
            tally.walks += 1
            sampler.start_walk()
            cfg = next(generator(g, sampler), None)
            if cfg is not None and not check(tally, cfg):
                break
        if tally.short_of_target:
            debug_print(f"{name}: only {tally.premises_ok}/{samples} configurations in {tally.walks} walks")
    debug_print(f"{name}: {tally.checked} tuples, {tally.premises_ok} with premises, passed={tally.passed}")
    return tally


# ---------------------------------------------------------------------------
# Coherent sequents. Each check returns (passed, witness, checked).
# ---------------------------------------------------------------------------

Outcome = Tuple[bool, Optional[Tuple[int, ...]], int]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _irreflexive(masks: List[int]) -> Outcome:
    for i, m in enumerate(masks):
        if m >> i & 1:
            return False, (i,), i + 1
    return True, None, len(masks)


def _symmetric(masks: List[int]) -> Outcome:
    checked = 0
    for i, m in enumerate(masks):
        for j in bits(m):
            checked += 1
            if not masks[j] >> i & 1:
                return False, (i, j), checked
    return True, None, checked


def _cotransitive(masks: List[int], full: int) -> Outcome:
    checked = 0
    for i, m in enumerate(masks):
        for j in bits(m):
            checked += 1
            missing = full & ~(masks[i] | masks[j])
            if missing:
                return False, (i, j, lowest(missing)), checked
    return True, None, checked


def pt_apart_irreflexive(p: SyntheticPlane) -> Outcome:
    return _irreflexive(p.pt_apart_mask)


def pt_apart_symmetric(p: SyntheticPlane) -> Outcome:
    return _symmetric(p.pt_apart_mask)


def pt_apart_cotransitive(p: SyntheticPlane) -> Outcome:
    return _cotransitive(p.pt_apart_mask, p.all_points)


def li_apart_irreflexive(p: SyntheticPlane) -> Outcome:
    return _irreflexive(p.li_apart_mask)


def li_apart_symmetric(p: SyntheticPlane) -> Outcome:
    return _symmetric(p.li_apart_mask)


def li_apart_cotransitive(p: SyntheticPlane) -> Outcome:
    return _cotransitive(p.li_apart_mask, p.all_lines)


def incident_outside_disjoint(p: SyntheticPlane) -> Outcome:
    for k in range(p.n_lines):
        both = p.on_line[k] & p.out_line[k]
        if both:
            return False, (lowest(both), k), k + 1
    return True, None, p.n_lines


def outside_point_cotransitive(p: SyntheticPlane) -> Outcome:
    """A∉k ⊢ A#B ∨ B∉k"""
    checked = 0
    for k in range(p.n_lines):
        for A in bits(p.out_line[k]):
            checked += 1
            missing = p.all_points & ~(p.pt_apart_mask[A] | p.out_line[k])
            if missing:
                return False, (A, lowest(missing), k), checked
    return True, None, checked


def outside_line_cotransitive(p: SyntheticPlane) -> Outcome:
    """A∉k ⊢ k#l ∨ A∉l"""
    checked = 0
    for A in range(p.n_points):
        for k in bits(p.out_point[A]):
            checked += 1
            missing = p.all_lines & ~(p.li_apart_mask[k] | p.out_point[A])
            if missing:
                return False, (A, k, lowest(missing)), checked
    return True, None, checked


def _exists_unique(apart: List[int], common: List[int], exists: bool) -> Outcome:
    checked = 0
    for i, m in enumerate(apart):
        for j in bits(m):
            checked += 1
            shared = common[i] & common[j]
            if exists and not shared:
                return False, (i, j), checked
            if not exists and _popcount(shared) > 1:
                first = lowest(shared)
                return False, (i, j, first, lowest(shared & ~(1 << first))), checked
    return True, None, checked


def join_exists(p: SyntheticPlane) -> Outcome:
    return _exists_unique(p.pt_apart_mask, p.through, True)


def join_unique(p: SyntheticPlane) -> Outcome:
    return _exists_unique(p.pt_apart_mask, p.through, False)


def meet_exists(p: SyntheticPlane) -> Outcome:
    return _exists_unique(p.li_apart_mask, p.on_line, True)


def meet_unique(p: SyntheticPlane) -> Outcome:
    return _exists_unique(p.li_apart_mask, p.on_line, False)


def _three_apart(candidates: int, apart: List[int]) -> Optional[Tuple[int, int, int]]:
    for a in bits(candidates):
        for b in bits(candidates & apart[a]):
            c = lowest(candidates & apart[a] & apart[b])
            if c is not None:
                return a, b, c
    return None


def line_has_three_points(p: SyntheticPlane) -> Outcome:
    for l in range(p.n_lines):
        if _three_apart(p.on_line[l], p.pt_apart_mask) is None:
            return False, (l,), l + 1
    return True, None, p.n_lines


def point_has_three_lines(p: SyntheticPlane) -> Outcome:
    for A in range(p.n_points):
        if _three_apart(p.through[A], p.li_apart_mask) is None:
            return False, (A,), A + 1
    return True, None, p.n_points


def line_has_two_points(p: SyntheticPlane) -> Outcome:
    for l in range(p.n_lines):
        if not any(p.on_line[l] & p.pt_apart_mask[a] for a in bits(p.on_line[l])):
            return False, (l,), l + 1
    return True, None, p.n_lines


def line_has_outside_point(p: SyntheticPlane) -> Outcome:
    for l in range(p.n_lines):
        if not p.out_line[l]:
            return False, (l,), l + 1
    return True, None, p.n_lines


def point_has_outside_line(p: SyntheticPlane) -> Outcome:
    for A in range(p.n_points):
        if not p.out_point[A]:
            return False, (A,), A + 1
    return True, None, p.n_points


def exists_noncollinear(p: SyntheticPlane) -> Outcome:
    """⊤ ⊢ ∃A,B,C,l. A#B ∧ A,B∈l ∧ C∉l; the witness is reported on success"""
    checked = 0
    for l in range(p.n_lines):
        checked += 1
        if not p.out_line[l]:
            continue
        for A in bits(p.on_line[l]):
            B = lowest(p.on_line[l] & p.pt_apart_mask[A])
            if B is not None:
                return True, (A, B, lowest(p.out_line[l]), l), checked
    return False, None, checked


def exists_nonconcurrent(p: SyntheticPlane) -> Outcome:
    """⊤ ⊢ ∃A,k,l,m. k#l ∧ A∈k,l ∧ A∉m"""
    checked = 0
    for A in range(p.n_points):
        checked += 1
        if not p.out_point[A]:
            continue
        for k in bits(p.through[A]):
            l = lowest(p.through[A] & p.li_apart_mask[k])
            if l is not None:
                return True, (A, k, l, lowest(p.out_point[A])), checked
    return False, None, checked


def self_dual(p: SyntheticPlane) -> Outcome:
    """A#B ∧ l#m ⊢ A∉l ∨ B∉m ∨ A∉m ∨ B∉l"""
    checked = 0
    for A in range(p.n_points):
        for B in bits(p.pt_apart_mask[A]):
            either = p.out_point[A] | p.out_point[B]
            for l in range(p.n_lines):
                checked += 1
                if either >> l & 1:
                    continue
                bad = p.li_apart_mask[l] & ~either
                if bad:
                    return False, (A, B, l, lowest(bad)), checked
    return True, None, checked


def apart_lines_meet_once(p: SyntheticPlane) -> Outcome:
    return meet_unique(p)


def parallel_reflexive(p: SyntheticPlane) -> Outcome:
    for k in range(p.n_lines):
        if not p.par_mask[k] >> k & 1:
            return False, (k,), k + 1
    return True, None, p.n_lines


def parallel_symmetric(p: SyntheticPlane) -> Outcome:
    return _symmetric(p.par_mask)


def parallel_transitive(p: SyntheticPlane) -> Outcome:
    checked = 0
    for k in range(p.n_lines):
        for l in bits(p.par_mask[k]):
            checked += 1
            extra = p.par_mask[l] & ~p.par_mask[k]
            if extra:
                return False, (k, l, lowest(extra)), checked
    return True, None, checked


def parallel_exists(p: SyntheticPlane) -> Outcome:
    checked = 0
    for A in range(p.n_points):
        for k in range(p.n_lines):
            checked += 1
            if not p.through[A] & p.par_mask[k]:
                return False, (A, k), checked
    return True, None, checked


def parallel_unique(p: SyntheticPlane) -> Outcome:
    """A∈k ∧ A∈l ∧ k∥l ⊢ k=l"""
    checked = 0
    for A in range(p.n_points):
        for k in bits(p.through[A]):
            checked += 1
            other = p.through[A] & p.par_mask[k] & ~(1 << k)
            if other:
                return False, (A, k, lowest(other)), checked
    return True, None, checked


def parallel_apart_outside(p: SyntheticPlane) -> Outcome:
    """k#l ∧ k∥l ⊢ A∉k ∨ A∉l"""
    checked = 0
    for k in range(p.n_lines):
        for l in bits(p.li_apart_mask[k] & p.par_mask[k]):
            checked += 1
            missing = p.all_points & ~(p.out_line[k] | p.out_line[l])
            if missing:
                return False, (lowest(missing), k, l), checked
    return True, None, checked


def intersection(p: SyntheticPlane) -> Outcome:
    """A∈l,m ∧ k∥l ∧ l#m ⊢ k#m ∧ ∃B. B∈k ∧ B∈m"""
    checked = 0
    for A in range(p.n_points):
        for l in bits(p.through[A]):
            for m in bits(p.through[A] & p.li_apart_mask[l]):
                for k in bits(p.par_mask[l]):
                    checked += 1
                    if not (p.li_apart_mask[k] >> m & 1) or not (p.on_line[k] & p.on_line[m]):
                        return False, (A, k, l, m), checked
    return True, None, checked


PROJECTIVE_AXIOMS: List[Tuple[str, Callable[[SyntheticPlane], Outcome]]] = [
    ("pt_apart_irreflexive", pt_apart_irreflexive),
    ("pt_apart_symmetric", pt_apart_symmetric),
    ("pt_apart_cotransitive", pt_apart_cotransitive),
    ("li_apart_irreflexive", li_apart_irreflexive),
    ("li_apart_symmetric", li_apart_symmetric),
    ("li_apart_cotransitive", li_apart_cotransitive),
    ("incident_outside_disjoint", incident_outside_disjoint),
    ("outside_point_cotransitive", outside_point_cotransitive),
    ("outside_line_cotransitive", outside_line_cotransitive),
    ("join_exists", join_exists),
    ("join_unique", join_unique),
    ("meet_exists", meet_exists),
    ("meet_unique", meet_unique),
    ("line_has_three_points", line_has_three_points),
    ("line_has_outside_point", line_has_outside_point),
    ("exists_noncollinear", exists_noncollinear),
    ("point_has_three_lines", point_has_three_lines),
    ("point_has_outside_line", point_has_outside_line),
    ("exists_nonconcurrent", exists_nonconcurrent),
    ("self_dual", self_dual),
]

AFFINE_AXIOMS: List[Tuple[str, Callable[[SyntheticPlane], Outcome]]] = [
    ("pt_apart_irreflexive", pt_apart_irreflexive),
    ("pt_apart_symmetric", pt_apart_symmetric),
    ("pt_apart_cotransitive", pt_apart_cotransitive),
    ("li_apart_irreflexive", li_apart_irreflexive),
    ("li_apart_symmetric", li_apart_symmetric),
    ("li_apart_cotransitive", li_apart_cotransitive),
    ("incident_outside_disjoint", incident_outside_disjoint),
    ("outside_point_cotransitive", outside_point_cotransitive),
    ("outside_line_cotransitive", outside_line_cotransitive),
    ("join_exists", join_exists),
    ("join_unique", join_unique),
    ("apart_lines_meet_once", apart_lines_meet_once),
    ("line_has_two_points", line_has_two_points),
    ("exists_noncollinear", exists_noncollinear),
    ("line_has_outside_point", line_has_outside_point),
    ("parallel_reflexive", parallel_reflexive),
    ("parallel_symmetric", parallel_symmetric),
    ("parallel_transitive", parallel_transitive),
    ("parallel_exists", parallel_exists),
    ("parallel_unique", parallel_unique),
    ("self_dual", self_dual),
    ("parallel_apart_outside", parallel_apart_outside),
    ("intersection", intersection),
]

PROJECTIVE_CONFIGURATIONS = ("desargues", "pappus")
AFFINE_CONFIGURATIONS = ("desargues_small", "desargues_big", "pappus_affine")


class AxiomFinding(BaseModel):
    name: str = Field(..., description="Axiom name")
    passed: bool
    witness: Optional[List[int]] = Field(None, description="Counterexample, or the witness of an existential axiom")
    mode: str = Field("exhaustive", description="exhaustive or sampled")
    checked: int = 0
    premises_ok: int = Field(0, description="Configurations that satisfied the premises")
    walks: int = Field(0, description="Random walks drawn by a sampled sweep")
    target: Optional[int] = Field(None, description="Configurations a sampled sweep aims to check")

    def line(self, prefix: str = "AXIOM") -> str:
        witness = "(" + ",".join(str(i) for i in self.witness) + ")" if self.witness else "()"
        line = f"{prefix} {self.name} {'PASS' if self.passed else 'FAIL'} witness={witness}"
        if self.mode == "sampled":
            line += f" sampled={self.premises_ok}/{self.target} walks={self.walks}"
        return line


class VerificationReport(BaseModel):
    theory: str
    n_points: int
    n_lines: int
    findings: List[AxiomFinding] = []

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.findings)

    def failures(self) -> List[AxiomFinding]:
        return [f for f in self.findings if not f.passed]

    def finding(self, name: str) -> AxiomFinding:
        for f in self.findings:
            if f.name == name:
                return f
        raise KeyError(name)

    def lines(self) -> List[str]:
        return [f.line() for f in self.findings]


def verify_plane(
    plane: SyntheticPlane,
    theory: Optional[str] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
    exhaustive_limit: Optional[int] = None,
    configurations: bool = True,
) -> VerificationReport:
    """Run the affine or projective suite; theory defaults to the plane's kind"""
    theory = theory or plane.kind
    if theory == "projective":
        coherent, sweeps = PROJECTIVE_AXIOMS, PROJECTIVE_CONFIGURATIONS
    elif theory == "affine":
        coherent, sweeps = AFFINE_AXIOMS, AFFINE_CONFIGURATIONS
    else:
        raise ValueError(f"Unknown theory: {theory}")
    if not configurations:
        sweeps = ()

    report = VerificationReport(theory=theory, n_points=plane.n_points, n_lines=plane.n_lines)
    for name, check in coherent:
        passed, witness, checked = check(plane)
        report.findings.append(AxiomFinding(
            name=name, passed=passed, witness=list(witness) if witness else None, checked=checked,
        ))
        if not passed:
            debug_print(f"{name} failed with witness {witness}")

    ops = SyntheticOps(plane)
    for name in sweeps:
        tally = run_configurations(plane, name, seed=seed, samples=samples,
                                   exhaustive_limit=exhaustive_limit, ops=ops)
        report.findings.append(AxiomFinding(
            name=name, passed=tally.passed, witness=list(tally.witness) if tally.witness else None,
            mode=tally.mode, checked=tally.checked, premises_ok=tally.premises_ok,
            walks=tally.walks, target=tally.target,
        ))
    return report
