from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple
from config import debug_print


Pair = Tuple[int, int]

PLANE_KINDS = ("affine", "projective")
RELATIONS = ("apart_pt", "apart_li", "incident", "outside", "parallel")


class PlaneFormatError(ValueError):
    """Raised for malformed plane files; carries the 1-based line number"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        super().__init__(f"{message} at line {line_no}" if line_no is not None else message)


class ConstructionError(ValueError):
    """Raised when a geometric construction has no witness in the plane"""


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, ascending"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest(mask: int) -> Optional[int]:
    if not mask:
        return None
    return (mask & -mask).bit_length() - 1


def _symmetric(pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    out = set()
    for i, j in pairs:
        out.add((i, j))
        out.add((j, i))
    return frozenset(out)


class SyntheticPlane:
    """
    A finite plane given by explicit relation tables. Points are 0..n_points-1,
    lines 0..n_lines-1. Apartness and parallelism are stored symmetrically closed.
    Relations are also kept as bitmasks for the verifiers and constructions.
    """

    def __init__(
        self,
        kind: str,
        n_points: int,
        n_lines: int,
        apart_pt: Iterable[Pair] = (),
        apart_li: Iterable[Pair] = (),
        incident: Iterable[Pair] = (),
        outside: Iterable[Pair] = (),
        parallel: Iterable[Pair] = (),
        point_labels: Optional[Sequence[str]] = None,
        line_labels: Optional[Sequence[str]] = None,
    ):
        if kind not in PLANE_KINDS:
            raise PlaneFormatError(f"unknown plane kind '{kind}'")
        self.kind = kind
        self.n_points = n_points
        self.n_lines = n_lines
        self.apart_pt = _symmetric(apart_pt)
        self.apart_li = _symmetric(apart_li)
        self.incident = frozenset(incident)
        self.outside = frozenset(outside)
        self.parallel = _symmetric(parallel)
        if kind == "projective" and self.parallel:
            raise PlaneFormatError("parallel relation in projective plane")
        self.point_labels = list(point_labels) if point_labels else [str(i) for i in range(n_points)]
        self.line_labels = list(line_labels) if line_labels else [str(i) for i in range(n_lines)]
        self._build_masks()
        self._join_cache: Dict[Pair, int] = {}

    @classmethod
    def from_predicates(
        cls,
        kind: str,
        points: Sequence,
        lines: Sequence,
        pt_apart: Callable,
        li_apart: Callable,
        incident: Callable,
        outside: Callable,
        parallel: Optional[Callable] = None,
        point_labels: Optional[Sequence[str]] = None,
        line_labels: Optional[Sequence[str]] = None,
    ) -> "SyntheticPlane":
        """Tabulate the relations of a plane given by element lists and predicates"""
        n, m = len(points), len(lines)
        apt = [(i, j) for i in range(n) for j in range(i + 1, n) if pt_apart(points[i], points[j])]
        ali = [(k, l) for k in range(m) for l in range(k + 1, m) if li_apart(lines[k], lines[l])]
        inc, out = [], []
        for p in range(n):
            for k in range(m):
                if incident(points[p], lines[k]):
                    inc.append((p, k))
                elif outside(points[p], lines[k]):
                    out.append((p, k))
        par = []
        if parallel is not None:
            par = [(k, l) for k in range(m) for l in range(k, m) if parallel(lines[k], lines[l])]
        debug_print(f"tabulated {kind} plane: {n} points, {m} lines")
        return cls(kind, n, m, apt, ali, inc, out, par, point_labels, line_labels)

    def _build_masks(self) -> None:
        n, m = self.n_points, self.n_lines
        self.pt_apart_mask = [0] * n
        self.li_apart_mask = [0] * m
        self.on_line = [0] * m
        self.through = [0] * n
        self.out_line = [0] * m
        self.out_point = [0] * n
        self.par_mask = [0] * m
        for i, j in self.apart_pt:
            self.pt_apart_mask[i] |= 1 << j
        for k, l in self.apart_li:
            self.li_apart_mask[k] |= 1 << l
        for p, k in self.incident:
            self.on_line[k] |= 1 << p
            self.through[p] |= 1 << k
        for p, k in self.outside:
            self.out_line[k] |= 1 << p
            self.out_point[p] |= 1 << k
        for k, l in self.parallel:
            self.par_mask[k] |= 1 << l
        self.all_points = (1 << n) - 1
        self.all_lines = (1 << m) - 1

    # predicates

    def pt_apart(self, a: int, b: int) -> bool:
        return bool(self.pt_apart_mask[a] >> b & 1)

    def li_apart(self, k: int, l: int) -> bool:
        return bool(self.li_apart_mask[k] >> l & 1)

    def is_incident(self, p: int, k: int) -> bool:
        return bool(self.on_line[k] >> p & 1)

    def is_outside(self, p: int, k: int) -> bool:
        return bool(self.out_line[k] >> p & 1)

    def is_parallel(self, k: int, l: int) -> bool:
        return bool(self.par_mask[k] >> l & 1)

    def points_on(self, k: int) -> List[int]:
        return list(bits(self.on_line[k]))

    def lines_through(self, p: int) -> List[int]:
        return list(bits(self.through[p]))

    def non_collinear(self, a: int, b: int, c: int) -> bool:
        """B#C and A outside BC"""
        if not self.pt_apart(b, c):
            return False
        return self.is_outside(a, self.join(b, c))

    # constructions (first witness in index order)

    def join(self, a: int, b: int) -> int:
        key = (a, b)
        hit = self._join_cache.get(key)
        if hit is not None:
            return hit
        if not self.pt_apart(a, b):
            raise ConstructionError(f"points {a} and {b} are not apart")
        k = lowest(self.through[a] & self.through[b])
        if k is None:
            raise ConstructionError(f"no line through points {a} and {b}")
        self._join_cache[key] = k
        return k

    def meet(self, k: int, l: int) -> Optional[int]:
        return lowest(self.on_line[k] & self.on_line[l])

    def meet_strict(self, k: int, l: int) -> int:
        p = self.meet(k, l)
        if p is None:
            raise ConstructionError(f"lines {k} and {l} have no common point")
        return p

    def parallel_through(self, p: int, k: int) -> int:
        l = lowest(self.through[p] & self.par_mask[k])
        if l is None:
            raise ConstructionError(f"no parallel to line {k} through point {p}")
        return l

    def first_outside(self, k: int, avoid: int = 0) -> int:
        """First point outside line k, skipping points in the avoid mask"""
        p = lowest(self.out_line[k] & ~avoid)
        if p is None:
            raise ConstructionError(f"no point outside line {k}")
        return p

    def first_apart(self, *points: int) -> int:
        mask = self.all_points
        for a in points:
            mask &= self.pt_apart_mask[a]
        p = lowest(mask)
        if p is None:
            raise ConstructionError(f"no point apart from {points}")
        return p

    def relation_counts(self) -> Dict[str, int]:
        return {
            "apart_pt": len(self.apart_pt) // 2,
            "apart_li": len(self.apart_li) // 2,
            "incident": len(self.incident),
            "outside": len(self.outside),
            "parallel": len([1 for k, l in self.parallel if k <= l]),
        }

    def __eq__(self, other):
        if not isinstance(other, SyntheticPlane):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.n_points == other.n_points
            and self.n_lines == other.n_lines
            and self.apart_pt == other.apart_pt
            and self.apart_li == other.apart_li
            and self.incident == other.incident
            and self.outside == other.outside
            and self.parallel == other.parallel
        )

    def __hash__(self):
        return hash((self.kind, self.n_points, self.n_lines, len(self.incident)))

    def __repr__(self):
        return f"<SyntheticPlane {self.kind} points={self.n_points} lines={self.n_lines}>"


def serialize_plane(plane: SyntheticPlane, with_labels: bool = False) -> str:
    """Canonical text: header, then relations in fixed order, symmetric pairs once"""
    out = [f"plane {plane.kind}", f"points {plane.n_points}", f"lines {plane.n_lines}"]
    if with_labels:
        out += [f"# point {i} {label}" for i, label in enumerate(plane.point_labels)]
        out += [f"# line {k} {label}" for k, label in enumerate(plane.line_labels)]
    out += [f"apart_pt {i} {j}" for i, j in sorted(plane.apart_pt) if i < j]
    out += [f"apart_li {k} {l}" for k, l in sorted(plane.apart_li) if k < l]
    out += [f"incident {p} {k}" for p, k in sorted(plane.incident)]
    out += [f"outside {p} {k}" for p, k in sorted(plane.outside)]
    out += [f"parallel {k} {l}" for k, l in sorted(plane.parallel) if k <= l]
    return "\n".join(out) + "\n"


def _header_value(tokens: List[str], keyword: str, line_no: int) -> str:
    if len(tokens) != 2 or tokens[0] != keyword:
        raise PlaneFormatError(f"expected '{keyword} <value>'", line_no)
    return tokens[1]


def _header_count(tokens: List[str], keyword: str, line_no: int) -> int:
    value = _header_value(tokens, keyword, line_no)
    if not value.isdigit():
        raise PlaneFormatError(f"'{keyword}' needs a non-negative integer", line_no)
    return int(value)


def parse_plane(text: str) -> SyntheticPlane:
    """Parse the line-based plane format; errors carry the offending line number"""
    header: List[Tuple[List[str], int]] = []
    body: List[Tuple[List[str], int]] = []
    labels: Dict[str, Dict[int, str]] = {"point": {}, "line": {}}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split(None, 2)
            if len(parts) == 3 and parts[0] in labels and parts[1].isdigit():
                labels[parts[0]][int(parts[1])] = parts[2]
            continue
        tokens = stripped.split()
        (header if len(header) < 3 else body).append((tokens, line_no))
    if len(header) < 3:
        raise PlaneFormatError("incomplete header, expected plane/points/lines", header[-1][1] if header else 1)

    kind = _header_value(header[0][0], "plane", header[0][1])
    if kind not in PLANE_KINDS:
        raise PlaneFormatError(f"unknown plane kind '{kind}'", header[0][1])
    n_points = _header_count(header[1][0], "points", header[1][1])
    n_lines = _header_count(header[2][0], "lines", header[2][1])

    rel: Dict[str, List[Pair]] = {name: [] for name in RELATIONS}
    seen_incident: Dict[Pair, int] = {}
    seen_outside: Dict[Pair, int] = {}
    for tokens, line_no in body:
        name = tokens[0]
        if name not in RELATIONS:
            raise PlaneFormatError(f"unknown relation '{name}'", line_no)
        if len(tokens) != 3:
            raise PlaneFormatError(f"'{name}' expects two indices", line_no)
        if not (tokens[1].isdigit() and tokens[2].isdigit()):
            raise PlaneFormatError(f"'{name}' indices must be non-negative integers", line_no)
        i, j = int(tokens[1]), int(tokens[2])
        if name == "parallel" and kind == "projective":
            raise PlaneFormatError("parallel relation in projective plane", line_no)
        first_is_point = name in ("apart_pt", "incident", "outside")
        second_is_point = name == "apart_pt"
        if i >= (n_points if first_is_point else n_lines):
            raise PlaneFormatError(f"{'point' if first_is_point else 'line'} index out of range", line_no)
        if j >= (n_points if second_is_point else n_lines):
            raise PlaneFormatError(f"{'point' if second_is_point else 'line'} index out of range", line_no)
        if name in ("apart_pt", "apart_li") and i == j:
            raise PlaneFormatError("apartness must be irreflexive", line_no)
        if name == "incident":
            if (i, j) in seen_outside:
                raise PlaneFormatError(f"point {i} both on and outside line {j}", line_no)
            seen_incident[(i, j)] = line_no
        if name == "outside":
            if (i, j) in seen_incident:
                raise PlaneFormatError(f"point {i} both on and outside line {j}", line_no)
            seen_outside[(i, j)] = line_no
        rel[name].append((i, j))

    point_labels = [labels["point"].get(i, str(i)) for i in range(n_points)]
    line_labels = [labels["line"].get(k, str(k)) for k in range(n_lines)]
    return SyntheticPlane(kind, n_points, n_lines, rel["apart_pt"], rel["apart_li"], rel["incident"],
                          rel["outside"], rel["parallel"], point_labels, line_labels)


def export_plane(ring_plane) -> SyntheticPlane:
    """Relational presentation of a projective or affine plane over a finite ring"""
    ring_plane.ctx.require_finite("plane export")
    return ring_plane.export()


def verify_synthetic(plane: SyntheticPlane, theory: Optional[str] = None, **budget):
    """Check every axiom of the plane's theory; failures carry witness tuples"""
    # Import here to avoid circular dependency
    from geometry.axioms import verify_plane
    return verify_plane(plane, theory or plane.kind, **budget)
