from dataclasses import dataclass
from itertools import product
from typing import Any, List, Sequence, Tuple
from algebra.ring import RingContext, NotInvertibleError, RingContextMismatch
from config import debug_print


Row = Tuple[Any, ...]


def dot(ctx: RingContext, u: Sequence[Any], v: Sequence[Any]) -> Any:
    acc = ctx.zero
    for a, b in zip(u, v):
        acc = ctx.add(acc, ctx.mul(a, b))
    return acc


def cross(ctx: RingContext, a: Sequence[Any], b: Sequence[Any]) -> Tuple[Any, Any, Any]:
    """(a₁b₂−a₂b₁, a₂b₀−a₀b₂, a₀b₁−a₁b₀)"""
    m, s = ctx.mul, ctx.sub
    return (
        s(m(a[1], b[2]), m(a[2], b[1])),
        s(m(a[2], b[0]), m(a[0], b[2])),
        s(m(a[0], b[1]), m(a[1], b[0])),
    )


def scale(ctx: RingContext, u: Any, v: Sequence[Any]) -> Tuple[Any, ...]:
    return tuple(ctx.mul(u, x) for x in v)


@dataclass(frozen=True)
class Mat2:
    ctx: RingContext
    rows: Tuple[Row, Row]

    @classmethod
    def from_ints(cls, ctx: RingContext, rows: Sequence[Sequence[int]]) -> "Mat2":
        return cls(ctx, tuple(tuple(ctx.from_int(x) for x in r) for r in rows))


@dataclass(frozen=True)
class Mat3:
    """3×3 matrix over a ring, row-major raw entries"""
    ctx: RingContext
    rows: Tuple[Row, Row, Row]

    @classmethod
    def from_ints(cls, ctx: RingContext, rows: Sequence[Sequence[int]]) -> "Mat3":
        return cls(ctx, tuple(tuple(ctx.from_int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, ctx: RingContext) -> "Mat3":
        z, o = ctx.zero, ctx.one
        return cls(ctx, ((o, z, z), (z, o, z), (z, z, o)))

    @classmethod
    def from_columns(cls, ctx: RingContext, cols: Sequence[Sequence[Any]]) -> "Mat3":
        return cls(ctx, tuple(tuple(cols[j][i] for j in range(3)) for i in range(3)))

    def entries(self) -> Tuple[Any, ...]:
        return tuple(x for r in self.rows for x in r)

    def column(self, j: int) -> Tuple[Any, Any, Any]:
        return tuple(self.rows[i][j] for i in range(3))

    def transpose(self) -> "Mat3":
        return Mat3(self.ctx, tuple(self.column(j) for j in range(3)))

    def mul(self, other: "Mat3") -> "Mat3":
        if other.ctx != self.ctx:
            raise RingContextMismatch("matrix product over different rings")
        cols = [other.column(j) for j in range(3)]
        return Mat3(self.ctx, tuple(tuple(dot(self.ctx, r, c) for c in cols) for r in self.rows))

    def apply(self, vec: Sequence[Any]) -> Tuple[Any, ...]:
        return tuple(dot(self.ctx, r, vec) for r in self.rows)

    def scaled(self, u: Any) -> "Mat3":
        return Mat3(self.ctx, tuple(scale(self.ctx, u, r) for r in self.rows))

    def format(self) -> str:
        f = self.ctx.format
        return "[" + ", ".join("[" + ",".join(f(x) for x in r) + "]" for r in self.rows) + "]"


def det2(m: Mat2) -> Any:
    ctx = m.ctx
    (a, b), (c, d) = m.rows
    return ctx.sub(ctx.mul(a, d), ctx.mul(b, c))


def det3(m: Mat3) -> Any:
    """Leibniz expansion"""
    ctx = m.ctx
    (a, b, c), (d, e, f), (g, h, i) = m.rows
    mul, add, sub = ctx.mul, ctx.add, ctx.sub
    pos = add(add(mul(mul(a, e), i), mul(mul(b, f), g)), mul(mul(c, d), h))
    negs = add(add(mul(mul(c, e), g), mul(mul(b, d), i)), mul(mul(a, f), h))
    return sub(pos, negs)


def adjugate3(m: Mat3) -> Mat3:
    ctx = m.ctx
    r = m.rows
    cof = []
    for i in range(3):
        row = []
        for j in range(3):
            rs = [k for k in range(3) if k != i]
            cs = [k for k in range(3) if k != j]
            minor = ctx.sub(ctx.mul(r[rs[0]][cs[0]], r[rs[1]][cs[1]]),
                            ctx.mul(r[rs[0]][cs[1]], r[rs[1]][cs[0]]))
            row.append(minor if (i + j) % 2 == 0 else ctx.neg(minor))
        cof.append(tuple(row))
    # adjugate is the transposed cofactor matrix
    return Mat3(ctx, tuple(cof)).transpose()


def inverse3(m: Mat3) -> Mat3:
    d_inv = m.ctx.try_inverse(det3(m))
    if d_inv is None:
        raise NotInvertibleError(f"determinant of {m.format()} is not invertible")
    return adjugate3(m).scaled(d_inv)


@dataclass(frozen=True)
class AffMatrix:
    """An element of G(R): invertible, bottom row exactly (0,0,1)"""
    matrix: Mat3

    def __post_init__(self):
        ctx = self.matrix.ctx
        if self.matrix.rows[2] != (ctx.zero, ctx.zero, ctx.one):
            raise ValueError(f"bottom row of {self.matrix.format()} is not (0,0,1)")
        if not ctx.is_invertible(det3(self.matrix)):
            raise NotInvertibleError(f"{self.matrix.format()} is not invertible")

    @classmethod
    def from_ints(cls, ctx: RingContext, rows: Sequence[Sequence[int]]) -> "AffMatrix":
        return cls(Mat3.from_ints(ctx, rows))

    @property
    def ctx(self) -> RingContext:
        return self.matrix.ctx

    def apply_point(self, point: Sequence[Any]) -> Tuple[Any, Any]:
        x = self.matrix.apply((point[0], point[1], self.ctx.one))
        return (x[0], x[1])


@dataclass(frozen=True)
class ProjClassMatrix:
    """An element of H(R), stored by its canonical representative"""
    matrix: Mat3

    @property
    def ctx(self) -> RingContext:
        return self.matrix.ctx


def h_canonicalize(m: Mat3) -> ProjClassMatrix:
    """Scale so the first invertible entry in row-major order is 1"""
    ctx = m.ctx
    if not ctx.is_invertible(det3(m)):
        raise NotInvertibleError(f"{m.format()} is not invertible")
    for x in m.entries():
        u = ctx.try_inverse(x)
        if u is not None:
            return ProjClassMatrix(m.scaled(u))
    raise NotInvertibleError(f"{m.format()} has no invertible entry")


def h_mul(g: ProjClassMatrix, h: ProjClassMatrix) -> ProjClassMatrix:
    return h_canonicalize(g.matrix.mul(h.matrix))


def h_inverse(h: ProjClassMatrix) -> ProjClassMatrix:
    return h_canonicalize(inverse3(h.matrix))


def h_identity(ctx: RingContext) -> ProjClassMatrix:
    return ProjClassMatrix(Mat3.identity(ctx))


def g_mul(g: AffMatrix, h: AffMatrix) -> AffMatrix:
    return AffMatrix(g.matrix.mul(h.matrix))


def g_inverse(g: AffMatrix) -> AffMatrix:
    return AffMatrix(inverse3(g.matrix))


def g_identity(ctx: RingContext) -> AffMatrix:
    return AffMatrix(Mat3.identity(ctx))


def enumerate_G(ctx: RingContext) -> List[AffMatrix]:
    ctx.require_finite("enumeration of G(R)")
    elems = ctx.elements()
    z, o = ctx.zero, ctx.one
    out = []
    for a0, b0, a1, b1 in product(elems, repeat=4):
        if not ctx.is_invertible(ctx.sub(ctx.mul(a0, b1), ctx.mul(b0, a1))):
            continue
        for c0, c1 in product(elems, repeat=2):
            out.append(AffMatrix(Mat3(ctx, ((a0, b0, c0), (a1, b1, c1), (z, z, o)))))
    debug_print(f"|G({ctx.descriptor})| = {len(out)}")
    return out


def enumerate_H(ctx: RingContext) -> List[ProjClassMatrix]:
    """Canonical representatives only: the first invertible entry must already be 1"""
    ctx.require_finite("enumeration of H(R)")
    elems = ctx.elements()
    one = ctx.one
    inv = {x: ctx.is_invertible(x) for x in elems}
    out = []
    for entries in product(elems, repeat=9):
        lead = next((x for x in entries if inv[x]), None)
        if lead != one:
            continue
        m = Mat3(ctx, (entries[0:3], entries[3:6], entries[6:9]))
        if inv[det3(m)]:
            out.append(ProjClassMatrix(m))
    debug_print(f"|H({ctx.descriptor})| = {len(out)}")
    return out
