from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
from config import debug_print


class RingContextMismatch(ValueError):
    """Raised when values from two different rings are combined"""


class RingDescriptorError(ValueError):
    """Raised for ring descriptor strings that do not name a supported ring"""


class InfiniteRingError(ValueError):
    """Raised when an operation needs a finite carrier"""


class NotInvertibleError(ValueError):
    """Raised when an inverse is requested for a non-unit"""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class LocalityResult:
    is_local: bool
    witness: Optional[Tuple[Any, Any]] = None
    reason: str = ""


class RingContext(ABC):
    """
    A commutative unital ring with decidable invertibility.
    Elements are plain hashable Python values ("raw" values); RingValue wraps
    them together with their context for operator use.
    """

    descriptor: str = ""
    is_finite: bool = True
    is_field: bool = False

    @property
    @abstractmethod
    def zero(self) -> Any:
        pass

    @property
    @abstractmethod
    def one(self) -> Any:
        pass

    @abstractmethod
    def add(self, x: Any, y: Any) -> Any:
        pass

    @abstractmethod
    def mul(self, x: Any, y: Any) -> Any:
        pass

    @abstractmethod
    def neg(self, x: Any) -> Any:
        pass

    @abstractmethod
    def try_inverse(self, x: Any) -> Optional[Any]:
        pass

    @abstractmethod
    def from_int(self, n: int) -> Any:
        pass

    def sub(self, x: Any, y: Any) -> Any:
        return self.add(x, self.neg(y))

    def is_invertible(self, x: Any) -> bool:
        return self.try_inverse(x) is not None

    def inverse(self, x: Any) -> Any:
        y = self.try_inverse(x)
        if y is None:
            raise NotInvertibleError(f"{self.format(x)} is not invertible in {self.descriptor}")
        return y

    def elements(self) -> List[Any]:
        """All elements in the context's fixed total order"""
        raise InfiniteRingError(f"ring {self.descriptor} is infinite")

    def units(self) -> List[Any]:
        return [x for x in self.elements() if self.is_invertible(x)]

    def format(self, x: Any) -> str:
        return str(x)

    def value(self, x: Any) -> "RingValue":
        return RingValue(self, x)

    def coerce(self, x: Any) -> Any:
        """Raw element from a RingValue, a Python int or a raw element"""
        if isinstance(x, RingValue):
            return x.raw
        if isinstance(x, int) and not isinstance(x, bool):
            return self.from_int(x)
        return x

    def require_finite(self, what: str = "operation") -> None:
        if not self.is_finite:
            raise InfiniteRingError(f"{what} requires finite ring, got {self.descriptor}")

    def __eq__(self, other):
        return isinstance(other, RingContext) and type(self) is type(other) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash((type(self).__name__, self.descriptor))

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class ZModRing(RingContext):
    """Integers modulo n with canonical residues 0..n-1"""

    def __init__(self, n: int):
        if n < 2:
            raise RingDescriptorError(f"modulus must be at least 2, got {n}")
        self.n = n
        self.descriptor = f"zmod:{n}"
        self.is_finite = True
        self.is_field = _is_prime(n)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.n

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.n

    def neg(self, x: int) -> int:
        return (-x) % self.n

    def is_invertible(self, x: int) -> bool:
        return gcd(x % self.n, self.n) == 1

    def try_inverse(self, x: int) -> Optional[int]:
        if not self.is_invertible(x):
            return None
        return pow(x % self.n, -1, self.n)

    def from_int(self, n: int) -> int:
        return n % self.n

    def elements(self) -> List[int]:
        return list(range(self.n))


class RationalRing(RingContext):
    """The rationals, reduced to lowest terms by fractions.Fraction"""

    def __init__(self):
        self.descriptor = "rational"
        self.is_finite = False
        self.is_field = True

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, x, y):
        return Fraction(x) + Fraction(y)

    def sub(self, x, y):
        return Fraction(x) - Fraction(y)

    def mul(self, x, y):
        return Fraction(x) * Fraction(y)

    def neg(self, x):
        return -Fraction(x)

    def is_invertible(self, x) -> bool:
        return x != 0

    def try_inverse(self, x) -> Optional[Fraction]:
        if x == 0:
            return None
        return 1 / Fraction(x)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)


class DualNumberRing(RingContext):
    """
    Dual numbers a+bε over Z/p with ε²=0, stored as pairs (a, b).
    Order is lexicographic with a major: 0, ε, 2ε, ..., 1, 1+ε, ...
    """

    def __init__(self, p: int):
        if not _is_prime(p):
            raise RingDescriptorError(f"dual numbers need a prime modulus, got {p}")
        self.p = p
        self.descriptor = f"dual:{p}"
        self.is_finite = True
        self.is_field = False

    @property
    def zero(self) -> Tuple[int, int]:
        return (0, 0)

    @property
    def one(self) -> Tuple[int, int]:
        return (1, 0)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def sub(self, x, y):
        return ((x[0] - y[0]) % self.p, (x[1] - y[1]) % self.p)

    def mul(self, x, y):
        return ((x[0] * y[0]) % self.p, (x[0] * y[1] + x[1] * y[0]) % self.p)

    def neg(self, x):
        return ((-x[0]) % self.p, (-x[1]) % self.p)

    def is_invertible(self, x) -> bool:
        return x[0] % self.p != 0

    def try_inverse(self, x):
        if x[0] % self.p == 0:
            return None
        a_inv = pow(x[0], -1, self.p)
        return (a_inv, (-x[1] * a_inv * a_inv) % self.p)

    def from_int(self, n: int):
        return (n % self.p, 0)

    def elements(self):
        return [(a, b) for a in range(self.p) for b in range(self.p)]

    def format(self, x) -> str:
        a, b = x
        if b == 0:
            return str(a)
        eps = "e" if b == 1 else f"{b}e"
        return eps if a == 0 else f"{a}+{eps}"


class TableRing(RingContext):
    """
    A finite ring given by explicit addition and multiplication tables over
    labels 0..n-1. Used for rings reconstructed from planes.
    """

    def __init__(self, name: str, labels: Sequence[str], add_table: List[List[int]],
                 mul_table: List[List[int]], zero: int, one: int):
        self.descriptor = name
        self.is_finite = True
        self.labels = list(labels)
        self.size = len(self.labels)
        self._add = add_table
        self._mul = mul_table
        self._zero = zero
        self._one = one
        self._neg = [next(y for y in range(self.size) if add_table[x][y] == zero) for x in range(self.size)]
        self._inv = [next((y for y in range(self.size) if mul_table[x][y] == one), None) for x in range(self.size)]
        self.is_field = all(self._inv[x] is not None for x in range(self.size) if x != zero)

    @property
    def zero(self) -> int:
        return self._zero

    @property
    def one(self) -> int:
        return self._one

    def add(self, x: int, y: int) -> int:
        return self._add[x][y]

    def mul(self, x: int, y: int) -> int:
        return self._mul[x][y]

    def neg(self, x: int) -> int:
        return self._neg[x]

    def try_inverse(self, x: int) -> Optional[int]:
        return self._inv[x]

    def from_int(self, n: int) -> int:
        acc = self._zero
        step = self._one if n >= 0 else self._neg[self._one]
        for _ in range(abs(n)):
            acc = self.add(acc, step)
        return acc

    def elements(self) -> List[int]:
        return list(range(self.size))

    def format(self, x: int) -> str:
        return self.labels[x]

    def coerce(self, x: Any) -> Any:
        # ints are already labels here
        return x.raw if isinstance(x, RingValue) else x

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class RingValue:
    """An element of a fixed ring context with operator overloading"""
    ctx: RingContext
    raw: Any

    def _check(self, other) -> "RingValue":
        if isinstance(other, int) and not isinstance(other, bool):
            return RingValue(self.ctx, self.ctx.from_int(other))
        if not isinstance(other, RingValue):
            return NotImplemented
        if other.ctx != self.ctx:
            raise RingContextMismatch(f"cannot combine {self.ctx.descriptor} with {other.ctx.descriptor}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return RingValue(self.ctx, self.ctx.add(self.raw, other.raw))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return RingValue(self.ctx, self.ctx.sub(self.raw, other.raw))

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return RingValue(self.ctx, self.ctx.sub(other.raw, self.raw))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return RingValue(self.ctx, self.ctx.mul(self.raw, other.raw))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ctx, self.ctx.neg(self.raw))

    def is_invertible(self) -> bool:
        return self.ctx.is_invertible(self.raw)

    def try_inverse(self) -> Optional["RingValue"]:
        y = self.ctx.try_inverse(self.raw)
        return None if y is None else RingValue(self.ctx, y)

    def __str__(self):
        return self.ctx.format(self.raw)


def add(x: RingValue, y: RingValue) -> RingValue:
    return x + y


def sub(x: RingValue, y: RingValue) -> RingValue:
    return x - y


def mul(x: RingValue, y: RingValue) -> RingValue:
    return x * y


def neg(x: RingValue) -> RingValue:
    return -x


def is_invertible(x: RingValue) -> bool:
    return x.is_invertible()


def try_inverse(x: RingValue) -> Optional[RingValue]:
    return x.try_inverse()


def enumerate_ring(ctx: RingContext) -> List[RingValue]:
    ctx.require_finite("enumeration")
    return [RingValue(ctx, x) for x in ctx.elements()]


def check_local(ctx: RingContext) -> LocalityResult:
    """
    Decide whether ctx is a local ring: 0 is not invertible and
    inv(x+y) implies inv(x) or inv(y). The witness is the first unordered
    pair (x, y), y <= x in element order, violating the sequent.
    """
    if isinstance(ctx, RationalRing):
        return LocalityResult(True, None, "field")
    ctx.require_finite("locality check")
    if ctx.is_invertible(ctx.zero):
        return LocalityResult(False, None, "0 is invertible")
    elems = ctx.elements()
    inv = {x: ctx.is_invertible(x) for x in elems}
    for i, x in enumerate(elems):
        if inv[x]:
            continue
        for y in elems[:i + 1]:
            if not inv[y] and inv[ctx.add(x, y)]:
                debug_print(f"{ctx.descriptor}: {ctx.format(x)}+{ctx.format(y)} invertible, summands not")
                return LocalityResult(False, (x, y), "inv(x+y) without inv(x) or inv(y)")
    return LocalityResult(True)


def check_ring_axioms(ctx: RingContext) -> Optional[str]:
    """Exhaustively check the commutative ring laws, return the first failing law"""
    ctx.require_finite("ring axiom check")
    elems = ctx.elements()
    zero, one = ctx.zero, ctx.one
    if zero == one:
        return "zero equals one"
    for x in elems:
        if ctx.add(x, zero) != x:
            return f"additive identity at {ctx.format(x)}"
        if ctx.mul(x, one) != x:
            return f"multiplicative identity at {ctx.format(x)}"
        if ctx.add(x, ctx.neg(x)) != zero:
            return f"additive inverse at {ctx.format(x)}"
        y = ctx.try_inverse(x)
        if y is not None and (ctx.mul(x, y) != one or ctx.mul(y, x) != one):
            return f"inverse at {ctx.format(x)}"
        for y in elems:
            if ctx.add(x, y) != ctx.add(y, x):
                return f"additive commutativity at {ctx.format(x)},{ctx.format(y)}"
            if ctx.mul(x, y) != ctx.mul(y, x):
                return f"multiplicative commutativity at {ctx.format(x)},{ctx.format(y)}"
            for z in elems:
                if ctx.add(ctx.add(x, y), z) != ctx.add(x, ctx.add(y, z)):
                    return "additive associativity"
                if ctx.mul(ctx.mul(x, y), z) != ctx.mul(x, ctx.mul(y, z)):
                    return "multiplicative associativity"
                if ctx.mul(x, ctx.add(y, z)) != ctx.add(ctx.mul(x, y), ctx.mul(x, z)):
                    return "distributivity"
    return None


class RingHom:
    """A ring homomorphism given by a function on raw elements"""

    def __init__(self, source: RingContext, target: RingContext, fn: Callable[[Any], Any], name: str = ""):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name or f"{source.descriptor}->{target.descriptor}"

    @classmethod
    def from_table(cls, source: RingContext, target: RingContext, table: Dict[Any, Any], name: str = "") -> "RingHom":
        return cls(source, target, table.__getitem__, name)

    @classmethod
    def identity(cls, ctx: RingContext) -> "RingHom":
        return cls(ctx, ctx, lambda x: x, f"id:{ctx.descriptor}")

    def __call__(self, x: Any) -> Any:
        return self.fn(x)

    def apply(self, value: RingValue) -> RingValue:
        if value.ctx != self.source:
            raise RingContextMismatch(f"{self.name} expects {self.source.descriptor}")
        return RingValue(self.target, self.fn(value.raw))

    def compose(self, inner: "RingHom") -> "RingHom":
        """self ∘ inner"""
        if inner.target != self.source:
            raise RingContextMismatch(f"cannot compose {self.name} after {inner.name}")
        outer_fn, inner_fn = self.fn, inner.fn
        return RingHom(inner.source, self.target, lambda x: outer_fn(inner_fn(x)), f"{self.name}∘{inner.name}")

    def table(self) -> Dict[Any, Any]:
        self.source.require_finite("homomorphism table")
        return {x: self.fn(x) for x in self.source.elements()}

    def verify(self) -> Optional[str]:
        """Exhaustively check 0, 1, +, × and unit preservation"""
        src, tgt = self.source, self.target
        src.require_finite("homomorphism check")
        f = self.table()
        if f[src.zero] != tgt.zero:
            return "zero not preserved"
        if f[src.one] != tgt.one:
            return "one not preserved"
        elems = src.elements()
        for x in elems:
            if src.is_invertible(x) and not tgt.is_invertible(f[x]):
                return f"invertibility not preserved at {src.format(x)}"
            for y in elems:
                if f[src.add(x, y)] != tgt.add(f[x], f[y]):
                    return f"addition not preserved at {src.format(x)},{src.format(y)}"
                if f[src.mul(x, y)] != tgt.mul(f[x], f[y]):
                    return f"multiplication not preserved at {src.format(x)},{src.format(y)}"
        return None

    def equals(self, other: "RingHom") -> bool:
        return self.source == other.source and self.target == other.target and self.table() == other.table()

    def __repr__(self):
        return f"<RingHom {self.name}>"


def ring_homs(source: RingContext, target: RingContext) -> List[RingHom]:
    """
    All ring homomorphisms between finite rings, built from generator images
    (1 for Z/n, 1 and ε for dual numbers) and kept when they verify.
    """
    source.require_finite("homomorphism enumeration")
    target.require_finite("homomorphism enumeration")
    candidates: List[RingHom] = []
    if isinstance(source, ZModRing):
        candidates.append(RingHom(source, target, target.from_int, f"{source.descriptor}->{target.descriptor}"))
    elif isinstance(source, DualNumberRing):
        nilpotents = [e for e in target.elements() if target.mul(e, e) == target.zero]
        for e in nilpotents:
            def fn(x, e=e):
                return target.add(target.from_int(x[0]), target.mul(target.from_int(x[1]), e))
            candidates.append(RingHom(source, target, fn, f"{source.descriptor}->{target.descriptor}[e->{target.format(e)}]"))
    else:
        iso = find_ring_isomorphism(source, target)
        return [iso] if iso is not None else []
    return [h for h in candidates if h.verify() is None]


def find_ring_isomorphism(source: RingContext, target: RingContext) -> Optional[RingHom]:
    """Search for a ring isomorphism between two small finite rings"""
    source.require_finite("isomorphism search")
    target.require_finite("isomorphism search")
    src_elems, tgt_elems = source.elements(), target.elements()
    if len(src_elems) != len(tgt_elems):
        return None
    if len(src_elems) > 10:
        raise InfiniteRingError(f"isomorphism search limited to 10 elements, got {len(src_elems)}")
    rest_src = [x for x in src_elems if x not in (source.zero, source.one)]
    rest_tgt = [y for y in tgt_elems if y not in (target.zero, target.one)]
    for image in permutations(rest_tgt):
        table = {source.zero: target.zero, source.one: target.one}
        table.update(zip(rest_src, image))
        hom = RingHom.from_table(source, target, table, f"{source.descriptor}~{target.descriptor}")
        if hom.verify() is None:
            debug_print(f"isomorphism {source.descriptor} -> {target.descriptor} found")
            return hom
    return None


_RING_KINDS: Dict[str, Callable[..., RingContext]] = {
    "zmod": ZModRing,
    "dual": DualNumberRing,
}


@lru_cache(maxsize=None)
def parse_ring(descriptor: str) -> RingContext:
    """Parse 'zmod:4', 'rational' or 'dual:2' into a ring context"""
    text = descriptor.strip()
    if text == "rational":
        return RationalRing()
    kind, sep, arg = text.partition(":")
    if not sep or kind not in _RING_KINDS or not arg.isdigit():
        raise RingDescriptorError(f"unknown ring descriptor '{descriptor}'")
    return _RING_KINDS[kind](int(arg))
