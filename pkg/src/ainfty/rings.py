"""Exact coefficient arithmetic over the supported ground rings.

Three rings are supported: the prime fields F_p, the rationals Q and the
integers Z.  Elements are kept in canonical form (residues in [0, p),
reduced fractions, plain ints), so equality is structural.

Hot paths work on raw values through the ring object's methods; the
``RingElem`` wrapper provides operator syntax at API boundaries.
"""

from fractions import Fraction

from .errors import NotInvertible, RingMismatch, SchemaError, UnsupportedRing


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class CoeffRing:
    """Base class; subclasses implement arithmetic on raw canonical values."""

    is_field = False
    name = "?"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_zero(self, a):
        return a == self.zero()

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def coerce(self, x):
        """Canonicalize an int / Fraction / raw value into this ring."""
        raise NotImplementedError

    def parse(self, s):
        """Parse the serialized form: "3", "-2", "3/4"."""
        s = str(s).strip()
        try:
            if "/" in s:
                return self.coerce(Fraction(s))
            return self.coerce(int(s))
        except (ValueError, ZeroDivisionError, UnsupportedRing) as exc:
            raise SchemaError(f"bad coefficient {s!r} for {self}: {exc}")

    def show(self, a):
        return str(a)

    def elem(self, x):
        return RingElem(self, self.coerce(x))

    def to_json(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(str(self.to_json()))

    def __repr__(self):
        return self.name


class PrimeField(CoeffRing):
    is_field = True

    def __init__(self, p):
        if not _is_prime(p):
            raise SchemaError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise NotInvertible(f"0 has no inverse in {self}")
        return pow(a, self.p - 2, self.p)

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise UnsupportedRing(f"denominator {x.denominator} not a unit in {self}")
            return (x.numerator * self.inv(x.denominator % self.p)) % self.p
        return int(x) % self.p

    def to_json(self):
        return {"ring": "Fp", "p": self.p}


class Rationals(CoeffRing):
    is_field = True
    name = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise NotInvertible("0 has no inverse in Q")
        return 1 / Fraction(a)

    def coerce(self, x):
        return Fraction(x)

    def show(self, a):
        return str(a)

    def to_json(self):
        return {"ring": "Q"}


class Integers(CoeffRing):
    is_field = False
    name = "Z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotInvertible(f"{a} has no inverse in Z")

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise UnsupportedRing(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def to_json(self):
        return {"ring": "Z"}


QQ = Rationals()
ZZ = Integers()


def GF(p):
    return PrimeField(p)


def ring_from_json(spec):
    try:
        kind = spec["ring"]
    except (TypeError, KeyError):
        raise SchemaError(f"bad ring spec {spec!r}")
    if kind == "Fp":
        return PrimeField(int(spec["p"]))
    if kind == "Q":
        return QQ
    if kind == "Z":
        return ZZ
    raise SchemaError(f"unknown ring kind {kind!r}")


class RingElem:
    """Canonical ring element with structural equality and operator syntax."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _check(self, other):
        if not isinstance(other, RingElem):
            other = self.ring.elem(other)
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return RingElem(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return RingElem(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return RingElem(self.ring, self.ring.mul(self.value, other.value))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.value))

    def inv(self):
        return RingElem(self.ring, self.ring.inv(self.value))

    def is_zero(self):
        return self.ring.is_zero(self.value)

    def __eq__(self, other):
        return (
            isinstance(other, RingElem)
            and self.ring == other.ring
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.ring, self.value))

    def __repr__(self):
        return self.ring.show(self.value)


def ring_arith(a, b, op):
    """Binary/unary arithmetic dispatch: op in {add, mul, neg, inv}."""
    if op in ("neg", "inv"):
        return getattr(a, "inv")() if op == "inv" else -a
    other = a._check(b)
    if op == "add":
        return a + other
    if op == "mul":
        return a * other
    raise SchemaError(f"unknown op {op!r}")
