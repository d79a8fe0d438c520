"""Exact scalar fields: the rationals and prime fields F_p.

Elements are plain Python values (``fractions.Fraction`` for Q, canonical
``int`` representatives ``0..p-1`` for F_p); a ``Field`` instance supplies
the arithmetic.  All operations are exact by construction.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DgkitError, FieldMismatchError


class Field:
    """Arithmetic interface shared by QQ and GF(p)."""

    char: int
    tag: str

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def parse(self, text):
        """Read an element from its scenario-file encoding."""
        raise NotImplementedError

    def render(self, a):
        """Encoding used in scenario files and reports; round-trips exactly."""
        raise NotImplementedError

    def pivot_weight(self, a) -> int:
        """Size heuristic used to pick small pivots; smaller is better."""
        return 1

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag


class RationalField(Field):
    char = 0
    tag = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

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
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def is_zero(self, a):
        return a == 0

    def parse(self, text):
        if isinstance(text, int):
            return Fraction(text)
        if isinstance(text, str):
            return Fraction(text)
        raise DgkitError(f"cannot parse rational from {text!r}")

    def render(self, a):
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def pivot_weight(self, a):
        a = Fraction(a)
        return abs(a.numerator).bit_length() + a.denominator.bit_length()


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise DgkitError(f"F_p requires a prime modulus, got {p}")
        self.p = p
        self.char = p
        self.tag = f"F{p}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

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
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n):
        return n % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def parse(self, text):
        if isinstance(text, int):
            return text % self.p
        if isinstance(text, str):
            return int(text, 10) % self.p
        raise DgkitError(f"cannot parse F_{self.p} element from {text!r}")

    def render(self, a):
        return str(a % self.p)


QQ = RationalField()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_spec(spec) -> Field:
    """Field named by a scenario document: "Q", "Fp:7", or {"Fp": 7}."""
    if isinstance(spec, Field):
        return spec
    if spec == "Q":
        return QQ
    if isinstance(spec, str) and spec.startswith("Fp:"):
        return GF(int(spec.split(":", 1)[1]))
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return GF(int(spec["Fp"]))
    raise DgkitError(f"unrecognized field spec {spec!r}")


def same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatchError(f"mixed fields {first} and {f}")
    return first
