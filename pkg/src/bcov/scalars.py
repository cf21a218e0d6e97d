"""Scalar rings used throughout: exact rationals, the square-zero extension
Q[delta]/(delta^2), and a taint-carrying wrapper for window bookkeeping.

Every quantity in this package is exact; floats never appear.
"""

from fractions import Fraction

QQ = Fraction


def rat(x) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def rat_str(x) -> str:
    """Canonical text form of a scalar ('p/q', or 'a+b*d' for duals)."""
    if isinstance(x, Dual):
        return f"{rat_str(x.a)}+{rat_str(x.b)}*d"
    if isinstance(x, Flagged):
        return rat_str(x.value)
    return str(Fraction(x))


class Dual:
    """Element a + b*delta of Q[delta]/(delta^2).

    delta is treated as a central parameter; its cohomological degree is
    bookkept by the operators that introduce it, not by scalar arithmetic.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, Dual):
            return self.a == other.a and self.b == other.b
        return self.b == 0 and self.a == other

    def __hash__(self):
        return hash((self.a, self.b))

    def __add__(self, other):
        other = _as_dual(other)
        return Dual(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_as_dual(other))

    def __rsub__(self, other):
        return _as_dual(other) + (-self)

    def __mul__(self, other):
        other = _as_dual(other)
        return Dual(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            if other.b:
                raise ZeroDivisionError("division by a dual with nilpotent part")
            other = other.a
        return Dual(self.a / other, self.b / other)

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


DELTA = Dual(0, 1)


def _as_dual(x):
    if isinstance(x, Dual):
        return x
    return Dual(x)


def dual_parts(x):
    """Split a scalar into (delta-degree-0, delta-degree-1) rationals."""
    if isinstance(x, Dual):
        return x.a, x.b
    return Fraction(x), Fraction(0)


class Flagged:
    """Exact rational plus a taint bit.

    Taint marks values whose computation crossed a product-window boundary
    (or combined such values); it propagates through + and *, and a product
    with an honest (untainted) zero is clean. Used so identity checks on
    windowed models can tell exact components from boundary artifacts.
    """

    __slots__ = ("value", "taint")

    def __init__(self, value, taint=False):
        if isinstance(value, Flagged):
            taint = taint or value.taint
            value = value.value
        self.value = Fraction(value)
        self.taint = bool(taint)

    def __bool__(self):
        return bool(self.value) or self.taint

    def __eq__(self, other):
        if isinstance(other, Flagged):
            return self.value == other.value and self.taint == other.taint
        return not self.taint and self.value == other

    def __hash__(self):
        return hash((self.value, self.taint))

    def __add__(self, other):
        v, t = _flag_parts(other)
        return Flagged(self.value + v, self.taint or t)

    __radd__ = __add__

    def __neg__(self):
        return Flagged(-self.value, self.taint)

    def __sub__(self, other):
        v, t = _flag_parts(other)
        return Flagged(self.value - v, self.taint or t)

    def __rsub__(self, other):
        v, t = _flag_parts(other)
        return Flagged(v - self.value, self.taint or t)

    def __mul__(self, other):
        v, t = _flag_parts(other)
        if (self.value == 0 and not self.taint) or (v == 0 and not t):
            return Flagged(0)
        return Flagged(self.value * v, self.taint or t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, t = _flag_parts(other)
        return Flagged(self.value / v, self.taint or t)

    def __repr__(self):
        mark = "!" if self.taint else ""
        return f"Flagged({self.value}{mark})"


def _flag_parts(x):
    if isinstance(x, Flagged):
        return x.value, x.taint
    return Fraction(x), False


def plain_value(x):
    """Underlying rational of a possibly Flagged scalar."""
    return x.value if isinstance(x, Flagged) else Fraction(x)


def is_tainted(x) -> bool:
    return isinstance(x, Flagged) and x.taint
