"""Certified closed float intervals with outward rounding.

Every archimedean quantity in the library is carried as an Interval so that
numeric claims come with an enclosure.  Only the operations the height
machinery needs are provided: add/sub/mul, scalar mixing with exact
rationals, log/exp, max, and containment queries.
"""

from __future__ import annotations

import math
from fractions import Fraction

_INF = math.inf


def _up(x: float) -> float:
    if x == _INF or x != x:
        return x
    return math.nextafter(x, _INF)


def _down(x: float) -> float:
    if x == -_INF or x != x:
        return x
    return math.nextafter(x, -_INF)


class Interval:
    """Closed interval [lo, hi] of floats, guaranteed to contain the true value."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        lo = float(lo)
        hi = float(hi)
        if not lo <= hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Interval":
        return cls(0.0, 0.0)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Interval":
        """Tightest float enclosure of an exact rational."""
        q = Fraction(q)
        try:
            f = float(q)  # correctly rounded
        except OverflowError:
            return cls(-_INF, _INF) if q < 0 else cls(_INF, _INF) if q > 0 else cls(0.0, 0.0)
        back = Fraction(f) if math.isfinite(f) else None
        if back == q:
            return cls(f, f)
        if back is None or back < q:
            return cls(f, _up(f))
        return cls(_down(f), f)

    @classmethod
    def log_of_int(cls, n: int) -> "Interval":
        """Enclosure of ln(n) for n >= 1, padded two ulps each side."""
        if n < 1:
            raise ValueError("log_of_int needs n >= 1")
        if n == 1:
            return cls(0.0, 0.0)
        v = math.log(n)
        return cls(_down(_down(v)), _up(_up(v)))

    @classmethod
    def log_of_fraction(cls, q: Fraction) -> "Interval":
        """Enclosure of ln(q) for a positive rational q."""
        if q <= 0:
            raise ValueError("log of nonpositive rational")
        a, b = q.numerator, q.denominator
        la = math.log(a) if a > 1 else 0.0
        lb = math.log(b) if b > 1 else 0.0
        lo = _down(_down(_down(la) - _up(lb)))
        hi = _up(_up(_up(la) - _down(lb)))
        return cls(lo, hi)

    # -- queries -----------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return self.lo if self.lo == self.hi else 0.0
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi) if math.isfinite(self.lo) and math.isfinite(self.hi) else (self.lo <= float(x) <= self.hi)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.from_fraction(Fraction(other))
        if isinstance(other, float):
            return Interval.point(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.lo == 0.0 == o.hi:  # adding exact zero is exact
            return self
        if self.lo == 0.0 == self.hi:
            return o
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.lo == 0.0 == o.hi:
            return self
        if self.lo == 0.0 == self.hi:
            return -o
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.lo == 0.0 == o.hi or self.lo == 0.0 == self.hi:
            return Interval.zero()
        if o.lo == 1.0 == o.hi:
            return self
        if self.lo == 1.0 == self.hi:
            return o
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        cands = tuple(0.0 if c != c else c for c in cands)  # 0*inf -> 0 (both factors finite or signed)
        return Interval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval division by interval containing 0")
        cands = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(cands)), _up(max(cands)))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo, self.hi)
        if self.hi <= 0:
            return Interval(-self.hi, -self.lo)
        return Interval(0.0, max(-self.lo, self.hi))

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise ValueError("log of interval touching 0")
        return Interval(_down(_down(math.log(self.lo))), _up(_up(math.log(self.hi))))

    def exp(self) -> "Interval":
        return Interval(_down(_down(math.exp(self.lo))), _up(_up(math.exp(self.hi))))

    def max_with(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), max(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def widened(self, eps: float) -> "Interval":
        return Interval(_down(self.lo - eps), _up(self.hi + eps))


def horner(coeffs, x: Interval) -> Interval:
    """Evaluate sum(coeffs[i] * x^i) with interval arithmetic.

    Coefficients may be exact rationals; they are enclosed once.
    """
    acc = Interval.zero()
    for c in reversed(list(coeffs)):
        ci = c if isinstance(c, Interval) else Interval.from_fraction(Fraction(c))
        acc = acc * x + ci
    return acc


def taylor_enclosures(coeffs, m: float) -> list[Interval]:
    """Interval enclosures of the Taylor coefficients of the polynomial at m."""
    cs = [c if isinstance(c, Interval) else Interval.from_fraction(Fraction(c))
          for c in coeffs]
    mi = Interval.point(m)
    n = len(cs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + mi * cs[j + 1]
    return cs


def horner_centered(coeffs, x: Interval) -> Interval:
    """Evaluate on x via the Taylor form at its midpoint (kills the dependency blowup)."""
    m = x.mid
    if not math.isfinite(m) or x.width == 0.0:
        return horner(coeffs, x)
    return horner(taylor_enclosures(coeffs, m), x - m)


class CBox:
    """Complex rectangle re x im of certified intervals."""

    __slots__ = ("re", "im")

    def __init__(self, re: Interval, im: Interval):
        self.re = re
        self.im = im

    @classmethod
    def point(cls, z: complex) -> "CBox":
        return cls(Interval.point(z.real), Interval.point(z.imag))

    def __add__(self, other: "CBox") -> "CBox":
        return CBox(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "CBox") -> "CBox":
        return CBox(self.re * other.re - self.im * other.im,
                    self.re * other.im + self.im * other.re)

    def contains_box(self, other: "CBox") -> bool:
        return (self.re.lo <= other.re.lo and other.re.hi <= self.re.hi
                and self.im.lo <= other.im.lo and other.im.hi <= self.im.hi)

    def modulus(self) -> Interval:
        """Interval containing |z| for all z in the box."""
        re_a, im_a = self.re.abs(), self.im.abs()
        hi = _up(math.hypot(re_a.hi, im_a.hi))
        hi = _up(hi)
        lo = math.hypot(re_a.lo, im_a.lo)
        lo = _down(_down(lo))
        return Interval(max(lo, 0.0), hi)

    @property
    def mid(self) -> complex:
        return complex(self.re.mid, self.im.mid)

    def __repr__(self) -> str:
        return f"CBox({self.re!r}, {self.im!r})"


def chorner(coeffs, z: CBox) -> CBox:
    acc = CBox(Interval.zero(), Interval.zero())
    for c in reversed(list(coeffs)):
        if isinstance(c, CBox):
            ci = c
        elif isinstance(c, complex):
            ci = CBox.point(c)
        else:
            ci = CBox(Interval.from_fraction(Fraction(c)), Interval.zero())
        acc = acc * z + ci
    return acc


def ctaylor_enclosures(coeffs, m: complex) -> list[CBox]:
    """CBox enclosures of the Taylor coefficients at a complex point m."""
    cs = []
    for c in coeffs:
        if isinstance(c, CBox):
            cs.append(c)
        elif isinstance(c, complex):
            cs.append(CBox.point(c))
        else:
            cs.append(CBox(Interval.from_fraction(Fraction(c)), Interval.zero()))
    mi = CBox.point(m)
    n = len(cs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            cs[j] = cs[j] + mi * cs[j + 1]
    return cs


def chorner_centered(coeffs, z: CBox) -> CBox:
    m = z.mid
    if not (math.isfinite(m.real) and math.isfinite(m.imag)):
        return chorner(coeffs, z)
    if z.re.width == 0.0 and z.im.width == 0.0:
        return chorner(coeffs, z)
    shifted = ctaylor_enclosures(coeffs, m)
    u = CBox(z.re - m.real, z.im - m.imag)
    return chorner(shifted, u)
