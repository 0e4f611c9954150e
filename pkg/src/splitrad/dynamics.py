"""Polynomials as dynamical systems over Q or Q(t).

Parsing/printing, exact iteration, affine conjugation and centering,
critical points, superattracting cycle search, and the exhaustive search
for Q-rational preperiodic points with a rigorous finite search box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import DomainError, divisors, factorize, is_prime, valuation
from .places import FIELD_Q, FIELD_QT
from .qpoly import QPoly, RatFunc, format_tpoly, irreducible_factors


class ParseError(DomainError):
    """Syntax error, carrying the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

class Poly:
    """Dense polynomial a_0..a_d over the ground field, a_d != 0, d >= 2."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field: str = FIELD_Q):
        if field == FIELD_QT:
            cs = [c if isinstance(c, RatFunc) else RatFunc.const(c) for c in coeffs]
            while cs and cs[-1].is_zero():
                cs.pop()
        else:
            cs = [Fraction(c) for c in coeffs]
            while cs and cs[-1] == 0:
                cs.pop()
        if len(cs) - 1 < 2:
            raise DomainError("dynamical polynomial needs degree >= 2")
        self.coeffs = tuple(cs)
        self.field = field

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        if self.field == FIELD_QT:
            return self.lc == RatFunc.const(1)
        return self.lc == 1

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatFunc.const(0) if self.field == FIELD_QT else Fraction(0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __call__(self, z):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * z + c
        return acc

    def derivative_coeffs(self):
        return [i * c if not isinstance(c, RatFunc) else c * i
                for i, c in enumerate(self.coeffs)][1:]

    def derivative_qpoly(self) -> QPoly:
        if self.field == FIELD_QT:
            raise DomainError("rational-coefficient derivative only over Q")
        return QPoly(self.coeffs).derivative()

    def as_qpoly(self) -> QPoly:
        if self.field == FIELD_QT:
            raise DomainError("as_qpoly only over Q")
        return QPoly(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({print_poly(self)!r})"


def iterate(f: Poly, z, n: int) -> list:
    """Exact orbit [z, f(z), ..., f^n(z)]."""
    if n < 0:
        raise DomainError("iterate needs n >= 0")
    if f.field == FIELD_QT and not isinstance(z, RatFunc):
        z = RatFunc.const(z)
    elif f.field == FIELD_Q:
        z = Fraction(z)
    orbit = [z]
    for _ in range(n):
        orbit.append(f(orbit[-1]))
    return orbit


def conjugate(f: Poly, a, b) -> Poly:
    """mu o f o mu^{-1} for mu(z) = a z + b; degree is preserved."""
    if f.field == FIELD_QT:
        a = a if isinstance(a, RatFunc) else RatFunc.const(a)
        b = b if isinstance(b, RatFunc) else RatFunc.const(b)
        zero, one = RatFunc.const(0), RatFunc.const(1)
        if a.is_zero():
            raise DomainError("conjugation needs a != 0")
    else:
        a, b = Fraction(a), Fraction(b)
        zero, one = Fraction(0), Fraction(1)
        if a == 0:
            raise DomainError("conjugation needs a != 0")
    # f((z - b)/a) evaluated with polynomial coefficient lists, then a*( ) + b
    inv = ([-b / a, one / a])  # (z - b)/a as a linear polynomial in z
    acc = [zero]
    for c in reversed(f.coeffs):
        acc = _poly_mul_linear(acc, inv, zero)
        acc[0] = acc[0] + c
    out = [a * c for c in acc]
    out[0] = out[0] + b
    return Poly(out, f.field)


def _poly_mul_linear(poly_coeffs, lin, zero):
    c0, c1 = lin
    out = [zero] * (len(poly_coeffs) + 1)
    for i, c in enumerate(poly_coeffs):
        out[i] = out[i] + c * c0
        out[i + 1] = out[i + 1] + c * c1
    return out


def center(f: Poly) -> tuple[Poly, object]:
    """Translation conjugate with zero z^{d-1} coefficient; returns (g, shift).

    g = mu o f o mu^{-1} for mu(z) = z + shift with shift = a_{d-1}/d.
    """
    if not f.is_monic():
        raise DomainError("centering needs a monic polynomial")
    d = f.degree
    if f.field == FIELD_QT:
        shift = f[d - 1] * Fraction(1, d)
    else:
        shift = f[d - 1] / d
    return conjugate(f, 1, shift), shift


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_OPS = set("+-*/^()")


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif ch in ("z", "t"):
            toks.append(("name", ch, i))
            i += 1
        elif ch in _TOKEN_OPS:
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


class _Parser:
    """Recursive-descent expression parser producing a coefficient list in z."""

    def __init__(self, text: str, field: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.field = field

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, got {t[1]!r}", t[2])
        return t

    # value representation: list of ground-field coefficients in z (lowest first)

    def _zero(self):
        return RatFunc.const(0) if self.field == FIELD_QT else Fraction(0)

    def _const(self, c):
        return RatFunc.const(c) if self.field == FIELD_QT else Fraction(c)

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            w = self.term()
            v = self._add(v, w) if op == "+" else self._add(v, self._neg(w))
        return v

    def term(self):
        v = self.unary()
        while True:
            t = self.peek()
            if t[0] in ("*", "/"):
                op = self.next()[0]
                w = self.unary()
                v = self._mul(v, w) if op == "*" else self._div(v, w, t[2])
            elif t[0] in ("int", "name", "("):
                w = self.unary()  # juxtaposition means multiplication
                v = self._mul(v, w)
            else:
                return v

    def unary(self):
        neg = False
        while self.peek()[0] in ("+", "-"):
            if self.next()[0] == "-":
                neg = not neg
        v = self.power()
        return self._neg(v) if neg else v

    def power(self):
        base = self.primary()
        if self.peek()[0] == "^":
            self.next()
            sign = 1
            while self.peek()[0] == "-":
                self.next()
                sign = -sign
            t = self.expect("int")
            e = sign * t[1]
            return self._pow(base, e, t[2])
        return base

    def primary(self):
        t = self.next()
        if t[0] == "int":
            return [self._const(t[1])]
        if t[0] == "name":
            if t[1] == "z":
                return [self._zero(), self._const(1)]
            if self.field != FIELD_QT:
                raise ParseError("'t' is only allowed over Q(t)", t[2])
            return [RatFunc.t()]
        if t[0] == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected {t[1]!r}", t[2])

    # coefficient-list algebra

    def _add(self, a, b):
        n = max(len(a), len(b))
        z = self._zero()
        return [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)]

    def _neg(self, a):
        return [-c for c in a]

    def _mul(self, a, b):
        z = self._zero()
        out = [z] * (len(a) + len(b) - 1)
        for i, c in enumerate(a):
            for j, d in enumerate(b):
                out[i + j] = out[i + j] + c * d
        return self._trim(out)

    def _div(self, a, b, pos):
        if len(self._trim(b)) > 1:
            raise ParseError("division by an expression involving z", pos)
        c = b[0]
        if (c.is_zero() if isinstance(c, RatFunc) else c == 0):
            raise ParseError("division by zero", pos)
        return [x / c for x in a]

    def _pow(self, a, e, pos):
        a = self._trim(a)
        if e < 0:
            if len(a) > 1:
                raise ParseError("negative power of an expression involving z", pos)
            c = a[0]
            if (c.is_zero() if isinstance(c, RatFunc) else c == 0):
                raise ParseError("zero to a negative power", pos)
            return [c ** e if isinstance(c, RatFunc) else c ** e]
        out = [self._const(1)]
        for _ in range(e):
            out = self._mul(out, a)
        return out

    def _trim(self, a):
        a = list(a)
        while len(a) > 1 and (a[-1].is_zero() if isinstance(a[-1], RatFunc) else a[-1] == 0):
            a.pop()
        return a


def parse_poly(text: str, field: str = FIELD_Q) -> Poly:
    """Parse a dynamical polynomial in z; exact coefficients.

    Grammar: sums of terms c*z^k with '*' optional; c an integer, a
    parenthesized rational (p/q), or (over Q(t)) an expression in t.
    Degree < 2 after dropping zero leading terms is a domain error.
    """
    coeffs = _Parser(text, field).parse()
    return Poly(coeffs, field)


def parse_ground(text: str, field: str = FIELD_Q):
    """Parse a ground-field element (no z allowed)."""
    coeffs = _Parser(text, field).parse()
    trimmed = [c for i, c in enumerate(coeffs)
               if i > 0 and not (c.is_zero() if isinstance(c, RatFunc) else c == 0)]
    if trimmed:
        raise DomainError("expected a constant expression without z")
    return coeffs[0]


def _fmt_q_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def _fmt_qt_coeff(c: RatFunc) -> str:
    n = format_tpoly(c.num)
    if c.den.degree() == 0:  # normalized monic denominator: constant means exactly 1
        return f"({n})"
    return f"(({n})/({format_tpoly(c.den)}))"


def print_poly(f: Poly) -> str:
    """Canonical printer; parse_poly(print_poly(f)) == f."""
    parts: list[str] = []
    for i in range(f.degree, -1, -1):
        c = f[i]
        if f.field == FIELD_QT:
            if c.is_zero():
                continue
            body = _monomial(_fmt_qt_coeff(c), i, always_coeff=True)
            sign = "+"
        else:
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            body = _monomial(_fmt_q_coeff(abs(c)), i, always_coeff=False)
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts) if parts else "0"


def _monomial(coeff_str: str, i: int, always_coeff: bool) -> str:
    if i == 0:
        return coeff_str
    zpart = "z" if i == 1 else f"z^{i}"
    if not always_coeff and coeff_str == "1":
        return zpart
    return f"{coeff_str}*{zpart}"


# ---------------------------------------------------------------------------
# critical points and superattracting cycles (over Q)
# ---------------------------------------------------------------------------

def critical_points(f: Poly) -> tuple[list[tuple[Fraction, int]], list[QPoly]]:
    """Rational roots of f' with multiplicity, plus leftover irreducible factors of f'."""
    if f.field != FIELD_Q:
        raise DomainError("critical points are computed over Q")
    fp = f.derivative_qpoly()
    roots = fp.rational_roots()
    residual = fp.monic()
    for r, m in roots:
        residual = residual.exact_div(QPoly([-r, 1]) ** m)
    leftovers = [g for g, mult in irreducible_factors(residual) for _ in range(mult)]
    return roots, leftovers


def superattracting_cycles(f: Poly, m_max: int) -> list[tuple[tuple[Fraction, ...], int]]:
    """All Q-rational cycles of period <= m_max containing a rational critical point."""
    if m_max < 1:
        raise DomainError("m_max >= 1 required")
    if f.field != FIELD_Q:
        raise DomainError("cycle search runs over Q")
    roots, _ = critical_points(f)
    seen: set[tuple[Fraction, ...]] = set()
    out = []
    for c, _mult in roots:
        orbit = [c]
        for _ in range(m_max):
            nxt = f(orbit[-1])
            if nxt == c:
                cycle = tuple(orbit)
                key = tuple(sorted(cycle))
                if key not in seen:
                    seen.add(key)
                    out.append((cycle, len(cycle)))
                break
            if nxt.numerator.bit_length() + nxt.denominator.bit_length() > 4096:
                break  # left for good; cannot return to c
            orbit.append(nxt)
    return out


def in_superattracting_family(f: Poly, m: int) -> bool:
    """Whether f has a Q-rational superattracting periodic point of period exactly m."""
    return any(per == m for _, per in superattracting_cycles(f, m))


# ---------------------------------------------------------------------------
# preperiodic points (over Q)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class PreperiodicPoint:
    value: Fraction
    preperiod: int
    period: int


def _escape_exponent(f: Poly, p: int) -> Fraction:
    """log_p of the radius beyond which |f(z)|_p = |a_d|_p |z|_p^d exactly."""
    d = f.degree
    vd = valuation(f.lc, p)
    s = Fraction(vd, d - 1)
    for i in range(d):
        ai = f[i]
        if ai != 0:
            s = max(s, Fraction(vd - valuation(ai, p), d - i))
    return s


def _search_box(f: Poly):
    """(arch bound R, denominator bound B, forced numerator divisor F, primes)."""
    d = f.degree
    primes: set[int] = set()
    for c in f.coeffs:
        if c.denominator > 1:
            primes.update(p for p, _ in factorize(c.denominator))
    for n in (f.lc.numerator, f.lc.denominator):
        if abs(n) > 1:
            primes.update(p for p, _ in factorize(n))
    primes.update(p for p in range(2, d + 1) if is_prime(p))
    B, F = 1, 1
    for p in sorted(primes):
        s = _escape_exponent(f, p)
        if s > 0:
            B *= p ** math.floor(s)
        elif s < 0:
            F *= p ** math.ceil(-s)
    R = max(Fraction(1), (2 + sum(abs(f[i]) for i in range(d))) / abs(f.lc))
    return R, B, F, sorted(primes)


def _in_box(x: Fraction, R: Fraction, B: int, F: int) -> bool:
    if abs(x) > R:
        return False
    if B % x.denominator != 0:
        return False
    return x.numerator % F == 0


def preperiodic_points(f: Poly) -> list[PreperiodicPoint]:
    """The complete set of Q-rational preperiodic points with minimal (preperiod, period).

    Any Q-rational point with bounded orbit lies in a finite box: its
    denominator divides B (from the p-adic escape radii), its numerator is
    a multiple of F and bounded by R * denominator archimedean-wise.  Orbits
    inside the box repeat by pigeonhole; leaving the box certifies escape.
    """
    if f.field != FIELD_Q:
        raise DomainError("preperiodic search runs over Q")
    R, B, F, _ = _search_box(f)
    results: list[PreperiodicPoint] = []
    decided: dict[Fraction, bool] = {}

    def orbit_is_bounded(x: Fraction) -> bool:
        if x in decided:
            return decided[x]
        seen: dict[Fraction, int] = {}
        orbit = [x]
        seen[x] = 0
        verdict = None
        while verdict is None:
            nxt = f(orbit[-1])
            if not _in_box(nxt, R, B, F):
                verdict = False
            elif nxt in seen:
                verdict = True
            else:
                seen[nxt] = len(orbit)
                orbit.append(nxt)
        for y in orbit:
            decided[y] = verdict
        return verdict

    nmax_cache: dict[int, int] = {}
    for b in divisors(B):
        nmax = int(R * b)
        nmax_cache[b] = nmax
        for a in range(-nmax, nmax + 1):
            if _gcd(a, b) != 1:
                continue
            if F > 1 and a % F != 0:
                continue
            x = Fraction(a, b)
            if not orbit_is_bounded(x):
                continue
            # recover minimal preperiod/period by walking the orbit again
            seen: dict[Fraction, int] = {x: 0}
            orbit = [x]
            while True:
                nxt = f(orbit[-1])
                if nxt in seen:
                    pre = seen[nxt]
                    per = len(orbit) - pre
                    results.append(PreperiodicPoint(x, pre, per))
                    break
                seen[nxt] = len(orbit)
                orbit.append(nxt)
    return sorted(results)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)
