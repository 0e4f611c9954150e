"""Exact integer/rational arithmetic: factorization, valuations, LogValue.

A LogValue is the value type of every height-like quantity in the library:
an exact rational constant, plus an exact formal sum of rational multiples
of log p over primes p, plus a certified float interval for contributions
that are genuinely transcendental (archimedean escape-rate limits).  Sums
and scalar multiples act coordinatewise, so identities between heights can
be asserted exactly on the formal data.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .intervals import Interval

INFINITY = math.inf

Rational = Fraction


class DomainError(ValueError):
    """An operation was called outside its stated domain."""


class UndeterminedError(RuntimeError):
    """No certificate (escape or boundedness) fired within the iteration cap."""


# ---------------------------------------------------------------------------
# primality and factorization
# ---------------------------------------------------------------------------

_TRIAL_LIMIT = 10 ** 6
_small_primes: list[int] | None = None

# witnesses certifying primality for every n < 3.3 * 10^24 (covers 64-bit)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve() -> list[int]:
    global _small_primes
    if _small_primes is None:
        limit = _TRIAL_LIMIT
        mark = bytearray([1]) * (limit + 1)
        mark[0] = mark[1] = 0
        for i in range(2, int(limit ** 0.5) + 1):
            if mark[i]:
                mark[i * i:: i] = bytearray(len(mark[i * i:: i]))
        _small_primes = [i for i in range(limit + 1) if mark[i]]
    return _small_primes


def _mr_witness(n: int, a: int) -> bool:
    """True if a witnesses compositeness of odd n > 2."""
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a % n, d, n)
    if x in (0, 1, n - 1):
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic below 2^64 (fixed Miller-Rabin bases), seeded-probabilistic above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 1 << 64:
        return not any(_mr_witness(n, a) for a in _MR_BASES)
    rng = random.Random(0x5EED ^ n)
    return not any(_mr_witness(n, rng.randrange(2, n - 1)) for _ in range(32))


def _pollard_rho(n: int, rng: random.Random) -> int:
    """A nontrivial factor of composite n (Brent's cycle variant)."""
    while True:
        c = rng.randrange(1, n)
        x = rng.randrange(0, n)
        y, d, q = x, 1, 1
        count = 0
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            q = q * abs(x - y) % n
            count += 1
            if q == 0:
                d = math.gcd(abs(x - y), n)
                break
            if count % 64 == 0:
                d = math.gcd(q, n)
        if 1 < d < n:
            return d


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of |n| as [(p, e), ...] with p strictly increasing.

    Trial division up to 10^6, then Pollard rho with a fixed seed; primality
    of cofactors is certified by Miller-Rabin as in is_prime.
    """
    if n == 0:
        raise DomainError("factorize(0) is undefined")
    n = abs(n)
    out: dict[int, int] = {}
    for p in _sieve():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        rng = random.Random(0xFAC70)
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _pollard_rho(m, rng)
            stack.append(d)
            stack.append(m // d)
    return sorted(out.items())


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1, ascending."""
    divs = [1]
    for p, e in factorize(n) if n > 1 else []:
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------

def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p: int):
    """p-adic valuation v_p(x) of a rational x, with v_p(0) = +inf."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


# ---------------------------------------------------------------------------
# LogValue
# ---------------------------------------------------------------------------

class LogValue:
    """const + sum_p q_p*log(p) + err, with exact const/q_p and certified err.

    Immutable by convention.  The formal part (const and the log
    coefficients) is exact; `err` is a float interval enclosing whatever
    cannot be expressed formally.  An exact value has err = [0, 0].
    """

    __slots__ = ("const", "logs", "err")

    def __init__(self, const=0, logs: dict[int, Fraction] | None = None,
                 err: Interval | None = None):
        self.const = Fraction(const)
        clean: dict[int, Fraction] = {}
        for p, q in (logs or {}).items():
            q = Fraction(q)
            if q != 0:
                clean[p] = q
        self.logs = clean
        self.err = err if err is not None else Interval.zero()

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LogValue":
        return cls()

    @classmethod
    def from_const(cls, c) -> "LogValue":
        return cls(const=c)

    @classmethod
    def from_log(cls, p: int, coeff) -> "LogValue":
        return cls(logs={p: Fraction(coeff)})

    @classmethod
    def from_interval(cls, iv: Interval) -> "LogValue":
        return cls(err=iv)

    @classmethod
    def log_abs(cls, x) -> "LogValue":
        """Exact log|x| of a nonzero rational, as a formal sum of log p."""
        x = Fraction(x)
        if x == 0:
            raise DomainError("log|0| is undefined")
        logs: dict[int, Fraction] = {}
        for p, e in factorize(x.numerator) if abs(x.numerator) != 1 else []:
            logs[p] = logs.get(p, Fraction(0)) + e
        for p, e in factorize(x.denominator) if x.denominator != 1 else []:
            logs[p] = logs.get(p, Fraction(0)) - e
        return cls(logs=logs)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        logs = dict(self.logs)
        for p, q in other.logs.items():
            logs[p] = logs.get(p, Fraction(0)) + q
        return LogValue(self.const + other.const, logs, self.err + other.err)

    def __neg__(self) -> "LogValue":
        return LogValue(-self.const, {p: -q for p, q in self.logs.items()}, -self.err)

    def __sub__(self, other: "LogValue") -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "LogValue":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        s = Fraction(scalar)
        return LogValue(self.const * s, {p: q * s for p, q in self.logs.items()}, self.err * s)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, LogValue) and self.const == other.const
                and self.logs == other.logs and self.err == other.err)

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.logs.items())), self.err.lo, self.err.hi))

    # -- queries -----------------------------------------------------------

    def is_formally_zero(self) -> bool:
        return self.const == 0 and not self.logs

    def is_exactly_zero(self) -> bool:
        return self.is_formally_zero() and self.err.lo == 0.0 == self.err.hi

    def is_exact(self) -> bool:
        return self.err.lo == 0.0 == self.err.hi

    def formal_equal(self, other: "LogValue") -> bool:
        return self.const == other.const and self.logs == other.logs

    def to_interval(self) -> Interval:
        iv = Interval.from_fraction(self.const)
        for p, q in sorted(self.logs.items()):
            iv = iv + Interval.log_of_int(p) * Interval.from_fraction(q)
        return iv + self.err

    def approx(self) -> float:
        return self.to_interval().mid

    def compare(self, other: "LogValue"):
        """-1/0/+1 if certified, None if the enclosures overlap undecidably."""
        d = self - other
        if d.is_exactly_zero():
            return 0
        iv = d.to_interval()
        if iv.hi < 0:
            return -1
        if iv.lo > 0:
            return 1
        if iv.lo == 0.0 == iv.hi:
            return 0
        return None

    def certified_leq(self, other: "LogValue"):
        """True/False when decidable, None otherwise."""
        c = self.compare(other)
        if c is None:
            d = (self - other).to_interval()
            if d.hi <= 0:
                return True
            if d.lo > 0:
                return False
            return None
        return c <= 0

    # -- presentation ------------------------------------------------------

    def __repr__(self) -> str:
        parts = []
        if self.const:
            parts.append(str(self.const))
        for p, q in sorted(self.logs.items()):
            parts.append(f"{q}*log({p})" if q != 1 else f"log({p})")
        if not self.err.is_point() or self.err.lo != 0.0:
            parts.append(f"[{self.err.lo:.6g},{self.err.hi:.6g}]")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        out: dict = {"approx": self.approx()}
        if self.const:
            out["const"] = str(self.const)
        if self.logs:
            out["logs"] = {str(p): str(q) for p, q in sorted(self.logs.items())}
        if not (self.err.lo == 0.0 == self.err.hi):
            out["err"] = [self.err.lo, self.err.hi]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LogValue":
        const = Fraction(data.get("const", 0))
        logs = {int(p): Fraction(q) for p, q in data.get("logs", {}).items()}
        err = data.get("err")
        return cls(const, logs, Interval(*err) if err else None)
