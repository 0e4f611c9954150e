import random
from fractions import Fraction as F

import pytest

from splitrad.exact import (DomainError, INFINITY, LogValue, factorize,
                            is_prime, valuation)
from splitrad.intervals import Interval
from splitrad.places import Place, local_abs_log


def test_factorize_examples():
    # oracle: repeated long division
    def slow_factor(n):
        n = abs(n)
        out = []
        p = 2
        while n > 1:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                out.append((p, e))
            p += 1
        return out

    assert factorize(3375) == slow_factor(3375) == [(3, 3), (5, 3)]
    assert factorize(1) == []
    assert factorize(-12) == slow_factor(-12) == [(2, 2), (3, 1)]


def test_factorize_zero_is_domain_error():
    with pytest.raises(DomainError):
        factorize(0)


def test_factorize_reconstructs_and_sorted():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 10 ** 9)
        fac = factorize(n)
        prod = 1
        for p, e in fac:
            assert is_prime(p)
            prod *= p ** e
        assert prod == n
        assert [p for p, _ in fac] == sorted({p for p, _ in fac})


def test_factorize_large_semiprime():
    p, q = 1000003, 1000033
    assert factorize(p * q) == [(p, 1), (q, 1)]


def test_is_prime_spots():
    assert is_prime(2) and is_prime(3) and is_prime(2 ** 61 - 1)
    assert not is_prime(1) and not is_prime(2 ** 67 - 1)


def test_valuation_examples():
    assert valuation(F(252, 125), 5) == -3
    assert valuation(0, 7) == INFINITY
    assert valuation(F(6, 5), 2) == 1
    with pytest.raises(DomainError):
        valuation(F(1, 2), 4)


def test_valuation_additivity():
    rng = random.Random(23)
    primes = [p for p in range(2, 101) if is_prime(p)]
    for _ in range(1000):
        x = F(rng.randint(-10 ** 6, 10 ** 6) or 1, rng.randint(1, 10 ** 4))
        y = F(rng.randint(-10 ** 6, 10 ** 6) or 1, rng.randint(1, 10 ** 4))
        p = rng.choice(primes)
        assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)


def test_local_abs_log_examples():
    assert local_abs_log(F(1, 2), Place.finite(2)) == LogValue.from_log(2, 1)
    for v in (Place.finite(2), Place.finite(97), Place.arch()):
        assert local_abs_log(F(1), v).is_exactly_zero()
    assert local_abs_log(F(6, 5), Place.finite(5)) == LogValue.from_log(5, 1)
    with pytest.raises(DomainError):
        local_abs_log(0, Place.arch())


def test_logvalue_algebra_associative():
    rng = random.Random(5)
    for _ in range(100):
        vals = []
        for _k in range(3):
            logs = {rng.choice([2, 3, 5, 7]): F(rng.randint(-9, 9), rng.randint(1, 9))
                    for _j in range(2)}
            vals.append(LogValue(F(rng.randint(-5, 5)), logs))
        a, b, c = vals
        assert ((a + b) + c).formal_equal(a + (b + c))
        assert ((a + b) + c) == (a + (b + c))


def test_logvalue_scalar_coordinatewise():
    v = LogValue(F(1, 2), {3: F(2), 5: F(-1, 3)})
    w = v * F(3, 2)
    assert w.const == F(3, 4) and w.logs == {3: F(3), 5: F(-1, 2)}


def test_interval_widening_monotone():
    a = Interval(1.0, 1.5)
    b = Interval(0.25, 0.5)
    s = a + b
    assert s.width >= a.width and s.width >= b.width
    assert s.lo <= 1.25 <= s.hi


def test_logvalue_interval_encloses_value():
    import math
    v = LogValue(F(1, 3), {2: F(1), 5: F(-2)})
    iv = v.to_interval()
    truth = 1 / 3 + math.log(2) - 2 * math.log(5)
    assert iv.lo <= truth <= iv.hi
    assert iv.width < 1e-12


def test_logvalue_compare_trichotomy():
    a = LogValue.from_log(2, 1)
    b = LogValue.from_log(3, 1)
    assert a.compare(b) == -1
    assert b.compare(a) == 1
    assert a.compare(LogValue.from_log(2, 1)) == 0


def test_logvalue_json_roundtrip():
    v = LogValue(F(-2, 7), {3: F(5, 4)}, Interval(0.25, 0.5))
    assert LogValue.from_json(v.to_json()) == v
