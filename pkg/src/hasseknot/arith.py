"""Exact integer arithmetic kernel.

Factorization of arbitrary-precision rationals, the Kronecker symbol,
p-adic square classes, and the Hilbert symbol at every place of Q.
Everything here is exact integer/Fraction arithmetic; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

_TRIAL_LIMIT = 10 ** 6

# Deterministic Miller-Rabin witness set, valid for n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_small_primes: list[int] | None = None


def _trial_primes() -> list[int]:
    """Primes below the trial-division limit, sieved once and cached read-only."""
    global _small_primes
    if _small_primes is None:
        _small_primes = sieve_primes(_TRIAL_LIMIT)
    return _small_primes


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit by a bytearray sieve of Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p:: p] = b"\x00" * len(range(p * p, limit + 1, p))
    return [i for i in range(2, limit + 1) if flags[i]]


def is_prime(n: int) -> bool:
    """Deterministic primality test (trial by tiny primes, then Miller-Rabin)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle finding).

    The polynomial increments walk a fixed sequence of c values, so the
    result is deterministic for a given n.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")  # pragma: no cover


def _factor_positive(n: int) -> dict[int, int]:
    """Exponent map of n >= 1; trial division, then Miller-Rabin + Pollard rho."""
    out: dict[int, int] = {}
    for p in _trial_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


@dataclass(frozen=True)
class Place:
    """A rational place: a finite prime p, or the archimedean place (p=None)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise DomainError(f"finite place requires a prime, got {self.p}")

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


INFINITE_PLACE = Place(None)


def finite(p: int) -> Place:
    return Place(p)


@dataclass(frozen=True)
class Factorization:
    """sign * prod p^e with primes strictly increasing; negative exponents
    carry denominator primes, so rationals factor exactly."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +-1")
        prev = 1
        for p, e in self.factors:
            if p <= prev or e == 0:
                raise DomainError("factors must have increasing primes and nonzero exponents")
            prev = p

    def value(self) -> Fraction:
        """Reassemble sign * prod p^e exactly."""
        v = Fraction(self.sign)
        for p, e in self.factors:
            v *= Fraction(p) ** e
        return v

    def ord_at(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(t: Fraction | int) -> Factorization:
    """Exact factorization of a nonzero rational; denominator primes get
    negative exponents."""
    t = Fraction(t)
    if t == 0:
        raise DomainError("cannot factor 0")
    sign = 1 if t > 0 else -1
    num = _factor_positive(abs(t.numerator))
    den = _factor_positive(t.denominator)
    merged = dict(num)
    for p, e in den.items():
        merged[p] = merged.get(p, 0) - e  # coprime num/den, but be safe
    return Factorization(sign, tuple(sorted((p, e) for p, e in merged.items() if e != 0)))


def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table T with T[n] = least prime dividing n,
    2 <= n <= limit. Enables O(log n) factorization of table-range integers."""
    if limit < 2:
        raise DomainError("spf_table needs limit >= 2")
    table = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if table[p] == 0:
            sl = table[p::p]
            sl[sl == 0] = p
    return table


def table_factorize(n: int, table: np.ndarray) -> Factorization:
    """Factorization of a positive integer n within the SPF table range."""
    if n < 1 or n >= len(table):
        raise DomainError(f"n={n} outside table range")
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(table[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return Factorization(1, tuple(out))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extending the Legendre and Jacobi symbols.

    Conventions: (a|2) = 0, 1, -1 for a even, a = +-1 mod 8, a = +-3 mod 8;
    (a|-1) = -1 iff a < 0; (a|0) = 1 iff a = +-1.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            k = -k
    # now n odd positive: Jacobi by quadratic reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def val_unit(t: Fraction | int, p: int) -> tuple[int, Fraction]:
    """(ord_p(t), u) with t = p^ord * u and u a p-adic unit."""
    t = Fraction(t)
    if t == 0:
        raise DomainError("ord_p(0) undefined")
    num, den = t.numerator, t.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def _unit_residue(u: Fraction, mod: int) -> int:
    """Residue of a mod-coprime rational u modulo mod."""
    return u.numerator * pow(u.denominator, -1, mod) % mod


def is_square_local(d: Fraction | int, v: Place) -> bool:
    """True iff d is a square in the completion of Q at v.

    Real place: d > 0.  Odd p: even valuation and unit part a QR mod p.
    p = 2: even valuation and unit part = 1 mod 8.
    """
    d = Fraction(d)
    if d == 0:
        raise DomainError("square class of 0 undefined")
    if not v.is_finite:
        return d > 0
    p = v.p
    val, u = val_unit(d, p)
    if val % 2 != 0:
        return False
    if p == 2:
        return _unit_residue(u, 8) == 1
    return kronecker(_unit_residue(u, p), p) == 1


def hilbert(a: Fraction | int, b: Fraction | int, v: Place) -> int:
    """Hilbert symbol (a,b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial
    solution over the completion of Q at v.

    Closed forms: at the real place, -1 iff a < 0 and b < 0; at odd p via
    Legendre symbols and valuations; at p = 2 via the units-mod-8 formula
    (-1)^(eps(u)eps(w) + alpha*omega(w) + beta*omega(u)).
    """
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise DomainError("hilbert symbol needs nonzero arguments")
    if not v.is_finite:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    alpha, u = val_unit(a, p)
    beta, w = val_unit(b, p)
    if p == 2:
        un = _unit_residue(u, 8)
        wn = _unit_residue(w, 8)
        eps_u = (un - 1) // 2 % 2
        eps_w = (wn - 1) // 2 % 2
        omega_u = (un * un - 1) // 8 % 2
        omega_w = (wn * wn - 1) // 8 % 2
        e = eps_u * eps_w + alpha * omega_w + beta * omega_u
        return -1 if e % 2 else 1
    s = 1
    if alpha % 2 and beta % 2 and p % 4 == 3:
        s = -s
    if beta % 2:
        s *= kronecker(_unit_residue(u, p), p)
    if alpha % 2:
        s *= kronecker(_unit_residue(w, p), p)
    return s


def squarefree_kernel(t: Fraction | int) -> int:
    """The squarefree integer representing the square class of a nonzero
    rational: sign * prod of primes with odd exponent."""
    f = factorize(t)
    k = f.sign
    for p, e in f.factors:
        if e % 2:
            k *= p
    return k


def relevant_places(*values: Fraction | int) -> list[Place]:
    """The infinite place, 2, and every prime dividing a numerator or
    denominator of the given rationals.  Hilbert symbols of the values are
    +1 everywhere else."""
    ps: set[int] = {2}
    for t in values:
        for p in factorize(t).primes:
            ps.add(p)
    return [INFINITE_PLACE] + [Place(p) for p in sorted(ps)]
