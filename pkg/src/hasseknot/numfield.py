"""Number fields K/Q given by a monic irreducible integer polynomial.

Prime splitting through factorization of the defining polynomial over
GF(p) (Dedekind's criterion), the ideal-norm membership test via
residue-degree gcds, and an empirical prime census for the density of
primes whose residue degrees are coprime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, gfpoly
from .errors import DomainError, UnsupportedPrimeError

# Primes tried for a mod-p irreducibility certificate before falling back
# to the bounded integer factor search.
_CERT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def _poly_eval(coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_mul_int(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        for j, gj in enumerate(g):
            out[i + j] += fi * gj
    return out


def _sylvester_resultant(f: list[int], g: list[int]) -> int:
    """Resultant of integer polynomials via Bareiss elimination (exact)."""
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    mat = [[0] * size for _ in range(size)]
    for i in range(m):
        for j, c in enumerate(reversed(f)):
            mat[i][i + j] = c
    for i in range(n):
        for j, c in enumerate(reversed(g)):
            mat[m + i][i + j] = c
    # Bareiss fraction-free Gaussian elimination
    sign = 1
    prev = 1
    for k in range(size - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, size):
                if mat[r][k] != 0:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[size - 1][size - 1]


def poly_discriminant(coeffs) -> int:
    """Discriminant of a monic integer polynomial (constant term first)."""
    f = list(coeffs)
    n = len(f) - 1
    deriv = [i * c for i, c in enumerate(f)][1:]
    res = _sylvester_resultant(f, deriv)
    return (-1) ** (n * (n - 1) // 2) * res


def _divides_exactly(f: list[int], g: list[int]) -> bool:
    """Whether monic integer g divides integer f exactly over Z."""
    rem = f[:]
    dg = len(g) - 1
    while len(rem) - 1 >= dg and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dg:
            break
        c = rem[-1]
        off = len(rem) - 1 - dg
        for i, gi in enumerate(g):
            rem[off + i] -= c * gi
        rem.pop()
    return not any(rem)


def _factor_degree_candidates(f: list[int]) -> set[int] | None:
    """Degrees (2..deg/2) a proper monic factor could have, from splitting
    patterns mod several good primes; None means some prime certified f
    irreducible outright."""
    n = len(f) - 1
    candidates = set(range(2, n // 2 + 1))
    for p in _CERT_PRIMES:
        fb = gfpoly.normalize(f, p)
        if gfpoly.degree(fb) != n:
            continue
        if gfpoly.degree(gfpoly.gcd_poly(fb, gfpoly.derivative(fb, p), p)) > 0:
            continue  # not squarefree mod p: pattern unusable
        degs = [gfpoly.degree(g) for g, _ in gfpoly.factor(fb, p)]
        if degs == [n]:
            return None
        sums = {0}
        for d in degs:
            sums |= {s + d for s in sums}
        candidates &= sums
        if not candidates:
            return set()
    return candidates


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
    return sorted(out)


def _has_factor_of_degree(f: list[int], d: int) -> bool:
    """Bounded search for a monic integer factor of degree d; coefficient
    boxes come from the Mignotte bound, with divisor pruning on g(0), g(1)."""
    norm = math.isqrt(sum(c * c for c in f)) + 1
    bounds = [math.comb(d - 1, i) * norm + math.comb(d - 1, i - 1) if i >= 1
              else norm for i in range(d)]
    f0, f1 = _poly_eval(f, 0), _poly_eval(f, 1)
    if f0 == 0:
        return True  # x divides f
    const_candidates = [c for dv in _divisors(f0) for c in (dv, -dv)
                        if abs(c) <= bounds[0]]

    def rec(coeffs_partial: list[int], idx: int):
        if idx == d:
            g = coeffs_partial + [1]
            if f1 != 0 and _poly_eval(g, 1) != 0 and f1 % _poly_eval(g, 1) != 0:
                return False
            return _divides_exactly(f, g)
        for c in (const_candidates if idx == 0 else
                  range(-bounds[idx], bounds[idx] + 1)):
            if rec(coeffs_partial + [c], idx + 1):
                return True
        return False

    return rec([], 0)


def _check_irreducible(f: list[int]) -> None:
    """Raise DomainError unless monic f of degree >= 2 is irreducible over Q.

    Strategy: integer-root exclusion, then a mod-p certificate / splitting
    pattern filter, then a Mignotte-bounded search over the few surviving
    factor degrees.  Intended for small desk-scale polynomials.
    """
    n = len(f) - 1
    if f[0] == 0:
        raise DomainError("polynomial is divisible by x")
    # monic => any rational root is an integer dividing the constant term
    for dv in _divisors(f[0]):
        for r in (dv, -dv):
            if _poly_eval(f, r) == 0:
                raise DomainError(f"polynomial has rational root {r}")
    candidates = _factor_degree_candidates(f)
    if candidates is None:
        return
    for d in sorted(candidates):
        if _has_factor_of_degree(f, d):
            raise DomainError(f"polynomial has a degree-{d} factor over Z")


class NumberField:
    """A number field K/Q defined by a monic irreducible integer polynomial.

    `poly` holds the coefficients constant term first; `disc_poly` is the
    integer discriminant of the polynomial (not of the field).  Optional
    `overrides` supply exact splitting pairs at primes where Dedekind's
    criterion is not certified; see `parse_override_table`.
    """

    def __init__(self, coeffs, overrides: dict[int, tuple] | None = None):
        poly = tuple(int(c) for c in coeffs)
        if len(poly) < 3:
            raise DomainError("degree must be >= 2")
        if poly[-1] != 1:
            raise DomainError("polynomial must be monic")
        _check_irreducible(list(poly))
        self.poly = poly
        self.degree = len(poly) - 1
        self.disc_poly = poly_discriminant(poly)
        self.overrides: dict[int, tuple[tuple[int, int], ...]] = {}
        for p, pairs in (overrides or {}).items():
            pairs = tuple(sorted(tuple(pair) for pair in pairs))
            if sum(e * f for e, f in pairs) != self.degree:
                raise DomainError(f"override at p={p}: sum e*f != degree")
            if any(e < 1 or f < 1 for e, f in pairs):
                raise DomainError(f"override at p={p}: e, f must be >= 1")
            self.overrides[int(p)] = pairs

    def __repr__(self):
        return f"NumberField({list(self.poly)})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)


@dataclass(frozen=True)
class SplittingData:
    """Shape of (p) in O_K: multiset of (ramification index e, residue degree f).

    `reliable` is False when the data is only the formal factorization of
    the defining polynomial mod p and Dedekind's criterion is not certified.
    """

    prime: int
    pairs: tuple[tuple[int, int], ...]
    reliable: bool

    def __post_init__(self):
        if not self.pairs:
            raise DomainError("splitting data needs at least one prime above p")

    def residue_gcd(self) -> int:
        g = 0
        for _, f in self.pairs:
            g = math.gcd(g, f)
        return g

    @property
    def unramified(self) -> bool:
        return all(e == 1 for e, _ in self.pairs)


def parse_override_table(text: str) -> dict[int, tuple[tuple[int, int], ...]]:
    """Parse a splitting override table: one line per prime, "p e1 f1 e2 f2 ...",
    '#' starts a comment."""
    out: dict[int, tuple[tuple[int, int], ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise DomainError(f"override line {lineno}: non-integer entry") from None
        if len(nums) < 3 or len(nums) % 2 == 0:
            raise DomainError(f"override line {lineno}: expected 'p e1 f1 e2 f2 ...'")
        p, rest = nums[0], nums[1:]
        if not arith.is_prime(p):
            raise DomainError(f"override line {lineno}: {p} is not prime")
        out[p] = tuple(sorted(zip(rest[0::2], rest[1::2])))
    return out


def _fundamental_discriminant(m: int) -> int:
    d = arith.squarefree_kernel(m)
    return d if d % 4 == 1 else 4 * d


def splitting_data(K: NumberField, p: int) -> SplittingData:
    """(e, f) pairs of the primes above p, via factorization of the defining
    polynomial over GF(p).

    Certified (reliable) when p^2 does not divide disc_poly or the reduction
    is squarefree; quadratic fields fall back to the exact Kronecker-symbol
    rule at the remaining primes.  Otherwise the formal factor data is
    returned with reliable=False.  Overrides attached to K win outright.
    """
    if not arith.is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p in K.overrides:
        return SplittingData(p, K.overrides[p], reliable=True)
    factors = gfpoly.factor(list(K.poly), p)
    pairs = tuple(sorted((mult, gfpoly.degree(g)) for g, mult in factors))
    squarefree = all(e == 1 for e, _ in pairs)
    reliable = (K.disc_poly % (p * p) != 0) or squarefree
    if not reliable and K.degree == 2:
        D = _fundamental_discriminant(K.disc_poly)
        sym = arith.kronecker(D, p)
        if sym == 1:
            return SplittingData(p, ((1, 1), (1, 1)), reliable=True)
        if sym == -1:
            return SplittingData(p, ((1, 2),), reliable=True)
        return SplittingData(p, ((2, 1),), reliable=True)
    return SplittingData(p, pairs, reliable=reliable)


def is_ideal_norm(K: NumberField, t: Fraction | int) -> bool:
    """Whether a positive rational is the norm of a fractional ideal of K:
    for every prime p, gcd of the residue degrees above p divides ord_p(t).
    This indicator is multiplicative."""
    t = Fraction(t)
    if t <= 0:
        raise DomainError("ideal norms are positive; t must be > 0")
    for p, e in arith.factorize(t).factors:
        sd = splitting_data(K, p)
        if not sd.reliable:
            raise UnsupportedPrimeError(p)
        if e % sd.residue_gcd() != 0:
            return False
    return True


def in_P_K(K: NumberField, p: int) -> bool:
    """Whether the unramified prime p has residue degrees with gcd 1."""
    sd = splitting_data(K, p)
    if not sd.reliable:
        raise UnsupportedPrimeError(p)
    if not sd.unramified:
        raise DomainError(f"p={p} is ramified")
    return sd.residue_gcd() == 1


def delta_K_estimate(K: NumberField, X: int) -> tuple[int, int, Fraction]:
    """Empirical density of primes p <= X (p not dividing disc_poly) whose
    residue degrees have gcd 1.  Returns (hits, total, hits/total)."""
    if X < 100:
        raise DomainError("need X >= 100 for a meaningful census")
    hits = total = 0
    for p in arith.sieve_primes(X):
        if K.disc_poly % p == 0:
            continue
        total += 1
        if in_P_K(K, p):
            hits += 1
    return hits, total, Fraction(hits, total)


def _doubling_grid(B: int, levels: int | None) -> list[int]:
    if levels is None:
        levels = max(1, B.bit_length())
    grid = sorted({max(1, B >> k) for k in range(levels)})
    return grid


def count_ideal_norms(K: NumberField, B: int, levels: int | None = None
                      ) -> list[tuple[int, int]]:
    """Exact counts #{n <= B_i : n in N(I_K)} on the doubling grid B_i = B/2^k."""
    if B < 1:
        raise DomainError("B must be >= 1")
    grid = _doubling_grid(B, levels)
    gcd_cache: dict[int, int] = {}

    def g_of(p: int) -> int:
        g = gcd_cache.get(p)
        if g is None:
            sd = splitting_data(K, p)
            if not sd.reliable:
                raise UnsupportedPrimeError(p)
            g = sd.residue_gcd()
            gcd_cache[p] = g
        return g

    table = arith.spf_table(B) if B >= 2 else None
    counts = []
    passing = 0
    gi = 0
    for n in range(1, B + 1):
        ok = True
        if n > 1:
            for p, e in arith.table_factorize(n, table).factors:
                if e % g_of(p) != 0:
                    ok = False
                    break
        if ok:
            passing += 1
        while gi < len(grid) and grid[gi] == n:
            counts.append((n, passing))
            gi += 1
    # grid points beyond the loop (only possible when B < smallest grid entry)
    return counts
