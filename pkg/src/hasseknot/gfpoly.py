"""Univariate polynomial factorization over GF(p).

Polynomials are lists of ints, constant term first, reduced mod p, with no
trailing zeros ([] is the zero polynomial).  The factor driver runs
squarefree decomposition, then distinct-degree splitting, then randomized
equal-degree (Cantor-Zassenhaus) splitting.  The equal-degree stage draws
from a generator seeded deterministically from (p, f), so repeated runs
factor identically.
"""

from __future__ import annotations

import random
from math import gcd

from .errors import DomainError


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def normalize(coeffs, p: int) -> list[int]:
    return trim([c % p for c in coeffs])


def degree(f: list[int]) -> int:
    return len(f) - 1


def monic(f: list[int], p: int) -> list[int]:
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return trim(out)


def divmod_(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = f[:]
    dg = degree(g)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    while f and degree(f) >= dg:
        c = f[-1] * inv % p
        off = degree(f) - dg
        q[off] = c
        for i, gi in enumerate(g):
            f[off + i] = (f[off + i] - c * gi) % p
        trim(f)
    return trim(q), f


def mod(f: list[int], g: list[int], p: int) -> list[int]:
    return divmod_(f, g, p)[1]


def gcd_poly(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def pow_mod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    """base^e mod (f, p) by binary powering."""
    result = [1]
    b = mod(base, f, p)
    while e:
        if e & 1:
            result = mod(mul(result, b, p), f, p)
        e >>= 1
        if e:
            b = mod(mul(b, b, p), f, p)
    return result


def compose_mod(g: list[int], h: list[int], f: list[int], p: int) -> list[int]:
    """g(h) mod (f, p) by Horner; cheap for the small degrees used here."""
    out: list[int] = []
    for c in reversed(g):
        out = mod(mul(out, h, p), f, p)
        if c:
            if not out:
                out = [c]
            else:
                out[0] = (out[0] + c) % p
    return out


def derivative(f: list[int], p: int) -> list[int]:
    return trim([(i * c) % p for i, c in enumerate(f)][1:])


def pth_root(f: list[int], p: int) -> list[int]:
    """g with g(x)^p = f(x) when f is a polynomial in x^p (coefficients are
    already p-th powers over GF(p) by Fermat)."""
    return [f[i] for i in range(0, len(f), p)]


def squarefree_decomposition(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Yun-style decomposition of monic f into [(g_i, i)] with f = prod g_i^i
    and the g_i squarefree, handling the characteristic-p x^p collapse."""
    out: list[tuple[list[int], int]] = []
    stack = [(monic(f, p), 1)]
    while stack:
        f, scale = stack.pop()
        d = derivative(f, p)
        if not d:
            # f = h(x^p) = h1(x)^p
            stack.append((pth_root(f, p), scale * p))
            continue
        c = gcd_poly(f, d, p)
        w = divmod_(f, c, p)[0]
        i = 1
        while degree(w) > 0:
            y = gcd_poly(w, c, p)
            z = divmod_(w, y, p)[0]
            if degree(z) > 0:
                out.append((z, i * scale))
            c = divmod_(c, y, p)[0]
            w = y
            i += 1
        if degree(c) > 0:
            stack.append((c, scale))
    return out


def distinct_degree(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """[(product of irreducible factors of degree d, d)] for monic squarefree f."""
    out: list[tuple[list[int], int]] = []
    x = [0, 1]
    frob = pow_mod(x, p, f, p)  # x^p mod f
    h = frob
    d = 1
    rest = f
    while degree(rest) >= 2 * d:
        sub = h[:] + [0] * max(0, 2 - len(h))
        sub[1] = (sub[1] - 1) % p
        g = gcd_poly(rest, trim(sub), p)
        if degree(g) > 0:
            out.append((g, d))
            rest = divmod_(rest, g, p)[0]
            h = mod(h, rest, p)
            frob = mod(frob, rest, p)
        d += 1
        if degree(rest) < 2 * d:
            break
        h = compose_mod(h, frob, rest, p)
    if degree(rest) > 0:
        out.append((rest, degree(rest)))
    return out


def equal_degree(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus split of monic squarefree f whose irreducible
    factors all have degree d."""
    n = degree(f)
    if n == d:
        return [f]
    if p == 2:
        return _equal_degree_gf2(f, d, rng)
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = trim(a)
        if degree(a) < 1:
            continue
        g = gcd_poly(f, a, p)
        if 0 < degree(g) < n:
            break
        b = pow_mod(a, (p ** d - 1) // 2, f, p)
        b = b[:] if b else [0]
        b[0] = (b[0] - 1) % p
        g = gcd_poly(f, trim(b), p)
        if 0 < degree(g) < n:
            break
    left = equal_degree(g, d, p, rng)
    right = equal_degree(divmod_(f, g, p)[0], d, p, rng)
    return left + right


def _equal_degree_gf2(f: list[int], d: int, rng: random.Random) -> list[list[int]]:
    """GF(2) variant using trace maps a + a^2 + ... + a^(2^(d-1))."""
    n = degree(f)
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(2) for _ in range(n)])
        if degree(a) < 1:
            continue
        t = a
        acc = a
        for _ in range(d - 1):
            t = mod(mul(t, t, 2), f, 2)
            acc = trim([(x + y) % 2 for x, y in
                        zip(acc + [0] * len(t), t + [0] * len(acc))])
        g = gcd_poly(f, acc, 2)
        if 0 < degree(g) < n:
            break
    return _equal_degree_gf2(g, d, rng) + _equal_degree_gf2(divmod_(f, g, 2)[0], d, rng)


def factor(coeffs, p: int) -> list[tuple[list[int], int]]:
    """Full factorization of a nonzero polynomial over GF(p).

    Returns [(monic irreducible factor, multiplicity)] sorted by (degree,
    coefficients); the leading coefficient is dropped (only monic parts are
    reported).  Deterministic: the equal-degree stage is seeded from (p, f).
    """
    f = normalize(coeffs, p)
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    if degree(f) == 0:
        return []
    f = monic(f, p)
    seed = p
    for c in f:
        seed = (seed * 1000003 + c) % (1 << 61)
    rng = random.Random(seed)
    out: list[tuple[list[int], int]] = []
    for part, mult in squarefree_decomposition(f, p):
        for prod, d in distinct_degree(part, p):
            for irred in equal_degree(prod, d, p, rng):
                out.append((irred, mult))
    out.sort(key=lambda t: (degree(t[0]), t[0][::-1]))
    return out
