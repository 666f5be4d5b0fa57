"""Counting harness for N_loc(B), N_glob(B), N_ce(B) over a biquadratic field.

Rationals t = a/b are enumerated by height H(t) = max(|a|, b).  The
everywhere-local test is evaluated through per-integer tables: an SPF sieve
factors every numerator and denominator once, Hilbert symbols at the fixed
places (infinity, 2, p | ab) are cached per prime and folded into a bitmask
profile, and the remaining primes only need the parity of their exponent.
The global count comes from the exact half rule when the knot group is Z/2
generated by -1, from equality when the knot group is trivial, and from a
certificate-search lower bound otherwise.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith, biquad
from .arith import Place, INFINITE_PLACE
from .errors import ConfigError, DomainError

HALF_RULE = "half_rule"
TRIVIAL_KNOT = "trivial_knot"
SEARCH_LOWER_BOUND = "search_lower_bound"


def enumerate_heights(B: int):
    """Every nonzero rational of height <= B exactly once, both signs,
    ordered by denominator, then numerator, then sign."""
    if B < 1:
        raise DomainError("B must be >= 1")
    for b in range(1, B + 1):
        for a in range(1, B + 1):
            if math.gcd(a, b) == 1:
                yield Fraction(a, b)
                yield Fraction(-a, b)


@dataclass(frozen=True)
class GlobMode:
    kind: str
    cap: int | None = None
    unknowns: int | None = None


@dataclass(frozen=True)
class CountSeries:
    """Exact counts on an increasing grid of height bounds."""

    grid: tuple[int, ...]
    n_loc: tuple[int, ...]
    n_glob: tuple[int, ...]
    n_ce: tuple[int, ...]
    glob_mode: GlobMode

    def __post_init__(self):
        k = self.glob_mode.kind
        for i, (nl, ng, nc) in enumerate(zip(self.n_loc, self.n_glob, self.n_ce)):
            if nc != nl - ng:
                raise DomainError("n_ce must equal n_loc - n_glob")
            if i and (nl < self.n_loc[i - 1] or ng < self.n_glob[i - 1]):
                raise DomainError("counts must be nondecreasing along the grid")
            if k == HALF_RULE and (nl % 2 != 0 or ng * 2 != nl):
                raise DomainError("half rule requires n_glob = n_loc / 2 with n_loc even")
            if k == TRIVIAL_KNOT and ng != nl:
                raise DomainError("trivial knot requires n_glob = n_loc")

    def ratios(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(nc, nl) if nl else Fraction(0)
                     for nc, nl in zip(self.n_ce, self.n_loc))


@dataclass(frozen=True)
class FitResult:
    c_hat: float
    e_hat: float
    residual: float


@dataclass(frozen=True)
class LocalTables:
    """Per-integer data for 1..B: `ok[n]` says no non-split prime outside the
    fixed places divides n to odd order; `profile[n]` packs the Hilbert-symbol
    bits of n at the fixed places; `p_minus` is the profile of -1."""

    bound: int
    ok: np.ndarray
    profile: np.ndarray
    p_minus: int
    bit_places: tuple[tuple[Place, int], ...]  # (place, symbol argument) per bit

    def passes(self, t: Fraction) -> bool:
        """Everywhere-local test for t with H(t) <= bound, via the tables."""
        a, b = abs(t.numerator), t.denominator
        if not (self.ok[a] and self.ok[b]):
            return False
        x = int(self.profile[a]) ^ int(self.profile[b])
        return x == (self.p_minus if t < 0 else 0)


def local_tables(F: biquad.BiquadField, B: int) -> LocalTables:
    if B < 1:
        raise DomainError("B must be >= 1")
    bit_places: list[tuple[Place, int]] = []
    for v, lt in biquad.local_survey(F):
        if lt.kind == biquad.QUADRATIC:
            bit_places.append((v, lt.d))
        elif lt.kind == biquad.BIQUADRATIC:
            bit_places.append((v, F.a))
            bit_places.append((v, F.b))
    spf = arith.spf_table(B) if B >= 2 else np.zeros(2, dtype=np.int64)
    profile = np.zeros(B + 1, dtype=np.int32)
    ok = np.ones(B + 1, dtype=bool)
    prime_bits: dict[int, int] = {}
    prime_good: dict[int, bool] = {}
    ram = F.ramified_support
    for n in range(2, B + 1):
        p = int(spf[n])
        bits = prime_bits.get(p)
        if bits is None:
            bits = 0
            for k, (v, d) in enumerate(bit_places):
                if arith.hilbert(p, d, v) == -1:
                    bits |= 1 << k
            prime_bits[p] = bits
        profile[n] = profile[n // p] ^ bits
        # parity condition at the movable primes: strip p entirely, then
        # require even exponent unless p splits in all three subfields
        e = 0
        m = n
        while m % p == 0:
            m //= p
            e += 1
        okn = bool(ok[m])
        if okn and p not in ram and e % 2:
            good = prime_good.get(p)
            if good is None:
                good = arith.kronecker(F.a, p) == 1 and arith.kronecker(F.b, p) == 1
                prime_good[p] = good
            okn = good
        ok[n] = okn
    p_minus = 0
    for k, (v, d) in enumerate(bit_places):
        if arith.hilbert(-1, d, v) == -1:
            p_minus |= 1 << k
    return LocalTables(B, ok, profile, p_minus, tuple(bit_places))


def _doubling_grid(B: int, levels: int | None) -> list[int]:
    if B < 1:
        raise DomainError("B must be >= 1")
    if levels is None:
        levels = B.bit_length()
    return sorted({max(1, B >> k) for k in range(levels)})


def _count_rows(cls: np.ndarray, spf: np.ndarray, b_lo: int, b_hi: int,
                grid: list[int], p_minus: int) -> np.ndarray:
    """n_loc contributions of denominators b in [b_lo, b_hi); cls[n-1] is the
    profile of n or -1 when a bad prime divides n to odd order."""
    B = len(cls)
    totals = np.zeros(len(grid), dtype=np.int64)
    valid = cls >= 0
    for b in range(b_lo, b_hi):
        cb = cls[b - 1]
        if cb < 0:
            continue
        mask = np.ones(B, dtype=bool)
        m = b
        while m > 1:
            p = int(spf[m])
            mask[p - 1::p] = False
            while m % p == 0:
                m //= p
        x = cls ^ cb
        base = valid & mask
        w = (base & (x == 0)).astype(np.int64)
        if p_minus == 0:
            w += w
        else:
            w += base & (x == p_minus)
        cum = np.cumsum(w)
        for gi, Bi in enumerate(grid):
            if b <= Bi:
                totals[gi] += cum[Bi - 1]
    return totals


def _n_loc_series(grid: list[int], tables: LocalTables,
                  workers: int = 1) -> list[int]:
    B = grid[-1]
    cls = np.where(tables.ok[1:B + 1], tables.profile[1:B + 1], -1).astype(np.int32)
    spf = arith.spf_table(B) if B >= 2 else np.zeros(2, dtype=np.int64)
    if workers <= 1:
        totals = _count_rows(cls, spf, 1, B + 1, grid, tables.p_minus)
    else:
        bounds = [1 + (B * k) // workers for k in range(workers + 1)]
        bounds[-1] = B + 1
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_count_rows, cls, spf, lo, hi, grid, tables.p_minus)
                    for lo, hi in zip(bounds, bounds[1:])]
            totals = sum(f.result() for f in futs)
    return [int(x) for x in totals]


def count_series(F: biquad.BiquadField, B: int, levels: int | None = None, *,
                 minus_one_generates: bool = False, search_cap: int = 100,
                 workers: int = 1) -> CountSeries:
    """Exact N_loc, N_glob, N_ce on the doubling grid B/2^k.

    The global count mode follows the knot group: trivial knot means every
    everywhere-local element is global; knot group Z/2 generated by -1 gives
    the exact half rule (the height-preserving involution t <-> -t swaps the
    two knot classes); otherwise certificate search provides a lower bound
    with the unresolved count reported.  The search mode runs one search per
    everywhere-local element and is only practical at small bounds.
    """
    grid = _doubling_grid(B, levels)
    tables = local_tables(F, B)
    n_loc = _n_loc_series(grid, tables, workers=workers)
    g = biquad.knot_order(F)
    if g == 1:
        mode = GlobMode(TRIVIAL_KNOT)
        n_glob = list(n_loc)
    elif minus_one_generates:
        ok_minus_one, _ = biquad.is_everywhere_local_norm(F, -1)
        if not ok_minus_one:
            raise ConfigError("half rule requested but -1 is not everywhere local")
        mode = GlobMode(HALF_RULE)
        if any(nl % 2 for nl in n_loc):
            raise DomainError("n_loc is odd; the t <-> -t involution is broken")
        n_glob = [nl // 2 for nl in n_loc]
    else:
        resolved = np.zeros(len(grid), dtype=np.int64)
        unknowns = 0
        for t in enumerate_heights(B):
            if not tables.passes(t):
                continue
            cert = biquad.certificate_search(F, t, search_cap)
            if cert is None:
                unknowns += 1
                continue
            H = max(abs(t.numerator), t.denominator)
            for gi, Bi in enumerate(grid):
                if H <= Bi:
                    resolved[gi] += 1
        mode = GlobMode(SEARCH_LOWER_BOUND, cap=search_cap, unknowns=unknowns)
        n_glob = [int(x) for x in resolved]
    n_ce = [nl - ng for nl, ng in zip(n_loc, n_glob)]
    return CountSeries(tuple(grid), tuple(n_loc), tuple(n_glob), tuple(n_ce), mode)


def count_integer_norms_local(F: biquad.BiquadField, B: int,
                              levels: int | None = None) -> list[tuple[int, int]]:
    """Counts of positive integers n <= B_i that are everywhere-local norms;
    a cheaper single-variable diagnostic with the same exponent behavior."""
    grid = _doubling_grid(B, levels)
    tables = local_tables(F, B)
    passing = tables.ok[1:B + 1] & (tables.profile[1:B + 1] == 0)
    cum = np.cumsum(passing.astype(np.int64))
    return [(Bi, int(cum[Bi - 1])) for Bi in grid]


def fit_exponent(series: CountSeries, which: str = "loc") -> FitResult:
    """Least squares fit of log(count) = log c + 2 log B - e log log B over
    the grid points with B >= 32."""
    if which not in ("loc", "glob"):
        raise DomainError("which must be 'loc' or 'glob'")
    counts = series.n_loc if which == "loc" else series.n_glob
    pts = [(B, c) for B, c in zip(series.grid, counts) if B >= 32]
    if len(pts) < 4:
        raise DomainError("need at least 4 grid points with B >= 32")
    if any(c <= 0 for _, c in pts):
        raise DomainError("degenerate grid: zero counts cannot be log-fit")
    y = np.array([math.log(c) - 2 * math.log(B) for B, c in pts])
    X = np.column_stack([np.ones(len(pts)),
                         [-math.log(math.log(B)) for B, _ in pts]])
    coeffs, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coeffs
    return FitResult(c_hat=math.exp(coeffs[0]), e_hat=float(coeffs[1]),
                     residual=float(np.sqrt(np.mean(resid ** 2))))


def series_to_csv(series: CountSeries) -> str:
    """CSV with header B,n_loc,n_glob,n_ce,ratio_ce_loc; ratio to 6 places."""
    lines = ["B,n_loc,n_glob,n_ce,ratio_ce_loc"]
    for B, nl, ng, nc in zip(series.grid, series.n_loc, series.n_glob, series.n_ce):
        ratio = nc / nl if nl else 0.0
        lines.append(f"{B},{nl},{ng},{nc},{ratio:.6f}")
    return "\n".join(lines) + "\n"


def series_to_json(series: CountSeries, config_echo: dict | None = None) -> dict:
    mode: dict = {"kind": series.glob_mode.kind}
    if series.glob_mode.cap is not None:
        mode["cap"] = series.glob_mode.cap
    if series.glob_mode.unknowns is not None:
        mode["unknowns"] = series.glob_mode.unknowns
    rows = [
        {"B": B, "n_loc": nl, "n_glob": ng, "n_ce": nc,
         "ratio_ce_loc": round(nc / nl, 6) if nl else 0.0}
        for B, nl, ng, nc in zip(series.grid, series.n_loc, series.n_glob, series.n_ce)
    ]
    out = {"rows": rows, "glob_mode": mode}
    if config_echo is not None:
        out["config"] = config_echo
    return out
