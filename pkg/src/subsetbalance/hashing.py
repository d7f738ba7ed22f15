"""Prime-residue filtering machinery: prime sampling, the residue-class
dynamic program with output-linear backtracking, and empirical statistics
for the good-residue-class behaviour the filtering relies on."""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .core import GuardExceeded

SATURATION = 2**63 - 1
DP_OPS_GUARD = 10**8

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all 64-bit integers."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        v = pow(a, d, n)
        if v in (1, n - 1):
            continue
        for _ in range(s - 1):
            v = v * v % n
            if v == n - 1:
                break
        else:
            return False
    return True


def sample_prime(p_max: int, rng: random.Random) -> int:
    """A prime drawn from [p_max, 2*p_max] by rejection sampling.

    Bertrand's postulate guarantees one exists for every p_max >= 2.
    """
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    while True:
        candidate = rng.randint(p_max, 2 * p_max)
        if is_prime_u64(candidate):
            return candidate


@dataclass
class CapExceeded:
    """Residue-class enumeration halted after `cap` emissions (a result,
    not an error: the round is retried with fresh randomness)."""

    cap: int


def residue_cap(n: int, product_size: int, p_max: int) -> int:
    """Enumeration budget 8*n^2*(product/p_max): polynomial slack over the
    expected residue-class size, so a bad residue cannot blow up a round."""
    return max(1, (8 * n * n * product_size) // max(1, p_max))


@dataclass
class ResidueDP:
    """table[i][j] = number of prefixes v in alphabet_1 x..x alphabet_i with
    sum(v_k * x_k) = j (mod p). Row 0 is the empty prefix. Counts saturate
    at 2^63 - 1 (flagged); backtracking only needs nonzero-ness.

    p = 1 degenerates to the unfiltered product space (all sums = 0 mod 1).
    """

    p: int
    x: tuple[int, ...]
    alphabets: tuple[tuple[int, ...], ...]
    table: list[list[int]] = field(repr=False)
    saturated: bool = False

    @property
    def n(self) -> int:
        return len(self.x)

    def product_size(self) -> int:
        out = 1
        for a in self.alphabets:
            out *= len(a)
        return out


def build_dp(x: Sequence[int], alphabets, p: int) -> ResidueDP:
    """Fill the (n+1) x p counting table; row i is derived from row i-1 with
    |alphabet_i| shifted adds."""
    x = tuple(int(v) for v in x)
    n = len(x)
    if isinstance(alphabets[0], int):
        alphabets = [tuple(alphabets)] * n
    alphabets = tuple(tuple(a) for a in alphabets)
    if len(alphabets) != n:
        raise ValueError(f"expected {n} alphabets, got {len(alphabets)}")
    if p < 1:
        raise ValueError("modulus must be >= 1")
    ops = sum(p * len(a) for a in alphabets)
    if ops > DP_OPS_GUARD:
        raise GuardExceeded(f"DP would take {ops} > {DP_OPS_GUARD} cell updates")

    saturated = False
    row = [0] * p
    row[0] = 1
    table = [row]
    for i in range(n):
        prev = table[-1]
        nxt = [0] * p
        for z in alphabets[i]:
            shift = (z * x[i]) % p
            for j in range(p):
                src = prev[j]
                if src:
                    t = j + shift
                    if t >= p:
                        t -= p
                    total = nxt[t] + src
                    if total > SATURATION:
                        total = SATURATION
                        saturated = True
                    nxt[t] = total
        table.append(nxt)
    return ResidueDP(p, x, alphabets, table, saturated)


def enumerate_residue_class(
    dp: ResidueDP, r: int, cap: Optional[int] = None
) -> Union[list[tuple[int, ...]], CapExceeded]:
    """Exactly the table[n][r] vectors, by backtracking; output-linear.

    Returns CapExceeded instead of a list if more than `cap` vectors exist.
    """
    if not 0 <= r < dp.p:
        raise ValueError(f"residue {r} outside [0, {dp.p})")
    out: list[tuple[int, ...]] = []

    def walk(i: int, j: int, suffix: tuple[int, ...]) -> bool:
        if i == 0:
            if j == 0:
                if cap is not None and len(out) >= cap:
                    return False
                out.append(suffix)
            return True
        prev = dp.table[i - 1]
        xi = dp.x[i - 1]
        for z in dp.alphabets[i - 1]:
            jp = (j - z * xi) % dp.p
            if prev[jp]:
                if not walk(i - 1, jp, (z,) + suffix):
                    return False
        return True

    if not walk(dp.n, r, ()):
        return CapExceeded(cap)
    return out


ENUM_ROWS_GUARD = 2_000_000  # absolute frontier width for the array walker


def enumerate_residue_class_array(
    dp: ResidueDP, r: int, cap: Optional[int] = None
) -> Union[np.ndarray, CapExceeded]:
    """Vectorized equivalent of enumerate_residue_class returning an array.

    Walks the table back to front keeping a frontier of viable suffixes; the
    frontier never outgrows the final class size, so work and memory stay
    output-linear. Same CapExceeded contract (also applied at the absolute
    memory guard).
    """
    if not 0 <= r < dp.p:
        raise ValueError(f"residue {r} outside [0, {dp.p})")
    n = dp.n
    limit = ENUM_ROWS_GUARD if cap is None else min(cap, ENUM_ROWS_GUARD)
    res = np.asarray([r], dtype=np.int64)
    digits = np.zeros((1, n), dtype=np.int64)
    for i in range(n, 0, -1):
        row = np.asarray(dp.table[i - 1], dtype=np.int64)
        alpha = np.asarray(dp.alphabets[i - 1], dtype=np.int64)
        prev = (res[:, None] - alpha[None, :] * dp.x[i - 1]) % dp.p
        ok = row[prev] > 0
        width = int(np.count_nonzero(ok))
        if width > limit:
            return CapExceeded(cap if cap is not None else limit)
        sel_state, sel_alpha = np.nonzero(ok)
        digits = digits[sel_state]
        digits[:, i - 1] = alpha[sel_alpha]
        res = prev[sel_state, sel_alpha]
    return digits


@dataclass
class ConstrainedResidueDP:
    """Residue DP over the alphabet {0, 1, 2} with two extra state
    dimensions: ones used and twos used. rows[i][j, o, t] counts prefixes of
    length i with residue j, o ones and t twos."""

    p: int
    x: tuple[int, ...]
    ones: int
    twos: int
    rows: list[np.ndarray] = field(repr=False)
    saturated: bool = False

    @property
    def n(self) -> int:
        return len(self.x)

    def class_size(self, r: int) -> int:
        return int(self.rows[self.n][r, self.ones, self.twos])


def build_constrained_dp(
    x: Sequence[int], p: int, ones: int, twos: int
) -> ConstrainedResidueDP:
    """Counting table for {v in [0:2]^n : |v^-1(1)| = ones, |v^-1(2)| = twos,
    v.x = j (mod p)}, one row per prefix length."""
    x = tuple(int(v) for v in x)
    n = len(x)
    if p < 1:
        raise ValueError("modulus must be >= 1")
    cells = (n + 1) * p * (ones + 2) * (twos + 2)
    if cells * 3 > DP_OPS_GUARD:
        raise GuardExceeded(f"constrained DP needs {cells} cells")

    shape = (p, ones + 1, twos + 1)
    row = np.zeros(shape, dtype=np.int64)
    row[0, 0, 0] = 1
    rows = [row]
    saturated = False
    # clamp below int64_max/3 so the three-way add can never wrap
    np_sat = 1 << 61
    for i in range(n):
        prev = rows[-1]
        nxt = prev.copy()  # digit 0: same residue, same counts
        s1 = x[i] % p
        s2 = (2 * x[i]) % p
        nxt[:, 1:, :] += np.roll(prev, s1, axis=0)[:, :-1, :]
        nxt[:, :, 1:] += np.roll(prev, s2, axis=0)[:, :, :-1]
        if nxt.max(initial=0) > np_sat:
            nxt = np.minimum(nxt, np_sat)
            saturated = True
        rows.append(nxt)
    return ConstrainedResidueDP(p, x, ones, twos, rows, saturated)


def enumerate_constrained_class(
    dp: ConstrainedResidueDP, r: int, cap: Optional[int] = None
) -> Union[list[tuple[int, ...]], CapExceeded]:
    """Backtracking enumeration of one residue class of the constrained DP."""
    if not 0 <= r < dp.p:
        raise ValueError(f"residue {r} outside [0, {dp.p})")
    out: list[tuple[int, ...]] = []

    def walk(i: int, j: int, o: int, t: int, suffix: tuple[int, ...]) -> bool:
        if i == 0:
            if j == 0 and o == 0 and t == 0:
                if cap is not None and len(out) >= cap:
                    return False
                out.append(suffix)
            return True
        prev = dp.rows[i - 1]
        xi = dp.x[i - 1]
        for z in (0, 1, 2):
            oo = o - (z == 1)
            tt = t - (z == 2)
            if oo < 0 or tt < 0:
                continue
            jp = (j - z * xi) % dp.p
            if prev[jp, oo, tt]:
                if not walk(i - 1, jp, oo, tt, (z,) + suffix):
                    return False
        return True

    if not walk(dp.n, r, dp.ones, dp.twos, ()):
        return CapExceeded(cap)
    return out


@dataclass
class GoodResidueStats:
    """Per-trial measurements of how well random primes spread a sum list."""

    primes: list[int]
    fractions: list[float]
    colliding_pairs: list[int]

    @property
    def median_fraction(self) -> float:
        return statistics.median(self.fractions)


def good_residue_fraction(
    G: Sequence[int],
    Y: Sequence[int],
    p_max: int,
    trials: int,
    rng: random.Random,
    slack: Optional[float] = None,
) -> GoodResidueStats:
    """Empirical check of the good-residue-class behaviour.

    For each sampled prime p, a residue r is good when it holds at least
    |G|/(4*p_max) elements of G and at most slack * |Y|/p_max elements of Y.
    `slack` stands in for the analysis' polynomial factor; it defaults to the
    bit length of diam(G). Also reports ordered colliding-pair counts
    (g1 != g2 with p | g1 - g2).
    """
    g = np.asarray(sorted(G), dtype=np.int64)
    y = np.asarray(sorted(Y), dtype=np.int64)
    gi, yi = 0, 0
    while gi < len(g):  # multiset containment G <= Y
        if yi >= len(y):
            raise ValueError("G must be a sub-multiset of Y")
        if g[gi] == y[yi]:
            gi += 1
        yi += 1
    if slack is None:
        diam = int(g.max() - g.min()) if len(g) > 1 else 1
        slack = float(max(2, diam).bit_length())

    g_thresh = len(g) / (4 * p_max)
    primes, fractions, collisions = [], [], []
    for _ in range(trials):
        p = sample_prime(p_max, rng)
        gc = np.bincount(g % p, minlength=p)
        yc = np.bincount(y % p, minlength=p)
        good = (gc >= g_thresh) & (yc <= slack * len(y) / p_max)
        primes.append(p)
        fractions.append(float(np.count_nonzero(good)) / p)
        collisions.append(int((gc.astype(np.int64) * (gc - 1)).sum()))
    return GoodResidueStats(primes, fractions, collisions)
