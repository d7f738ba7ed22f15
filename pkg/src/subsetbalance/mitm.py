"""Classic Meet-in-the-Middle and the profile-restricted variant for
unbalanced solutions (random equal index partitions, multiset-permutation
half lists, sorted-list matching)."""

from __future__ import annotations

import enum
import functools
import math
import random
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional, Sequence

import numpy as np

from .core import (
    CoefficientSet,
    Combine,
    GuardExceeded,
    Instance,
    SolutionProfile,
    SolverReport,
)

LIST_GUARD = 4_000_000  # max entries per enumerated half list


class Half(enum.Enum):
    A = "A"
    B = "B"


@dataclass
class SumList:
    """Entries (sum, payload) sorted ascending by sum; payloads are opaque
    handles that reconstruct their coefficient vectors."""

    entries: list[tuple[int, Any]]

    @staticmethod
    def from_pairs(pairs) -> "SumList":
        return SumList(sorted(pairs, key=lambda e: e[0]))

    def is_sorted(self) -> bool:
        e = self.entries
        return all(e[i][0] <= e[i + 1][0] for i in range(len(e) - 1))

    def __len__(self) -> int:
        return len(self.entries)


def meet(
    L: SumList,
    R: SumList,
    combine: Combine,
    target: int = 0,
    accept: Optional[Callable[[Any, Any], bool]] = None,
) -> Optional[tuple[Any, Any]]:
    """Two-pointer scan of two sorted sum lists.

    Returns the first payload pair whose combined sum (l + r or l - r)
    equals `target` and passes `accept`, else None.
    """
    if not L.is_sorted() or not R.is_sorted():
        raise ValueError("meet requires sorted inputs")
    left = L.entries
    # For SUM we need l = target - r, which ascends as r descends.
    right = R.entries if combine is Combine.DIFFERENCE else R.entries[::-1]

    i = j = 0
    while i < len(left) and j < len(right):
        ls = left[i][0]
        rs = right[j][0]
        want = target + rs if combine is Combine.DIFFERENCE else target - rs
        if ls < want:
            i += 1
        elif ls > want:
            j += 1
        else:
            gi = i
            while gi < len(left) and left[gi][0] == ls:
                gi += 1
            gj = j
            while gj < len(right) and right[gj][0] == rs:
                gj += 1
            for li in range(i, gi):
                for rj in range(j, gj):
                    lp, rp = left[li][1], right[rj][1]
                    if accept is None or accept(lp, rp):
                        return lp, rp
            i, j = gi, gj
    return None


def _half_counts(profile: SolutionProfile) -> tuple[dict[int, int], dict[int, int]]:
    """Split pi into two half profiles: A gets ceil(pi(z)/2) per coefficient,
    decremented in fixed (ascending) order until |A| = ceil(n/2). Both halves
    derive deterministically from (pi, n)."""
    n = profile.n
    budget_a = (n + 1) // 2
    counts = profile.as_dict()
    a = {z: (c + 1) // 2 for z, c in counts.items()}
    excess = sum(a.values()) - budget_a
    for z in sorted(a):
        while excess > 0 and a[z] > counts[z] // 2:
            a[z] -= 1
            excess -= 1
    b = {z: counts[z] - a[z] for z in counts}
    return a, b


def half_size(profile: SolutionProfile, half: Half) -> int:
    """Number of vectors enumerate_S yields (a multinomial coefficient)."""
    a, b = _half_counts(profile)
    counts = a if half is Half.A else b
    total = sum(counts.values())
    out = math.factorial(total)
    for c in counts.values():
        out //= math.factorial(c)
    return out


def enumerate_S(
    coeff_set: CoefficientSet, profile: SolutionProfile, half: Half
) -> Iterator[tuple[int, ...]]:
    """The multiset-permutation family of one half profile, in lexicographic
    order (coefficients ascending)."""
    if profile.coeff_set != coeff_set:
        raise ValueError("profile does not match the coefficient set")
    a, b = _half_counts(profile)
    counts = a if half is Half.A else b
    active = {z: c for z, c in counts.items() if c > 0}
    length = sum(active.values())

    def walk(remaining: dict[int, int], depth: int, prefix: tuple[int, ...]):
        if depth == length:
            yield prefix
            return
        for z in sorted(remaining):
            if remaining[z] > 0:
                remaining[z] -= 1
                yield from walk(remaining, depth + 1, prefix + (z,))
                remaining[z] += 1

    yield from walk(active, 0, ())


def _product_rows(values: Sequence[int], k: int) -> np.ndarray:
    """All length-k tuples over `values` as an array, lexicographic order."""
    m = len(values)
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    out = np.empty((m**k, k), dtype=np.int64)
    vals = np.asarray(values, dtype=np.int64)
    for j in range(k):
        reps = m ** (k - 1 - j)
        out[:, j] = np.tile(np.repeat(vals, reps), m**j)
    return out


_POOL_GUARD = 500_000


@functools.lru_cache(maxsize=32)
def _half_pool(values: tuple[int, ...], k: int):
    """All length-k vectors over `values`, grouped by profile.

    Returns (rows, index) where index maps a count tuple (aligned with
    `values`) to the slice of row numbers having that profile. Shared across
    profiles, rounds and instances; the pool depends only on (C, k).
    """
    rows = _product_rows(values, k)
    counts = np.stack([(rows == v).sum(axis=1) for v in values], axis=1)
    keys, inverse = np.unique(counts, axis=0, return_inverse=True)
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(len(keys) + 1))
    index = {
        tuple(int(v) for v in keys[i]): order[bounds[i]:bounds[i + 1]]
        for i in range(len(keys))
    }
    return rows, index


def _profile_rows(values: tuple[int, ...], counts: dict[int, int]) -> np.ndarray:
    k = sum(counts.values())
    if len(values) ** k > _POOL_GUARD:  # avoid huge pools; enumerate directly
        rows = list(_multiset_rows(counts))
        return np.asarray(rows, dtype=np.int64).reshape(len(rows), k)
    rows, index = _half_pool(values, k)
    key = tuple(counts.get(v, 0) for v in values)
    sel = index.get(key)
    if sel is None:
        return np.zeros((0, k), dtype=np.int64)
    return rows[sel]


def _multiset_rows(counts: dict[int, int]) -> Iterator[tuple[int, ...]]:
    active = {z: c for z, c in counts.items() if c > 0}
    length = sum(active.values())

    def walk(depth: int, prefix: tuple[int, ...]):
        if depth == length:
            yield prefix
            return
        for z in sorted(active):
            if active[z] > 0:
                active[z] -= 1
                yield from walk(depth + 1, prefix + (z,))
                active[z] += 1

    yield from walk(0, ())


def classic_mitm(inst: Instance) -> SolverReport:
    """Deterministic Meet-in-the-Middle over a fixed first/second half split.

    Complete: Solved iff the instance has a solution.
    """
    n = inst.n
    m = inst.coeff_set.cardinality()
    ha = (n + 1) // 2
    if m**ha > LIST_GUARD:
        raise GuardExceeded(f"{m}^{ha} half vectors exceed the list guard")
    values = tuple(sorted(inst.coeff_set.values(), reverse=True))
    xa = np.asarray(inst.x[:ha], dtype=np.int64)
    xb = np.asarray(inst.x[ha:], dtype=np.int64)
    rows_a = _product_rows(values, ha)
    rows_b = _product_rows(values, n - ha)
    sums_a = rows_a @ xa if ha else np.zeros(1, dtype=np.int64)
    sums_b = rows_b @ xb if n - ha else np.zeros(1, dtype=np.int64)

    L = SumList.from_pairs((int(s), i) for i, s in enumerate(sums_a))
    R = SumList.from_pairs((int(s), i) for i, s in enumerate(sums_b))

    def nonzero(ai: int, bi: int) -> bool:
        return bool(rows_a[ai].any() or rows_b[bi].any())

    hit = meet(L, R, Combine.SUM, 0, accept=nonzero)
    stats = {"list_size": len(L), "half": ha}
    if hit is None:
        return SolverReport.not_found(**stats)
    ai, bi = hit
    c = tuple(int(v) for v in rows_a[ai]) + tuple(int(v) for v in rows_b[bi])
    return SolverReport.solved(inst, c, **stats)


def default_repeats(n: int) -> int:
    # poly(n) amplification for the n^-O(|C|) per-round hit probability
    return 50 * n * n


def unbalanced_sb(
    inst: Instance,
    profile: SolutionProfile,
    rng: random.Random,
    repeats: Optional[int] = None,
) -> SolverReport:
    """Search for a solution matching `profile` via random equal partitions.

    Each round partitions the indices, enumerates the two half-profile
    multiset-permutation lists, and matches sorted weighted sums. Solutions
    are verified before being returned, so misses only ever yield
    NoSolutionFound.
    """
    if profile.n != inst.n:
        raise ValueError("profile does not match instance size")
    n = inst.n
    if repeats is None:
        repeats = default_repeats(n)
    if all(cnt == 0 for z, cnt in profile.as_dict().items() if z != 0):
        return SolverReport.not_found(rounds=0)  # only the zero vector matches

    for half in (Half.A, Half.B):
        if half_size(profile, half) > LIST_GUARD:
            raise GuardExceeded("half-profile list exceeds the guard")
    counts_a, counts_b = _half_counts(profile)
    values = inst.coeff_set.values()
    rows_a = _profile_rows(values, counts_a)
    rows_b = _profile_rows(values, counts_b)
    ha = rows_a.shape[1]
    x = np.asarray(inst.x, dtype=np.int64)
    idx = list(range(n))

    for round_no in range(repeats):
        picked = sorted(rng.sample(idx, ha))
        rest = sorted(set(idx) - set(picked))
        sums_a = rows_a @ x[picked]
        sums_b = rows_b @ x[rest]
        common, ia, ib = np.intersect1d(sums_a, -sums_b, return_indices=True)
        if common.size == 0:
            continue
        ai, bi = int(ia[0]), int(ib[0])
        c = [0] * n
        for pos, v in zip(picked, rows_a[ai]):
            c[pos] = int(v)
        for pos, v in zip(rest, rows_b[bi]):
            c[pos] = int(v)
        return SolverReport.solved(
            inst, c, rounds=round_no + 1,
            list_size_a=len(rows_a), list_size_b=len(rows_b),
        )
    return SolverReport.not_found(
        rounds=repeats, list_size_a=len(rows_a), list_size_b=len(rows_b)
    )
