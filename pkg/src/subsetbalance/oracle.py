"""Brute-force ground truth at desk scale (n <= ~15).

Everything here enumerates exhaustively; the module's value is being
obviously correct, so there is no pruning. Vector enumeration is
lexicographic with larger coefficients first, which fixes every tie
deterministically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .core import (
    CoefficientSet,
    Combine,
    GuardExceeded,
    Instance,
    SetKind,
    Solution,
    SolverReport,
)

ENUM_GUARD = 10**8
_CHUNK = 1 << 20  # tail-block size for the vectorized scan


@dataclass(frozen=True)
class PairFamily:
    """All (a, b) pairs with a o b = c over the declared per-index alphabets."""

    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    combine: Combine

    def __len__(self) -> int:
        return len(self.pairs)

    def left_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(a for a, _ in self.pairs)


def _alphabet(coeff_set: CoefficientSet) -> tuple[int, ...]:
    # larger coefficients first; it makes (1, 1) beat (-1, -1) in ties
    return tuple(sorted(coeff_set.values(), reverse=True))


class _Scan:
    """Chunked enumeration of all sums c.x for c in C^n, in lex order.

    The last `k` coordinates are tabulated once as a numpy block; the
    leading coordinates are iterated at the Python level.
    """

    def __init__(self, inst: Instance):
        m = inst.coeff_set.cardinality()
        if m**inst.n > ENUM_GUARD:
            raise GuardExceeded(
                f"{m}^{inst.n} candidate vectors exceed the {ENUM_GUARD} guard"
            )
        self.inst = inst
        self.values = _alphabet(inst.coeff_set)
        self.m = m
        k = 0
        while k < inst.n and m ** (k + 1) <= _CHUNK:
            k += 1
        self.k = k
        self.head_n = inst.n - k

        vals = np.array(self.values, dtype=np.int64)
        sums = np.zeros(1, dtype=np.int64)
        zeros = np.zeros(1, dtype=np.int16)
        for j in range(self.head_n, inst.n):
            contrib = vals * inst.x[j]
            sums = (sums[:, None] + contrib[None, :]).ravel()
            zeros = (zeros[:, None] + (vals == 0)[None, :].astype(np.int16)).ravel()
        self.tail_sums = sums
        self.tail_zeros = zeros

    def chunks(self) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
        """Yields (head values, tail sum block shifted by the head's sum)."""
        for head in itertools.product(self.values, repeat=self.head_n):
            base = sum(h * xi for h, xi in zip(head, self.inst.x))
            yield head, self.tail_sums + base

    def decode_tail(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            idx, digit = divmod(idx, self.m)
            out.append(self.values[digit])
        return tuple(reversed(out))

    def zero_vector_tail_index(self) -> Optional[int]:
        if 0 not in self.values:
            return None
        pos = self.values.index(0)
        return sum(pos * self.m**j for j in range(self.k))


def brute_force_solve(inst: Instance) -> SolverReport:
    """Exhaustive search; Solved with the lexicographically-first solution."""
    scan = _Scan(inst)
    zero_tail = scan.zero_vector_tail_index()
    zero_head = (0,) * scan.head_n
    for head, block in scan.chunks():
        hits = np.flatnonzero(block == 0)
        for idx in hits:
            if zero_tail is not None and head == zero_head and idx == zero_tail:
                continue
            c = head + scan.decode_tail(int(idx))
            return SolverReport.solved(inst, c, searched=scan.m**inst.n)
    return SolverReport.not_found(searched=scan.m**inst.n)


def count_solutions(inst: Instance) -> int:
    """Exact number of nonzero c in C^n with c.x = 0."""
    scan = _Scan(inst)
    total = 0
    for _, block in scan.chunks():
        total += int(np.count_nonzero(block == 0))
    if inst.coeff_set.kind is SetKind.FULL_RANGE:
        total -= 1  # the zero vector always lands on 0
    return total


def min_support_solution(inst: Instance) -> Optional[Solution]:
    """A solution maximizing the number of zero coefficients, or None.

    Ties go to the lexicographically-first vector.
    """
    scan = _Scan(inst)
    zero_tail = scan.zero_vector_tail_index()
    zero_head = (0,) * scan.head_n
    best: Optional[tuple[int, tuple[int, ...]]] = None  # (zeros, c)
    for head, block in scan.chunks():
        hits = np.flatnonzero(block == 0)
        if hits.size == 0:
            continue
        head_zeros = sum(1 for h in head if h == 0)
        for idx in hits:
            if zero_tail is not None and head == zero_head and idx == zero_tail:
                continue
            zeros = head_zeros + int(scan.tail_zeros[idx])
            if best is None or zeros > best[0]:
                best = (zeros, head + scan.decode_tail(int(idx)))
    return Solution(best[1]) if best else None


def _normalize_alphabets(alphabets, n: int) -> list[tuple[int, ...]]:
    seq = list(alphabets)
    if seq and isinstance(seq[0], int):
        return [tuple(seq)] * n
    out = [tuple(a) for a in seq]
    if len(out) != n:
        raise ValueError(f"expected {n} per-index alphabets, got {len(out)}")
    return out


def enumerate_pairs(
    c: Sequence[int],
    left_alphabets,
    right_alphabets,
    combine: Combine,
) -> PairFamily:
    """All pairs (a, b) with a_i, b_i drawn from the per-index alphabets and
    a_i - b_i = c_i (or a_i + b_i = c_i for the shifted variant).

    Alphabets may be one flat list (applied at every index) or one list per
    index, which supports split products like C1^(n/2) x C2^(n/2).
    """
    n = len(c)
    lefts = _normalize_alphabets(left_alphabets, n)
    rights = _normalize_alphabets(right_alphabets, n)
    per_index: list[list[tuple[int, int]]] = []
    total = 1
    for i in range(n):
        if combine is Combine.DIFFERENCE:
            opts = [(a, b) for a in lefts[i] for b in rights[i] if a - b == c[i]]
        else:
            opts = [(a, b) for a in lefts[i] for b in rights[i] if a + b == c[i]]
        per_index.append(opts)
        total *= len(opts)
        if total > ENUM_GUARD:
            raise GuardExceeded(f"pair family larger than {ENUM_GUARD}")
    if total == 0:
        return PairFamily((), combine)
    pairs = tuple(
        (tuple(a for a, _ in choice), tuple(b for _, b in choice))
        for choice in itertools.product(*per_index)
    )
    return PairFamily(pairs, combine)


def brute_force_compatible_pair(
    A: Sequence[Sequence[int]],
    B: Sequence[Sequence[int]],
    band: CoefficientSet,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Quadratic scan for the first (a, b) with a - b entrywise in `band`."""
    dims = {len(v) for v in itertools.chain(A, B)}
    if len(dims) > 1:
        raise ValueError(f"mixed vector dimensions {sorted(dims)}")
    for a in A:
        for b in B:
            if all((ai - bi) in band for ai, bi in zip(a, b)):
                return tuple(a), tuple(b)
    return None
