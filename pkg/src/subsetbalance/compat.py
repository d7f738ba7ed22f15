"""Near-linear compatible-pair recovery for lists of [0:2]^d vectors with
fixed 1- and 2-counts: sample per-block certificate families, classify each
vector's block patterns against them, and match certificate tuples between
the two lists. A matched tuple proves a - b has no +-2 entry; every hit is
re-verified entrywise anyway, so the test is unconditionally sound."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import GuardExceeded

AUX_TABLE_GUARD = 5_000_000


def _h(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def c_certificate(eps: float) -> float:
    """Per-dimension exponent of the certificate-matching overhead, as a
    function of the fraction of 2-entries (without the vanishing term)."""
    if not 0 <= eps <= 0.25:
        raise ValueError(f"eps must be in [0, 1/4], got {eps}")
    return (
        (1 - eps) * _h(eps / (1 - eps))
        + (0.5 + eps) * _h(4 * eps / (1 + 2 * eps))
        - _h(2 * eps)
    )


def c0_exponent(eps: float, lam: float, K: float) -> float:
    """Candidate-tuple budget exponent for general certificate parameters
    (lambda, K); reduces to c_certificate at lambda = 2*eps, K = H(2*eps)."""
    if not eps <= lam <= 0.5 + eps:
        raise ValueError(f"lambda {lam} outside [{eps}, {0.5 + eps}]")
    return (
        _h((lam - eps) / (1 - eps)) * (1 - eps)
        + _h(lam / (0.5 + eps)) * (0.5 + eps)
        - 2 * _h(lam)
        + K
    )


def k_floor(eps: float, lam: float) -> float:
    """Smallest certificate-family exponent that keeps a compatible pair
    likely to own a shared certificate."""
    return 2 * _h(lam) - _h(2 * (lam - eps))


@dataclass(frozen=True)
class CertificateScheme:
    """A random block partition of [d] plus, per block, a family of
    (L, R) index-set pairs of size lambda*|U_i| drawn with replacement."""

    d: int
    eps: float
    ell: int
    blocks: tuple[tuple[int, ...], ...]
    lam: float     # effective lambda after integer rounding
    K: float       # includes the explicit slack standing in for o(1)
    certs: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)
    # per block: (Lmask, Rmask) over local positions, duplicates removed

    @property
    def block_size(self) -> int:
        return self.d // self.ell

    def cert_count(self, i: int) -> int:
        return len(self.certs[i])


def build_scheme(
    d: int, eps: float, ell: int, rng: random.Random
) -> CertificateScheme:
    """Draw a partition and the per-block certificate families.

    lambda = 2*eps rounded to an integral set size per block; K is the
    lemma floor plus a log2(d)/|U_i| slack.
    """
    if d % ell != 0:
        raise ValueError(f"block count {ell} must divide d = {d}")
    u = d // ell
    m = round(2 * eps * u)
    if eps > 0 and m == 0:
        raise ValueError(
            f"lambda*|U_i| rounds to 0 (eps={eps}, block={u}); "
            "use a larger d or ell = 1"
        )
    lam = m / u
    if not eps <= lam <= 0.5 + eps:
        raise ValueError(f"rounded lambda {lam} left [{eps}, {0.5 + eps}]")
    K = k_floor(eps, lam) + math.log2(max(2, d)) / u
    n_cert = math.ceil(2.0 ** (K * u))

    perm = rng.sample(range(d), d)
    blocks = tuple(
        tuple(sorted(perm[i * u:(i + 1) * u])) for i in range(ell)
    )
    certs = []
    for i in range(ell):
        local = list(range(u))
        seen: dict[tuple[int, int], None] = {}
        for _ in range(n_cert):
            lmask = sum(1 << pos for pos in rng.sample(local, m))
            rmask = sum(1 << pos for pos in rng.sample(local, m))
            seen.setdefault((lmask, rmask), None)
        certs.append(tuple(seen))
    return CertificateScheme(d, eps, ell, blocks, lam, K, tuple(certs))


class AuxSets:
    """Certificate classifications per block pattern.

    For a block pattern v, an A-certificate satisfies v^-1(2) within L and
    v^-1(0) disjoint from R; a B-certificate mirrors L and R. Lookups are
    classified on demand and memoized; `full_table` materializes every
    pattern of a block (guarded), which is only sensible for small blocks.
    """

    def __init__(self, scheme: CertificateScheme):
        self.scheme = scheme
        self._l = [np.asarray([c[0] for c in bc], dtype=np.int64)
                   for bc in scheme.certs]
        self._r = [np.asarray([c[1] for c in bc], dtype=np.int64)
                   for bc in scheme.certs]
        self._memo: dict[tuple[str, int, int, int], np.ndarray] = {}

    @staticmethod
    def _masks(block_pattern: Sequence[int]) -> tuple[int, int]:
        twos = zeros = 0
        for pos, v in enumerate(block_pattern):
            if v == 2:
                twos |= 1 << pos
            elif v == 0:
                zeros |= 1 << pos
        return twos, zeros

    def a_certs(self, i: int, block_pattern: Sequence[int]) -> np.ndarray:
        twos, zeros = self._masks(block_pattern)
        key = ("a", i, twos, zeros)
        hit = self._memo.get(key)
        if hit is None:
            hit = np.flatnonzero(
                ((twos & ~self._l[i]) == 0) & ((zeros & self._r[i]) == 0))
            self._memo[key] = hit
        return hit

    def b_certs(self, i: int, block_pattern: Sequence[int]) -> np.ndarray:
        twos, zeros = self._masks(block_pattern)
        key = ("b", i, twos, zeros)
        hit = self._memo.get(key)
        if hit is None:
            hit = np.flatnonzero(
                ((twos & ~self._r[i]) == 0) & ((zeros & self._l[i]) == 0))
            self._memo[key] = hit
        return hit

    def full_table(self, i: int, side: str = "a"):
        """Classify every pattern in [0:2]^block; patterns iterate in
        lexicographic order. Brute force by design."""
        u = self.scheme.block_size
        work = 3**u * self.scheme.cert_count(i)
        if work > AUX_TABLE_GUARD:
            raise GuardExceeded(f"aux table needs {work} checks")
        lookup = self.a_certs if side == "a" else self.b_certs
        return {
            pattern: lookup(i, pattern)
            for pattern in itertools.product((0, 1, 2), repeat=u)
        }


def build_aux_sets(scheme: CertificateScheme) -> AuxSets:
    return AuxSets(scheme)


def default_ell(d: int) -> int:
    if d <= 24:
        return 1
    for ell in range(2, d + 1):  # smallest divisor keeping blocks <= 24
        if d % ell == 0 and d // ell <= 24:
            return ell
    return d


def _block_patterns(
    scheme: CertificateScheme, v: Sequence[int]
) -> list[tuple[int, ...]]:
    return [tuple(v[j] for j in block) for block in scheme.blocks]


def _balanced_in_blocks(
    scheme: CertificateScheme, patterns: list[tuple[int, ...]],
    twos: int, ones: int,
) -> bool:
    t_per, o_per = twos // scheme.ell, ones // scheme.ell
    for pat in patterns:
        if pat.count(2) != t_per or pat.count(1) != o_per:
            return False
    return True


def compatibility_test(
    A: Sequence[Sequence[int]],
    B: Sequence[Sequence[int]],
    eps: float,
    rng: random.Random,
    repeats: int = 25,
    ell: Optional[int] = None,
    require_distinct: bool = False,
    stats: Optional[dict] = None,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Search A x B for a pair with a - b entrywise in [-1 : 1].

    Sound always (hits are verified); each round finds an existing pair with
    probability polynomial in 1/d, amplified by `repeats`. Vectors must all
    carry exactly eps*d 2-entries and d/2 1-entries.
    """
    if not A or not B:
        return None
    d = len(A[0])
    twos = round(eps * d)
    ones = d // 2
    if d % 2 != 0 or abs(eps * d - twos) > 1e-9:
        raise ValueError(f"eps*d and d/2 must be integral (d={d}, eps={eps})")
    for v in itertools.chain(A, B):
        if len(v) != d:
            raise ValueError("mixed vector dimensions")
        n2 = sum(1 for e in v if e == 2)
        n1 = sum(1 for e in v if e == 1)
        if n2 != twos or n1 != ones:
            raise ValueError(
                f"vector has {n2} twos / {n1} ones; expected {twos} / {ones}")
    if ell is None:
        ell = default_ell(d)
    counters = stats if stats is not None else {}
    counters.setdefault("rounds", 0)
    counters.setdefault("truncated", 0)
    counters.setdefault("balance_skips", 0)

    for _ in range(repeats):
        counters["rounds"] += 1
        scheme = build_scheme(d, eps, ell, rng)
        if twos % ell or ones % ell:
            # blocks cannot carry equal shares; only ell = 1 can succeed
            if ell != 1:
                continue
        aux = AuxSets(scheme)
        c0 = c0_exponent(eps, scheme.lam, scheme.K)
        budget = math.ceil(2.0 ** (c0 * d)) * 8 * d * d

        # two emitters per tuple so a self-join can still yield a distinct pair
        candidates: dict[tuple[int, ...], list[int]] = {}
        for a_idx, a in enumerate(A):
            pats = _block_patterns(scheme, a)
            if not _balanced_in_blocks(scheme, pats, twos, ones):
                counters["balance_skips"] += 1
                continue
            lists = [aux.a_certs(i, pats[i]) for i in range(ell)]
            if any(len(lst) == 0 for lst in lists):
                continue
            emitted = 0
            for tup in itertools.product(*lists):
                emitted += 1
                if emitted > budget:
                    counters["truncated"] += 1
                    break
                owners = candidates.setdefault(tup, [])
                if len(owners) < 2:
                    owners.append(a_idx)
        if not candidates:
            continue
        for b in B:
            pats = _block_patterns(scheme, b)
            if not _balanced_in_blocks(scheme, pats, twos, ones):
                counters["balance_skips"] += 1
                continue
            lists = [aux.b_certs(i, pats[i]) for i in range(ell)]
            if any(len(lst) == 0 for lst in lists):
                continue
            emitted = 0
            for tup in itertools.product(*lists):
                emitted += 1
                if emitted > budget:
                    counters["truncated"] += 1
                    break
                owners = candidates.get(tup)
                if not owners:
                    continue
                bb = tuple(b)
                for a_idx in owners:
                    a = tuple(A[a_idx])
                    if require_distinct and a == bb:
                        continue
                    if all(abs(ai - bi) <= 1 for ai, bi in zip(a, bb)):
                        return a, bb
    return None
