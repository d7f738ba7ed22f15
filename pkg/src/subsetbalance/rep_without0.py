"""Coefficient-shifting solver for C = [+-d], d > 2: factor C as a sumset
C1 + C2, filter the two shifted product lists by complementary residue
classes, and match weighted sums. Also holds the many-solutions sampler the
mixing dichotomy falls back on, and the dispatcher for zero-free sets."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import hashing, mitm
from .core import (
    ALL,
    GuardExceeded,
    Instance,
    Outcome,
    SetKind,
    SolutionProfile,
    SolverReport,
    enumerate_profiles,
    is_eps_unbalanced,
    is_solution,
)
from .factors import catalog_entry
from .rep_with0 import routing_eps

SAMPLE_GUARD = 1 << 21


def representation_counts(
    coeff_set_values, c1: tuple[int, ...], c2: tuple[int, ...]
) -> dict[int, int]:
    """How many ways each coefficient z splits as z = a + b, a in C1, b in C2."""
    reps = {z: 0 for z in coeff_set_values}
    for a in c1:
        for b in c2:
            if a + b in reps:
                reps[a + b] += 1
    return reps


@dataclass(frozen=True)
class FactorPair:
    """A sumset factorization C1 + C2 = [+-d] with its filter strength.

    gamma is the per-element exponent margin on perfectly balanced profiles:
    how many bits per index the list-to-pair ratio beats |C|^(n/2) by.
    """

    d: int
    c1: tuple[int, ...]
    c2: tuple[int, ...]
    gamma: float

    def __post_init__(self) -> None:
        want = set(range(-self.d, self.d + 1)) - {0}
        sumset = {a + b for a in self.c1 for b in self.c2}
        if sumset != want:
            raise ValueError(
                f"C1 + C2 = {sorted(sumset)} but [+-{self.d}] needs "
                f"{sorted(want)}"
            )

    @property
    def coeff_values(self) -> tuple[int, ...]:
        return tuple(z for z in range(-self.d, self.d + 1) if z != 0)

    def reps(self) -> dict[int, int]:
        return representation_counts(self.coeff_values, self.c1, self.c2)

    def gamma_for(self, profile: SolutionProfile) -> float:
        """Filter exponent for an actual profile (floored at 0 by callers)."""
        reps = self.reps()
        n = profile.n
        size = 2 * self.d
        pair_bits = sum(
            cnt * math.log2(reps[z]) for z, cnt in profile.as_dict().items()
        ) / n
        return math.log2(size) / 2 - math.log2(len(self.c1) * len(self.c2)) / 2 \
            + pair_bits


def good_factors(d: int, variant: int = 0) -> FactorPair:
    """A catalog factor pair for [+-d]; variant 0 is the canonical
    {0,1} + ([-d:d-1] minus {-1,0})."""
    if d < 3:
        raise ValueError(f"good factors need d >= 3, got {d}")
    c1, c2, _bound = catalog_entry(d, variant)
    reps = representation_counts(
        tuple(z for z in range(-d, d + 1) if z != 0), c1, c2)
    if any(r == 0 for r in reps.values()):
        raise ValueError("factor pair leaves a coefficient unrepresentable")
    size = 2 * d
    gamma = math.log2(size) / 2 - math.log2(len(c1) * len(c2)) / 2 \
        + sum(math.log2(r) for r in reps.values()) / size
    return FactorPair(d, tuple(c1), tuple(c2), gamma)


def count_pairs_shifted(
    profile: SolutionProfile, c1: tuple[int, ...], c2: tuple[int, ...]
) -> int:
    """Exact |{(a, b) : a + b = c}| over the split products, as a product of
    per-coefficient representation counts."""
    reps = representation_counts(profile.coeff_set.values(), c1, c2)
    missing = [z for z, r in reps.items() if r == 0]
    if missing:
        raise ValueError(f"coefficients {missing} unrepresentable by factors")
    out = 1
    for z, cnt in profile.as_dict().items():
        out *= reps[z] ** cnt
    return out


def _np_rng(rng: random.Random) -> np.random.Generator:
    return np.random.default_rng(rng.getrandbits(64))


def many_solutions_sample(
    inst: Instance,
    eps: float,
    rng: random.Random,
    repeats: int = 32,
) -> SolverReport:
    """Random-sampling solver for instances with >= 2^(eps*n) solutions.

    Each round draws two lists of |C|^(n/2) * 2^(-eps*n/2) random half
    vectors (with replacement) and meets their weighted sums at zero.
    """
    if not 0 <= eps <= 1:
        raise ValueError(f"eps must be in [0, 1], got {eps}")
    n = inst.n
    values = np.asarray(inst.coeff_set.values(), dtype=np.int64)
    m_f = inst.coeff_set.cardinality() ** (n / 2) * 2.0 ** (-eps * n / 2)
    m = max(1, math.ceil(m_f))
    if m > SAMPLE_GUARD:
        raise GuardExceeded(f"sample lists of {m} vectors exceed the guard")
    ha = (n + 1) // 2
    x = np.asarray(inst.x, dtype=np.int64)
    npr = _np_rng(rng)

    for round_no in range(repeats):
        left = values[npr.integers(0, len(values), size=(m, ha))]
        right = values[npr.integers(0, len(values), size=(m, n - ha))]
        sums_l = left @ x[:ha]
        sums_r = right @ x[ha:]
        common, ia, ib = np.intersect1d(sums_l, -sums_r, return_indices=True)
        for t in range(common.size):
            c = tuple(int(v) for v in left[ia[t]]) + \
                tuple(int(v) for v in right[ib[t]])
            if is_solution(inst, c):  # rejects the all-zero concatenation
                return SolverReport.solved(
                    inst, c, rounds=round_no + 1, list_size=m)
    return SolverReport.not_found(rounds=repeats, list_size=m)


def balanced_sb_without0(
    inst: Instance,
    profile: SolutionProfile,
    factors: FactorPair,
    rng: random.Random,
    repeats: int = 24,
    cap: Optional[int] = None,
) -> SolverReport:
    """Shifted-representation solver round: a many-solutions attempt, then
    residue-filtered lists over C1^h x C2^(n-h) and its mirror, met at sum 0.

    The filter strength (and the sampler's eps) come from the profile's own
    pair count; a profile whose gamma floors at 0 runs the sampler only.
    """
    if inst.coeff_set.kind is not SetKind.NO_ZERO:
        raise ValueError("this solver requires C = [+-d]")
    if inst.coeff_set.d != factors.d:
        raise ValueError("factor pair built for a different d")
    n = inst.n
    ha = (n + 1) // 2
    gamma = max(0.0, factors.gamma_for(profile))
    pairs = count_pairs_shifted(profile, factors.c1, factors.c2)
    p_max = max(2, int(pairs * 2.0 ** (-gamma * n / 2))) if gamma > 0 else 0
    alphabets_l = [factors.c1] * ha + [factors.c2] * (n - ha)
    alphabets_r = [factors.c2] * ha + [factors.c1] * (n - ha)
    product = len(factors.c1) ** ha * len(factors.c2) ** (n - ha)
    x = np.asarray(inst.x, dtype=np.int64)
    cap_events = 0
    clean_rounds = 0
    stats: dict = {"p_max": p_max, "gamma": round(gamma, 6)}

    for round_no in range(repeats):
        sampled = many_solutions_sample(inst, gamma / 2, rng, repeats=1)
        if sampled.outcome is Outcome.SOLVED:
            sampled.stats.update(stats, rounds=round_no + 1, via="sampling")
            return sampled
        if p_max < 2:
            continue  # gamma floored at 0: sampling is the only route
        p = hashing.sample_prime(p_max, rng)
        r = rng.randrange(p)
        budget = cap if cap is not None else \
            hashing.residue_cap(n, product, p_max)
        dp_l = hashing.build_dp(inst.x, alphabets_l, p)
        dp_r = hashing.build_dp(inst.x, alphabets_r, p)
        arr_l = hashing.enumerate_residue_class_array(dp_l, r, budget)
        arr_r = hashing.enumerate_residue_class_array(dp_r, (-r) % p, budget)
        if isinstance(arr_l, hashing.CapExceeded) or \
                isinstance(arr_r, hashing.CapExceeded):
            cap_events += 1
            continue
        clean_rounds += 1
        stats.update(prime=p, list_size=max(len(arr_l), len(arr_r)))
        if len(arr_l) == 0 or len(arr_r) == 0:
            continue
        common, ia, ib = np.intersect1d(arr_l @ x, -(arr_r @ x),
                                        return_indices=True)
        if common.size:
            a = arr_l[int(ia[0])]
            b = arr_r[int(ib[0])]
            c = tuple(int(v) for v in a + b)
            return SolverReport.solved(
                inst, c, rounds=round_no + 1, cap_events=cap_events, **stats)
    stats.update(rounds=repeats, cap_events=cap_events)
    if p_max >= 2 and clean_rounds == 0 and cap_events > 0:
        return SolverReport.retryable(**stats)
    return SolverReport.not_found(**stats)


def solve_without0(
    inst: Instance,
    rng: random.Random,
    repeats_unbalanced: Optional[int] = None,
    repeats_balanced: int = 24,
    sweeps: int = 3,
    variant: int = 0,
) -> SolverReport:
    """Dispatcher for C = [+-d].

    d <= 2 has no barrier-breaking route; those instances go straight to
    classic Meet-in-the-Middle (exact). For d >= 3 every profile guess is
    routed to the partition search (unbalanced) or the shifted-representation
    solver (balanced).
    """
    if inst.coeff_set.kind is not SetKind.NO_ZERO:
        raise ValueError("solve_without0 requires C = [+-d]")
    d = inst.coeff_set.d
    if d <= 2:
        report = mitm.classic_mitm(inst)
        report.stats["note"] = "mim-optimal regime (d <= 2)"
        return report

    n = inst.n
    eps = routing_eps(inst.coeff_set.cardinality())
    if repeats_unbalanced is None:
        repeats_unbalanced = max(24, 3 * n)
    factors = good_factors(d, variant)
    profiles = list(enumerate_profiles(n, inst.coeff_set, ALL))
    retryable = False
    for sweep in range(sweeps):
        for profile in profiles:
            if is_eps_unbalanced(profile, eps):
                report = mitm.unbalanced_sb(inst, profile, rng,
                                            repeats_unbalanced)
            else:
                report = balanced_sb_without0(inst, profile, factors, rng,
                                              repeats_balanced)
            if report.outcome is Outcome.SOLVED:
                report.stats["sweeps"] = sweep + 1
                return report
            if report.outcome is Outcome.RETRYABLE_FAILURE:
                retryable = True
    if retryable:
        return SolverReport.retryable(sweeps=sweeps)
    return SolverReport.not_found(sweeps=sweeps)
