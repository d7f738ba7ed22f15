"""Equal Subset Sum solver (C = [-1 : 1]) built on good solution pairs over
[0:2]^n: a constrained residue DP enumerates candidate half-vectors with
fixed 1- and 2-counts, equal-sum buckets are searched for compatible pairs
(difference free of +-2), and sign re-randomization balances the 1/-1
frequencies across outer attempts."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import compat, hashing, mitm
from .core import (
    ALL,
    Instance,
    Outcome,
    SetKind,
    SolutionProfile,
    SolverReport,
    apply_signs,
    enumerate_profiles,
    is_solution,
    rerandomize,
)

EPS_DEFAULT = 0.04493  # runtime-optimal fraction of 2-entries


@dataclass(frozen=True)
class GoodPairParams:
    """Validated parameters of the good-pair family for one profile."""

    profile: SolutionProfile
    eps_n: int
    p_max: int

    def __post_init__(self) -> None:
        pi = self.profile.as_dict()
        n = self.profile.n
        if pi[1] != pi[-1]:
            raise ValueError("good pairs need pi(1) = pi(-1)")
        if 3 * pi[0] > n:
            raise ValueError("good pairs need pi(0) <= n/3")
        if not 0 <= self.eps_n <= pi[1]:
            raise ValueError(f"eps_n = {self.eps_n} outside [0, {pi[1]}]")
        if self.p_max != good_pair_count(self.profile, self.eps_n):
            raise ValueError("p_max does not match the good-pair count")

    @staticmethod
    def for_profile(
        profile: SolutionProfile, eps: float
    ) -> "GoodPairParams":
        """Round eps*n to the nearest feasible integer 2-count.

        Desk-scale n forces eps_n into {0, 1} most of the time; both are
        first-class. The clamp allows eps_n = n/12 exactly (the strict
        boundary only matters asymptotically).
        """
        n = profile.n
        eps_n = min(round(eps * n), profile.count(1), n // 12)
        return GoodPairParams(profile, eps_n,
                              good_pair_count(profile, eps_n))


def good_pair_count(profile: SolutionProfile, eps_n: int) -> int:
    """binom(pi(1), eps_n)^2 * 2^pi(0): the prime-range bound derived from
    the good-pair family size."""
    pi = profile.as_dict()
    if eps_n > pi[1]:
        raise ValueError(f"eps_n = {eps_n} exceeds pi(1) = {pi[1]}")
    return math.comb(pi[1], eps_n) ** 2 * 2 ** pi[0]


def is_good_pair(a, b, c, eps_n: int) -> bool:
    """Membership test for the good-pair family of a solution vector c."""
    if not len(a) == len(b) == len(c):
        raise ValueError("length mismatch")
    n = len(c)
    if 2 * sum(1 for v in a if v == 1) != n:
        return False
    if 2 * sum(1 for v in b if v == 1) != n:
        return False
    if sum(1 for v in a if v == 2) != eps_n:
        return False
    if sum(1 for v in b if v == 2) != eps_n:
        return False
    if any(ai - bi != ci for ai, bi, ci in zip(a, b, c)):
        return False
    return all(
        (ai, bi) in ((0, 0), (1, 1))
        for ai, bi, ci in zip(a, b, c) if ci == 0
    )


def ess_solve_profile(
    inst: Instance,
    profile: SolutionProfile,
    eps: float,
    rng: random.Random,
    repeats: int = 12,
    compat_repeats: int = 4,
    cap: Optional[int] = None,
) -> SolverReport:
    """One profile's good-pair search.

    Each round filters {v in [0:2]^n : n/2 ones, eps_n twos} by a random
    residue class, buckets the survivors by exact dot product, and scans
    each bucket for a pair whose difference stays inside [-1 : 1]. Returned
    vectors always pass is_solution, so pseudosolutions cannot escape.
    """
    if inst.coeff_set.kind is not SetKind.FULL_RANGE or inst.coeff_set.d != 1:
        raise ValueError("Equal Subset Sum needs C = [-1 : 1]")
    n = inst.n
    if n % 2 or profile.count(0) % 2:
        raise ValueError("good pairs need n and pi(0) even")
    params = GoodPairParams.for_profile(profile, eps)
    eps_n = params.eps_n
    ones = n // 2
    p_max = params.p_max
    s0 = math.comb(n, ones) * math.comb(n - ones, eps_n)
    x = np.asarray(inst.x, dtype=np.int64)
    cap_events = 0
    clean_rounds = 0
    stats: dict = {"eps_n": eps_n, "p_max": p_max}

    for round_no in range(repeats):
        if p_max < 2:
            p, r = 1, 0
        else:
            p = hashing.sample_prime(p_max, rng)
            r = rng.randrange(p)
        dp = hashing.build_constrained_dp(inst.x, p, ones, eps_n)
        budget = cap if cap is not None else \
            hashing.residue_cap(n, s0, p_max)
        cls = hashing.enumerate_constrained_class(dp, r, budget)
        if isinstance(cls, hashing.CapExceeded):
            cap_events += 1
            continue
        clean_rounds += 1
        stats.update(prime=p, list_size=len(cls))
        if len(cls) >= 2:
            arr = np.asarray(cls, dtype=np.int64)
            sums = arr @ x
            order = np.argsort(sums, kind="stable")
            start = 0
            while start < len(order):
                end = start
                while end < len(order) and sums[order[end]] == sums[order[start]]:
                    end += 1
                if end - start >= 2:
                    bucket = [cls[int(t)] for t in order[start:end]]
                    hit = compat.compatibility_test(
                        bucket, bucket, eps_n / n, rng,
                        repeats=compat_repeats, require_distinct=True,
                    )
                    if hit is not None:
                        a, b = hit
                        c = tuple(ai - bi for ai, bi in zip(a, b))
                        if is_solution(inst, c):
                            return SolverReport.solved(
                                inst, c, rounds=round_no + 1,
                                cap_events=cap_events, **stats)
                start = end
        if p_max < 2:
            break  # no residue randomness left to vary
    stats.update(rounds=repeats, cap_events=cap_events)
    if p_max >= 2 and clean_rounds == 0 and cap_events > 0:
        return SolverReport.retryable(**stats)
    return SolverReport.not_found(**stats)


def solve_ess(
    inst: Instance,
    rng: random.Random,
    attempts: int = 3,
    repeats_unbalanced: Optional[int] = None,
    repeats_profile: int = 12,
    eps: float = EPS_DEFAULT,
) -> SolverReport:
    """Dispatcher for Equal Subset Sum.

    Each attempt re-randomizes signs (to hit pi(1) = pi(-1) for some
    solution) and sweeps profiles: heavy-zero profiles (pi(0) > n/3) and
    profiles outside the good-pair preconditions go to the partition-based
    search, the rest to the good-pair solver. Solutions are mapped back
    through the recorded signs and re-verified on the original instance.
    """
    if inst.coeff_set.kind is not SetKind.FULL_RANGE or inst.coeff_set.d != 1:
        raise ValueError("solve_ess requires C = [-1 : 1]")
    n = inst.n
    if repeats_unbalanced is None:
        repeats_unbalanced = max(24, 3 * n)
    retryable = False
    for attempt in range(attempts):
        work, signs = rerandomize(inst, rng)
        for profile in enumerate_profiles(n, work.coeff_set, ALL):
            pi = profile.as_dict()
            if pi[1] == 0 and pi[-1] == 0:
                continue  # zero vector only
            good_route = (
                3 * pi[0] <= n
                and pi[1] == pi[-1]
                and n % 2 == 0
                and pi[0] % 2 == 0
            )
            if good_route:
                report = ess_solve_profile(work, profile, eps, rng,
                                           repeats_profile)
            else:
                # stands in for the pre-existing profile-parameterized solver
                report = mitm.unbalanced_sb(inst=work, profile=profile,
                                            rng=rng,
                                            repeats=repeats_unbalanced)
            if report.outcome is Outcome.SOLVED:
                c = apply_signs(report.solution.c, signs)
                report = SolverReport.solved(
                    inst, c, attempts=attempt + 1, **report.stats)
                return report
            if report.outcome is Outcome.RETRYABLE_FAILURE:
                retryable = True
    if retryable:
        return SolverReport.retryable(attempts=attempts)
    return SolverReport.not_found(attempts=attempts)
