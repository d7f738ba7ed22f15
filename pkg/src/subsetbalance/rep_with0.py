"""Representation-technique solver for C = [-d : d]: filter [0:d]^n by a
random residue class modulo a random prime, then match equal weighted sums
inside the filtered list. Includes the dispatcher that routes each guessed
profile to this solver or to the unbalanced Meet-in-the-Middle variant."""

from __future__ import annotations

import random
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
)

UNFILTERED_GUARD = 1 << 21


def p_max_with0(profile: SolutionProfile, d: int) -> int:
    """Prime-range bound: the solution-pair count for the profile, capped at
    (d+1)^floor(n/2)."""
    pairs = 1
    for z, cnt in profile.as_dict().items():
        pairs *= (d + 1 - abs(z)) ** cnt
    return min(pairs, (d + 1) ** (profile.n // 2))


def _meet_equal_sums(
    inst: Instance, arr: np.ndarray
) -> Optional[tuple[int, ...]]:
    """First pair of distinct vectors with equal dot product; returns a - b."""
    if len(arr) < 2:
        return None
    sums = arr @ np.asarray(inst.x, dtype=np.int64)
    order = np.argsort(sums, kind="stable")
    prev = int(order[0])
    for t in range(1, len(order)):
        cur = int(order[t])
        if sums[prev] == sums[cur]:
            # distinct enumeration output, so a != b and a - b != 0
            return tuple(int(v) for v in arr[cur] - arr[prev])
        prev = cur
    return None


def balanced_sb_with0(
    inst: Instance,
    profile: SolutionProfile,
    rng: random.Random,
    repeats: int = 24,
    cap: Optional[int] = None,
) -> SolverReport:
    """Residue-filtered pair search on [0:d]^n (profile fixes the filter
    strength via its pair count).

    Each round samples a fresh prime and residue; an over-full residue class
    counts as a retryable failure for that round. Every returned solution is
    verified.
    """
    if inst.coeff_set.kind is not SetKind.FULL_RANGE:
        raise ValueError("this solver requires C = [-d : d]")
    d = inst.coeff_set.d
    n = inst.n
    p_max = p_max_with0(profile, d)
    product = (d + 1) ** n
    alphabet = tuple(range(d + 1))
    cap_events = 0
    clean_rounds = 0
    last_prime = 0
    last_size = 0

    for round_no in range(repeats):
        if p_max < 2:
            # degenerate filter: enumerate [0:d]^n outright (tiny-n territory)
            if product > UNFILTERED_GUARD:
                raise GuardExceeded("unfiltered enumeration too large")
            p, r = 1, 0
        else:
            p = hashing.sample_prime(p_max, rng)
            r = rng.randrange(p)
        dp = hashing.build_dp(inst.x, [alphabet] * n, p)
        budget = cap if cap is not None else \
            hashing.residue_cap(n, product, p_max)
        cls = hashing.enumerate_residue_class_array(dp, r, budget)
        if isinstance(cls, hashing.CapExceeded):
            cap_events += 1
            continue
        clean_rounds += 1
        last_prime, last_size = p, len(cls)
        c = _meet_equal_sums(inst, cls)
        if c is not None:
            return SolverReport.solved(
                inst, c, rounds=round_no + 1, prime=p, list_size=len(cls),
                cap_events=cap_events,
            )
        if p_max < 2:
            break  # unfiltered enumeration is exhaustive; rounds add nothing
    stats = dict(rounds=repeats, cap_events=cap_events, prime=last_prime,
                 list_size=last_size)
    if clean_rounds == 0 and cap_events > 0:
        return SolverReport.retryable(**stats)
    return SolverReport.not_found(**stats)


def routing_eps(cardinality: int) -> float:
    # the dichotomy needs eps < 1/(3|C|); 1/(4|C|) keeps a strict margin
    return 1.0 / (4 * cardinality)


def solve_with0(
    inst: Instance,
    rng: random.Random,
    repeats_unbalanced: Optional[int] = None,
    repeats_balanced: int = 24,
    sweeps: int = 3,
) -> SolverReport:
    """Full dispatcher for C = [-d : d]: guess every solution profile, route
    unbalanced guesses to the partition-based search and balanced ones to the
    residue-filtered search; first verified solution wins."""
    if inst.coeff_set.kind is not SetKind.FULL_RANGE:
        raise ValueError("solve_with0 requires C = [-d : d]")
    n = inst.n
    eps = routing_eps(inst.coeff_set.cardinality())
    if repeats_unbalanced is None:
        repeats_unbalanced = max(24, 3 * n)
    profiles = [
        p for p in enumerate_profiles(n, inst.coeff_set, ALL)
        if any(cnt for z, cnt in p.as_dict().items() if z != 0)
    ]
    retryable = False
    for sweep in range(sweeps):
        for profile in profiles:
            if is_eps_unbalanced(profile, eps):
                report = mitm.unbalanced_sb(inst, profile, rng,
                                            repeats_unbalanced)
            else:
                report = balanced_sb_with0(inst, profile, rng,
                                           repeats_balanced)
            if report.outcome is Outcome.SOLVED:
                report.stats["sweeps"] = sweep + 1
                return report
            if report.outcome is Outcome.RETRYABLE_FAILURE:
                retryable = True
    if retryable:
        return SolverReport.retryable(sweeps=sweeps)
    return SolverReport.not_found(sweeps=sweeps)
