import random

import pytest

from subsetbalance import hashing, oracle, rep_with0
from subsetbalance.core import (
    CoefficientSet,
    Instance,
    Outcome,
    Planted,
    SolutionProfile,
    UniformRange,
    gen_instance,
    is_solution,
)
from subsetbalance.rep_with0 import balanced_sb_with0, p_max_with0, solve_with0

FR1 = CoefficientSet.full_range(1)
FR2 = CoefficientSet.full_range(2)


class TestPMax:
    def test_cap_binds(self):
        pi = SolutionProfile.from_dict(FR2, {0: 2, 1: 1, -1: 1, 2: 0, -2: 0})
        assert p_max_with0(pi, 2) == 9  # |G| = 36, cap = 3^2

    def test_all_zeros_profile(self):
        for n in (4, 6, 8):
            pi = SolutionProfile.from_dict(FR1, {0: n})
            assert p_max_with0(pi, 1) == 2 ** (n // 2)

    def test_degenerate_extremes(self):
        pi = SolutionProfile.from_dict(FR2, {2: 2, -2: 2})
        assert p_max_with0(pi, 2) == 1


class TestBalancedSBWith0:
    def test_one_each_example(self):
        inst = Instance((1, 2, 3, -4, -2), FR2)
        pi = SolutionProfile.from_dict(FR2, {z: 1 for z in FR2.values()})
        report = balanced_sb_with0(inst, pi, random.Random(1))
        assert report.ok
        assert is_solution(inst, report.solution.c)

    def test_unsolvable_never_positive(self):
        inst = Instance((1, 10, 100), FR1)
        pi = SolutionProfile.from_dict(FR1, {0: 1, 1: 1, -1: 1})
        for seed in range(20):
            assert not balanced_sb_with0(inst, pi, random.Random(seed)).ok

    def test_degenerate_pmax_matches_oracle(self):
        pi = SolutionProfile.from_dict(FR2, {2: 3, -2: 3})
        assert p_max_with0(pi, 2) == 1
        for seed in range(12):
            r = random.Random(seed)
            inst, _ = gen_instance(6, FR2, UniformRange(30), r)
            report = balanced_sb_with0(inst, pi, random.Random(seed + 50),
                                       repeats=1)
            assert report.ok == oracle.brute_force_solve(inst).ok

    def test_injected_residue_succeeds_deterministically(self):
        # if S holds both halves of a solution pair and no cap fires, the
        # equal-sum scan cannot miss
        pi = SolutionProfile.from_dict(FR2, {z: 1 for z in FR2.values()})
        inst, sol = gen_instance(5, FR2, Planted(pi, 40), random.Random(2))
        a = tuple(max(v, 0) for v in sol.c)
        b = tuple(max(-v, 0) for v in sol.c)
        p = hashing.sample_prime(p_max_with0(pi, 2), random.Random(3))
        r = sum(ai * xi for ai, xi in zip(a, inst.x)) % p
        dp = hashing.build_dp(inst.x, [tuple(range(3))] * 5, p)
        cls = hashing.enumerate_residue_class_array(dp, r)
        rows = {tuple(int(t) for t in row) for row in cls}
        assert a in rows and b in rows
        c = rep_with0._meet_equal_sums(inst, cls)
        assert c is not None and is_solution(inst, c)

    def test_cap_override_records_and_retries(self):
        # every weighted sum is a multiple of the same value, so residue 0
        # is overfull; a tiny cap must fire there instead of solving
        inst = Instance((840, 840, 840, 840, 840, 840), FR1)
        pi = SolutionProfile.from_dict(FR1, {0: 2, 1: 2, -1: 2})
        outcomes = set()
        caps = 0
        for seed in range(60):
            report = balanced_sb_with0(inst, pi, random.Random(seed),
                                       repeats=1, cap=1)
            assert not report.ok  # the cap blocks the only useful residue
            outcomes.add(report.outcome)
            caps += report.stats["cap_events"]
        assert caps >= 1
        assert Outcome.RETRYABLE_FAILURE in outcomes

    def test_cap_holds_in_most_rounds(self):
        # the default polynomial cap should almost never fire
        total_rounds = total_caps = 0
        for seed in range(10):
            pi = SolutionProfile.from_dict(FR2, {-2: 2, -1: 2, 0: 2, 1: 2,
                                                 2: 2})
            inst, _ = gen_instance(10, FR2, Planted(pi, 80),
                                   random.Random(seed))
            report = balanced_sb_with0(inst, pi, random.Random(seed + 31),
                                       repeats=6)
            total_rounds += report.stats["rounds"]
            total_caps += report.stats["cap_events"]
        assert total_caps <= total_rounds / 2


class TestSolveWith0:
    def test_requires_full_range(self):
        with pytest.raises(ValueError):
            solve_with0(Instance((1, 2), CoefficientSet.no_zero(1)),
                        random.Random(0))

    def test_all_equal_instant(self):
        report = solve_with0(Instance((7, 7, 7, 7), FR1), random.Random(0))
        assert report.ok

    def test_oracle_agreement_batch(self):
        solved = want_count = 0
        for seed in range(25):
            r = random.Random(seed)
            n = r.randint(4, 9)
            inst, _ = gen_instance(n, FR2, UniformRange(100), r)
            want = oracle.brute_force_solve(inst).ok
            got = solve_with0(inst, random.Random(seed + 1000))
            assert not (got.ok and not want)  # no false positives, ever
            if want:
                want_count += 1
                solved += got.ok
        assert solved >= want_count - 1

    def test_unsolvable(self):
        inst = Instance((1, 10, 100), FR1)
        report = solve_with0(inst, random.Random(4))
        assert not report.ok
