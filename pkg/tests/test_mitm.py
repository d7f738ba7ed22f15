import math
import random

import pytest

from subsetbalance import mitm, oracle
from subsetbalance.core import (
    CoefficientSet,
    Combine,
    Instance,
    Planted,
    SolutionProfile,
    UniformRange,
    gen_instance,
    is_solution,
    profile_of,
)
from subsetbalance.mitm import Half, SumList, classic_mitm, enumerate_S, meet

PM1 = CoefficientSet.no_zero(1)
FR1 = CoefficientSet.full_range(1)
FR2 = CoefficientSet.full_range(2)


class TestMeet:
    def test_sum_hit(self):
        L = SumList.from_pairs([(1, "a"), (4, "b")])
        R = SumList.from_pairs([(-4, "c"), (2, "d")])
        assert meet(L, R, Combine.SUM, 0) == ("b", "c")

    def test_empty(self):
        assert meet(SumList([]), SumList.from_pairs([(1, "x")]),
                    Combine.SUM) is None

    def test_difference_hit(self):
        L = SumList.from_pairs([(2, 2), (5, 5)])
        R = SumList.from_pairs([(2, 2), (5, 5)])
        assert meet(L, R, Combine.DIFFERENCE, 0) == (2, 2)

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError):
            meet(SumList([(3, 0), (1, 1)]), SumList([(0, 0)]), Combine.SUM)

    def test_accept_predicate_skips(self):
        L = SumList.from_pairs([(0, "zero"), (0, "l")])
        R = SumList.from_pairs([(0, "zero"), (0, "r")])
        got = meet(L, R, Combine.SUM, 0,
                   accept=lambda a, b: (a, b) != ("zero", "zero"))
        assert got is not None and got != ("zero", "zero")

    def test_matches_quadratic_scan(self):
        for seed in range(30):
            r = random.Random(seed)
            ls = sorted((r.randint(-8, 8), i) for i in range(r.randint(0, 9)))
            rs = sorted((r.randint(-8, 8), i) for i in range(r.randint(0, 9)))
            target = r.randint(-4, 4)
            got = meet(SumList(ls), SumList(rs), Combine.SUM, target)
            brute = any(a + b == target for a, _ in ls for b, _ in rs)
            assert (got is not None) == brute


class TestEnumerateS:
    def test_multinomial_count(self):
        pi = SolutionProfile.from_dict(FR1, {-1: 2, 0: 2, 1: 2})
        got = list(enumerate_S(FR1, pi, Half.A))
        assert len(got) == math.factorial(3)  # 3!/(1!1!1!)

    def test_single_vector(self):
        pi = SolutionProfile.from_dict(PM1, {1: 4, -1: 0})
        assert list(enumerate_S(PM1, pi, Half.A)) == [(1, 1)]

    def test_one_each_doubled(self):
        pi = SolutionProfile.from_dict(FR2, {z: 2 for z in FR2.values()})
        got = list(enumerate_S(FR2, pi, Half.A))
        assert len(got) == math.factorial(5)

    def test_half_profile_of_every_vector(self):
        pi = SolutionProfile.from_dict(FR1, {-1: 3, 0: 1, 1: 2})
        for half in (Half.A, Half.B):
            vecs = list(enumerate_S(FR1, pi, half))
            assert len(vecs) == mitm.half_size(pi, half)
            first = profile_of(vecs[0], FR1).as_dict()
            for v in vecs:
                assert profile_of(v, FR1).as_dict() == first

    def test_halves_recombine_to_profile(self):
        pi = SolutionProfile.from_dict(FR2, {-2: 1, -1: 2, 0: 3, 1: 0, 2: 1})
        a = next(enumerate_S(FR2, pi, Half.A))
        b = next(enumerate_S(FR2, pi, Half.B))
        assert len(a) + len(b) == pi.n
        assert len(a) == (pi.n + 1) // 2
        combined = profile_of(a + b, FR2).as_dict()
        assert combined == pi.as_dict()


class TestClassicMitm:
    def test_solvable_example(self):
        report = classic_mitm(Instance((1, 2, 3, 6), FR1))
        assert report.ok

    def test_unsolvable(self):
        assert not classic_mitm(Instance((5, 7), PM1)).ok

    def test_two_balanced(self):
        report = classic_mitm(Instance((3, -3), PM1))
        assert report.ok and report.solution.c in ((1, 1), (-1, -1))

    @pytest.mark.parametrize("cs", [PM1, FR1, CoefficientSet.no_zero(2), FR2])
    def test_oracle_equivalence(self, cs):
        for seed in range(30):
            r = random.Random(seed)
            n = r.randint(2, 8)
            inst, _ = gen_instance(n, cs, UniformRange(40), r)
            assert classic_mitm(inst).ok == oracle.brute_force_solve(inst).ok

    def test_deterministic(self):
        inst = Instance((4, -1, 3, 8, -7, 2), FR1)
        assert classic_mitm(inst).solution == classic_mitm(inst).solution


class TestUnbalancedSB:
    def test_planted_batch(self):
        pi = SolutionProfile.from_dict(PM1, {1: 6, -1: 2})
        hits = 0
        for seed in range(20):
            inst, _ = gen_instance(8, PM1, Planted(pi), random.Random(seed))
            report = mitm.unbalanced_sb(inst, pi, random.Random(seed + 999),
                                        repeats=200)
            hits += report.ok
        assert hits >= 19  # >= 95% of seeds

    def test_profile_example(self):
        inst = Instance((1, 2, 3, 6), FR1)
        pi = SolutionProfile.from_dict(FR1, {1: 3, -1: 1, 0: 0})
        report = mitm.unbalanced_sb(inst, pi, random.Random(5), repeats=400)
        assert report.ok and report.solution.c == (1, 1, 1, -1)

    def test_impossible_profile_never_false_positive(self):
        inst = Instance((1, 2, 3, 6), FR1)
        pi = SolutionProfile.from_dict(FR1, {1: 4, -1: 0, 0: 0})
        for seed in range(10):
            report = mitm.unbalanced_sb(inst, pi, random.Random(seed),
                                        repeats=50)
            assert not report.ok

    def test_solution_matches_profile(self):
        pi = SolutionProfile.from_dict(FR2, {-2: 1, -1: 1, 0: 2, 1: 1, 2: 1})
        inst, _ = gen_instance(6, FR2, Planted(pi), random.Random(3))
        report = mitm.unbalanced_sb(inst, pi, random.Random(4), repeats=400)
        if report.ok:
            assert profile_of(report.solution.c, FR2).as_dict() == \
                pi.as_dict()
            assert is_solution(inst, report.solution.c)
