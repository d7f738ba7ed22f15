import itertools
import random

import pytest

from subsetbalance import oracle
from subsetbalance.core import CoefficientSet, Combine, GuardExceeded, Instance

PM1 = CoefficientSet.no_zero(1)
FR1 = CoefficientSet.full_range(1)
FR2 = CoefficientSet.full_range(2)


def _reference_solutions(inst):
    """Independent re-enumeration in the oracle's order (larger coefficients
    first)."""
    values = sorted(inst.coeff_set.values(), reverse=True)
    out = []
    for c in itertools.product(values, repeat=inst.n):
        if any(c) and sum(a * b for a, b in zip(c, inst.x)) == 0:
            out.append(c)
    return out


class TestBruteForceSolve:
    def test_unsolvable(self):
        assert not oracle.brute_force_solve(Instance((5, 7), PM1)).ok

    def test_solvable(self):
        report = oracle.brute_force_solve(Instance((3, -3), PM1))
        assert report.ok and report.solution.c == (1, 1)

    def test_five_wide_example(self):
        inst = Instance((1, 2, 3, -4, -2), FR2)
        report = oracle.brute_force_solve(inst)
        assert report.ok
        ref = _reference_solutions(inst)
        assert (2, -1, 0, 1, -2) in ref
        assert report.solution.c == ref[0]  # lexicographically first

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            oracle.brute_force_solve(Instance((1,) * 40, PM1))

    def test_matches_reference_on_random(self):
        for seed in range(25):
            r = random.Random(seed)
            n = r.randint(2, 6)
            cs = r.choice([PM1, FR1, FR2])
            inst = Instance(tuple(r.randint(-20, 20) or 1
                                  for _ in range(n)), cs)
            ref = _reference_solutions(inst)
            report = oracle.brute_force_solve(inst)
            assert report.ok == bool(ref)
            if ref:
                assert report.solution.c == ref[0]


class TestCountSolutions:
    def test_pair(self):
        assert oracle.count_solutions(Instance((1, 1), PM1)) == 2

    def test_none(self):
        assert oracle.count_solutions(Instance((1, 2), PM1)) == 0

    def test_binomial(self):
        assert oracle.count_solutions(Instance((1, 1, 1, 1), PM1)) == 6

    def test_matches_reference(self):
        for seed in range(20):
            r = random.Random(100 + seed)
            inst = Instance(tuple(r.randint(-9, 9) or 3 for _ in range(5)),
                            FR2)
            assert oracle.count_solutions(inst) == \
                len(_reference_solutions(inst))


class TestEnumeratePairs:
    def test_difference_zero_profile(self):
        fam = oracle.enumerate_pairs((0, 0), (0, 1), (0, 1),
                                     Combine.DIFFERENCE)
        assert len(fam) == 4
        assert all(a == b for a, b in fam.pairs)

    def test_shifted_two_ways(self):
        fam = oracle.enumerate_pairs((2,), (0, 1), (-3, -2, 1, 2),
                                     Combine.SUM)
        assert sorted(fam.pairs) == [((0,), (2,)), ((1,), (1,))]

    def test_difference_off_center(self):
        fam = oracle.enumerate_pairs((1,), (0, 1, 2), (0, 1, 2),
                                     Combine.DIFFERENCE)
        assert sorted(fam.pairs) == [((1,), (0,)), ((2,), (1,))]

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_pair_count_formula(self, d):
        # |P(c)| = prod (d + 1 - |z|)^pi(z) for difference pairs over [0:d]
        cs = CoefficientSet.full_range(d)
        alphabet = tuple(range(d + 1))
        for seed in range(40):
            r = random.Random(1000 * d + seed)
            n = r.randint(1, 8)
            c = tuple(r.choice(cs.values()) for _ in range(n))
            fam = oracle.enumerate_pairs(c, alphabet, alphabet,
                                         Combine.DIFFERENCE)
            expect = 1
            for z in c:
                expect *= d + 1 - abs(z)
            assert len(fam) == expect

    def test_per_index_alphabets(self):
        fam = oracle.enumerate_pairs(
            (1, -3), [(0, 1), (-3, -2, 1, 2)], [(-3, -2, 1, 2), (0, 1)],
            Combine.SUM)
        # index 0: C1 x C2 hitting 1; index 1: C2 x C1 hitting -3
        assert len(fam) == 1 * 1

    def test_validates_all_pairs(self):
        fam = oracle.enumerate_pairs((1, 0, -1), (0, 1), (0, 1),
                                     Combine.DIFFERENCE)
        for a, b in fam.pairs:
            assert tuple(x - y for x, y in zip(a, b)) == (1, 0, -1)


class TestCompatiblePair:
    def test_found(self):
        got = oracle.brute_force_compatible_pair(
            [(2, 1, 1, 0)], [(1, 2, 0, 1)], FR1)
        assert got == ((2, 1, 1, 0), (1, 2, 0, 1))

    def test_not_found(self):
        assert oracle.brute_force_compatible_pair(
            [(2, 1, 1, 0)], [(0, 1, 1, 2)], FR1) is None

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            oracle.brute_force_compatible_pair([(1, 2)], [(1,)], FR1)


class TestMinSupport:
    def test_small(self):
        sol = oracle.min_support_solution(Instance((1, -1, 7), FR1))
        assert sol.c == (1, 1, 0)

    def test_none(self):
        assert oracle.min_support_solution(Instance((5, 9), FR1)) is None

    def test_agrees_with_reference_scan(self):
        for seed in range(12):
            r = random.Random(seed)
            inst = Instance(tuple(r.randint(-15, 15) or 2
                                  for _ in range(6)), FR1)
            ref = _reference_solutions(inst)
            got = oracle.min_support_solution(inst)
            if not ref:
                assert got is None
                continue
            best = max(sum(1 for v in c if v == 0) for c in ref)
            expect = next(c for c in ref
                          if sum(1 for v in c if v == 0) == best)
            assert got.c == expect
