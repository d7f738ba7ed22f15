import math
import random

import pytest

from subsetbalance import oracle, rep_without0
from subsetbalance.core import (
    CoefficientSet,
    Combine,
    Instance,
    Outcome,
    Planted,
    SolutionProfile,
    UniformRange,
    gen_instance,
    is_solution,
)
from subsetbalance.factors import CATALOG, canonical_factors
from subsetbalance.rep_without0 import (
    FactorPair,
    balanced_sb_without0,
    count_pairs_shifted,
    good_factors,
    many_solutions_sample,
    solve_without0,
)

PM1 = CoefficientSet.no_zero(1)
PM3 = CoefficientSet.no_zero(3)


def balanced_profile(cs: CoefficientSet, per: int) -> SolutionProfile:
    return SolutionProfile.from_dict(cs, {z: per for z in cs.values()})


class TestGoodFactors:
    def test_canonical_pm3(self):
        fp = good_factors(3)
        assert fp.c1 == (0, 1)
        assert fp.c2 == (-3, -2, 1, 2)
        # gamma = log2(6)/2 - 3/2 + 1/3, evaluated independently
        assert fp.gamma == pytest.approx(
            math.log2(6) / 2 - 1.5 + 1 / 3, abs=1e-12)
        assert fp.gamma == pytest.approx(0.12582, abs=1e-5)

    def test_pm4_variant1(self):
        fp = good_factors(4, 1)
        assert fp.c1 == (0, 1, 2) and fp.c2 == (-4, -3, 1, 2)

    def test_sumset_expansion(self):
        got = sorted({a + b for a in (0, 1) for b in (-3, -2, 1, 2)})
        assert got == [-3, -2, -1, 1, 2, 3]

    def test_rejects_small_d(self):
        with pytest.raises(ValueError):
            good_factors(2)

    def test_rejects_unknown_variant(self):
        with pytest.raises(ValueError):
            good_factors(3, 5)

    def test_all_catalog_rows_are_valid_sumsets(self):
        for d, rows in CATALOG.items():
            for variant in range(len(rows)):
                fp = good_factors(d, variant)  # __post_init__ checks sumset
                assert fp.gamma > 0

    def test_generic_canonical_beyond_catalog(self):
        fp = good_factors(9)
        c1, c2 = canonical_factors(9)
        assert (fp.c1, fp.c2) == (c1, c2)

    def test_invalid_pair_rejected(self):
        with pytest.raises(ValueError):
            FactorPair(3, (0, 1), (-3, -2, 2), gamma=0.1)  # misses -1


class TestCountPairsShifted:
    def test_pm3_balanced_n12(self):
        fp = good_factors(3)
        pi = balanced_profile(PM3, 2)
        assert count_pairs_shifted(pi, fp.c1, fp.c2) == 16

    def test_concentrated_unique_rep(self):
        fp = good_factors(3)
        pi = SolutionProfile.from_dict(PM3, {3: 5})
        assert count_pairs_shifted(pi, fp.c1, fp.c2) == 1

    def test_pm5_table_row(self):
        fp = good_factors(5, 2)
        pi = balanced_profile(CoefficientSet.no_zero(5), 1)
        assert count_pairs_shifted(pi, fp.c1, fp.c2) == 2**4 * 3**2

    def test_matches_oracle_enumeration(self):
        fp = good_factors(3)
        for seed in range(15):
            r = random.Random(seed)
            n = r.randint(2, 8)
            c = tuple(r.choice(PM3.values()) for _ in range(n))
            ha = (n + 1) // 2
            lefts = [fp.c1] * ha + [fp.c2] * (n - ha)
            rights = [fp.c2] * ha + [fp.c1] * (n - ha)
            fam = oracle.enumerate_pairs(c, lefts, rights, Combine.SUM)
            pi = SolutionProfile.from_dict(
                PM3, {z: c.count(z) for z in PM3.values()})
            assert len(fam) == count_pairs_shifted(pi, fp.c1, fp.c2)

    def test_unrepresentable_raises(self):
        pi = balanced_profile(PM3, 1)
        with pytest.raises(ValueError):
            count_pairs_shifted(pi, (0, 1), (-3, -2, 2))

    def test_pair_count_stays_below_2n(self):
        # canonical factors keep the pair family under 2^n for balanced
        # profiles, every catalog d
        for d in sorted(CATALOG):
            cs = CoefficientSet.no_zero(d)
            fp = good_factors(d)
            for per in (1, 2, 3):
                pi = balanced_profile(cs, per)
                assert count_pairs_shifted(pi, fp.c1, fp.c2) < 2**pi.n


class TestManySolutions:
    def test_rich_instance(self):
        inst = Instance((1, 1, -1, -1), PM1)
        report = many_solutions_sample(inst, 0.5, random.Random(3))
        assert report.ok

    def test_unsolvable(self):
        inst = Instance((5, 7), PM1)
        assert not many_solutions_sample(inst, 0.5, random.Random(1)).ok

    def test_oracle_gated_batch(self):
        hits = tried = 0
        for seed in range(30):
            pi = balanced_profile(PM3, 2)  # n = 12: plant, then shrink to 10
            r = random.Random(seed)
            inst, _ = gen_instance(10, PM3, Planted(
                SolutionProfile.from_dict(
                    PM3, {-3: 2, -2: 2, -1: 1, 1: 1, 2: 2, 3: 2})), r)
            if oracle.count_solutions(inst) < 2 ** int(0.1 * inst.n):
                continue
            tried += 1
            hits += many_solutions_sample(inst, 0.1, random.Random(seed + 7),
                                          repeats=100).ok
        assert tried >= 10
        assert hits >= 0.9 * tried


class TestBalancedSBWithout0:
    def test_planted_batch(self):
        fp = good_factors(3)
        pi = balanced_profile(PM3, 2)
        hits = 0
        for seed in range(10):
            inst, _ = gen_instance(12, PM3, Planted(pi, 60),
                                   random.Random(seed))
            report = balanced_sb_without0(inst, pi, fp,
                                          random.Random(seed + 100),
                                          repeats=200)
            hits += report.ok
            if report.ok:
                assert is_solution(inst, report.solution.c)
        assert hits >= 9

    def test_injected_residue_hits_on_hashing_path(self):
        # decompose the planted solution as a + b over the split products and
        # check the residue class of a's sum recovers a solution via the meet
        from subsetbalance import hashing

        fp = good_factors(3)
        pi = balanced_profile(PM3, 2)
        inst, sol = gen_instance(12, PM3, Planted(pi, 60), random.Random(5))
        n = inst.n
        ha = (n + 1) // 2
        a, b = [], []
        for i, ci in enumerate(sol.c):
            c1, c2 = (fp.c1, fp.c2) if i < ha else (fp.c2, fp.c1)
            ai, bi = next((u, v) for u in c1 for v in c2 if u + v == ci)
            a.append(ai)
            b.append(bi)
        p = hashing.sample_prime(
            max(2, count_pairs_shifted(pi, fp.c1, fp.c2)), random.Random(6))
        r = sum(ai * xi for ai, xi in zip(a, inst.x)) % p
        dp_l = hashing.build_dp(inst.x, [fp.c1] * ha + [fp.c2] * (n - ha), p)
        dp_r = hashing.build_dp(inst.x, [fp.c2] * ha + [fp.c1] * (n - ha), p)
        lst_l = hashing.enumerate_residue_class_array(dp_l, r)
        lst_r = hashing.enumerate_residue_class_array(dp_r, (-r) % p)
        sums_l = {tuple(map(int, row)): int(row @ inst.x) for row in lst_l}
        sums_r = {tuple(map(int, row)): int(row @ inst.x) for row in lst_r}
        assert tuple(a) in sums_l and tuple(b) in sums_r
        assert sums_l[tuple(a)] + sums_r[tuple(b)] == 0

    def test_unsolvable_instance_never_positive(self):
        r = random.Random(0)
        while True:  # wide entries make a random instance unsolvable
            inst = Instance(tuple(r.randint(1, 10**7) for _ in range(6)), PM3)
            if not oracle.brute_force_solve(inst).ok:
                break
        pi = balanced_profile(PM3, 1)
        report = balanced_sb_without0(inst, pi, good_factors(3),
                                      random.Random(0), repeats=10)
        assert not report.ok

    def test_solution_outside_profile_is_still_valid(self):
        # the sampling pre-pass is profile-free, so a verified solution with
        # a different profile is a legitimate outcome
        inst = Instance((1, 1, 1, 1, 1, 5), PM3)
        pi = balanced_profile(PM3, 1)
        report = balanced_sb_without0(inst, pi, good_factors(3),
                                      random.Random(0), repeats=10)
        if report.ok:
            assert is_solution(inst, report.solution.c)

    def test_cap_override_retryable(self):
        pi = balanced_profile(PM3, 2)
        inst, _ = gen_instance(12, PM3, Planted(pi, 60), random.Random(9))
        report = balanced_sb_without0(inst, pi, good_factors(3),
                                      random.Random(10), repeats=3, cap=1)
        # sampler may still hit; when it does not, rounds must be retryable
        if not report.ok:
            assert report.outcome is Outcome.RETRYABLE_FAILURE


class TestSolveWithout0:
    def test_pm1_delegates_to_classic(self):
        inst = Instance((3, -3), PM1)
        report = solve_without0(inst, random.Random(0))
        assert report.ok and "note" in report.stats

    def test_pm2_delegates(self):
        inst = Instance((5, 7, 9), CoefficientSet.no_zero(2))
        report = solve_without0(inst, random.Random(0))
        want = oracle.brute_force_solve(inst).ok
        assert report.ok == want

    def test_oracle_agreement_batch(self):
        solved = want_count = 0
        for seed in range(20):
            r = random.Random(seed)
            n = r.randint(4, 8)
            inst, _ = gen_instance(n, PM3, UniformRange(100), r)
            want = oracle.brute_force_solve(inst).ok
            got = solve_without0(inst, random.Random(seed + 2000))
            assert not (got.ok and not want)
            if want:
                want_count += 1
                solved += got.ok
        assert want_count >= 10
        assert solved >= want_count - 1

    def test_unsolvable(self):
        inst = Instance((1, 7, 59), PM3)
        assert not oracle.brute_force_solve(inst).ok
        assert not solve_without0(inst, random.Random(1)).ok
