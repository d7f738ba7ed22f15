"""Domain types shared by every solver: coefficient sets, instances, profiles,
solutions, reports, plus instance generation and the sign re-randomization
transform."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

MAX_DOT = 2**62  # any c.x with |c_i| <= d must stay well inside int64


class GuardExceeded(RuntimeError):
    """An operation-count or memory guard would be exceeded."""


class PlantingError(RuntimeError):
    """No instance realizing the requested planted profile was found."""


class SetKind(enum.Enum):
    FULL_RANGE = "range"      # [-d : d], includes 0
    NO_ZERO = "no_zero"       # [+-d] = [-d : d] \ {0}


class Combine(enum.Enum):
    """How two half-vectors (or their sums) are matched into one candidate."""

    DIFFERENCE = "difference"   # a - b
    SUM = "sum"                 # a + b


@dataclass(frozen=True)
class CoefficientSet:
    """The allowed per-index multipliers: all integers of absolute value <= d,
    with or without 0."""

    kind: SetKind
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")

    @staticmethod
    def full_range(d: int) -> "CoefficientSet":
        return CoefficientSet(SetKind.FULL_RANGE, d)

    @staticmethod
    def no_zero(d: int) -> "CoefficientSet":
        return CoefficientSet(SetKind.NO_ZERO, d)

    def values(self) -> tuple[int, ...]:
        """All members, ascending."""
        if self.kind is SetKind.FULL_RANGE:
            return tuple(range(-self.d, self.d + 1))
        return tuple(z for z in range(-self.d, self.d + 1) if z != 0)

    def cardinality(self) -> int:
        return 2 * self.d + 1 if self.kind is SetKind.FULL_RANGE else 2 * self.d

    def __contains__(self, z: int) -> bool:
        if z == 0:
            return self.kind is SetKind.FULL_RANGE
        return abs(z) <= self.d

    def __str__(self) -> str:
        if self.kind is SetKind.FULL_RANGE:
            return f"[-{self.d}:{self.d}]"
        return f"[+-{self.d}]"

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "d": self.d}

    @staticmethod
    def from_json_dict(obj: dict) -> "CoefficientSet":
        return CoefficientSet(SetKind(obj["kind"]), int(obj["d"]))


@dataclass(frozen=True)
class Instance:
    """An input vector x and its coefficient set.

    Entries are bounded at construction so that any dot product c.x with
    c in C^n fits comfortably in 64 bits.
    """

    x: tuple[int, ...]
    coeff_set: CoefficientSet

    def __post_init__(self) -> None:
        if len(self.x) < 1:
            raise ValueError("instance needs at least one element")
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        bound = MAX_DOT // (self.coeff_set.d * len(self.x))
        for v in self.x:
            if abs(v) > bound:
                raise ValueError(
                    f"|x_i| = {abs(v)} exceeds the overflow-safety bound {bound}"
                )

    @property
    def n(self) -> int:
        return len(self.x)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "x": list(self.x),
            "coeff_set": self.coeff_set.to_json_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(obj: dict) -> "Instance":
        inst = Instance(tuple(int(v) for v in obj["x"]),
                        CoefficientSet.from_json_dict(obj["coeff_set"]))
        if "n" in obj and int(obj["n"]) != inst.n:
            raise ValueError("declared n does not match len(x)")
        return inst

    @staticmethod
    def from_json(text: str) -> "Instance":
        return Instance.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class SolutionProfile:
    """Coefficient-frequency map pi: C -> N with sum(pi) = n.

    The domain of `counts` is exactly the coefficient set.
    """

    coeff_set: CoefficientSet
    counts: tuple[int, ...]  # aligned with coeff_set.values()

    def __post_init__(self) -> None:
        vals = self.coeff_set.values()
        if len(self.counts) != len(vals):
            raise ValueError("profile must assign a count to every coefficient")
        if any(c < 0 for c in self.counts):
            raise ValueError("profile counts must be non-negative")

    @staticmethod
    def from_dict(coeff_set: CoefficientSet, counts: dict) -> "SolutionProfile":
        vals = coeff_set.values()
        extra = set(counts) - set(vals)
        if extra:
            raise ValueError(f"counts given for non-members {sorted(extra)}")
        return SolutionProfile(coeff_set, tuple(counts.get(z, 0) for z in vals))

    @property
    def n(self) -> int:
        return sum(self.counts)

    def count(self, z: int) -> int:
        if z not in self.coeff_set:
            raise ValueError(f"{z} is not in {self.coeff_set}")
        return self.counts[self.coeff_set.values().index(z)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.coeff_set.values(), self.counts))

    def __str__(self) -> str:
        inner = ", ".join(f"{z}:{c}" for z, c in self.as_dict().items())
        return "{" + inner + "}"


@dataclass(frozen=True)
class Solution:
    """A nonzero coefficient vector with c.x = 0 for its instance."""

    c: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", tuple(int(v) for v in self.c))

    def to_json_dict(self) -> dict:
        return {"c": list(self.c)}

    @staticmethod
    def from_json_dict(obj: dict) -> "Solution":
        return Solution(tuple(int(v) for v in obj["c"]))


class Outcome(enum.Enum):
    SOLVED = "solved"
    NO_SOLUTION_FOUND = "no_solution_found"
    RETRYABLE_FAILURE = "retryable_failure"


@dataclass
class SolverReport:
    """Result of a solve call plus counters (list sizes, prime, rounds, ...).

    A SOLVED report always carries a solution that passed is_solution, so a
    report can never be a false positive.
    """

    outcome: Outcome
    solution: Optional[Solution] = None
    stats: dict = field(default_factory=dict)

    @staticmethod
    def solved(inst: Instance, c: Sequence[int], **stats) -> "SolverReport":
        c = tuple(int(v) for v in c)
        if not is_solution(inst, c):
            raise AssertionError(f"refusing to report invalid solution {c}")
        return SolverReport(Outcome.SOLVED, Solution(c), dict(stats))

    @staticmethod
    def not_found(**stats) -> "SolverReport":
        return SolverReport(Outcome.NO_SOLUTION_FOUND, None, dict(stats))

    @staticmethod
    def retryable(**stats) -> "SolverReport":
        return SolverReport(Outcome.RETRYABLE_FAILURE, None, dict(stats))

    @property
    def ok(self) -> bool:
        return self.outcome is Outcome.SOLVED

    def to_json_dict(self, include_timing: bool = False) -> dict:
        stats = {k: v for k, v in sorted(self.stats.items())
                 if include_timing or not k.endswith("_ms")}
        out = {"schema": "subsetbalance.report/1", "outcome": self.outcome.value,
               "stats": stats}
        if self.solution is not None:
            out["solution"] = self.solution.to_json_dict()
        return out


def is_solution(inst: Instance, c: Sequence[int]) -> bool:
    """True iff c is nonzero, lies in C^n, and c.x = 0 (exact arithmetic)."""
    if len(c) != inst.n:
        raise ValueError(f"length mismatch: {len(c)} != {inst.n}")
    if all(v == 0 for v in c):
        return False
    if any(v not in inst.coeff_set for v in c):
        return False
    return sum(v * xi for v, xi in zip(c, inst.x)) == 0


def profile_of(c: Sequence[int], coeff_set: CoefficientSet) -> SolutionProfile:
    """The frequency of each coefficient value in c."""
    counts = dict.fromkeys(coeff_set.values(), 0)
    for v in c:
        if v not in coeff_set:
            raise ValueError(f"entry {v} outside {coeff_set}")
        counts[v] += 1
    return SolutionProfile.from_dict(coeff_set, counts)


# Profile-stream filters.
@dataclass(frozen=True)
class All:
    pass


@dataclass(frozen=True)
class EpsBalanced:
    eps: float


@dataclass(frozen=True)
class EpsUnbalanced:
    eps: float


ProfileFilter = Union[All, EpsBalanced, EpsUnbalanced]
ALL = All()


def is_eps_unbalanced(profile: SolutionProfile, eps: float) -> bool:
    """Strict test: some coefficient's frequency deviates from n/|C| by more
    than eps*n."""
    n = profile.n
    target = n / profile.coeff_set.cardinality()
    return any(abs(cnt - target) > eps * n for cnt in profile.counts)


def enumerate_profiles(
    n: int, coeff_set: CoefficientSet, flt: ProfileFilter = ALL
) -> Iterator[SolutionProfile]:
    """Every profile with sum = n passing the filter, each exactly once.

    Order is deterministic (lexicographic in the count tuple, coefficients
    ascending).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = coeff_set.cardinality()

    def compositions(remaining: int, cells: int):
        if cells == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in compositions(remaining - first, cells - 1):
                yield (first,) + rest

    for counts in compositions(n, k):
        profile = SolutionProfile(coeff_set, counts)
        if isinstance(flt, All):
            yield profile
        elif isinstance(flt, EpsUnbalanced):
            if is_eps_unbalanced(profile, flt.eps):
                yield profile
        elif isinstance(flt, EpsBalanced):
            if not is_eps_unbalanced(profile, flt.eps):
                yield profile
        else:
            raise TypeError(f"unknown filter {flt!r}")


def rerandomize(
    inst: Instance, rng: random.Random
) -> tuple[Instance, tuple[int, ...]]:
    """Flip the sign of each x_i independently with probability 1/2.

    Returns the transformed instance and the sign vector. c -> (s_i * c_i) is
    a bijection between the solutions of x and of x', so solution counts are
    preserved exactly.
    """
    signs = tuple(1 if rng.random() < 0.5 else -1 for _ in range(inst.n))
    x_new = tuple(s * v for s, v in zip(signs, inst.x))
    return Instance(x_new, inst.coeff_set), signs


def apply_signs(c: Sequence[int], signs: Sequence[int]) -> tuple[int, ...]:
    """Map a solution of the re-randomized instance back (an involution)."""
    return tuple(s * v for s, v in zip(signs, c))


# Generation modes.
@dataclass(frozen=True)
class UniformRange:
    w: int = 100


@dataclass(frozen=True)
class Planted:
    profile: SolutionProfile
    w: int = 100


GenMode = Union[UniformRange, Planted]
PLANT_RETRY_CAP = 10_000


def gen_instance(
    n: int, coeff_set: CoefficientSet, mode: GenMode, rng: random.Random
) -> tuple[Instance, Optional[Solution]]:
    """Draw an instance; for Planted mode also return the planted solution.

    UniformRange draws each x_i uniformly from [-W, W] without 0. Planted
    fixes a coefficient vector c matching the profile, draws x_1..x_{n-1},
    and solves for x_n; it resamples when c_n does not divide the partial
    sum (capped at PLANT_RETRY_CAP tries).
    """
    if isinstance(mode, UniformRange):
        if mode.w < 1:
            raise ValueError("W must be >= 1")
        x = tuple(_nonzero_uniform(mode.w, rng) for _ in range(n))
        return Instance(x, coeff_set), None

    if not isinstance(mode, Planted):
        raise TypeError(f"unknown generation mode {mode!r}")

    profile = mode.profile
    if profile.n != n:
        raise ValueError(f"profile sums to {profile.n}, expected {n}")
    if profile.coeff_set != coeff_set:
        raise ValueError("profile coefficient set differs from instance's")
    pool = [z for z, cnt in profile.as_dict().items() for _ in range(cnt)]
    if all(z == 0 for z in pool):
        raise PlantingError("profile describes the zero vector")
    if n == 1:
        # c1 * x1 = 0 with c1 != 0 forces x1 = 0, which generation excludes.
        raise PlantingError("no nonzero single-element balance exists")

    bound = MAX_DOT // (coeff_set.d * n)
    for _ in range(PLANT_RETRY_CAP):
        c = list(pool)
        rng.shuffle(c)
        nz = max(i for i, v in enumerate(c) if v != 0)
        c[nz], c[-1] = c[-1], c[nz]
        head = [_nonzero_uniform(mode.w, rng) for _ in range(n - 1)]
        partial = sum(ci * xi for ci, xi in zip(c, head))
        if partial % c[-1] != 0:
            continue
        last = -partial // c[-1]
        if last == 0 or abs(last) > bound:
            continue
        inst = Instance(tuple(head) + (last,), coeff_set)
        sol = Solution(tuple(c))
        assert is_solution(inst, sol.c)
        return inst, sol
    raise PlantingError(f"no feasible plant after {PLANT_RETRY_CAP} tries")


def _nonzero_uniform(w: int, rng: random.Random) -> int:
    v = rng.randint(1, w)
    return v if rng.random() < 0.5 else -v
