"""Amplifying a few-path count into any non-gappy, printable acceptance set.

A machine with ``m <= p`` accepting paths is turned into one that, for each
``i``, guesses an unordered ``i``-tuple of distinct paths and splits into
``c_i`` accepting paths when all of them accept. The new count is
``sum(C(m, i) * c_i)``. The constants are chosen greedily: ``c_i = a_i - b_i``
where ``b_i = sum(C(i, k) * c_k for k < i)`` and ``a_i`` is the least member of
the set that is ``>= b_i``. With the empty sum ``b_1 = 0`` this makes ``c_1``
the least member.
"""
import logging
import math
from collections.abc import Iterator

from pydantic import BaseModel, ConfigDict, Field, computed_field

from eplib.acceptance import AcceptanceSet, Verdict
from eplib.errors import InputError, OutOfRange, TooManyPaths


__all__ = [
    "MAX_RUN_PATHS",
    "MAX_CONSTANT_BITS",
    "AmplifierTable",
    "FewRun",
    "build_constants",
    "amplified_count",
    "guessed_tuples",
    "simulate_amplifier",
    "verify_growth",
    "check_membership",
]

logger = logging.getLogger(__name__)

MAX_RUN_PATHS = 20
MAX_CONSTANT_BITS = 1 << 16


class AmplifierTable(BaseModel):
    """Constants for ``p`` paths; ``c[i-1]`` holds ``c_i`` and likewise for ``a`` and ``b``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    acceptance: AcceptanceSet = Field(exclude=True)
    p: int
    c: list[int]
    b: list[int]
    a: list[int]

    @computed_field
    @property
    def set_name(self) -> str:
        return self.acceptance.name


class FewRun(BaseModel):
    """Outcomes of every path of a few-path machine on one input."""

    model_config = ConfigDict(frozen=True)

    outcomes: tuple[bool, ...]

    @classmethod
    def from_pattern(cls, pattern: str) -> "FewRun":
        """``"ARA"`` is accept, reject, accept."""
        pattern = pattern.strip().upper()
        if any(ch not in "AR" for ch in pattern):
            msg = f"Run pattern {pattern!r} may only contain A and R"
            raise InputError(msg)
        return cls(outcomes=tuple(ch == "A" for ch in pattern))

    @classmethod
    def from_mask(cls, mask: int, paths: int) -> "FewRun":
        return cls(outcomes=tuple(bool(mask >> i & 1) for i in range(paths)))

    @property
    def accepting(self) -> int:
        return sum(self.outcomes)

    @property
    def pattern(self) -> str:
        return "".join("A" if ok else "R" for ok in self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)


def build_constants(s: AcceptanceSet, p: int) -> AmplifierTable:
    if p < 1:
        msg = f"Path bound must be at least 1, got p={p}"
        raise OutOfRange(msg)

    c: list[int] = []
    b: list[int] = []
    a: list[int] = []
    for i in range(1, p + 1):
        b_i = sum(math.comb(i, k) * c[k - 1] for k in range(1, i))
        a_i = s.next_geq(b_i)
        if a_i.bit_length() > MAX_CONSTANT_BITS:
            msg = f"Constant a_{i} for {s.name} needs {a_i.bit_length()} bits (limit is {MAX_CONSTANT_BITS}); lower p"
            raise OutOfRange(msg)
        b.append(b_i)
        a.append(a_i)
        c.append(a_i - b_i)
    logger.debug("amplifier constants for %s, p=%d: c=%s", s.name, p, c[:8])
    return AmplifierTable(acceptance=s, p=p, c=c, b=b, a=a)


def amplified_count(t: AmplifierTable, m: int) -> int:
    if not 0 <= m <= t.p:
        msg = f"Accepting path count m={m} is outside 0..{t.p}"
        raise OutOfRange(msg)
    return sum(math.comb(m, i) * t.c[i - 1] for i in range(1, m + 1))


def guessed_tuples(run: FewRun, p: int) -> Iterator[tuple[int, bool]]:
    """Every nonempty set of at most ``p`` paths, as a bit mask, and whether all of its members accept."""
    reject_mask = sum(1 << i for (i, ok) in enumerate(run.outcomes) if not ok)
    for subset in range(1, 1 << len(run)):
        if subset.bit_count() <= p:
            yield (subset, not subset & reject_mask)


def simulate_amplifier(t: AmplifierTable, run: FewRun) -> int:
    """Count accepting paths of the amplified machine by walking every guessed tuple.

    A guessed ``i``-tuple splits into ``c_i`` accepting paths when none of its
    members rejects, and into nothing otherwise.
    """
    if len(run) > MAX_RUN_PATHS:
        msg = f"Run has {len(run)} paths; simulation is limited to {MAX_RUN_PATHS}"
        raise TooManyPaths(msg)
    if run.accepting > t.p:
        msg = f"Run has {run.accepting} accepting paths but the table only covers p={t.p}"
        raise OutOfRange(msg)

    total = 0
    for (subset, accepted) in guessed_tuples(run, t.p):
        if accepted:
            total += t.c[subset.bit_count() - 1]
    return total


def verify_growth(t: AmplifierTable, k: int) -> Verdict:
    """Check each ``c_j`` against the largest-binomial bound and ``log2(1 + c_j) <= 2j^2``.

    Violations are the failing ``j``.
    """
    violations = []
    for j in range(2, t.p + 1):
        c_j = t.c[j - 1]
        largest = max(t.c[: j - 1])
        binomial_bound = k * (j - 1) * math.comb(j, math.ceil(j / 2)) * largest
        # 1 + c_j <= 2^(2j^2) iff c_j < 2^(2j^2)
        if c_j > binomial_bound or c_j.bit_length() > 2 * j * j:
            violations.append(j)
    return Verdict(passed=not violations, violations=violations)


def check_membership(t: AmplifierTable) -> Verdict:
    """Every ``1 <= m <= p`` must amplify into the set, and ``m = 0`` to zero."""
    violations = [m for m in range(1, t.p + 1) if not t.acceptance.contains(amplified_count(t, m))]
    if amplified_count(t, 0) != 0:
        violations.insert(0, 0)
    return Verdict(passed=not violations, violations=violations)
