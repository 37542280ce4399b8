"""Acceptance-count sets, their registry, and the checks run against them.

An acceptance set ``S`` is a set of positive integers. A counting machine
obeys the ``S`` discipline when it has a count in ``S`` on every accepted input
and no accepting paths on every rejected one.
"""
import logging
import math
import re
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Iterator, Sequence
from functools import partial
from pathlib import Path
from typing import Optional, overload

from pydantic import BaseModel

from eplib.errors import EmptySet, InputError, SetExhausted, UnknownAcceptanceSet


__all__ = [
    "AcceptanceSet",
    "PowersOf",
    "PowersOfTwo",
    "NonMultiplesOf",
    "DoublyExponential",
    "ExplicitFinite",
    "Verdict",
    "register_acceptance_set",
    "parse_acceptance_set",
    "check_non_gappy",
    "check_rc_discipline",
    "conjunctive_count",
]

logger = logging.getLogger(__name__)


class AcceptanceSet(ABC):
    name: str
    non_gappy_constant: Optional[int] = None

    @abstractmethod
    def contains(self, n: int) -> bool: ...

    @abstractmethod
    def next_geq(self, n: int) -> int:
        """Least member ``>= n``."""

    @property
    def least_element(self) -> int:
        return self.next_geq(0)

    def iter_members(self) -> Iterator[int]:
        m = self.least_element
        while True:
            yield m
            try:
                m = self.next_geq(m + 1)
            except SetExhausted:
                return

    def print_up_to(self, bound: int) -> list[int]:
        members = []
        for m in self.iter_members():
            if m > bound:
                break
            members.append(m)
        return members

    def __contains__(self, n: int) -> bool:
        return self.contains(n)

    def __repr__(self):
        return "%s(%r)" % (type(self).__name__, self.name)


acceptance_set_registry: dict[str, Callable[[Optional[str]], AcceptanceSet]] = {}

ALIASES = {
    "pow2": "pow:2",
    "pow4": "pow:4",
    "odd": "nonmult:2",
}


@overload
def register_acceptance_set(prefix: str, factory: Callable[[Optional[str]], AcceptanceSet]) -> Callable[[Optional[str]], AcceptanceSet]: ...

@overload
def register_acceptance_set(prefix: str) -> partial: ...

def register_acceptance_set(prefix: str, factory: Optional[Callable[[Optional[str]], AcceptanceSet]]=None):
    if factory is None:
        return partial(register_acceptance_set, prefix)

    if prefix in acceptance_set_registry:
        msg = f"An acceptance set is already registered for {prefix!r}"
        raise KeyError(msg)
    acceptance_set_registry[prefix] = factory
    return factory


def parse_acceptance_set(name: str) -> AcceptanceSet:
    """Build a set from names such as ``pow2``, ``pow:3``, ``nonmult:5`` or ``finite:1,2,4``."""
    name = ALIASES.get(name.strip(), name.strip())
    (prefix, _, argument) = name.partition(":")
    factory = acceptance_set_registry.get(prefix)
    if factory is None:
        msg = f"Unknown acceptance set {name!r}; expected one of {sorted(set(acceptance_set_registry) | set(ALIASES))}"
        raise UnknownAcceptanceSet(msg)
    return factory(argument or None)


def _int_argument(prefix: str, argument: Optional[str], minimum: int) -> int:
    try:
        value = int(argument or "")
    except ValueError:
        msg = f"{prefix}:<int> needs an integer argument, got {argument!r}"
        raise UnknownAcceptanceSet(msg) from None
    if value < minimum:
        msg = f"{prefix}:{value} needs an argument of at least {minimum}"
        raise UnknownAcceptanceSet(msg)
    return value


class PowersOf(AcceptanceSet):
    """``{q^i : i >= 0}``; non-gappy with constant ``q``."""

    def __init__(self, q: int):
        if q < 2:
            msg = f"Powers of {q} do not form an infinite set"
            raise InputError(msg)
        self.q = q
        self.name = f"pow:{q}"
        self.non_gappy_constant = q

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        while n % self.q == 0:
            n //= self.q
        return n == 1

    def next_geq(self, n: int) -> int:
        m = 1
        while m < n:
            m *= self.q
        return m


class PowersOfTwo(PowersOf):
    def __init__(self):
        super().__init__(2)
        self.name = "pow2"

    def contains(self, n: int) -> bool:
        return n > 0 and n & (n - 1) == 0

    def next_geq(self, n: int) -> int:
        return 1 if n <= 1 else 1 << (n - 1).bit_length()


@register_acceptance_set("pow")
def _powers_of(argument: Optional[str]) -> AcceptanceSet:
    q = _int_argument("pow", argument, 2)
    return PowersOfTwo() if q == 2 else PowersOf(q)


class NonMultiplesOf(AcceptanceSet):
    """Positive integers not divisible by ``k``."""

    def __init__(self, k: int):
        if k < 2:
            msg = f"Every integer is a multiple of {k}"
            raise InputError(msg)
        self.k = k
        self.name = f"nonmult:{k}"
        # 1 -> 3 is the widest gap for odd numbers, k-1 -> k+1 otherwise
        self.non_gappy_constant = 3 if k == 2 else 2

    def contains(self, n: int) -> bool:
        return n >= 1 and n % self.k != 0

    def next_geq(self, n: int) -> int:
        n = max(n, 1)
        return n + 1 if n % self.k == 0 else n


@register_acceptance_set("nonmult")
def _non_multiples_of(argument: Optional[str]) -> AcceptanceSet:
    return NonMultiplesOf(_int_argument("nonmult", argument, 2))


class DoublyExponential(AcceptanceSet):
    """``{2^(2^i) : i >= 0}``: P-printable but not non-gappy."""

    name = "doublyexp"

    def contains(self, n: int) -> bool:
        if n < 2 or n & (n - 1):
            return False
        e = n.bit_length() - 1
        return e & (e - 1) == 0

    def next_geq(self, n: int) -> int:
        e = 1
        while 1 << e < n:
            e <<= 1
        return 1 << e


@register_acceptance_set("doublyexp")
def _doubly_exponential(argument: Optional[str]) -> AcceptanceSet:
    return DoublyExponential()


class ExplicitFinite(AcceptanceSet):
    """A finite set given by its members; ``{1}`` is the unique-path discipline."""

    def __init__(self, members: Iterable[int], name: Optional[str] = None):
        values = sorted(set(members))
        if not values:
            msg = "An explicit acceptance set needs at least one member"
            raise EmptySet(msg)
        if values[0] < 1:
            msg = f"Acceptance counts must be positive, got {values[0]}"
            raise InputError(msg)
        self.members: tuple[int, ...] = tuple(values)
        self.name = name or "finite:" + ",".join(str(m) for m in values)

    def contains(self, n: int) -> bool:
        return n in self.members

    def next_geq(self, n: int) -> int:
        for m in self.members:
            if m >= n:
                return m
        msg = f"No member of {self.name} is >= {n}"
        raise SetExhausted(msg)


_SEPARATORS = re.compile(r"[\s,]+")


def _parse_members(text: str) -> list[int]:
    try:
        return [int(token) for token in _SEPARATORS.split(text.strip()) if token]
    except ValueError as e:
        msg = f"Acceptance set members must be integers: {e}"
        raise InputError(msg) from e


@register_acceptance_set("finite")
def _explicit_finite(argument: Optional[str]) -> AcceptanceSet:
    return ExplicitFinite(_parse_members(argument or ""))


@register_acceptance_set("file")
def _from_file(argument: Optional[str]) -> AcceptanceSet:
    if not argument:
        msg = "file:<path> needs a path"
        raise UnknownAcceptanceSet(msg)
    try:
        text = Path(argument).read_text()
    except OSError as e:
        msg = f"Cannot read acceptance set from {argument}: {e}"
        raise InputError(msg) from e
    return ExplicitFinite(_parse_members(text), name=f"file:{argument}")


class Verdict(BaseModel):
    passed: bool
    violations: list[int] = []
    exhaustive: bool = True
    detail: str = ""


def check_non_gappy(s: AcceptanceSet, k: int, bound: int) -> Verdict:
    """Every member ``n <= bound`` must have a member ``m`` with ``n < m <= k*n``."""
    if k < 1:
        msg = f"Gap constant must be at least 1, got {k}"
        raise InputError(msg)
    members = s.print_up_to(bound)
    if not members:
        msg = f"{s.name} has no members up to {bound}"
        raise EmptySet(msg)

    violations = []
    for n in members:
        try:
            m = s.next_geq(n + 1)
        except SetExhausted:
            violations.append(n)
            continue
        if m > k * n:
            violations.append(n)

    logger.warning("non-gappy check of %s with k=%d holds only up to bound %d", s.name, k, bound)
    return Verdict(passed=not violations, violations=violations, exhaustive=False, detail=f"up to bound {bound}")


def check_rc_discipline(counts: Iterable[tuple[bool | int, int]], s: AcceptanceSet) -> Verdict:
    """Violations are positions in ``counts``."""
    violations = []
    for (position, (in_language, count)) in enumerate(counts):
        ok = s.contains(count) if in_language else count == 0
        if not ok:
            violations.append(position)
    return Verdict(passed=not violations, violations=violations)


def conjunctive_count(counts: Sequence[int]) -> int:
    """Accepting paths of the product machine running each machine in turn."""
    return math.prod(counts)
