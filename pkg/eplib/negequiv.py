"""Negation equivalence: witness sets, stabilizers and their power-of-two counts.

``f`` and ``g`` over the same ``n`` variables are negation equivalent when
some vector ``v`` makes ``f(u) == g(v XOR u)`` for every ``u``. The set of such
``v`` is either empty or a coset ``w + V_g`` of the stabilizer
``V_g = {v : g_v == g}``, so its size is 0 or ``2^dim(V_g)``.

Two solvers are provided. ``BRUTE`` compares truth tables for every candidate
vector. ``SYMBOLIC`` builds the predicate ``f(u) XNOR g(v XOR u)`` as one
diagram and quantifies ``u`` away.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from enum import StrEnum
from itertools import repeat
from typing import Optional

from pydantic import BaseModel, ConfigDict

from eplib import obdd
from eplib.cep import is_power_of_two
from eplib.errors import InvariantViolation, NotACoset, OrderMismatch, VariableCountMismatch
from eplib.formula import Formula, check_brute_size, flip_rows, negate_mask, truth_mask
from eplib.gf2 import AffineSet, GF2Basis, GF2Vector, affine_from_indices
from eplib.obdd import BoolOp, Manager, Obdd


__all__ = [
    "BooleanFunction",
    "Method",
    "NegEquivReport",
    "self_stabilizer",
    "witnesses_brute",
    "witnesses_symbolic",
    "decide_negation_equivalence",
]

logger = logging.getLogger(__name__)

type BooleanFunction = Formula | Obdd


class Method(StrEnum):
    BRUTE = "brute"
    SYMBOLIC = "symbolic"


class NegEquivReport(BaseModel):
    """Outcome of one equivalence decision.

    ``basis`` is the reduced basis of the stabilizer of the second argument.
    When the pair is equivalent it is also the direction space of the witness
    coset.
    """

    model_config = ConfigDict(frozen=True)

    equivalent: bool
    witness_count: int
    stabilizer_dim: int
    representative: Optional[GF2Vector] = None
    basis: list[GF2Vector] = []
    method: Method
    is_power_of_two_or_zero: bool
    ambient_dim: int

    @property
    def witnesses(self) -> AffineSet:
        if self.representative is None:
            return AffineSet.EMPTY
        return AffineSet(representative=self.representative, basis=GF2Basis(rows=tuple(self.basis), ambient_dim=self.ambient_dim))

    @classmethod
    def from_witnesses(cls, witnesses: AffineSet, stabilizer: GF2Basis, method: Method) -> "NegEquivReport":
        """Assemble a report, checking ``witnesses`` is empty or a coset of ``stabilizer``."""
        count = witnesses.cardinality
        if witnesses.basis is not None and witnesses.basis != stabilizer:
            msg = (
                f"Witness set of size {count} through {witnesses.representative} is a coset of a {witnesses.basis.dim}-dimensional "
                f"space, not of the {stabilizer.dim}-dimensional stabilizer"
            )
            raise NotACoset(msg)

        report = cls(
            equivalent=count >= 1,
            witness_count=count,
            stabilizer_dim=stabilizer.dim,
            representative=witnesses.representative,
            basis=list(stabilizer.rows),
            method=method,
            is_power_of_two_or_zero=count == 0 or is_power_of_two(count),
            ambient_dim=stabilizer.ambient_dim,
        )
        if not report.is_power_of_two_or_zero:
            msg = f"Witness count {count} is neither 0 nor a power of two"
            raise InvariantViolation(msg)
        return report


def _var_count(x: BooleanFunction) -> int:
    return x.var_count


def _check_counts(n: int, *functions: BooleanFunction):
    for x in functions:
        if _var_count(x) != n:
            msg = f"Function over {_var_count(x)} variables where {n} were expected; both sides must be over the same x1..x{n}"
            raise VariableCountMismatch(msg)


def _mask(x: BooleanFunction) -> int:
    if isinstance(x, Obdd):
        return obdd.truth_mask(x)
    return truth_mask(x)


def _scan_block(f_mask: int, g_mask: int, n: int, prefix: int, low_bits: int) -> list[int]:
    """Witnesses ``v`` whose bits above ``low_bits`` equal ``prefix``.

    The low bits are walked in Gray-code order so each step is one row swap.
    """
    mask = negate_mask(g_mask, prefix << low_bits, n)
    v = prefix << low_bits
    found = []
    if mask == f_mask:
        found.append(v)
    for step in range(1, 1 << low_bits):
        i = (step & -step).bit_length() - 1
        mask = flip_rows(mask, i, n)
        v ^= 1 << i
        if mask == f_mask:
            found.append(v)
    return found


def _scan(f_mask: int, g_mask: int, n: int, workers: Optional[int]) -> list[int]:
    if not workers or workers <= 1 or n < 2:
        return _scan_block(f_mask, g_mask, n, 0, n)

    high_bits = min(n - 1, (workers * 4 - 1).bit_length())
    low_bits = n - high_bits
    prefixes = range(1 << high_bits)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        blocks = executor.map(_scan_block, repeat(f_mask), repeat(g_mask), repeat(n), prefixes, repeat(low_bits))
        found = [v for block in blocks for v in block]
    logger.debug("scanned 2^%d candidates in %d blocks across %d workers", n, len(prefixes), workers)
    return found


def witnesses_brute(f: BooleanFunction, g: BooleanFunction, n: int, workers: Optional[int] = None) -> AffineSet:
    _check_counts(n, f, g)
    check_brute_size(n)
    found = _scan(_mask(f), _mask(g), n, workers)
    logger.debug("brute scan over n=%d found %d witnesses", n, len(found))
    return affine_from_indices(found, n)


def _as_obdd(x: BooleanFunction, order: Optional[tuple[int, ...]]) -> Obdd:
    if isinstance(x, Obdd):
        return x
    return obdd.build(x, order=order)


def _symbolic_operands(f: BooleanFunction, g: BooleanFunction) -> tuple[Obdd, Obdd]:
    order = next((x.order for x in (f, g) if isinstance(x, Obdd)), None)
    (a, b) = (_as_obdd(f, order), _as_obdd(g, order))
    if a.order != b.order:
        msg = f"Cannot compare diagrams over orders {list(a.order)} and {list(b.order)}"
        raise OrderMismatch(msg)
    return (a, b)


def witnesses_symbolic(f: BooleanFunction, g: BooleanFunction) -> tuple[Obdd, int]:
    """Diagram over ``x1..xn`` whose models are the witness vectors, and their number.

    Internally ``v_i`` is variable ``2i-1`` and ``u_i`` is ``2i`` of a combined
    manager whose order interleaves them along the input order.
    """
    (a, b) = _symbolic_operands(f, g)
    order = a.order
    n = len(order)

    combined = Manager([w for i in order for w in (2 * i - 1, 2 * i)])
    u = {i: combined.var(2 * i) for i in order}
    v = {i: combined.var(2 * i - 1) for i in order}

    f_u = obdd.transfer(a, combined, u)
    g_vu = obdd.transfer(b, combined, {i: obdd.apply(BoolOp.XOR, v[i], u[i]) for i in order})
    predicate = obdd.apply(BoolOp.XNOR, f_u, g_vu)
    quantified = obdd.forall_quantify(predicate, [2 * i for i in order])

    target = Manager(order)
    witness = obdd.transfer(quantified, target, {2 * i - 1: target.var(i) for i in order})
    count = obdd.count_models(witness, n)
    logger.debug("symbolic witness diagram has %d nodes, combined manager %d", witness.size(), len(combined))
    return (witness, count)


def _affine_from_obdd(witness: Obdd, n: int) -> AffineSet:
    return affine_from_indices([v.to_index() for v in obdd.iter_models(witness)], n)


def self_stabilizer(g: BooleanFunction, n: int, method: Method | str = Method.BRUTE, workers: Optional[int] = None) -> GF2Basis:
    """Basis of ``V_g``: the negation vectors that leave ``g`` unchanged."""
    match Method(method):
        case Method.BRUTE:
            stabilizer = witnesses_brute(g, g, n, workers=workers)
        case Method.SYMBOLIC:
            _check_counts(n, g)
            (witness, _) = witnesses_symbolic(g, g)
            stabilizer = _affine_from_obdd(witness, n)

    if stabilizer.basis is None or not stabilizer.contains(GF2Vector.zeros(n)):
        msg = f"Stabilizer of {g} does not contain the zero vector"
        raise InvariantViolation(msg)
    return stabilizer.basis


def decide_negation_equivalence(
    f: BooleanFunction,
    g: BooleanFunction,
    n: int,
    method: Method | str = Method.BRUTE,
    workers: Optional[int] = None,
) -> NegEquivReport:
    _check_counts(n, f, g)
    method = Method(method)

    match method:
        case Method.BRUTE:
            witnesses = witnesses_brute(f, g, n, workers=workers)
        case Method.SYMBOLIC:
            (witness, count) = witnesses_symbolic(f, g)
            witnesses = _affine_from_obdd(witness, n)
            if witnesses.cardinality != count:
                msg = f"Model count {count} disagrees with {witnesses.cardinality} enumerated witnesses"
                raise InvariantViolation(msg)

    stabilizer = self_stabilizer(g, n, method=method, workers=workers)
    report = NegEquivReport.from_witnesses(witnesses, stabilizer, method)
    logger.info("negation equivalence decided: method=%s n=%d witnesses=%d", method.name, n, report.witness_count)
    return report


