"""Reduced ordered binary decision diagrams.

A :class:`Manager` owns one variable order, the node store, the unique table
and the operation cache. Nodes are integers: ``0`` and ``1`` are the FALSE and
TRUE terminals, every other id indexes a ``(level, lo, hi)`` record. Because
the unique table is shared, two diagrams of one manager denote the same
function exactly when their roots are equal.

A manager is a single-writer structure: building operations must not run
concurrently on the same manager. Finished diagrams are read-only.
"""
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Callable, Optional

from eplib.errors import BadOrder, InputError, InvariantViolation, LengthMismatch, OrderMismatch, UnknownVariable
from eplib.formula import And, Formula, Node, Not, Or, Variable, check_brute_size, column_masks
from eplib.gf2 import GF2Vector


__all__ = [
    "BoolOp",
    "Manager",
    "Obdd",
    "FALSE",
    "TRUE",
    "build",
    "apply",
    "ite",
    "negate",
    "negate_inputs",
    "equivalent",
    "count_models",
    "restrict",
    "forall_quantify",
    "exists_quantify",
    "transfer",
    "iter_models",
    "evaluate",
    "truth_mask",
]

logger = logging.getLogger(__name__)

FALSE = 0
TRUE = 1


class BoolOp(StrEnum):
    AND = "and"
    OR = "or"
    XOR = "xor"
    XNOR = "xnor"


_OPERATORS: dict[BoolOp, Callable[[int, int], int]] = {
    BoolOp.AND: lambda a, b: a & b,
    BoolOp.OR: lambda a, b: a | b,
    BoolOp.XOR: lambda a, b: a ^ b,
    BoolOp.XNOR: lambda a, b: 1 ^ a ^ b,
}


def _shortcut(op: BoolOp, u: int, v: int) -> Optional[int]:
    if u <= TRUE and v <= TRUE:
        return _OPERATORS[op](u, v)
    match op:
        case BoolOp.AND:
            if u == FALSE or v == FALSE:
                return FALSE
            if u == TRUE or u == v:
                return v
            if v == TRUE:
                return u
        case BoolOp.OR:
            if u == TRUE or v == TRUE:
                return TRUE
            if u == FALSE or u == v:
                return v
            if v == FALSE:
                return u
        case BoolOp.XOR:
            if u == v:
                return FALSE
            if u == FALSE:
                return v
            if v == FALSE:
                return u
        case BoolOp.XNOR:
            if u == v:
                return TRUE
            if u == TRUE:
                return v
            if v == TRUE:
                return u
    return None


class Manager:
    order: tuple[int, ...]
    level_of: dict[int, int]

    def __init__(self, order: Sequence[int]):
        order = tuple(order)
        if sorted(order) != list(range(1, len(order) + 1)):
            msg = f"Variable order {list(order)} is not a permutation of 1..{len(order)}"
            raise BadOrder(msg)

        self.order = order
        self.level_of = {var: level for (level, var) in enumerate(order)}
        terminal_level = len(order)
        self._nodes: list[tuple[int, int, int]] = [(terminal_level, -1, -1), (terminal_level, -1, -1)]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}

    @classmethod
    def identity(cls, n: int) -> "Manager":
        return cls(range(1, n + 1))

    @property
    def var_count(self) -> int:
        return len(self.order)

    @property
    def true(self) -> "Obdd":
        return Obdd(self, TRUE)

    @property
    def false(self) -> "Obdd":
        return Obdd(self, FALSE)

    def __len__(self) -> int:
        return len(self._nodes)

    def __repr__(self):
        return "%s(order=%r, nodes=%d)" % (type(self).__name__, list(self.order), len(self._nodes))

    def node(self, u: int) -> tuple[int, int, int]:
        return self._nodes[u]

    def level(self, u: int) -> int:
        return self._nodes[u][0]

    def var_at(self, level: int) -> int:
        return self.order[level]

    def mk(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        u = self._unique.get(key)
        if u is None:
            u = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = u
        return u

    def var(self, i: int) -> "Obdd":
        if i not in self.level_of:
            msg = f"Variable x{i} is not in the order {list(self.order)}"
            raise UnknownVariable(msg)
        return Obdd(self, self.mk(self.level_of[i], FALSE, TRUE))

    def cofactors(self, u: int, level: int) -> tuple[int, int]:
        u_level, lo, hi = self._nodes[u]
        if u_level == level:
            return (lo, hi)
        return (u, u)

    def apply(self, op: BoolOp, u: int, v: int) -> int:
        result = _shortcut(op, u, v)
        if result is not None:
            return result

        # every operator here is commutative
        key = (op, min(u, v), max(u, v))
        if key in self._cache:
            return self._cache[key]

        top = min(self.level(u), self.level(v))
        (u0, u1) = self.cofactors(u, top)
        (v0, v1) = self.cofactors(v, top)
        result = self.mk(top, self.apply(op, u0, v0), self.apply(op, u1, v1))
        self._cache[key] = result
        return result

    def ite(self, c: int, t: int, e: int) -> int:
        if c == TRUE or t == e:
            return t
        if c == FALSE:
            return e
        if t == TRUE and e == FALSE:
            return c

        key = ("ite", c, t, e)
        if key in self._cache:
            return self._cache[key]

        top = min(self.level(c), self.level(t), self.level(e))
        (c0, c1) = self.cofactors(c, top)
        (t0, t1) = self.cofactors(t, top)
        (e0, e1) = self.cofactors(e, top)
        result = self.mk(top, self.ite(c0, t0, e0), self.ite(c1, t1, e1))
        self._cache[key] = result
        return result

    def restrict(self, u: int, level: int, value: int) -> int:
        u_level, lo, hi = self._nodes[u]
        if u_level > level:
            return u
        if u_level == level:
            return hi if value else lo

        key = ("restrict", u, level, value)
        if key in self._cache:
            return self._cache[key]
        result = self.mk(u_level, self.restrict(lo, level, value), self.restrict(hi, level, value))
        self._cache[key] = result
        return result

    def reachable(self, root: int) -> list[int]:
        seen = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            if u <= TRUE:
                continue
            (_, lo, hi) = self._nodes[u]
            for child in (lo, hi):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return sorted(seen)

    def verify(self):
        """Scan the whole store for ordering, reduction and unique-table violations."""
        if len(self._unique) != len(self._nodes) - 2:
            msg = f"Unique table holds {len(self._unique)} entries for {len(self._nodes) - 2} nodes"
            raise InvariantViolation(msg)
        for u in range(2, len(self._nodes)):
            (level, lo, hi) = self._nodes[u]
            if lo == hi:
                msg = f"Node {u} has identical children {lo}"
                raise InvariantViolation(msg)
            if not (level < self.level(lo) and level < self.level(hi)):
                msg = f"Node {u} at level {level} has a child at the same or a lower level"
                raise InvariantViolation(msg)
            if self._unique.get((level, lo, hi)) != u:
                msg = f"Node {u} is not the unique representative of {(level, lo, hi)}"
                raise InvariantViolation(msg)


@dataclass(frozen=True)
class Obdd:
    manager: Manager
    root: int

    @property
    def is_true(self) -> bool:
        return self.root == TRUE

    @property
    def is_false(self) -> bool:
        return self.root == FALSE

    @property
    def var_count(self) -> int:
        return self.manager.var_count

    @property
    def order(self) -> tuple[int, ...]:
        return self.manager.order

    def nodes(self) -> list[int]:
        """Decision nodes reachable from the root."""
        return [u for u in self.manager.reachable(self.root) if u > TRUE]

    def size(self) -> int:
        return len(self.nodes())

    def __repr__(self):
        return "%s(root=%d, size=%d, order=%r)" % (type(self).__name__, self.root, self.size(), list(self.order))


def _align(a: Obdd, b: Obdd) -> Obdd:
    if a.manager is b.manager:
        return b
    if a.manager.order != b.manager.order:
        msg = f"Cannot combine diagrams over orders {list(a.order)} and {list(b.order)}"
        raise OrderMismatch(msg)
    return transfer(b, a.manager)


def build(f: Formula, order: Optional[Sequence[int]]=None, manager: Optional[Manager]=None) -> Obdd:
    if manager is None:
        manager = Manager(range(1, f.var_count + 1) if order is None else order)
    elif order is not None and tuple(order) != manager.order:
        msg = f"Order {list(order)} differs from the manager's order {list(manager.order)}"
        raise OrderMismatch(msg)

    if manager.var_count != f.var_count:
        msg = f"Order {list(manager.order)} does not cover the {f.var_count} variables of the formula"
        raise BadOrder(msg)

    # keyed by identity; the tree outlives the walk
    memo: dict[int, int] = {}
    stack: list[tuple[Node, bool]] = [(f.root, False)]
    while stack:
        (node, expanded) = stack.pop()
        if id(node) in memo:
            continue
        match node:
            case Variable(index):
                memo[id(node)] = manager.var(index).root
            case Not(child) if expanded:
                memo[id(node)] = manager.apply(BoolOp.XOR, memo[id(child)], TRUE)
            case And(left, right) if expanded:
                memo[id(node)] = manager.apply(BoolOp.AND, memo[id(left)], memo[id(right)])
            case Or(left, right) if expanded:
                memo[id(node)] = manager.apply(BoolOp.OR, memo[id(left)], memo[id(right)])
            case Not(child):
                stack.extend([(node, True), (child, False)])
            case And(left, right) | Or(left, right):
                stack.extend([(node, True), (left, False), (right, False)])
            case _:  # pragma: nocover
                raise TypeError(type(node), node)

    result = Obdd(manager, memo[id(f.root)])
    logger.debug("built %r; manager holds %d nodes", result, len(manager))
    return result


def apply(op: BoolOp | str, a: Obdd, b: Obdd) -> Obdd:
    b = _align(a, b)
    return Obdd(a.manager, a.manager.apply(BoolOp(op), a.root, b.root))


def negate(a: Obdd) -> Obdd:
    return Obdd(a.manager, a.manager.apply(BoolOp.XOR, a.root, TRUE))


def ite(c: Obdd, t: Obdd, e: Obdd) -> Obdd:
    t = _align(c, t)
    e = _align(c, e)
    return Obdd(c.manager, c.manager.ite(c.root, t.root, e.root))


def negate_inputs(g: Obdd, v: GF2Vector) -> Obdd:
    """The diagram of ``g_v(u) = g(v XOR u)``: children swap at every flipped variable."""
    manager = g.manager
    if len(v) != manager.var_count:
        msg = f"Negation vector of length {len(v)} does not match {manager.var_count} variables"
        raise LengthMismatch(msg)

    flipped = {manager.level_of[i + 1] for (i, bit) in enumerate(v) if bit}
    if not flipped:
        return g

    memo: dict[int, int] = {}

    def swap(u: int) -> int:
        if u <= TRUE:
            return u
        if u in memo:
            return memo[u]
        (level, lo, hi) = manager.node(u)
        (lo, hi) = (swap(lo), swap(hi))
        if level in flipped:
            (lo, hi) = (hi, lo)
        memo[u] = manager.mk(level, lo, hi)
        return memo[u]

    return Obdd(manager, swap(g.root))


def equivalent(a: Obdd, b: Obdd) -> bool:
    b = _align(a, b)
    return a.root == b.root


def count_models(a: Obdd, n: Optional[int]=None) -> int:
    manager = a.manager
    k = manager.var_count
    if n is None:
        n = k
    if n < k:
        msg = f"Cannot count models over {n} variables for a diagram over {k}"
        raise InputError(msg)

    memo: dict[int, int] = {FALSE: 0, TRUE: 1}

    def count(u: int) -> int:
        if u in memo:
            return memo[u]
        (level, lo, hi) = manager.node(u)
        memo[u] = (count(lo) << (manager.level(lo) - level - 1)) + (count(hi) << (manager.level(hi) - level - 1))
        return memo[u]

    return count(a.root) << manager.level(a.root) << (n - k)


def _levels(manager: Manager, variables: Iterable[int]) -> list[int]:
    levels = []
    for i in variables:
        if i not in manager.level_of:
            msg = f"Variable x{i} is not in the order {list(manager.order)}"
            raise UnknownVariable(msg)
        levels.append(manager.level_of[i])
    return sorted(levels)


def restrict(a: Obdd, i: int, value: int) -> Obdd:
    (level,) = _levels(a.manager, [i])
    return Obdd(a.manager, a.manager.restrict(a.root, level, value))


def _quantify(a: Obdd, variables: Iterable[int], op: BoolOp) -> Obdd:
    manager = a.manager
    root = a.root
    for level in reversed(_levels(manager, variables)):
        root = manager.apply(op, manager.restrict(root, level, 0), manager.restrict(root, level, 1))
    return Obdd(manager, root)


def forall_quantify(a: Obdd, variables: Iterable[int]) -> Obdd:
    return _quantify(a, variables, BoolOp.AND)


def exists_quantify(a: Obdd, variables: Iterable[int]) -> Obdd:
    return _quantify(a, variables, BoolOp.OR)


def transfer(a: Obdd, target: Manager, substitution: Optional[Mapping[int, Obdd]]=None) -> Obdd:
    """Rebuild ``a`` inside ``target``, replacing variable ``x_i`` by ``substitution[i]``.

    Variables without a substitution map to the variable of the same index in
    ``target``.
    """
    source = a.manager
    substitution = substitution or {}
    if target is source and not substitution:
        return a

    replacements: dict[int, int] = {}
    for i in source.order:
        if i in substitution:
            replacement = substitution[i]
            if replacement.manager is not target:
                msg = f"Substitution for x{i} belongs to a different manager"
                raise OrderMismatch(msg)
            replacements[source.level_of[i]] = replacement.root

    memo: dict[int, int] = {}

    def walk(u: int) -> int:
        if u <= TRUE:
            return u
        if u in memo:
            return memo[u]
        (level, lo, hi) = source.node(u)
        if level in replacements:
            condition = replacements[level]
        else:
            condition = target.var(source.var_at(level)).root
        memo[u] = target.ite(condition, walk(hi), walk(lo))
        return memo[u]

    return Obdd(target, walk(a.root))


def iter_models(a: Obdd) -> Iterator[GF2Vector]:
    """Every satisfying assignment over the manager's variables, don't-cares expanded."""
    manager = a.manager
    k = manager.var_count

    def models(u: int, level: int, acc: int) -> Iterator[int]:
        if u == FALSE:
            return
        if level == k:
            yield acc
            return
        bit = 1 << (manager.var_at(level) - 1)
        if manager.level(u) > level:
            yield from models(u, level + 1, acc)
            yield from models(u, level + 1, acc | bit)
        else:
            (_, lo, hi) = manager.node(u)
            yield from models(lo, level + 1, acc)
            yield from models(hi, level + 1, acc | bit)

    for index in models(a.root, 0, 0):
        yield GF2Vector.from_index(index, k)


def evaluate(a: Obdd, u: GF2Vector) -> int:
    manager = a.manager
    if len(u) != manager.var_count:
        msg = f"Assignment of length {len(u)} does not match {manager.var_count} variables"
        raise LengthMismatch(msg)
    node = a.root
    while node > TRUE:
        (level, lo, hi) = manager.node(node)
        node = hi if u[manager.var_at(level) - 1] else lo
    return node


def truth_mask(a: Obdd) -> int:
    """Bit-parallel truth table, bit ``u`` is ``a(u)``, as :func:`eplib.formula.truth_mask`."""
    manager = a.manager
    n = manager.var_count
    check_brute_size(n)
    full = (1 << (1 << n)) - 1
    columns = column_masks(n)
    memo: dict[int, int] = {FALSE: 0, TRUE: full}

    def walk(u: int) -> int:
        if u in memo:
            return memo[u]
        (level, lo, hi) = manager.node(u)
        column = columns[manager.var_at(level) - 1]
        memo[u] = (column & walk(hi)) | ((full ^ column) & walk(lo))
        return memo[u]

    return walk(a.root)
