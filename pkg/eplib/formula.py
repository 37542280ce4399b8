"""Boolean formulas over ``x1..xn``: grammar, evaluation and input negation.

Variables are 1-based in the surface syntax and 0-based everywhere else: bit
``i`` of an assignment (or of a truth-table row number) is the value of
``x_{i+1}``.
"""
from dataclasses import dataclass
from functools import cache
from typing import Union

import pyparsing as pp

from eplib.errors import FormulaSyntaxError, LengthMismatch, TooManyVariables, VariableOutOfRange
from eplib.gf2 import GF2Vector


__all__ = [
    "Variable",
    "Not",
    "And",
    "Or",
    "Node",
    "Formula",
    "MAX_BRUTE_VARIABLES",
    "MAX_FORMULA_DEPTH",
    "parse_formula",
    "evaluate",
    "apply_negation_vector",
    "truth_table",
    "truth_mask",
    "column_masks",
    "check_brute_size",
    "flip_rows",
    "negate_mask",
    "to_text",
]

MAX_BRUTE_VARIABLES = 24
MAX_FORMULA_DEPTH = 200


@dataclass(frozen=True, slots=True)
class Variable:
    index: int


@dataclass(frozen=True, slots=True)
class Not:
    child: "Node"


@dataclass(frozen=True, slots=True)
class And:
    left: "Node"
    right: "Node"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Node"
    right: "Node"


Node = Union[Variable, Not, And, Or]


def _children(node: Node) -> tuple[Node, ...]:
    match node:
        case Variable():
            return ()
        case Not(child):
            return (child,)
        case And(left, right) | Or(left, right):
            return (left, right)
    raise TypeError(type(node), node)  # pragma: nocover


def _variables(node: Node) -> set[int]:
    found = set()
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, Variable):
            found.add(item.index)
        else:
            stack.extend(_children(item))
    return found


def _depth(node: Node) -> int:
    deepest = 0
    stack = [(node, 1)]
    while stack:
        (item, depth) = stack.pop()
        deepest = max(deepest, depth)
        stack.extend((child, depth + 1) for child in _children(item))
    return deepest


@dataclass(frozen=True, slots=True)
class Formula:
    root: Node
    var_count: int

    def __post_init__(self):
        if self.var_count < 1:
            msg = f"A formula needs at least one variable, got n={self.var_count}"
            raise VariableOutOfRange(msg)
        out_of_range = sorted(i for i in _variables(self.root) if not 1 <= i <= self.var_count)
        if out_of_range:
            msg = f"Variables {['x%d' % i for i in out_of_range]} are outside x1..x{self.var_count}"
            raise VariableOutOfRange(msg)

    def variables(self) -> set[int]:
        return _variables(self.root)

    def depth(self) -> int:
        return _depth(self.root)

    def __str__(self):
        return to_text(self)


OrOp = pp.Suppress(pp.one_of("| ∨"))
AndOp = pp.Suppress(pp.one_of("& ∧"))
NotOp = pp.Suppress(pp.one_of("! ¬"))

Var = pp.Combine(pp.Suppress(pp.Literal("x")) + pp.Word(pp.nums)).set_parse_action(lambda toks: Variable(int(toks[0])))

def _balanced(op: type, operands: list[Node]) -> Node:
    """Pair up neighbours until one node is left; three operands still nest to the left."""
    while len(operands) > 1:
        paired = [op(operands[i], operands[i + 1]) for i in range(0, len(operands) - 1, 2)]
        if len(operands) % 2:
            paired.append(operands[-1])
        operands = paired
    return operands[0]


Expr = pp.Forward()
Factor = pp.Forward()

Factor <<= (NotOp + Factor).set_parse_action(lambda toks: Not(toks[0])) | (pp.Suppress("(") + Expr + pp.Suppress(")")) | Var
Term = (Factor + pp.ZeroOrMore(AndOp + Factor)).set_parse_action(lambda toks: _balanced(And, list(toks)))
Expr <<= (Term + pp.ZeroOrMore(OrOp + Term)).set_parse_action(lambda toks: _balanced(Or, list(toks)))


def parse_formula(text: str, n: int) -> Formula:
    """Parse ``text`` over ``x1..xn``.

    Chains of ``&`` or ``|`` become balanced trees, so long flat clauses stay
    shallow. Nesting past :data:`MAX_FORMULA_DEPTH`, or past what the parser
    can recurse through, is a syntax error.
    """
    try:
        root = Expr.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as e:
        msg = f"Malformed formula {text!r}: {e}"
        raise FormulaSyntaxError(msg) from e
    except RecursionError as e:
        msg = f"Formula {text[:40]!r}... nests too deeply to parse (limit is {MAX_FORMULA_DEPTH} levels)"
        raise FormulaSyntaxError(msg) from e
    depth = _depth(root)
    if depth > MAX_FORMULA_DEPTH:
        msg = f"Formula nests {depth} levels deep (limit is {MAX_FORMULA_DEPTH})"
        raise FormulaSyntaxError(msg)
    return Formula(root=root, var_count=n)


def _check_length(f: Formula, v: GF2Vector):
    if len(v) != f.var_count:
        msg = f"Vector of length {len(v)} does not match a formula over {f.var_count} variables"
        raise LengthMismatch(msg)


def _evaluate(node: Node, u: int) -> int:
    match node:
        case Variable(index):
            return u >> (index - 1) & 1
        case Not(child):
            return 1 - _evaluate(child, u)
        case And(left, right):
            return _evaluate(left, u) & _evaluate(right, u)
        case Or(left, right):
            return _evaluate(left, u) | _evaluate(right, u)
    raise TypeError(type(node), node)  # pragma: nocover


def evaluate(f: Formula, a: GF2Vector) -> int:
    _check_length(f, a)
    return _evaluate(f.root, a.to_index())


def _negate(node: Node, flipped: frozenset[int]) -> Node:
    match node:
        case Variable(index):
            return Not(node) if index in flipped else node
        case Not(child):
            return Not(_negate(child, flipped))
        case And(left, right):
            return And(_negate(left, flipped), _negate(right, flipped))
        case Or(left, right):
            return Or(_negate(left, flipped), _negate(right, flipped))
    raise TypeError(type(node), node)  # pragma: nocover


def apply_negation_vector(g: Formula, v: GF2Vector) -> Formula:
    """Replace ``x_i`` by ``¬x_i`` wherever ``v_i = 1``, so ``g_v(u) = g(v XOR u)``."""
    _check_length(g, v)
    flipped = frozenset(i + 1 for (i, bit) in enumerate(v) if bit)
    if not flipped:
        return g
    return Formula(root=_negate(g.root, flipped), var_count=g.var_count)


def _column_mask(i: int, n: int) -> int:
    """Rows ``u`` of a ``2^n``-row table with bit ``i`` set."""
    half = 1 << i
    mask = ((1 << half) - 1) << half
    width = half << 1
    while width < (1 << n):
        mask |= mask << width
        width <<= 1
    return mask


@cache
def column_masks(n: int) -> tuple[int, ...]:
    return tuple(_column_mask(i, n) for i in range(n))


def _mask(node: Node, columns: tuple[int, ...], full: int) -> int:
    match node:
        case Variable(index):
            return columns[index - 1]
        case Not(child):
            return full ^ _mask(child, columns, full)
        case And(left, right):
            return _mask(left, columns, full) & _mask(right, columns, full)
        case Or(left, right):
            return _mask(left, columns, full) | _mask(right, columns, full)
    raise TypeError(type(node), node)  # pragma: nocover


def check_brute_size(n: int):
    if n > MAX_BRUTE_VARIABLES:
        msg = f"Refusing to enumerate 2^{n} assignments (limit is n <= {MAX_BRUTE_VARIABLES})"
        raise TooManyVariables(msg)


def truth_mask(f: Formula) -> int:
    """The truth table packed into an integer: bit ``u`` is ``f(u)``."""
    n = f.var_count
    check_brute_size(n)
    full = (1 << (1 << n)) - 1
    return _mask(f.root, column_masks(n), full)


def truth_table(f: Formula) -> tuple[int, ...]:
    mask = truth_mask(f)
    return tuple(mask >> u & 1 for u in range(1 << f.var_count))


@cache
def _low_masks(n: int) -> tuple[int, ...]:
    full = (1 << (1 << n)) - 1
    return tuple(full ^ _column_mask(i, n) for i in range(n))


def flip_rows(mask: int, i: int, n: int) -> int:
    """Swap every row ``u`` with row ``u XOR 2^i``, i.e. negate input ``x_{i+1}``."""
    shift = 1 << i
    low = _low_masks(n)[i]
    return ((mask & low) << shift) | ((mask >> shift) & low)


def negate_mask(mask: int, v: int, n: int) -> int:
    """Truth table of ``g_v`` given the table of ``g``: row ``u`` moves to row ``u XOR v``."""
    for i in range(n):
        if v >> i & 1:
            mask = flip_rows(mask, i, n)
    return mask


_PRECEDENCE = {Or: 1, And: 2, Not: 3, Variable: 4}


def _operands(node: Node, op: type) -> list[Node]:
    """Leaves of the maximal ``op`` chain under ``node``, left to right."""
    found = []
    stack = [node]
    while stack:
        item = stack.pop()
        if type(item) is op:
            stack.append(item.right)
            stack.append(item.left)
        else:
            found.append(item)
    return found


def _to_text(node: Node, parent: int) -> str:
    match node:
        case Variable(index):
            return f"x{index}"
        case Not(child):
            text = f"!{_to_text(child, _PRECEDENCE[Not])}"
        case And() | Or():
            op = type(node)
            symbol = " & " if op is And else " | "
            text = symbol.join(_to_text(operand, _PRECEDENCE[op] + 1) for operand in _operands(node, op))
        case _:  # pragma: nocover
            raise TypeError(type(node), node)
    if _PRECEDENCE[type(node)] < parent:
        return f"({text})"
    return text


def to_text(f: Formula) -> str:
    """Render with the fewest parentheses; ``&`` and ``|`` chains print flat."""
    return _to_text(f.root, 0)
