"""Seeded random instances for the randomized suites and ``selftest``."""
import random
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional

from eplib.formula import And, Formula, Node, Not, Or, Variable, apply_negation_vector
from eplib.gf2 import GF2Vector
from eplib.twodag import TwoDag, apply_flips, validate_dag


__all__ = [
    "FormulaPair",
    "DagPair",
    "random_formula",
    "random_vector",
    "formula_pairs",
    "random_two_dag",
    "relabel",
    "dag_pairs",
]


def _random_node(rng: random.Random, n: int, leaves: int) -> Node:
    if leaves == 1:
        node: Node = Variable(rng.randint(1, n))
    else:
        split = rng.randint(1, leaves - 1)
        (left, right) = (_random_node(rng, n, split), _random_node(rng, n, leaves - split))
        node = And(left, right) if rng.random() < 0.5 else Or(left, right)
    if rng.random() < 0.3:
        node = Not(node)
    return node


def random_formula(rng: random.Random, n: int, leaves: Optional[int] = None) -> Formula:
    leaves = leaves or rng.randint(1, 2 * n + 2)
    return Formula(root=_random_node(rng, n, leaves), var_count=n)


def random_vector(rng: random.Random, n: int) -> GF2Vector:
    return GF2Vector.from_index(rng.getrandbits(n) if n else 0, n)


def _xor_chain(n: int) -> Formula:
    """``x1 XOR ... XOR xn`` written with and, or and not."""
    node: Node = Variable(1)
    for i in range(2, n + 1):
        x = Variable(i)
        node = Or(And(node, Not(x)), And(Not(node), x))
    return Formula(root=node, var_count=n)


@dataclass(frozen=True)
class FormulaPair:
    f: Formula
    g: Formula
    n: int
    planted: Optional[GF2Vector] = None


def formula_pairs(seed: int, count: int, n_min: int = 2, n_max: int = 8) -> Iterator[FormulaPair]:
    """Mix of planted pairs (``g`` is ``f`` with some inputs negated), identical pairs and unrelated pairs."""
    rng = random.Random(seed)
    for index in range(count):
        n = rng.randint(n_min, n_max)
        f = _xor_chain(n) if index % 25 == 0 else random_formula(rng, n)
        match index % 4:
            case 0 | 1:
                w = random_vector(rng, n)
                # g = f_w, so g_w = f
                yield FormulaPair(f=f, g=apply_negation_vector(f, w), n=n, planted=w)
            case 2:
                yield FormulaPair(f=f, g=f, n=n, planted=GF2Vector.zeros(n))
            case _:
                yield FormulaPair(f=f, g=random_formula(rng, n), n=n)


def random_two_dag(rng: random.Random, max_depth: int = 6, max_nodes: int = 40, skip_rate: float = 0.3) -> TwoDag:
    """Layered 2-dag whose successors may be shared or skip past the next layer.

    Nodes are laid out in layers ``0..max_depth`` with successors one layer
    down; afterwards some successor slots are pointed at a node two or more
    layers down, so a node can be reachable along paths of different lengths.
    Nodes left unreachable by that rewiring are dropped.
    """
    depth = rng.randint(0, max_depth)
    nodes: dict[str, Optional[list[str]]] = {"0": None}
    level = {"0": 0}
    layer = ["0"]
    for d in range(depth):
        next_layer: list[str] = []
        for (position, node) in enumerate(layer):
            must_expand = position == len(layer) - 1 and not next_layer
            if len(nodes) >= max_nodes and not next_layer:
                break
            if not must_expand and rng.random() < 0.35:
                continue
            children = []
            for _ in range(2):
                if next_layer and (max_nodes - len(nodes) < 1 or rng.random() < 0.4):
                    children.append(rng.choice(next_layer))
                else:
                    child = str(len(nodes))
                    nodes[child] = None
                    level[child] = d + 1
                    next_layer.append(child)
                    children.append(child)
            nodes[node] = children
        if not next_layer:
            break
        layer = next_layer

    for (node, children) in nodes.items():
        if children is None or rng.random() >= skip_rate:
            continue
        deeper = [other for other in nodes if level[other] >= level[node] + 2]
        if deeper:
            children[rng.randrange(2)] = rng.choice(deeper)

    reachable = {"0"}
    stack = ["0"]
    while stack:
        for child in nodes[stack.pop()] or ():
            if child not in reachable:
                reachable.add(child)
                stack.append(child)
    return validate_dag({node: children for (node, children) in nodes.items() if node in reachable}, "0")


def relabel(g: TwoDag, rng: random.Random) -> TwoDag:
    """The same dag with its node ids shuffled."""
    ids = list(g.nodes)
    shuffled = ids[:]
    rng.shuffle(shuffled)
    mapping = {old: f"n{new}" for (old, new) in zip(ids, shuffled)}
    nodes = {mapping[node]: None if children is None else [mapping[c] for c in children] for (node, children) in g.nodes.items()}
    return validate_dag(nodes, mapping[g.root])


@dataclass(frozen=True)
class DagPair:
    f: TwoDag
    g: TwoDag
    planted: Optional[GF2Vector] = None


def dag_pairs(seed: int, count: int, max_depth: int = 6, max_nodes: int = 40) -> Iterator[DagPair]:
    """Planted flip pairs (``f`` is ``g`` flipped and relabelled) alternating with unrelated pairs."""
    rng = random.Random(seed)
    for index in range(count):
        g = random_two_dag(rng, max_depth, max_nodes)
        if index % 3 == 2:
            yield DagPair(f=random_two_dag(rng, max_depth, max_nodes), g=g)
            continue
        s = random_vector(rng, g.flip_length)
        yield DagPair(f=relabel(apply_flips(g, s), rng), g=g, planted=s)
