"""Unlabeled rooted 2-dags and interchange equivalence.

Every node of a 2-dag has either no successors or an ordered pair of them.
Flipping a depth ``d`` swaps the pair at every internal node whose distance
(shortest directed path) from the root is ``d``. Flip sets are vectors over
``GF(2)^(D+1)``, with position ``d`` for depth ``d``.
"""
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from eplib.errors import BadOutDegree, Cyclic, DepthTooLarge, InvariantViolation, LengthMismatch, MultipleRoots, NoRoot, NotACoset, Unreachable, UnknownNode
from eplib.gf2 import AffineSet, GF2Basis, GF2Vector, affine_from_indices
from eplib.negequiv import Method, NegEquivReport


__all__ = [
    "MAX_FLIP_DEPTH",
    "TwoDag",
    "LabelTable",
    "validate_dag",
    "apply_flips",
    "canonical_code",
    "canonical_equal",
    "stabilizer",
    "interchange_witnesses",
    "decide_interchange",
    "flip_set",
]

logger = logging.getLogger(__name__)

MAX_FLIP_DEPTH = 20

type Children = Optional[tuple[str, str]]


@dataclass(frozen=True)
class TwoDag:
    nodes: Mapping[str, Children]
    root: str
    depth: Mapping[str, int]

    @property
    def max_depth(self) -> int:
        return max(self.depth.values())

    @property
    def flip_length(self) -> int:
        return self.max_depth + 1

    def internal_depths(self) -> set[int]:
        return {self.depth[node] for (node, children) in self.nodes.items() if children is not None}

    def __len__(self) -> int:
        return len(self.nodes)

    def to_raw(self) -> dict[str, Optional[list[str]]]:
        return {node: None if children is None else list(children) for (node, children) in self.nodes.items()}


def _children(node: str, raw: object) -> Children:
    if raw is None:
        return None
    if isinstance(raw, (str, bytes)) or not isinstance(raw, Sequence):
        msg = f"Successors of node {node!r} must be null or a list, got {raw!r}"
        raise BadOutDegree(msg)
    if len(raw) == 0:
        return None
    if len(raw) != 2:
        msg = f"Node {node!r} has {len(raw)} successors; a 2-dag node has 0 or 2"
        raise BadOutDegree(msg)
    return (str(raw[0]), str(raw[1]))


def validate_dag(nodes: Mapping[object, object], root: Optional[object] = None) -> TwoDag:
    """Check a raw ``{id: null | [left, right]}`` description and compute depths.

    With no ``root`` given the unique source is used.
    """
    if not nodes:
        msg = "A 2-dag needs at least one node"
        raise NoRoot(msg)

    table = {str(node): _children(str(node), raw) for (node, raw) in nodes.items()}

    graph = nx.MultiDiGraph()
    graph.add_nodes_from(table)
    for (node, children) in table.items():
        if children is None:
            continue
        for child in children:
            if child not in table:
                msg = f"Node {node!r} points at undeclared node {child!r}"
                raise UnknownNode(msg)
            graph.add_edge(node, child)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for (u, _, *_) in nx.find_cycle(graph)]
        msg = f"Graph contains the cycle {cycle}"
        raise Cyclic(msg)

    sources = sorted(node for (node, degree) in graph.in_degree() if degree == 0)
    if not sources:
        msg = "Graph has no source node to act as root"
        raise NoRoot(msg)
    if root is None:
        if len(sources) > 1:
            msg = f"Graph has {len(sources)} roots: {sources}"
            raise MultipleRoots(msg)
        root = sources[0]
    root = str(root)
    if root not in table:
        msg = f"Root {root!r} is not a declared node"
        raise UnknownNode(msg)

    depth = nx.single_source_shortest_path_length(graph, root)
    if len(depth) != len(table):
        unreachable = sorted(set(table) - set(depth))
        msg = f"Nodes {unreachable} are not reachable from root {root!r}"
        raise Unreachable(msg)

    return TwoDag(nodes=table, root=root, depth=dict(depth))


def _flip_bits(g: TwoDag, s: GF2Vector) -> int:
    if len(s) != g.flip_length:
        msg = f"Flip set of length {len(s)} does not match depths 0..{g.max_depth}"
        raise LengthMismatch(msg)
    return s.to_index()


def apply_flips(g: TwoDag, s: GF2Vector) -> TwoDag:
    flips = _flip_bits(g, s)
    if flips == 0:
        return g
    nodes = {
        node: (children[1], children[0]) if children is not None and flips >> g.depth[node] & 1 else children
        for (node, children) in g.nodes.items()
    }
    return TwoDag(nodes=nodes, root=g.root, depth=g.depth)


def canonical_code(g: TwoDag, flips: int = 0) -> tuple[tuple[int, ...], ...]:
    """Isomorphism-invariant code of ``g`` with depth flips applied virtually.

    Nodes are numbered in the order a breadth-first walk meets them, always
    taking the left successor first. The code lists each node's successor
    numbers in that order, ``()`` for a leaf. Because every node is reachable
    and successors are ordered, two dags are isomorphic iff their codes match.
    """
    number = {g.root: 0}
    queue = [g.root]
    code = []
    for node in queue:
        children = g.nodes[node]
        if children is None:
            code.append(())
            continue
        if flips >> g.depth[node] & 1:
            children = (children[1], children[0])
        for child in children:
            if child not in number:
                number[child] = len(queue)
                queue.append(child)
        code.append((number[children[0]], number[children[1]]))
    return tuple(code)


class LabelTable:
    """Interns canonical codes so that dags compare by a single integer."""

    def __init__(self):
        self._labels: dict[tuple[tuple[int, ...], ...], int] = {}

    def __len__(self) -> int:
        return len(self._labels)

    def label(self, g: TwoDag, flips: int = 0) -> int:
        return self._labels.setdefault(canonical_code(g, flips), len(self._labels))


def canonical_equal(a: TwoDag, b: TwoDag, table: Optional[LabelTable] = None) -> bool:
    table = table or LabelTable()
    return table.label(a) == table.label(b)


def _check_depth(g: TwoDag):
    if g.max_depth > MAX_FLIP_DEPTH:
        msg = f"Refusing to enumerate 2^{g.flip_length} flip sets (limit is depth <= {MAX_FLIP_DEPTH})"
        raise DepthTooLarge(msg)


def _matching_flips(f: TwoDag, g: TwoDag) -> list[int]:
    table = LabelTable()
    target = table.label(f)
    return [s for s in range(1 << g.flip_length) if table.label(g, s) == target]


def stabilizer(g: TwoDag) -> GF2Basis:
    """Basis of the flip sets that map ``g`` to an isomorphic copy of itself."""
    _check_depth(g)
    fixed = affine_from_indices(_matching_flips(g, g), g.flip_length)
    if fixed.basis is None or not fixed.contains(GF2Vector.zeros(g.flip_length)):
        msg = "Stabilizer does not contain the empty flip set"
        raise InvariantViolation(msg)

    idle = set(range(g.flip_length)) - g.internal_depths()
    for d in idle:
        if not fixed.contains(GF2Vector.from_index(1 << d, g.flip_length)):
            msg = f"Flipping depth {d}, which holds no internal node, changed the dag"
            raise InvariantViolation(msg)
    return fixed.basis


def _witnesses(f: TwoDag, g: TwoDag) -> tuple[AffineSet, GF2Basis]:
    _check_depth(g)
    fixed = stabilizer(g)
    if f.max_depth != g.max_depth:
        return (AffineSet.EMPTY, fixed)

    witnesses = affine_from_indices(_matching_flips(f, g), g.flip_length)
    if witnesses.basis is not None and witnesses.basis != fixed:
        msg = f"{witnesses.cardinality} witness flip sets do not form a coset of the {fixed.dim}-dimensional stabilizer"
        raise NotACoset(msg)
    logger.debug("interchange witnesses over depths 0..%d: %d of %d", g.max_depth, witnesses.cardinality, 1 << g.flip_length)
    return (witnesses, fixed)


def interchange_witnesses(f: TwoDag, g: TwoDag) -> AffineSet:
    """Flip sets ``s`` with ``apply_flips(g, s)`` isomorphic to ``f``."""
    (witnesses, _) = _witnesses(f, g)
    return witnesses


def decide_interchange(f: TwoDag, g: TwoDag) -> NegEquivReport:
    (witnesses, fixed) = _witnesses(f, g)
    report = NegEquivReport.from_witnesses(witnesses, fixed, Method.BRUTE)
    logger.info("interchange equivalence decided: depth=%d nodes=%d witnesses=%d", g.max_depth, len(g), report.witness_count)
    return report


def flip_set(depths: Iterable[int], length: int) -> GF2Vector:
    """The flip set selecting exactly ``depths``."""
    index = 0
    for d in depths:
        if not 0 <= d < length:
            msg = f"Depth {d} is outside 0..{length - 1}"
            raise LengthMismatch(msg)
        index |= 1 << d
    return GF2Vector.from_index(index, length)


