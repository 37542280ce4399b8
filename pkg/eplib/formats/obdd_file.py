from collections import Counter
from typing import Optional, Self

from pydantic import BaseModel, ConfigDict, ValidationError

from eplib.errors import ObddFormatError, OrderMismatch
from eplib.formats.abstract import AbstractInputFile
from eplib.obdd import FALSE, TRUE, Manager, Obdd


__all__ = [
    "ObddFileNode",
    "ObddFile",
    "load_obdd",
    "dump_obdd",
]


class ObddFileNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    var: int
    lo: int
    hi: int


class ObddFile(BaseModel, AbstractInputFile):
    """On-disk diagram: ids 0 and 1 are the FALSE and TRUE terminals."""

    n: int
    order: list[int]
    nodes: list[ObddFileNode] = []
    root: int

    @classmethod
    def get_format_description(cls) -> str:
        return "Reduced ordered BDD (JSON)"

    @classmethod
    def file_load(cls, obj: str | bytes) -> Self:
        return cls.model_validate_json(obj)

    def file_dump(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_obdd(cls, a: Obdd) -> Self:
        manager = a.manager
        nodes = []
        for u in a.nodes():
            (level, lo, hi) = manager.node(u)
            nodes.append(ObddFileNode(id=u, var=manager.var_at(level), lo=lo, hi=hi))
        return cls(n=manager.var_count, order=list(manager.order), nodes=nodes, root=a.root)

    def _check(self) -> dict[int, ObddFileNode]:
        if len(self.order) != self.n:
            msg = f"Order lists {len(self.order)} variables but n={self.n}"
            raise ObddFormatError(msg)

        by_id: dict[int, ObddFileNode] = {}
        for node in self.nodes:
            if node.id in (FALSE, TRUE):
                msg = f"Node id {node.id} is reserved for a terminal"
                raise ObddFormatError(msg)
            if node.id in by_id:
                msg = f"Node id {node.id} is declared twice"
                raise ObddFormatError(msg)
            by_id[node.id] = node

        levels = {var: level for (level, var) in enumerate(self.order)}

        def level_of(u: int) -> int:
            if u in (FALSE, TRUE):
                return self.n
            return levels[by_id[u].var]

        for node in self.nodes:
            if node.var not in levels:
                msg = f"Node {node.id} tests x{node.var}, which is not in the order"
                raise ObddFormatError(msg)
            for child in (node.lo, node.hi):
                if child not in (FALSE, TRUE) and child not in by_id:
                    msg = f"Node {node.id} points at undeclared node {child}"
                    raise ObddFormatError(msg)

        for node in self.nodes:
            if node.lo == node.hi:
                msg = f"Node {node.id} is redundant: both children are {node.lo}"
                raise ObddFormatError(msg)
            if not (levels[node.var] < level_of(node.lo) and levels[node.var] < level_of(node.hi)):
                msg = f"Node {node.id} on x{node.var} has a child that does not come later in the order"
                raise ObddFormatError(msg)

        duplicates = [key for (key, count) in Counter((node.var, node.lo, node.hi) for node in self.nodes).items() if count > 1]
        if duplicates:
            msg = f"Nodes {duplicates} are declared more than once"
            raise ObddFormatError(msg)

        if self.root not in (FALSE, TRUE) and self.root not in by_id:
            msg = f"Root {self.root} is not a declared node"
            raise ObddFormatError(msg)

        reachable = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            if u in by_id:
                for child in (by_id[u].lo, by_id[u].hi):
                    if child not in reachable:
                        reachable.add(child)
                        stack.append(child)
        unreachable = sorted(set(by_id) - reachable)
        if unreachable:
            msg = f"Nodes {unreachable} are not reachable from root {self.root}"
            raise ObddFormatError(msg)
        return by_id

    def to_obdd(self, manager: Optional[Manager] = None) -> Obdd:
        """Validate the file and rebuild it inside ``manager`` (a fresh one by default)."""
        by_id = self._check()
        if manager is None:
            manager = Manager(self.order)
        elif list(manager.order) != self.order:
            msg = f"File order {self.order} differs from the manager's order {list(manager.order)}"
            raise OrderMismatch(msg)

        mapped = {FALSE: FALSE, TRUE: TRUE}
        for node in sorted(by_id.values(), key=lambda node: -manager.level_of[node.var]):
            mapped[node.id] = manager.mk(manager.level_of[node.var], mapped[node.lo], mapped[node.hi])
        return Obdd(manager, mapped[self.root])


def load_obdd(text: str | bytes, manager: Optional[Manager] = None) -> Obdd:
    try:
        obdd_file = ObddFile.file_load(text)
    except ValidationError as e:
        msg = f"Malformed OBDD file: {e}"
        raise ObddFormatError(msg) from e
    return obdd_file.to_obdd(manager)


def dump_obdd(a: Obdd) -> str:
    return ObddFile.from_obdd(a).file_dump()
