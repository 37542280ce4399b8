from typing import Optional, Self

from pydantic import BaseModel

from eplib.formats.abstract import AbstractInputFile
from eplib.twodag import TwoDag, validate_dag


__all__ = [
    "TwoDagFile",
]


class TwoDagFile(BaseModel, AbstractInputFile):
    nodes: dict[str, Optional[list[str | int]]]
    root: Optional[str | int] = None

    @classmethod
    def get_format_description(cls) -> str:
        return "Rooted 2-dag (JSON)"

    @classmethod
    def file_load(cls, obj: str | bytes) -> Self:
        return cls.model_validate_json(obj)

    def file_dump(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_dag(cls, g: TwoDag) -> Self:
        return cls(nodes=g.to_raw(), root=g.root)

    def to_dag(self) -> TwoDag:
        return validate_dag(self.nodes, self.root)
