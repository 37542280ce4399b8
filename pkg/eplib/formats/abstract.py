from abc import ABC, abstractmethod
from typing import Self


__all__ = [
    "AbstractInputFile",
]


class AbstractInputFile(ABC):
    @classmethod
    @abstractmethod
    def get_format_description(cls) -> str: ...

    @classmethod
    @abstractmethod
    def file_load(cls, obj: str | bytes) -> Self: ...

    @abstractmethod
    def file_dump(self) -> str: ...
