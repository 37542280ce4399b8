import json

from eplib.errors import InputError
from eplib.formats.abstract import AbstractInputFile
from eplib.formats.obdd_file import ObddFile, ObddFileNode, dump_obdd, load_obdd
from eplib.formats.twodag_file import TwoDagFile


input_file_types: dict[str, type[AbstractInputFile]] = {
    "OBDD": ObddFile,
    "TwoDag": TwoDagFile,
}


def get_input_type(v: str | bytes | dict) -> str:
    if isinstance(v, (str, bytes)):
        try:
            v = json.loads(v)
        except json.JSONDecodeError as e:
            msg = f"Input is not JSON: {e}"
            raise InputError(msg) from e

    if not isinstance(v, dict):
        msg = f"Input must be a JSON object, got {type(v).__name__}"
        raise InputError(msg)

    if "order" in v and "root" in v:
        return "OBDD"

    if isinstance(v.get("nodes"), dict):
        return "TwoDag"

    msg = f"Cannot tell the input format from the keys {sorted(v)}"
    raise InputError(msg)


def load_input(obj: str | bytes) -> AbstractInputFile:
    return input_file_types[get_input_type(obj)].file_load(obj)


__all__ = [
    "AbstractInputFile",
    "ObddFile",
    "ObddFileNode",
    "TwoDagFile",
    "dump_obdd",
    "get_input_type",
    "input_file_types",
    "load_input",
    "load_obdd",
]
