__all__ = [
    "EplibError",
    "InputError",
    "InvariantViolation",
    "FormulaSyntaxError",
    "VariableOutOfRange",
    "LengthMismatch",
    "TooManyVariables",
    "MixedLengths",
    "BadOrder",
    "OrderMismatch",
    "UnknownVariable",
    "VariableCountMismatch",
    "ObddFormatError",
    "DagError",
    "Cyclic",
    "NoRoot",
    "MultipleRoots",
    "BadOutDegree",
    "Unreachable",
    "UnknownNode",
    "DepthTooLarge",
    "EmptySet",
    "SetExhausted",
    "OutOfRange",
    "TooManyPaths",
    "UnknownAcceptanceSet",
    "NotACoset",
]


class EplibError(Exception):
    pass


class InputError(EplibError, ValueError):
    """Raised for malformed input or a violated precondition."""


class InvariantViolation(EplibError, AssertionError):
    """Raised when a structure theorem the library relies on is observed to fail."""


class FormulaSyntaxError(InputError): ...
class VariableOutOfRange(InputError): ...
class LengthMismatch(InputError): ...
class TooManyVariables(InputError): ...
class MixedLengths(InputError): ...
class BadOrder(InputError): ...
class OrderMismatch(InputError): ...
class UnknownVariable(InputError): ...
class VariableCountMismatch(InputError): ...
class ObddFormatError(InputError): ...


class DagError(InputError): ...
class Cyclic(DagError): ...
class NoRoot(DagError): ...
class MultipleRoots(DagError): ...
class BadOutDegree(DagError): ...
class Unreachable(DagError): ...
class UnknownNode(DagError): ...


class DepthTooLarge(InputError): ...
class EmptySet(InputError): ...
class SetExhausted(InputError): ...
class OutOfRange(InputError): ...
class TooManyPaths(InputError): ...
class UnknownAcceptanceSet(InputError): ...


class NotACoset(InvariantViolation): ...
