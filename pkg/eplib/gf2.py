"""Vectors, subspaces and affine cosets over GF(2).

Vectors are indexed the way formulas are: position ``i`` of a vector (the
``i``-th character of its binary string, counting from the left) belongs to
variable ``x_{i+1}``. Internally every vector also carries an integer index
whose bit ``i`` is that same position, which is what the elimination code
works on.
"""
from collections.abc import Iterable, Iterator, Sequence
from typing import Any, ClassVar, Optional, Self

from bitstring import Bits
from pydantic import BaseModel, ConfigDict, GetCoreSchemaHandler, model_validator
from pydantic_core import core_schema

from eplib.errors import InputError, LengthMismatch, MixedLengths, NotACoset


__all__ = [
    "GF2Vector",
    "GF2Basis",
    "AffineSet",
    "echelon_basis",
    "member",
    "affine_from_points",
    "coset_cardinality",
]


def _pivot(row: int) -> int:
    return (row & -row).bit_length() - 1


class GF2Vector:
    __slots__ = ("_bits", "_index")

    _bits: Bits
    _index: int

    def __init__(self, value: "GF2Vector | Bits | str | Sequence[int]"):
        if isinstance(value, GF2Vector):
            bits = value._bits
        elif isinstance(value, Bits):
            bits = value
        elif isinstance(value, str):
            if any(c not in "01" for c in value):
                msg = f"{value!r} is not a binary string"
                raise InputError(msg)
            bits = Bits(bin=value) if value else Bits()
        else:
            bits = Bits([bool(x) for x in value])

        self._bits = bits
        self._index = int(bits.bin[::-1], 2) if len(bits) > 0 else 0

    @classmethod
    def zeros(cls, length: int) -> Self:
        return cls(Bits(length=length))

    @classmethod
    def from_bin(cls, value: str) -> Self:
        return cls(value)

    @classmethod
    def from_index(cls, index: int, length: int) -> Self:
        if index < 0 or index >> length:
            msg = f"Index {index} does not fit in {length} bits"
            raise LengthMismatch(msg)
        if length == 0:
            return cls(Bits())
        return cls(format(index, f"0{length}b")[::-1])

    def to_index(self) -> int:
        return self._index

    @property
    def bits(self) -> Bits:
        return self._bits

    @property
    def bin(self) -> str:
        return self._bits.bin

    @property
    def weight(self) -> int:
        return self._bits.count(1)

    def is_zero(self) -> bool:
        return self._index == 0

    def __len__(self) -> int:
        return len(self._bits)

    def __getitem__(self, idx: int) -> int:
        return int(self._bits[idx])

    def __iter__(self) -> Iterator[int]:
        return (int(b) for b in self._bits)

    def __xor__(self, other: "GF2Vector") -> "GF2Vector":
        if len(other) != len(self):
            msg = f"Cannot add vectors of length {len(self)} and {len(other)}"
            raise LengthMismatch(msg)
        return GF2Vector(self._bits ^ other._bits)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, str):
            return self.bin == other
        if not isinstance(other, GF2Vector):
            return NotImplemented
        return len(self) == len(other) and self._index == other._index

    def __hash__(self) -> int:
        # equal to the hash of the bit string it compares equal to
        return hash(self.bin)

    def __str__(self) -> str:
        return self.bin

    def __repr__(self) -> str:
        return "%s(%r)" % (type(self).__name__, self.bin)

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type: Any, handler: GetCoreSchemaHandler) -> core_schema.CoreSchema:
        from_str_schema = core_schema.chain_schema([
            core_schema.str_schema(),
            core_schema.no_info_plain_validator_function(cls)
        ])

        return core_schema.json_or_python_schema(
            json_schema=from_str_schema,
            python_schema=core_schema.union_schema([
                core_schema.is_instance_schema(cls),
                from_str_schema
            ]),
            serialization=core_schema.plain_serializer_function_ser_schema(lambda value: value.bin)
        )


class GF2Basis(BaseModel):
    """A linear subspace of GF(2)^n, stored as its reduced row-echelon basis."""

    model_config = ConfigDict(frozen=True)

    rows: tuple[GF2Vector, ...] = ()
    ambient_dim: int

    @model_validator(mode="after")
    def validate_reduced_echelon(self):
        if self.ambient_dim < 0:
            msg = f"Ambient dimension must be non-negative, got {self.ambient_dim}"
            raise ValueError(msg)

        pivots = []
        for row in self.rows:
            if len(row) != self.ambient_dim:
                msg = f"Row {row} does not have length {self.ambient_dim}"
                raise ValueError(msg)
            if row.is_zero():
                msg = "Basis rows must be non-zero"
                raise ValueError(msg)
            pivots.append(_pivot(row.to_index()))

        if any(a >= b for (a, b) in zip(pivots, pivots[1:])):
            msg = f"Pivot columns {pivots} are not strictly increasing"
            raise ValueError(msg)

        for (i, row) in enumerate(self.rows):
            for (j, p) in enumerate(pivots):
                if i != j and row.to_index() >> p & 1:
                    msg = f"Pivot column {p} is not cleared in row {i}"
                    raise ValueError(msg)
        return self

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return [_pivot(row.to_index()) for row in self.rows]

    def row_indices(self) -> list[int]:
        return [row.to_index() for row in self.rows]

    def reduce_index(self, index: int) -> int:
        for row in self.rows:
            r = row.to_index()
            if index >> _pivot(r) & 1:
                index ^= r
        return index

    def span_indices(self) -> Iterator[int]:
        rows = self.row_indices()
        for mask in range(1 << len(rows)):
            acc = 0
            for (i, r) in enumerate(rows):
                if mask >> i & 1:
                    acc ^= r
            yield acc

    def span(self) -> Iterator[GF2Vector]:
        for index in self.span_indices():
            yield GF2Vector.from_index(index, self.ambient_dim)


class AffineSet(BaseModel):
    """Either the empty set or a coset ``representative + span(basis)``."""

    model_config = ConfigDict(frozen=True)

    representative: Optional[GF2Vector] = None
    basis: Optional[GF2Basis] = None
    EMPTY: ClassVar["AffineSet"]

    @model_validator(mode="after")
    def validate_coset(self):
        if (self.representative is None) != (self.basis is None):
            msg = "An affine set needs both a representative and a basis, or neither"
            raise ValueError(msg)
        if self.representative is not None and self.basis is not None and len(self.representative) != self.basis.ambient_dim:
            msg = f"Representative {self.representative} does not live in dimension {self.basis.ambient_dim}"
            raise ValueError(msg)
        return self

    @property
    def is_empty(self) -> bool:
        return self.representative is None

    @property
    def cardinality(self) -> int:
        return coset_cardinality(self)

    def members(self) -> Iterator[GF2Vector]:
        if self.representative is None or self.basis is None:
            return
        r = self.representative.to_index()
        for s in self.basis.span_indices():
            yield GF2Vector.from_index(r ^ s, self.basis.ambient_dim)

    def contains(self, v: GF2Vector) -> bool:
        if self.representative is None or self.basis is None:
            return False
        if len(v) != self.basis.ambient_dim:
            msg = f"Vector of length {len(v)} cannot belong to a coset in dimension {self.basis.ambient_dim}"
            raise LengthMismatch(msg)
        return self.basis.reduce_index(v.to_index() ^ self.representative.to_index()) == 0


AffineSet.EMPTY = AffineSet()


def _common_length(vectors: Sequence[GF2Vector], n: Optional[int]) -> int:
    lengths = {len(v) for v in vectors}
    if n is not None:
        lengths.add(n)
    if len(lengths) > 1:
        msg = f"Vectors have mixed lengths {sorted(lengths)}"
        raise MixedLengths(msg)
    if not lengths:
        msg = "Cannot infer the ambient dimension of an empty list of vectors"
        raise MixedLengths(msg)
    return lengths.pop()


def echelon_indices(indices: Iterable[int]) -> list[int]:
    """Reduced row-echelon rows (as index integers) spanning the given vectors."""
    by_pivot: dict[int, int] = {}
    for row in indices:
        for (p, r) in by_pivot.items():
            if row >> p & 1:
                row ^= r
        if row == 0:
            continue
        p = _pivot(row)
        for q in by_pivot:
            if by_pivot[q] >> p & 1:
                by_pivot[q] ^= row
        by_pivot[p] = row
    return [by_pivot[p] for p in sorted(by_pivot)]


def basis_from_indices(indices: Iterable[int], n: int) -> GF2Basis:
    rows = tuple(GF2Vector.from_index(r, n) for r in echelon_indices(indices))
    return GF2Basis(rows=rows, ambient_dim=n)


def echelon_basis(vectors: Iterable[GF2Vector], n: Optional[int]=None) -> GF2Basis:
    vectors = list(vectors)
    n = _common_length(vectors, n)
    return basis_from_indices((v.to_index() for v in vectors), n)


def member(b: GF2Basis, v: GF2Vector) -> bool:
    if len(v) != b.ambient_dim:
        msg = f"Vector of length {len(v)} cannot belong to a subspace of GF(2)^{b.ambient_dim}"
        raise LengthMismatch(msg)
    return b.reduce_index(v.to_index()) == 0


def affine_from_indices(indices: Sequence[int], n: int) -> AffineSet:
    """Like :func:`affine_from_points`, for callers already holding index integers."""
    if not indices:
        return AffineSet.EMPTY

    first = indices[0]
    basis = basis_from_indices((p ^ first for p in indices), n)
    distinct = len(set(indices))
    if distinct != 1 << basis.dim:
        msg = f"{distinct} points span a coset of dimension {basis.dim} ({1 << basis.dim} points); they do not form an affine subspace"
        raise NotACoset(msg)

    return AffineSet(representative=GF2Vector.from_index(first, n), basis=basis)


def affine_from_points(points: Sequence[GF2Vector], n: Optional[int]=None) -> AffineSet:
    if not points:
        return AffineSet.EMPTY
    n = _common_length(points, n)
    return affine_from_indices([p.to_index() for p in points], n)


def coset_cardinality(a: AffineSet) -> int:
    if a.basis is None:
        return 0
    return 1 << a.basis.dim
