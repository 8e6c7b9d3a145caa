"""Exact linear algebra over GF(2) on bit-packed vectors of length at most 64."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_DIM = 64
DEFAULT_DIM_CAP = 24
DEFAULT_BASIS_CAP = 100_000


class DimensionMismatchError(ValueError):
    """Operands live in ambient spaces of different dimensions."""


class EnumerationTooLargeError(RuntimeError):
    """An enumeration would exceed the configured cap."""


def rref_bits(rows: Iterable[int]) -> list[int]:
    """Reduced row echelon form of int bitsets; the pivot of a row is its lowest set bit."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            if row & (b & -b):
                row ^= b
        if row:
            pivot = row & -row
            basis = [b ^ row if b & pivot else b for b in basis]
            basis.append(row)
            basis.sort(key=lambda b: b & -b)
    return basis


def reduce_bits(row: int, basis: Iterable[int]) -> int:
    """Reduce an int bitset by RREF rows; zero iff the row lies in their span."""
    for b in basis:
        if row & (b & -b):
            row ^= b
    return row


@dataclass(frozen=True)
class BitVec:
    """Vector in GF(2)^m packed into a single int; coordinate i sits at bit i."""

    m: int
    bits: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.m <= MAX_DIM:
            raise ValueError(f"ambient dimension must be in 1..{MAX_DIM}, got {self.m}")
        if self.bits < 0 or self.bits >> self.m:
            raise ValueError("coordinates outside the ambient dimension")

    @classmethod
    def from_coords(cls, coords: Iterable[int]) -> BitVec:
        """Build from a 0/1 coordinate sequence."""
        coords = list(coords)
        if any(c not in (0, 1) for c in coords):
            raise ValueError("coordinates must be 0 or 1")
        bits = 0
        for i, c in enumerate(coords):
            bits |= c << i
        return cls(len(coords), bits)

    @classmethod
    def zero(cls, m: int) -> BitVec:
        return cls(m, 0)

    @classmethod
    def unit(cls, m: int, i: int) -> BitVec:
        """Standard basis vector with a 1 in coordinate i (0-based)."""
        if not 0 <= i < m:
            raise ValueError(f"coordinate {i} outside 0..{m - 1}")
        return cls(m, 1 << i)

    def coords(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.m))

    def support(self) -> tuple[int, ...]:
        """0-based positions of the nonzero coordinates, ascending."""
        return tuple(i for i in range(self.m) if (self.bits >> i) & 1)

    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: BitVec) -> BitVec:
        if self.m != other.m:
            raise DimensionMismatchError(f"cannot add vectors of lengths {self.m} and {other.m}")
        return BitVec(self.m, self.bits ^ other.bits)

    def dot(self, other: BitVec) -> int:
        """Mod-2 dot product."""
        if self.m != other.m:
            raise DimensionMismatchError(f"cannot pair vectors of lengths {self.m} and {other.m}")
        return (self.bits & other.bits).bit_count() & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords()) + ")"


@dataclass(frozen=True)
class SubspaceF2:
    """Subspace of GF(2)^m held as a canonical RREF basis with ascending pivots."""

    m: int
    basis: tuple[BitVec, ...]

    def __post_init__(self) -> None:
        rows = [v.bits for v in self.basis]
        if any(v.m != self.m for v in self.basis):
            raise DimensionMismatchError("basis vectors outside the ambient space")
        if rows != rref_bits(rows):
            raise ValueError("basis is not in reduced row echelon form")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> tuple[int, ...]:
        return tuple((v.bits & -v.bits).bit_length() - 1 for v in self.basis)

    def contains(self, v: BitVec) -> bool:
        if v.m != self.m:
            raise DimensionMismatchError(f"vector of length {v.m} in space of dimension {self.m}")
        return reduce_bits(v.bits, (b.bits for b in self.basis)) == 0

    def __contains__(self, v: BitVec) -> bool:
        return self.contains(v)


def rref(vectors: Iterable[BitVec], m: int | None = None) -> SubspaceF2:
    """Canonical subspace spanned by the given vectors; m is required when they are empty."""
    vectors = list(vectors)
    if m is None:
        if not vectors:
            raise ValueError("ambient dimension required for an empty spanning set")
        m = vectors[0].m
    if any(v.m != m for v in vectors):
        raise DimensionMismatchError("spanning vectors of mixed lengths")
    rows = rref_bits(v.bits for v in vectors)
    return SubspaceF2(m, tuple(BitVec(m, r) for r in rows))


def annihilator(space: SubspaceF2) -> SubspaceF2:
    """Orthogonal complement under the mod-2 dot pairing."""
    pivots = set(space.pivots())
    rows = [v.bits for v in space.basis]
    out: list[int] = []
    for f in range(space.m):
        if f in pivots:
            continue
        # free coordinate f: set it to 1 and solve the pivot coordinates
        bits = 1 << f
        for r in rows:
            if (r >> f) & 1:
                bits |= r & -r
        out.append(bits)
    canon = rref_bits(out)
    return SubspaceF2(space.m, tuple(BitVec(space.m, r) for r in canon))


def enumerate_elements(space: SubspaceF2, dim_cap: int = DEFAULT_DIM_CAP) -> list[BitVec]:
    """All nonzero elements of the subspace; refuses when dim exceeds dim_cap."""
    k = space.dim
    if k > dim_cap:
        raise EnumerationTooLargeError(
            f"subspace of dimension {k} has {2 ** k - 1} nonzero elements, cap is 2^{dim_cap}"
        )
    rows = [v.bits for v in space.basis]
    out: list[BitVec] = []
    cur = 0
    for counter in range(1, 1 << k):
        # Gray-code walk: one basis vector toggles per step
        cur ^= rows[(counter & -counter).bit_length() - 1]
        out.append(BitVec(space.m, cur))
    return out


def count_bases(k: int) -> int:
    """Number of unordered bases of a k-dimensional space over GF(2)."""
    ordered = 1
    for i in range(k):
        ordered *= (1 << k) - (1 << i)
    orderings = 1
    for i in range(1, k + 1):
        orderings *= i
    assert ordered % orderings == 0
    return ordered // orderings


def enumerate_bases(
    space: SubspaceF2, cap: int = DEFAULT_BASIS_CAP
) -> Iterator[tuple[BitVec, ...]]:
    """Yield every unordered basis of the subspace once; refuses when the count exceeds cap."""
    k = space.dim
    total = count_bases(k)
    if total > cap:
        raise EnumerationTooLargeError(f"{total} bases exceed the cap of {cap}")
    if k == 0:
        yield ()
        return
    elems = sorted(v.bits for v in enumerate_elements(space, dim_cap=max(k, DEFAULT_DIM_CAP)))

    def rec(start: int, echelon: list[int], chosen: list[int]) -> Iterator[tuple[BitVec, ...]]:
        if len(chosen) == k:
            yield tuple(BitVec(space.m, b) for b in chosen)
            return
        for idx in range(start, len(elems)):
            v = elems[idx]
            if reduce_bits(v, echelon) == 0:
                continue
            yield from rec(idx + 1, rref_bits(echelon + [v]), chosen + [v])

    yield from rec(0, [], [])
