"""Essential dimension of reduced quotients of products of odd spin groups.

A group is described by factor ranks n = (n_1, ..., n_m), one per Spin(2*n_i + 1)
factor, together with a central subgroup mu of the product of the factor centers,
given by sign-pattern generators in GF(2)^m.  The calculator works in the dual
subspace: the sign-character patterns orthogonal to mu.  Each nonzero pattern r
carries weight 2^(sum of n_i over the support of r), and the headline quantity is

    min over bases B of the dual subspace of (sum of weights over B) - dim G,

with dim G = sum of (2*n_i^2 + n_i).  The minimum is exact whenever no vector of
a minimal basis has a small factor product; otherwise the calculator reports
bounds, strengthened by a ledger of known small cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Callable, Iterable, Sequence

from .gf2 import (
    DEFAULT_BASIS_CAP,
    DEFAULT_DIM_CAP,
    BitVec,
    DimensionMismatchError,
    EnumerationTooLargeError,
    SubspaceF2,
    annihilator,
    count_bases,
    enumerate_bases,
    enumerate_elements,
    reduce_bits,
    rref,
    rref_bits,
)

STATUS_EXACT = "exact"
STATUS_BOUNDS = "bounds-only"

WARN_ELEMENT_CAP = "element-cap-exceeded"
WARN_BASIS_CAP = "basis-cap-exceeded"


class SpecFormatError(ValueError):
    """A spec or certificate document is structurally malformed."""


class EmptySpecError(ValueError):
    """The spec has no factors at all."""


class NotReducedError(ValueError):
    """Some factor is split off by mu, so the group is not reduced."""

    def __init__(self, factor: int):
        self.factor = factor
        super().__init__(
            f"factor {factor} splits off as a direct factor"
            " (its unit sign pattern lies in the span of the mu generators)"
        )


class NotABasisError(ValueError):
    """The proposed vectors are not a basis of the dual subspace."""


@dataclass(frozen=True)
class GroupSpecB:
    """Quotient of a product of odd spin groups Spin(2*n_i + 1) by a central 2-group."""

    n: tuple[int, ...]
    mu_gens: tuple[BitVec, ...] = ()

    def __post_init__(self) -> None:
        if any(not isinstance(r, int) or r < 1 for r in self.n):
            raise ValueError("factor ranks must be integers >= 1")
        if len(self.n) > 64:
            raise ValueError("at most 64 factors are supported")
        if any(v.m != self.m for v in self.mu_gens):
            raise DimensionMismatchError("mu generators must have one coordinate per factor")

    @classmethod
    def from_mu_rows(cls, n: Sequence[int], rows: Iterable[Sequence[int]]) -> GroupSpecB:
        """Build from 0/1 coordinate rows generating mu."""
        n = tuple(n)
        return cls(n, tuple(BitVec.from_coords(pad_row(row, len(n))) for row in rows))

    @classmethod
    def from_dual_rows(cls, n: Sequence[int], rows: Iterable[Sequence[int]]) -> GroupSpecB:
        """Build from 0/1 coordinate rows generating the dual subspace; mu is its annihilator."""
        n = tuple(n)
        dual = rref([BitVec.from_coords(pad_row(row, len(n))) for row in rows], len(n))
        return cls(n, annihilator(dual).basis)

    @property
    def m(self) -> int:
        return len(self.n)

    def mu_subspace(self) -> SubspaceF2:
        return rref(self.mu_gens, self.m)

    def dual_subspace(self) -> SubspaceF2:
        """Sign-character patterns orthogonal to mu under the mod-2 dot pairing."""
        return annihilator(self.mu_subspace())


def pad_row(row: Sequence[int], m: int) -> Sequence[int]:
    if len(row) != m:
        raise DimensionMismatchError(f"row of length {len(row)} for {m} factors")
    return row


def validate(spec: GroupSpecB) -> None:
    """Reject empty specs and non-reduced groups."""
    if spec.m == 0:
        raise EmptySpecError("spec has no factors")
    mu = spec.mu_subspace()
    for i in range(spec.m):
        if BitVec.unit(spec.m, i) in mu:
            raise NotReducedError(i + 1)


def group_dim(n: Sequence[int]) -> int:
    """Dimension of the product of odd orthogonal Lie algebras: sum of 2*n_i^2 + n_i."""
    return sum(2 * r * r + r for r in n)


def weight_exponent(r: BitVec, n: Sequence[int]) -> int:
    """Sum of the factor ranks over the support of r; the weight of r is 2 to this."""
    return sum(n[i] for i in r.support())


@dataclass(frozen=True)
class WeightedVector:
    r: BitVec
    exponent: int
    weight: int


def weight_of(r: BitVec, n: Sequence[int]) -> WeightedVector:
    e = weight_exponent(r, n)
    return WeightedVector(r, e, 1 << e)


def support_ranks(r: BitVec, n: Sequence[int]) -> tuple[int, ...]:
    """Sorted multiset of factor ranks over the support of r."""
    return tuple(sorted(n[i] for i in r.support()))


SMALL_PRODUCTS = frozenset(
    [(a,) for a in range(1, 7)]
    + [(1, a) for a in range(1, 6)]
    + [(2, 2), (2, 3)]
    + [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 1, 1, 1)]
)


def is_small_product(ranks: Sequence[int]) -> bool:
    """Whether a product of Spin(2*a_i + 1) over the given ranks is on the small list.

    For small products the single-vector weight bound is not known to be tight, so
    exactness claims require every minimal-basis vector to avoid this list.
    """
    return tuple(sorted(ranks)) in SMALL_PRODUCTS


def greedy_min_basis(
    dual: SubspaceF2, n: Sequence[int], dim_cap: int = DEFAULT_DIM_CAP
) -> tuple[tuple[BitVec, ...], int]:
    """Minimal-total-weight basis by matroid greedy; ties broken by coordinate tuple."""
    if len(n) != dual.m:
        raise DimensionMismatchError("rank list does not match the ambient dimension")
    elems = enumerate_elements(dual, dim_cap)
    elems.sort(key=lambda v: (weight_exponent(v, n), v.coords()))
    echelon: list[int] = []
    chosen: list[BitVec] = []
    total = 0
    for v in elems:
        if len(chosen) == dual.dim:
            break
        if reduce_bits(v.bits, echelon) == 0:
            continue
        echelon = rref_bits(echelon + [v.bits])
        chosen.append(v)
        total += 1 << weight_exponent(v, n)
    return tuple(chosen), total


def brute_min_basis(
    dual: SubspaceF2, n: Sequence[int], cap: int = DEFAULT_BASIS_CAP
) -> tuple[tuple[BitVec, ...], int]:
    """Exhaustive minimum over all bases; independent check of the greedy result."""
    best: tuple[BitVec, ...] | None = None
    best_key: tuple | None = None
    for basis in enumerate_bases(dual, cap):
        total = sum(1 << weight_exponent(v, n) for v in basis)
        key = (total, tuple(sorted(v.coords() for v in basis)))
        if best_key is None or key < best_key:
            best, best_key = basis, key
    assert best is not None and best_key is not None
    return tuple(sorted(best, key=lambda v: v.coords())), best_key[0]


def upper_bound_for_basis(spec: GroupSpecB, basis: Sequence[BitVec]) -> int | None:
    """Weight-sum upper bound from one basis, or None when some vector is small."""
    dual = spec.dual_subspace()
    if len(basis) != dual.dim or rref(list(basis), spec.m) != dual:
        raise NotABasisError("vectors do not form a basis of the dual subspace")
    if any(is_small_product(support_ranks(v, spec.n)) for v in basis):
        return None
    total = sum(1 << weight_exponent(v, spec.n) for v in basis)
    return total - group_dim(spec.n)


def theorem_hypothesis_holds(spec: GroupSpecB) -> tuple[bool, tuple[int, ...]]:
    """Check that every factor has rank >= 7, or rank >= 3 and is not split off.

    Returns (holds, offending 1-based factors).  Diagnostic only: the bounds the
    calculator emits are valid regardless, but exactness rests on this shape.
    """
    dual = spec.dual_subspace()
    bad = tuple(
        i + 1
        for i, r in enumerate(spec.n)
        if r < 7 and (r < 3 or BitVec.unit(spec.m, i) in dual)
    )
    return (not bad, bad)


def diagonal_mu(m: int) -> SubspaceF2:
    """Central subgroup generated by the simultaneous sign flip of all factors."""
    return rref([BitVec(m, (1 << m) - 1)])


def maximal_mu(m: int) -> SubspaceF2:
    """Kernel of the product-of-signs character: all even sign patterns."""
    return annihilator(diagonal_mu(m))


@dataclass(frozen=True)
class KnownCase:
    kind: str  # "exact" or "lower"
    value: int
    tag: str
    description: str


def _rule_spin3_power_diagonal(spec: GroupSpecB) -> KnownCase | None:
    m = spec.m
    if m >= 2 and all(r == 1 for r in spec.n) and spec.mu_subspace() == diagonal_mu(m):
        return KnownCase(
            "exact",
            m + 1,
            "spin3-power-diagonal",
            f"product of {m} copies of Spin(3) modulo the diagonal sign: exactly {m + 1}",
        )
    return None


def _rule_small_pair_exact(spec: GroupSpecB) -> KnownCase | None:
    if spec.m != 2 or spec.mu_subspace() != diagonal_mu(2):
        return None
    pair = tuple(sorted(spec.n))
    if pair == (1, 2):
        return KnownCase(
            "exact", 4, "spin3-spin5-diagonal", "Spin(3) x Spin(5) modulo the diagonal sign: exactly 4"
        )
    if pair == (1, 3):
        return KnownCase(
            "exact", 4, "spin3-spin7-diagonal", "Spin(3) x Spin(7) modulo the diagonal sign: exactly 4"
        )
    return None


def _rule_equal_rank_diagonal(spec: GroupSpecB) -> KnownCase | None:
    m = spec.m
    if m >= 2 and len(set(spec.n)) == 1 and spec.mu_subspace() == diagonal_mu(m):
        r = spec.n[0]
        return KnownCase(
            "lower",
            m + 2 * r - 1,
            "equal-rank-diagonal",
            f"{m} equal factors of rank {r} modulo the diagonal sign: at least {m + 2 * r - 1}"
            " (finite abelian subgroup of that rank)",
        )
    return None


_PAIR_TABLE = {(1, 2): 4, (1, 3): 4, (1, 4): 5, (1, 5): 7, (2, 3): 5}


def _rule_small_pair_diagonal(spec: GroupSpecB) -> KnownCase | None:
    if spec.m != 2 or spec.mu_subspace() != diagonal_mu(2):
        return None
    pair = tuple(sorted(spec.n))
    value = _PAIR_TABLE.get(pair)
    if value is None:
        return None
    return KnownCase(
        "lower",
        value,
        "small-pair-diagonal",
        f"rank pair {list(pair)} modulo the diagonal sign: at least {value}"
        " (finite abelian subgroup of that rank)",
    )


_MAXIMAL_TABLE = {(1, 1, 1): 3, (1, 1, 2): 4, (1, 1, 3): 5, (1, 1, 1, 1): 5}


def _rule_small_maximal(spec: GroupSpecB) -> KnownCase | None:
    ranks = tuple(sorted(spec.n))
    value = _MAXIMAL_TABLE.get(ranks)
    if value is not None and spec.mu_subspace() == maximal_mu(spec.m):
        return KnownCase(
            "lower",
            value,
            "small-maximal-quotient",
            f"ranks {list(ranks)} modulo all even sign patterns: at least {value}"
            " (finite abelian subgroup of that rank)",
        )
    return None


KNOWN_RULES: tuple[Callable[[GroupSpecB], KnownCase | None], ...] = (
    _rule_spin3_power_diagonal,
    _rule_small_pair_exact,
    _rule_equal_rank_diagonal,
    _rule_small_pair_diagonal,
    _rule_small_maximal,
)


KNOWN_CASE_ROWS = (
    {
        "tag": "spin3-power-diagonal",
        "kind": "exact",
        "pattern": "m >= 2 factors of rank 1, diagonal mu",
        "value": "m + 1",
    },
    {
        "tag": "spin3-spin5-diagonal",
        "kind": "exact",
        "pattern": "ranks [1, 2], diagonal mu",
        "value": "4",
    },
    {
        "tag": "spin3-spin7-diagonal",
        "kind": "exact",
        "pattern": "ranks [1, 3], diagonal mu",
        "value": "4",
    },
    {
        "tag": "equal-rank-diagonal",
        "kind": "lower",
        "pattern": "m >= 2 factors of equal rank n, diagonal mu",
        "value": "m + 2n - 1",
    },
    {
        "tag": "small-pair-diagonal",
        "kind": "lower",
        "pattern": "ranks [1,2] / [1,3] / [1,4] / [1,5] / [2,3], diagonal mu",
        "value": "4 / 4 / 5 / 7 / 5",
    },
    {
        "tag": "small-maximal-quotient",
        "kind": "lower",
        "pattern": "ranks [1,1,1] / [1,1,2] / [1,1,3] / [1,1,1,1], mu = all even sign patterns",
        "value": "3 / 4 / 5 / 5",
    },
)


def known_cases(spec: GroupSpecB) -> KnownCase | None:
    """Strongest applicable entry of the built-in case ledger; exact entries win."""
    matches = [kc for rule in KNOWN_RULES if (kc := rule(spec)) is not None]
    exact = [kc for kc in matches if kc.kind == "exact"]
    if exact:
        return max(exact, key=lambda kc: kc.value)
    if matches:
        return max(matches, key=lambda kc: kc.value)
    return None


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    citation: str


@dataclass(frozen=True)
class EdResult:
    status: str
    lower: int
    upper: int | None
    minimal_basis: tuple[BitVec, ...]
    basis_total_weight: int
    group_dim: int
    trace: tuple[TraceEntry, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.status not in (STATUS_EXACT, STATUS_BOUNDS):
            raise ValueError(f"unknown status {self.status!r}")
        if self.lower < 0:
            raise ValueError("lower bound must be clamped at 0")
        if self.status == STATUS_EXACT and self.upper != self.lower:
            raise ValueError("exact results must have matching bounds")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError("upper bound below lower bound")

    @property
    def value(self) -> int | None:
        """The essential dimension when exact, else None."""
        return self.lower if self.status == STATUS_EXACT else None


def compute_ed(
    spec: GroupSpecB,
    basis_cap: int = DEFAULT_BASIS_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> EdResult:
    """Full decision procedure: greedy formula, exactness test, known cases, bound search."""
    validate(spec)
    dual = spec.dual_subspace()
    dim_g = group_dim(spec.n)
    trace = [
        TraceEntry(
            "dual-subspace",
            f"sign-character patterns orthogonal to mu form a subspace of dimension {dual.dim}",
        )
    ]
    warnings: list[str] = []

    try:
        basis, total = greedy_min_basis(dual, spec.n, dim_cap)
    except EnumerationTooLargeError:
        return _capped_result(spec, dim_g, trace, dual.dim)

    trace.append(
        TraceEntry(
            "greedy-minimal-basis",
            f"matroid greedy over the {(1 << dual.dim) - 1} nonzero patterns in weight order;"
            f" minimal total weight {total}",
        )
    )
    raw = total - dim_g
    lower = max(0, raw)
    clamp_note = "" if raw >= 0 else "; clamped to 0"
    trace.append(
        TraceEntry(
            "weight-formula-lower",
            f"basis total weight {total} minus group dimension {dim_g} gives {raw}{clamp_note}",
        )
    )
    holds, offenders = theorem_hypothesis_holds(spec)
    trace.append(
        TraceEntry(
            "theorem-hypothesis",
            "every factor has rank >= 7, or rank >= 3 and is not split off: holds"
            if holds
            else f"fails for factors {list(offenders)}; diagnostic only, bounds remain valid",
        )
    )

    small = [v for v in basis if is_small_product(support_ranks(v, spec.n))]
    if not small:
        trace.append(
            TraceEntry(
                "minimal-basis-exact",
                "no minimal-basis vector has a small factor product, so the weight formula is exact",
            )
        )
        return EdResult(
            STATUS_EXACT, lower, lower, basis, total, dim_g, tuple(trace), tuple(warnings)
        )

    trace.append(
        TraceEntry(
            "small-product-list",
            "minimal-basis vectors with small factor products: "
            + ", ".join(f"{v} -> {list(support_ranks(v, spec.n))}" for v in small),
        )
    )

    case = known_cases(spec)
    if case is not None and case.kind == "exact":
        if case.value < lower:
            raise RuntimeError("known exact value contradicts the weight-formula lower bound")
        trace.append(TraceEntry(f"known-exact/{case.tag}", case.description))
        return EdResult(
            STATUS_EXACT,
            case.value,
            case.value,
            basis,
            total,
            dim_g,
            tuple(trace),
            tuple(warnings),
        )
    if case is not None:
        if case.value > lower:
            lower = case.value
        trace.append(TraceEntry(f"known-lower/{case.tag}", case.description))

    upper: int | None = None
    if count_bases(dual.dim) <= basis_cap:
        best: int | None = None
        candidates = 0
        for b in enumerate_bases(dual, basis_cap):
            if any(is_small_product(support_ranks(v, spec.n)) for v in b):
                continue
            candidates += 1
            t = sum(1 << weight_exponent(v, spec.n) for v in b)
            if best is None or t < best:
                best = t
        if best is not None:
            upper = best - dim_g
            trace.append(
                TraceEntry(
                    "upper-bound-search",
                    f"best of {candidates} bases with no small factor product has total weight {best}",
                )
            )
        else:
            trace.append(
                TraceEntry(
                    "upper-bound-search",
                    "no basis avoids small factor products; no weight-formula upper bound",
                )
            )
    else:
        warnings.append(WARN_BASIS_CAP)
        trace.append(
            TraceEntry(
                "upper-bound-search",
                f"{count_bases(dual.dim)} bases exceed the cap of {basis_cap}; search skipped",
            )
        )
    if upper is not None and upper < lower:
        raise RuntimeError("upper bound search contradicts the lower bound")
    return EdResult(
        STATUS_BOUNDS, lower, upper, basis, total, dim_g, tuple(trace), tuple(warnings)
    )


def _capped_result(
    spec: GroupSpecB, dim_g: int, trace: list[TraceEntry], dual_dim: int
) -> EdResult:
    """Fallback when the dual subspace is too large to enumerate: ledger rules only."""
    trace.append(
        TraceEntry(
            "greedy-minimal-basis",
            f"2^{dual_dim} - 1 nonzero patterns exceed the enumeration cap; greedy skipped",
        )
    )
    case = known_cases(spec)
    if case is not None and case.kind == "exact":
        trace.append(TraceEntry(f"known-exact/{case.tag}", case.description))
        return EdResult(
            STATUS_EXACT,
            case.value,
            case.value,
            (),
            0,
            dim_g,
            tuple(trace),
            (WARN_ELEMENT_CAP,),
        )
    lower = 0
    if case is not None:
        lower = max(0, case.value)
        trace.append(TraceEntry(f"known-lower/{case.tag}", case.description))
    return EdResult(STATUS_BOUNDS, lower, None, (), 0, dim_g, tuple(trace), (WARN_ELEMENT_CAP,))


def spec_to_doc(spec: GroupSpecB) -> dict:
    """JSON-ready document for a group spec."""
    return {
        "type": "B",
        "n": list(spec.n),
        "mu_generators": [list(v.coords()) for v in spec.mu_gens],
    }


def spec_from_doc(doc: object) -> GroupSpecB:
    """Parse a spec document; raises SpecFormatError on malformed input.

    Exactly one of 'mu_generators' and 'r_generators' may be present; the
    latter gives generators of the dual subspace instead of mu.  With neither,
    mu is trivial.
    """
    if not isinstance(doc, dict):
        raise SpecFormatError("spec document must be an object")
    if doc.get("type") != "B":
        raise SpecFormatError("spec document must have type 'B'")
    unknown = set(doc) - {"type", "n", "mu_generators", "r_generators"}
    if unknown:
        raise SpecFormatError(f"unknown spec fields: {sorted(unknown)}")
    n = doc.get("n")
    if not isinstance(n, list) or any(not isinstance(r, int) or isinstance(r, bool) for r in n):
        raise SpecFormatError("'n' must be a list of integers")
    if "mu_generators" in doc and "r_generators" in doc:
        raise SpecFormatError("'mu_generators' and 'r_generators' are mutually exclusive")

    def rows_of(key: str) -> list[list[int]]:
        rows = doc.get(key, [])
        if not isinstance(rows, list) or any(
            not isinstance(row, list)
            or len(row) != len(n)
            or any(c not in (0, 1) or isinstance(c, bool) for c in row)
            for row in rows
        ):
            raise SpecFormatError(f"'{key}' must be a list of 0/1 rows of length {len(n)}")
        return rows

    if "r_generators" in doc:
        return GroupSpecB.from_dual_rows(n, rows_of("r_generators"))
    return GroupSpecB.from_mu_rows(n, rows_of("mu_generators"))


def random_group_spec(
    rng: Random, max_m: int = 8, max_rank: int = 9, max_dual_dim: int = 4
) -> GroupSpecB:
    """Seeded random spec for greedy-versus-exhaustive comparisons."""
    m = rng.randint(1, max_m)
    n = tuple(rng.randint(1, max_rank) for _ in range(m))
    dual_dim = rng.randint(0, min(max_dual_dim, m))
    target = m - dual_dim
    gens: list[BitVec] = []
    while rref(gens, m).dim < target:
        bits = rng.getrandbits(m)
        if bits:
            gens.append(BitVec(m, bits))
    return GroupSpecB(n, tuple(gens))


def compare_greedy_brute(
    spec: GroupSpecB, basis_cap: int = DEFAULT_BASIS_CAP
) -> tuple[int, int]:
    """Greedy and exhaustive minimal totals for the same spec."""
    dual = spec.dual_subspace()
    _, greedy_total = greedy_min_basis(dual, spec.n)
    _, brute_total = brute_min_basis(dual, spec.n, basis_cap)
    return greedy_total, brute_total
