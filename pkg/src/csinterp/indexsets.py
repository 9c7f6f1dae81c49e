r"""Multi-index sets: construction, lower-set machinery and cardinality bounds.

Multi-indices are plain tuples of nonnegative ints.  An :class:`IndexSet`
stores a duplicate-free collection in a canonical graded-lexicographic order
(primarily by the entry sum |i|_1, ties broken lexicographically), which
fixes matrix column order and makes experiment output reproducible.

Three standard constructions are provided:

* tensor product:    |i|_inf <= K, cardinality (K+1)^d
* total degree:      |i|_1   <= K, cardinality binom(K+d, d)
* hyperbolic cross:  prod (i_j + 1) <= K

together with lower-set (downward-closed) predicates, weighted cardinalities
|S|_w = sum w_i^2, and the scenario-specific combinatorial bounds that hold
for every lower set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

import numpy as np

#: Builders refuse to enumerate more indices than this unless overridden.
DEFAULT_CARDINALITY_CAP = 10**7

MultiIndex = tuple[int, ...]


class CardinalityCapExceeded(RuntimeError):
    """Raised when a requested index set would exceed the size cap."""


def _canonical_key(index: MultiIndex) -> tuple:
    return (sum(index), index)


class IndexSet:
    """Immutable ordered collection of d-dimensional multi-indices."""

    __slots__ = ("dimension", "indices", "_positions")

    def __init__(self, dimension: int, indices: Iterable[MultiIndex]):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        cleaned = []
        seen = set()
        for raw in indices:
            idx = tuple(int(k) for k in raw)
            if len(idx) != dimension:
                raise ValueError(f"index {idx} has dimension {len(idx)}, expected {dimension}")
            if any(k < 0 for k in idx):
                raise ValueError(f"index {idx} has negative entries")
            if idx not in seen:
                seen.add(idx)
                cleaned.append(idx)
        cleaned.sort(key=_canonical_key)
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "indices", tuple(cleaned))
        object.__setattr__(self, "_positions", {idx: pos for pos, idx in enumerate(cleaned)})

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("IndexSet is immutable")

    def __reduce__(self):
        return (IndexSet, (self.dimension, self.indices))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indices)

    def __contains__(self, index) -> bool:
        return tuple(index) in self._positions

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IndexSet)
            and self.dimension == other.dimension
            and self.indices == other.indices
        )

    def __hash__(self) -> int:
        return hash((self.dimension, self.indices))

    def __repr__(self) -> str:
        return f"IndexSet(d={self.dimension}, size={len(self)})"

    def position(self, index: MultiIndex) -> int:
        """Column position of an index in the canonical order."""
        try:
            return self._positions[tuple(index)]
        except KeyError:
            raise KeyError(f"index {tuple(index)} not in set") from None

    def positions(self, subset: Iterable[MultiIndex]) -> np.ndarray:
        return np.array([self.position(i) for i in subset], dtype=int)

    def issubset(self, other: "IndexSet") -> bool:
        return all(i in other for i in self.indices)

    def union(self, other: "IndexSet") -> "IndexSet":
        self._check_same_dim(other)
        return IndexSet(self.dimension, self.indices + other.indices)

    def intersection(self, other: "IndexSet") -> "IndexSet":
        self._check_same_dim(other)
        return IndexSet(self.dimension, (i for i in self.indices if i in other))

    def difference(self, other: "IndexSet") -> "IndexSet":
        self._check_same_dim(other)
        return IndexSet(self.dimension, (i for i in self.indices if i not in other))

    def max_degrees(self) -> MultiIndex:
        """Componentwise maximum degree over the set (zeros if empty)."""
        if not self.indices:
            return (0,) * self.dimension
        arr = np.asarray(self.indices, dtype=int)
        return tuple(int(v) for v in arr.max(axis=0))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int).reshape(len(self), self.dimension)

    def _check_same_dim(self, other: "IndexSet") -> None:
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch between index sets")

    # -- serialization: header "d=<d>", then one space-separated index per line
    def to_text(self) -> str:
        lines = [f"d={self.dimension}"]
        lines.extend(" ".join(str(k) for k in idx) for idx in self.indices)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IndexSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("d="):
            raise ValueError("missing 'd=<d>' header line")
        dimension = int(lines[0][2:])
        indices = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
        return cls(dimension, indices)


def build_tensor_product(dimension: int, max_degree: int, cap: int = DEFAULT_CARDINALITY_CAP) -> IndexSet:
    """All indices with |i|_inf <= max_degree; cardinality (max_degree+1)^d."""
    if dimension < 1 or max_degree < 0:
        raise ValueError("require dimension >= 1 and max_degree >= 0")
    size = (max_degree + 1) ** dimension
    if size > cap:
        raise CardinalityCapExceeded(f"tensor-product set has {size} > cap {cap} indices")
    return IndexSet(dimension, product(range(max_degree + 1), repeat=dimension))


def build_total_degree(dimension: int, max_degree: int, cap: int = DEFAULT_CARDINALITY_CAP) -> IndexSet:
    """All indices with |i|_1 <= max_degree; cardinality binom(max_degree+d, d)."""
    if dimension < 1 or max_degree < 0:
        raise ValueError("require dimension >= 1 and max_degree >= 0")
    size = math.comb(max_degree + dimension, dimension)
    if size > cap:
        raise CardinalityCapExceeded(f"total-degree set has {size} > cap {cap} indices")

    indices: list[MultiIndex] = []

    def descend(prefix: tuple[int, ...], budget: int) -> None:
        if len(prefix) == dimension - 1:
            indices.extend(prefix + (k,) for k in range(budget + 1))
            return
        for k in range(budget + 1):
            descend(prefix + (k,), budget - k)

    descend((), max_degree)
    return IndexSet(dimension, indices)


def build_hyperbolic_cross(dimension: int, order: int, cap: int = DEFAULT_CARDINALITY_CAP) -> IndexSet:
    """All indices with prod (i_j + 1) <= order, enumerated by recursive descent."""
    if dimension < 1 or order < 1:
        raise ValueError("require dimension >= 1 and order >= 1")
    indices: list[MultiIndex] = []

    def descend(prefix: tuple[int, ...], budget: int) -> None:
        if len(indices) > cap:
            raise CardinalityCapExceeded(f"hyperbolic cross exceeds cap {cap}")
        if len(prefix) == dimension:
            indices.append(prefix)
            return
        # remaining factors are all >= 1, so i+1 may go up to the full budget
        for k in range(budget):
            descend(prefix + (k,), budget // (k + 1))

    descend((), order)
    return IndexSet(dimension, indices)


def hyperbolic_cross_cardinality_bound(dimension: int, order: int) -> float:
    """Known upper bound min{2 K^3 4^d, e^2 K^(2 + log2 d)} on |HC(d, K)|."""
    poly = 2.0 * order**3 * 4.0**dimension
    alt = math.e**2 * float(order) ** (2.0 + math.log2(dimension)) if dimension >= 1 else math.inf
    return min(poly, alt)


def is_lower(indices: IndexSet | Iterable[MultiIndex]) -> bool:
    """True iff the set is downward closed (empty sets count as lower).

    It suffices to check that every one-step-down neighbour of every member
    is present; closure under arbitrary componentwise decrease follows by
    induction.
    """
    members = {tuple(i) for i in indices}
    for idx in members:
        for j, k in enumerate(idx):
            if k > 0 and idx[:j] + (k - 1,) + idx[j + 1 :] not in members:
                return False
    return True


def weighted_cardinality(index_set: IndexSet, weights) -> float:
    """|S|_w = sum over the set of w_i^2.

    ``weights`` is either an array aligned with the canonical order or a
    mapping from multi-index to weight; a missing weight raises.
    """
    if isinstance(weights, dict):
        try:
            vals = np.array([weights[idx] for idx in index_set], dtype=float)
        except KeyError as exc:
            raise KeyError(f"weight missing for index {exc.args[0]}") from None
    else:
        vals = np.asarray(weights, dtype=float)
        if vals.shape != (len(index_set),):
            raise ValueError(f"expected {len(index_set)} weights, got shape {vals.shape}")
    return float(np.sum(vals**2))


_LOG3_OVER_LOG2 = math.log(3.0) / math.log(2.0)
_LC_EXPONENT = math.log(1.0 + 4.0 / math.pi) / math.log(2.0)


@dataclass(frozen=True)
class BoundCheck:
    scenario: str
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def lower_set_bound_check(index_set: IndexSet, scenario: str) -> BoundCheck:
    """Evaluate the lower-set cardinality bound for one sampling scenario.

    For a lower set of cardinality s the intrinsic weighted cardinalities obey

    * CC: sum 2^{|i|_0}        <= s^(log 3 / log 2)
    * LU: sum prod (2 i_j + 1) <= s^2
    * LC: sum (4/pi)^{|i|_0}   <= s^(log(1 + 4/pi) / log 2)

    Returns the exact left-hand side, the bound, and whether it holds.
    """
    scenario = scenario.upper()
    if scenario not in ("CC", "LU", "LC"):
        raise ValueError(f"unknown scenario {scenario!r}")
    if not is_lower(index_set):
        raise ValueError("bound check requires a lower (downward closed) set")
    s = float(len(index_set))
    arr = index_set.as_array()
    nnz = (arr != 0).sum(axis=1)
    if scenario == "CC":
        lhs = float(np.sum(2.0**nnz))
        rhs = s**_LOG3_OVER_LOG2
    elif scenario == "LU":
        lhs = float(np.sum(np.prod(2.0 * arr + 1.0, axis=1)))
        rhs = s**2
    else:
        lhs = float(np.sum((4.0 / math.pi) ** nnz))
        rhs = s**_LC_EXPONENT
    return BoundCheck(scenario=scenario, lhs=lhs, rhs=rhs)


def random_lower_set(dimension: int, size: int, seed: int) -> IndexSet:
    """Grow a random lower set of exactly ``size`` indices.

    Starting from {0}, repeatedly adds a uniformly chosen element of the
    current admissible frontier (indices whose one-step-down neighbours are
    all present).  Deterministic for a given seed.
    """
    if dimension < 1 or size < 1:
        raise ValueError("require dimension >= 1 and size >= 1")
    rng = np.random.default_rng(seed)
    members: set[MultiIndex] = {(0,) * dimension}

    def admissible(idx: MultiIndex) -> bool:
        return all(
            k == 0 or idx[:j] + (k - 1,) + idx[j + 1 :] in members
            for j, k in enumerate(idx)
        )

    frontier: set[MultiIndex] = set()

    def extend_frontier(around: MultiIndex) -> None:
        for j in range(dimension):
            up = around[:j] + (around[j] + 1,) + around[j + 1 :]
            if up not in members and admissible(up):
                frontier.add(up)

    extend_frontier((0,) * dimension)
    while len(members) < size:
        # adding `pick` can only unlock its own upward neighbours
        ordered = sorted(frontier, key=_canonical_key)
        pick = ordered[int(rng.integers(len(ordered)))]
        frontier.discard(pick)
        members.add(pick)
        extend_frontier(pick)
    return IndexSet(dimension, members)
