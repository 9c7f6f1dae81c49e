r"""Orthonormal tensor polynomial bases on the open hypercube (-1, 1)^d.

Two families are supported, each orthonormal with respect to its natural
probability measure on (-1, 1):

* Chebyshev: phi_0 = 1, phi_k(t) = sqrt(2) cos(k arccos t) for k >= 1,
  orthonormal in L^2 of the measure 1 / (pi sqrt(1 - t^2)).
* Legendre: phi_k(t) = sqrt(2k + 1) P_k(t) with P_k the classical Legendre
  polynomial (P_k(1) = 1), orthonormal in L^2 of the uniform measure 1/2.

Multivariate basis functions are tensor products, phi_i(t) = prod_j
phi_{i_j}(t_j).  Sample points may be drawn from a measure different from the
orthogonality measure; the three supported (family, sampling) scenarios are
Chebyshev/Chebyshev ("CC"), Legendre/uniform ("LU") and Legendre/Chebyshev
("LC").  For the mixed LC scenario the square-root density ratio
sqrt(nu / mu) scales both matrix entries and data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

Family = Literal["chebyshev", "legendre"]
SamplingMeasure = Literal["chebyshev", "uniform"]
Scenario = Literal["CC", "LU", "LC"]

#: Permitted (family, sampling) pairs, keyed by scenario code.
SCENARIOS: dict[str, tuple[str, str]] = {
    "CC": ("chebyshev", "chebyshev"),
    "LU": ("legendre", "uniform"),
    "LC": ("legendre", "chebyshev"),
}

_PAIR_TO_SCENARIO = {pair: code for code, pair in SCENARIOS.items()}


@dataclass(frozen=True)
class BasisSpec:
    """Polynomial family, sampling measure and ambient dimension.

    Only the three scenario pairs in :data:`SCENARIOS` are permitted; the
    Chebyshev-basis/uniform-sampling combination has an unbounded density
    ratio and is rejected.
    """

    family: Family
    sampling: SamplingMeasure
    dimension: int

    def __post_init__(self) -> None:
        if (self.family, self.sampling) not in _PAIR_TO_SCENARIO:
            raise ValueError(
                f"unsupported scenario {(self.family, self.sampling)}; "
                f"permitted pairs: {sorted(SCENARIOS.values())}"
            )
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def scenario(self) -> Scenario:
        return _PAIR_TO_SCENARIO[(self.family, self.sampling)]  # type: ignore[return-value]

    @classmethod
    def from_scenario(cls, code: str, dimension: int) -> "BasisSpec":
        """Build a spec from a scenario code ("CC", "LU" or "LC")."""
        try:
            family, sampling = SCENARIOS[code.upper()]
        except KeyError:
            raise ValueError(f"unknown scenario {code!r}; expected one of {sorted(SCENARIOS)}") from None
        return cls(family=family, sampling=sampling, dimension=dimension)  # type: ignore[arg-type]


def as_points(points, dimension: int) -> np.ndarray:
    """Validate and reshape an array of points to shape (n, dimension).

    Every coordinate must lie strictly inside (-1, 1); boundary points are
    rejected rather than clamped since the sampling measures put no mass
    there and the LC density ratio vanishes at the boundary.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[1] != dimension:
        raise ValueError(f"expected points of shape (n, {dimension}), got {np.asarray(points).shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points contain non-finite values")
    if np.any(np.abs(pts) >= 1.0):
        raise ValueError("points must lie strictly inside the open hypercube (-1, 1)^d")
    return pts


def eval_univariate(family: Family, degree: int, t: float) -> float:
    """Evaluate the orthonormal univariate polynomial phi_degree at t.

    Chebyshev values come from the trigonometric identity (exact and stable
    near +-1); Legendre values from the classical three-term recurrence,
    scaled by sqrt(2k + 1) at the end.
    """
    if degree < 0:
        raise ValueError("degree must be a nonnegative integer")
    if not abs(t) < 1.0:
        raise ValueError(f"evaluation point {t} outside the open interval (-1, 1)")
    return float(univariate_table(family, degree, np.array([t]))[0, degree])


def univariate_table(family: Family, max_degree: int, t: np.ndarray) -> np.ndarray:
    """Evaluate phi_0 .. phi_max_degree at each point, shape (len(t), max_degree + 1)."""
    t = np.asarray(t, dtype=float)
    n = t.shape[0]
    if family == "chebyshev":
        theta = np.arccos(t)
        table = np.cos(np.outer(theta, np.arange(max_degree + 1)))
        table[:, 1:] *= math.sqrt(2.0)
        return table
    if family == "legendre":
        table = np.empty((n, max_degree + 1))
        table[:, 0] = 1.0
        if max_degree >= 1:
            table[:, 1] = t
        for k in range(1, max_degree):
            table[:, k + 1] = ((2 * k + 1) * t * table[:, k] - k * table[:, k - 1]) / (k + 1)
        table *= np.sqrt(2.0 * np.arange(max_degree + 1) + 1.0)
        return table
    raise ValueError(f"unknown family {family!r}")


def tensor_table(spec: BasisSpec, indices: Iterable[tuple[int, ...]], points) -> np.ndarray:
    """Evaluate every tensor basis function at every point.

    Returns an (n_points, n_indices) matrix whose columns follow the order of
    ``indices``.  Univariate values are tabulated once per coordinate and
    gathered, so the cost is O(n_points * (max_degree + n_indices * d)).
    """
    idx = np.asarray(list(indices), dtype=int)
    if idx.ndim != 2 or idx.shape[1] != spec.dimension:
        raise ValueError(f"indices must have dimension {spec.dimension}")
    pts = as_points(points, spec.dimension)
    out = np.ones((pts.shape[0], idx.shape[0]))
    for j in range(spec.dimension):
        table = univariate_table(spec.family, int(idx[:, j].max(initial=0)), pts[:, j])
        out *= table[:, idx[:, j]]
    return out


def eval_tensor(spec: BasisSpec, index: tuple[int, ...], point) -> float:
    """Evaluate the tensor basis function phi_index at a single point."""
    index = tuple(int(k) for k in index)
    if len(index) != spec.dimension:
        raise ValueError(f"index has dimension {len(index)}, expected {spec.dimension}")
    return float(tensor_table(spec, [index], point)[0, 0])


def intrinsic_weight(spec: BasisSpec, index: tuple[int, ...]) -> float:
    """Intrinsic weight u_i of a basis function under the spec's scenario.

    CC and LU return the exact sup norm of phi_i (2^{|i|_0/2} and
    prod sqrt(2 i_j + 1) respectively).  LC returns the sharp envelope bound
    (pi/2)^{d/2} (2/sqrt(pi))^{|i|_0}, which dominates the exact supremum of
    sqrt(nu/mu) |phi_i| for every index and is attained in the limit of
    large degrees.
    """
    index = tuple(int(k) for k in index)
    if len(index) != spec.dimension:
        raise ValueError(f"index has dimension {len(index)}, expected {spec.dimension}")
    if any(k < 0 for k in index):
        raise ValueError("multi-index entries must be nonnegative")
    nnz = sum(1 for k in index if k != 0)
    scenario = spec.scenario
    if scenario == "CC":
        return 2.0 ** (nnz / 2.0)
    if scenario == "LU":
        return float(np.prod([math.sqrt(2 * k + 1) for k in index])) if index else 1.0
    # LC
    return (math.pi / 2.0) ** (spec.dimension / 2.0) * (2.0 / math.sqrt(math.pi)) ** nnz


def intrinsic_weights(spec: BasisSpec, indices: Iterable[tuple[int, ...]]) -> np.ndarray:
    """Vector of intrinsic weights in the order of ``indices``."""
    return np.array([intrinsic_weight(spec, i) for i in indices])


def measure_density_ratio(spec: BasisSpec, points) -> np.ndarray:
    """sqrt(nu(t) / mu(t)) at each point; identically 1 for CC and LU."""
    pts = as_points(points, spec.dimension)
    if spec.scenario in ("CC", "LU"):
        return np.ones(pts.shape[0])
    # LC: nu = 2^-d uniform, mu = tensor Chebyshev
    return np.prod(math.sqrt(math.pi / 2.0) * (1.0 - pts**2) ** 0.25, axis=1)


def quadrature_rule(family: Family, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights integrating against the family's probability measure.

    The returned weights integrate f exactly for polynomials f of degree
    <= 2 n_nodes - 1:  sum(w * f(x)) ~= integral of f d(nu).
    """
    if n_nodes < 1:
        raise ValueError("need at least one quadrature node")
    if family == "chebyshev":
        k = np.arange(1, n_nodes + 1)
        nodes = np.cos((2 * k - 1) * math.pi / (2 * n_nodes))
        weights = np.full(n_nodes, 1.0 / n_nodes)
        return nodes, weights
    if family == "legendre":
        nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
        return nodes, weights / 2.0
    raise ValueError(f"unknown family {family!r}")
