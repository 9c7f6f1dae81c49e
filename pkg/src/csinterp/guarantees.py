r"""Closed-form quantities from the weighted-l1 recovery guarantees.

The central object is the measurement quantity

    M(S; u, w) = |S|_u + max_{i in full \ S} (u_i^2 / w_i^2) * max(|S|_w, 1),

where u are the intrinsic basis weights and w the optimization weights.  Up
to log factors (and an unspecified universal constant, reported here as 1),
M controls how many random samples suffice for recovery of coefficients
supported on S.  The companion factor

    lambda = 1 + sqrt(log(1/eps)) / log(2 N sqrt(max(|S|_w, 1)))

enters the error bound, and the truncation side is quantified through the
r-th singular value of the unnormalized sampling matrix: the extra error
from truncating the expansion to the working index set is at most
(1 + ||w|| / sigma_r) times the weighted tail norm.

Also here: weight-vector construction for the named weighting strategies,
and the prior-support comparison, where weights gamma < 1 on a support
estimate G shrink the measurement quantity precisely when more than
(1 + gamma)/2 of G is guessed correctly.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .basis import BasisSpec, intrinsic_weights
from .indexsets import IndexSet, lower_set_bound_check
from .measurement import MeasurementSystem
from .solver import WeightVector, weight_values

__all__ = [
    "GuaranteeReport",
    "TruncationReport",
    "PriorSupportReport",
    "measurement_quantity",
    "lambda_factor",
    "sufficient_m",
    "truncation_bound",
    "prior_support_quantities",
    "prior_support_weights",
    "weights_from_strategy",
    "lower_set_bound_check_table",
    "WEIGHT_STRATEGIES",
]


@dataclass(frozen=True)
class GuaranteeReport:
    m_value: float
    delta_card_u: float
    delta_card_w: float
    tail_sup_ratio: float
    lam: float
    sufficient_m_estimate: float
    log_factor: float
    hypothesis_min_weight_ok: bool
    tail_empty: bool
    #: The theory's universal constant is unknown; estimates are reported
    #: with constant 1 and are meaningful for relative comparisons only.
    universal_constant: float = 1.0
    constant_is_placeholder: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


@dataclass(frozen=True)
class TruncationReport:
    rank_r: int
    sigma_r: float
    pk_weight_norm: float
    bound_factor: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


@dataclass(frozen=True)
class PriorSupportReport:
    rho: float
    sigma: float
    m_weighted: float
    m_unweighted: float
    weighted_is_smaller: bool
    degenerate: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _split_positions(delta: IndexSet, full: IndexSet) -> tuple[np.ndarray, np.ndarray]:
    if delta.dimension != full.dimension:
        raise ValueError("dimension mismatch between delta and the full set")
    if not delta.issubset(full):
        raise ValueError("delta must be a subset of the full index set")
    inside = full.positions(delta)
    mask = np.ones(len(full), dtype=bool)
    mask[inside] = False
    return inside, np.flatnonzero(mask)


def measurement_quantity(delta: IndexSet, full: IndexSet, u, w) -> float:
    """M(delta; u, w) = |delta|_u + max over the complement of u^2/w^2 times max(|delta|_w, 1).

    When the complement is empty the ratio term is zero by convention.
    """
    u = weight_values(u, len(full))
    w = weight_values(w, len(full))
    inside, outside = _split_positions(delta, full)
    card_u = float(np.sum(u[inside] ** 2))
    card_w = float(np.sum(w[inside] ** 2))
    ratio = float(np.max(u[outside] ** 2 / w[outside] ** 2)) if outside.size else 0.0
    return card_u + ratio * max(card_w, 1.0)


def lambda_factor(epsilon: float, n_full: int, delta_card_w: float) -> float:
    """Error-bound factor 1 + sqrt(log(1/eps)) / log(2 N sqrt(max(|S|_w, 1)))."""
    if not 0.0 < epsilon < math.exp(-1.0):
        raise ValueError("epsilon must lie in (0, 1/e)")
    if n_full < 1:
        raise ValueError("N must be >= 1")
    return 1.0 + math.sqrt(math.log(1.0 / epsilon)) / math.log(
        2.0 * n_full * math.sqrt(max(delta_card_w, 1.0))
    )


def sufficient_m(delta: IndexSet, full: IndexSet, u, w, epsilon: float) -> GuaranteeReport:
    """Sample-count estimate M * log(1/eps) * log(2 N max(sqrt(|S|_w), 1)).

    The unknown universal constant is reported as 1: the estimate is a
    relative-comparison tool, not an absolute sample-size oracle.  The
    report also flags whether the hypothesis min_{i off delta} w_i >= 1
    holds.
    """
    u_vals = weight_values(u, len(full))
    w_vals = weight_values(w, len(full))
    inside, outside = _split_positions(delta, full)
    card_u = float(np.sum(u_vals[inside] ** 2))
    card_w = float(np.sum(w_vals[inside] ** 2))
    tail_empty = outside.size == 0
    ratio = float(np.max(u_vals[outside] ** 2 / w_vals[outside] ** 2)) if not tail_empty else 0.0
    m_value = card_u + ratio * max(card_w, 1.0)
    n_full = len(full)
    log_factor = math.log(2.0 * n_full * max(math.sqrt(card_w), 1.0))
    lam = lambda_factor(epsilon, n_full, card_w)
    hypothesis_ok = bool(tail_empty or np.min(w_vals[outside]) >= 1.0)
    return GuaranteeReport(
        m_value=m_value,
        delta_card_u=card_u,
        delta_card_w=card_w,
        tail_sup_ratio=ratio,
        lam=lam,
        sufficient_m_estimate=m_value * math.log(1.0 / epsilon) * log_factor,
        log_factor=log_factor,
        hypothesis_min_weight_ok=hypothesis_ok,
        tail_empty=tail_empty,
    )


def truncation_bound(system: MeasurementSystem, weights, rank_tol: float = 1e-10) -> TruncationReport:
    """Numerical rank, smallest retained singular value and the tail factor.

    The singular values are those of the unnormalized matrix sqrt(m) * A.
    The numerical rank r counts values above rank_tol * sigma_max, and the
    reported factor 1 + ||w|| / sigma_r multiplies the weighted tail norm in
    the truncation-error bound.
    """
    w = weight_values(weights, system.n)
    unnormalized = math.sqrt(system.m) * system.matrix
    singular = np.linalg.svd(unnormalized, compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        raise ValueError("measurement matrix has rank zero")
    rank = int(np.sum(singular > rank_tol * singular[0]))
    sigma_r = float(singular[rank - 1])
    pk_norm = float(np.linalg.norm(w))
    return TruncationReport(
        rank_r=rank,
        sigma_r=sigma_r,
        pk_weight_norm=pk_norm,
        bound_factor=1.0 + pk_norm / sigma_r,
    )


def prior_support_quantities(
    delta: IndexSet, gamma_set: IndexSet, gamma_weight: float
) -> PriorSupportReport:
    """Prior-support comparison under unit intrinsic weights.

    With weights sqrt(gamma) on the support estimate G and 1 elsewhere
    (so G contributes gamma |G| to the weighted cardinality), the
    measurement quantity of delta union G equals

        (2 + sigma (1 + gamma - 2 rho)) s,   rho = |delta & G| / |G|,
                                             sigma = |G| / |delta|,

    which is smaller than the unweighted M(delta; 1, 1) = 2 s exactly when
    rho > (1 + gamma) / 2.
    """
    if not 0.0 < gamma_weight < 1.0:
        raise ValueError("gamma must lie strictly between 0 and 1")
    if len(delta) == 0:
        raise ValueError("delta must be nonempty")
    s = float(len(delta))
    m_unweighted = 2.0 * s
    if len(gamma_set) == 0:
        return PriorSupportReport(
            rho=math.nan, sigma=0.0, m_weighted=m_unweighted,
            m_unweighted=m_unweighted, weighted_is_smaller=False, degenerate=True,
        )
    rho = float(len(delta.intersection(gamma_set))) / float(len(gamma_set))
    sigma = float(len(gamma_set)) / s
    m_weighted = (2.0 + sigma * (1.0 + gamma_weight - 2.0 * rho)) * s
    return PriorSupportReport(
        rho=rho,
        sigma=sigma,
        m_weighted=m_weighted,
        m_unweighted=m_unweighted,
        weighted_is_smaller=bool(rho > (1.0 + gamma_weight) / 2.0),
    )


def prior_support_weights(full: IndexSet, gamma_set: IndexSet, gamma_weight: float) -> WeightVector:
    """Weights sqrt(gamma) on the support estimate, 1 elsewhere.

    The square root makes the weighted cardinality of the estimate equal
    gamma |G|, which is the discount the closed-form comparison assumes.
    """
    if not 0.0 < gamma_weight < 1.0:
        raise ValueError("gamma must lie strictly between 0 and 1")
    vals = np.ones(len(full))
    members = [i for i in gamma_set if i in full]
    if members:
        vals[full.positions(members)] = math.sqrt(gamma_weight)
    return WeightVector(values=vals, tag="prior_support", params=(gamma_weight,))


def lower_set_bound_check_table(delta: IndexSet) -> list[dict]:
    """All three scenario bound checks for a lower set, as JSON-ready rows."""
    rows = []
    for scenario in ("CC", "LU", "LC"):
        check = lower_set_bound_check(delta, scenario)
        rows.append(
            {"scenario": check.scenario, "lhs": check.lhs, "rhs": check.rhs, "holds": check.holds}
        )
    return rows


WEIGHT_STRATEGIES = (
    "unit",
    "intrinsic_power",
    "polynomial_growth",
    "anisotropic_product",
    "total_degree_growth",
    "prior_support",
    "custom",
)


def weights_from_strategy(
    strategy: str,
    index_set: IndexSet,
    spec: Optional[BasisSpec] = None,
    *,
    alpha: Optional[float] = None,
    gamma: Optional[float] = None,
    prior_set: Optional[IndexSet] = None,
    values=None,
) -> WeightVector:
    """Build the weight vector for a named strategy in canonical set order.

    unit                  w_i = 1
    intrinsic_power       w_i = u_i^alpha            (requires spec)
    polynomial_growth     w_i = (i + 1)^alpha        (univariate sets only)
    anisotropic_product   w_i = prod_j (i_j + 1)^alpha
    total_degree_growth   w_i = (|i|_1 + 1)^alpha
    prior_support         sqrt(gamma) on the estimate, 1 elsewhere
    custom                caller-supplied values
    """
    strategy = strategy.lower()
    if strategy not in WEIGHT_STRATEGIES:
        raise ValueError(f"unknown weight strategy {strategy!r}; known: {WEIGHT_STRATEGIES}")
    n = len(index_set)
    if strategy == "unit":
        return WeightVector.unit(n)
    if strategy == "custom":
        return WeightVector(values=weight_values(values, n), tag="custom")
    if strategy == "prior_support":
        if gamma is None or prior_set is None:
            raise ValueError("prior_support requires gamma and prior_set")
        return prior_support_weights(index_set, prior_set, gamma)
    if alpha is None or alpha < 0:
        raise ValueError(f"strategy {strategy!r} requires a parameter alpha >= 0")
    arr = index_set.as_array()
    if strategy == "intrinsic_power":
        if spec is None:
            raise ValueError("intrinsic_power requires a basis spec")
        vals = intrinsic_weights(spec, index_set) ** alpha
    elif strategy == "polynomial_growth":
        if index_set.dimension != 1:
            raise ValueError("polynomial_growth weights are defined for univariate sets")
        vals = (arr[:, 0] + 1.0) ** alpha
    elif strategy == "anisotropic_product":
        vals = np.prod((arr + 1.0) ** alpha, axis=1)
    else:  # total_degree_growth
        vals = (arr.sum(axis=1) + 1.0) ** alpha
    return WeightVector(values=vals, tag=strategy, params=(float(alpha),))
