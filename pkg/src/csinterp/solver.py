r"""Weighted basis-pursuit-denoise solver and a small-scale LP oracle.

The problem solved here is

    min ||z||_{1,w}  subject to  ||A z - y|| <= eta,

with ||z||_{1,w} = sum w_i |z_i| and eta >= 0 (already on the normalized
scale, i.e. eta/sqrt(m) when the matrix carries a 1/sqrt(m) factor).  The
weights are removed up front by the substitution z' = W z, which turns the
problem into plain basis pursuit denoising

    min ||z'||_1  subject to  ||B z' - y|| <= eta,   B = A W^{-1},

solved by a first-order primal-dual method (Chambolle-Pock): the constraint
is handled through the proximal map of the support function of the eta-ball
in the dual, the l1 term through soft thresholding in the primal.  Each
iteration costs two matrix-vector products, O(mN).

For eta = 0 a converged iterate is optionally polished: the support of the
iterate is extracted, the equality system is re-solved by least squares on
that support, and the candidate replaces the iterate only when it is at
least as feasible and has no larger objective.  This recovers vertex
solutions to near machine precision.

``solve_lp_oracle`` provides an independent check for the equality
constrained case via the standard linear-programming reformulation
(min w.(p + q) s.t. A(p - q) = y, p, q >= 0), delegated to scipy's HiGHS
backend, and is intended for desk-scale verification only (N <= 200).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import linprog

__all__ = [
    "SolverOptions",
    "SolveResult",
    "WeightVector",
    "SolverError",
    "InfeasibleProblem",
    "NonFiniteInput",
    "solve_weighted_bpdn",
    "solve_lp_oracle",
    "check_interpolation",
    "operator_norm_estimate",
]

LP_ORACLE_MAX_COLUMNS = 200


class SolverError(RuntimeError):
    pass


class InfeasibleProblem(SolverError):
    """The constraint set is empty (eta = 0 and y outside the range of A)."""


class NonFiniteInput(SolverError):
    pass


@dataclass(frozen=True)
class WeightVector:
    """Positive optimization weights aligned with an index set's order."""

    values: np.ndarray
    tag: str = "custom"
    params: tuple = ()

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("weights must be a one-dimensional vector")
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise ValueError("weights must be positive and finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]

    @classmethod
    def unit(cls, n: int) -> "WeightVector":
        return cls(values=np.ones(n), tag="unit")


def weight_values(weights, n: Optional[int] = None) -> np.ndarray:
    """Coerce a WeightVector or array-like to a validated weight array."""
    vals = weights.values if isinstance(weights, WeightVector) else np.asarray(weights, dtype=float)
    if vals.ndim != 1:
        raise ValueError("weights must be one-dimensional")
    if n is not None and vals.shape[0] != n:
        raise ValueError(f"expected {n} weights, got {vals.shape[0]}")
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        raise ValueError("weights must be positive and finite")
    return vals


@dataclass(frozen=True)
class SolverOptions:
    obj_tol: float = 1e-8          # relative primal-dual gap target
    feas_tol: float = 1e-9         # absolute residual slack beyond eta
    max_iters: int = 100_000
    power_iters: int = 50          # operator-norm estimation budget
    check_every: int = 50          # convergence-test cadence
    polish: bool = True            # periodic vertex polish for eta = 0
    polish_every: int = 250        # polish-attempt cadence (eta = 0 only)
    adaptive_steps: bool = True    # residual-balancing step-size adaptation


@dataclass
class SolveResult:
    coefficients: np.ndarray
    objective: float
    residual_norm: float
    iterations: int
    converged: bool
    kkt_gap: float
    dual: Optional[np.ndarray] = None
    polished: bool = False

    def weighted_l1(self) -> float:
        return self.objective


def operator_norm_estimate(matrix: np.ndarray, n_iters: int = 50, seed: int = 0) -> float:
    """Largest singular value of ``matrix`` by seeded power iteration."""
    rng = np.random.Generator(np.random.Philox(seed))
    v = rng.standard_normal(matrix.shape[1])
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return 0.0
    v /= norm
    est = 0.0
    for _ in range(max(1, n_iters)):
        u = matrix @ v
        v = matrix.T @ u
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return 0.0
        est = math.sqrt(nv)
        v /= nv
    return est


def _soft_threshold(v: np.ndarray, amount: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - amount, 0.0)


def solve_weighted_bpdn(
    matrix: np.ndarray,
    y: np.ndarray,
    weights,
    eta: float,
    opts: SolverOptions | None = None,
) -> SolveResult:
    """Solve min ||z||_{1,w} subject to ||A z - y|| <= eta.

    Returns the minimizer up to the configured primal-dual gap and
    feasibility tolerances.  When the iteration cap is hit the best iterate
    is returned with ``converged = False`` rather than raising.  Minimizers
    need not be unique; callers should assert on objective value, residual
    and function values, never on coefficient identity.
    """
    opts = opts or SolverOptions()
    A = np.asarray(matrix, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if A.ndim != 2 or A.shape[0] != y.shape[0]:
        raise ValueError(f"matrix {A.shape} and data {y.shape} are inconsistent")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise NonFiniteInput("matrix or data contain non-finite entries")
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    m, n = A.shape
    w = weight_values(weights, n)

    if eta == 0.0:
        _require_in_range(A, y, opts.feas_tol)

    # absorb the weights (columns j of B carry dual bound |<b_j, q>| <= 1),
    # then normalize columns so the iteration is insensitive to weight scale;
    # the per-coordinate thresholds tau * wn restore the true objective
    B = A / w[None, :]
    col = np.linalg.norm(B, axis=0)
    col_floor = 1e-14 * max(1.0, float(col.max(initial=0.0)))
    if float(col.max(initial=0.0)) == 0.0:
        # zero operator: feasible iff ||y|| <= eta, optimum is z = 0
        resid = float(np.linalg.norm(y))
        if resid > eta + opts.feas_tol:
            raise InfeasibleProblem("operator is zero and ||y|| > eta")
        return SolveResult(
            coefficients=np.zeros(n), objective=0.0, residual_norm=resid,
            iterations=0, converged=True, kkt_gap=0.0, dual=np.zeros(m),
        )
    col = np.maximum(col, col_floor)
    Bn = B / col[None, :]
    wn = 1.0 / col
    norm_bn = operator_norm_estimate(Bn, opts.power_iters)
    step = 1.0 / (1.01 * max(norm_bn, 1e-300))
    tau = sigma = step

    v = np.zeros(n)
    v_bar = v.copy()
    q = np.zeros(m)
    best = None
    best_dual = 0.0  # v = 0 and q = 0 give the trivial lower bound 0
    best_dual_vec = np.zeros(m)
    iterations = 0
    converged = False
    polisher = None
    if eta == 0.0 and opts.polish:
        polisher = _VertexPolisher(B, y, opts.feas_tol, norm_bn * float(col.max()))

    # residual-balancing bookkeeping (previous check-point snapshot)
    adapt = 0.5
    prev_v = v.copy()
    prev_q = q.copy()
    prev_btq = np.zeros(n)
    prev_bv = np.zeros(m)

    def gap_of(objective: float) -> float:
        return objective - best_dual

    def small_gap(objective: float) -> bool:
        return gap_of(objective) <= opts.obj_tol * (1.0 + objective)

    for k in range(1, opts.max_iters + 1):
        iterations = k
        p = q + sigma * (Bn @ v_bar) - sigma * y
        if eta > 0.0:
            pnorm = float(np.linalg.norm(p))
            q = p * max(0.0, 1.0 - sigma * eta / pnorm) if pnorm > 0 else np.zeros(m)
        else:
            q = p
        btq = Bn.T @ q
        v_new = _soft_threshold(v - tau * btq, tau * wn)
        v_bar = 2.0 * v_new - v
        v = v_new

        if k % opts.check_every == 0 or k == opts.max_iters:
            bv = Bn @ v
            state = _iterate_state(y, eta, wn, v, q, bv, btq)
            if state["dual_value"] > best_dual:
                best_dual = state["dual_value"]
                best_dual_vec = state["dual_vector"]
            if best is None or state["merit"] < best["merit"]:
                best = {**state, "v": v.copy(), "q": q.copy(), "iterations": k}
            if state["feas_violation"] <= opts.feas_tol and small_gap(state["objective"]):
                converged = True
                best = {**state, "v": v.copy(), "q": q.copy(), "iterations": k}
                break
            if opts.adaptive_steps and adapt > 1e-3:
                # balance windowed primal/dual residuals by trading tau vs
                # sigma at constant product (Goldstein-style adaptation)
                p_res = float(np.linalg.norm((prev_v - v) / tau - (prev_btq - btq)))
                d_res = float(np.linalg.norm((prev_q - q) / sigma - (prev_bv - bv)))
                if p_res > 2.0 * d_res and tau < 1e4 * step:
                    tau /= 1.0 - adapt
                    sigma *= 1.0 - adapt
                    adapt *= 0.95
                elif d_res > 2.0 * p_res and tau > 1e-4 * step:
                    tau *= 1.0 - adapt
                    sigma /= 1.0 - adapt
                    adapt *= 0.95
            prev_v = v.copy()
            prev_q = q.copy()
            prev_btq = btq.copy()
            prev_bv = bv.copy()

        if polisher is not None and (k % opts.polish_every == 0 or k == opts.max_iters):
            cand = polisher.attempt(v / col, k)
            if cand is not None and cand["dual_value"] > best_dual:
                best_dual = cand["dual_value"]
                best_dual_vec = cand["dual_vector"]
            vertex = polisher.vertex
            if vertex is not None and small_gap(vertex["objective"]):
                converged = True
                break

    if best is None:  # max_iters < check_every
        state = _iterate_state(y, eta, wn, v, q, Bn @ v, Bn.T @ q)
        if state["dual_value"] > best_dual:
            best_dual = state["dual_value"]
            best_dual_vec = state["dual_vector"]
        best = {**state, "v": v.copy(), "q": q.copy(), "iterations": iterations}

    best_x = best["v"] / col  # back to weight-absorbed coordinates

    # prefer the vertex candidate when it is certified near-optimal, when it
    # does not worsen the objective, or when the plain iterate never became
    # feasible (the vertex interpolates the data exactly, the iterate does not)
    polished = False
    vertex = polisher.vertex if polisher is not None else None
    if vertex is not None:
        adopt = (
            small_gap(vertex["objective"])
            or vertex["objective"] <= best["objective"] + opts.obj_tol * (1.0 + best["objective"])
            or best["feas_violation"] > opts.feas_tol
        )
        if adopt:
            best = {**best, **vertex}
            best_x = vertex["x"]
            polished = True
            if small_gap(vertex["objective"]) and vertex["feas_violation"] <= opts.feas_tol:
                converged = True

    z = best_x / w
    resid = float(np.linalg.norm(A @ z - y))
    # best dual seen, in the original scaling: |(A^T dual)_i| <= w_i always,
    # with equality (against w_i sign(z_i)) on the support at optimality
    dual = -best_dual_vec
    return SolveResult(
        coefficients=z,
        objective=float(np.sum(w * np.abs(z))),
        residual_norm=resid,
        iterations=iterations,
        converged=bool(converged and resid <= eta + opts.feas_tol),
        kkt_gap=float(gap_of(best["objective"])),
        dual=dual,
        polished=polished,
    )


def _iterate_state(y, eta, wn, v, q, bv, btq) -> dict:
    """Objective, feasibility violation and a dual lower bound at an iterate.

    Works in column-normalized coordinates: the objective is sum wn |v| and
    dual feasibility means |btq_j| <= wn_j.  Any q rescaled into that set
    gives the lower bound -<q, y> - eta ||q|| on the optimal objective.
    """
    resid_norm = float(np.linalg.norm(bv - y))
    feas_violation = max(0.0, resid_norm - eta)
    objective = float(np.sum(wn * np.abs(v)))
    scale = max(1.0, float(np.max(np.abs(btq) / wn, initial=0.0)))
    q_feas = q / scale
    dual_value = float(-(q_feas @ y) - eta * np.linalg.norm(q_feas))
    return {
        "objective": objective,
        "feas_violation": feas_violation,
        "dual_value": dual_value,
        "dual_vector": q_feas,
        "merit": max(objective - dual_value, 0.0) + 10.0 * feas_violation,
    }


class _VertexPolisher:
    """Stateful vertex endgame for the equality-constrained case (eta = 0).

    A basis-pursuit minimizer is a vertex with at most m nonzeros, and the
    PDHG iterate identifies most of its support long before it reaches high
    accuracy.  Each attempt reads the iterate's largest entries, completes
    the support greedily with the columns most correlated with the residual
    until the equality system is reproduced, re-solves by least squares, and
    then runs column-exchange descent (simplex-style pivots) until the
    on-support dual vector certifies optimality or the pivot budget runs
    out.  Attempts are skipped while the iterate support is unchanged, and
    back off when they stop improving the incumbent vertex.
    """

    def __init__(self, B: np.ndarray, y: np.ndarray, feas_tol: float, norm_b: float = 0.0):
        self.B = B
        self.y = y
        self.norm_b = norm_b
        self.m, self.n = B.shape
        self.tol_feas = max(feas_tol, 1e-12 * max(1.0, float(np.linalg.norm(y))))
        self.pivot_budget = 40 * self.m + 200
        self.vertex: Optional[dict] = None
        self._last_head = b""
        self._stale_attempts = 0
        self._skip_until = 0

    def attempt(self, x: np.ndarray, iteration: int) -> Optional[dict]:
        if iteration < self._skip_until and self.vertex is not None:
            return None
        abs_x = np.abs(x)
        if float(abs_x.max(initial=0.0)) == 0.0:
            if float(np.linalg.norm(self.y)) <= self.tol_feas:
                self.vertex = {"x": np.zeros(self.n), "q": np.zeros(self.m), "objective": 0.0,
                               "feas_violation": 0.0, "dual_value": 0.0, "merit": 0.0,
                               "dual_vector": np.zeros(self.m), "iterations": iteration}
                return self.vertex
            return None
        head = np.sort(np.argsort(-abs_x)[: min(self.m, int(np.count_nonzero(abs_x)))])
        key = head.tobytes()
        if key == self._last_head and self.vertex is not None:
            return None
        self._last_head = key

        built = self._complete_support(head)
        # continue the exchange from the incumbent vertex when it is better
        # than the freshly completed candidate, so pivots accumulate progress
        # across attempts instead of restarting
        if built is not None and self.vertex is not None:
            if float(np.abs(built[1]).sum()) >= self.vertex["objective"]:
                built = (self.vertex["support"], self.vertex["sol"])
        elif built is None and self.vertex is not None:
            built = (self.vertex["support"], self.vertex["sol"])
        if built is None:
            return None
        support, sol = built
        if self.pivot_budget > 0:
            support, sol, used = _exchange_improve(
                self.B, self.y, support, sol, min(self.pivot_budget, 6 * self.m + 60)
            )
            self.pivot_budget -= used
        feas = float(np.linalg.norm(self.B[:, support] @ sol - self.y))
        if feas > self.tol_feas:
            return None
        candidate = np.zeros(self.n)
        candidate[support] = sol
        objective = float(np.abs(sol).sum())
        q_cert, dual_value = _dual_certificate(self.B, self.B[:, support], self.y, sol, self.norm_b)
        entry = {"x": candidate, "q": q_cert, "objective": objective,
                 "feas_violation": feas, "dual_value": dual_value,
                 "dual_vector": q_cert, "merit": max(objective - dual_value, 0.0) + 10.0 * feas,
                 "iterations": iteration, "support": support, "sol": sol}
        improved = self.vertex is None or objective < self.vertex["objective"] - 1e-14 * (1.0 + objective)
        if improved:
            self.vertex = entry
            self._stale_attempts = 0
            self._skip_until = 0
        else:
            # back off exponentially while attempts stop paying for themselves
            self._stale_attempts += 1
            self._skip_until = iteration + 250 * (1 << min(self._stale_attempts, 6))
        return entry

    def _complete_support(self, head: np.ndarray):
        """Greedy residual-matching completion of the head support."""
        support = head
        cap = min(self.m, self.n)
        while True:
            bs = self.B[:, support]
            sol, *_ = np.linalg.lstsq(bs, self.y, rcond=None)
            if not np.all(np.isfinite(sol)):
                return None
            residual = self.y - bs @ sol
            feas = float(np.linalg.norm(residual))
            if feas <= self.tol_feas:
                return support, sol
            if support.size >= cap:
                return None
            corr = np.abs(self.B.T @ residual)
            corr[support] = -1.0
            n_add = min(cap - support.size, max(8, self.m // 8))
            extra = np.argpartition(corr, -n_add)[-n_add:]
            extra = extra[corr[extra] > 0]
            if extra.size == 0:
                return None
            support = np.sort(np.concatenate([support, extra]))


def _exchange_improve(B, y, support, sol, max_pivots: int):
    """Column-exchange descent from a feasible vertex (eta = 0).

    The dual vector solving B_S^T q = -sign(z_S) certifies optimality unless
    some off-support column violates |<b_j, q>| <= 1.  Entering a violated
    column and leaving along the null direction of the enlarged support
    never increases the l1 objective; the ratio test drops the first
    on-support coordinate to reach zero.  Entering columns are picked by
    largest violation, falling back to smallest index (Bland's rule, which
    cannot cycle) while the objective stalls on a degenerate plateau.  The
    incumbent vertex is returned along with the number of pivots spent.
    """
    from scipy.linalg import solve_triangular

    support = np.asarray(support, dtype=int)
    sol = np.asarray(sol, dtype=float)
    stall = 0
    used = 0
    objective = float(np.abs(sol).sum())
    for _pivot in range(max_pivots):
        bs = B[:, support]
        q_factor, r_factor = np.linalg.qr(bs)
        diag = np.abs(np.diag(r_factor))
        if diag.size == 0 or diag.min() <= 1e-12 * max(1.0, diag.max()):
            break
        # min-norm dual from B_S^T q = -sign(z_S), then the entering column
        q = q_factor @ solve_triangular(r_factor.T, -np.sign(sol), lower=True)
        corr = B.T @ q
        corr[support] = 0.0
        violated = np.flatnonzero(np.abs(corr) > 1.0 + 1e-9)
        if violated.size == 0:
            break
        if stall >= 3:  # Bland's rule while stuck on a degenerate plateau
            enter_order = violated
        else:
            enter_order = violated[np.argsort(-np.abs(corr[violated]))][:4]
        advanced = False
        for j_star in enter_order:
            h = solve_triangular(r_factor, q_factor.T @ B[:, j_star])
            if not np.all(np.isfinite(h)):
                continue
            # the move stays feasible only if b_j is reproduced exactly
            if float(np.linalg.norm(bs @ h - B[:, j_star])) > 1e-8 * (1.0 + float(np.linalg.norm(B[:, j_star]))):
                continue
            delta = -float(np.sign(corr[j_star]))
            direction = -delta * h
            shrinking = np.sign(sol) * direction < 0.0
            if not np.any(shrinking):
                continue
            steps = -sol[shrinking] / direction[shrinking]
            t_star = float(np.min(steps))
            leave_local = np.flatnonzero(shrinking)[int(np.argmin(steps))]
            moved = sol + t_star * direction
            new_support = np.append(np.delete(support, leave_local), j_star)
            new_sol = np.append(np.delete(moved, leave_local), delta * t_star)
            order = np.argsort(new_support)
            support, sol = new_support[order], new_sol[order]
            advanced = True
            break
        if not advanced:
            break
        used += 1
        new_objective = float(np.abs(sol).sum())
        stall = stall + 1 if new_objective >= objective - 1e-14 * (1.0 + objective) else 0
        objective = new_objective
        if stall >= 100:
            break
        # re-snap feasibility to guard against drift over many pivots
        if used % 25 == 0:
            resnap, *_ = np.linalg.lstsq(B[:, support], y, rcond=None)
            if np.all(np.isfinite(resnap)):
                sol = resnap
    return support, sol, used


def _dual_certificate(B, bs, y, sol, norm_b: float, refine_steps: int = 60) -> tuple[np.ndarray, float]:
    """Dual vector from the on-support optimality equations, plus its value.

    The on-support equations B_S^T q = -sign(z_S) fix q only up to the null
    space of B_S^T, and the minimum-norm solution often violates the
    off-support constraints |<b_j, q>| <= 1 badly.  A short projected
    gradient descent on the squared violations, restricted to that null
    space (so the on-support equations stay satisfied), recovers a dual
    vector close to the optimal one whenever the vertex is optimal.
    """
    q_cert, *_ = np.linalg.lstsq(bs.T, -np.sign(sol), rcond=None)
    if not np.all(np.isfinite(q_cert)):
        return np.zeros(B.shape[0]), 0.0
    q_basis, _ = np.linalg.qr(bs)
    if norm_b > 0:
        lip = norm_b**2
        for _ in range(refine_steps):
            corr = B.T @ q_cert
            excess = np.abs(corr) - 1.0
            active = excess > 0
            if not np.any(active):
                break
            grad = B[:, active] @ (excess[active] * np.sign(corr[active]))
            grad -= q_basis @ (q_basis.T @ grad)
            q_cert -= grad / lip
    scale = max(1.0, float(np.max(np.abs(B.T @ q_cert), initial=0.0)))
    q_cert = q_cert / scale
    return q_cert, float(-(q_cert @ y))


def _require_in_range(A: np.ndarray, y: np.ndarray, feas_tol: float) -> None:
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    gap = float(np.linalg.norm(A @ sol - y))
    if gap > max(100.0 * feas_tol, 1e-8 * ynorm):
        raise InfeasibleProblem(
            f"eta = 0 but y is outside the range of A (least-squares gap {gap:.3e})"
        )


def solve_lp_oracle(matrix: np.ndarray, y: np.ndarray, weights) -> SolveResult:
    """Exact-to-tolerance solution of the eta = 0 problem via an LP.

    Splits z = p - q with p, q >= 0 and minimizes w.(p + q) under
    A(p - q) = y.  Desk-scale verification tool: refuses N > 200.
    """
    A = np.asarray(matrix, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    m, n = A.shape
    if n > LP_ORACLE_MAX_COLUMNS:
        raise ValueError(f"LP oracle is capped at {LP_ORACLE_MAX_COLUMNS} columns, got {n}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise NonFiniteInput("matrix or data contain non-finite entries")
    w = weight_values(weights, n)
    cost = np.concatenate([w, w])
    a_eq = np.hstack([A, -A])
    res = linprog(cost, A_eq=a_eq, b_eq=y, bounds=(0, None), method="highs")
    if res.status == 2:
        raise InfeasibleProblem("equality system A z = y is infeasible")
    if not res.success:
        raise SolverError(f"LP oracle failed: {res.message}")
    z = res.x[:n] - res.x[n:]
    dual = None
    if res.eqlin is not None and res.eqlin.marginals is not None:
        dual = -np.asarray(res.eqlin.marginals, dtype=float)
    return SolveResult(
        coefficients=z,
        objective=float(np.sum(w * np.abs(z))),
        residual_norm=float(np.linalg.norm(A @ z - y)),
        iterations=int(getattr(res, "nit", 0)),
        converged=True,
        kkt_gap=0.0,
        dual=dual,
    )


def check_interpolation(result: SolveResult, system, f, tol: float) -> bool:
    """True iff the recovered expansion matches f at every sample point.

    Only meaningful for noiseless systems, where minimizers interpolate the
    data exactly; for non-converged results the check simply reports the
    outcome.
    """
    from .basis import tensor_table  # local import to keep module load light

    if system.noise_eta != 0.0:
        raise ValueError("interpolation check requires a noiseless system")
    table = tensor_table(system.spec, system.index_set, system.sample_set.points)
    fitted = table @ result.coefficients
    target = np.asarray(f(system.sample_set.points), dtype=float).reshape(system.m)
    return bool(np.max(np.abs(fitted - target), initial=0.0) <= tol)
