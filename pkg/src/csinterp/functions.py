"""Builtin target functions used by the experiment presets.

The univariate trio stresses different coefficient profiles: an oscillation
whose coefficients plateau then drop sharply, a rational function with slow
geometric decay, and a square root with a branch point just outside the
interval.  The multivariate targets are smooth exponentials/composites whose
coefficients concentrate on lower sets.
"""

from __future__ import annotations

import numpy as np

from .reconstruction import TargetFunction

__all__ = ["builtin_function", "builtin_ids", "BUILTIN_FUNCTIONS"]


def _f_fig1_cc(t):
    return np.cos(36.0 * np.sqrt(2.0) * t[:, 0] + 1.0 / 3.0)


def _f_fig1_lc(t):
    return (1.0 + 3.0 * t[:, 0]) / (1.0 + 50.0 * t[:, 0] ** 2)


def _f_fig1_lu(t):
    return np.sqrt(1.05 + t[:, 0])


def _f_fig2_lu_d2(t):
    return np.exp(2.0 * t[:, 0]) * np.cos(3.0 * t[:, 1])


def _f_fig2_cc_d3(t):
    return np.sin(0.5 * np.exp(t[:, 0] * t[:, 1] * t[:, 2]))


def _f_fig2_lc_d4(t):
    return np.exp(-np.sum(t, axis=1) / 6.0)


def _exp_mean_decay(denominator: float):
    def evaluator(t):
        return np.exp(-np.sum(t, axis=1) / denominator)

    return evaluator


def _zero(t):
    return np.zeros(t.shape[0])


def _make_builtins() -> dict[str, TargetFunction]:
    table: dict[str, TargetFunction] = {}

    def add(fid, evaluator, dimension):
        table[fid] = TargetFunction(id=fid, evaluator=evaluator, dimension=dimension)

    add("fig1_cc", _f_fig1_cc, 1)
    add("fig1_lc", _f_fig1_lc, 1)
    add("fig1_lu", _f_fig1_lu, 1)
    add("fig2_lu_d2", _f_fig2_lu_d2, 2)
    add("fig2_cc_d3", _f_fig2_cc_d3, 3)
    add("fig2_lc_d4", _f_fig2_lc_d4, 4)
    for d in (3, 5, 10):
        add(f"fig3_cc_d{d}", _exp_mean_decay(2.0 * d), d)
        add(f"fig4_lu_d{d}", _exp_mean_decay(float(d)), d)
    for d in (1, 2, 3, 4):
        add(f"zero_d{d}", _zero, d)
    return table


BUILTIN_FUNCTIONS = _make_builtins()


def builtin_ids() -> list[str]:
    return sorted(BUILTIN_FUNCTIONS)


def builtin_function(fid: str) -> TargetFunction:
    """Look up a builtin target; unknown ids list what is available."""
    try:
        return BUILTIN_FUNCTIONS[fid]
    except KeyError:
        raise KeyError(f"unknown function id {fid!r}; available: {', '.join(builtin_ids())}") from None
