r"""Random sampling, the scaled measurement matrix, and noisy data vectors.

Sample points are drawn i.i.d. from the spec's sampling measure mu.  The
normalized measurement matrix has entries

    A[i, j] = phi_j(t_i) * sqrt(nu(t_i) / mu(t_i)) / sqrt(m),

whose columns have unit expected squared norm, and data vectors are

    y_i = sqrt(nu(t_i) / mu(t_i)) * f(t_i) / sqrt(m) + e_i,

with the noise vector e scaled so that ||e|| <= eta / sqrt(m) holds exactly.
All randomness flows through seeded Philox generators (counter-based, so the
same seed and draw order give the same stream everywhere); the generator
name is recorded in exported metadata.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal

import numpy as np

from .basis import BasisSpec, measure_density_ratio, tensor_table
from .indexsets import IndexSet
from .seeding import GENERATOR_NAME

NoiseMode = Literal["sphere", "gaussian_ball"]


@dataclass(frozen=True)
class SampleSet:
    """m points drawn i.i.d. from the sampling measure of ``spec``."""

    spec: BasisSpec
    points: np.ndarray
    rng_seed: int
    generator: str = GENERATOR_NAME

    @property
    def m(self) -> int:
        return self.points.shape[0]


def draw_samples(spec: BasisSpec, m: int, rng_seed: int) -> SampleSet:
    """Draw m i.i.d. points from the sampling measure.

    Uniform sampling draws each coordinate uniformly on (-1, 1); Chebyshev
    sampling maps u ~ Uniform(0, 1) through t = cos(pi u) per coordinate.
    The (measure-zero) boundary values that the generators can emit are
    redrawn so every point is strictly interior.
    """
    if m < 1:
        raise ValueError("need at least one sample")
    rng = np.random.Generator(np.random.Philox(rng_seed))
    pts = _draw_block(rng, spec.sampling, (m, spec.dimension))
    bad = ~(np.abs(pts) < 1.0)
    while np.any(bad):
        pts[bad] = _draw_block(rng, spec.sampling, (int(bad.sum()),))
        bad = ~(np.abs(pts) < 1.0)
    return SampleSet(spec=spec, points=pts, rng_seed=rng_seed)


def _draw_block(rng: np.random.Generator, sampling: str, shape) -> np.ndarray:
    if sampling == "uniform":
        return rng.uniform(-1.0, 1.0, size=shape)
    return np.cos(math.pi * rng.random(size=shape))


def assemble_matrix(spec: BasisSpec, samples: SampleSet, index_set: IndexSet) -> np.ndarray:
    """Normalized m x N measurement matrix, columns in canonical set order."""
    if samples.spec != spec:
        raise ValueError("sample set was drawn under a different basis spec")
    if index_set.dimension != spec.dimension:
        raise ValueError("index set dimension does not match the basis spec")
    ratio = measure_density_ratio(spec, samples.points)
    table = tensor_table(spec, index_set, samples.points)
    return table * (ratio / math.sqrt(samples.m))[:, None]


def measure_function(
    f: Callable[[np.ndarray], np.ndarray],
    samples: SampleSet,
    noise_eta: float = 0.0,
    rng_seed: int = 0,
    noise_mode: NoiseMode = "sphere",
) -> np.ndarray:
    """Normalized data vector y = ratio * f(t) / sqrt(m) + e.

    With ``noise_eta`` = 0 the noise is identically zero.  Otherwise the
    default draws a direction uniformly on the sphere and scales it so
    ||e|| = noise_eta / sqrt(m) exactly (the feasibility constraint is tight,
    the worst case for the error bound).  ``gaussian_ball`` instead draws a
    Gaussian vector with matching expected norm and projects it onto the
    ball of that radius.
    """
    if noise_eta < 0:
        raise ValueError("noise_eta must be nonnegative")
    values = np.asarray(f(samples.points), dtype=float).reshape(samples.m)
    if not np.all(np.isfinite(values)):
        raise ValueError("target function returned non-finite values at sample points")
    ratio = measure_density_ratio(samples.spec, samples.points)
    y = ratio * values / math.sqrt(samples.m)
    if noise_eta == 0.0:
        return y
    radius = noise_eta / math.sqrt(samples.m)
    rng = np.random.Generator(np.random.Philox(rng_seed))
    g = rng.standard_normal(samples.m)
    norm = float(np.linalg.norm(g))
    if norm == 0.0:
        return y
    if noise_mode == "sphere":
        e = g * (radius / norm)
    elif noise_mode == "gaussian_ball":
        e = g * (radius / math.sqrt(samples.m))
        overshoot = float(np.linalg.norm(e))
        if overshoot > radius:
            e *= radius / overshoot
    else:
        raise ValueError(f"unknown noise mode {noise_mode!r}")
    return y + e


@dataclass(frozen=True)
class MeasurementSystem:
    """Assembled sampling matrix plus data for one reconstruction instance."""

    matrix: np.ndarray
    data: np.ndarray
    noise_eta: float
    sample_set: SampleSet
    index_set: IndexSet
    noise_seed: int = 0
    noise_mode: NoiseMode = "sphere"

    def __post_init__(self):
        m, n = self.matrix.shape
        if n != len(self.index_set):
            raise ValueError("matrix column count does not match the index set")
        if self.data.shape != (m,):
            raise ValueError("data vector length does not match the matrix")

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def spec(self) -> BasisSpec:
        return self.sample_set.spec

    @property
    def eta_normalized(self) -> float:
        """Constraint radius eta / sqrt(m) for the normalized problem."""
        return self.noise_eta / math.sqrt(self.m)


def build_system(
    spec: BasisSpec,
    index_set: IndexSet,
    f: Callable[[np.ndarray], np.ndarray],
    m: int,
    noise_eta: float,
    sample_seed: int,
    noise_seed: int = 0,
    noise_mode: NoiseMode = "sphere",
) -> MeasurementSystem:
    """Draw samples, assemble the matrix and measure f in one step."""
    samples = draw_samples(spec, m, sample_seed)
    matrix = assemble_matrix(spec, samples, index_set)
    y = measure_function(f, samples, noise_eta, noise_seed, noise_mode)
    return MeasurementSystem(
        matrix=matrix,
        data=y,
        noise_eta=noise_eta,
        sample_set=samples,
        index_set=index_set,
        noise_seed=noise_seed,
        noise_mode=noise_mode,
    )


def export_system(system: MeasurementSystem, directory) -> None:
    """Write a portable dump: JSON header plus CSV matrix/vector payloads."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    spec = system.spec
    header = {
        "scenario": spec.scenario,
        "family": spec.family,
        "sampling": spec.sampling,
        "dimension": spec.dimension,
        "m": system.m,
        "n": system.n,
        "noise_eta": system.noise_eta,
        "noise_mode": system.noise_mode,
        "sample_seed": system.sample_set.rng_seed,
        "noise_seed": system.noise_seed,
        "generator": system.sample_set.generator,
    }
    (out / "header.json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    (out / "index_set.txt").write_text(system.index_set.to_text())
    _write_csv(out / "matrix.csv", system.matrix)
    _write_csv(out / "points.csv", system.sample_set.points)
    _write_csv(out / "data.csv", system.data[:, None])


def _write_csv(path: Path, array: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.atleast_2d(array):
            writer.writerow([repr(float(v)) for v in row])
