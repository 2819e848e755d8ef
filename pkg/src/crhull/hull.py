"""Independent polynomial-hull probe by min-max separation.

Samples a manifold patch into a point cloud, then asks: can a holomorphic
polynomial of bounded degree, normalized to 1 at a query point, be made
small on the whole cloud?  A ratio below 1 is a self-contained separation
witness (re-checkable in plain arithmetic); a ratio pinned at 1 is
evidence that the query sits in the degree-bounded hull of the samples.
The solver is Lawson-style iteratively reweighted least squares on a
column-scaled monomial basis, so results never depend on an external
optimizer.

Probe output is evidence about the sampled set only; convexity
certificates come from :mod:`crhull.certify`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import IllConditionedBasisError
from .manifold import ManifoldSpec, embed_grid
from .numerics import DiskGrid

MAX_DEGREE = 10
MAX_CLOUD = 100_000

IRLS_MAX_ITER = 300
IRLS_REL_TOL = 1e-9


@dataclass(frozen=True)
class SampleCloud:
    """Finite sample of a manifold patch in C^n."""

    points: np.ndarray  # (m, n) complex
    source: dict = field(default_factory=dict)
    density: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class SeparationResult:
    """Outcome of one min-max separation solve.

    ``ratio`` is the max of |P| over the cloud for the returned polynomial
    with P(q) = 1, re-evaluated from the returned coefficients (not the
    solver's internal value).  ratio < 1 witnesses that q is outside the
    degree-bounded hull of the samples.
    """

    ratio: float
    degree: int
    coefficients: np.ndarray
    exponents: tuple[tuple[int, ...], ...]
    iterations: int
    converged: bool


def sample_manifold(
    spec: ManifoldSpec, t_counts: Sequence[int], disk_grid: DiskGrid
) -> SampleCloud:
    """Sample embed(spec, t, w) over a product grid.

    ``t_counts`` gives the number of uniform samples per t-axis on
    [-T, T]; ``disk_grid`` supplies the w samples.  The cloud size is the
    product of all counts.
    """
    t_counts = tuple(int(c) for c in t_counts)
    if len(t_counts) != spec.n - 2:
        raise ValueError(f"expected {spec.n - 2} t-counts")
    axes = [np.linspace(-spec.domain.T, spec.domain.T, c) for c in t_counts]
    blocks = []
    for tvec in itertools.product(*axes) if axes else [()]:
        blocks.append(embed_grid(spec, tvec, disk_grid.points))
    points = np.concatenate(blocks, axis=0)
    if points.shape[0] > MAX_CLOUD:
        raise ValueError(f"cloud size {points.shape[0]} exceeds {MAX_CLOUD}")
    return SampleCloud(
        points=points,
        source=spec.fingerprint_data(),
        density={"t_counts": list(t_counts), "disk": disk_grid.metadata()},
    )


def _monomial_exponents(n: int, degree: int) -> list[tuple[int, ...]]:
    """All exponents of total degree <= degree over n variables, graded-lex order."""
    out = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    seen = sorted(set(out), key=lambda e: (sum(e), e))
    return seen


def _monomial_matrix(points: np.ndarray, exps: list[tuple[int, ...]]) -> np.ndarray:
    m, n = points.shape
    cols = []
    for e in exps:
        col = np.ones(m, dtype=complex)
        for var, power in enumerate(e):
            if power:
                col = col * points[:, var] ** power
        cols.append(col)
    return np.stack(cols, axis=1)


def separate(cloud: SampleCloud, q: Sequence[complex], degree: int) -> SeparationResult:
    """Approximate min over {deg <= degree, P(q) = 1} of max_cloud |P|.

    Lawson iteration: solve the weighted least-squares problem
    min sum w_k |P(z_k)|^2 subject to P(q) = 1, then reweight by the
    residual moduli; the weighted solutions converge toward the Chebyshev
    (min-max) solution.  Columns are scaled to unit max-modulus on the
    cloud before solving.

    Raises
    ------
    IllConditionedBasisError
        If the scaled normal system is numerically singular and no usable
        solution exists.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree > MAX_DEGREE:
        raise ValueError(f"degree capped at {MAX_DEGREE}")
    q = np.asarray(q, dtype=complex).ravel()
    if q.size != cloud.dim or not np.all(np.isfinite(q)):
        raise ValueError("query point must be finite and match the cloud dimension")
    exps = _monomial_exponents(cloud.dim, degree)
    A = _monomial_matrix(cloud.points, exps)
    b = _monomial_matrix(q[None, :], exps)[0]
    scale = np.max(np.abs(A), axis=0)
    scale[scale == 0] = 1.0
    A = A / scale
    b = b / scale

    m, d = A.shape
    weights = np.full(m, 1.0 / m)
    best_coeffs = None
    best_max = math.inf
    last_max = math.inf
    iterations = 0
    converged = False
    for iterations in range(1, IRLS_MAX_ITER + 1):
        G = (A.conj().T * weights) @ A
        try:
            gb = np.linalg.solve(G, b.conj())
        except np.linalg.LinAlgError:
            G = G + (1e-14 * np.trace(G).real / max(d, 1)) * np.eye(d)
            try:
                gb = np.linalg.solve(G, b.conj())
            except np.linalg.LinAlgError as exc:
                raise IllConditionedBasisError(str(exc)) from exc
        denom = b @ gb
        if not np.isfinite(denom) or abs(denom) < 1e-300:
            raise IllConditionedBasisError("constraint row annihilated by the normal system")
        coeffs = gb / denom
        resid = np.abs(A @ coeffs)
        cur_max = float(np.max(resid))
        if not math.isfinite(cur_max):
            raise IllConditionedBasisError("non-finite residuals in IRLS sweep")
        # Lawson iterates are not monotone; keep the incumbent best.
        if cur_max < best_max:
            best_max = cur_max
            best_coeffs = coeffs
        if abs(cur_max - last_max) <= IRLS_REL_TOL * max(cur_max, 1e-300):
            converged = True
            break
        last_max = cur_max
        weights = weights * resid
        total = float(np.sum(weights))
        if total <= 0 or not math.isfinite(total):
            break
        weights = weights / total

    # Rescale to the raw monomial basis and renormalize exactly at q.
    coeffs = best_coeffs / scale
    raw_b = _monomial_matrix(q[None, :], exps)[0]
    coeffs = coeffs / (raw_b @ coeffs)
    values = np.abs(_monomial_matrix(cloud.points, exps) @ coeffs)
    ratio = float(np.max(values))
    return SeparationResult(
        ratio=ratio,
        degree=degree,
        coefficients=coeffs,
        exponents=tuple(exps),
        iterations=iterations,
        converged=converged,
    )


def evaluate_witness(result: SeparationResult, points: np.ndarray) -> np.ndarray:
    """|P| at arbitrary points for a returned separation polynomial."""
    A = _monomial_matrix(np.atleast_2d(np.asarray(points, dtype=complex)), list(result.exponents))
    return np.abs(A @ result.coefficients)


def hull_scan(
    cloud: SampleCloud, query_points: Sequence[Sequence[complex]], degree: int
) -> list[SeparationResult | None]:
    """Element-wise :func:`separate` over queries, in the given order.

    Ill-conditioned solves are recorded as None instead of aborting the
    sweep.
    """
    out: list[SeparationResult | None] = []
    for q in query_points:
        try:
            out.append(separate(cloud, q, degree))
        except IllConditionedBasisError:
            out.append(None)
    return out
