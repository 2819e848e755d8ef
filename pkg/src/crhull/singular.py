"""CR-singular locus detection and Bishop-invariant classification.

On a slice at fixed t, a point carries a complex tangent exactly where the
wbar-derivative of the height function vanishes:

    d(phi_t)/dwbar = w + 2 gamma wbar + F_wbar(t, w, wbar) = 0.

The locus is traced by Newton continuation in t, and the singular point is
classified through the ratio of second-order Taylor coefficients,
gamma_t = |beta_{0,2} / beta_{1,1}|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bipoly import BiPoly
from .errors import SingularJacobianError
from .manifold import ManifoldSpec
from .numerics import TaylorJet

#: Half-width of the band around gamma = 1/2 labelled parabolic.
PARABOLIC_BAND = 1e-9

#: Relative threshold under which beta_{1,1} counts as degenerate.
DEGENERACY_THRESHOLD = 1e-12

#: Newton convergence: |b| <= NEWTON_TOL * (1 + |eta| + ||t||).
NEWTON_TOL = 1e-12

NEWTON_MAX_ITER = 50


@dataclass(frozen=True)
class SingularLocus:
    """Traced complex-tangent locus over a t-grid."""

    t_grid: tuple[tuple[float, ...], ...]
    eta: tuple[complex, ...]
    converged: tuple[bool, ...]
    max_residual: float


@dataclass(frozen=True)
class Classification:
    """Type of a CR-singular point.

    ``kind`` is one of elliptic / parabolic / hyperbolic / degenerate;
    ``gamma_t`` is the Bishop invariant (math.inf when beta_{1,1} ~ 0 with
    beta_{0,2} != 0).  Degenerate points are refused by every certificate.
    """

    kind: str
    gamma_t: float
    beta11: complex
    beta02: complex


# ---------------------------------------------------------------------- #


def b_slice(spec: ManifoldSpec, t: Sequence[float], w):
    """Tangency residual d(phi_t)/dwbar at (t, w), exact for polynomial data.

    Zero exactly at the points of the slice carrying a complex tangent.
    """
    return _phi_wbar(spec).eval(t, w)


def _phi_wbar(spec: ManifoldSpec) -> BiPoly:
    return spec.phi().wirtinger("wbar")


def locate_eta(
    spec: ManifoldSpec,
    t: Sequence[float],
    seed: complex = 0.0,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> tuple[complex, bool, float]:
    """Newton-solve the tangency equation for the slice at t.

    Solves b(w) = w + 2 gamma wbar + F_wbar = 0 as a real 2x2 system in
    (u, v), starting from ``seed``.  Returns (eta, converged, residual)
    with residual = |b(eta)|; convergence means
    residual <= tol * (1 + |eta| + ||t||).

    Raises
    ------
    SingularJacobianError
        If the Jacobian determinant falls below 1e-10 at an iterate that
        has not yet converged (for the unperturbed form the determinant is
        proportional to (2 gamma)^2 - 1, so gamma = 1/2 is the degenerate
        case).
    """
    t = tuple(float(x) for x in t)
    b = _phi_wbar(spec)
    bw = b.wirtinger("w")
    bwb = b.wirtinger("wbar")
    scale = 1.0 + float(np.linalg.norm(t))
    w = complex(seed)
    val = complex(b.eval(t, w))
    for _ in range(max_iter):
        if abs(val) <= tol * (scale + abs(w)):
            return w, True, abs(val)
        dw = complex(bw.eval(t, w))
        dwb = complex(bwb.eval(t, w))
        # real Jacobian of (Re b, Im b) in (u, v)
        bu = dw + dwb
        bv = 1j * (dw - dwb)
        det = bu.real * bv.imag - bv.real * bu.imag
        if abs(det) < 1e-10:
            raise SingularJacobianError(
                f"Jacobian determinant {det:.3e} below 1e-10 at w={w}"
            )
        du = (val.real * bv.imag - bv.real * val.imag) / det
        dv = (bu.real * val.imag - val.real * bu.imag) / det
        w = complex(w.real - du, w.imag - dv)
        val = complex(b.eval(t, w))
    return w, abs(val) <= tol * (scale + abs(w)), abs(val)


def trace_locus(
    spec: ManifoldSpec,
    t_grid: Sequence[Sequence[float]],
    tol: float = NEWTON_TOL,
) -> SingularLocus:
    """Trace the singular locus over a t-grid by warm-started continuation.

    Grid points are processed in lexicographic order; each is seeded from
    the nearest previously converged point (the first from 0).  Failures
    are recorded per point and never abort the sweep.
    """
    pts = [tuple(float(x) for x in t) for t in t_grid]
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    eta = [0.0 + 0.0j] * len(pts)
    conv = [False] * len(pts)
    max_res = 0.0
    solved: list[int] = []
    for i in order:
        seed = 0.0 + 0.0j
        if solved:
            j = min(
                solved,
                key=lambda k: sum((a - b) ** 2 for a, b in zip(pts[k], pts[i])),
            )
            seed = eta[j]
        try:
            e, ok, res = locate_eta(spec, pts[i], seed=seed, tol=tol)
        except SingularJacobianError:
            e, ok, res = seed, False, float("inf")
        eta[i], conv[i] = e, ok
        if np.isfinite(res):
            max_res = max(max_res, res)
        else:
            max_res = float("inf")
        if ok:
            solved.append(i)
    return SingularLocus(
        t_grid=tuple(pts), eta=tuple(eta), converged=tuple(conv), max_residual=max_res
    )


def classify_point(jet: TaylorJet) -> Classification:
    """Classify a singular point from its order-2 jet.

    gamma_t = |beta_{0,2} / beta_{1,1}|; elliptic below 1/2, hyperbolic
    above, parabolic within ``PARABOLIC_BAND`` of 1/2, degenerate when
    |beta_{1,1}| <= 1e-12 * jet scale (no convexity claim is made there).
    """
    b11 = jet.b(1, 1)
    b02 = jet.b(0, 2)
    scale = jet.scale()
    if abs(b11) <= DEGENERACY_THRESHOLD * scale or scale == 0.0:
        gamma_t = float("inf") if abs(b02) > 0 else 0.0
        return Classification(kind="degenerate", gamma_t=gamma_t, beta11=b11, beta02=b02)
    # identical expression to the reduction pipeline, so the two agree bitwise
    gamma_t = abs(b02 / b11)
    if abs(gamma_t - 0.5) <= PARABOLIC_BAND:
        kind = "parabolic"
    elif gamma_t < 0.5:
        kind = "elliptic"
    else:
        kind = "hyperbolic"
    return Classification(kind=kind, gamma_t=gamma_t, beta11=b11, beta02=b02)
