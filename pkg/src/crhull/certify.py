"""Certificate engines for polynomial convexity near hyperbolic points.

Three layers of machinery:

* branch solvers for the two preimage sheets of the slice under the proper
  quadratic map (z1, z2) -> (z1, z1 z2 + gamma (z1^2 + z2^2)), with
  residual, Lipschitz and separation checks (the n = 2 engine);
* the union-of-sheets separation check in C^3 for perturbations vanishing
  to order two in w (the n = 3 engine);
* the quantitative radius certificate  ||F||_C2 <= (2g-1)^3 / (2^14 g^3)
  and the flat induction driver that applies it slice by slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bipoly import BiPoly
from .errors import (
    BranchDomainError,
    NonHyperbolicError,
    OrderViolationError,
)
from .manifold import ManifoldSpec, order_two_in_w
from .normalform import jet_at, normal_form_threshold, reduce
from .numerics import DiskGrid, c2_norm_upper, sqrt1p_deviation
from .singular import classify_point, locate_eta


def lipschitz_alpha(gamma: float) -> float:
    """Lipschitz constant (2g - 1) / (32 g^2) of the branch perturbations."""
    _require_hyperbolic(gamma)
    return (2.0 * gamma - 1.0) / (32.0 * gamma**2)


def branch_derivative_bound(gamma: float) -> float:
    """Certified bound (2g - 1) / (2^9 g^2) on |f_z| and |f_zbar|."""
    _require_hyperbolic(gamma)
    return (2.0 * gamma - 1.0) / (2.0**9 * gamma**2)


def _require_hyperbolic(gamma: float) -> None:
    if gamma <= 0.5:
        raise NonHyperbolicError(f"gamma = {gamma} is not hyperbolic (need > 1/2)")


# ---------------------------------------------------------------------- #
# branch solutions on the 2-D slice


@dataclass(frozen=True)
class BranchSolution:
    """One sheet of the preimage over a slice point.

    ``value`` is the perturbation (f on S1, g on S2) and ``linear_part``
    the full second coordinate of the sheet point: zetabar + f on S1,
    -zeta/gamma - zetabar + g on S2.  Scalars or ndarrays, matching the
    query ``zeta``.
    """

    which: str
    value: object
    linear_part: object


def _branch_sqrt_argument(gamma: float, F: BiPoly, t: Sequence[float], zeta):
    """(B, z) with B = zeta + 2 gamma zetabar and z = 4 gamma F / B^2; z = 0 at zeta = 0."""
    zeta = np.asarray(zeta, dtype=complex)
    B = zeta + 2.0 * gamma * np.conjugate(zeta)
    Fv = np.asarray(F.eval(t, zeta), dtype=complex)
    z = np.zeros_like(B)
    nz = zeta != 0
    z[nz] = 4.0 * gamma * Fv[nz] / B[nz] ** 2
    if np.any(np.abs(z) > 0.25):
        raise BranchDomainError(
            "4 gamma F / (zeta + 2 gamma zetabar)^2 left the quarter disk; "
            "the point lies outside a certified region"
        )
    return B, z


def solve_branch_f(gamma: float, F: BiPoly, t: Sequence[float], zeta) -> BranchSolution:
    """Solve gamma f^2 + (zeta + 2 gamma zetabar) f - F = 0 for the df(0) = 0 root.

    The root is evaluated in the cancellation-free form
    f = -(B / 2 gamma) * (1 - sqrt(1 + 4 gamma F / B^2)), which forces
    f(0) = 0 by continuity.  Requires gamma > 1/2 and the square-root
    argument inside the quarter disk (guaranteed on a certified radius,
    still checked at runtime).
    """
    _require_hyperbolic(gamma)
    arr = np.asarray(zeta, dtype=complex)
    B, z = _branch_sqrt_argument(gamma, F, t, arr)
    f = -(B / (2.0 * gamma)) * sqrt1p_deviation(z)
    lp = np.conjugate(arr) + f
    if arr.ndim == 0:
        return BranchSolution(which="S1", value=complex(f), linear_part=complex(lp))
    return BranchSolution(which="S1", value=f, linear_part=lp)


def solve_branch_g(gamma: float, F: BiPoly, t: Sequence[float], zeta) -> BranchSolution:
    """Solve gamma g^2 - (zeta + 2 gamma zetabar) g - F = 0 for the dg(0) = 0 root."""
    _require_hyperbolic(gamma)
    arr = np.asarray(zeta, dtype=complex)
    B, z = _branch_sqrt_argument(gamma, F, t, arr)
    g = (B / (2.0 * gamma)) * sqrt1p_deviation(z)
    lp = -arr / gamma - np.conjugate(arr) + g
    if arr.ndim == 0:
        return BranchSolution(which="S2", value=complex(g), linear_part=complex(lp))
    return BranchSolution(which="S2", value=g, linear_part=lp)


def branch_residual(gamma: float, F: BiPoly, t: Sequence[float], zeta, branch: BranchSolution):
    """|gamma v^2 +- B v - F| at the branch value (sign + for S1, - for S2)."""
    zeta = np.asarray(zeta, dtype=complex)
    B = zeta + 2.0 * gamma * np.conjugate(zeta)
    Fv = F.eval(t, zeta)
    v = np.asarray(branch.value, dtype=complex)
    sign = 1.0 if branch.which in ("S1", "V1") else -1.0
    res = np.abs(gamma * v**2 + sign * B * v - Fv)
    return float(res) if res.ndim == 0 else res


def forward_check(gamma: float, F: BiPoly, branch: BranchSolution, zeta):
    """Push the sheet point through the proper map and compare with the slice.

    Returns |second coordinate of P(zeta, linear_part) - phi(zeta)| where
    P(z1, z2) = (z1, z1 z2 + gamma (z1^2 + z2^2)) and
    phi = zeta zetabar + gamma (zeta^2 + zetabar^2) + F.
    """
    zeta = np.asarray(zeta, dtype=complex)
    lp = np.asarray(branch.linear_part, dtype=complex)
    zb = np.conjugate(zeta)
    image = zeta * lp + gamma * (zeta**2 + lp**2)
    phi = zeta * zb + gamma * (zeta**2 + zb**2) + F.eval((), zeta)
    err = np.abs(image - phi)
    return float(err) if err.ndim == 0 else err


def lipschitz_audit(
    gamma: float,
    F: BiPoly,
    r: float,
    pair_count: int = 10_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Sample pairwise Lipschitz ratios of both branches on the disk of radius r.

    Returns (max_ratio, alpha) with alpha = (2g-1)/(32 g^2); the contract
    on a certified radius is max_ratio <= alpha.
    """
    alpha = lipschitz_alpha(gamma)
    rng = np.random.default_rng(seed)
    pts = _uniform_disk(rng, 2 * pair_count, r)
    z1, z2 = pts[:pair_count], pts[pair_count:]
    keep = np.abs(z1 - z2) > 1e-12 * r
    z1, z2 = z1[keep], z2[keep]
    max_ratio = 0.0
    for solver in (solve_branch_f, solve_branch_g):
        v1 = np.asarray(solver(gamma, F, (), z1).value)
        v2 = np.asarray(solver(gamma, F, (), z2).value)
        ratios = np.abs(v1 - v2) / np.abs(z1 - z2)
        max_ratio = max(max_ratio, float(np.max(ratios)))
    return max_ratio, alpha


def _uniform_disk(rng, count: int, r: float) -> np.ndarray:
    rho = r * np.sqrt(rng.random(count))
    ang = 2.0 * np.pi * rng.random(count)
    return rho * np.exp(1j * ang)


# ---------------------------------------------------------------------- #
# Kallin separation reports


@dataclass(frozen=True)
class KallinReport:
    """Margins of the half-plane separation of the two sheets.

    For the n = 2 check the margins are normalized by |zeta|^2:
    ``side1_min_margin`` = min Re psi(S1)/|zeta|^2 - (3/8) alpha and
    ``side2_min_margin`` = min of -Re psi(S2)/|zeta|^2 - 3 alpha, both
    expected nonnegative on a certified radius.  For the n = 3 check the
    margins are min Re Q(V1) and min of -Re Q(V2) over the off-axis grid
    (``alpha`` then stores the chosen epsilon).  ``zero_fiber_ok`` records
    that the separating polynomial vanishes on the sheets only over the
    distinguished axis.
    """

    side1_min_margin: float
    side2_min_margin: float
    zero_fiber_ok: bool
    alpha: float
    grid: dict = field(default_factory=dict)


def separation_poly_m2(gamma: float, z1, z2):
    """psi(z1, z2) = (z1^2 - z2^2)/4 + 2 alpha z1 z2 for the slice sheets."""
    alpha = lipschitz_alpha(gamma)
    return 0.25 * (np.asarray(z1) ** 2 - np.asarray(z2) ** 2) + 2.0 * alpha * np.asarray(
        z1
    ) * np.asarray(z2)


def kallin_check_m2(gamma: float, F: BiPoly, r: float, grid: DiskGrid) -> KallinReport:
    """Evaluate the separating polynomial along both sheets over a disk grid.

    Excludes zeta = 0 (the inequalities are homogeneous of degree two and
    vacuous there); margins are reported per |zeta|^2.
    """
    alpha = lipschitz_alpha(gamma)
    pts = grid.points * (r / grid.radius) if grid.radius != r else grid.points
    zeta = pts[np.abs(pts) > 0]
    s1 = solve_branch_f(gamma, F, (), zeta)
    s2 = solve_branch_g(gamma, F, (), zeta)
    psi1 = separation_poly_m2(gamma, zeta, np.asarray(s1.linear_part))
    psi2 = separation_poly_m2(gamma, zeta, np.asarray(s2.linear_part))
    norm2 = np.abs(zeta) ** 2
    side1 = float(np.min(psi1.real / norm2)) - 0.375 * alpha
    side2 = float(np.min(-psi2.real / norm2)) - 3.0 * alpha
    zero_fiber_ok = bool(
        np.all(np.abs(psi1) > 1e-14 * norm2) and np.all(np.abs(psi2) > 1e-14 * norm2)
    )
    return KallinReport(
        side1_min_margin=side1,
        side2_min_margin=side2,
        zero_fiber_ok=zero_fiber_ok,
        alpha=alpha,
        grid=grid.metadata() | {"evaluation_radius": r},
    )


def choose_epsilon(gamma: float) -> float:
    """Deterministic epsilon for the C^3 separating polynomial.

    Needs eps(-1 + 1/g) - 1/(2g) + 1/(4g^2) < 0.  For g >= 1 the epsilon
    term is nonpositive and eps = 1/4 is returned; below 1 the supremum is
    (2g - 1) / (4g(1 - g)) and half of it is returned.  The strict
    inequality is asserted on every call.
    """
    _require_hyperbolic(gamma)
    if gamma >= 1.0:
        eps = 0.25
    else:
        eps = 0.5 * (2.0 * gamma - 1.0) / (4.0 * gamma * (1.0 - gamma))
    value = eps * (-1.0 + 1.0 / gamma) - 1.0 / (2.0 * gamma) + 1.0 / (4.0 * gamma**2)
    assert value < 0.0, f"epsilon rule violated its defining inequality: {value}"
    return eps


def separation_poly_m3(eps: float, z1, z2):
    """Q(z0, z1, z2) = eps (z1^2 + z2^2) + i z1 z2 (independent of z0)."""
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    return eps * (z1**2 + z2**2) + 1j * z1 * z2


def _m3_branch_value(gamma: float, F: BiPoly, t: Sequence[float], w):
    """f = sqrt((2 gamma wbar + w)^2 + 4 gamma F) - (2 gamma wbar + w), df(0) = 0 branch."""
    w = np.asarray(w, dtype=complex)
    B = w + 2.0 * gamma * np.conjugate(w)
    Fv = np.asarray(F.eval(t, w), dtype=complex)
    z = np.zeros_like(B)
    nz = w != 0
    z[nz] = 4.0 * gamma * Fv[nz] / B[nz] ** 2
    if np.any(np.abs(z) > 0.25):
        raise BranchDomainError(
            "discriminant ratio left the quarter disk; shrink the (T, r) grid"
        )
    return -B * sqrt1p_deviation(z)


def m3_sheets(spec: ManifoldSpec, t: float, u: np.ndarray, v: np.ndarray):
    """The two preimage sheets over the slice at t, as (V1, V2) arrays of C^3 points.

    V1 = (t + i h, u + f/(4g), v + i f/(4g));
    V2 = (t + i h, (-u + (2g-1) i v)/(2g) - f/(4g),
          (-(2g+1) i u + v)/(2g) - i f/(4g));
    both recover zeta_1 + i zeta_2 = w = u + iv exactly.
    """
    gamma = spec.gamma
    w = u + 1j * v
    f = _m3_branch_value(gamma, spec.F, (t,), w)
    h = np.real(spec.f[0].eval((t,), w))
    z0 = t + 1j * h
    v1 = np.stack([np.broadcast_to(z0, w.shape), u + f / (4 * gamma), v + 1j * f / (4 * gamma)], axis=-1)
    z1b = (-u + (2 * gamma - 1) * 1j * v) / (2 * gamma) - f / (4 * gamma)
    z2b = (-(2 * gamma + 1) * 1j * u + v) / (2 * gamma) - 1j * f / (4 * gamma)
    v2 = np.stack([np.broadcast_to(z0, w.shape), z1b, z2b], axis=-1)
    return v1, v2


def kallin_check_m3(
    spec: ManifoldSpec,
    r: float,
    grid_shape: tuple[int, int, int] = (9, 32, 32),
    T: float | None = None,
) -> KallinReport:
    """Sign contracts of Q on the two sheets for an n = 3 spec.

    Requires gamma > 1/2 and F vanishing to order two in w.  Evaluates Q
    with eps = choose_epsilon(gamma) on the sheets over the lattice
    t x u x v in [-T, T] x [-r, r]^2 and reports
    ``side1_min_margin`` = min Re Q(V1) and
    ``side2_min_margin`` = min -Re Q(V2) over points with u^2 + v^2 > 0.
    ``zero_fiber_ok`` holds when Re Q stays away from zero relative to
    u^2 + v^2 off the axis and Q collapses to 0 on it.
    """
    if spec.n != 3:
        raise ValueError("the union-of-sheets check is implemented for n = 3")
    _require_hyperbolic(spec.gamma)
    if not order_two_in_w(spec.F):
        raise OrderViolationError("F must vanish to order two in w for the n = 3 check")
    if T is None:
        T = spec.domain.T
    nt, nu, nv = grid_shape
    eps = choose_epsilon(spec.gamma)
    ts = np.linspace(-T, T, nt)
    us = np.linspace(-r, r, nu)
    vs = np.linspace(-r, r, nv)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    uu = uu.ravel()
    vv = vv.ravel()
    off_axis = uu**2 + vv**2 > 0
    side1 = math.inf
    side2 = math.inf
    fiber_ok = True
    for t in ts:
        v1, v2 = m3_sheets(spec, float(t), uu, vv)
        q1 = separation_poly_m3(eps, v1[:, 1], v1[:, 2])
        q2 = separation_poly_m3(eps, v2[:, 1], v2[:, 2])
        side1 = min(side1, float(np.min(q1.real[off_axis])))
        side2 = min(side2, float(np.min(-q2.real[off_axis])))
        norm2 = uu[off_axis] ** 2 + vv[off_axis] ** 2
        fiber_ok = fiber_ok and bool(
            np.all(q1.real[off_axis] > 1e-12 * norm2)
            and np.all(q2.real[off_axis] < -1e-12 * norm2)
        )
        on_axis = ~off_axis
        if np.any(on_axis):
            fiber_ok = fiber_ok and bool(
                np.all(np.abs(q1[on_axis]) <= 1e-14 * (1.0 + t * t))
                and np.all(np.abs(q2[on_axis]) <= 1e-14 * (1.0 + t * t))
            )
    return KallinReport(
        side1_min_margin=side1,
        side2_min_margin=side2,
        zero_fiber_ok=fiber_ok,
        alpha=eps,
        grid={"t_count": nt, "u_count": nu, "v_count": nv, "T": T, "r": r},
    )


# ---------------------------------------------------------------------- #
# radius certificates


@dataclass(frozen=True)
class CertifiedRadius:
    """Result of the quantitative radius search.

    ``certified`` implies ``c2_at_r <= threshold`` where ``c2_at_r`` is the
    coefficient upper bound of F at radius r (never the grid estimate).
    """

    r: float
    threshold: float
    c2_at_r: float
    bisection_steps: int
    certified: bool


def certify_radius(gamma: float, F: BiPoly, R: float, steps: int = 64) -> CertifiedRadius:
    """Largest certified radius r in (0, R] with ||F||_C2(B_r) <= (2g-1)^3/(2^14 g^3).

    The certified C^2 bound is monotone in r, so bisection applies; the
    returned r is the largest bisection point whose bound passes.  F = 0
    certifies r = R directly (the neighbourhood can be arbitrarily large).
    """
    _require_hyperbolic(gamma)
    if R <= 0:
        raise ValueError("R must be positive")
    if F.t_arity != 0:
        raise ValueError("certify_radius expects a parameter-free slice polynomial")
    if not F.is_zero() and F.min_w_order() < 3:
        raise OrderViolationError("F must vanish to order three")
    threshold = normal_form_threshold(gamma)

    def bound(r: float) -> float:
        return c2_norm_upper(F, r, sample=False).upper if r > 0 else 0.0

    if bound(R) <= threshold:
        return CertifiedRadius(
            r=R, threshold=threshold, c2_at_r=bound(R), bisection_steps=0, certified=True
        )
    lo, hi = 0.0, R
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if bound(mid) <= threshold:
            lo = mid
        else:
            hi = mid
    return CertifiedRadius(
        r=lo,
        threshold=threshold,
        c2_at_r=bound(lo),
        bisection_steps=steps,
        certified=lo > 0.0,
    )


# ---------------------------------------------------------------------- #
# flat induction driver


@dataclass(frozen=True)
class SliceMargin:
    """Per-slice entry of a flat certificate."""

    t: tuple[float, ...]
    gamma_t: float
    threshold: float
    g_hat_c2: float
    margin: float
    hyperbolic: bool
    converged: bool
    failure: str | None = None


@dataclass(frozen=True)
class FlatCertificate:
    """Certified box for a flat hyperbolic point.

    ``certified`` iff some positive (T_star, r_star) exists such that every
    grid slice inside [-T_star, T_star]^{n-2} is hyperbolic with a
    positive C^2 margin at radius r_star.  The per-slice table reports all
    grid slices at the chosen r_star.
    """

    T_star: float
    r_star: float
    per_slice: tuple[SliceMargin, ...]
    certified: bool
    diagnostics: tuple[str, ...] = field(default=())


def certify_flat(
    spec: ManifoldSpec,
    t_grid: Sequence[Sequence[float]],
    rho_candidates: Sequence[float] | None = None,
    T_candidates: Sequence[float] | None = None,
) -> FlatCertificate:
    """Run the slice pipeline over a t-grid and search the certified box.

    Each grid slice goes through locate_eta -> jet_at -> reduce, giving
    (gamma_t, G_t); its margin at radius rho is
    normal_form_threshold(gamma_t) - c2_norm_upper(G_t, rho).upper.
    Candidate lattices default to geometric sequences R 2^-k, T 2^-k with
    k <= 40.  Among (T, rho) pairs whose box passes entirely, the largest
    T wins, with the largest rho as tie-break.  Slice failures (Newton
    non-convergence, degenerate or off-locus jets) exclude their slice
    from any certified box and are reported in the diagnostics.
    """
    if not spec.flat:
        raise ValueError("certify_flat requires a flat spec")
    if spec.n < 3:
        raise ValueError("flat certification concerns n >= 3")
    diagnostics: list[str] = []

    # Precondition: the origin slice must be hyperbolic.
    origin_ok = True
    try:
        eta0, conv0, _ = locate_eta(spec, (0.0,) * (spec.n - 2))
        cls0 = classify_point(jet_at(spec, (0.0,) * (spec.n - 2), eta0))
        if not conv0 or cls0.kind != "hyperbolic":
            origin_ok = False
            diagnostics.append(f"non-hyperbolic origin slice (kind={cls0.kind})")
    except Exception as exc:  # degenerate origin data
        origin_ok = False
        diagnostics.append(f"origin slice failed: {exc}")

    if rho_candidates is None:
        rho_candidates = [spec.domain.R * 2.0**-k for k in range(41)]
    if T_candidates is None:
        T_candidates = [spec.domain.T * 2.0**-k for k in range(41)]
    rho_candidates = sorted(set(float(r) for r in rho_candidates), reverse=True)
    T_candidates = sorted(set(float(T) for T in T_candidates), reverse=True)

    rows: list[dict] = []
    for t in t_grid:
        t = tuple(float(x) for x in t)
        row: dict = {"t": t, "ok": False, "failure": None}
        try:
            eta, conv, res = locate_eta(spec, t)
            if not conv:
                row["failure"] = f"locus Newton did not converge (residual {res:.3e})"
            else:
                jet = jet_at(spec, t, eta)
                cls = classify_point(jet)
                nf = reduce(jet)
                row.update(
                    ok=True,
                    gamma_t=nf.gamma_t,
                    hyperbolic=cls.kind == "hyperbolic",
                    g_hat=nf.g_hat,
                    threshold=normal_form_threshold(nf.gamma_t)
                    if cls.kind == "hyperbolic"
                    else 0.0,
                )
        except Exception as exc:
            row["failure"] = str(exc)
        if row["failure"]:
            diagnostics.append(f"slice t={t}: {row['failure']}")
        rows.append(row)

    def margin_at(row: dict, rho: float) -> float:
        if not row["ok"] or not row["hyperbolic"]:
            return -math.inf
        cache = row.setdefault("margins", {})
        if rho not in cache:
            cache[rho] = row["threshold"] - c2_norm_upper(row["g_hat"], rho, sample=False).upper
        return cache[rho]

    def box_passes(T_c: float, rho: float) -> bool:
        inside = [r for r in rows if max(map(abs, r["t"]), default=0.0) <= T_c * (1 + 1e-12)]
        if not inside:
            return False
        return all(margin_at(r, rho) > 0.0 for r in inside)

    best: tuple[float, float] | None = None
    if origin_ok:
        for T_c in T_candidates:
            found_rho = None
            for rho in rho_candidates:
                if box_passes(T_c, rho):
                    found_rho = rho
                    break
            if found_rho is not None:
                best = (T_c, found_rho)
                break

    T_star, r_star = best if best else (0.0, 0.0)
    report_rho = r_star if r_star > 0 else rho_candidates[-1]
    per_slice = []
    for row in rows:
        if row["ok"]:
            m = margin_at(row, report_rho)
            per_slice.append(
                SliceMargin(
                    t=row["t"],
                    gamma_t=row["gamma_t"],
                    threshold=row["threshold"],
                    g_hat_c2=c2_norm_upper(row["g_hat"], report_rho, sample=False).upper,
                    margin=m,
                    hyperbolic=row["hyperbolic"],
                    converged=True,
                )
            )
        else:
            per_slice.append(
                SliceMargin(
                    t=row["t"],
                    gamma_t=math.nan,
                    threshold=math.nan,
                    g_hat_c2=math.nan,
                    margin=-math.inf,
                    hyperbolic=False,
                    converged=False,
                    failure=row["failure"],
                )
            )
    return FlatCertificate(
        T_star=T_star,
        r_star=r_star,
        per_slice=tuple(per_slice),
        certified=best is not None,
        diagnostics=tuple(diagnostics),
    )
