"""Reduction of a 2-D slice to the model form  zeta zetabar + gamma_t (zeta^2 + zetabar^2) + G(zeta).

Given the height polynomial of a slice and a tangency point eta, a chain of
biholomorphic coordinate changes (translate, kill the affine part, rescale
by beta_{1,1}, rotate the parameter, kill the holomorphic quadratic)
produces the Bishop invariant gamma_t of the slice together with the exact
order-three remainder.  The chain is logged so tests can replay it.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Sequence

from .bipoly import BiPoly
from .errors import DegenerateJetError, NonHyperbolicError, OffLocusError
from .manifold import ManifoldSpec
from .numerics import TaylorJet
from .singular import DEGENERACY_THRESHOLD

#: Default tolerance on |beta_{0,1}| for accepting a center as a tangency point.
OFF_LOCUS_TOL = 1e-9


@dataclass(frozen=True)
class SliceNormalForm:
    """Output of the slice reduction pipeline.

    ``g_hat`` vanishes to order three; the reduced slice is exactly
    zeta zetabar + gamma_t (zeta^2 + zetabar^2) + g_hat(zeta), which the
    logged coordinate changes reproduce from the original height function.
    """

    gamma_t: float
    theta: float
    g_hat: BiPoly
    change_log: tuple[tuple, ...] = field(default=())

    def model_polynomial(self) -> BiPoly:
        """zeta zetabar + gamma_t (zeta^2 + zetabar^2) + g_hat as a BiPoly."""
        model = BiPoly(
            {((), 1, 1): 1.0, ((), 2, 0): self.gamma_t, ((), 0, 2): self.gamma_t}, 0
        )
        return model + self.g_hat


def jet_at(spec: ManifoldSpec, t: Sequence[float], center: complex) -> TaylorJet:
    """Exact order-2 jet of the slice height function about ``center``.

    Recenters phi_t by the substitution w -> zeta + center (exact binomial
    expansion), splits off the coefficients with total degree <= 2 as
    ``beta`` and returns the order->=3 tail as the exact remainder.
    """
    center = complex(center)
    if abs(center) > spec.domain.R * (1 + 1e-12):
        raise ValueError("center outside the w-disk")
    phi = spec.phi_slice(t).shift_w(center)
    low, high = phi.split_by_w_order(3)
    beta = {(b, c): coef for ((_, b, c), coef) in low.terms.items()}
    for key in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
        beta.setdefault(key, 0.0 + 0.0j)
    return TaylorJet(beta=beta, center=center, remainder=high)


def reduce(jet: TaylorJet, off_locus_tol: float = OFF_LOCUS_TOL) -> SliceNormalForm:
    """Run the coordinate-change pipeline on an order-2 jet.

    Steps, in order (each one logged):

    1. ``translate``: z2 -> z2 - center, so the slice parameter is zeta.
    2. ``kill_linear``: z3 -> z3 - beta00 - beta10 z2.
    3. ``scale``: z3 -> z3 / beta11.
    4. ``rotate``: parameter zeta -> e^{i theta} zeta with
       theta = arg(beta02/beta11)/2, making the zetabar^2 coefficient the
       positive real gamma_t = |beta02/beta11|.
    5. ``kill_quadratic``: z3 -> z3 + (gamma_t - (beta20/beta11) e^{2 i theta}) z2^2.

    Requires a non-degenerate jet taken at a tangency point (beta01 ~ 0).
    """
    b11 = jet.b(1, 1)
    scale = jet.scale()
    if scale == 0.0 or abs(b11) <= DEGENERACY_THRESHOLD * scale:
        raise DegenerateJetError(f"|beta11| = {abs(b11):.3e} is degenerate")
    if abs(jet.b(0, 1)) > off_locus_tol * max(1.0, scale):
        raise OffLocusError(
            f"|beta01| = {abs(jet.b(0, 1)):.3e} exceeds tolerance; center is off the locus"
        )
    ratio = jet.b(0, 2) / b11
    gamma_t = abs(ratio)
    theta = 0.0 if ratio == 0 else 0.5 * cmath.phase(ratio)
    quad_coeff = gamma_t - (jet.b(2, 0) / b11) * cmath.exp(2j * theta)
    remainder = jet.remainder if jet.remainder is not None else BiPoly.zero(0)
    g_hat = remainder.rotate(theta) * (1.0 / b11)
    log = (
        ("translate", jet.center),
        ("kill_linear", jet.b(0, 0), jet.b(1, 0)),
        ("scale", b11),
        ("rotate", theta),
        ("kill_quadratic", quad_coeff),
    )
    return SliceNormalForm(gamma_t=gamma_t, theta=theta, g_hat=g_hat, change_log=log)


def replay_changes(phi: BiPoly, change_log: Sequence[tuple]) -> BiPoly:
    """Apply a logged coordinate-change chain to a slice height polynomial.

    The result of replaying the log produced by :func:`reduce` on the
    original phi_t equals ``model_polynomial()`` coefficient by coefficient
    (up to the residual zetabar term of an inexact center).
    """
    if phi.t_arity != 0:
        raise ValueError("replay expects a parameter-free slice polynomial")
    out = phi
    for entry in change_log:
        name = entry[0]
        if name == "translate":
            out = out.shift_w(entry[1])
        elif name == "kill_linear":
            beta00, beta10 = entry[1], entry[2]
            out = out - BiPoly({((), 0, 0): beta00, ((), 1, 0): beta10}, 0)
        elif name == "scale":
            out = out * (1.0 / entry[1])
        elif name == "rotate":
            out = out.rotate(entry[1])
        elif name == "kill_quadratic":
            out = out + BiPoly({((), 2, 0): entry[1]}, 0)
        else:
            raise ValueError(f"unknown change-log entry {name!r}")
    return out


def normal_form_threshold(gamma_t: float) -> float:
    """Admissible C^2 size of the order-three remainder: (2g-1)^3 / (2^14 g^3).

    Monotone increasing in gamma_t with limit 1/2048; only hyperbolic
    slices (gamma_t > 1/2) have a positive threshold.
    """
    if gamma_t <= 0.5:
        raise NonHyperbolicError(f"gamma_t = {gamma_t} is not hyperbolic")
    return (2.0 * gamma_t - 1.0) ** 3 / (2.0**14 * gamma_t**3)
