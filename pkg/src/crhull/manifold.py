"""Data model for real n-manifolds in Bishop normal form.

The manifold is the graph

    z_j = t_j + i f_j(t, w, wbar)          j = 1..n-2
    z_{n-1} = w
    z_n = w wbar + gamma (w^2 + wbar^2) + F(t, w, wbar)

over a box [-T, T]^{n-2} x closed disk of radius R, with F vanishing to
order three at 0 and each real-valued f_j vanishing to order two.  In the
flat variant f_j depends only on t_1..t_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bipoly import BiPoly


@dataclass(frozen=True)
class Domain:
    """Parameter box: |t_j| <= T for every t-axis, |w| <= R."""

    T: float
    R: float

    def __post_init__(self):
        if self.T <= 0 or self.R <= 0:
            raise ValueError("domain sizes must be positive")


@dataclass(frozen=True)
class EmbeddedPoint:
    """A point of the embedded manifold in C^n."""

    z: tuple[complex, ...]

    def __len__(self):
        return len(self.z)


@dataclass(frozen=True)
class ManifoldSpec:
    """Manifold in normal form, restricted to polynomial data.

    Polynomial inputs are what make the certificates possible: coefficient
    sums give exact C^2 upper bounds.  Smooth non-polynomial slices are
    supported only through the finite-difference jet path, which reports
    are required to flag as non-certified.

    Attributes
    ----------
    n : ambient complex dimension (>= 2).
    gamma : Bishop invariant of the normal form, >= 0.
    F : complex-valued perturbation, t_arity = n - 2, vanishing to order 3.
    f : the n - 2 real-valued graph polynomials, each vanishing to order 2.
    domain : parameter box (T, R).
    flat : if True, f_j may depend only on t_1..t_j (and not on w).
    """

    n: int
    gamma: float
    F: BiPoly
    f: tuple[BiPoly, ...] = field(default=())
    domain: Domain = field(default_factory=lambda: Domain(T=1.0, R=1.0))
    flat: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("ambient dimension n must be >= 2")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        object.__setattr__(self, "f", tuple(self.f))
        if self.F.t_arity != self.n - 2:
            raise ValueError(f"F.t_arity must be n-2 = {self.n - 2}")
        if len(self.f) != self.n - 2:
            raise ValueError(f"expected {self.n - 2} graph polynomials, got {len(self.f)}")
        for fj in self.f:
            if fj.t_arity != self.n - 2:
                raise ValueError("each f_j must have t_arity = n-2")

    # ------------------------------------------------------------------ #

    def phi(self) -> BiPoly:
        """The height polynomial w wbar + gamma (w^2 + wbar^2) + F."""
        k = self.n - 2
        zeros = (0,) * k
        base = BiPoly(
            {
                (zeros, 1, 1): 1.0,
                (zeros, 2, 0): self.gamma,
                (zeros, 0, 2): self.gamma,
            },
            k,
        )
        return base + self.F

    def phi_slice(self, t: Sequence[float]) -> BiPoly:
        """Height polynomial of the 2-D slice at fixed t (t_arity 0)."""
        return self.phi().subs_t(t)

    def fingerprint_data(self) -> dict:
        """Stable, canonical description used for hashing and manifests."""
        def encode(P: BiPoly):
            return [
                {"a": list(a), "b": b, "c": c, "re": coef.real, "im": coef.imag}
                for (a, b, c), coef in sorted(P.terms.items())
            ]

        return {
            "n": self.n,
            "gamma": self.gamma,
            "flat": self.flat,
            "F": encode(self.F),
            "f": [encode(fj) for fj in self.f],
            "domain": {"T": self.domain.T, "R": self.domain.R},
        }


# ---------------------------------------------------------------------- #
# operations


def order_two_in_w(F: BiPoly) -> bool:
    """True iff every term of F has w-degree b + c >= 2.

    This is the hypothesis under which the n >= 3 union-of-sheets argument
    applies; it excludes terms like t^j w, t^j wbar and t^j.
    """
    return all(b + c >= 2 for (_, b, c) in F.terms)


def validate_spec(spec: ManifoldSpec) -> list[str]:
    """Check all normal-form invariants; return one diagnostic per violation.

    An empty list means every invariant holds.  Checks: F vanishes to order
    three at 0; every f_j is conjugation-symmetric (real-valued) and
    vanishes to order two; in flat mode f_j is independent of w, wbar and
    of t_k for k > j.
    """
    out: list[str] = []
    for (a, b, c) in sorted(spec.F.terms):
        if sum(a) + b + c <= 2:
            out.append(f"F order-3 violation at (a={list(a)},b={b},c={c})")
    for j, fj in enumerate(spec.f, start=1):
        for (a, b, c) in sorted(fj.terms):
            if sum(a) + b + c <= 1:
                out.append(f"f{j} order-2 violation at (a={list(a)},b={b},c={c})")
        if not fj.is_conjugation_symmetric():
            out.append(f"f{j} is not real-valued (coefficients not conjugation-symmetric)")
        if spec.flat:
            for (a, b, c) in sorted(fj.terms):
                if b + c > 0:
                    out.append(f"flatness violation: f{j} depends on w at (a={list(a)},b={b},c={c})")
                if any(e > 0 for e in a[j:]):
                    out.append(f"flatness violation: f{j} depends on t_k, k > {j}, at (a={list(a)},b={b},c={c})")
    return out


def embed(spec: ManifoldSpec, t: Sequence[float], w) -> EmbeddedPoint:
    """Evaluate the normal-form embedding at (t, w).

    Returns (t_1 + i f_1, ..., t_{n-2} + i f_{n-2}, w, phi(t, w)).
    Raises ValueError when (t, w) leaves the domain box.
    """
    t = tuple(float(x) for x in t)
    if len(t) != spec.n - 2:
        raise ValueError(f"expected {spec.n - 2} t-values, got {len(t)}")
    if any(abs(x) > spec.domain.T * (1 + 1e-12) for x in t):
        raise ValueError("t outside the domain box")
    w = complex(w)
    if abs(w) > spec.domain.R * (1 + 1e-12):
        raise ValueError("w outside the domain disk")
    coords = [tj + 1j * complex(fj.eval(t, w)).real for tj, fj in zip(t, spec.f)]
    coords.append(w)
    coords.append(complex(spec.phi().eval(t, w)))
    return EmbeddedPoint(z=tuple(coords))


def embed_grid(spec: ManifoldSpec, t: Sequence[float], w: np.ndarray) -> np.ndarray:
    """Vectorized embedding: returns an array of shape (len(w), n)."""
    t = tuple(float(x) for x in t)
    w = np.asarray(w, dtype=complex).ravel()
    cols = [float(tj) + 1j * np.real(fj.eval(t, w)) for tj, fj in zip(t, spec.f)]
    cols.append(w)
    cols.append(spec.phi().eval(t, w))
    return np.stack([np.broadcast_to(c, w.shape) for c in cols], axis=1)
