"""Locate, trace, and classify the CR-singular locus of a perturbed manifold.

A manifold in normal form with gamma = 1 and perturbation
F = t^2 (w + wbar) + w^3 has its complex tangents where

    d(phi_t)/dwbar = w + 2 wbar + t^2 + 3 wbar^2 ... = 0,

which for this data is a curve eta(t) close to -t^2/3.  We trace it by
Newton continuation and classify each singular point by its Bishop
invariant.
"""

import numpy as np

from crhull import (
    BiPoly,
    Domain,
    ManifoldSpec,
    classify_point,
    jet_at,
    trace_locus,
)

spec = ManifoldSpec(
    n=3,
    gamma=1.0,
    F=BiPoly({((2,), 1, 0): 1.0, ((2,), 0, 1): 1.0, ((0,), 3, 0): 1.0}, 1),
    f=(BiPoly({((2,), 0, 0): 1.0}, 1),),  # z1 = t + i t^2
    domain=Domain(T=0.5, R=1.0),
    flat=True,
)

t_grid = [(t,) for t in np.linspace(-0.5, 0.5, 11)]
locus = trace_locus(spec, t_grid)

print("tangency locus eta(t) and slice classification")
print(f"{'t':>8} {'Re eta':>12} {'Im eta':>10} {'gamma_t':>9} kind")
for t, eta, ok in zip(locus.t_grid, locus.eta, locus.converged):
    cls = classify_point(jet_at(spec, t, eta))
    print(
        f"{t[0]:8.3f} {eta.real:12.6f} {eta.imag:10.2e} {cls.gamma_t:9.5f} "
        f"{cls.kind}{'' if ok else '  (not converged)'}"
    )
print(f"\nmax Newton residual over the sweep: {locus.max_residual:.2e}")
print("for gamma = 1 the leading-order locus is eta = -t^2 / (1 + 2 gamma) = -t^2/3:")
worst = max(abs(e - (-t[0] ** 2 / 3)) for t, e in zip(locus.t_grid, locus.eta))
print(f"max |eta(t) + t^2/3| = {worst:.2e}  (exact here: the tangency equation is linear)")
