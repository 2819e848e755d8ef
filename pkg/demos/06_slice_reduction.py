"""Anatomy of the slice reduction: jets, coordinate changes, and their replay.

A 2-D slice near a tangency point is brought to the model form by five
logged coordinate changes.  Replaying the log on the original height
polynomial reproduces the model form coefficient by coefficient, which is
the internal consistency check behind every flat certificate.
"""

import numpy as np

from crhull import BiPoly, Domain, ManifoldSpec, jet_at, locate_eta, reduce, replay_changes

# a slice with complex second-order data: the wbar^2 coefficient has a phase,
# so the reduction needs a genuine parameter rotation
spec = ManifoldSpec(
    n=2,
    gamma=0.0,  # the quadratic data comes entirely from F here... except
    F=BiPoly.zero(0),
    domain=Domain(T=1.0, R=1.0),
)
phi = BiPoly(
    {
        ((), 1, 1): 2.0,            # 2 w wbar
        ((), 0, 2): 1.2j,           # i 1.2 wbar^2: gamma_t = 0.6, theta = pi/4
        ((), 2, 0): 0.3 - 0.1j,
        ((), 3, 0): 0.5,            # order-3 tail
        ((), 2, 2): -0.25j,
    },
    0,
)

# the tangency equation d phi / dwbar = 2w + 2.4 i wbar + ... vanishes at 0
from crhull.numerics import TaylorJet

low, high = phi.split_by_w_order(3)
jet = TaylorJet(beta={(b, c): v for (_, b, c), v in low.terms.items()}, remainder=high)

nf = reduce(jet)
print(f"gamma_t = {nf.gamma_t}   (|i 1.2 / 2| = 0.6)")
print(f"theta   = {nf.theta}   (arg(i 0.6)/2 = pi/4 = {np.pi/4})")
print("\ncoordinate-change log:")
for entry in nf.change_log:
    print("  ", entry)

replayed = replay_changes(phi, nf.change_log)
target = nf.model_polynomial()
diff = replayed - target
err = max((abs(v) for v in diff.terms.values()), default=0.0)
print(f"\nreplay vs model form: max coefficient deviation = {err:.2e}")
print("model form:", target)

# the same pipeline driven from a manifold: gamma = 0.75 normal form is a
# fixed point of the reduction
spec2 = ManifoldSpec(n=2, gamma=0.75, F=BiPoly({((), 4, 0): 0.2}, 0))
eta, ok, _ = locate_eta(spec2, ())
nf2 = reduce(jet_at(spec2, (), eta))
print(f"\nmodel manifold, gamma = 0.75: eta = {eta}, gamma_t = {nf2.gamma_t}")
print(f"order->=3 remainder after reduction: {nf2.g_hat}")
