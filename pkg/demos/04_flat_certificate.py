"""Slice-by-slice certificate for a flat hyperbolic point.

For flat data (each f_j depends only on t_1..t_j), polynomial convexity of
the full patch reduces by an induction over real fibers to the 2-D slices:
each slice is brought to the model form
zeta zetabar + gamma_t (zeta^2 + zetabar^2) + G_t(zeta) and certified by
the quantitative radius bound.  The driver reports the box
[-T*, T*]^{n-2} x B_{r*} on which every slice margin is positive.
"""

import numpy as np

from crhull import BiPoly, Domain, ManifoldSpec, certify_flat

spec = ManifoldSpec(
    n=3,
    gamma=1.0,
    F=BiPoly({((2,), 1, 0): 1.0, ((2,), 0, 1): 1.0, ((0,), 3, 0): 1.0}, 1),
    f=(BiPoly({((2,), 0, 0): 1.0}, 1),),
    domain=Domain(T=0.5, R=1.0),
    flat=True,
)

cert = certify_flat(spec, [(t,) for t in np.linspace(-0.5, 0.5, 21)])

print(f"certified: {cert.certified}")
print(f"box: |t| <= {cert.T_star}, |zeta| <= {cert.r_star:.6e}")
print(f"\n{'t':>8} {'gamma_t':>8} {'threshold':>12} {'||G_t||_C2':>12} {'margin':>12}")
for s in cert.per_slice[::4]:
    print(
        f"{s.t[0]:8.3f} {s.gamma_t:8.4f} {s.threshold:12.4e} {s.g_hat_c2:12.4e} "
        f"{s.margin:12.4e}"
    )
print("...")
print(f"min margin over all 21 slices: {min(s.margin for s in cert.per_slice):.6e}")
print(
    "\nfor this fixture each slice remainder is exactly zeta^3 (the t^2(w+wbar)\n"
    "part is absorbed by the affine coordinate changes), so the margin is\n"
    "2^-14 - 6 r* = 2^-16 at the selected radius r* = 2^-17."
)
