"""Elliptic vs hyperbolic contrast through the polynomial-hull probe.

An elliptic point (gamma < 1/2) carries a family of analytic discs with
boundaries on the manifold, so points over the disc centers belong to the
polynomial hull: no polynomial normalized to 1 there can be small on the
samples, provided the sampled cloud contains the disc boundaries.  At a
hyperbolic point the certified convexity says nearby off-manifold points
must separate.  The probe sees both effects on 129-point clouds.

Probe ratios are evidence about the sampled cloud only, never a
certificate; the certificates live in crhull.certify.
"""

import numpy as np

from crhull import BiPoly, DiskGrid, Domain, ManifoldSpec, sample_manifold, separate

# rings placed on the probed disc boundaries |w| = sqrt(s), plus filler rings
radii = (0.1, np.sqrt(0.05), np.sqrt(0.1), 0.2, 0.35, 0.42, 0.46, 0.5)
grid = DiskGrid(radius=0.5, radial_count=8, angular_count=16, radii=radii)

elliptic = ManifoldSpec(n=2, gamma=0.0, F=BiPoly.zero(0), domain=Domain(T=1.0, R=0.5))
hyperbolic = ManifoldSpec(n=2, gamma=1.0, F=BiPoly.zero(0), domain=Domain(T=1.0, R=0.5))

cloud_e = sample_manifold(elliptic, (), grid)
cloud_h = sample_manifold(hyperbolic, (), grid)
print(f"cloud sizes: {len(cloud_e)} (elliptic), {len(cloud_h)} (hyperbolic)")

print("\nelliptic gamma = 0: queries (0, s) over disc centers -> ratio pinned at 1")
for s in (0.01, 0.05, 0.1):
    res = separate(cloud_e, [0.0, s], 8)
    print(f"  s = {s:<5}: ratio = {res.ratio:.6f}   (>= 0.99: in the sampled hull)")

print("\nhyperbolic gamma = 1: query (0, 0.1i) separates more at each degree")
for degree in (1, 2, 4, 8):
    res = separate(cloud_h, [0.0, 0.1j], degree)
    print(f"  degree {degree}: ratio = {res.ratio:.6f}")

print("\nfar query (0, 5) at degree 1: the discrete Chebyshev optimum is 2/19")
res = separate(cloud_h, [0.0, 5.0], 1)
print(f"  ratio = {res.ratio:.9f}   2/19 = {2/19:.9f}")

print(
    "\nwhy the ring placement matters: with 16 angles per ring, averaging any\n"
    "polynomial of degree < 16 over a ring recovers its value at the disc\n"
    "center, so a ring on |w| = sqrt(s) forces ratio >= 1 at (0, s)."
)
