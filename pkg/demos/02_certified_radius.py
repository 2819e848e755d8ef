"""Quantitative polynomially-convex neighbourhood radii for 2-D hyperbolic points.

For z2 = z1 zbar1 + gamma (z1^2 + zbar1^2) + F(z1, zbar1) with gamma > 1/2
and F vanishing to order three, every radius r whose certified C^2 bound of
F stays below (2 gamma - 1)^3 / (2^14 gamma^3) gives a polynomially convex
patch.  The bound is a coefficient sum, so the certificate is exact in real
arithmetic; bisection finds the largest certified radius.
"""

from crhull import BiPoly, certify_radius, normal_form_threshold

F = BiPoly({((), 3, 0): 1.0}, 0)  # F = w^3

print("admissible C^2 size and certified radius for F = w^3, R = 1")
print(f"{'gamma':>6} {'threshold':>13} {'certified r':>13}")
for gamma in (2.0, 1.0, 0.75, 0.6, 0.51):
    cr = certify_radius(gamma, F, 1.0)
    print(f"{gamma:6.2f} {cr.threshold:13.6e} {cr.r:13.6e}")

print("\nthe radius shrinks as gamma approaches 1/2 from above, and")
print("an unperturbed manifold is certified on any disk:")
cr0 = certify_radius(1.0, BiPoly.zero(0), 1000.0)
print(f"  F = 0, R = 1000  ->  r = {cr0.r}, certified = {cr0.certified}")

print("\nclosed-form cross-check at gamma = 1: the C^2 bound of w^3 on B_r is 6r,")
print("so the certificate saturates at r = threshold / 6:")
cr = certify_radius(1.0, F, 1.0)
print(f"  bisection: {cr.r:.12e}")
print(f"  closed:    {normal_form_threshold(1.0) / 6:.12e}")
