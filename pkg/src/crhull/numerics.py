"""Complex-analytic numerical kernels.

Principal-branch square-root deviation with its certified linear bound,
finite-difference Wirtinger jets, coefficient-certified C^2 norm bounds on
closed disks, and the disk sampling grids used by every margin check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bipoly import BiPoly
from .errors import DomainError

#: Lipschitz factor of 1 - sqrt(1+z) on the closed quarter disk.
SQRT1P_LIPSCHITZ = 10.0 / 11.0

#: Default central-difference step; double-precision sweet spot for second
#: derivatives of O(1) functions.
DEFAULT_FD_STEP = 1e-4


# ---------------------------------------------------------------------- #
# grids


@dataclass(frozen=True)
class DiskGrid:
    """Sample points of a closed disk: the center plus concentric rings.

    ``radii`` defaults to ``radial_count`` evenly spaced rings ending at the
    boundary.  Custom radii let callers place rings on specific circles
    (the hull experiments need rings exactly on analytic-disc boundaries);
    the boundary ring is always required.
    """

    radius: float
    radial_count: int
    angular_count: int
    radii: tuple[float, ...] = field(default=())
    points: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.radial_count < 2:
            raise ValueError("radial_count must be >= 2")
        if self.angular_count < 4:
            raise ValueError("angular_count must be >= 4")
        radii = self.radii or tuple(
            self.radius * (j + 1) / self.radial_count for j in range(self.radial_count)
        )
        if len(radii) != self.radial_count:
            raise ValueError("len(radii) must equal radial_count")
        if any(r <= 0 or r > self.radius * (1 + 1e-15) for r in radii):
            raise ValueError("ring radii must lie in (0, radius]")
        if not any(abs(r - self.radius) <= 1e-15 * self.radius for r in radii):
            raise ValueError("the boundary ring (|p| = radius) must be present")
        theta = 2.0 * np.pi * np.arange(self.angular_count) / self.angular_count
        ring = np.exp(1j * theta)
        pts = np.concatenate(
            [np.zeros(1, dtype=complex)] + [r * ring for r in sorted(radii)]
        )
        object.__setattr__(self, "radii", tuple(sorted(radii)))
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size

    def metadata(self) -> dict:
        return {
            "radius": self.radius,
            "radial_count": self.radial_count,
            "angular_count": self.angular_count,
            "radii": list(self.radii),
            "size": len(self),
        }


# ---------------------------------------------------------------------- #
# principal square root deviation


def sqrt1p_deviation(z):
    """q(z) = 1 - sqrt(1+z) on the principal branch, for |z| <= 1/4.

    Satisfies |q| <= (10/11)|z| and |q| < 9/10 on the closed quarter disk.
    Accepts a complex scalar or ndarray; raises :class:`DomainError` when
    any input has |z| > 1/4 (callers must shrink the radius first).
    """
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) > 0.25):
        raise DomainError("sqrt1p_deviation requires |z| <= 1/4")
    q = 1.0 - np.sqrt(1.0 + arr)
    if __debug__:
        assert np.all(np.abs(q) <= SQRT1P_LIPSCHITZ * np.abs(arr) + 1e-15)
    return complex(q) if arr.ndim == 0 else q


# ---------------------------------------------------------------------- #
# Wirtinger jets by central differences


@dataclass
class TaylorJet:
    """Second-order expansion data at a point.

    ``beta[(i, j)]`` is the Taylor coefficient of zeta^i zetabar^j, i.e. the
    raw partial derivative d^{i+j} f / dw^i dwbar^j divided by i!.j!, so
    the expansion reads  f = sum beta_{i,j} zeta^i zetabar^j + remainder.
    ``remainder`` is the exact order->=3 tail when the source was a
    polynomial, else None (finite-difference jets carry no remainder).
    """

    beta: dict[tuple[int, int], complex]
    center: complex = 0.0 + 0.0j
    remainder: BiPoly | None = None

    def b(self, i: int, j: int) -> complex:
        return self.beta.get((i, j), 0.0 + 0.0j)

    def scale(self) -> float:
        return max((abs(v) for v in self.beta.values()), default=0.0)


def wirtinger_jet(
    f: Callable[[complex], complex], p: complex, h: float = DEFAULT_FD_STEP
) -> TaylorJet:
    """Estimate the order-2 Taylor jet of ``f`` at ``p`` by central differences.

    ``f`` maps a complex point to a complex value (with the conjugate
    dependence implicit).  Real partials are converted through
    F_w = (F_x - i F_y)/2, F_wbar = (F_x + i F_y)/2; the error is O(h^2)
    for smooth inputs.

    Parameters
    ----------
    f : callable
        Evaluable on a disk of radius 4h around p.
    p : complex
        Expansion point.
    h : float
        Step size; the caller validates it against the noise floor.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    p = complex(p)
    f0 = complex(f(p))
    fpx = complex(f(p + h))
    fmx = complex(f(p - h))
    fpy = complex(f(p + 1j * h))
    fmy = complex(f(p - 1j * h))
    fpp = complex(f(p + h + 1j * h))
    fpm = complex(f(p + h - 1j * h))
    fmp = complex(f(p - h + 1j * h))
    fmm = complex(f(p - h - 1j * h))

    fx = (fpx - fmx) / (2 * h)
    fy = (fpy - fmy) / (2 * h)
    fxx = (fpx - 2 * f0 + fmx) / (h * h)
    fyy = (fpy - 2 * f0 + fmy) / (h * h)
    fxy = (fpp - fpm - fmp + fmm) / (4 * h * h)

    fw = 0.5 * (fx - 1j * fy)
    fwb = 0.5 * (fx + 1j * fy)
    fww = 0.25 * (fxx - fyy - 2j * fxy)
    fwbwb = 0.25 * (fxx - fyy + 2j * fxy)
    fwwb = 0.25 * (fxx + fyy)

    beta = {
        (0, 0): f0,
        (1, 0): fw,
        (0, 1): fwb,
        (1, 1): fwwb,
        (2, 0): 0.5 * fww,
        (0, 2): 0.5 * fwbwb,
    }
    return TaylorJet(beta=beta, center=p, remainder=None)


# ---------------------------------------------------------------------- #
# certified C^2 norm bounds


@dataclass(frozen=True)
class C2NormBound:
    """Certified C^2 bound on a closed disk.

    ``upper`` dominates the sup of |F| and of every real partial of order
    <= 2 on the disk (coefficient sums; exact in real arithmetic).
    ``grid_max`` is the sampled lower estimate of the same quantity; it
    cannot exceed ``upper`` beyond IEEE rounding of the ring samples
    (relative slack 1e-12, enforced at construction).
    """

    upper: float
    grid_max: float
    radius: float

    def __post_init__(self):
        if self.grid_max > self.upper * (1 + 1e-12) + 1e-300:
            raise ValueError("grid_max exceeded the certified upper bound")


def _real_partials(F: BiPoly) -> list[BiPoly]:
    """The six functions {F, F_x, F_y, F_xx, F_xy, F_yy} as exact polynomials."""
    fw = F.wirtinger("w")
    fwb = F.wirtinger("wbar")
    fx = fw + fwb
    fy = 1j * (fw - fwb)
    fxx = fx.wirtinger("w") + fx.wirtinger("wbar")
    fxy = 1j * (fx.wirtinger("w") - fx.wirtinger("wbar"))
    fyy = 1j * (fy.wirtinger("w") - fy.wirtinger("wbar"))
    return [F, fx, fy, fxx, fxy, fyy]


def _coefficient_bound(P: BiPoly, r: float) -> float:
    """sum |coef| r^(b+c); dominates sup |P| on the closed disk of radius r."""
    return float(sum(abs(coef) * r ** (b + c) for (_, b, c), coef in P.terms.items()))


def c2_norm_upper(
    F: BiPoly, r: float, grid: DiskGrid | None = None, sample: bool = True
) -> C2NormBound:
    """Certified C^2-norm bound of a parameter-free polynomial on the disk of radius r.

    The C^2 norm is the max of sup-norms of all real partial derivatives of
    order <= 2 on the closed disk; ``upper`` bounds each of the six partials
    by its coefficient sum at radius r.  ``grid_max`` samples the same
    partials on ``grid`` (default 16x32).  Certification must always use
    ``upper``; the grid value only witnesses how tight it is, and tight
    inner loops may switch sampling off (``grid_max`` is then 0).
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    if F.t_arity != 0:
        raise ValueError("c2_norm_upper expects a parameter-free polynomial; substitute t first")
    partials = _real_partials(F)
    upper = max(_coefficient_bound(P, r) for P in partials)
    grid_max = 0.0
    if sample:
        if grid is None:
            grid = DiskGrid(radius=r, radial_count=16, angular_count=32)
        pts = grid.points * (r / grid.radius) if grid.radius != r else grid.points
        for P in partials:
            if P.is_zero():
                continue
            vals = P.eval((), pts)
            grid_max = max(grid_max, float(np.max(np.abs(vals))))
    return C2NormBound(upper=upper, grid_max=grid_max, radius=r)
