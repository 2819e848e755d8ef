"""Exception types shared across the toolkit."""


class CrhullError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CrhullError, ValueError):
    """Input outside the validity region of a kernel (e.g. |z| > 1/4)."""


class NonHyperbolicError(CrhullError, ValueError):
    """An operation requiring gamma > 1/2 received a non-hyperbolic value."""


class BranchDomainError(CrhullError, ValueError):
    """Branch square root queried outside the certified region."""


class SingularJacobianError(CrhullError, RuntimeError):
    """Newton iteration hit a numerically singular Jacobian."""


class DegenerateJetError(CrhullError, ValueError):
    """Jet has |beta_{1,1}| below the degeneracy threshold."""


class OffLocusError(CrhullError, ValueError):
    """Jet center is not a tangency point (beta_{0,1} too large)."""


class OrderViolationError(CrhullError, ValueError):
    """Polynomial fails a required vanishing-order hypothesis."""


class IllConditionedBasisError(CrhullError, RuntimeError):
    """Scaled normal equations of the separation solver are singular."""


class ManifestError(CrhullError, ValueError):
    """Manifest text failed schema or invariant validation."""
