"""Exception hierarchy shared by all modules."""


class HurwitzTauError(Exception):
    """Base class for every error raised by the package."""


class InputError(HurwitzTauError, ValueError):
    """Malformed or degenerate user input."""


class ConvergenceError(HurwitzTauError, ArithmeticError):
    """An iterative procedure did not reach its tolerance."""


class PathCollisionError(ConvergenceError):
    """Sheet continuation came too close to a branch point or root collision."""


class VanishingThetaConstantError(HurwitzTauError, ArithmeticError):
    """An even theta constant vanished where a nonzero value is required."""


class VerificationError(HurwitzTauError):
    """A numerical identity failed to hold within tolerance."""
