"""Exception hierarchy.

Everything raised for bad input derives from :class:`InputError` (a
``ValueError``); :class:`InvariantViolation` signals an internal bug.
"""


class InputError(ValueError):
    """Input rejected by a precondition."""


class SingularMatrixError(InputError):
    pass


class NotAnnihilatedByN(InputError):
    """``n * F^-1`` is not integral: the kernel exponent does not divide n."""


class NotPrincipal(InputError):
    """Isogeny degree is not a perfect square."""


class GenusTooSmall(InputError):
    pass


class NotCoprime(InputError):
    """The prime divides some invariant factor."""


class NotIsotropic(InputError):
    pass


class InvariantViolation(RuntimeError):
    """A post-condition that should hold by construction failed."""
