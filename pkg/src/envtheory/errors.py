"""Exception hierarchy shared by the solvers."""


class EnvelopeError(Exception):
    """Base class for all errors raised by :mod:`envtheory`."""


class DomainError(EnvelopeError, ValueError):
    """An argument lies outside the domain of a formula."""


class NoBoundState(EnvelopeError):
    """The envelope equations have no solution for the requested state.

    ``delta`` carries the offending Lambert-W argument when the failure
    comes from the exponential-well closed form.
    """

    def __init__(self, message, delta=None):
        super().__init__(message)
        self.delta = delta


class NonConvergence(EnvelopeError):
    """An iterative procedure hit its iteration cap."""


class NegativeStiffness(EnvelopeError):
    """The radial stiffness of the dominantly orbital state is negative."""


class NoRoot(EnvelopeError):
    """A calibration target cannot be reached inside the search bracket."""


class NoMinimum(EnvelopeError):
    """The variational energy is monotone over the scale bracket."""


class MixedQ0(EnvelopeError):
    """Observable requested with phi != 2 on a state mixing several Q0 values."""


class UnsupportedSystem(EnvelopeError):
    """The variational oracle cannot treat this Hamiltonian."""


class EmptyBasis(EnvelopeError):
    """Every band of the requested symmetry block is forbidden."""
