"""Exception hierarchy shared across the package."""


class AlphaStepError(Exception):
    """Base class for all package errors."""


class InputError(AlphaStepError):
    """Malformed or inadmissible user input (CLI maps this to exit code 2)."""


class EmptyInput(InputError):
    pass


class DuplicateRoots(InputError):
    pass


class NonMonicInput(InputError):
    pass


class NonFiniteInput(InputError):
    pass


class CriticalPointInput(AlphaStepError):
    """f'(z) vanishes (below guard) at a point handed to an operation."""


class SingularStart(AlphaStepError):
    """Starting point has f(z0)=0 or f'(z0)=0; callers should resample."""


class OracleFailure(AlphaStepError):
    """The internal simultaneous-iteration root oracle could not certify."""


class ContinuationStall(AlphaStepError):
    """Predictor-corrector continuation collapsed away from any critical point."""


class RootsUnknown(AlphaStepError):
    """Operation needs the root representation and refinement failed."""


class ProfileMismatch(AlphaStepError):
    """A trace was audited against a profile of a different polynomial."""
