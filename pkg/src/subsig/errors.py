"""Exception hierarchy shared by the library and the CLI."""


class SubsigError(Exception):
    """Base class for all library errors."""


class FormulaSyntaxError(SubsigError, ValueError):
    """Malformed structure formula; ``position`` is a 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ComponentError(SubsigError, ValueError):
    """Component index out of range or a set/component precondition broken."""


class CapacityError(SubsigError):
    """A hard size cap (components or enumerated orderings) was exceeded."""


class NotBinaryError(SubsigError, ValueError):
    """A domination function whose zeta transform leaves {0, 1}."""

    def __init__(self, mask, value):
        super().__init__(f"phi({mask:#b}) = {value} is not in {{0, 1}}")
        self.mask = mask
        self.value = value


class DistributionError(SubsigError, ValueError):
    """Invalid ordering distribution or lifetime model."""


class EnumerationRequired(SubsigError):
    """The operation needs an enumerable (explicit) ordering distribution."""


class NormalizationUndefined(SubsigError, ZeroDivisionError):
    """The failure attribution probability of M is zero."""


class AssumptionViolated(SubsigError):
    """The ratio hypothesis of the module factorization fails; see ``witness``."""

    def __init__(self, witness):
        super().__init__(f"factorization hypothesis violated: {witness}")
        self.witness = witness


class DecompositionError(SubsigError, ValueError):
    """Module decomposition is inconsistent or was not validated."""


class RouteDisagreement(AssertionError):
    """Two exact formula routes disagree. Always a defect, never a tolerance issue."""
