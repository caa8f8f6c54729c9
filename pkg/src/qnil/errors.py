"""Exception hierarchy shared by all qnil modules."""


class QnilError(Exception):
    """Base class for qnil errors."""


class InclusionViolation(QnilError):
    """A subspace that should contain another does not (the complex is broken)."""


class NotWellDefined(QnilError):
    """A map does not descend to the requested quotients."""


class IndeterminateError(QnilError):
    """The truncation window is too small to determine the requested value."""


class AxiomViolation(QnilError):
    """An algebra, bimodule or coface family fails its defining identities.

    ``witness`` carries the offending basis indices.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceCapExceeded(QnilError):
    """A construction would exceed the configured dimension cap."""


class InputError(QnilError):
    """An input file failed to parse or validate."""
