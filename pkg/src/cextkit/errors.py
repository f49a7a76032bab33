"""Exception types shared across the package."""


class CextError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(CextError):
    """An enumeration would visit more candidates than the configured cap."""

    def __init__(self, cap, required=None, what="enumeration"):
        self.cap = cap
        self.required = required
        msg = f"{what} exceeded budget of {cap} candidates"
        if required is not None:
            msg += f" (needs at least {required})"
        super().__init__(msg)


class GroupOrderError(CextError):
    """A generated group grew past the order cap."""


class NotAHomomorphism(CextError):
    pass


class NotAnExtension(CextError):
    """Raised when an operation needs an extension and the diagram is not one."""

    def __init__(self, msg, subset=None, witness=None):
        super().__init__(msg)
        self.subset = subset
        self.witness = witness


class PreconditionError(CextError):
    pass
