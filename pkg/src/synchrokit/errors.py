"""Exception hierarchy shared by every synchrokit module."""


class SynchroError(Exception):
    """Base class for all library errors."""


class ParameterError(SynchroError, ValueError):
    """A constructor or operation received an out-of-range parameter."""


class InvalidLetterError(ParameterError):
    """A letter index or letter name does not belong to the automaton."""


class InvalidStateError(ParameterError):
    """A state index lies outside ``0..n-1``."""


class DomainError(SynchroError, ValueError):
    """The input is well formed but outside the operation's domain."""


class NotSynchronizingError(DomainError):
    """The automaton has no reset word."""


class NotExtensibleError(DomainError):
    """No word extends the given subset."""


class SizeError(SynchroError, ValueError):
    """The automaton is too large for the requested search."""


class BudgetExceededError(SynchroError):
    """An enumeration would exceed the configured table budget."""

    def __init__(self, estimate, budget):
        self.estimate = estimate
        self.budget = budget
        super().__init__(
            f"enumeration needs about {estimate:.3g} tables, budget is {budget:.3g}"
        )
