"""Exception types shared across the package."""


class ContractGameError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ContractGameError):
    """A curve was evaluated outside its domain."""


class ProbabilityRangeError(ContractGameError):
    """A profile component left the admissible probability range."""


class DimensionError(ContractGameError):
    """Component dimensions disagree (outcomes vs. wages vs. profile)."""


class ValidationError(ContractGameError):
    """Aggregate of all issues found while validating a scenario.

    The individual issues (DomainError / ProbabilityRangeError /
    DimensionError instances) are available as ``.issues``.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"{len(self.issues)} validation issue(s): {lines}")


class ParseError(ContractGameError):
    """A scenario document could not be parsed."""


class NotTwoOutcomeLinearError(ContractGameError):
    """Scenario is not a two-outcome case with an affine first component."""


class EnumerationCapExceeded(ContractGameError):
    """A contract family enumerates more candidates than its cap allows."""
