"""Exception hierarchy.

Law violations found by the ``validate_*``/``check_*`` functions are returned
as :class:`~laxdyn.report.Report` values; exceptions are for misuse, malformed
input and exhausted search budgets.
"""


class LaxDynError(Exception):
    pass


class DomainMismatch(LaxDynError, ValueError):
    pass


class NotComposable(LaxDynError, KeyError):
    pass


class NonAssociative(LaxDynError, ValueError):
    pass


class BadUnit(LaxDynError, ValueError):
    pass


class InvalidDynamic(LaxDynError, ValueError):
    """A dynamic fails its structural checks or its laws."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BadPartition(LaxDynError, ValueError):
    pass


class SearchBudgetExceeded(LaxDynError, RuntimeError):
    pass


class UnknownState(LaxDynError, KeyError):
    pass


class BadIndex(LaxDynError, ValueError):
    pass


class ContextMismatch(LaxDynError, ValueError):
    pass


class UntaggedIndex(LaxDynError, ValueError):
    pass


class IndexTooLarge(LaxDynError, ValueError):
    pass


class FamilyMismatch(LaxDynError, ValueError):
    pass


class NotAdmissible(LaxDynError, ValueError):
    pass


class NotCoherent(LaxDynError, ValueError):
    pass


class InvalidSynchronization(LaxDynError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class IntimacyNotCoveringM(LaxDynError, ValueError):
    pass


class BadJ(LaxDynError, ValueError):
    pass


class NotHyperDeterministic(LaxDynError, ValueError):
    pass


class NotFunctorial(LaxDynError, ValueError):
    pass


class NotARealization(LaxDynError, ValueError):
    pass


class UnknownFixture(LaxDynError, KeyError):
    pass
