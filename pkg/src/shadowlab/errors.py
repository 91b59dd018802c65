"""Exception hierarchy for shadowlab."""

from __future__ import annotations


class ShadowlabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ShadowlabError, ValueError):
    """An operation received input outside its domain."""


class UniformityError(DomainError):
    """The family is not k-uniform, or k is not allowed for the operation."""


class LinkSpecError(DomainError):
    """Anchor and excluded sets of a link overlap."""


class FamParseError(DomainError):
    """Malformed ``.fam`` text."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CertificateFormatError(DomainError):
    """A serialized chain certificate could not be decoded."""


class LemmaHypothesisError(ShadowlabError):
    """A hypothesis of the inductive shadow lemma does not hold.

    ``hypothesis`` is ``"view"`` when the restricted view at the anchor fails,
    or ``"extension"`` when the link at ``anchor | extension_vertex`` fails.
    """

    def __init__(self, message: str, hypothesis: str, anchor: int, witness: int | None = None,
                 extension: int | None = None) -> None:
        super().__init__(message)
        self.hypothesis = hypothesis
        self.anchor = anchor
        self.witness = witness
        self.extension = extension


class CertificationError(ShadowlabError):
    """A chain builder could not certify a step it is supposed to be able to certify.

    This signals a bug in the implementation, never a property of the input.
    """


class TheoremViolation(ShadowlabError):
    """A proved theorem failed on a concrete instance; always an implementation bug."""

    def __init__(self, message: str, claim: str, payload: dict | None = None) -> None:
        super().__init__(message)
        self.claim = claim
        self.payload = payload or {}


class BudgetExceeded(ShadowlabError):
    """An exhaustive enumeration visited more nodes than its budget allows.

    ``count`` is the number of nodes visited before aborting; ``partial`` may
    carry a partially filled report.
    """

    def __init__(self, message: str, count: int, partial: object | None = None) -> None:
        super().__init__(message)
        self.count = count
        self.partial = partial
