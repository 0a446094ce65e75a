"""Exception hierarchy shared across the package.

Two families matter for exit codes: ParseError and its subclasses mean the
input file itself is malformed (CLI exit 2); every other ConceptNetError is a
domain error over well-formed input (CLI exit 1).
"""
from __future__ import annotations


class ConceptNetError(Exception):
    """Base class for every error raised by this package."""


# --- structural validation of networks ---

class ValidationError(ConceptNetError):
    """A network specification violates a structural invariant."""


class DanglingReference(ValidationError):
    """A pattern names a concept that does not exist."""


class LayerViolation(ValidationError):
    """A pattern element is not exactly one layer below its owner, or a layer is negative."""


class EmptyPattern(ValidationError):
    """A pattern has no elements."""


class DuplicateName(ValidationError):
    """Two concepts share a name."""


class DuplicateElement(ValidationError):
    """A pattern lists the same element twice."""


class DuplicatePattern(ValidationError):
    """A concept carries the same pattern twice."""


class BottomWithPatterns(ValidationError):
    """A layer-0 concept carries patterns."""


class NonBottomWithoutPatterns(ValidationError):
    """A concept above layer 0 carries no patterns."""


# --- lookups and limits ---

class UnknownConcept(ConceptNetError):
    """A concept id or name does not exist in the network."""


class BottomConcept(ConceptNetError):
    """A layer-0 concept was used where an inferable concept is required."""


class TooLarge(ConceptNetError):
    """An exhaustive sweep would exceed the configured size limit."""


# --- engine ---

class BadParams(ConceptNetError):
    """Engine parameters violate an invariant; the message names the inequality."""


class NonBottomClamp(ConceptNetError):
    """A clamp addresses a concept that is not on layer 0."""


# --- file formats (CLI exit 2) ---

class ParseError(ConceptNetError):
    """Malformed input text; the message carries the location."""


class UnknownField(ParseError):
    """A strict format rejects a field it does not know."""


class TypeMismatch(ParseError):
    """A field holds a value of the wrong type or shape."""


class SchemaMismatch(ParseError):
    """A trace CSV does not match the fixed schema."""


# --- scenarios (domain errors) ---

class UnknownElement(ConceptNetError):
    """A scenario or query names a concept the network does not define."""


class EmptyScenario(ConceptNetError):
    """A scenario must contain at least one phase."""
