"""Exception types shared across the package."""


class ArithTruthError(Exception):
    """Base class for all errors raised by this package."""


class OpenTerm(ArithTruthError):
    """A closed term was required but the term contains a variable."""


class NotACode(ArithTruthError):
    """A natural number does not encode a syntax object."""


class NotSemirelational(ArithTruthError):
    """A predicate is applied to something other than a bare variable."""


class NotArithmetical(ArithTruthError):
    """A pure arithmetical formula was required."""


class NotSentence(ArithTruthError):
    """A sentence (formula without free variables) was required."""


class ArityError(ArithTruthError):
    """Wrong number of free variables or tuple components."""


class MissingBinding(ArithTruthError):
    """A free variable has no value in the evaluation environment."""


class ShapeError(ArithTruthError):
    """A formula does not have the shape produced by the formula factory."""


class ParseError(ArithTruthError):
    """Malformed formula text."""
