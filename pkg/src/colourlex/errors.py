"""Exception hierarchy.

Every error raised on bad input derives from :class:`InputError`; the CLI maps
those to exit status 1 and prints the class name as the error category.
"""


class ColourLexError(Exception):
    """Base class for all toolkit errors."""


class InputError(ColourLexError, ValueError):
    pass


class InvariantViolation(ColourLexError):
    """An internal consistency check failed (exit status 2)."""


# annotate
class NoNearSynonym(InputError):
    pass


class InsufficientDistractors(InputError):
    pass


class UnknownSense(InputError, KeyError):
    pass


class EmptyLexicon(InputError):
    pass


class EmptyInput(InputError):
    pass


# categories
class DegenerateInput(InputError):
    pass


# signatures
class NoOverlap(InputError):
    pass


class UnknownLabel(InputError, KeyError):
    pass


# corpus
class FormatError(InputError):
    pass


class MissingAuxiliary(InputError):
    pass


class MissingPrediction(InputError):
    pass


# wordnet
class ParseError(InputError):
    def __init__(self, message, path=None, lineno=None):
        where = ""
        if path is not None:
            where = f"{path}:{lineno}: " if lineno is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.lineno = lineno


class DanglingPointer(ParseError):
    pass


class UnknownSynset(InputError, KeyError):
    pass


class MeasureUnavailable(InputError):
    pass
