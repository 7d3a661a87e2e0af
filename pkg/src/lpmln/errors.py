"""Exception hierarchy shared by all modules."""


class LpmlnError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(LpmlnError):
    """An atom, constant or domain is not part of the declared signature."""


class ParseError(LpmlnError):
    """Syntax error with a source position."""

    def __init__(self, message, filename="<string>", line=0, column=0, expected=()):
        self.message = message
        self.filename = filename
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        super().__init__(f"{filename}:{line}:{column}: {message}")


class ValidationError(LpmlnError):
    """A structurally parsed program violates a semantic constraint."""

    def __init__(self, message, filename="<string>", line=0, column=0):
        self.message = message
        self.filename = filename
        self.line = line
        self.column = column
        super().__init__(f"{filename}:{line}:{column}: {message}")


class GroundingExplosion(LpmlnError):
    """Grounding would produce more instances than the configured cap."""


class EmptyDomain(LpmlnError):
    """A variable ranges over an empty domain."""


class SubsetExplosion(LpmlnError):
    """Minimality check would enumerate too many subsets."""


class UniverseExplosion(LpmlnError):
    """Interpretation enumeration exceeds the atom cap."""


class LoopExplosion(LpmlnError):
    """Loop enumeration exceeds the configured cap."""


class NoHardConsistentModel(LpmlnError):
    """SM'[Pi] is empty: no stable model satisfies every hard rule."""


class ConditionHasZeroProbability(LpmlnError):
    """Conditional probability requested on a zero-probability condition."""


class NoStableModel(LpmlnError):
    """The plain ASP part of a program has no stable model."""


class NotTight(LpmlnError):
    """Completion requested for a program whose dependency graph has cycles."""


class NotWellDefined(LpmlnError):
    """A ProbLog total choice does not lead to exactly one stable model."""

    def __init__(self, total_choice, count):
        self.total_choice = frozenset(total_choice)
        self.count = count
        atoms = ", ".join(sorted(str(a) for a in total_choice)) or "{}"
        super().__init__(
            f"total choice {{{atoms}}} yields {count} stable models (expected 1)"
        )


class ZeroProbabilityDeclared(LpmlnError):
    """Direct multi-valued evaluation requires every declared probability > 0."""


class EmptySmDoublePrime(LpmlnError):
    """SM''[Pi] is empty; use the translated-program route instead."""


class Inconsistent(LpmlnError):
    """A P-log program has no possible world."""


class AllZeroMeasure(LpmlnError):
    """Every possible world has unnormalized measure zero."""


class DefaultProbabilityUndefined(LpmlnError):
    """Default probability has a zero denominator while assigned mass < 1."""


class PropertyViolation(LpmlnError):
    """A randomized self-test property failed; carries the counterexample."""

    def __init__(self, prop, message, counterexample=""):
        self.prop = prop
        self.counterexample = counterexample
        super().__init__(f"{prop}: {message}")
