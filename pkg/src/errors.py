"""Error types raised by the engine.

Every error carries an exit-code class: input errors exit with 2, property
failures (a check that fails with a witness) exit with 1.
"""

from typing import Any, Dict, Optional

INPUT_ERROR = 2
PROPERTY_FAILURE = 1


class EngineError(Exception):
    """Base class for all engine errors."""

    code = INPUT_ERROR

    def __init__(self, message: str = "", witness: Optional[Dict[str, Any]] = None):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.witness = witness or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'witness': self.witness,
        }


class PropertyFailure(EngineError):
    """A checked property does not hold; the witness says where."""

    code = PROPERTY_FAILURE


# simplicial_core

class IdentityViolation(EngineError):
    """A simplicial identity fails on a concrete simplex."""

    def __init__(self, family: str, m: int, i: int, j: int, simplex: int):
        super().__init__(
            f"simplicial identity {family} fails at level {m} (i={i}, j={j}) on simplex {simplex}",
            witness={'family': family, 'm': m, 'i': i, 'j': j, 'simplex': simplex},
        )
        self.family = family
        self.m = m
        self.i = i
        self.j = j
        self.simplex = simplex


class PartialTable(EngineError):
    """A face or degeneracy table is missing entries or points outside its level."""


class BadParams(EngineError):
    """Shape parameters outside their valid range."""


class NonInclusion(EngineError):
    """A map expected to be a levelwise injection is not."""


class NonCommutingSquare(EngineError):
    """The square of a relative lifting problem does not commute."""


class TruncationTooLow(EngineError):
    """Requested data lies above what the stored truncation can provide."""


class IncompatibleTruncations(EngineError):
    """Two inputs cannot be brought to a common truncation."""


class NotComposable(EngineError):
    """Maps or bibundles whose ends do not match."""


# kan_analysis

class LevelOutOfRange(EngineError):
    """A condition was requested at an invalid level or horn index."""


class NotAFibration(PropertyFailure):
    """The map does not satisfy the required fibration conditions."""


class HypothesesNotMet(PropertyFailure):
    """The hypotheses of a construction fail; the witness lists the failing conditions."""


# extensions

class NotASubcomplex(EngineError):
    """The smaller complex is not a simplicial subset of the larger one."""


class BudgetExceeded(EngineError):
    """A search ran out of its node budget before it was exhausted."""

    def __init__(self, message: str = "", partial: Optional[Dict[str, Any]] = None):
        super().__init__(message or "search budget exceeded", witness=partial)
        self.partial = partial or {}


class NotFound(PropertyFailure):
    """An exhaustive search found nothing."""


class ReplayMismatch(PropertyFailure):
    """Replaying a filtration certificate fails at a step."""

    def __init__(self, step: int, message: str = ""):
        super().__init__(message or f"certificate replay fails at step {step}", witness={'step': step})
        self.step = step


class FlavorMismatch(EngineError):
    """The inclusions passed to a join construction have unsupported flavors."""


# discrete_groupoids

class NotACategoryNerve(PropertyFailure):
    """The simplicial set is not the nerve of a category."""


class NotInvariant(EngineError):
    """The base map is not invariant under the action."""


class NotRightPrincipal(PropertyFailure):
    """A bibundle that must be right principal is not."""


class NotOverInterval(EngineError):
    """The colored data does not lie over the interval."""


# colored_bibundles

class BadColorSplit(EngineError):
    """Colour split (i, j) does not match the level."""


class EndsNotGroupoids(PropertyFailure):
    """The ends of a colored simplicial set are not higher groupoids."""


class BadAugmentation(EngineError):
    """The augmented bisimplicial grid is malformed."""


# two_groupoid_calculus

class NotA2Groupoid(PropertyFailure):
    """The input is not a 2-groupoid nerve."""


class CompositionIllDefined(PropertyFailure):
    """Composition on classes depends on representatives."""


class CoherenceFailure(PropertyFailure):
    """A coherence clause of the 3-multiplications fails."""

    def __init__(self, clause: str, message: str = "", witness: Optional[Dict[str, Any]] = None):
        super().__init__(message or f"coherence clause ({clause}) fails", witness=witness)
        self.clause = clause


class IncoherentInput(EngineError):
    """Low-dimensional data plus multiplications do not form a fibration."""


class QuotientDegenerate(PropertyFailure):
    """A quotient construction produced collapsed or missing classes."""


# discrete_differentiation

class StageMissing(EngineError):
    """A jet stage was requested before its predecessor was computed."""


# cli

class ParseError(EngineError):
    """A document could not be parsed."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}", witness={'line': line, 'column': column})
        self.line = line
        self.column = column


class VersionMismatch(EngineError):
    """A document's format version is not compatible with the engine."""


class UnknownCommand(EngineError):
    """The CLI command is not recognised."""


class SizeOutOfBounds(EngineError):
    """Corpus sizes exceed the configured bounds."""


class InvalidMap(EngineError):
    """Level components do not define a simplicial map."""
