"""Exception hierarchy.

Every error carries a module-qualified ``code`` which the CLI prints and
uses to pick an exit status.
"""

from __future__ import annotations


class AugFiberError(Exception):
    code = "augfiber.Error"


class DiagramError(AugFiberError):
    code = "diagram.Error"


class MalformedCode(DiagramError):
    code = "diagram.MalformedCode"


class NonClosing(DiagramError):
    code = "diagram.NonClosing"


class NotSphere(DiagramError):
    code = "diagram.NotSphere"


class NotTwoColorable(DiagramError):
    code = "diagram.NotTwoColorable"


class OddTwistRegion(AugFiberError):
    code = "augment.OddTwistRegion"


class NotFlat(AugFiberError):
    code = "model.NotFlat"


class NonOrientableSurface(AugFiberError):
    code = "model.NonOrientableSurface"


class InvalidALD(AugFiberError):
    code = "model.InvalidALD"


class HasACircles(AugFiberError):
    code = "stallings.HasACircles"


class EmptyDiagram(AugFiberError):
    code = "stallings.EmptyDiagram"


class RankMismatch(AugFiberError):
    code = "stallings.RankMismatch"


class InconsistentInput(AugFiberError):
    code = "stallings.InconsistentInput"


class BudgetExceeded(AugFiberError):
    code = "stallings.BudgetExceeded"


class NotATree(AugFiberError):
    code = "moves.NotATree"


class NotACircleOfTypeA(AugFiberError):
    code = "moves.NotACircleOfTypeA"


class NoBridgingACircle(AugFiberError):
    code = "moves.NoBridgingACircle"


class NotLocallyAlternating(AugFiberError):
    code = "moves.NotLocallyAlternating"
