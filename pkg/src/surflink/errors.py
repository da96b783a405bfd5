"""Exception hierarchy.

``NumericFault`` subclasses signal that a computation could not be carried
out reliably (the CLI maps them to exit status 3); ``ConfigError`` is raised
for invalid user input (exit status 2).
"""


class SurflinkError(Exception):
    pass


class ConfigError(SurflinkError, ValueError):
    pass


class NumericFault(SurflinkError):
    pass


# geometry layer
class CenterOnPath(NumericFault):
    pass


class RefinementExhausted(NumericFault):
    pass


class DegenerateCrossing(NumericFault):
    pass


# isotopies
class IntegratorBlowup(NumericFault):
    pass


class InverseUnavailable(NumericFault):
    pass


class ContinuationAmbiguous(NumericFault):
    pass


class NotFixed(SurflinkError, ValueError):
    pass


class DegenerateMobius(NumericFault):
    pass


class UnknownZooEntry(ConfigError):
    pass


# recurrence
class NoReturn(NumericFault):
    pass


class NotConverged(NumericFault):
    pass


# linking
class Collision(NumericFault):
    pass


class PathThroughPuncture(NumericFault):
    pass


class IdentityMismatch(NumericFault):
    pass


# action
class TooManyDivergentSamples(NumericFault):
    pass


class CoboundaryViolation(NumericFault):
    pass


class RotationVectorNonzero(SurflinkError, ValueError):
    pass


class LiftDependence(NumericFault):
    pass


class NonContractibleLoop(SurflinkError, ValueError):
    pass


# disk chains
class Inconclusive(NumericFault):
    pass


class HypothesisUnverified(SurflinkError, ValueError):
    pass
