"""Exceptions raised by the scan cover library.

Every error carries the exit code the command line maps it to:
2 for an algorithm that does not apply to the instance, 3 for bad input.
"""


class ScanCoverError(Exception):
    exit_code = 3


# Input errors

class ParseError(ScanCoverError):
    pass


class ConfigError(ScanCoverError):
    pass


class InvalidInstance(ScanCoverError):
    pass


class DegenerateEdge(InvalidInstance):
    pass


class NotIncident(ScanCoverError):
    pass


class IncompleteOrder(ScanCoverError):
    pass


class InfeasibleSchedule(ScanCoverError):
    pass


class InvalidTrajectory(ScanCoverError):
    pass


class ImproperColoring(ScanCoverError):
    pass


class CoverViolation(ScanCoverError):
    pass


class MalformedFormula(ScanCoverError):
    pass


class DimensionMismatch(ScanCoverError):
    pass


class TooManyVariables(ScanCoverError):
    pass


# The instance class does not fit the requested algorithm

class InapplicableAlgorithm(ScanCoverError):
    exit_code = 2


class NotBipartite(InapplicableAlgorithm):
    pass


class NotBipartitePartition(InapplicableAlgorithm):
    pass


class NotComplete(InapplicableAlgorithm):
    pass


class NotAStar(InapplicableAlgorithm):
    pass


class NotATree(InapplicableAlgorithm):
    pass


class TooLarge(InapplicableAlgorithm):
    pass


class CostsNotDiscrete(InapplicableAlgorithm):
    pass


class NoSolutionWithin(ScanCoverError):
    def __init__(self, max_steps: int):
        super().__init__(f"no scan cover with at most {max_steps} steps")
        self.max_steps = max_steps


class WrongDimension(InapplicableAlgorithm):
    pass
