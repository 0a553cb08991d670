"""Exception hierarchy shared by every cgring module."""


class CGError(Exception):
    """Base class for all errors raised by cgring."""


class InconsistentError(CGError):
    """A linear system or derivation step has no (admissible) solution."""


class UnderdeterminedError(CGError):
    """A linear system has more than one solution."""


class NonSquareError(CGError, ValueError):
    pass


class DimensionMismatchError(CGError):
    """A graded slice does not have the expected dimension."""


class DegreeOutOfRangeError(CGError, ValueError):
    pass


class UnsupportedRankError(CGError, ValueError):
    pass


class UnknownLabelError(CGError, KeyError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self):
        return f"unknown Schubert label {self.label!r}"


class UnknownScenarioError(CGError, KeyError):
    def __init__(self, scenario_id):
        super().__init__(scenario_id)
        self.scenario_id = scenario_id

    def __str__(self):
        return f"unknown scenario {self.scenario_id!r}"


class DataFileError(CGError, ValueError):
    """A shipped or user supplied data file is missing or malformed."""

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason
