"""Exception types shared across the library.

Plain invalid arguments (dimension mismatches, malformed partitions, bad
indices) raise ValueError; the classes below mark conditions the command-line
front end maps to distinct exit codes.
"""


class DimensionCapError(Exception):
    """Requested construction exceeds the dense-matrix size guard."""


class DegenerateScenarioError(Exception):
    """A hypothesis pair cannot be formed because one side has zero prior."""


class NumericalCheckError(Exception):
    """An internal numerical consistency check failed."""


class PauliViolationError(Exception):
    """A fermionic input left no output configuration with nonzero amplitude."""
