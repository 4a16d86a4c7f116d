"""Exception types shared across the package.

Input validation failures raise plain ``ValueError``.  The classes here mark
the two other failure modes callers may want to handle separately: blowing a
configured resource guard, and a numerical procedure not reaching its
tolerance.  The command-line runner maps them to distinct exit codes.
"""


class ResourceLimitError(RuntimeError):
    """A configured cap (path budget, qubit cap, ...) was exceeded."""


class NumericError(RuntimeError):
    """A numerical procedure failed to reach its required tolerance."""


class FitError(NumericError):
    """Not enough usable data to fit a light-cone velocity."""
