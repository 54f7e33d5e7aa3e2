"""Exception hierarchy shared by every module in the package.

Two failure classes are distinguished because the command line maps them
to different exit codes: problems with the *data* (e-values, strategy
files) are :class:`ValidationError`, problems with *settings* (levels,
tolerances, scenario parameters, replication counts) are
:class:`ConfigError`.
"""

__all__ = ["EvalcombError", "ValidationError", "ConfigError"]


class EvalcombError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EvalcombError):
    """Input data is malformed: negative or non-numeric e-values,
    wrong-length betting sequences, inputs outside an operation's
    documented domain."""


class ConfigError(EvalcombError):
    """A setting is out of range: alpha outside (0, 1), nonpositive
    tolerance or replication count, malformed scenario parameters."""
