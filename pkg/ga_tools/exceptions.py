"""
Exception hierarchy shared by the ga_tools package and the CLI
"""


class WorkbenchError(Exception):
    """Base class for every error raised on purpose by the workbench"""


class DimensionError(WorkbenchError, ValueError):
    """Genotype length does not match the problem dimension"""


class ParameterError(WorkbenchError, ValueError):
    """A numeric parameter is outside its admissible range"""


class ContractError(WorkbenchError, ValueError):
    """An operation was called on inputs violating its precondition"""


class ConfigurationError(WorkbenchError, ValueError):
    """Operators, partition and problem do not fit together"""


class ScalingAbort(WorkbenchError, RuntimeError):
    """A scaling study cannot produce a regression"""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class TrialError(WorkbenchError, RuntimeError):
    """One or more trials of an experiment failed; rows carries the per-trial records"""

    def __init__(self, message, rows=None):
        super().__init__(message)
        self.rows = rows or []
