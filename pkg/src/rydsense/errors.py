"""Exception hierarchy shared by all modules.

``ConfigurationError`` marks bad user input (CLI exit code 2); every other
``ModelError`` is a runtime failure of the model itself (exit code 3).
"""


class ModelError(Exception):
    pass


class ConfigurationError(ModelError, ValueError):
    pass


class DegenerateParametersError(ModelError):
    pass


class NotAPeakError(ModelError):
    pass


class BracketError(ModelError):
    pass


class UnresolvableParameterError(ModelError):
    pass
