"""
Exceptions for model specification and assembly
"""

from core.config_file import ConfigParseError


class SpecParseError(ConfigParseError):
    """Raised for an invalid [model] section; carries the offending line"""
    pass
