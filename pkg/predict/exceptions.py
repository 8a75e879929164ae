"""
Exceptions for intensity products
"""

from core.exceptions import DataError, NumericalError


class IntensityDomainError(DataError):
    """Raised for negative intensities or incomplete unit assignments"""
    pass


class MissingEffectError(NumericalError):
    """Raised when a product needs posterior quantities the fit does not have"""
    pass
