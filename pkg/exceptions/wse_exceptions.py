class WseException(Exception):
    """Base exception for WSE security-analysis operations."""
    pass

class ValidationException(WseException):
    """Exception raised when a parameter lies outside its declared domain."""
    pass

class DimensionMismatchException(ValidationException):
    """Exception raised when operator or state dimensions do not fit together."""
    pass

class HermiticityException(ValidationException):
    """Exception raised when an operator is not Hermitian within tolerance."""
    pass

class StateException(ValidationException):
    """Exception raised when a matrix is not a valid density matrix."""
    pass

class DistributionException(ValidationException):
    """Exception raised when a probability table is malformed."""
    pass

class SizeGuardException(WseException):
    """Exception raised when an exact oracle would exceed its size guard."""
    pass

class StrategyContractException(WseException):
    """Exception raised when an attack strategy returns an invalid round law."""
    pass

class ExportException(WseException):
    """Exception raised when there's an error exporting data."""
    pass

class VerificationException(WseException):
    """Exception raised when a verification check fails or a bound is violated."""
    pass
