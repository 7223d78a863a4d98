class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """Quadrature refinement hit its panel cap before meeting the tolerance."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
