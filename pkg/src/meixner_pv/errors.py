"""Exception hierarchy shared by every module of the package."""


class MeixnerPVError(Exception):
    """Base class for all errors raised by meixner_pv."""


class DomainError(MeixnerPVError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """A function was evaluated at (or numerically at) one of its poles."""


class ValidationError(MeixnerPVError, ValueError):
    """Model parameters violate the positivity conditions of the measure."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid parameters: " + ", ".join(self.violations))


class SingularityError(MeixnerPVError, ArithmeticError):
    """Evaluation at a fixed singularity of an equation (y = 0, y = 1, t = 0, ...)."""


class DenominatorZero(SingularityError, ZeroDivisionError):
    """A rational transformation hit a vanishing denominator."""


class SignDomain(DomainError):
    """Painleve V parameters do not admit real square roots for a Backlund map."""


class DegenerateM(MeixnerPVError, ArithmeticError):
    """The mixing constant of a linear combination is 0 or 1."""


class IndeterminateStep(MeixnerPVError, ArithmeticError):
    """A forward step of the discrete system is 0/0."""


class StepSizeUnderflow(MeixnerPVError, ArithmeticError):
    """The adaptive integrator could not meet its tolerance."""


class PrecisionExhausted(MeixnerPVError, ArithmeticError):
    """Too few significant digits remain to report further coefficients."""
