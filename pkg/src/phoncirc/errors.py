"""Exception hierarchy shared across the package.

Two broad families matter to callers (and to the CLI exit codes):
input/validation problems (:class:`DomainError`, :class:`OutOfRange`,
:class:`DimensionMismatch`, :class:`PortMismatch`) and computation
failures discovered mid-run (:class:`SingularLoop`, :class:`NotUnitary`,
:class:`IntegrationError`, ...).
"""


class PhoncircError(Exception):
    """Base class for all package-specific errors."""


class DomainError(PhoncircError):
    """A parameter lies outside the physical/mathematical domain of an operation."""


class NonPhysicalDeformation(PhoncircError):
    """Deformation gradient with non-positive Jacobian (inverted element)."""


class PortMismatch(PhoncircError):
    """Series composition of systems with different port counts."""


class SingularLoop(PhoncircError):
    """Feedback elimination hit a unit-gain algebraic loop (1 - S[out, in] = 0)."""


class ProfileOutOfRange(PhoncircError):
    """Coupling-to-phase conversion asked for arccos of an argument outside [-1, 1]."""


class InfeasibleCap(PhoncircError):
    """No slope-capped sampling can bring the phase near pi within the horizon."""


class IntegrationError(PhoncircError):
    """Time integration failed (step-size underflow or non-finite state)."""


class HistoryUnderrun(PhoncircError):
    """Delay buffer cannot serve a lookup that far in the past."""


class NotUnitary(PhoncircError):
    """Matrix expected to be unitary is not, within tolerance."""


class DimensionMismatch(PhoncircError):
    """Vector/matrix dimensions incompatible with the mesh or operation."""


class OutOfRange(PhoncircError):
    """Interpolation query outside the calibration table."""
