"""Exception hierarchy.

Input problems derive from ``ValueError``; failures of the numerics derive from
:class:`NumericalError` so the CLI can map them to exit code 2.
"""


class SpinBerryError(Exception):
    pass


class NumericalError(SpinBerryError):
    pass


class NotHermitian(SpinBerryError, ValueError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class InvalidSpin(SpinBerryError, ValueError):
    pass


class DimMismatch(SpinBerryError, ValueError):
    pass


class InvalidSpec(SpinBerryError, ValueError):
    pass


class TooFewSamples(SpinBerryError, ValueError):
    pass


class DegenerateBand(SpinBerryError, ValueError):
    pass


class UnsupportedKind(SpinBerryError, ValueError):
    pass


class TrackingFailure(NumericalError):
    pass


class BlockInstability(NumericalError):
    pass


class NotProjectionEigenstate(NumericalError):
    pass


class NonAdiabatic(NumericalError):
    pass
