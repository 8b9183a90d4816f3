"""Exception hierarchy shared by all spinstar modules."""


class SpinStarError(Exception):
    """Base class for every error raised by spinstar."""


class NonSquare(SpinStarError, ValueError):
    pass


class NonHermitian(SpinStarError, ValueError):
    pass


class DimensionMismatch(SpinStarError, ValueError):
    pass


class InvalidSector(SpinStarError, ValueError):
    pass


class ScenarioMismatch(SpinStarError, ValueError):
    pass


class TooLarge(SpinStarError, ValueError):
    pass


class NonPositiveTemperature(SpinStarError, ValueError):
    pass


class InvalidState(SpinStarError, ValueError):
    pass


class EmptyTimeGrid(SpinStarError, ValueError):
    pass


class PositivityViolation(SpinStarError, ArithmeticError):
    """A propagated density matrix went negative beyond round-off."""


class ImpureInitialState(SpinStarError, ValueError):
    pass


class MissingGenerators(SpinStarError, ValueError):
    pass


class NonUniformGrid(SpinStarError, ValueError):
    pass


class ConfigParse(SpinStarError, ValueError):
    pass


class CapExceeded(SpinStarError, ValueError):
    pass
