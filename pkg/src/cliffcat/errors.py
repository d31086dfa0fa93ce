"""Exception hierarchy shared by all cliffcat modules."""


class CliffcatError(Exception):
    """Base class for every error raised by the library."""


class InvalidGroup(CliffcatError):
    pass


class NotNormal(CliffcatError):
    pass


class TooLarge(CliffcatError):
    """An enumeration would exceed its configured bound."""


class DegreeZero(CliffcatError):
    pass


class InvariantBroken(CliffcatError):
    """A constructed object failed an invariant that should hold by construction."""


class CategoryMismatch(CliffcatError):
    pass


class ContextMismatch(CliffcatError):
    pass


class LiftDependence(CliffcatError):
    pass


class ConsistencyFailure(CliffcatError):
    """A checked clause of the Clifford correspondence failed."""


class NotCocycle(CliffcatError):
    pass


class Obstructed(CliffcatError):
    pass


class GroupTheoreticalCase(CliffcatError):
    pass


class InputError(CliffcatError):
    """Malformed or invariant-violating user input (CLI exit code 1)."""
