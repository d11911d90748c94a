"""Exception hierarchy shared by every module of the package."""


class AsModuliError(Exception):
    """Base class for all errors raised by asmoduli."""


class NotPrime(AsModuliError, ValueError):
    pass


class DegreeNotDivisible(AsModuliError, ValueError):
    pass


class NoSuchRoot(AsModuliError, ValueError):
    pass


class NotCoprime(AsModuliError, ValueError):
    pass


class RingMismatch(AsModuliError, ValueError):
    pass


class UnknownPuncture(AsModuliError, KeyError):
    pass


class ZeroElement(AsModuliError, ValueError):
    pass


class DimensionMismatch(AsModuliError, ValueError):
    pass


class DependentSeed(AsModuliError, RuntimeError):
    pass


class NotInKernel(AsModuliError, ValueError):
    pass


class LevelExceeded(AsModuliError, ValueError):
    pass


class BudgetExceeded(AsModuliError, RuntimeError):
    pass


class InsufficientPrecision(AsModuliError, ValueError):
    pass


class NoProfile(AsModuliError, ValueError):
    pass


class IndexMismatch(AsModuliError, ValueError):
    pass


class ConfigInvalid(AsModuliError, ValueError):
    pass


class NotAGroup(AsModuliError, ValueError):
    pass
