"""Exception types raised across the package."""


class MilnorLatticeError(Exception):
    """Base class for all errors raised by this package."""


class NotQuasiunipotent(MilnorLatticeError):
    def __init__(self, leftover, factors=None):
        super().__init__(f"non-cyclotomic leftover factor {leftover}")
        self.leftover = leftover
        self.factors = factors or {}


class NotUnipotentUpper(MilnorLatticeError):
    pass


class NoIntegralStokes(MilnorLatticeError):
    pass


class DoesNotDescend(MilnorLatticeError):
    pass


class KappaTooLarge(MilnorLatticeError):
    pass


class UnknownFamily(MilnorLatticeError):
    pass


class NotFound(MilnorLatticeError):
    pass


class NotDefinite(MilnorLatticeError):
    pass


class UnsupportedCase(MilnorLatticeError):
    pass


class HypothesesFail(MilnorLatticeError):
    pass


class NoSolution(MilnorLatticeError):
    pass


class CapExceeded(MilnorLatticeError):
    def __init__(self, cap):
        super().__init__(f"closure exceeded cap of {cap} elements")
        self.cap = cap


class NotInvariant(MilnorLatticeError):
    pass


class CongruenceFails(MilnorLatticeError):
    pass


class NotSimpleElliptic(MilnorLatticeError):
    pass


class CatalogIntegrityError(MilnorLatticeError):
    """A catalog constructor failed its own validation."""


class DataUnavailable(MilnorLatticeError):
    """Requested data is not printed in the source and was not supplied."""
