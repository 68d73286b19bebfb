"""Exception hierarchy shared by every qlaurent module."""


class QLaurentError(Exception):
    """Base class for all errors raised by qlaurent."""


class InadmissibleParameters(QLaurentError, ValueError):
    """Parameters fall outside the domain an operation is defined on."""


class DegenerateParameters(QLaurentError):
    """A denominator factor of a closed form vanishes for these parameters."""


class PoleInSeries(QLaurentError):
    """A denominator Pochhammer factor vanishes before the series terminates."""


class BalanceViolation(QLaurentError):
    """A series expected to be balanced (Saalschützian) is not."""


class InexactDivision(QLaurentError):
    """Laurent polynomial division left a remainder above tolerance."""


class NearSingularPoint(QLaurentError):
    """A weight was evaluated too close to one of its removable singularities."""


class NoConvergence(QLaurentError):
    """Quadrature node doubling exhausted its budget before converging."""


class InsufficientDecay(QLaurentError):
    """A measured error sequence decays slower than the required rate."""


class DegenerateWeight(QLaurentError):
    """A discrete weight has a vanishing denominator."""


class UnsupportedTruncation(DegenerateParameters):
    """The discrete form is requested with t1 t2 = q^-k, which is not covered."""
